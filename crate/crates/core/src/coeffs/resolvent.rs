//! Resolvent and Cayley forms.
//!
//! `(1 - 2i a n.J)^-1 = sum_k B_k(a) (2i n.J)^k` with
//! `B_k(a) = a^k Trunc_{2j-k}[D](a) / D(a)`, where
//! `D(a) = det(1 - 2i a n.J) = prod_{m} (1 - 2i a m)` collapses to a product
//! of `(1 + (2m)^2 a^2)` over the positive eigenvalues `m`. The Cayley
//! coefficients follow as `C_0 = 2 B_0 - 1`, `C_k = 2 B_k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::generator_dd;
use crate::dd::{CDd, Dd, DdMatrix};
use crate::error::{Error, Result};
use crate::series::RationalSeries;
use crate::spin::{Axis, SpinLabel, SpinMatrix};

/// Exact expansion of `det(1 - 2i a n.J)`; only even powers of `a` occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetPolynomial {
    pub j: SpinLabel,
    /// `even_coeffs[m]` multiplies `a^(2m)`.
    pub even_coeffs: Vec<BigInt>,
}

impl DetPolynomial {
    /// The same polynomial with odd powers filled in as zeros.
    pub fn as_series(&self) -> RationalSeries {
        let mut coeffs = vec![BigRational::zero(); 2 * self.even_coeffs.len() - 1];
        for (m, c) in self.even_coeffs.iter().enumerate() {
            coeffs[2 * m] = BigRational::from_integer(c.clone());
        }
        RationalSeries::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        2 * (self.even_coeffs.len() - 1)
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        let a2 = Dd::from(alpha).sqr();
        let v = self
            .even_coeffs
            .iter()
            .rev()
            .fold(Dd::ZERO, |acc, c| acc * a2 + Dd::from_rational(&BigRational::from_integer(c.clone())))
            .to_f64();
        if v.is_finite() {
            return v;
        }
        // Double-double products turn an overflow into NaN; plain Horner
        // over positive coefficients saturates to +inf instead.
        let a2 = alpha * alpha;
        let mut coeffs = self.even_coeffs.iter().rev().map(|c| c.to_f64().unwrap_or(f64::INFINITY));
        let top = coeffs.next().unwrap_or(0.0);
        coeffs.fold(top, |acc, c| acc * a2 + c)
    }
}

pub fn det_polynomial(j: SpinLabel) -> DetPolynomial {
    let mut poly = vec![BigInt::one()];
    // Positive eigenvalues m of n.J pair with -m: (1 - 2iam)(1 + 2iam) = 1 + (2m)^2 a^2.
    let mut two_m = j.two_j() as i64;
    while two_m > 0 {
        let w = BigInt::from(two_m * two_m);
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c * &w;
        }
        poly = next;
        two_m -= 2;
    }
    DetPolynomial { j, even_coeffs: poly }
}

/// `|t(2j+2, 2j+2-2m)|` for `m = 0..=j`, read off the determinant as
/// `even_coeffs[m] / 4^m`. Defined for integer `j` only.
pub fn central_factorial_magnitudes(j: SpinLabel) -> Result<Vec<BigInt>> {
    if !j.is_integer() {
        return Err(Error::HalfIntegerSpin(j.two_j()));
    }
    let det = det_polynomial(j);
    let mut four_pow = BigInt::one();
    let mut out = Vec::with_capacity(det.even_coeffs.len());
    for c in &det.even_coeffs {
        debug_assert!((c % &four_pow).is_zero());
        out.push(c / &four_pow);
        four_pow *= 4;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CayleyCoefficientSet {
    pub j: SpinLabel,
    pub alpha: f64,
    /// `B_k(alpha)` of the resolvent expansion.
    pub resolvent_values: Vec<f64>,
    /// `C_k(alpha)` of the Cayley expansion.
    pub cayley_values: Vec<f64>,
}

impl CayleyCoefficientSet {
    fn from_resolvent(j: SpinLabel, alpha: f64, resolvent_values: Vec<f64>) -> Self {
        let cayley_values = resolvent_values
            .iter()
            .enumerate()
            .map(|(k, &b)| if k == 0 { 2.0 * b - 1.0 } else { 2.0 * b })
            .collect();
        CayleyCoefficientSet {
            j,
            alpha,
            resolvent_values,
            cayley_values,
        }
    }
}

/// Determinant of one spin, kept in double-double for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ResolventExpansion {
    det: DetPolynomial,
    det_dd: Vec<Dd>,
}

impl ResolventExpansion {
    pub fn new(j: SpinLabel) -> Self {
        let det = det_polynomial(j);
        let det_dd = det
            .as_series()
            .coeffs()
            .iter()
            .map(Dd::from_rational)
            .collect();
        ResolventExpansion { det, det_dd }
    }

    pub fn spin(&self) -> SpinLabel {
        self.det.j
    }

    pub fn det(&self) -> &DetPolynomial {
        &self.det
    }

    fn resolvent_dd(&self, alpha: f64) -> Vec<Dd> {
        let two_j = self.det.j.two_j() as usize;
        let a = Dd::from(alpha);

        if alpha.abs() <= 1.0 {
            // partial[n] = Trunc_n[D](a)
            let mut partial = Vec::with_capacity(self.det_dd.len());
            let mut sum = Dd::ZERO;
            let mut pow = Dd::ONE;
            for &c in &self.det_dd {
                sum += c * pow;
                partial.push(sum);
                pow = pow * a;
            }
            let full = sum;

            let mut a_pow = Dd::ONE;
            return (0..=two_j)
                .map(|k| {
                    let b = a_pow * partial[two_j - k] / full;
                    a_pow = a_pow * a;
                    b
                })
                .collect();
        }

        // With u = 1/a, a^-n Trunc_n[D](a) = R_n(u) = sum_{m<=n} c_m u^(n-m),
        // so B_k = u^(deg D - 2j) R_{2j-k}(u) / R_{deg D}(u) and no power of
        // a is ever formed. deg D exceeds 2j by one for half-integer j.
        let u = Dd::ONE / a;
        let mut reversed = Vec::with_capacity(self.det_dd.len());
        let mut acc = Dd::ZERO;
        for &c in &self.det_dd {
            acc = acc * u + c;
            reversed.push(acc);
        }
        let degree = reversed.len() - 1;
        let full = reversed[degree] / u.powi((degree - two_j) as u32);
        (0..=two_j).map(|k| reversed[two_j - k] / full).collect()
    }

    pub fn coefficients(&self, alpha: f64) -> CayleyCoefficientSet {
        let values = self.resolvent_dd(alpha).into_iter().map(Dd::to_f64).collect();
        CayleyCoefficientSet::from_resolvent(self.det.j, alpha, values)
    }

    /// `sum_k B_k (2i n.J)^k`, the polynomial form of `(1 - 2i a n.J)^-1`.
    pub fn resolvent_polynomial(&self, alpha: f64, axis: &Axis) -> SpinMatrix {
        let coeffs: Vec<CDd> = self.resolvent_dd(alpha).into_iter().map(CDd::real).collect();
        DdMatrix::polynomial(&coeffs, &generator_dd(self.det.j, axis)).to_spin_matrix()
    }

    /// `sum_k C_k (2i n.J)^k`, the polynomial form of
    /// `(1 + 2i a n.J)(1 - 2i a n.J)^-1`.
    pub fn cayley_polynomial(&self, alpha: f64, axis: &Axis) -> SpinMatrix {
        let two = Dd::from(2.0);
        let coeffs: Vec<CDd> = self
            .resolvent_dd(alpha)
            .into_iter()
            .enumerate()
            .map(|(k, b)| CDd::real(if k == 0 { two * b - Dd::ONE } else { two * b }))
            .collect();
        DdMatrix::polynomial(&coeffs, &generator_dd(self.det.j, axis)).to_spin_matrix()
    }
}

pub fn resolvent_coefficients(j: SpinLabel, alpha: f64) -> CayleyCoefficientSet {
    ResolventExpansion::new(j).coefficients(alpha)
}

pub fn resolvent_polynomial(j: SpinLabel, alpha: f64, axis: &Axis) -> SpinMatrix {
    ResolventExpansion::new(j).resolvent_polynomial(alpha, axis)
}

pub fn cayley_polynomial(j: SpinLabel, alpha: f64, axis: &Axis) -> SpinMatrix {
    ResolventExpansion::new(j).cayley_polynomial(alpha, axis)
}
