//! Exponential form `exp(i theta n.J) = sum_k A_k(theta)/k! (2i n.J)^k`.
//!
//! `A_k = sin^k(theta/2) cos^eps(theta/2) P_k(sin^2(theta/2))` where `P_k`
//! is the Taylor polynomial of `(1-x)^(-eps/2) (arcsin(sqrt x)/sqrt x)^k`
//! through order `floor(j - k/2)` and `eps` is the parity of `2j - k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::generator_dd;
use crate::dd::{CDd, Dd, DdMatrix};
use crate::error::{Error, Result};
use crate::series::{arcsin_ratio_series, inv_sqrt_one_minus_series, mul_trunc, RationalSeries};
use crate::spin::{Axis, SpinLabel, SpinMatrix};

/// Parity of `2j - k`: 0 for even, 1 for odd. Requires `k <= 2j`.
pub fn epsilon(j: SpinLabel, k: usize) -> u32 {
    debug_assert!(k <= j.two_j() as usize);
    ((j.two_j() as i64 - k as i64).rem_euclid(2)) as u32
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfzCoefficientSet {
    pub j: SpinLabel,
    pub theta: f64,
    /// `values[k] = A_k(theta)`
    pub values: Vec<f64>,
}

/// Exact series for every `k` of one spin, ready to evaluate at any angle.
#[derive(Debug, Clone)]
pub struct CfzExpansion {
    j: SpinLabel,
    series: Vec<RationalSeries>,
    eps: Vec<u32>,
    series_dd: Vec<Vec<Dd>>,
    inv_factorial: Vec<Dd>,
}

impl CfzExpansion {
    pub fn new(j: SpinLabel) -> Self {
        let two_j = j.two_j() as usize;
        let arcsin = arcsin_ratio_series(two_j / 2);
        let inv_sqrt = inv_sqrt_one_minus_series(two_j / 2);

        let mut series = Vec::with_capacity(two_j + 1);
        let mut eps = Vec::with_capacity(two_j + 1);
        let mut inv_factorial = Vec::with_capacity(two_j + 1);
        let mut fact = BigInt::one();
        // arcsin^k, built one factor at a time; the truncation order only
        // shrinks with k, so each step may truncate to the current order.
        let mut power = RationalSeries::one(two_j / 2);
        for k in 0..=two_j {
            if k > 0 {
                fact *= k;
            }
            inv_factorial.push(Dd::from_rational(&BigRational::new(BigInt::one(), fact.clone())));

            let e = epsilon(j, k);
            // floor(j - k/2) = floor((2j - k) / 2)
            let order = (two_j - k) / 2;
            if k > 0 {
                power = mul_trunc(&power, &arcsin, order);
            }
            let p = if e == 1 {
                mul_trunc(&inv_sqrt, &power, order)
            } else {
                power.trunc(order)
            };
            series.push(p);
            eps.push(e);
        }
        let series_dd = series
            .iter()
            .map(|s| s.coeffs().iter().map(Dd::from_rational).collect())
            .collect();
        CfzExpansion {
            j,
            series,
            eps,
            series_dd,
            inv_factorial,
        }
    }

    pub fn spin(&self) -> SpinLabel {
        self.j
    }

    /// The truncated polynomial `P_k` in `x = sin^2(theta/2)`.
    pub fn series(&self, k: usize) -> Result<&RationalSeries> {
        self.series.get(k).ok_or(Error::IndexOutOfRange {
            k,
            two_j: self.j.two_j(),
        })
    }

    fn coefficient_dd(&self, k: usize, sin: Dd, cos: Dd) -> Dd {
        let x = sin.sqr();
        let p = self.series_dd[k]
            .iter()
            .rev()
            .fold(Dd::ZERO, |acc, &c| acc * x + c);
        let mut a = sin.powi(k as u32) * p;
        if self.eps[k] == 1 {
            a = a * cos;
        }
        a
    }

    fn half_angle(theta: f64) -> (Dd, Dd) {
        Dd::sin_cos(theta / 2.0)
    }

    pub fn coefficient(&self, k: usize, theta: f64) -> Result<f64> {
        if k > self.j.two_j() as usize {
            return Err(Error::IndexOutOfRange {
                k,
                two_j: self.j.two_j(),
            });
        }
        let (s, c) = Self::half_angle(theta);
        Ok(self.coefficient_dd(k, s, c).to_f64())
    }

    pub fn coefficients(&self, theta: f64) -> CfzCoefficientSet {
        let (s, c) = Self::half_angle(theta);
        let values = (0..self.series.len())
            .map(|k| self.coefficient_dd(k, s, c).to_f64())
            .collect();
        CfzCoefficientSet {
            j: self.j,
            theta,
            values,
        }
    }

    /// `sum_k A_k/k! (2i n.J)^k`, evaluated by Horner's rule.
    pub fn polynomial(&self, theta: f64, axis: &Axis) -> SpinMatrix {
        let (s, c) = Self::half_angle(theta);
        let coeffs: Vec<CDd> = (0..self.series.len())
            .map(|k| CDd::real(self.coefficient_dd(k, s, c) * self.inv_factorial[k]))
            .collect();
        DdMatrix::polynomial(&coeffs, &generator_dd(self.j, axis)).to_spin_matrix()
    }
}

pub fn cfz_coefficient(j: SpinLabel, k: usize, theta: f64) -> Result<f64> {
    if k > j.two_j() as usize {
        return Err(Error::IndexOutOfRange { k, two_j: j.two_j() });
    }
    CfzExpansion::new(j).coefficient(k, theta)
}

pub fn cfz_polynomial(j: SpinLabel, theta: f64, axis: &Axis) -> SpinMatrix {
    CfzExpansion::new(j).polynomial(theta, axis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::max_abs;
    use crate::spin::build_j3;
    use num_complex::Complex64;

    #[test]
    fn epsilon_parity() {
        assert_eq!(epsilon(SpinLabel::from_two_j(1), 0), 1);
        assert_eq!(epsilon(SpinLabel::from_two_j(2), 0), 0);
        assert_eq!(epsilon(SpinLabel::from_two_j(3), 2), 1);
        assert_eq!(epsilon(SpinLabel::from_two_j(3), 3), 0);
    }

    #[test]
    fn spin_half_coefficients() {
        let j = SpinLabel::from_two_j(1);
        for &theta in &[0.0, 0.4, 1.0, 2.5, 3.1, 5.0, 9.0, 12.0] {
            let set = CfzExpansion::new(j).coefficients(theta);
            assert!((set.values[0] - (theta / 2.0).cos()).abs() < 1e-15);
            assert!((set.values[1] - (theta / 2.0).sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_at_zero_angle() {
        for two_j in 0..12 {
            let set = CfzExpansion::new(SpinLabel::from_two_j(two_j)).coefficients(0.0);
            assert_eq!(set.values[0], 1.0);
            assert!(set.values[1..].iter().all(|&v| v == 0.0));
        }
        let u = cfz_polynomial(SpinLabel::from_two_j(4), 0.0, &Axis::new(1.0, 1.0, 0.0).unwrap());
        assert!(max_abs(&(u - SpinMatrix::identity(5, 5))) < 1e-15);
    }

    #[test]
    fn spin_one_closed_forms() {
        let j = SpinLabel::from_two_j(2);
        let exp = CfzExpansion::new(j);
        let theta = 1.1f64;
        let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
        let set = exp.coefficients(theta);
        assert!((set.values[1] - s * c).abs() < 1e-15);
        assert!((set.values[2] - s * s).abs() < 1e-15);

        // Eigenphase at m = 1: A_0 + A_1 (2i) + A_2 (2i)^2 / 2 = e^{i theta}.
        let phase = Complex64::new(set.values[0], 0.0)
            + Complex64::new(0.0, 2.0) * set.values[1]
            + Complex64::new(-4.0, 0.0) * set.values[2] / 2.0;
        assert!((phase - Complex64::from_polar(1.0, theta)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_generator_gives_phases() {
        for two_j in 0..10u32 {
            let j = SpinLabel::from_two_j(two_j);
            let theta = 0.77;
            let u = cfz_polynomial(j, theta, &Axis::Z);
            let j3 = build_j3(j);
            for a in 0..j.dim() {
                let want = Complex64::from_polar(1.0, theta * j3[(a, a)].re);
                assert!((u[(a, a)] - want).norm() < 1e-14, "two_j={two_j} a={a}");
            }
        }
    }

    #[test]
    fn out_of_range_index() {
        assert_eq!(
            cfz_coefficient(SpinLabel::from_two_j(2), 3, 0.1),
            Err(Error::IndexOutOfRange { k: 3, two_j: 2 })
        );
    }

    #[test]
    fn series_match_direct_construction() {
        use crate::series::pow_trunc;
        for two_j in 0..=14u32 {
            let j = SpinLabel::from_two_j(two_j);
            let exp = CfzExpansion::new(j);
            let half = two_j as usize / 2;
            let (arcsin, inv_sqrt) = (arcsin_ratio_series(half), inv_sqrt_one_minus_series(half));
            for k in 0..=two_j as usize {
                let order = (two_j as usize - k) / 2;
                let mut want = pow_trunc(&arcsin, k as u32, order);
                if epsilon(j, k) == 1 {
                    want = mul_trunc(&inv_sqrt, &want, order);
                }
                assert_eq!(exp.series(k).unwrap(), &want, "two_j={two_j} k={k}");
            }
        }
    }
}
