//! Double-double arithmetic (about 106 significant bits) for the final
//! evaluation of the coefficient polynomials.
//!
//! The monomial-basis spin polynomials cancel heavily: at `2j = 25` the sum
//! `sum_k |c_k| (2j)^k` reaches 1e11 while the result has unit size, so a
//! plain `f64` Horner loop loses about eleven digits. Carrying the
//! evaluation in double-double keeps the rounding floor near 1e-21.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::spin::SpinMatrix;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const FRAC_PI_2: Dd = Dd {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };

    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn powi(self, k: u32) -> Self {
        let mut out = Dd::ONE;
        let mut base = self;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = out * base;
            }
            base = base * base;
            e >>= 1;
        }
        out
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = (self - Dd::new(p, e)).hi;
        let (s, t) = quick_two_sum(x, r / (2.0 * x));
        Dd::new(s, t)
    }

    /// Nearest double-double to an exact rational (relative error ~1e-32).
    pub fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() || hi == 0.0 {
            return Dd::new(hi, 0.0);
        }
        let rest = r - BigRational::from_float(hi).expect("finite");
        let lo = if rest.is_zero() { 0.0 } else { rest.to_f64().unwrap_or(0.0) };
        let (s, t) = quick_two_sum(hi, lo);
        Dd::new(s, t)
    }

    /// `(sin x, cos x)` for an `f64` argument.
    ///
    /// Reduction by a double-double `pi/2` keeps full accuracy for the
    /// moderate arguments used here; accuracy degrades like `|x| * 1e-33`.
    pub fn sin_cos(x: f64) -> (Dd, Dd) {
        let quadrant = (x / Self::FRAC_PI_2.hi).round();
        let r = Dd::from(x) - Self::FRAC_PI_2 * Dd::from(quadrant);
        let r2 = r.sqr();

        // Taylor series on |r| <= pi/4 (+ slack); terms fall below 1e-34
        // well before n = 40.
        let mut sin = r;
        let mut cos = Dd::ONE;
        let mut term_s = r;
        let mut term_c = Dd::ONE;
        for n in 1..40u32 {
            let (a, b) = (2 * n, 2 * n + 1);
            term_c = -(term_c * r2) / Dd::from(((a - 1) * a) as f64);
            term_s = -(term_s * r2) / Dd::from((a * b) as f64);
            cos += term_c;
            sin += term_s;
            if term_c.abs().hi < 1e-35 && term_s.abs().hi < 1e-35 {
                break;
            }
        }
        match (quadrant as i64).rem_euclid(4) {
            0 => (sin, cos),
            1 => (cos, -sin),
            2 => (-sin, -cos),
            _ => (-cos, sin),
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x, 0.0)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (s, e) = quick_two_sum(s, e + f);
        Dd::new(s, e)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (s, t) = quick_two_sum(p, e);
        Dd::new(s, t)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from(q2);
        let q3 = r.hi / b.hi;
        let (s, t) = quick_two_sum(q1, q2);
        Dd::new(s, t) + Dd::from(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub const fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn real(re: Dd) -> Self {
        CDd { re, im: Dd::ZERO }
    }

    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, s: Dd) -> Self {
        CDd::new(self.re * s, self.im * s)
    }

    pub fn conj(self) -> Self {
        CDd::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    /// Multiplication by `i`.
    pub fn mul_i(self) -> Self {
        CDd::new(-self.im, self.re)
    }
}

impl From<Complex64> for CDd {
    fn from(z: Complex64) -> Self {
        CDd::new(z.re.into(), z.im.into())
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd::new(-self.re, -self.im)
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, b: CDd) -> CDd {
        CDd::new(self.re + b.re, self.im + b.im)
    }
}

impl AddAssign for CDd {
    #[inline]
    fn add_assign(&mut self, b: CDd) {
        *self = *self + b;
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd::new(self.re - b.re, self.im - b.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, b: CDd) -> CDd {
        CDd::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let den = b.norm_sqr();
        let num = self * b.conj();
        CDd::new(num.re / den, num.im / den)
    }
}

/// Dense square matrix of complex double-doubles, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DdMatrix {
    n: usize,
    data: Vec<CDd>,
}

impl DdMatrix {
    pub fn zeros(n: usize) -> Self {
        DdMatrix {
            n,
            data: vec![CDd::ZERO; n * n],
        }
    }

    pub fn scalar(n: usize, c: CDd) -> Self {
        let mut m = Self::zeros(n);
        for a in 0..n {
            m[(a, a)] = c;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn from_spin_matrix(m: &SpinMatrix) -> Self {
        assert!(m.is_square());
        let n = m.nrows();
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = m[(r, c)].into();
            }
        }
        out
    }

    pub fn to_spin_matrix(&self) -> SpinMatrix {
        SpinMatrix::from_fn(self.n, self.n, |r, c| self[(r, c)].to_c64())
    }

    pub fn trace(&self) -> CDd {
        (0..self.n).fold(CDd::ZERO, |acc, a| acc + self[(a, a)])
    }

    pub fn add_diag(&mut self, c: CDd) {
        for a in 0..self.n {
            self[(a, a)] += c;
        }
    }

    /// `self * rhs`, skipping structural zeros of `rhs`; for the tridiagonal
    /// spin generators this costs O(n^2) instead of O(n^3).
    pub fn mul(&self, rhs: &DdMatrix) -> DdMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for k in 0..n {
            for c in 0..n {
                let x = rhs[(k, c)];
                if x.is_zero() {
                    continue;
                }
                for r in 0..n {
                    let a = self.data[r * n + k];
                    if !a.is_zero() {
                        out.data[r * n + c] += a * x;
                    }
                }
            }
        }
        out
    }

    /// `sum_k coeffs[k] x^k` by Horner's rule in the matrix argument.
    pub fn polynomial(coeffs: &[CDd], x: &DdMatrix) -> DdMatrix {
        let n = x.dim();
        let mut iter = coeffs.iter().rev();
        let Some(&lead) = iter.next() else {
            return DdMatrix::zeros(n);
        };
        let mut acc = DdMatrix::scalar(n, lead);
        for &c in iter {
            acc = acc.mul(x);
            acc.add_diag(c);
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for DdMatrix {
    type Output = CDd;
    fn index(&self, (r, c): (usize, usize)) -> &CDd {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DdMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut CDd {
        &mut self.data[r * self.n + c]
    }
}
