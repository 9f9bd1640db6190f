//! Truncated power series in one indeterminate with exact rational
//! coefficients. Nothing in here rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `sum_{m=0}^{order} coeffs[m] x^m`, always holding exactly `order + 1`
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    /// Builds a series from its coefficients; an empty list is the zero
    /// series of order 0.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RationalSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// The unit series `1 + 0x + ... + 0x^n`.
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[0] = BigRational::one();
        RationalSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> BigRational {
        self.coeffs.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Keeps terms through `x^n`, padding with zeros when `n` exceeds the
    /// current order.
    pub fn trunc(&self, n: usize) -> Self {
        let coeffs = (0..=n).map(|m| self.coeff(m)).collect();
        RationalSeries { coeffs }
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

/// Cauchy product of `a` and `b`, truncated at order `n`.
pub fn mul_trunc(a: &RationalSeries, b: &RationalSeries, n: usize) -> RationalSeries {
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, ai) in a.coeffs.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    RationalSeries { coeffs: out }
}

/// `s^k` truncated at order `n`, by binary exponentiation with a truncation
/// after every product.
pub fn pow_trunc(s: &RationalSeries, k: u32, n: usize) -> RationalSeries {
    let mut result = RationalSeries::one(n);
    let mut base = s.trunc(n);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_trunc(&result, &base, n);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base, n);
        }
    }
    result
}

/// `binomial(2m, m) / 4^m` for `m = 0..=n`, built by the ratio
/// `(2m - 1) / (2m)` between consecutive terms.
fn central_binomial_over_four_pow(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = BigRational::one();
    out.push(c.clone());
    for m in 1..=n {
        c *= BigRational::new(BigInt::from(2 * m - 1), BigInt::from(2 * m));
        out.push(c.clone());
    }
    out
}

/// Series of `arcsin(sqrt(x)) / sqrt(x)`:
/// coefficient of `x^m` is `binomial(2m, m) / (4^m (2m + 1))`.
pub fn arcsin_ratio_series(n: usize) -> RationalSeries {
    let coeffs = central_binomial_over_four_pow(n)
        .into_iter()
        .enumerate()
        .map(|(m, c)| c / BigRational::from_integer(BigInt::from(2 * m + 1)))
        .collect();
    RationalSeries { coeffs }
}

/// Series of `(1 - x)^(-1/2)`: coefficient of `x^m` is `binomial(2m, m) / 4^m`.
pub fn inv_sqrt_one_minus_series(n: usize) -> RationalSeries {
    RationalSeries {
        coeffs: central_binomial_over_four_pow(n),
    }
}
