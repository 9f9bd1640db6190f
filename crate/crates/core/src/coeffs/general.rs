//! Resolvent of an arbitrary square matrix as a polynomial in the matrix:
//! `(1 - itM)^-1 = sum_{k<N} B_k(t) (iM)^k`, `B_k = t^k Trunc_{N-1-k}[d](t) / d(t)`,
//! `d(t) = det(1 - itM)`.
//!
//! The coefficients of `d` come from the Faddeev-LeVerrier trace recursion.
//! The recursion divides by `k` and subtracts traces of growing matrix
//! powers, so it loses accuracy as `N` and `||M||` grow; it runs in
//! double-double, which is comfortable up to `N = 64` for matrices of
//! moderate norm.

use num_complex::Complex64;

use crate::dd::{CDd, Dd, DdMatrix};
use crate::error::{Error, Result};
use crate::spin::SpinMatrix;

/// `det(1 - itM) = sum_m coeffs[m] t^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPolyCoeffs {
    pub n: usize,
    pub coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralResolvent {
    pub coeffs: Vec<Complex64>,
    pub matrix: SpinMatrix,
}

fn check_square(m: &SpinMatrix) -> Result<usize> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn det_coeffs_dd(m: &DdMatrix) -> Vec<CDd> {
    let n = m.dim();
    // Characteristic polynomial det(x - M) = sum_k a_k x^(n-k), a_0 = 1.
    let mut a = Vec::with_capacity(n + 1);
    a.push(CDd::real(Dd::ONE));
    let mut mk = DdMatrix::scalar(n, CDd::real(Dd::ONE));
    for k in 1..=n {
        let am = m.mul(&mk);
        let ak = -am.trace().scale(Dd::ONE / Dd::from(k as f64));
        a.push(ak);
        mk = am;
        mk.add_diag(ak);
    }
    // det(1 - itM) = prod (1 - it l) = sum_k (it)^k a_k
    let mut i_pow = CDd::real(Dd::ONE);
    a.into_iter()
        .map(|ak| {
            let d = ak * i_pow;
            i_pow = i_pow.mul_i();
            d
        })
        .collect()
}

pub fn det_one_minus_itm(m: &SpinMatrix) -> Result<CharPolyCoeffs> {
    let n = check_square(m)?;
    let coeffs = det_coeffs_dd(&DdMatrix::from_spin_matrix(m))
        .into_iter()
        .map(CDd::to_c64)
        .collect();
    Ok(CharPolyCoeffs { n, coeffs })
}

pub fn general_resolvent_polynomial(m: &SpinMatrix, t: f64) -> Result<GeneralResolvent> {
    let n = check_square(m)?;
    let mdd = DdMatrix::from_spin_matrix(m);
    let d = det_coeffs_dd(&mdd);
    let t_dd = Dd::from(t);

    let mut partial = Vec::with_capacity(n + 1);
    let mut sum = CDd::ZERO;
    let mut scale = 0.0;
    let mut pow = Dd::ONE;
    for &c in &d {
        let term = c.scale(pow);
        scale += term.to_c64().norm();
        sum += term;
        partial.push(sum);
        pow = pow * t_dd;
    }
    let full = sum;
    let threshold = 1e-12 * scale.max(1.0);
    let det_abs = full.to_c64().norm();
    if det_abs.is_nan() || det_abs <= threshold {
        return Err(Error::SingularResolvent {
            det: det_abs,
            threshold,
        });
    }

    let mut t_pow = Dd::ONE;
    let coeffs: Vec<CDd> = (0..n)
        .map(|k| {
            let b = partial[n - 1 - k].scale(t_pow) / full;
            t_pow = t_pow * t_dd;
            b
        })
        .collect();

    let mut x = mdd;
    for r in 0..n {
        for c in 0..n {
            x[(r, c)] = x[(r, c)].mul_i();
        }
    }
    let matrix = DdMatrix::polynomial(&coeffs, &x).to_spin_matrix();
    Ok(GeneralResolvent {
        coeffs: coeffs.into_iter().map(CDd::to_c64).collect(),
        matrix,
    })
}
