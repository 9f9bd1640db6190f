//! Coefficient engines for the two polynomial forms of a spin-j rotation.
//!
//! Every coefficient is produced from exact rational series and rounded in
//! a single double-double evaluation at the numeric parameter. Matrix
//! polynomials are evaluated by Horner's rule in double-double and rounded
//! to `f64` at the end.

mod cfz;
mod general;
mod resolvent;

pub use cfz::{cfz_coefficient, cfz_polynomial, epsilon, CfzCoefficientSet, CfzExpansion};
pub use general::{det_one_minus_itm, general_resolvent_polynomial, CharPolyCoeffs, GeneralResolvent};
pub use resolvent::{
    cayley_polynomial, central_factorial_magnitudes, det_polynomial, resolvent_coefficients,
    resolvent_polynomial, CayleyCoefficientSet, DetPolynomial, ResolventExpansion,
};

use crate::dd::{CDd, Dd, DdMatrix};
use crate::spin::{ladder_radicand, Axis, SpinLabel};

/// `X = 2i n.J` in double-double, with the axis renormalized at that
/// precision so the spectrum is `{2im}` to ~1e-32.
pub(crate) fn generator_dd(j: SpinLabel, axis: &Axis) -> DdMatrix {
    let [x, y, z] = axis.components().map(Dd::from);
    let norm = (x.sqr() + y.sqr() + z.sqr()).sqrt();
    let (nx, ny, nz) = (x / norm, y / norm, z / norm);

    let d = j.dim();
    let mut out = DdMatrix::zeros(d);
    for a in 0..d {
        // 2 m = 2j - 2a
        let two_m = Dd::from(j.two_j() as f64 - 2.0 * a as f64);
        out[(a, a)] = CDd::new(Dd::ZERO, nz * two_m);
    }
    for a in 1..d {
        let v = Dd::from(ladder_radicand(j, a) as f64).sqrt();
        // (n.J)[a-1][a] = v (nx - i ny) / 2 and its conjugate below the
        // diagonal; multiplying by 2i gives the entries of X.
        out[(a - 1, a)] = CDd::new(ny * v, nx * v);
        out[(a, a - 1)] = CDd::new(-(ny * v), nx * v);
    }
    out
}
