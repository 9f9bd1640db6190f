//! Rotation operators for any spin `j` as explicit matrix polynomials in
//! `2i n.J`: the exponential form `exp(i theta n.J)` and the Cayley form
//! `(1 + 2i a n.J)(1 - 2i a n.J)^-1`, together with the resolvent
//! coefficients behind the latter, the spin determinant and its central
//! factorial numbers, and numerical oracles for all of them.

pub mod coeffs;
pub mod dd;
pub mod error;
pub mod series;
pub mod spin;
pub mod verify;

pub use error::{Error, Result};
pub use spin::{Axis, SpinLabel, SpinMatrix};
