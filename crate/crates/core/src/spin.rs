//! Spin-j angular momentum matrices.
//!
//! Every matrix here uses the basis ordered by descending magnetic quantum
//! number, `m = j, j-1, ..., -j`; row/column `a` holds `m = j - a`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix in the descending-m basis.
pub type SpinMatrix = DMatrix<Complex64>;

/// Spin quantum number `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinLabel {
    two_j: u32,
}

impl SpinLabel {
    pub const fn from_two_j(two_j: u32) -> Self {
        SpinLabel { two_j }
    }

    pub const fn two_j(self) -> u32 {
        self.two_j
    }

    /// Matrix dimension `2j + 1`.
    pub const fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    pub const fn is_integer(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Magnetic quantum number on row `a` of the descending basis.
    pub fn m(self, a: usize) -> f64 {
        (self.two_j as f64 - 2.0 * a as f64) / 2.0
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Accepts `"3/2"`, `"1.5"` or `"2"`. Parsing is exact: anything that is not
/// a non-negative multiple of 1/2 is rejected.
impl FromStr for SpinLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let input = s.trim();
        let err = |reason| Error::InvalidSpin {
            input: s.to_string(),
            reason,
        };
        if input.is_empty() {
            return Err(err("empty"));
        }

        if let Some((num, den)) = input.split_once('/') {
            let num = parse_digits(num.trim()).ok_or_else(|| err("numerator is not a non-negative integer"))?;
            let den = parse_digits(den.trim()).ok_or_else(|| err("denominator is not a positive integer"))?;
            if den == 0 {
                return Err(err("zero denominator"));
            }
            let twice = num.checked_mul(2).ok_or_else(|| err("too large"))?;
            if twice % den != 0 {
                return Err(err("not a multiple of 1/2"));
            }
            let two_j = u32::try_from(twice / den).map_err(|_| err("too large"))?;
            return Ok(SpinLabel { two_j });
        }

        let (int_part, frac_part) = match input.split_once('.') {
            Some((i, f)) => (i, f),
            None => (input, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        let whole = if int_part.is_empty() {
            0
        } else {
            parse_digits(int_part).ok_or_else(|| err("not a non-negative decimal"))?
        };
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("not a non-negative decimal"));
        }
        let half = match frac_part.as_bytes().split_first() {
            None => 0,
            Some((&b'0', rest)) if rest.iter().all(|&b| b == b'0') => 0,
            Some((&b'5', rest)) if rest.iter().all(|&b| b == b'0') => 1,
            _ => return Err(err("not a multiple of 1/2")),
        };
        let two_j = whole
            .checked_mul(2)
            .and_then(|v| v.checked_add(half))
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| err("too large"))?;
        Ok(SpinLabel { two_j })
    }
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Unit rotation axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    nx: f64,
    ny: f64,
    nz: f64,
}

impl Axis {
    pub const Z: Axis = Axis {
        nx: 0.0,
        ny: 0.0,
        nz: 1.0,
    };

    /// Normalizes `(x, y, z)`; vectors shorter than 1e-9 are rejected.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        // Scale first so huge components do not overflow the norm.
        let big = x.abs().max(y.abs()).max(z.abs());
        if !big.is_finite() || x.is_nan() || y.is_nan() || z.is_nan() {
            return Err(Error::ZeroAxis(f64::NAN));
        }
        if big == 0.0 {
            return Err(Error::ZeroAxis(0.0));
        }
        let (sx, sy, sz) = (x / big, y / big, z / big);
        let scaled = (sx * sx + sy * sy + sz * sz).sqrt();
        let norm = scaled * big;
        if norm < 1e-9 {
            return Err(Error::ZeroAxis(norm));
        }
        Ok(Axis {
            nx: sx / scaled,
            ny: sy / scaled,
            nz: sz / scaled,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.nx, self.ny, self.nz]
    }
}

/// Parses `"x,y,z"`; the vector is normalized.
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason| Error::InvalidAxis {
            input: s.to_string(),
            reason,
        };
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(err("expected three comma-separated components"));
        }
        let mut v = [0.0f64; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| err("component is not a number"))?;
            if !slot.is_finite() {
                return Err(err("component is not finite"));
            }
        }
        Axis::new(v[0], v[1], v[2])
    }
}

/// Largest entry modulus, the max-norm used by every residual check.
pub fn max_abs(m: &SpinMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// `sqrt(j(j+1) - m(m+1))` for the `m` on row `a`, written as
/// `sqrt(a (2j + 1 - a))` so the radicand is an exact integer.
pub(crate) fn ladder_radicand(j: SpinLabel, a: usize) -> u64 {
    a as u64 * (j.two_j as u64 + 1 - a as u64)
}

pub fn build_j3(j: SpinLabel) -> SpinMatrix {
    let d = j.dim();
    SpinMatrix::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::new(j.m(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn build_ladder(j: SpinLabel, direction: Ladder) -> SpinMatrix {
    let d = j.dim();
    let mut out = SpinMatrix::zeros(d, d);
    for a in 1..d {
        let v = Complex64::new((ladder_radicand(j, a) as f64).sqrt(), 0.0);
        match direction {
            // J+ sends m (column a) to m + 1 (row a - 1).
            Ladder::Raise => out[(a - 1, a)] = v,
            Ladder::Lower => out[(a, a - 1)] = v,
        }
    }
    out
}

/// `J1 = (J+ + J-) / 2`
pub fn build_j1(j: SpinLabel) -> SpinMatrix {
    (build_ladder(j, Ladder::Raise) + build_ladder(j, Ladder::Lower)).unscale(2.0)
}

/// `J2 = (J+ - J-) / 2i`
pub fn build_j2(j: SpinLabel) -> SpinMatrix {
    (build_ladder(j, Ladder::Raise) - build_ladder(j, Ladder::Lower)) * Complex64::new(0.0, -0.5)
}

/// `n.J = nx J1 + ny J2 + nz J3`.
pub fn axis_contraction(j: SpinLabel, n: &Axis) -> SpinMatrix {
    let [nx, ny, nz] = n.components();
    let d = j.dim();
    let mut out = SpinMatrix::zeros(d, d);
    for a in 0..d {
        out[(a, a)] = Complex64::new(nz * j.m(a), 0.0);
    }
    for a in 1..d {
        let half = 0.5 * (ladder_radicand(j, a) as f64).sqrt();
        out[(a - 1, a)] = Complex64::new(half * nx, -half * ny);
        out[(a, a - 1)] = Complex64::new(half * nx, half * ny);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn j3_is_descending_diagonal() {
        let half = build_j3(SpinLabel::from_two_j(1));
        assert_eq!(half, SpinMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(-0.5)]));

        assert_eq!(build_j3(SpinLabel::from_two_j(0)), SpinMatrix::zeros(1, 1));

        let one = build_j3(SpinLabel::from_two_j(2));
        let diag: Vec<f64> = (0..3).map(|a| one[(a, a)].re).collect();
        assert_eq!(diag, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn ladder_entries() {
        let up = build_ladder(SpinLabel::from_two_j(1), Ladder::Raise);
        assert_eq!(up, SpinMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]));

        // j = 1: sqrt(j(j+1) - m(m+1)) at m = 0 and m = -1.
        let up = build_ladder(SpinLabel::from_two_j(2), Ladder::Raise);
        let jj = 1.0f64 * 2.0;
        assert_eq!(up[(0, 1)].re, (jj - 0.0 * 1.0).sqrt());
        assert_eq!(up[(1, 2)].re, (jj + 0.0).sqrt());
        assert_eq!(up[(0, 1)].re, 2f64.sqrt());

        let down = build_ladder(SpinLabel::from_two_j(2), Ladder::Lower);
        assert_eq!(down, up.adjoint());

        assert_eq!(build_ladder(SpinLabel::from_two_j(0), Ladder::Raise), SpinMatrix::zeros(1, 1));
    }

    #[test]
    fn z_axis_contraction_is_j3() {
        for two_j in 0..6 {
            let j = SpinLabel::from_two_j(two_j);
            assert_eq!(axis_contraction(j, &Axis::Z), build_j3(j));
        }
    }

    #[test]
    fn contraction_matches_component_sum() {
        let j = SpinLabel::from_two_j(5);
        let n = Axis::new(0.3, -1.2, 0.7).unwrap();
        let [x, y, z] = n.components();
        let expected = build_j1(j) * c(x) + build_j2(j) * c(y) + build_j3(j) * c(z);
        let diff = max_abs(&(axis_contraction(j, &n) - expected));
        assert!(diff < 1e-15, "{diff}");
    }

    #[test]
    fn commutators_and_casimir() {
        let i = Complex64::new(0.0, 1.0);
        for two_j in 0..=40u32 {
            let j = SpinLabel::from_two_j(two_j);
            let d = j.dim() as f64;
            let (j1, j2, j3) = (build_j1(j), build_j2(j), build_j3(j));
            let comm = |a: &SpinMatrix, b: &SpinMatrix| a * b - b * a;
            assert!(max_abs(&(comm(&j1, &j2) - &j3 * i)) <= 1e-12 * d);
            assert!(max_abs(&(comm(&j2, &j3) - &j1 * i)) <= 1e-12 * d);
            assert!(max_abs(&(comm(&j3, &j1) - &j2 * i)) <= 1e-12 * d);

            let cas = &j1 * &j1 + &j2 * &j2 + &j3 * &j3;
            let jj = j.j() * (j.j() + 1.0);
            let resid = max_abs(&(cas - SpinMatrix::identity(j.dim(), j.dim()) * c(jj)));
            assert!(resid <= 1e-12 * d * d, "two_j={two_j} {resid}");
        }
    }

    #[test]
    fn generators_are_hermitian() {
        let j = SpinLabel::from_two_j(7);
        for m in [build_j1(j), build_j2(j), build_j3(j)] {
            assert!(max_abs(&(m.adjoint() - &m)) <= 1e-14);
        }
    }

    #[test]
    fn axis_rejects_short_vectors() {
        assert!(matches!(Axis::new(0.0, 0.0, 0.0), Err(Error::ZeroAxis(_))));
        assert!(matches!(Axis::new(1e-10, 0.0, 0.0), Err(Error::ZeroAxis(_))));
        assert!(Axis::new(f64::NAN, 0.0, 1.0).is_err());
        let tiny = Axis::new(2e-9, 0.0, 0.0).unwrap();
        assert_eq!(tiny.components(), [1.0, 0.0, 0.0]);
        let n = Axis::new(1.0, 2.0, 2.0).unwrap();
        let [x, y, z] = n.components();
        assert!((x * x + y * y + z * z - 1.0).abs() < 1e-15);
    }

    #[test]
    fn axis_handles_extreme_scales() {
        let n = Axis::new(3e300, 4e300, 0.0).unwrap();
        assert_eq!(n.components(), [0.6, 0.8, 0.0]);
        assert!(Axis::new(f64::INFINITY, 0.0, 0.0).is_err());
        assert!(Axis::new(0.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn parse_axes() {
        assert_eq!("0,0,2".parse::<Axis>(), Ok(Axis::Z));
        assert_eq!(" 3 , 0, -4 ".parse::<Axis>().unwrap().components(), [0.6, 0.0, -0.8]);
        for bad in ["", "1,2", "1,2,3,4", "a,b,c", "1,,2", "inf,0,0", "NaN,1,1"] {
            assert!(matches!(bad.parse::<Axis>(), Err(Error::InvalidAxis { .. })), "{bad}");
        }
        assert!(matches!("0,0,0".parse::<Axis>(), Err(Error::ZeroAxis(_))));
    }

    #[test]
    fn parse_spin_labels() {
        let two_j = |s: &str| s.parse::<SpinLabel>().map(SpinLabel::two_j);
        assert_eq!(two_j("1/2"), Ok(1));
        assert_eq!(two_j("3/2"), Ok(3));
        assert_eq!(two_j("4/2"), Ok(4));
        assert_eq!(two_j("2/4"), Ok(1));
        assert_eq!(two_j("1.5"), Ok(3));
        assert_eq!(two_j("0.5"), Ok(1));
        assert_eq!(two_j(".5"), Ok(1));
        assert_eq!(two_j("2"), Ok(4));
        assert_eq!(two_j("2.000"), Ok(4));
        assert_eq!(two_j("12.50"), Ok(25));
        assert_eq!(two_j(" 0 "), Ok(0));
        for bad in ["", "-1/2", "1/3", "0.25", "1.55", "abc", "1/0", "-1", "1e3", ".", "1..5", "99999999999"] {
            assert!(two_j(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn display_round_trips() {
        for two_j in 0..20 {
            let j = SpinLabel::from_two_j(two_j);
            assert_eq!(j.to_string().parse::<SpinLabel>(), Ok(j));
        }
    }
}
