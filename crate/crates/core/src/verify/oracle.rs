//! Dense `f64` reference computations, independent of the polynomial path.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{axis_contraction, Axis, SpinLabel, SpinMatrix};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(I - 2i a n.J)^-1` by LU with partial pivoting.
pub fn oracle_resolvent(j: SpinLabel, alpha: f64, axis: &Axis) -> Result<SpinMatrix> {
    let d = j.dim();
    let a = SpinMatrix::identity(d, d) - axis_contraction(j, axis) * c(0.0, 2.0 * alpha);
    a.lu()
        .solve(&SpinMatrix::identity(d, d))
        .ok_or(Error::SingularResolvent { det: 0.0, threshold: 0.0 })
}

/// `(I + 2i a n.J)(I - 2i a n.J)^-1`.
pub fn oracle_cayley(j: SpinLabel, alpha: f64, axis: &Axis) -> Result<SpinMatrix> {
    let d = j.dim();
    let num = SpinMatrix::identity(d, d) + axis_contraction(j, axis) * c(0.0, 2.0 * alpha);
    Ok(num * oracle_resolvent(j, alpha, axis)?)
}

/// `exp(i theta n.J)` from the Hermitian eigendecomposition of `n.J`.
pub fn oracle_expm(j: SpinLabel, theta: f64, axis: &Axis) -> SpinMatrix {
    if *axis == Axis::Z {
        let d = j.dim();
        return SpinMatrix::from_diagonal(&DVector::from_fn(d, |a, _| Complex64::from_polar(1.0, theta * j.m(a))));
    }
    let eig = SymmetricEigen::new(axis_contraction(j, axis));
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, theta * l));
    let v = &eig.eigenvectors;
    v * SpinMatrix::from_diagonal(&phases) * v.adjoint()
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &SpinMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Gauss-Jordan inverse with partial pivoting; a second route to the
/// resolvent that shares no code with the LU solve above.
pub fn gauss_jordan_inverse(m: &SpinMatrix) -> Result<SpinMatrix> {
    let n = m.nrows();
    if n == 0 || !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|r| {
            let mut row: Vec<Complex64> = (0..n).map(|col| m[(r, col)]).collect();
            row.extend((0..n).map(|col| if col == r { c(1.0, 0.0) } else { c(0.0, 0.0) }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .expect("non-empty range");
        if a[pivot][col].norm() == 0.0 {
            return Err(Error::SingularResolvent { det: 0.0, threshold: 0.0 });
        }
        a.swap(col, pivot);
        let inv = c(1.0, 0.0) / a[col][col];
        for v in a[col].iter_mut() {
            *v *= inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col {
                continue;
            }
            let f = row[col];
            if f.norm() != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
    }
    Ok(SpinMatrix::from_fn(n, n, |r, col| a[r][n + col]))
}

/// `e_0..=e_n` of the given values, by the recurrence
/// `e_m <- e_m + x e_{m-1}` over each value in turn.
pub fn elementary_symmetric(values: &[BigInt]) -> Vec<BigInt> {
    let mut e = vec![BigInt::from(1)];
    for x in values {
        e.push(BigInt::from(0));
        for m in (1..e.len()).rev() {
            let prev = e[m - 1].clone();
            e[m] += prev * x;
        }
    }
    e
}
