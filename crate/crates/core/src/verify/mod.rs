//! Residual checks of every polynomial identity against the dense oracles,
//! collected as [`VerificationReport`]s.
//!
//! Checks never abort: a failing identity produces a report with
//! `passed == false` so a sweep always yields the complete result matrix.

mod oracle;
mod quad;

pub use oracle::{
    elementary_symmetric, gauss_jordan_inverse, hermitian_eigenvalues, oracle_cayley, oracle_expm, oracle_resolvent,
};
pub use quad::{integrate, QuadResult};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{general_resolvent_polynomial, CfzExpansion, ResolventExpansion};
use crate::error::{Error, Result};
use crate::spin::{axis_contraction, build_j1, build_j2, build_j3, max_abs, Axis, SpinLabel, SpinMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub rel_matrix_tol: f64,
    pub unitarity_tol: f64,
    pub quad_tol: f64,
    pub quad_cutoff_base: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rel_matrix_tol: 1e-9,
            unitarity_tol: 1e-10,
            quad_tol: 1e-6,
            quad_cutoff_base: 40.0,
        }
    }
}

impl ToleranceConfig {
    pub fn is_valid(&self) -> bool {
        [self.rel_matrix_tol, self.unitarity_tol, self.quad_tol, self.quad_cutoff_base]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity_name: String,
    pub parameters: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(identity_name: &str, parameters: &[(&str, f64)], residual: f64, tolerance: f64) -> Self {
        VerificationReport {
            identity_name: identity_name.to_string(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            residual,
            tolerance,
            // NaN residuals fail.
            passed: residual <= tolerance,
        }
    }

    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.identity_name.cmp(&other.identity_name).then_with(|| {
            let mut a = self.parameters.iter();
            let mut b = other.parameters.iter();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some((ka, va)), Some((kb, vb))) => {
                        let ord = ka.cmp(kb).then(va.total_cmp(vb));
                        if ord != Ordering::Equal {
                            return ord;
                        }
                    }
                }
            }
        })
    }
}

/// Sorts reports by identity name, then parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(VerificationReport::sort_key_cmp);
}

/// `count` axes drawn uniformly from the sphere, reproducible from `seed`.
pub fn random_axes(count: usize, seed: u64) -> Vec<Axis> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let r2 = v.iter().map(|x| x * x).sum::<f64>();
        if r2 > 1e-4 && r2 <= 1.0 {
            out.push(Axis::new(v[0], v[1], v[2]).expect("norm above 1e-2"));
        }
    }
    out
}

/// Parameter grid for [`run_identity_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub alphas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub axes: Vec<Axis>,
    /// Laplace-bridge parameters, used for `2j <= hy_max_two_j`.
    pub hy_ts: Vec<f64>,
    pub hy_max_two_j: u32,
    /// Random real points at which the determinant is checked to be >= 1.
    pub det_samples: usize,
    pub seed: u64,
}

pub const DEFAULT_ALPHAS: [f64; 10] = [-5.0, -1.0, -0.5, -0.1, -0.01, 0.01, 0.1, 0.5, 1.0, 5.0];
pub const DEFAULT_THETAS: [f64; 8] = [0.0, 0.1, 1.0, PI - 0.01, PI, 2.0 * PI, 3.7, 4.0 * PI];
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid::with_axes(20, DEFAULT_SEED)
    }
}

impl SweepGrid {
    pub fn with_axes(count: usize, seed: u64) -> Self {
        SweepGrid {
            alphas: DEFAULT_ALPHAS.to_vec(),
            thetas: DEFAULT_THETAS.to_vec(),
            axes: random_axes(count, seed),
            hy_ts: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            hy_max_two_j: 6,
            det_samples: 1000,
            seed,
        }
    }
}

fn axis_params(axis: &Axis) -> [(&'static str, f64); 3] {
    let [x, y, z] = axis.components();
    [("nx", x), ("ny", y), ("nz", z)]
}

fn unitarity_residual(u: &SpinMatrix) -> f64 {
    let d = u.nrows();
    max_abs(&(u * u.adjoint() - SpinMatrix::identity(d, d)))
}

/// Precomputed expansions for one spin.
#[derive(Debug, Clone)]
pub struct SpinContext {
    pub cfz: CfzExpansion,
    pub resolvent: ResolventExpansion,
}

impl SpinContext {
    pub fn new(j: SpinLabel) -> Self {
        SpinContext {
            cfz: CfzExpansion::new(j),
            resolvent: ResolventExpansion::new(j),
        }
    }

    pub fn spin(&self) -> SpinLabel {
        self.cfz.spin()
    }
}

/// Checks `int_0^inf e^-s A_k(st)/k! ds = B_k(t/2)` by quadrature.
pub fn hille_yosida_check(j: SpinLabel, k: usize, t: f64, cfg: &ToleranceConfig) -> Result<VerificationReport> {
    hille_yosida_check_with(&SpinContext::new(j), k, t, cfg)
}

pub fn hille_yosida_check_with(
    ctx: &SpinContext,
    k: usize,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    let j = ctx.spin();
    let series = ctx.cfz.series(k)?;
    let inv_fact = 1.0 / (1..=k).map(|i| i as f64).product::<f64>();

    // |A_k| <= P_k(1): the series has non-negative coefficients and
    // |sin|, |cos| <= 1.
    let bound = series.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).sum::<f64>() * inv_fact;
    let mut cutoff = cfg.quad_cutoff_base + 10.0 * t.abs() * j.dim() as f64;
    let tail_needed = (10.0 * bound / cfg.quad_tol).ln();
    if tail_needed > cutoff {
        cutoff = tail_needed;
    }

    let integrand = |s: f64| {
        let a = ctx.cfz.coefficient(k, s * t).expect("k checked above");
        (-s).exp() * a * inv_fact
    };
    let result = integrate(integrand, 0.0, cutoff, cfg.quad_tol / 10.0, 4000);
    if !result.converged {
        return Err(Error::QuadratureNotConverged {
            estimate: result.error,
            intervals: result.intervals,
        });
    }
    let expected = ctx.resolvent.coefficients(t / 2.0).resolvent_values[k];
    Ok(VerificationReport::new(
        "hille_yosida",
        &[("two_j", j.two_j() as f64), ("k", k as f64), ("t", t)],
        (result.value - expected).abs(),
        cfg.quad_tol,
    ))
}

fn spin_core_reports(j: SpinLabel, grid: &SweepGrid, out: &mut Vec<VerificationReport>) {
    let two_j = j.two_j() as f64;
    let d = j.dim() as f64;
    let i = Complex64::new(0.0, 1.0);
    let (j1, j2, j3) = (build_j1(j), build_j2(j), build_j3(j));
    let comm = |a: &SpinMatrix, b: &SpinMatrix| a * b - b * a;
    let residual = max_abs(&(comm(&j1, &j2) - &j3 * i))
        .max(max_abs(&(comm(&j2, &j3) - &j1 * i)))
        .max(max_abs(&(comm(&j3, &j1) - &j2 * i)));
    out.push(VerificationReport::new("spin.commutators", &[("two_j", two_j)], residual, 1e-12 * d));

    let jj = j.j() * (j.j() + 1.0);
    let casimir = &j1 * &j1 + &j2 * &j2 + &j3 * &j3 - SpinMatrix::identity(j.dim(), j.dim()) * Complex64::new(jj, 0.0);
    out.push(VerificationReport::new("spin.casimir", &[("two_j", two_j)], max_abs(&casimir), 1e-12 * d * d));

    let expected: Vec<f64> = (0..j.dim()).rev().map(|a| j.m(a)).collect();
    for axis in &grid.axes {
        let h = axis_contraction(j, axis);
        let ev = hermitian_eigenvalues(&h);
        let residual = ev.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let mut params = vec![("two_j", two_j)];
        params.extend(axis_params(axis));
        out.push(VerificationReport::new("spin.spectrum", &params, residual, 1e-10));

        // prod_m (n.J - m) = 0, relative to the largest partial product.
        let mut prod = SpinMatrix::identity(j.dim(), j.dim());
        let mut largest = 1.0f64;
        for a in 0..j.dim() {
            let shifted = &h - SpinMatrix::identity(j.dim(), j.dim()) * Complex64::new(j.m(a), 0.0);
            prod *= shifted;
            largest = largest.max(max_abs(&prod));
        }
        out.push(VerificationReport::new("spin.cayley_hamilton", &params, max_abs(&prod) / largest, 1e-8));
    }
}

fn resolvent_reports(ctx: &SpinContext, grid: &SweepGrid, cfg: &ToleranceConfig, out: &mut Vec<VerificationReport>) {
    let j = ctx.spin();
    let two_j = j.two_j() as f64;
    let d = j.dim() as f64;
    for &alpha in &grid.alphas {
        let set = ctx.resolvent.coefficients(alpha);
        let link = set
            .cayley_values
            .iter()
            .zip(&set.resolvent_values)
            .enumerate()
            .map(|(k, (&a, &b))| {
                let want = if k == 0 { 2.0 * b - 1.0 } else { 2.0 * b };
                (a - want).abs()
            })
            .fold(0.0, f64::max);
        out.push(VerificationReport::new("cayley.linkage", &[("two_j", two_j), ("alpha", alpha)], link, 0.0));

        for axis in &grid.axes {
            let mut params = vec![("two_j", two_j), ("alpha", alpha)];
            params.extend(axis_params(axis));

            let (residual, kappa) = match oracle_resolvent(j, alpha, axis) {
                Ok(oracle) => {
                    let poly = ctx.resolvent.resolvent_polynomial(alpha, axis);
                    (max_abs(&(poly - &oracle)), max_abs(&oracle))
                }
                Err(_) => (f64::INFINITY, 1.0),
            };
            out.push(VerificationReport::new(
                "resolvent.identity",
                &params,
                residual,
                cfg.rel_matrix_tol * kappa,
            ));

            let u = ctx.resolvent.cayley_polynomial(alpha, axis);
            let (residual, kappa) = match oracle_cayley(j, alpha, axis) {
                Ok(oracle) => (max_abs(&(&u - &oracle)), max_abs(&oracle)),
                Err(_) => (f64::INFINITY, 1.0),
            };
            out.push(VerificationReport::new(
                "cayley.identity",
                &params,
                residual,
                cfg.rel_matrix_tol * kappa,
            ));
            out.push(VerificationReport::new(
                "cayley.unitarity",
                &params,
                unitarity_residual(&u),
                cfg.unitarity_tol * d,
            ));
        }
    }
}

fn cfz_reports(ctx: &SpinContext, grid: &SweepGrid, cfg: &ToleranceConfig, out: &mut Vec<VerificationReport>) {
    let j = ctx.spin();
    let two_j = j.two_j() as f64;
    let d = j.dim() as f64;
    for &theta in &grid.thetas {
        for axis in &grid.axes {
            let mut params = vec![("two_j", two_j), ("theta", theta)];
            params.extend(axis_params(axis));
            let u = ctx.cfz.polynomial(theta, axis);
            let oracle = oracle_expm(j, theta, axis);
            out.push(VerificationReport::new(
                "cfz.identity",
                &params,
                max_abs(&(&u - oracle)),
                cfg.rel_matrix_tol * d,
            ));
            out.push(VerificationReport::new(
                "cfz.unitarity",
                &params,
                unitarity_residual(&u),
                cfg.unitarity_tol * d,
            ));
        }
    }
}

fn oracle_reports(j: SpinLabel, grid: &SweepGrid, out: &mut Vec<VerificationReport>) {
    let two_j = j.two_j() as f64;
    let d = j.dim() as f64;
    let (t1, t2) = (0.7, 1.9);
    for axis in &grid.axes {
        let mut params = vec![("two_j", two_j)];
        params.extend(axis_params(axis));
        let lhs = oracle_expm(j, t1, axis) * oracle_expm(j, t2, axis);
        let rhs = oracle_expm(j, t1 + t2, axis);
        out.push(VerificationReport::new("oracle.group_property", &params, max_abs(&(lhs - rhs)), 1e-10 * d));
    }
    for &alpha in &grid.alphas {
        let Some(axis) = grid.axes.first() else { break };
        let mut params = vec![("two_j", two_j), ("alpha", alpha)];
        params.extend(axis_params(axis));
        let a = SpinMatrix::identity(j.dim(), j.dim()) - axis_contraction(j, axis) * Complex64::new(0.0, 2.0 * alpha);
        let residual = match (oracle_resolvent(j, alpha, axis), gauss_jordan_inverse(&a)) {
            (Ok(lu), Ok(gj)) => max_abs(&(&lu - gj)) / max_abs(&lu),
            _ => f64::INFINITY,
        };
        out.push(VerificationReport::new("oracle.inverse_consistency", &params, residual, 1e-12));
    }
}

fn det_reports(ctx: &SpinContext, grid: &SweepGrid, out: &mut Vec<VerificationReport>) {
    let j = ctx.spin();
    let two_j = j.two_j() as f64;
    let det = ctx.resolvent.det();

    let bad = det.even_coeffs.iter().filter(|c| !c.is_positive()).count() + usize::from(det.even_coeffs[0] != BigInt::from(1));
    out.push(VerificationReport::new("det.positive_coefficients", &[("two_j", two_j)], bad as f64, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed ^ u64::from(j.two_j()));
    let mut shortfall = 0.0f64;
    for _ in 0..grid.det_samples {
        // Cauchy-distributed points reach both tiny and huge |alpha|.
        let alpha = (PI * (rng.random::<f64>() - 0.5)).tan();
        let v = det.eval(alpha);
        shortfall = shortfall.max(if v >= 1.0 { 0.0 } else { 1.0 - v });
    }
    out.push(VerificationReport::new("det.no_real_pole", &[("two_j", two_j)], shortfall, 0.0));

    if j.is_integer() && j.two_j() <= 24 {
        let squares: Vec<BigInt> = (1..=j.two_j() / 2).map(|p| BigInt::from(p) * p).collect();
        let e = elementary_symmetric(&squares);
        let mut four_pow = BigInt::from(1);
        let mut mismatches = 0usize;
        for (m, c) in det.even_coeffs.iter().enumerate() {
            if e.get(m).map(|em| em * &four_pow) != Some(c.clone()) {
                mismatches += 1;
            }
            four_pow *= 4;
        }
        mismatches += e.len().abs_diff(det.even_coeffs.len());
        out.push(VerificationReport::new("det.central_factorial", &[("two_j", two_j)], mismatches as f64, 0.0));
    }
}

fn general_reports(ctx: &SpinContext, grid: &SweepGrid, out: &mut Vec<VerificationReport>) {
    let j = ctx.spin();
    if j.two_j() > 12 {
        return;
    }
    let Some(axis) = grid.axes.first() else { return };
    let m = axis_contraction(j, axis) * Complex64::new(2.0, 0.0);
    for &alpha in &grid.alphas {
        let mut params = vec![("two_j", j.two_j() as f64), ("alpha", alpha)];
        params.extend(axis_params(axis));
        let want = ctx.resolvent.coefficients(alpha).resolvent_values;
        let residual = match general_resolvent_polynomial(&m, alpha) {
            Ok(general) => general
                .coeffs
                .iter()
                .zip(&want)
                .map(|(g, &b)| (g - Complex64::new(b, 0.0)).norm())
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        out.push(VerificationReport::new("general.consistency", &params, residual, 1e-10));
    }
}

fn hille_yosida_reports(ctx: &SpinContext, grid: &SweepGrid, cfg: &ToleranceConfig, out: &mut Vec<VerificationReport>) {
    let j = ctx.spin();
    if j.two_j() > grid.hy_max_two_j {
        return;
    }
    for k in 0..j.dim() {
        for &t in &grid.hy_ts {
            let report = hille_yosida_check_with(ctx, k, t, cfg).unwrap_or_else(|_| {
                VerificationReport::new(
                    "hille_yosida",
                    &[("two_j", j.two_j() as f64), ("k", k as f64), ("t", t)],
                    f64::INFINITY,
                    cfg.quad_tol,
                )
            });
            out.push(report);
        }
    }
}

/// Runs every per-spin identity over `grid`, sorted by identity name and
/// then parameters.
pub fn run_identity_suite(j: SpinLabel, cfg: &ToleranceConfig, grid: &SweepGrid) -> Vec<VerificationReport> {
    let ctx = SpinContext::new(j);
    let mut out = Vec::new();
    spin_core_reports(j, grid, &mut out);
    resolvent_reports(&ctx, grid, cfg, &mut out);
    cfz_reports(&ctx, grid, cfg, &mut out);
    oracle_reports(j, grid, &mut out);
    det_reports(&ctx, grid, &mut out);
    general_reports(&ctx, grid, &mut out);
    hille_yosida_reports(&ctx, grid, cfg, &mut out);
    sort_reports(&mut out);
    out
}
