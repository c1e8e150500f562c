//! Einstein conditions for the two ansatze: the printed rational systems,
//! their closed-form solution families, and a multistart Newton search.
//!
//! Gauges: Scheme 1 fixes `x2 = 1`, Scheme 2 fixes `x3 = 1`. A class with no
//! generators (Scheme 2 with `p = 1` or `q = 1`) has no Ricci equation; its
//! constant is dropped from the unknowns and stored as 1.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use crate::curvature::Ansatz;
use crate::curvature::Tolerances;
use crate::error::{Error, Result};
use crate::liealg::Scheme;
use crate::linalg;

/// Where a record came from.
///
/// `ClosedForm1` is the first printed family (the bi-invariant metric);
/// `ClosedForm2Plus` / `ClosedForm2Minus` are the branches of the second
/// family. Scheme 1's second family has a single branch, reported as `Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Provenance {
    ClosedForm1,
    ClosedForm2Plus,
    ClosedForm2Minus,
    Numeric,
}

/// Printed closed-form values checked against the curvature engine.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FormulaAudit {
    pub printed_x: Vec<f64>,
    pub printed_lambda: f64,
    pub printed_i1: Option<f64>,
    /// Infinity norm of the printed system at the printed values.
    pub printed_system_residual: f64,
    /// Engine Einstein residual at the printed `x`.
    pub printed_engine_residual: f64,
    /// Engine `lambda_best` at the printed `x`.
    pub engine_lambda: f64,
    /// Printed `x`, `lambda` (and `I1` if given) all confirmed.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EinsteinRecord {
    pub scheme: Scheme,
    pub n: usize,
    pub p: Option<usize>,
    /// Normalized metric constants, one per class.
    pub x: Vec<f64>,
    pub lambda: f64,
    pub i1: Option<f64>,
    pub provenance: Provenance,
    /// Engine Einstein residual at `x`.
    pub residual: f64,
    pub valid: bool,
    pub class_id: Option<usize>,
    pub audit: Option<FormulaAudit>,
}

impl EinsteinRecord {
    /// Sort key: `(I1, x)`, with undefined `I1` last.
    pub fn order(&self, other: &Self) -> Ordering {
        let ia = self.i1.unwrap_or(f64::INFINITY);
        let ib = other.i1.unwrap_or(f64::INFINITY);
        ia.total_cmp(&ib).then_with(|| {
            self.x
                .iter()
                .zip(&other.x)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Relative infinity-norm distance between metric vectors.
pub fn x_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| rel_diff(*u, *v)).fold(0.0, f64::max)
}

/// Same metric: `x` within `x_tol` and, where both are known, `I1` within `i1_tol`.
pub fn same_solution(a: &EinsteinRecord, b: &EinsteinRecord, x_tol: f64, i1_tol: f64) -> bool {
    if x_distance(&a.x, &b.x) >= x_tol {
        return false;
    }
    match (a.i1, b.i1) {
        (Some(u), Some(v)) => rel_diff(u, v) < i1_tol,
        _ => true,
    }
}

/// Relative agreement on `lambda` required for a coarse merge.
const LAMBDA_MERGE_TOL: f64 = 1e-9;

/// Merge rule used by the search: either `x` agrees to `dedup_tol`, or `x`
/// lies within `cluster_radius` while `lambda` and `I1` agree tightly.
/// The second branch catches double roots, where Newton only pins `x` to
/// about the square root of the residual floor.
pub fn same_root(a: &EinsteinRecord, b: &EinsteinRecord, cfg: &SearchConfig) -> bool {
    if same_solution(a, b, cfg.dedup_tol, cfg.i1_tol) {
        return true;
    }
    x_distance(&a.x, &b.x) < cfg.cluster_radius
        && rel_diff(a.lambda, b.lambda) < LAMBDA_MERGE_TOL
        && same_solution(a, b, cfg.cluster_radius, cfg.i1_tol)
}

// ---------------------------------------------------------------------------
// Printed systems.

/// Left-hand sides of the Scheme 1 equations (`= lambda * x_i` at a solution).
pub fn scheme1_lhs(n: usize, x: [f64; 3]) -> [f64; 3] {
    let n = n as f64;
    let [x1, x2, x3] = x;
    [
        n / 4.0 - (n - 2.0) / 8.0 * x2 / x1 + 0.25 * x1 * x1 / (x2 * x3)
            - 0.25 * x3 / x2
            - 0.25 * x2 / x3,
        (n + 6.0) / 16.0 + (n - 2.0) / 16.0 * x2 * x2 / (x1 * x1) + 0.25 * x2 * x2 / (x1 * x3)
            - 0.25 * x3 / x1
            - 0.25 * x1 / x3,
        n / 8.0 * (2.0 - x2 / x1 - x1 / x2 + x3 * x3 / (x1 * x2)),
    ]
}

/// Residuals `LHS_i - lambda x_i` of the Scheme 1 system.
pub fn scheme1_system(n: usize, x: [f64; 3], lambda: f64) -> [f64; 3] {
    let lhs = scheme1_lhs(n, x);
    [lhs[0] - lambda * x[0], lhs[1] - lambda * x[1], lhs[2] - lambda * x[2]]
}

/// Jacobian of [`scheme1_system`] with columns `(x1, x2, x3, lambda)`.
pub fn scheme1_jacobian(n: usize, x: [f64; 3], lambda: f64) -> [[f64; 4]; 3] {
    let n = n as f64;
    let [x1, x2, x3] = x;
    let k1 = (n - 2.0) / 8.0;
    let k2 = (n - 2.0) / 16.0;
    let h = n / 8.0;
    [
        [
            k1 * x2 / (x1 * x1) + 0.5 * x1 / (x2 * x3) - lambda,
            -k1 / x1 - 0.25 * x1 * x1 / (x2 * x2 * x3) + 0.25 * x3 / (x2 * x2) - 0.25 / x3,
            -0.25 * x1 * x1 / (x2 * x3 * x3) - 0.25 / x2 + 0.25 * x2 / (x3 * x3),
            -x1,
        ],
        [
            -2.0 * k2 * x2 * x2 / (x1 * x1 * x1) - 0.25 * x2 * x2 / (x1 * x1 * x3)
                + 0.25 * x3 / (x1 * x1)
                - 0.25 / x3,
            2.0 * k2 * x2 / (x1 * x1) + 0.5 * x2 / (x1 * x3) - lambda,
            -0.25 * x2 * x2 / (x1 * x3 * x3) - 0.25 / x1 + 0.25 * x1 / (x3 * x3),
            -x2,
        ],
        [
            h * (x2 / (x1 * x1) - 1.0 / x2 - x3 * x3 / (x1 * x1 * x2)),
            h * (-1.0 / x1 + x1 / (x2 * x2) - x3 * x3 / (x1 * x2 * x2)),
            h * 2.0 * x3 / (x1 * x2) - lambda,
            -x3,
        ],
    ]
}

fn check_split(n: usize, p: usize) -> Result<(f64, f64, f64)> {
    if p == 0 || p >= n {
        return Err(Error::DegenerateSplit { n, p });
    }
    Ok((n as f64, p as f64, (n - p) as f64))
}

/// Left-hand sides of the Scheme 2 equations.
pub fn scheme2_lhs(n: usize, p: usize, x: [f64; 4]) -> Result<[f64; 4]> {
    let (n, p, q) = check_split(n, p)?;
    let [x1, x2, x3, x4] = x;
    Ok([
        p / 8.0 + q / 8.0 * x1 * x1 / (x3 * x3),
        q / 8.0 + p / 8.0 * x2 * x2 / (x3 * x3),
        n / 4.0
            - (p - 1.0) * (p + 1.0) / (8.0 * p) * x1 / x3
            - (q - 1.0) * (q + 1.0) / (8.0 * q) * x2 / x3
            - n * n / 16.0 * x4 / x3,
        p * q * n * n / 16.0 * x4 * x4 / (x3 * x3),
    ])
}

/// Residuals `LHS_i - lambda x_i` of the Scheme 2 system.
pub fn scheme2_system(n: usize, p: usize, x: [f64; 4], lambda: f64) -> Result<[f64; 4]> {
    let lhs = scheme2_lhs(n, p, x)?;
    Ok(core::array::from_fn(|i| lhs[i] - lambda * x[i]))
}

/// Jacobian of [`scheme2_system`] with columns `(x1, x2, x3, x4, lambda)`.
pub fn scheme2_jacobian(n: usize, p: usize, x: [f64; 4], lambda: f64) -> Result<[[f64; 5]; 4]> {
    let (n, p, q) = check_split(n, p)?;
    let [x1, x2, x3, x4] = x;
    let a = (p * p - 1.0) / (8.0 * p);
    let b = (q * q - 1.0) / (8.0 * q);
    let e = n * n / 16.0;
    let c = p * q * n * n / 16.0;
    let x3sq = x3 * x3;
    let x3cu = x3sq * x3;
    Ok([
        [q / 4.0 * x1 / x3sq - lambda, 0.0, -q / 4.0 * x1 * x1 / x3cu, 0.0, -x1],
        [0.0, p / 4.0 * x2 / x3sq - lambda, -p / 4.0 * x2 * x2 / x3cu, 0.0, -x2],
        [
            -a / x3,
            -b / x3,
            (a * x1 + b * x2 + e * x4) / x3sq - lambda,
            -e / x3,
            -x3,
        ],
        [0.0, 0.0, -2.0 * c * x4 * x4 / x3cu, 2.0 * c * x4 / x3sq - lambda, -x4],
    ])
}

// ---------------------------------------------------------------------------
// Residual maps and Newton iteration.

/// A square nonlinear system on the positive orthant.
pub trait ResidualMap {
    fn dim(&self) -> usize;
    fn residual(&self, z: &[f64]) -> Vec<f64>;

    /// Row-major Jacobian; central differences unless overridden.
    fn jacobian(&self, z: &[f64]) -> Vec<f64> {
        let k = self.dim();
        let mut jac = vec![0.0; k * k];
        let mut zp = z.to_vec();
        for j in 0..k {
            let h = 1e-6 * z[j].abs().max(1.0);
            zp[j] = z[j] + h;
            let fp = self.residual(&zp);
            zp[j] = z[j] - h;
            let fm = self.residual(&zp);
            zp[j] = z[j];
            for i in 0..k {
                jac[i * k + j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        jac
    }
}

/// The printed Einstein system of one ansatz in its gauge.
///
/// Unknowns are the free metric constants followed by `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinSystem {
    pub scheme: Scheme,
    pub n: usize,
    pub p: Option<usize>,
    /// Slot fixed to 1 by the gauge.
    pub gauge_slot: usize,
    /// Slots solved for, in unknown order.
    pub free: Vec<usize>,
    /// Slots whose equation is imposed.
    pub equations: Vec<usize>,
}

impl EinsteinSystem {
    pub fn scheme1(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        Ok(Self {
            scheme: Scheme::One,
            n,
            p: None,
            gauge_slot: 1,
            free: vec![0, 2],
            equations: vec![0, 1, 2],
        })
    }

    pub fn scheme2(n: usize, p: usize) -> Result<Self> {
        check_split(n, p)?;
        let q = n - p;
        let occupied = [p >= 2, q >= 2, true, true];
        let equations: Vec<usize> = (0..4).filter(|&s| occupied[s]).collect();
        let free = equations.iter().copied().filter(|&s| s != 2).collect();
        Ok(Self { scheme: Scheme::Two, n, p: Some(p), gauge_slot: 2, free, equations })
    }

    pub fn for_ansatz(ansatz: &Ansatz) -> Result<Self> {
        match ansatz.scheme() {
            Scheme::One => Self::scheme1(ansatz.n()),
            Scheme::Two => Self::scheme2(ansatz.n(), ansatz.p().unwrap_or(0)),
        }
    }

    pub fn class_count(&self) -> usize {
        self.scheme.class_count()
    }

    /// Full per-class `x` (gauge and empty slots set to 1) from unknowns.
    pub fn metric(&self, z: &[f64]) -> Vec<f64> {
        let mut x = vec![1.0; self.class_count()];
        for (i, &s) in self.free.iter().enumerate() {
            x[s] = z[i];
        }
        x
    }

    pub fn lambda(&self, z: &[f64]) -> f64 {
        z[self.free.len()]
    }

    /// Unknown vector for a full `x` and `lambda`.
    pub fn unknowns(&self, x: &[f64], lambda: f64) -> Vec<f64> {
        let mut z: Vec<f64> = self.free.iter().map(|&s| x[s]).collect();
        z.push(lambda);
        z
    }

    fn full(&self, z: &[f64]) -> (Vec<f64>, f64) {
        (self.metric(z), self.lambda(z))
    }

    /// Residuals of every printed equation at full `x`, `lambda`.
    fn full_residual(&self, x: &[f64], lambda: f64) -> Vec<f64> {
        match self.scheme {
            Scheme::One => scheme1_system(self.n, [x[0], x[1], x[2]], lambda).to_vec(),
            Scheme::Two => scheme2_system(self.n, self.p.unwrap(), [x[0], x[1], x[2], x[3]], lambda)
                .expect("split validated at construction")
                .to_vec(),
        }
    }

    fn full_jacobian(&self, x: &[f64], lambda: f64) -> (Vec<f64>, usize) {
        match self.scheme {
            Scheme::One => {
                let j = scheme1_jacobian(self.n, [x[0], x[1], x[2]], lambda);
                (j.iter().flatten().copied().collect(), 4)
            }
            Scheme::Two => {
                let j = scheme2_jacobian(self.n, self.p.unwrap(), [x[0], x[1], x[2], x[3]], lambda)
                    .expect("split validated at construction");
                (j.iter().flatten().copied().collect(), 5)
            }
        }
    }
}

impl ResidualMap for EinsteinSystem {
    fn dim(&self) -> usize {
        self.free.len() + 1
    }

    fn residual(&self, z: &[f64]) -> Vec<f64> {
        let (x, lambda) = self.full(z);
        let r = self.full_residual(&x, lambda);
        self.equations.iter().map(|&s| r[s]).collect()
    }

    fn jacobian(&self, z: &[f64]) -> Vec<f64> {
        let (x, lambda) = self.full(z);
        let (full, cols) = self.full_jacobian(&x, lambda);
        let lambda_col = cols - 1;
        let k = self.dim();
        let mut jac = vec![0.0; k * k];
        for (i, &row) in self.equations.iter().enumerate() {
            for (j, &col) in self.free.iter().chain(core::iter::once(&lambda_col)).enumerate() {
                jac[i * k + j] = full[row * cols + col];
            }
        }
        jac
    }
}

/// The same equations evaluated through the curvature engine: for each
/// occupied class, mean `R_aa - lambda x_class`. Jacobian by central
/// differences.
pub struct EngineSystem<'a> {
    pub ansatz: &'a Ansatz,
    pub layout: EinsteinSystem,
}

impl<'a> EngineSystem<'a> {
    pub fn new(ansatz: &'a Ansatz) -> Result<Self> {
        Ok(Self { ansatz, layout: EinsteinSystem::for_ansatz(ansatz)? })
    }
}

impl ResidualMap for EngineSystem<'_> {
    fn dim(&self) -> usize {
        self.layout.dim()
    }

    fn residual(&self, z: &[f64]) -> Vec<f64> {
        let x = self.layout.metric(z);
        let lambda = self.layout.lambda(z);
        let Ok(summary) = self.ansatz.summary(&x) else {
            return vec![f64::NAN; self.dim()];
        };
        let means = self.ansatz.class_ricci(&summary);
        self.layout
            .equations
            .iter()
            .map(|&s| means[s].unwrap_or(0.0) - lambda * x[s])
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Convergence threshold on the residual infinity norm.
    pub tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { max_iter: 100, tol: 1e-12 }
    }
}

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Damped Newton iteration confined to the positive orthant.
///
/// Steps are halved until the iterate stays positive and the residual
/// decreases. After convergence a few undamped steps polish the root, which
/// matters at double roots where convergence is only linear.
pub fn newton_solve<S: ResidualMap + ?Sized>(
    system: &S,
    start: &[f64],
    opts: NewtonOptions,
) -> Result<Vec<f64>> {
    if start.len() != system.dim() || start.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::NonPositiveStart);
    }
    let k = system.dim();
    let mut z = start.to_vec();
    let mut r = system.residual(&z);
    for _ in 0..opts.max_iter {
        if !r.iter().all(|v| v.is_finite()) {
            return Err(Error::NoConvergence("non-finite residual".into()));
        }
        if linalg::max_abs(&r) < opts.tol {
            return Ok(polish(system, z, r));
        }
        let jac = system.jacobian(&z);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let step = linalg::solve(&jac, &rhs)?;
        let current = norm2(&r);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = (0..k).map(|i| z[i] + t * step[i]).collect();
            if trial.iter().all(|v| *v > 0.0) {
                let rt = system.residual(&trial);
                if rt.iter().all(|v| v.is_finite()) && norm2(&rt) < (1.0 - 1e-4 * t) * current {
                    z = trial;
                    r = rt;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-10 {
                return Err(Error::NoConvergence("line search stalled".into()));
            }
        }
    }
    if linalg::max_abs(&r) < opts.tol {
        return Ok(polish(system, z, r));
    }
    Err(Error::NoConvergence(format!(
        "residual {:e} after {} iterations",
        linalg::max_abs(&r),
        opts.max_iter
    )))
}

fn polish<S: ResidualMap + ?Sized>(system: &S, mut z: Vec<f64>, mut r: Vec<f64>) -> Vec<f64> {
    for _ in 0..60 {
        let jac = system.jacobian(&z);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let Ok(step) = linalg::solve(&jac, &rhs) else { break };
        let scale = linalg::max_abs(&z).max(1.0);
        if linalg::max_abs(&step) <= 1e-15 * scale {
            break;
        }
        let trial: Vec<f64> = z.iter().zip(&step).map(|(a, b)| a + b).collect();
        if trial.iter().any(|v| !(*v > 0.0)) {
            break;
        }
        let rt = system.residual(&trial);
        if !(linalg::max_abs(&rt) <= linalg::max_abs(&r)) {
            break;
        }
        z = trial;
        r = rt;
    }
    z
}

// ---------------------------------------------------------------------------
// Closed forms.

/// Printed Scheme 1 solution families: `(x, lambda, I1, provenance)`.
pub fn scheme1_printed(n: usize) -> Vec<(Vec<f64>, f64, f64, Provenance)> {
    let nf = n as f64;
    let mut out = vec![(vec![1.0, 1.0, 1.0], nf / 8.0, nf * nf - 1.0, Provenance::ClosedForm1)];
    if n >= 3 {
        let x1 = (3.0 * nf + 2.0) / (nf - 2.0);
        let lambda =
            nf * (nf - 2.0) * (5.0 * nf + 6.0) / (8.0 * (3.0 * nf + 2.0) * (3.0 * nf + 2.0));
        let i1 = (2.0 * nf * nf + 3.0 * nf + 2.0) * (nf - 1.0) * (3.0 * nf + 4.0)
            / (nf * (5.0 * nf + 6.0));
        out.push((vec![x1, 1.0, x1], lambda, i1, Provenance::ClosedForm2Plus));
    }
    out
}

/// Printed Scheme 2 solution sets, `(x, lambda, provenance)`, exactly as
/// printed (including `x2` for an empty class 2).
pub fn scheme2_printed(n: usize, p: usize) -> Result<Vec<(Vec<f64>, f64, Provenance)>> {
    let (_, p, q) = check_split(n, p)?;
    let mut out = vec![(
        vec![1.0, 1.0, 1.0, 2.0 / (p * q * (p + q))],
        (p + q) / 8.0,
        Provenance::ClosedForm1,
    )];
    let root = libm::sqrt(p * q * (p * p - 1.0) * (q * q - 1.0));
    let denom = q * (p * p + p * q + q * q - 1.0);
    for (sign, prov) in [(1.0, Provenance::ClosedForm2Plus), (-1.0, Provenance::ClosedForm2Minus)] {
        let x1 = (p * q * (p + q) + sign * root) / denom;
        let x2 = q / p * x1;
        let x4 = 2.0 * (2.0 * p * (p + q) + ((1.0 - p * p) + (1.0 - q * q))) / (1.0 + p * q) * x1;
        let lambda = q / (16.0 * p * (p + q) * (p + q)) * x4;
        out.push((vec![x1, x2, 1.0, x4], lambda, prov));
    }
    Ok(out)
}

/// Solve the third and fourth Scheme 2 equations for `(x4, lambda)` with
/// `x1`, `x2` held fixed (`x3 = 1`).
pub fn scheme2_complete(n: usize, p: usize, x1: f64, x2: f64) -> Result<(f64, f64)> {
    let (n, p, q) = check_split(n, p)?;
    let a = if p >= 2.0 { (p * p - 1.0) / (8.0 * p) } else { 0.0 };
    let b = if q >= 2.0 { (q * q - 1.0) / (8.0 * q) } else { 0.0 };
    // n^2 x4 / 16 = lambda / (pq) from the fourth equation.
    let lambda = (n / 4.0 - a * x1 - b * x2) / (1.0 + 1.0 / (p * q));
    let x4 = 16.0 * lambda / (p * q * n * n);
    Ok((x4, lambda))
}

fn record_from_engine(
    ansatz: &Ansatz,
    x: Vec<f64>,
    lambda_hint: f64,
    provenance: Provenance,
    tol: &Tolerances,
) -> Result<EinsteinRecord> {
    let summary = ansatz.summary(&x)?;
    let i1 = summary.invariant_i1(tol.einstein).ok();
    let lambda = if summary.is_einstein(tol.einstein) { summary.lambda_best } else { lambda_hint };
    Ok(EinsteinRecord {
        scheme: ansatz.scheme(),
        n: ansatz.n(),
        p: ansatz.p(),
        valid: i1.is_some() && lambda > 0.0 && x.iter().all(|v| *v > 0.0),
        x,
        lambda,
        i1,
        provenance,
        residual: summary.residual,
        class_id: None,
        audit: None,
    })
}

fn require_scheme(ansatz: &Ansatz, scheme: Scheme) {
    assert_eq!(ansatz.scheme(), scheme, "ansatz built for the other scheme");
}

/// Scheme 1 closed forms, each verified through the curvature engine.
pub fn closed_form_scheme1(ansatz: &Ansatz, tol: &Tolerances) -> Result<Vec<EinsteinRecord>> {
    require_scheme(ansatz, Scheme::One);
    let n = ansatz.n();
    let mut out = Vec::new();
    for (x, lambda, i1, prov) in scheme1_printed(n) {
        let system = scheme1_system(n, [x[0], x[1], x[2]], lambda);
        let mut rec = record_from_engine(ansatz, x.clone(), lambda, prov, tol)?;
        let agrees = rec.valid
            && rel_diff(rec.lambda, lambda) < tol.einstein
            && rec.i1.is_some_and(|v| rel_diff(v, i1) < tol.einstein);
        rec.audit = Some(FormulaAudit {
            printed_x: x,
            printed_lambda: lambda,
            printed_i1: Some(i1),
            printed_system_residual: linalg::max_abs(&system),
            printed_engine_residual: rec.residual,
            engine_lambda: rec.lambda,
            agrees,
        });
        out.push(rec);
    }
    Ok(out)
}

/// Scheme 2 closed forms for `1 <= p <= n-1`.
///
/// Each printed solution is checked against the printed system and the
/// curvature engine. When the printed `x4`/`lambda` fail, the record carries
/// `x4`, `lambda` recomputed from the printed `x1`, `x2` (see
/// [`scheme2_complete`]) and the failure is kept in the audit.
pub fn closed_form_scheme2(ansatz: &Ansatz, tol: &Tolerances) -> Result<Vec<EinsteinRecord>> {
    require_scheme(ansatz, Scheme::Two);
    let n = ansatz.n();
    let p = ansatz.p().unwrap_or(0);
    let occupied = ansatz.occupied();
    let mut out = Vec::new();
    for (printed_x, printed_lambda, prov) in scheme2_printed(n, p)? {
        let system =
            scheme2_system(n, p, [printed_x[0], printed_x[1], printed_x[2], printed_x[3]], printed_lambda)?;
        // Residuals of equations that exist for this split.
        let system_res = system
            .iter()
            .enumerate()
            .filter(|(s, _)| occupied[*s])
            .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
        let mut x = printed_x.clone();
        for (slot, occ) in occupied.iter().enumerate() {
            if !occ {
                x[slot] = 1.0;
            }
        }
        let printed_engine =
            if x.iter().all(|v| *v > 0.0) { Some(ansatz.summary(&x)?) } else { None };
        let (engine_res, engine_lambda) = printed_engine
            .as_ref()
            .map_or((f64::INFINITY, f64::NAN), |s| (s.residual, s.lambda_best));
        let agrees = engine_res < tol.einstein
            && rel_diff(engine_lambda, printed_lambda) < tol.einstein
            && system_res < tol.einstein;
        // x4 is recomputable from x1, x2 even when the printed x4 is not positive.
        let positive = x[0] > 0.0 && x[1] > 0.0;
        if !agrees && positive {
            x[3] = scheme2_complete(n, p, x[0], x[1])?.0;
        }
        let mut rec = if positive && x[3] > 0.0 {
            record_from_engine(ansatz, x, printed_lambda, prov, tol)?
        } else {
            EinsteinRecord {
                scheme: Scheme::Two,
                n,
                p: Some(p),
                x,
                lambda: printed_lambda,
                i1: None,
                provenance: prov,
                residual: f64::INFINITY,
                valid: false,
                class_id: None,
                audit: None,
            }
        };
        rec.audit = Some(FormulaAudit {
            printed_x,
            printed_lambda,
            printed_i1: None,
            printed_system_residual: system_res,
            printed_engine_residual: engine_res,
            engine_lambda,
            agrees,
        });
        out.push(rec);
    }
    Ok(out)
}

/// Closed forms for whichever scheme the ansatz carries.
pub fn closed_forms(ansatz: &Ansatz, tol: &Tolerances) -> Result<Vec<EinsteinRecord>> {
    match ansatz.scheme() {
        Scheme::One => closed_form_scheme1(ansatz, tol),
        Scheme::Two => closed_form_scheme2(ansatz, tol),
    }
}

// ---------------------------------------------------------------------------
// Multistart search.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub starts: usize,
    pub seed: u64,
    pub newton: NewtonOptions,
    /// Relative infinity-norm on `x` for merging solutions.
    pub dedup_tol: f64,
    /// Wider `x` radius for merging roots whose `lambda` and `I1` agree.
    pub cluster_radius: f64,
    /// Relative tolerance on `I1` guarding merges and equivalence classes.
    pub i1_tol: f64,
    /// Unknowns below this are boundary roots (degenerate metrics).
    pub positivity_floor: f64,
    pub tolerances: Tolerances,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 400,
            seed: 7,
            newton: NewtonOptions::default(),
            dedup_tol: 1e-6,
            cluster_radius: 1e-3,
            i1_tol: 1e-6,
            positivity_floor: 1e-9,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchDiagnostics {
    pub starts: usize,
    pub converged: usize,
    pub failed: usize,
    /// Roots on the boundary of the positive orthant, discarded.
    pub nonpositive: usize,
    /// Distinct printed-system roots the curvature engine rejected.
    pub engine_rejected: usize,
    pub distinct: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub records: Vec<EinsteinRecord>,
    pub diagnostics: SearchDiagnostics,
}

/// Log-uniform seeded starts in `[1e-2, 1e2]` per unknown, damped Newton on
/// the printed system, deduplication, and engine cross-validation.
pub fn multistart_search(ansatz: &Ansatz, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let system = EinsteinSystem::for_ansatz(ansatz)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = (libm::log(1e-2), libm::log(1e2));
    let mut diag = SearchDiagnostics { starts: cfg.starts, ..Default::default() };
    let mut roots: Vec<Vec<f64>> = Vec::new();
    for _ in 0..cfg.starts {
        let start: Vec<f64> =
            (0..system.dim()).map(|_| libm::exp(rng.gen_range(lo..hi))).collect();
        match newton_solve(&system, &start, cfg.newton) {
            Ok(z) => {
                diag.converged += 1;
                if z.iter().any(|v| *v < cfg.positivity_floor) {
                    diag.nonpositive += 1;
                    continue;
                }
                let x = system.metric(&z);
                if !roots.iter().any(|r| x_distance(&system.metric(r), &x) < cfg.dedup_tol) {
                    roots.push(z);
                }
            }
            Err(_) => diag.failed += 1,
        }
    }
    let mut records: Vec<EinsteinRecord> = Vec::new();
    for z in roots {
        let x = system.metric(&z);
        let rec = record_from_engine(ansatz, x, system.lambda(&z), Provenance::Numeric, &cfg.tolerances)?;
        if !rec.valid {
            diag.engine_rejected += 1;
            continue;
        }
        match records.iter_mut().find(|r| same_root(r, &rec, cfg)) {
            Some(kept) if rec.residual < kept.residual => *kept = rec,
            Some(_) => {}
            None => records.push(rec),
        }
    }
    records.sort_by(EinsteinRecord::order);
    diag.distinct = records.len();
    Ok(SearchOutcome { records, diagnostics: diag })
}
