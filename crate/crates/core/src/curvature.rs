//! Curvature of class-diagonal left-invariant metrics.
//!
//! The metric constants `x` weight the 1-forms `K_a` whose coefficient
//! matrices are the basis generators `M_a`. The frame vectors dual to those
//! 1-forms are `e_a = M_a / tr(M_a^2)`, so the frame brackets are
//!
//! ```text
//! c^k_{ab} = kappa * f^k_{ab} * G_kk / (G_aa G_bb)
//! ```
//!
//! with `f` the structure constants of the generators and `G` their
//! (diagonal) Gram matrix. `kappa = 1/sqrt(2)` fixes the overall scale so the
//! bi-invariant metric has Einstein constant `n/8`. The sign of `c` does not
//! matter: the connection is odd in `c` and the curvature even.
//!
//! In the frame, with `g_{ab} = x_{class(a)} delta_{ab}`:
//!
//! ```text
//! g_k Gamma^k_{ab} = 1/2 (g_k c^k_{ab} - g_a c^a_{bk} + g_b c^b_{ka})
//! R(e_a, e_b) = [A_a, A_b] - c^e_{ab} A_e,     (A_a)^d_e = Gamma^d_{ae}
//! Ric_{bc} = sum_a R^a_{cab}
//! ```

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::liealg::{
    build_scheme1_basis, build_scheme2_basis, structure_constants, GeneratorBasis, Scheme,
    StructureConstants,
};

/// Global bracket scale between the generator algebra and the frame.
pub const BRACKET_CALIBRATION: f64 = core::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Einstein residual below which a metric counts as a solution.
    pub einstein: f64,
    /// Tolerance for tensor identities.
    pub property: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { einstein: 1e-8, property: 1e-10 }
    }
}

/// Calibrated brackets `[e_a, e_b] = c^k_{ab} e_k` of the frame dual to the
/// generator 1-forms.
#[derive(Debug, Clone)]
pub struct FrameBrackets {
    d: usize,
    pairs: Vec<Vec<(usize, f64)>>,
}

impl FrameBrackets {
    pub fn from_structure_constants(sc: &StructureConstants) -> Result<Self> {
        if let Err((a, b)) = sc.gram_is_diagonal() {
            return Err(Error::NonOrthogonalBasis(a, b));
        }
        let d = sc.dim();
        let gram = sc.gram_diagonal();
        if gram.iter().any(|&g| g <= 0.0) {
            return Err(Error::SingularGram);
        }
        let mut pairs = vec![Vec::new(); d * d];
        for (a, b, k, v) in sc.nonzeros() {
            pairs[a * d + b].push((k, BRACKET_CALIBRATION * v * gram[k] / (gram[a] * gram[b])));
        }
        Ok(Self { d, pairs })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, f64)] {
        &self.pairs[a * self.d + b]
    }

    pub fn get(&self, k: usize, a: usize, b: usize) -> f64 {
        self.bracket(a, b).iter().find(|(c, _)| *c == k).map_or(0.0, |&(_, v)| v)
    }
}

/// Per-class metric constants for one ansatz.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub scheme: Scheme,
    pub n: usize,
    pub p: Option<usize>,
    pub x: Vec<f64>,
}

impl MetricSpec {
    pub fn new(basis: &GeneratorBasis, x: Vec<f64>) -> Result<Self> {
        let expected = basis.scheme.class_count();
        if x.len() != expected {
            return Err(Error::MetricArity { expected, got: x.len() });
        }
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonPositiveMetric { index, value });
        }
        Ok(Self { scheme: basis.scheme, n: basis.n, p: basis.p, x })
    }

    /// Uniform rescaling `g -> s g`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { x: self.x.iter().map(|v| v * s).collect(), ..self.clone() }
    }
}

/// Connection coefficients `Gamma^c_{ab}` (`nabla_{e_a} e_b = Gamma^c_{ab} e_c`).
#[derive(Debug, Clone)]
pub struct Connection {
    d: usize,
    gamma: Vec<f64>,
    /// `ops[a][row]` lists `(col, (A_a)^row_col)`.
    ops: Vec<Vec<Vec<(usize, f64)>>>,
}

impl Connection {
    #[inline]
    pub fn get(&self, c: usize, a: usize, b: usize) -> f64 {
        self.gamma[(c * self.d + a) * self.d + b]
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}

/// Koszul formula for a left-invariant metric diagonal in the frame.
pub fn levi_civita(frame: &FrameBrackets, g: &[f64]) -> Connection {
    let d = frame.dim();
    assert_eq!(g.len(), d);
    let mut gamma = vec![0.0; d * d * d];
    let idx = |c: usize, a: usize, b: usize| (c * d + a) * d + b;
    for a in 0..d {
        for b in 0..d {
            for &(k, v) in frame.bracket(a, b) {
                // c^k_{ab} = v feeds three Koszul terms.
                gamma[idx(k, a, b)] += 0.5 * v;
                gamma[idx(b, k, a)] -= 0.5 * v * g[k] / g[b];
                gamma[idx(a, b, k)] += 0.5 * v * g[k] / g[a];
            }
        }
    }
    let mut ops = vec![vec![Vec::new(); d]; d];
    for (c, row_block) in gamma.chunks(d * d).enumerate() {
        for a in 0..d {
            for b in 0..d {
                let v = row_block[a * d + b];
                if v != 0.0 {
                    ops[a][c].push((b, v));
                }
            }
        }
    }
    Connection { d, gamma, ops }
}

/// `out[d][c] = R^d_{cab}`, the matrix of `R(e_a, e_b)`.
fn curvature_slice(
    conn: &Connection,
    frame: &FrameBrackets,
    a: usize,
    b: usize,
    out: &mut [f64],
) {
    let d = conn.d;
    out.iter_mut().for_each(|v| *v = 0.0);
    let (aa, ab) = (&conn.ops[a], &conn.ops[b]);
    for row in 0..d {
        let dst = &mut out[row * d..(row + 1) * d];
        for &(e, v) in &aa[row] {
            for &(c, w) in &ab[e] {
                dst[c] += v * w;
            }
        }
        for &(e, v) in &ab[row] {
            for &(c, w) in &aa[e] {
                dst[c] -= v * w;
            }
        }
        for &(e, s) in frame.bracket(a, b) {
            for &(c, w) in &conn.ops[e][row] {
                dst[c] -= s * w;
            }
        }
    }
}

/// Full Riemann tensor, `R[d][c][a][b] = R^d_{cab}`.
pub fn riemann(conn: &Connection, frame: &FrameBrackets) -> Vec<f64> {
    let d = conn.d;
    let mut riem = vec![0.0; d * d * d * d];
    let mut slice = vec![0.0; d * d];
    for a in 0..d {
        for b in a + 1..d {
            curvature_slice(conn, frame, a, b, &mut slice);
            for r in 0..d {
                for c in 0..d {
                    let v = slice[r * d + c];
                    if v != 0.0 {
                        let base = (r * d + c) * d * d;
                        riem[base + a * d + b] = v;
                        riem[base + b * d + a] = -v;
                    }
                }
            }
        }
    }
    riem
}

/// `Ric_{bc} = sum_a R^a_{cab}`.
pub fn ricci(riem: &[f64], d: usize) -> Vec<f64> {
    let mut ric = vec![0.0; d * d];
    for b in 0..d {
        for c in 0..d {
            ric[b * d + c] = (0..d).map(|a| riem[((a * d + c) * d + a) * d + b]).sum();
        }
    }
    ric
}

/// `R_{dcab} R^{dcab}` with indices moved by the diagonal metric.
pub fn riem_norm_sq(riem: &[f64], g: &[f64]) -> f64 {
    let d = g.len();
    let mut acc = 0.0;
    for r in 0..d {
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let v = riem[((r * d + c) * d + a) * d + b];
                    if v != 0.0 {
                        acc += g[r] / (g[c] * g[a] * g[b]) * v * v;
                    }
                }
            }
        }
    }
    acc
}

/// `(residual, lambda_best)`: `lambda_best` is the g-trace mean of Ricci,
/// the residual is `max |R_ab - lambda_best g_ab|`.
pub fn einstein_residual(ric: &[f64], g: &[f64]) -> (f64, f64) {
    let d = g.len();
    let lambda = (0..d).map(|a| ric[a * d + a] / g[a]).sum::<f64>() / d as f64;
    let mut residual = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let target = if a == b { lambda * g[a] } else { 0.0 };
            residual = residual.max((ric[a * d + b] - target).abs());
        }
    }
    (residual, lambda)
}

/// Ricci data and scalar invariants without the rank-4 tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinSummary {
    pub d: usize,
    pub g: Vec<f64>,
    pub ricci: Vec<f64>,
    pub scalar: f64,
    pub riem_norm_sq: f64,
    pub lambda_best: f64,
    pub residual: f64,
}

impl EinsteinSummary {
    /// `I1 = |Riem|^2 / lambda^2`, defined only for Einstein metrics.
    pub fn invariant_i1(&self, tolerance: f64) -> Result<f64> {
        if !(self.residual < tolerance) {
            return Err(Error::NotEinstein { residual: self.residual });
        }
        if self.lambda_best == 0.0 {
            return Err(Error::ZeroLambda);
        }
        Ok(self.riem_norm_sq / (self.lambda_best * self.lambda_best))
    }

    pub fn is_einstein(&self, tolerance: f64) -> bool {
        self.residual < tolerance
    }

    pub fn ricci_at(&self, a: usize, b: usize) -> f64 {
        self.ricci[a * self.d + b]
    }
}

/// Stream the curvature slices, accumulating Ricci and `|Riem|^2`.
pub fn summarize(frame: &FrameBrackets, g: &[f64]) -> EinsteinSummary {
    let conn = levi_civita(frame, g);
    let d = frame.dim();
    let mut ric = vec![0.0; d * d];
    let mut norm = 0.0;
    let mut slice = vec![0.0; d * d];
    for a in 0..d {
        for b in a + 1..d {
            curvature_slice(&conn, frame, a, b, &mut slice);
            let w = 2.0 / (g[a] * g[b]);
            for r in 0..d {
                for c in 0..d {
                    let v = slice[r * d + c];
                    if v != 0.0 {
                        norm += w * g[r] / g[c] * v * v;
                    }
                }
            }
            for c in 0..d {
                ric[b * d + c] += slice[a * d + c];
                ric[a * d + c] -= slice[b * d + c];
            }
        }
    }
    let scalar = (0..d).map(|a| ric[a * d + a] / g[a]).sum();
    let (residual, lambda_best) = einstein_residual(&ric, g);
    EinsteinSummary {
        d,
        g: g.to_vec(),
        ricci: ric,
        scalar,
        riem_norm_sq: norm,
        lambda_best,
        residual,
    }
}

/// Connection, full Riemann tensor and derived quantities for one metric.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub d: usize,
    pub g: Vec<f64>,
    pub connection: Connection,
    /// `R[d][c][a][b] = R^d_{cab}`.
    pub riemann: Vec<f64>,
    pub ricci: Vec<f64>,
    pub scalar: f64,
    pub riem_norm_sq: f64,
    pub lambda_best: f64,
    pub residual: f64,
}

impl CurvatureBundle {
    pub fn compute(frame: &FrameBrackets, g: &[f64]) -> Self {
        let d = frame.dim();
        let connection = levi_civita(frame, g);
        let riem = riemann(&connection, frame);
        let ric = ricci(&riem, d);
        let scalar = (0..d).map(|a| ric[a * d + a] / g[a]).sum();
        let norm = riem_norm_sq(&riem, g);
        let (residual, lambda_best) = einstein_residual(&ric, g);
        Self {
            d,
            g: g.to_vec(),
            connection,
            riemann: riem,
            ricci: ric,
            scalar,
            riem_norm_sq: norm,
            lambda_best,
            residual,
        }
    }

    /// `R^r_{cab}`.
    pub fn riemann_at(&self, r: usize, c: usize, a: usize, b: usize) -> f64 {
        let d = self.d;
        self.riemann[((r * d + c) * d + a) * d + b]
    }

    /// Fully lowered `R_{rcab} = g_r R^r_{cab}`.
    pub fn lowered(&self, r: usize, c: usize, a: usize, b: usize) -> f64 {
        self.g[r] * self.riemann_at(r, c, a, b)
    }

    pub fn ricci_at(&self, a: usize, b: usize) -> f64 {
        self.ricci[a * self.d + b]
    }
}

/// A generator basis with its structure constants and calibrated frame,
/// ready to evaluate curvature for any metric constants.
#[derive(Debug, Clone)]
pub struct Ansatz {
    pub basis: GeneratorBasis,
    pub constants: StructureConstants,
    pub frame: FrameBrackets,
}

impl Ansatz {
    pub fn from_basis(basis: GeneratorBasis) -> Result<Self> {
        let constants = structure_constants(&basis)?;
        Self::from_parts(basis, constants)
    }

    /// Reuse precomputed (e.g. cached) structure constants.
    pub fn from_parts(basis: GeneratorBasis, constants: StructureConstants) -> Result<Self> {
        let frame = FrameBrackets::from_structure_constants(&constants)?;
        Ok(Self { basis, constants, frame })
    }

    pub fn scheme1(n: usize) -> Result<Self> {
        Self::from_basis(build_scheme1_basis(n)?)
    }

    pub fn scheme2(n: usize, p: usize) -> Result<Self> {
        Self::from_basis(build_scheme2_basis(n, p)?)
    }

    pub fn scheme(&self) -> Scheme {
        self.basis.scheme
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn p(&self) -> Option<usize> {
        self.basis.p
    }

    /// Frame metric diagonal for per-class constants `x`.
    pub fn frame_metric(&self, x: &[f64]) -> Result<Vec<f64>> {
        let spec = MetricSpec::new(&self.basis, x.to_vec())?;
        Ok(self.basis.expand(&spec.x))
    }

    pub fn summary(&self, x: &[f64]) -> Result<EinsteinSummary> {
        Ok(summarize(&self.frame, &self.frame_metric(x)?))
    }

    pub fn bundle(&self, x: &[f64]) -> Result<CurvatureBundle> {
        Ok(CurvatureBundle::compute(&self.frame, &self.frame_metric(x)?))
    }

    /// Mean diagonal Ricci component `R_aa` per class (`None` for empty classes).
    pub fn class_ricci(&self, summary: &EinsteinSummary) -> Vec<Option<f64>> {
        let k = self.basis.scheme.class_count();
        let mut sum = vec![0.0; k];
        let mut count = vec![0usize; k];
        for (a, c) in self.basis.class_of.iter().enumerate() {
            sum[c.slot()] += summary.ricci_at(a, a);
            count[c.slot()] += 1;
        }
        sum.iter().zip(&count).map(|(s, &c)| (c > 0).then(|| s / c as f64)).collect()
    }

    /// Largest deviation of Ricci from a per-class multiple of the identity.
    pub fn block_scalar_defect(&self, summary: &EinsteinSummary) -> f64 {
        let means = self.class_ricci(summary);
        let d = summary.d;
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                let want = if a == b {
                    means[self.basis.class_of[a].slot()].unwrap_or(0.0)
                } else {
                    0.0
                };
                worst = worst.max((summary.ricci_at(a, b) - want).abs());
            }
        }
        worst
    }

    /// Classes that contain at least one generator.
    pub fn occupied(&self) -> Vec<bool> {
        self.basis.class_sizes().iter().map(|&s| s > 0).collect()
    }
}
