//! Generator bases of `su(n)` for the two metric ansatze and their real
//! structure constants.
//!
//! Generators are traceless Hermitian `n x n` matrices `T_a`. The bracket is
//! written `[T_a, T_b] = i f^c_{ab} T_c` with real `f`, recovered by projecting
//! the commutator against the trace form `G_{ab} = Re tr(T_a T_b)`.
//!
//! Ordering is deterministic: off-diagonal pairs `(A, B)` with `A < B` in
//! lexicographic order, symmetric combinations first, then antisymmetric,
//! then the diagonal mixtures.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::linalg;

/// Entries of `f` below this magnitude are commutator round-off.
const ROUNDOFF: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Scheme {
    /// Three classes: symmetric off-diagonal, antisymmetric off-diagonal, diagonal.
    One,
    /// Four classes adapted to `SU(p) x SU(q) ⊂ SU(p+q)`.
    Two,
}

impl Scheme {
    pub fn number(self) -> u8 {
        match self {
            Scheme::One => 1,
            Scheme::Two => 2,
        }
    }

    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(Scheme::One),
            2 => Some(Scheme::Two),
            _ => None,
        }
    }

    /// Number of metric constants (generator classes).
    pub fn class_count(self) -> usize {
        match self {
            Scheme::One => 3,
            Scheme::Two => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GeneratorClass {
    OffDiagSym,
    OffDiagAnti,
    Diag,
    C1,
    C2,
    C3,
    C4,
}

impl GeneratorClass {
    /// Position of this class in the metric-constant vector `x`.
    pub fn slot(self) -> usize {
        match self {
            GeneratorClass::OffDiagSym | GeneratorClass::C1 => 0,
            GeneratorClass::OffDiagAnti | GeneratorClass::C2 => 1,
            GeneratorClass::Diag | GeneratorClass::C3 => 2,
            GeneratorClass::C4 => 3,
        }
    }
}

/// Ordered generator list with a class label per generator.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    pub n: usize,
    pub scheme: Scheme,
    /// Split parameter, Scheme 2 only.
    pub p: Option<usize>,
    pub generators: Vec<CMatrix>,
    pub class_of: Vec<GeneratorClass>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn q(&self) -> Option<usize> {
        self.p.map(|p| self.n - p)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.scheme.class_count()];
        for c in &self.class_of {
            sizes[c.slot()] += 1;
        }
        sizes
    }

    /// Class sizes the construction must produce.
    pub fn expected_class_sizes(&self) -> Vec<usize> {
        let n = self.n;
        match self.scheme {
            Scheme::One => {
                let m = n * (n - 1) / 2;
                vec![m, m, n - 1]
            }
            Scheme::Two => {
                let p = self.p.unwrap_or(0);
                let q = n - p;
                let sq = |k: usize| (k * k).saturating_sub(1);
                vec![sq(p), sq(q), 2 * p * q, usize::from(p > 0 && q > 0)]
            }
        }
    }

    /// Expand a per-class vector into one entry per generator.
    pub fn expand(&self, per_class: &[f64]) -> Vec<f64> {
        self.class_of.iter().map(|c| per_class[c.slot()]).collect()
    }
}

/// `P` from the diagonal mixing, row-major `n x n`.
///
/// Upper-left `(n-1) x (n-1)` block is `2/(n-1) J - I`, bottom-right entry 1.
pub fn p_matrix(n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    if n >= 2 {
        let w = 2.0 / (n - 1) as f64;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                p[i * n + j] = if i == j { w - 1.0 } else { w };
            }
        }
    }
    p[n * n - 1] = 1.0;
    p
}

/// `Q` from the diagonal mixing, row-major `n x n`.
///
/// Row `j < n` is `(1, ..., 1, -j, 0, ..., 0) / sqrt(j(j+1))` (one-based `j`);
/// the last row is `(1, ..., 1) / sqrt(n)`.
pub fn q_matrix(n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for j in 1..n {
        let norm = libm::sqrt((j * (j + 1)) as f64);
        let row = j - 1;
        for k in 0..j {
            q[row * n + k] = 1.0 / norm;
        }
        q[row * n + j] = -(j as f64) / norm;
    }
    let last = 1.0 / libm::sqrt(n as f64);
    for k in 0..n {
        q[(n - 1) * n + k] = last;
    }
    q
}

/// First `n - 1` rows of `P Q`: the traceless diagonal mixtures.
/// The last row (the `u(1)` direction) is dropped.
pub fn diagonal_mixing(n: usize) -> Vec<Vec<f64>> {
    let p = p_matrix(n);
    let q = q_matrix(n);
    (0..n.saturating_sub(1))
        .map(|i| (0..n).map(|j| (0..n).map(|k| p[i * n + k] * q[k * n + j]).sum()).collect())
        .collect()
}

/// Append the Scheme-1-style generators supported on `indices`.
fn push_block(
    n: usize,
    indices: &[usize],
    classes: [GeneratorClass; 3],
    gens: &mut Vec<CMatrix>,
    class_of: &mut Vec<GeneratorClass>,
) {
    let k = indices.len();
    let i = Complex64::new(0.0, 1.0);
    let pairs: Vec<(usize, usize)> =
        (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    for &(a, b) in &pairs {
        let (ia, ib) = (indices[a], indices[b]);
        gens.push(&CMatrix::unit(n, ia, ib) + &CMatrix::unit(n, ib, ia));
        class_of.push(classes[0]);
    }
    for &(a, b) in &pairs {
        let (ia, ib) = (indices[a], indices[b]);
        gens.push((&CMatrix::unit(n, ia, ib) - &CMatrix::unit(n, ib, ia)).scale(i));
        class_of.push(classes[1]);
    }
    if k >= 2 {
        // Scaled by sqrt(2) so every generator of the block has tr T^2 = 2.
        let s = core::f64::consts::SQRT_2;
        for row in diagonal_mixing(k) {
            let mut entries = vec![0.0; n];
            for (a, v) in row.iter().enumerate() {
                entries[indices[a]] = s * v;
            }
            gens.push(CMatrix::diag(&entries));
            class_of.push(classes[2]);
        }
    }
}

pub fn build_scheme1_basis(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    let mut generators = Vec::with_capacity(n * n - 1);
    let mut class_of = Vec::with_capacity(n * n - 1);
    let indices: Vec<usize> = (0..n).collect();
    push_block(
        n,
        &indices,
        [GeneratorClass::OffDiagSym, GeneratorClass::OffDiagAnti, GeneratorClass::Diag],
        &mut generators,
        &mut class_of,
    );
    Ok(GeneratorBasis { n, scheme: Scheme::One, p: None, generators, class_of })
}

/// Scheme 2 basis for the split `n = p + q`.
///
/// `p` or `q` equal to 0 or 1 leaves the corresponding classes empty.
pub fn build_scheme2_basis(n: usize, p: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    if p > n {
        return Err(Error::SplitOutOfRange { n, p });
    }
    let q = n - p;
    let mut generators = Vec::with_capacity(n * n - 1);
    let mut class_of = Vec::with_capacity(n * n - 1);
    let first: Vec<usize> = (0..p).collect();
    let second: Vec<usize> = (p..n).collect();
    let c1 = GeneratorClass::C1;
    let c2 = GeneratorClass::C2;
    push_block(n, &first, [c1; 3], &mut generators, &mut class_of);
    push_block(n, &second, [c2; 3], &mut generators, &mut class_of);

    let i = Complex64::new(0.0, 1.0);
    for &a in &first {
        for &b in &second {
            generators.push(&CMatrix::unit(n, a, b) + &CMatrix::unit(n, b, a));
            class_of.push(GeneratorClass::C3);
            generators.push((&CMatrix::unit(n, a, b) - &CMatrix::unit(n, b, a)).scale(i));
            class_of.push(GeneratorClass::C3);
        }
    }
    if p > 0 && q > 0 {
        let entries: Vec<f64> =
            (0..n).map(|k| if k < p { q as f64 } else { -(p as f64) }).collect();
        generators.push(CMatrix::diag(&entries));
        class_of.push(GeneratorClass::C4);
    }
    Ok(GeneratorBasis { n, scheme: Scheme::Two, p: Some(p), generators, class_of })
}

/// Real structure constants `f^c_{ab}` together with the Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    d: usize,
    /// Dense `f[c][a][b]`.
    f: Vec<f64>,
    /// Dense row-major `d x d` Gram matrix.
    gram: Vec<f64>,
    /// Nonzero entries per ordered pair `(a, b)`: list of `(c, f^c_{ab})`.
    pairs: Vec<Vec<(usize, f64)>>,
}

impl StructureConstants {
    /// Assemble from a Gram matrix and sparse `(a, b, c, value)` records.
    ///
    /// Records are taken as given; antisymmetric partners must be present.
    pub fn from_parts(d: usize, gram: Vec<f64>, entries: &[(usize, usize, usize, f64)]) -> Self {
        assert_eq!(gram.len(), d * d);
        let mut f = vec![0.0; d * d * d];
        for &(a, b, c, v) in entries {
            f[(c * d + a) * d + b] = v;
        }
        Self::from_dense(d, f, gram)
    }

    fn from_dense(d: usize, f: Vec<f64>, gram: Vec<f64>) -> Self {
        let mut pairs = vec![Vec::new(); d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = f[(c * d + a) * d + b];
                    if v != 0.0 {
                        pairs[a * d + b].push((c, v));
                    }
                }
            }
        }
        Self { d, f, gram, pairs }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `f^c_{ab}`.
    #[inline]
    pub fn get(&self, c: usize, a: usize, b: usize) -> f64 {
        self.f[(c * self.d + a) * self.d + b]
    }

    pub fn gram(&self, a: usize, b: usize) -> f64 {
        self.gram[a * self.d + b]
    }

    pub fn gram_diagonal(&self) -> Vec<f64> {
        (0..self.d).map(|a| self.gram(a, a)).collect()
    }

    /// Nonzero `(c, f^c_{ab})` for a fixed ordered pair.
    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, f64)] {
        &self.pairs[a * self.d + b]
    }

    /// All nonzero entries as `(a, b, c, value)`, ordered by `(a, b, c)`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        (0..self.d).flat_map(move |a| {
            (0..self.d)
                .flat_map(move |b| self.bracket(a, b).iter().map(move |&(c, v)| (a, b, c, v)))
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }

    /// `f_{abc} = f^e_{ab} G_{ec}`.
    pub fn lowered(&self, a: usize, b: usize, c: usize) -> f64 {
        self.bracket(a, b).iter().map(|&(e, v)| v * self.gram(e, c)).sum()
    }

    /// Largest `|f^c_{ab} + f^c_{ba}|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let d = self.d;
        let mut worst = 0.0f64;
        for c in 0..d {
            for a in 0..d {
                for b in a..d {
                    worst = worst.max((self.get(c, a, b) + self.get(c, b, a)).abs());
                }
            }
        }
        worst
    }

    /// Largest component of the Jacobiator
    /// `f^e_{ab} f^g_{ec} + f^e_{bc} f^g_{ea} + f^e_{ca} f^g_{eb}`.
    pub fn jacobi_defect(&self) -> f64 {
        let d = self.d;
        let mut acc = vec![0.0; d];
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    acc.iter_mut().for_each(|v| *v = 0.0);
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for &(e, v) in self.bracket(x, y) {
                            for &(g, w) in self.bracket(e, z) {
                                acc[g] += v * w;
                            }
                        }
                    }
                    worst = acc.iter().fold(worst, |m, v| m.max(v.abs()));
                }
            }
        }
        worst
    }

    /// Largest deviation of the lowered tensor from total antisymmetry.
    pub fn lowered_antisymmetry_defect(&self) -> f64 {
        let d = self.d;
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let abc = self.lowered(a, b, c);
                    let bca = self.lowered(b, c, a);
                    let acb = self.lowered(a, c, b);
                    worst = worst.max((abc - bca).abs()).max((abc + acb).abs());
                }
            }
        }
        worst
    }

    /// True when the Gram matrix has no off-diagonal entries.
    pub fn gram_is_diagonal(&self) -> core::result::Result<(), (usize, usize)> {
        for a in 0..self.d {
            for b in 0..self.d {
                if a != b && self.gram(a, b).abs() > 1e-12 {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }
}

fn gram_matrix(basis: &GeneratorBasis) -> Vec<f64> {
    let d = basis.dim();
    let mut gram = vec![0.0; d * d];
    for a in 0..d {
        for b in a..d {
            let v = basis.generators[a].trace_product(&basis.generators[b]).re;
            gram[a * d + b] = v;
            gram[b * d + a] = v;
        }
    }
    gram
}

/// Solve `[T_a, T_b] = i f^c_{ab} T_c` for real `f` by Gram projection.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants> {
    let d = basis.dim();
    let gram = gram_matrix(basis);
    let gram_inv = linalg::invert(&gram, d).map_err(|_| Error::SingularGram)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let mut f = vec![0.0; d * d * d];
    let mut proj = vec![0.0; d];
    for a in 0..d {
        for b in a + 1..d {
            let comm = basis.generators[a].commutator(&basis.generators[b]);
            if comm.is_zero() {
                continue;
            }
            let comm = comm.scale(minus_i);
            for (e, t) in basis.generators.iter().enumerate() {
                proj[e] = comm.trace_product(t).re;
            }
            for c in 0..d {
                let row = &gram_inv[c * d..(c + 1) * d];
                let v: f64 = row.iter().zip(&proj).map(|(g, p)| g * p).sum();
                if v.abs() > ROUNDOFF {
                    f[(c * d + a) * d + b] = v;
                    f[(c * d + b) * d + a] = -v;
                }
            }
        }
    }
    Ok(StructureConstants::from_dense(d, f, gram))
}

/// Diagnostics for a generator basis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BasisReport {
    pub n: usize,
    pub scheme: Scheme,
    pub p: Option<usize>,
    pub dim: usize,
    pub class_sizes: Vec<usize>,
    pub expected_class_sizes: Vec<usize>,
    pub max_hermiticity_defect: f64,
    pub max_trace: f64,
    /// Generators failing Hermiticity or tracelessness.
    pub flagged: Vec<usize>,
    pub gram_diagonal: Vec<f64>,
    pub gram_max_offdiagonal: f64,
    /// Gram eigenvalue range; the Gram matrix of a valid basis is diagonal,
    /// so these are read off the diagonal when the off-diagonal part vanishes.
    pub gram_min: f64,
    pub gram_max: f64,
    pub independent: bool,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.flagged.is_empty()
            && self.independent
            && self.class_sizes == self.expected_class_sizes
            && self.dim == self.n * self.n - 1
    }
}

/// Check Hermiticity, tracelessness, Gram data and class counts.
pub fn validate_basis(basis: &GeneratorBasis) -> BasisReport {
    const TOL: f64 = 1e-12;
    let mut flagged = Vec::new();
    let mut max_herm = 0.0f64;
    let mut max_trace = 0.0f64;
    for (idx, t) in basis.generators.iter().enumerate() {
        let herm = t.max_abs_diff(&t.adjoint());
        let tr = t.trace();
        let tr = libm::hypot(tr.re, tr.im);
        max_herm = max_herm.max(herm);
        max_trace = max_trace.max(tr);
        if herm > TOL || tr > TOL {
            flagged.push(idx);
        }
    }
    let d = basis.dim();
    let gram = gram_matrix(basis);
    let gram_diagonal: Vec<f64> = (0..d).map(|a| gram[a * d + a]).collect();
    let mut off = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            if a != b {
                off = off.max(gram[a * d + b].abs());
            }
        }
    }
    let independent = d > 0 && linalg::invert(&gram, d).is_ok();
    let gram_min = gram_diagonal.iter().copied().fold(f64::INFINITY, f64::min);
    let gram_max = gram_diagonal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    BasisReport {
        n: basis.n,
        scheme: basis.scheme,
        p: basis.p,
        dim: d,
        class_sizes: basis.class_sizes(),
        expected_class_sizes: basis.expected_class_sizes(),
        max_hermiticity_defect: max_herm,
        max_trace,
        flagged,
        gram_diagonal,
        gram_max_offdiagonal: off,
        gram_min,
        gram_max,
        independent: independent && off <= TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn scheme1_su2_generators() {
        let b = build_scheme1_basis(2).unwrap();
        assert_eq!(b.dim(), 3);
        let s1 = &CMatrix::unit(2, 0, 1) + &CMatrix::unit(2, 1, 0);
        assert_eq!(b.generators[0], s1);
        let i = Complex64::new(0.0, 1.0);
        let s2 = (&CMatrix::unit(2, 0, 1) - &CMatrix::unit(2, 1, 0)).scale(i);
        assert_eq!(b.generators[1], s2);
        // P block is the 1x1 identity for n = 2; the row is (1, -1)/sqrt(2).
        assert_eq!(p_matrix(2)[0], 1.0);
        let rows = diagonal_mixing(2);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!(close(rows[0][0], r, 1e-15) && close(rows[0][1], -r, 1e-15));
        // Stored generator carries the sqrt(2) normalization: diag(1, -1).
        assert!(b.generators[2].max_abs_diff(&CMatrix::diag(&[1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn scheme1_su3_diagonal_block() {
        let b = build_scheme1_basis(3).unwrap();
        assert_eq!(b.class_sizes(), vec![3, 3, 2]);
        let p = p_matrix(3);
        // (2/2) J - I on the upper 2x2 block.
        assert_eq!(&p[..], &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let rows = diagonal_mixing(3);
        // Row 1 of P Q is row 2 of Q: (1, 1, -2)/sqrt(6).
        let s6 = libm::sqrt(6.0);
        for (got, want) in rows[0].iter().zip([1.0 / s6, 1.0 / s6, -2.0 / s6]) {
            assert!(close(*got, want, 1e-15));
        }
        let s2 = core::f64::consts::FRAC_1_SQRT_2;
        for (got, want) in rows[1].iter().zip([s2, -s2, 0.0]) {
            assert!(close(*got, want, 1e-15));
        }
    }

    #[test]
    fn mixing_rows_are_orthonormal() {
        for n in 2..=8 {
            let rows = diagonal_mixing(n);
            for (i, ri) in rows.iter().enumerate() {
                assert!(ri.iter().sum::<f64>().abs() < 1e-14);
                for (j, rj) in rows.iter().enumerate() {
                    let dot: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(close(dot, want, 1e-14), "n={n} ({i},{j}) {dot}");
                }
            }
        }
    }

    #[test]
    fn scheme2_class_sizes() {
        let b = build_scheme2_basis(4, 2).unwrap();
        assert_eq!(b.class_sizes(), vec![3, 3, 8, 1]);
        assert_eq!(b.dim(), 15);
        let b = build_scheme2_basis(5, 3).unwrap();
        assert_eq!(b.class_sizes(), vec![8, 3, 12, 1]);
        let b = build_scheme2_basis(5, 1).unwrap();
        assert_eq!(b.class_sizes(), vec![0, 15, 8, 1]);
        let b = build_scheme2_basis(4, 0).unwrap();
        assert_eq!(b.class_sizes(), vec![0, 15, 0, 0]);
    }

    #[test]
    fn class4_generator() {
        let b = build_scheme2_basis(4, 2).unwrap();
        let t = b.generators.last().unwrap();
        assert_eq!(*t, CMatrix::diag(&[2.0, 2.0, -2.0, -2.0]));
        assert_eq!(t.trace().re, 0.0);
        assert_eq!(t.trace_product(t).re, 16.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(build_scheme1_basis(1).unwrap_err(), Error::RankTooSmall(1));
        assert_eq!(build_scheme2_basis(4, 5).unwrap_err(), Error::SplitOutOfRange { n: 4, p: 5 });
    }

    #[test]
    fn su2_structure_constants() {
        let b = build_scheme1_basis(2).unwrap();
        let sc = structure_constants(&b).unwrap();
        // [s1, -s2'] = ... every nonzero |f| is 2 with tr T^2 = 2 normalization.
        assert!(close(sc.get(2, 0, 1).abs(), 2.0, 1e-14));
        assert!(close(sc.lowered(0, 1, 2), sc.lowered(1, 2, 0), 1e-14));
        assert!(close(sc.lowered(0, 1, 2), -sc.lowered(1, 0, 2), 1e-14));
        for a in 0..3 {
            for c in 0..3 {
                assert_eq!(sc.get(c, a, a), 0.0);
            }
        }
    }

    #[test]
    fn su3_lowered_antisymmetry() {
        let b = build_scheme1_basis(3).unwrap();
        let sc = structure_constants(&b).unwrap();
        assert!(sc.lowered_antisymmetry_defect() < 1e-12);
        assert!(sc.jacobi_defect() < 1e-12);
    }

    #[test]
    fn report_for_scheme1_su3() {
        let r = validate_basis(&build_scheme1_basis(3).unwrap());
        assert!(r.passed());
        for g in &r.gram_diagonal {
            assert!(close(*g, 2.0, 1e-14));
        }
    }

    #[test]
    fn report_for_scheme2_class4() {
        let r = validate_basis(&build_scheme2_basis(4, 2).unwrap());
        assert!(r.passed());
        assert_eq!(*r.gram_diagonal.last().unwrap(), 16.0);
        assert_eq!(r.gram_max, 16.0);
    }

    #[test]
    fn corrupted_generator_is_flagged() {
        let mut b = build_scheme1_basis(3).unwrap();
        b.generators[4] = CMatrix::diag(&[1.0, 0.0, 0.0]);
        let r = validate_basis(&b);
        assert!(!r.passed());
        assert_eq!(r.flagged, vec![4]);
    }
}
