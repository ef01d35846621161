//! Characters, restriction, and weights of solvable matrix algebras.
//!
//! Weights come from a simultaneous triangularization (Lie's theorem): a
//! common eigenvector is located by intersecting eigenspaces of the basis
//! operators one at a time, then the search recurses on the orthogonal
//! complement. Eigenvalues of defective operators are only accurate to about
//! `ε^{1/k}`, so each eigenspace search also tries the means of eigenvalue
//! clusters at a ladder of radii; a candidate is kept only if it yields a
//! numerical kernel.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{is_solvable_algebra, MatrixLieAlgebra, Subalgebra};
use crate::numeric::{
    canonical_scalar, cmp_scalar_slices, columns, eigenvalues_raw, kernel, CMatrix,
    CVector, Matrix, Scalar, ToleranceConfig,
};

/// A linear functional given by its values on a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Character {
    #[serde(with = "crate::numeric::scalar_list")]
    values: Vec<Scalar>,
}

impl Character {
    pub fn new(values: Vec<Scalar>) -> Self {
        Self { values }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Scalar::new(0.0, 0.0); n])
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Evaluation on a coefficient vector.
    pub fn eval(&self, x: &CVector) -> Scalar {
        self.values.iter().zip(x.iter()).map(|(f, x)| f * x).sum()
    }

    /// Largest `|f([B_i, B_j])|` over basis pairs.
    pub fn residual(&self, alg: &MatrixLieAlgebra) -> f64 {
        let n = alg.dim();
        let mut worst = 0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let s: Scalar = (0..n)
                    .map(|k| alg.structure_constant(i, j, k) * self.values[k])
                    .sum();
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// Fails with `NotCharacter` unless `f` vanishes on `[L, L]` within
    /// `value_tol` (relative to the sizes of `f` and the structure constants).
    pub fn check(&self, alg: &MatrixLieAlgebra, cfg: &ToleranceConfig) -> Result<()> {
        if self.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: self.dim(),
            });
        }
        let r = self.residual(alg);
        if r > cfg.value_tol() * 1f64.max(self.max_abs() * alg.max_structure_constant()) {
            return Err(Error::NotCharacter(r));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn close_to(&self, other: &Character, cfg: &ToleranceConfig) -> bool {
        cfg.slices_close(&self.values, &other.values)
    }

    /// Values on the basis of `h`, whose coefficient vectors refer to the basis
    /// this character is written in.
    pub fn restrict(&self, h: &Subalgebra) -> Result<Character> {
        restrict_character(self, h)
    }

    pub(crate) fn canonical(&self) -> Character {
        Character::new(self.values.iter().map(|z| canonical_scalar(*z)).collect())
    }

    fn add(&self, other: &[Scalar], sign: f64) -> Character {
        Character::new(
            self.values
                .iter()
                .zip(other)
                .map(|(a, b)| a + b * sign)
                .collect(),
        )
    }
}

/// Basis (as coefficient functionals) of the characters of `alg`: the
/// annihilator of the derived algebra.
pub fn character_space(
    alg: &Arc<MatrixLieAlgebra>,
    cfg: &ToleranceConfig,
) -> Result<Vec<CVector>> {
    let whole = Subalgebra::whole(alg);
    let derived = whole.commutator(&whole, cfg)?;
    let n = alg.dim();
    if derived.is_zero() {
        return Ok(columns(&CMatrix::identity(n, n)));
    }
    let k = kernel(&derived.frame().transpose(), cfg.rank_tol(), 1.0)?;
    Ok(columns(&k))
}

pub fn restrict_character(f: &Character, h: &Subalgebra) -> Result<Character> {
    if h.parent().dim() != f.dim() {
        return Err(Error::NotSubspace(format!(
            "character has {} values but the subalgebra lives in a {}-dimensional algebra",
            f.dim(),
            h.parent().dim()
        )));
    }
    Ok(Character::new(h.coeffs().iter().map(|v| f.eval(v)).collect()))
}

/// Weights of a solvable matrix algebra with the triangularizing basis change.
#[derive(Debug, Clone)]
pub struct WeightList {
    /// Distinct weights, sorted.
    pub weights: Vec<Character>,
    /// All `d` diagonal functionals in triangular order.
    pub multiset: Vec<Character>,
    /// Unitary `T` with `T⁻¹ B_i T` upper triangular.
    pub transform: Matrix,
}

/// A unitary that brings every operator to upper-triangular form, with the
/// diagonals read off position by position.
#[derive(Debug, Clone)]
pub struct Triangularization {
    pub transform: CMatrix,
    /// `diagonals[p][i]` is entry `(p, p)` of `T* ops[i] T`.
    pub diagonals: Vec<Vec<Scalar>>,
    /// Largest relative strictly-lower residual over the operators.
    pub residual: f64,
}

/// Triangularizes operators on `C^d` that generate a solvable algebra.
pub fn triangularize(
    ops: &[CMatrix],
    d: usize,
    cfg: &ToleranceConfig,
) -> Result<Triangularization> {
    let scale = ops.iter().map(|o| o.norm()).fold(0.0, f64::max);
    // operators at roundoff level relative to the family are treated as zero
    let norms: Vec<f64> = ops
        .iter()
        .map(|o| o.norm())
        .map(|n| if n <= cfg.rank_tol() * scale { 0.0 } else { n })
        .collect();
    let mut transform = CMatrix::zeros(d, d);
    let mut frame = CMatrix::identity(d, d);
    let mut current: Vec<CMatrix> = ops.to_vec();
    for pos in 0..d {
        let m = d - pos;
        let w0 = CMatrix::identity(m, m);
        let v = search(&current, &norms, 0, w0, cfg)?.ok_or_else(|| {
            Error::NumericalBreakdown(format!(
                "no common eigenvector at triangularization step {}",
                pos + 1
            ))
        })?;
        transform.set_column(pos, &(&frame * &v));
        if m == 1 {
            break;
        }
        let vstar = CMatrix::from_fn(1, m, |_, j| v[j].conj());
        let complement = kernel(&vstar, 1e-12, 0.0)?;
        current = current
            .iter()
            .map(|c| complement.adjoint() * c * &complement)
            .collect();
        frame = &frame * complement;
    }

    let mut diagonals = vec![Vec::with_capacity(ops.len()); d];
    let mut residual = 0f64;
    for (op, norm) in ops.iter().zip(&norms) {
        let t = transform.adjoint() * op * &transform;
        let mut lower = 0f64;
        for i in 0..d {
            diagonals[i].push(t[(i, i)]);
            for j in 0..i {
                lower += t[(i, j)].norm_sqr();
            }
        }
        let lower = lower.sqrt();
        let norm = norm.max(cfg.rank_tol() * scale);
        if norm > 0.0 {
            residual = residual.max(lower / norm);
        }
        if lower > cfg.value_tol() * norm {
            return Err(Error::NumericalBreakdown(format!(
                "triangularization residual {lower:e} exceeds tolerance"
            )));
        }
    }
    Ok(Triangularization {
        transform,
        diagonals,
        residual,
    })
}

/// Depth-first search for a common eigenvector inside the span of the
/// orthonormal frame `w`, fixing one eigenvalue per operator.
fn search(
    ops: &[CMatrix],
    norms: &[f64],
    idx: usize,
    w: CMatrix,
    cfg: &ToleranceConfig,
) -> Result<Option<CVector>> {
    if idx == ops.len() {
        return Ok(Some(w.column(0).into_owned()));
    }
    let c = &ops[idx];
    let s = norms[idx];
    if s == 0.0 {
        return search(ops, norms, idx + 1, w, cfg);
    }
    let m = c.nrows();
    let compressed = w.adjoint() * c * &w;
    let mut raw = eigenvalues_raw(&compressed)?;
    raw.extend(eigenvalues_raw(c)?);
    for lambda in eigenvalue_candidates(&raw, s) {
        let shifted = (c - CMatrix::identity(m, m) * lambda) * &w;
        let k = kernel(&shifted, cfg.rank_tol(), s)?;
        if k.ncols() == 0 {
            continue;
        }
        if let Some(v) = search(ops, norms, idx + 1, &w * k, cfg)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Cluster means at radii from coarse to fine, followed by the raw values.
fn eigenvalue_candidates(raw: &[Scalar], scale: f64) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    let push = |z: Scalar, out: &mut Vec<Scalar>| {
        if !out.iter().any(|u| (u - z).norm() <= 1e-13 * scale) {
            out.push(z);
        }
    };
    for exp in 1..=8 {
        let radius = 10f64.powi(-exp) * scale;
        for cluster in clusters(raw, radius) {
            let mean = cluster.iter().sum::<Scalar>() / Scalar::new(cluster.len() as f64, 0.0);
            push(mean, &mut out);
        }
    }
    for &z in raw {
        push(z, &mut out);
    }
    out
}

/// Single-linkage clusters at the given radius, in order of first member.
fn clusters(values: &[Scalar], radius: f64) -> Vec<Vec<Scalar>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(values[i]),
            None => groups.push((r, vec![values[i]])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Triangularizes the defining representation of a solvable algebra.
pub fn simultaneous_triangularize(
    alg: &Arc<MatrixLieAlgebra>,
    cfg: &ToleranceConfig,
) -> Result<WeightList> {
    if !is_solvable_algebra(alg, cfg)? {
        return Err(Error::NotSolvable);
    }
    let ops: Vec<CMatrix> = alg.basis().iter().map(|b| b.as_cmatrix().clone()).collect();
    let tri = triangularize(&ops, alg.space_dim(), cfg)?;
    let multiset: Vec<Character> = tri.diagonals.into_iter().map(Character::new).collect();
    let weights = normalize_points(multiset.clone(), cfg);
    Ok(WeightList {
        weights,
        multiset,
        transform: Matrix::from_cmatrix(tri.transform)?,
    })
}

/// Weights of the adjoint representation, with multiplicity.
pub fn adjoint_weights(alg: &MatrixLieAlgebra, cfg: &ToleranceConfig) -> Result<Vec<Character>> {
    let n = alg.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let ops: Vec<CMatrix> = (0..n).map(|i| alg.ad_matrix(i)).collect();
    let tri = triangularize(&ops, n, cfg)?;
    Ok(tri.diagonals.into_iter().map(Character::new).collect())
}

/// Every character that can carry homology of the Chevalley–Eilenberg
/// complex: `w ± (sum of a sub-multiset of adjoint weights)` for each weight
/// `w` of the defining representation. `L` acts trivially on its own
/// homology, so a nonzero homology group forces `0` to be a weight of
/// `Λ^p L ⊗ X ⊗ C_{-f}`, which pins `f` to this finite set.
pub fn spectral_candidates(
    alg: &Arc<MatrixLieAlgebra>,
    cfg: &ToleranceConfig,
) -> Result<Vec<Character>> {
    let n = alg.dim();
    if n == 0 {
        return Ok(vec![Character::zero(0)]);
    }
    let weights = simultaneous_triangularize(alg, cfg)?.weights;
    let ad = adjoint_weights(alg, cfg)?;
    let mut sums: Vec<Character> = Vec::new();
    for mask in 0u32..(1 << n) {
        let mut s = Character::zero(n);
        for (k, w) in ad.iter().enumerate() {
            if mask & (1 << k) != 0 {
                s = s.add(w.values(), 1.0);
            }
        }
        if !sums.iter().any(|t| t.close_to(&s, cfg)) {
            sums.push(s);
        }
    }
    let mut out = Vec::new();
    for w in &weights {
        for s in &sums {
            for sign in [1.0, -1.0] {
                let f = w.add(s.values(), sign);
                if !out.iter().any(|g: &Character| g.close_to(&f, cfg)) {
                    out.push(f);
                }
            }
        }
    }
    out.sort_by(|a, b| cmp_scalar_slices(a.values(), b.values()));
    Ok(out)
}

/// Deduplicates at `value_tol` (first representative wins), snaps values to
/// a fine grid and sorts lexicographically.
pub fn normalize_points(points: Vec<Character>, cfg: &ToleranceConfig) -> Vec<Character> {
    let mut out: Vec<Character> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.close_to(&p, cfg)) {
            out.push(p);
        }
    }
    let mut out: Vec<Character> = out.iter().map(Character::canonical).collect();
    out.sort_by(|a, b| cmp_scalar_slices(a.values(), b.values()));
    out
}

/// Result of a greedy one-to-one matching of two character sets.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SetMatch {
    pub unmatched_left: Vec<Character>,
    pub unmatched_right: Vec<Character>,
}

impl SetMatch {
    pub fn equal(&self) -> bool {
        self.unmatched_left.is_empty() && self.unmatched_right.is_empty()
    }
}

/// Matches each left point to the first unused right point within
/// `value_tol`.
pub fn match_sets(left: &[Character], right: &[Character], cfg: &ToleranceConfig) -> SetMatch {
    let mut used = vec![false; right.len()];
    let mut unmatched_left = Vec::new();
    for a in left {
        match (0..right.len()).find(|&j| !used[j] && a.close_to(&right[j], cfg)) {
            Some(j) => used[j] = true,
            None => unmatched_left.push(a.clone()),
        }
    }
    let unmatched_right = right
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(b, _)| b.clone())
        .collect();
    SetMatch {
        unmatched_left,
        unmatched_right,
    }
}
