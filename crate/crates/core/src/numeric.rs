//! Tolerance-aware dense complex linear algebra.
//!
//! Everything downstream reduces to a handful of kernels: numerical rank,
//! orthonormal kernels and ranges, subspace intersection and eigenvalues.
//! Rank decisions threshold singular values against `rank_tol` times the
//! largest singular value. Callers that know the magnitude of the data a
//! matrix was assembled from can pass a `floor`, so that a matrix consisting
//! purely of roundoff is not mistaken for a full-rank one.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// A complex scalar.
pub type Scalar = Complex64;
/// Dense complex column vector.
pub type CVector = DVector<Scalar>;
/// Dense complex matrix (unvalidated, used internally).
pub type CMatrix = DMatrix<Scalar>;

/// Numerical thresholds used throughout the library.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTolerances")]
pub struct ToleranceConfig {
    rank_tol: f64,
    value_tol: f64,
}

#[derive(Deserialize)]
struct RawTolerances {
    rank_tol: f64,
    value_tol: f64,
}

impl TryFrom<RawTolerances> for ToleranceConfig {
    type Error = Error;

    fn try_from(raw: RawTolerances) -> Result<Self> {
        ToleranceConfig::new(raw.rank_tol, raw.value_tol)
    }
}

impl ToleranceConfig {
    pub const DEFAULT_RANK_TOL: f64 = 1e-9;
    pub const DEFAULT_VALUE_TOL: f64 = 1e-6;

    pub fn new(rank_tol: f64, value_tol: f64) -> Result<Self> {
        for (name, v) in [("rank_tol", rank_tol), ("value_tol", value_tol)] {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(Self {
            rank_tol,
            value_tol,
        })
    }

    /// Relative singular-value threshold for rank decisions.
    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Threshold for equality of scalars (eigenvalues, character values).
    pub fn value_tol(&self) -> f64 {
        self.value_tol
    }

    /// Equality of two scalars at `value_tol`, relative to their size once
    /// it exceeds one.
    pub fn scalars_close(&self, a: Scalar, b: Scalar) -> bool {
        let scale = 1f64.max(a.norm()).max(b.norm());
        (a - b).norm() <= self.value_tol * scale
    }

    /// Entrywise [`Self::scalars_close`] on equal-length slices.
    pub fn slices_close(&self, a: &[Scalar], b: &[Scalar]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.scalars_close(*x, *y))
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_tol: Self::DEFAULT_RANK_TOL,
            value_tol: Self::DEFAULT_VALUE_TOL,
        }
    }
}

/// An immutable dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    inner: CMatrix,
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_cmatrix(CMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Scalar::new(x, 0.0)).collect(),
        )
    }

    pub fn from_cmatrix(inner: CMatrix) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if let Some((idx, _)) = inner
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at column-major index {idx}"
            )));
        }
        Ok(Self { inner })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            inner: CMatrix::identity(d, d),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: CMatrix::zeros(rows, cols),
        }
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        Self {
            inner: CMatrix::from_diagonal(&CVector::from_column_slice(values)),
        }
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let v: Vec<Scalar> = values.iter().map(|&x| Scalar::new(x, 0.0)).collect();
        Self::diagonal(&v)
    }

    /// The matrix unit with a single one at `(i, j)` (zero-based).
    pub fn unit(d: usize, i: usize, j: usize) -> Self {
        let mut inner = CMatrix::zeros(d, d);
        inner[(i, j)] = Scalar::new(1.0, 0.0);
        Self { inner }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.inner[(i, j)]
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.inner
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn product(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: other.rows(),
            });
        }
        Matrix::from_cmatrix(&self.inner * &other.inner)
    }

    pub fn sum(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Matrix::from_cmatrix(&self.inner + &other.inner)
    }

    pub fn difference(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Matrix::from_cmatrix(&self.inner - &other.inner)
    }

    pub fn scaled(&self, s: Scalar) -> Result<Matrix> {
        Matrix::from_cmatrix(&self.inner * s)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let inv = self
            .inner
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidMatrix("matrix is singular".into()))?;
        Matrix::from_cmatrix(inv)
    }

    /// `s · self · s⁻¹`, with the inverse supplied by the caller.
    pub fn conjugated_by(&self, s: &Matrix, s_inv: &Matrix) -> Result<Matrix> {
        s.product(self)?.product(s_inv)
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                found: other.rows(),
            });
        }
        if self.cols() != other.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: other.cols(),
            });
        }
        Ok(())
    }
}

/// Numerical rank: singular values above `rank_tol` times the largest one.
pub fn rank(m: &Matrix, cfg: &ToleranceConfig) -> Result<usize> {
    rank_with_floor(m.as_cmatrix(), cfg.rank_tol(), 0.0)
}

/// Orthonormal basis of the numerical kernel, `cols - rank` vectors.
pub fn nullspace_basis(m: &Matrix, cfg: &ToleranceConfig) -> Result<Vec<CVector>> {
    let k = kernel(m.as_cmatrix(), cfg.rank_tol(), 0.0)?;
    Ok(columns(&k))
}

/// All eigenvalues with multiplicity, sorted lexicographically by `(re, im)`.
pub fn eigenvalues(m: &Matrix, _cfg: &ToleranceConfig) -> Result<Vec<Scalar>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let mut ev = eigenvalues_raw(m.as_cmatrix())?;
    ev.sort_by(|a, b| cmp_scalar(canonical_scalar(*a), canonical_scalar(*b)));
    Ok(ev)
}

/// Whether `v` lies in the span of `basis`: the distance from `v` to the span
/// is at most `rank_tol · |v|`.
pub fn subspace_membership(v: &CVector, basis: &[CVector], cfg: &ToleranceConfig) -> Result<bool> {
    if let Some(b) = basis.iter().find(|b| b.len() != v.len()) {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: b.len(),
        });
    }
    let vn = v.norm();
    if vn == 0.0 {
        return Ok(true);
    }
    let frame = column_space(&hstack(v.len(), basis), cfg.rank_tol(), 0.0)?;
    Ok(distance_to_span(v, &frame) <= cfg.rank_tol() * vn)
}

/// Collapses scalars closer than `value_tol` (first representative wins),
/// then sorts.
pub fn dedup_scalars(values: &[Scalar], cfg: &ToleranceConfig) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    for &v in values {
        if !out.iter().any(|&u| cfg.scalars_close(u, v)) {
            out.push(v);
        }
    }
    out.sort_by(|a, b| cmp_scalar(*a, *b));
    out
}

/// A scalar in JSON: either a bare real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Real(f64),
    Pair([f64; 2]),
}

impl From<JsonScalar> for Scalar {
    fn from(j: JsonScalar) -> Scalar {
        match j {
            JsonScalar::Real(x) => Scalar::new(x, 0.0),
            JsonScalar::Pair([re, im]) => Scalar::new(re, im),
        }
    }
}

impl From<Scalar> for JsonScalar {
    fn from(z: Scalar) -> JsonScalar {
        JsonScalar::Pair([z.re, z.im])
    }
}

/// Serde adapter writing scalar lists as `[[re, im], …]`.
pub mod scalar_list {
    use super::{JsonScalar, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let raw = Vec::<JsonScalar>::deserialize(d)?;
        Ok(raw.into_iter().map(Scalar::from).collect())
    }
}

// ---------------------------------------------------------------------------
// Kernels on raw complex matrices.

pub(crate) fn columns(m: &CMatrix) -> Vec<CVector> {
    (0..m.ncols()).map(|j| m.column(j).into_owned()).collect()
}

pub(crate) fn hstack(rows: usize, cols: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

pub(crate) fn cmp_scalar(a: Scalar, b: Scalar) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub(crate) fn cmp_scalar_slices(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = cmp_scalar(*x, *y);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

/// Rounds to a 1e-12 grid (when representable) and clears negative zeros,
/// so that published values do not carry last-bit noise.
pub(crate) fn canonical_scalar(z: Scalar) -> Scalar {
    fn snap(x: f64) -> f64 {
        let y = if x.abs() < 1e3 {
            (x * 1e12).round() / 1e12
        } else {
            x
        };
        if y == 0.0 {
            0.0
        } else {
            y
        }
    }
    Scalar::new(snap(z.re), snap(z.im))
}

/// Singular values in descending order with the full unitary factors.
struct OrderedSvd {
    values: Vec<f64>,
    u: CMatrix,
    v: CMatrix,
}

fn to_faer(m: &CMatrix) -> faer::Mat<Scalar> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Scalar>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn ordered_svd(m: &CMatrix) -> Result<OrderedSvd> {
    let svd = to_faer(m)
        .svd()
        .map_err(|e| Error::NumericalBreakdown(format!("SVD did not converge: {e:?}")))?;
    let s = svd.S().column_vector();
    Ok(OrderedSvd {
        values: (0..s.nrows()).map(|i| s[i].re).collect(),
        u: from_faer(svd.U()),
        v: from_faer(svd.V()),
    })
}

pub(crate) fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    to_faer(m)
        .singular_values()
        .map_err(|e| Error::NumericalBreakdown(format!("SVD did not converge: {e:?}")))
}

fn threshold(sv: &[f64], rank_tol: f64, floor: f64) -> f64 {
    let smax = sv.first().copied().unwrap_or(0.0);
    rank_tol * smax.max(floor)
}

/// Rank with threshold `rank_tol · max(σ_max, floor)`.
pub(crate) fn rank_with_floor(m: &CMatrix, rank_tol: f64, floor: f64) -> Result<usize> {
    let sv = singular_values(m)?;
    let thr = threshold(&sv, rank_tol, floor);
    Ok(sv.iter().filter(|&&s| s > thr).count())
}

/// Orthonormal kernel basis as columns (`ncols × nullity`).
pub(crate) fn kernel(m: &CMatrix, rank_tol: f64, floor: f64) -> Result<CMatrix> {
    let (r, c) = m.shape();
    if c == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    if r == 0 {
        return Ok(CMatrix::identity(c, c));
    }
    let svd = ordered_svd(m)?;
    let thr = threshold(&svd.values, rank_tol, floor);
    let rank = svd.values.iter().filter(|&&s| s > thr).count();
    let v = svd.v;
    Ok(v.columns(rank, c - rank).into_owned())
}

/// Orthonormal basis of the numerical range (`nrows × rank`).
pub(crate) fn column_space(m: &CMatrix, rank_tol: f64, floor: f64) -> Result<CMatrix> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(CMatrix::zeros(r, 0));
    }
    let svd = ordered_svd(m)?;
    let thr = threshold(&svd.values, rank_tol, floor);
    let rank = svd.values.iter().filter(|&&s| s > thr).count();
    let u = svd.u;
    Ok(u.columns(0, rank).into_owned())
}

/// `I - Q Q*` for an orthonormal frame `Q` in `C^n`.
pub(crate) fn complement_projector(frame: &CMatrix, n: usize) -> CMatrix {
    CMatrix::identity(n, n) - frame * frame.adjoint()
}

/// Orthonormal basis of `span(U) ∩ span(W)` for orthonormal frames, computed
/// as the kernel of the stacked complementary projectors.
pub(crate) fn intersect_frames(u: &CMatrix, w: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    let n = u.nrows();
    if u.ncols() == 0 || w.ncols() == 0 {
        return Ok(CMatrix::zeros(n, 0));
    }
    let mut stacked = CMatrix::zeros(2 * n, n);
    stacked
        .view_mut((0, 0), (n, n))
        .copy_from(&complement_projector(u, n));
    stacked
        .view_mut((n, 0), (n, n))
        .copy_from(&complement_projector(w, n));
    kernel(&stacked, rank_tol, 1.0)
}

/// Euclidean distance from `v` to the span of an orthonormal frame.
pub(crate) fn distance_to_span(v: &CVector, frame: &CMatrix) -> f64 {
    if frame.ncols() == 0 {
        return v.norm();
    }
    let proj = frame * (frame.adjoint() * v);
    (v - proj).norm()
}

/// Moore–Penrose pseudo-inverse (`ncols × nrows`); singular values below
/// `1e-13 · σ_max` are treated as zero.
pub(crate) fn pseudo_inverse(m: &CMatrix) -> Result<CMatrix> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(CMatrix::zeros(c, r));
    }
    let svd = ordered_svd(m)?;
    let cut = svd.values.first().copied().unwrap_or(0.0) * 1e-13;
    let mut out = CMatrix::zeros(c, r);
    for (k, &s) in svd.values.iter().enumerate() {
        if s > cut {
            out += svd.v.column(k) * svd.u.column(k).adjoint() / Scalar::new(s, 0.0);
        }
    }
    Ok(out)
}

/// Eigenvalues (with multiplicity, unsorted) via a complex Schur form.
pub(crate) fn eigenvalues_raw(m: &CMatrix) -> Result<Vec<Scalar>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    to_faer(m)
        .eigenvalues()
        .map_err(|e| Error::NumericalBreakdown(format!("Schur iteration did not converge: {e:?}")))
}

/// Column-major vectorization.
pub(crate) fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.iter().copied())
}
