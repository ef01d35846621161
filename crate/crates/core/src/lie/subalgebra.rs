use std::sync::{Arc, OnceLock};

use super::algebra::MatrixLieAlgebra;
use crate::error::{Error, Result};
use crate::numeric::{
    column_space, columns, distance_to_span, hstack, intersect_frames, pseudo_inverse,
    rank_with_floor, CMatrix, CVector, Matrix, Scalar, ToleranceConfig,
};

/// A subalgebra of a parent algebra, stored by coefficient vectors relative to
/// the parent basis.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    parent: Arc<MatrixLieAlgebra>,
    coeffs: Vec<CVector>,
    frame: CMatrix,
    materialized: OnceLock<Arc<MatrixLieAlgebra>>,
}

impl Subalgebra {
    /// The parent itself, with the identity coefficient basis.
    pub fn whole(parent: &Arc<MatrixLieAlgebra>) -> Self {
        let n = parent.dim();
        let coeffs = columns(&CMatrix::identity(n, n));
        let sub = Self {
            parent: parent.clone(),
            frame: CMatrix::identity(n, n),
            coeffs,
            materialized: OnceLock::new(),
        };
        let _ = sub.materialized.set(parent.clone());
        sub
    }

    pub fn zero(parent: &Arc<MatrixLieAlgebra>) -> Self {
        Self {
            parent: parent.clone(),
            coeffs: Vec::new(),
            frame: CMatrix::zeros(parent.dim(), 0),
            materialized: OnceLock::new(),
        }
    }

    /// Checks independence and bracket closure of the given coefficient
    /// vectors.
    pub fn new(
        parent: &Arc<MatrixLieAlgebra>,
        coeffs: Vec<CVector>,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let n = parent.dim();
        if let Some(v) = coeffs.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if coeffs.iter().any(|v| v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()))) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let stacked = hstack(n, &coeffs);
        let rank = rank_with_floor(&stacked, cfg.rank_tol(), 0.0)?;
        if rank < coeffs.len() {
            return Err(Error::NotIndependent {
                rank,
                count: coeffs.len(),
            });
        }
        let frame = column_space(&stacked, cfg.rank_tol(), 0.0)?;
        let sub = Self {
            parent: parent.clone(),
            coeffs,
            frame,
            materialized: OnceLock::new(),
        };
        sub.check_closed(cfg)?;
        Ok(sub)
    }

    /// Builds from an orthonormal frame known to span a subalgebra.
    fn from_frame(parent: &Arc<MatrixLieAlgebra>, frame: CMatrix) -> Self {
        Self {
            parent: parent.clone(),
            coeffs: columns(&frame),
            frame,
            materialized: OnceLock::new(),
        }
    }

    fn check_closed(&self, cfg: &ToleranceConfig) -> Result<()> {
        let cmax = self.parent.max_structure_constant();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in self.coeffs.iter().enumerate().skip(i + 1) {
                let br = self.parent.bracket_coords(a, b);
                let distance = distance_to_span(&br, &self.frame);
                let scale = br.norm().max(a.norm() * b.norm() * cmax);
                if distance > cfg.rank_tol().max(1e-12) * scale.max(f64::MIN_POSITIVE) {
                    return Err(Error::NotClosed {
                        left: format!("h{}", i + 1),
                        right: format!("h{}", j + 1),
                        distance,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn parent(&self) -> &Arc<MatrixLieAlgebra> {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient vectors of the basis, relative to the parent basis.
    pub fn coeffs(&self) -> &[CVector] {
        &self.coeffs
    }

    /// Coefficient vectors as the columns of an `n × dim` matrix.
    pub fn coeff_matrix(&self) -> CMatrix {
        hstack(self.parent.dim(), &self.coeffs)
    }

    /// Orthonormal frame of the subspace in parent coordinates.
    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.parent.dim()
    }

    fn same_parent(&self, other: &Subalgebra) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent {
            Ok(())
        } else {
            Err(Error::NotSubspace(
                "subalgebras belong to different parents".into(),
            ))
        }
    }

    /// Whether the parent-coordinate vector `v` lies in this subspace.
    pub fn contains_vector(&self, v: &CVector, cfg: &ToleranceConfig) -> bool {
        let vn = v.norm();
        vn == 0.0 || distance_to_span(v, &self.frame) <= cfg.rank_tol() * vn
    }

    /// Subspace inclusion `other ⊆ self`.
    pub fn contains(&self, other: &Subalgebra, cfg: &ToleranceConfig) -> Result<bool> {
        self.same_parent(other)?;
        Ok(other.coeffs.iter().all(|v| self.contains_vector(v, cfg)))
    }

    /// Subspace equality.
    pub fn same_subspace(&self, other: &Subalgebra, cfg: &ToleranceConfig) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains(other, cfg)?)
    }

    pub fn intersect(&self, other: &Subalgebra, cfg: &ToleranceConfig) -> Result<Subalgebra> {
        self.same_parent(other)?;
        if self.contains(other, cfg)? {
            return Ok(other.clone());
        }
        if other.contains(self, cfg)? {
            return Ok(self.clone());
        }
        let frame = intersect_frames(&self.frame, &other.frame, cfg.rank_tol())?;
        Ok(Subalgebra::from_frame(&self.parent, frame))
    }

    /// Subspace sum; fails with `NotClosed` if the sum is not a subalgebra.
    pub fn sum(&self, other: &Subalgebra, cfg: &ToleranceConfig) -> Result<Subalgebra> {
        self.same_parent(other)?;
        if self.contains(other, cfg)? {
            return Ok(self.clone());
        }
        if other.contains(self, cfg)? {
            return Ok(other.clone());
        }
        let n = self.parent.dim();
        let mut cols = columns(&self.frame);
        cols.extend(columns(&other.frame));
        let frame = column_space(&hstack(n, &cols), cfg.rank_tol(), 1.0)?;
        let sub = Subalgebra::from_frame(&self.parent, frame);
        sub.check_closed(cfg)?;
        Ok(sub)
    }

    /// The subalgebra as a matrix Lie algebra in its own right, with basis
    /// `Σ_k coeff_k B_k` and structure constants inherited from the parent.
    pub fn to_algebra(&self) -> Result<Arc<MatrixLieAlgebra>> {
        if let Some(a) = self.materialized.get() {
            return Ok(a.clone());
        }
        let alg = Arc::new(self.build_algebra()?);
        Ok(self.materialized.get_or_init(|| alg).clone())
    }

    fn build_algebra(&self) -> Result<MatrixLieAlgebra> {
        let p = &self.parent;
        let m = self.dim();
        if m == 0 {
            return Ok(MatrixLieAlgebra::zero(p.space_dim()));
        }
        let names: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, v)| unit_index(v).map_or_else(|| format!("h{}", i + 1), |k| p.names()[k].clone()))
            .collect();
        let basis = self
            .coeffs
            .iter()
            .map(|v| Matrix::from_cmatrix(p.element(v)))
            .collect::<Result<Vec<_>>>()?;
        let pinv = pseudo_inverse(&self.coeff_matrix())?;
        let mut structure = vec![Scalar::new(0.0, 0.0); m * m * m];
        for i in 0..m {
            for j in (i + 1)..m {
                let local = &pinv * p.bracket_coords(&self.coeffs[i], &self.coeffs[j]);
                for k in 0..m {
                    structure[(i * m + j) * m + k] = local[k];
                    structure[(j * m + i) * m + k] = -local[k];
                }
            }
        }
        Ok(MatrixLieAlgebra::from_parts(p.space_dim(), names, basis, structure))
    }

    /// Coefficients of `self` relative to the basis of `outer`, as a subalgebra
    /// of `outer.to_algebra()`.
    pub fn relative_to(&self, outer: &Subalgebra, cfg: &ToleranceConfig) -> Result<Subalgebra> {
        if !outer.contains(self, cfg)? {
            return Err(Error::NotSubspace(
                "subalgebra is not contained in the target".into(),
            ));
        }
        let outer_alg = outer.to_algebra()?;
        if outer.is_whole() && Arc::ptr_eq(&outer_alg, &self.parent) {
            return Ok(self.clone());
        }
        let pinv = pseudo_inverse(&outer.coeff_matrix())?;
        let local: Vec<CVector> = self.coeffs.iter().map(|v| &pinv * v).collect();
        let m = outer.dim();
        let frame = column_space(&hstack(m, &local), cfg.rank_tol(), 0.0)?;
        Ok(Subalgebra {
            parent: outer_alg,
            coeffs: local,
            frame,
            materialized: OnceLock::new(),
        })
    }

    /// `[self, other]` as a subspace: span of pairwise brackets.
    pub fn commutator(&self, other: &Subalgebra, cfg: &ToleranceConfig) -> Result<Subalgebra> {
        self.same_parent(other)?;
        let p = &self.parent;
        let mut brs = Vec::new();
        let mut scale = 0f64;
        for a in &self.coeffs {
            for b in &other.coeffs {
                brs.push(p.bracket_coords(a, b));
                scale = scale.max(a.norm() * b.norm());
            }
        }
        let floor = scale * p.max_structure_constant();
        let frame = column_space(&hstack(p.dim(), &brs), cfg.rank_tol(), floor)?;
        Ok(Subalgebra::from_frame(p, frame))
    }
}

fn unit_index(v: &CVector) -> Option<usize> {
    let one = Scalar::new(1.0, 0.0);
    let zero = Scalar::new(0.0, 0.0);
    let k = v.iter().position(|z| *z == one)?;
    v.iter()
        .enumerate()
        .all(|(i, z)| i == k || *z == zero)
        .then_some(k)
}

/// `L ⊇ [L,L] ⊇ …` until the dimension stops dropping. Ends with the zero
/// subalgebra exactly when `sub` is solvable.
pub fn derived_series(sub: &Subalgebra, cfg: &ToleranceConfig) -> Result<Vec<Subalgebra>> {
    let mut series = vec![sub.clone()];
    loop {
        let last = series.last().expect("series is nonempty");
        if last.is_zero() {
            return Ok(series);
        }
        let next = last.commutator(last, cfg)?;
        if next.dim() >= last.dim() {
            return Ok(series);
        }
        series.push(next);
    }
}

pub fn is_solvable(sub: &Subalgebra, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(derived_series(sub, cfg)?
        .last()
        .is_some_and(Subalgebra::is_zero))
}

/// Solvability of a whole algebra.
pub fn is_solvable_algebra(alg: &Arc<MatrixLieAlgebra>, cfg: &ToleranceConfig) -> Result<bool> {
    is_solvable(&Subalgebra::whole(alg), cfg)
}

/// `[L, H] ⊆ H` where `L` is the parent of `h`.
pub fn is_ideal(h: &Subalgebra, l: &Arc<MatrixLieAlgebra>, cfg: &ToleranceConfig) -> Result<bool> {
    if !(Arc::ptr_eq(h.parent(), l) || **h.parent() == **l) {
        return Err(Error::NotSubspace(
            "subalgebra is not defined over the given algebra".into(),
        ));
    }
    is_ideal_of(h, &Subalgebra::whole(l), cfg)
}

/// `H ⊆ K` and `[K, H] ⊆ H`.
pub fn is_ideal_of(h: &Subalgebra, k: &Subalgebra, cfg: &ToleranceConfig) -> Result<bool> {
    if !k.contains(h, cfg)? {
        return Err(Error::NotSubspace("ideal candidate is not contained".into()));
    }
    let p = h.parent();
    let cmax = p.max_structure_constant();
    for a in k.coeffs() {
        for b in h.coeffs() {
            let br = p.bracket_coords(a, b);
            let scale = br.norm().max(a.norm() * b.norm() * cmax);
            if distance_to_span(&br, h.frame()) > cfg.rank_tol().max(1e-12) * scale.max(f64::MIN_POSITIVE) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::verify_algebra;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn vec(xs: &[f64]) -> CVector {
        CVector::from_iterator(xs.len(), xs.iter().map(|&x| c(x)))
    }

    fn two_dim() -> Arc<MatrixLieAlgebra> {
        Arc::new(
            verify_algebra(
                &[Matrix::real_diagonal(&[1.0, 0.0]), Matrix::unit(2, 0, 1)],
                &cfg(),
            )
            .unwrap(),
        )
    }

    fn heisenberg() -> Arc<MatrixLieAlgebra> {
        Arc::new(
            verify_algebra(
                &[Matrix::unit(3, 0, 1), Matrix::unit(3, 1, 2), Matrix::unit(3, 0, 2)],
                &cfg(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn derived_series_examples() {
        let ab = Arc::new(verify_algebra(&[Matrix::real_diagonal(&[1.0, 2.0])], &cfg()).unwrap());
        let dims: Vec<usize> = derived_series(&Subalgebra::whole(&ab), &cfg())
            .unwrap()
            .iter()
            .map(Subalgebra::dim)
            .collect();
        assert_eq!(dims, vec![1, 0]);

        let l = two_dim();
        let s = derived_series(&Subalgebra::whole(&l), &cfg()).unwrap();
        assert_eq!(s.iter().map(Subalgebra::dim).collect::<Vec<_>>(), vec![2, 1, 0]);
        assert!(s[1].contains_vector(&vec(&[0.0, 1.0]), &cfg()));

        let h = heisenberg();
        let s = derived_series(&Subalgebra::whole(&h), &cfg()).unwrap();
        assert_eq!(s.iter().map(Subalgebra::dim).collect::<Vec<_>>(), vec![3, 1, 0]);
        assert!(s[1].contains_vector(&vec(&[0.0, 0.0, 1.0]), &cfg()));
    }

    #[test]
    fn solvability_examples() {
        assert!(is_solvable_algebra(&heisenberg(), &cfg()).unwrap());
        let sl2 = Arc::new(
            verify_algebra(
                &[
                    Matrix::unit(2, 0, 1),
                    Matrix::unit(2, 1, 0),
                    Matrix::real_diagonal(&[1.0, -1.0]),
                ],
                &cfg(),
            )
            .unwrap(),
        );
        assert!(!is_solvable_algebra(&sl2, &cfg()).unwrap());
        assert!(is_solvable(&Subalgebra::zero(&sl2), &cfg()).unwrap());
    }

    #[test]
    fn ideal_examples() {
        let l = two_dim();
        let b = Subalgebra::new(&l, vec![vec(&[0.0, 1.0])], &cfg()).unwrap();
        let a = Subalgebra::new(&l, vec![vec(&[1.0, 0.0])], &cfg()).unwrap();
        assert!(is_ideal(&b, &l, &cfg()).unwrap());
        assert!(!is_ideal(&a, &l, &cfg()).unwrap());
        assert!(is_ideal(&Subalgebra::whole(&l), &l, &cfg()).unwrap());
        let other = heisenberg();
        assert!(matches!(is_ideal(&b, &other, &cfg()), Err(Error::NotSubspace(_))));
    }

    #[test]
    fn intersections_and_sums() {
        let h = heisenberg();
        let x = Subalgebra::new(&h, vec![vec(&[1.0, 0.0, 0.0]), vec(&[0.0, 0.0, 1.0])], &cfg()).unwrap();
        let y = Subalgebra::new(&h, vec![vec(&[0.0, 1.0, 0.0]), vec(&[0.0, 0.0, 1.0])], &cfg()).unwrap();
        let i = x.intersect(&y, &cfg()).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vector(&vec(&[0.0, 0.0, 1.0]), &cfg()));
        let s = x.sum(&y, &cfg()).unwrap();
        assert!(s.is_whole());
    }

    #[test]
    fn non_closed_subspace_is_rejected() {
        let h = heisenberg();
        let err = Subalgebra::new(&h, vec![vec(&[1.0, 0.0, 0.0]), vec(&[0.0, 1.0, 0.0])], &cfg());
        assert!(matches!(err, Err(Error::NotClosed { .. })));
    }

    #[test]
    fn materialized_structure_is_relative() {
        let l = two_dim();
        let sub = Subalgebra::new(&l, vec![vec(&[2.0, 0.0]), vec(&[0.0, 3.0])], &cfg()).unwrap();
        let alg = sub.to_algebra().unwrap();
        // [2A, 3B] = 6B = 2·(3B)
        assert!((alg.structure_constant(0, 1, 1) - c(2.0)).norm() < 1e-12);
        let rel = Subalgebra::new(&l, vec![vec(&[0.0, 1.0])], &cfg())
            .unwrap()
            .relative_to(&sub, &cfg())
            .unwrap();
        assert!((rel.coeffs()[0][1] - c(1.0 / 3.0)).norm() < 1e-12);
    }
}
