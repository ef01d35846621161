use crate::error::{Error, Result};
use crate::numeric::{
    hstack, pseudo_inverse, rank_with_floor, vectorize, CMatrix, CVector, Matrix, Scalar,
    ToleranceConfig,
};

/// The commutator `ab - ba`.
pub fn bracket(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: if a.rows() != b.rows() { b.rows() } else { b.cols() },
        });
    }
    let (x, y) = (a.as_cmatrix(), b.as_cmatrix());
    Matrix::from_cmatrix(x * y - y * x)
}

/// A Lie algebra of `d × d` matrices given by an independent basis closed
/// under the commutator.
///
/// Structure constants satisfy `[B_i, B_j] = Σ_k c[i][j][k] B_k`.
#[derive(Debug, Clone)]
pub struct MatrixLieAlgebra {
    space_dim: usize,
    names: Vec<String>,
    basis: Vec<Matrix>,
    structure: Vec<Scalar>,
}

impl PartialEq for MatrixLieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.space_dim == other.space_dim && self.basis == other.basis
    }
}

/// Checks a basis and computes structure constants; basis elements are named
/// `B1, B2, …`.
pub fn verify_algebra(basis: &[Matrix], cfg: &ToleranceConfig) -> Result<MatrixLieAlgebra> {
    let named: Vec<(String, Matrix)> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("B{}", i + 1), m.clone()))
        .collect();
    verify_named_algebra(named, cfg)
}

/// Like [`verify_algebra`] with caller-supplied names.
pub fn verify_named_algebra(
    named: Vec<(String, Matrix)>,
    cfg: &ToleranceConfig,
) -> Result<MatrixLieAlgebra> {
    let Some((_, first)) = named.first() else {
        return Err(Error::EmptyBasis);
    };
    let d = first.rows();
    for (_, m) in &named {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.rows(),
            });
        }
    }
    let n = named.len();
    let (names, basis): (Vec<String>, Vec<Matrix>) = named.into_iter().unzip();

    let vecs: Vec<CVector> = basis.iter().map(|m| vectorize(m.as_cmatrix())).collect();
    let stack = hstack(d * d, &vecs);
    let rank = rank_with_floor(&stack, cfg.rank_tol(), 0.0)?;
    if rank < n {
        return Err(Error::NotIndependent { rank, count: n });
    }

    let pinv = pseudo_inverse(&stack)?;
    let mut structure = vec![Scalar::new(0.0, 0.0); n * n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (bi, bj) = (basis[i].as_cmatrix(), basis[j].as_cmatrix());
            let br = vectorize(&(bi * bj - bj * bi));
            let coords = &pinv * &br;
            let distance = (&stack * &coords - &br).norm();
            let scale = br.norm().max(bi.norm() * bj.norm());
            if distance > cfg.rank_tol() * scale {
                return Err(Error::NotClosed {
                    left: names[i].clone(),
                    right: names[j].clone(),
                    distance,
                });
            }
            let floor = cfg.rank_tol() * bi.norm() * bj.norm();
            for k in 0..n {
                // contributions below the rank tolerance are roundoff
                let c = if coords[k].norm() * basis[k].norm() <= floor {
                    Scalar::new(0.0, 0.0)
                } else {
                    coords[k]
                };
                structure[(i * n + j) * n + k] = c;
                structure[(j * n + i) * n + k] = -c;
            }
        }
    }

    let alg = MatrixLieAlgebra {
        space_dim: d,
        names,
        basis,
        structure,
    };
    let jacobi = alg.jacobi_residual();
    let cmax = alg.max_structure_constant();
    if jacobi > cfg.value_tol() * 1f64.max(cmax * cmax) {
        return Err(Error::JacobiViolation(jacobi));
    }
    Ok(alg)
}

impl MatrixLieAlgebra {
    /// The zero algebra acting on `C^d`.
    pub fn zero(space_dim: usize) -> Self {
        Self {
            space_dim,
            names: Vec::new(),
            basis: Vec::new(),
            structure: Vec::new(),
        }
    }

    /// Assembles an algebra from precomputed structure constants without
    /// re-checking closure; used for subalgebras of an already verified parent.
    pub(crate) fn from_parts(
        space_dim: usize,
        names: Vec<String>,
        basis: Vec<Matrix>,
        structure: Vec<Scalar>,
    ) -> Self {
        debug_assert_eq!(structure.len(), basis.len().pow(3));
        Self {
            space_dim,
            names,
            basis,
            structure,
        }
    }

    /// Dimension `d` of the space the matrices act on.
    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// Dimension `n` of the algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// `c[i][j][k]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        let n = self.dim();
        self.structure[(i * n + j) * n + k]
    }

    pub fn max_structure_constant(&self) -> f64 {
        self.structure.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_abelian(&self, cfg: &ToleranceConfig) -> bool {
        self.max_structure_constant() <= cfg.value_tol()
    }

    /// Coordinates of `[x, y]` for `x, y` given in coordinates.
    pub fn bracket_coords(&self, x: &CVector, y: &CVector) -> CVector {
        let n = self.dim();
        let mut out = CVector::zeros(n);
        for i in 0..n {
            if x[i] == Scalar::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == Scalar::new(0.0, 0.0) || i == j {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.structure_constant(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `ad(B_i)` in the basis: column `j` holds `[B_i, B_j]`.
    pub fn ad_matrix(&self, i: usize) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |k, j| self.structure_constant(i, j, k))
    }

    /// The matrix `Σ x_i B_i`.
    pub fn element(&self, x: &CVector) -> CMatrix {
        let d = self.space_dim;
        let mut m = CMatrix::zeros(d, d);
        for (xi, b) in x.iter().zip(&self.basis) {
            m += b.as_cmatrix() * *xi;
        }
        m
    }

    /// Largest Jacobi defect of the structure constants over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let c = |i, j, k| self.structure_constant(i, j, k);
        let mut worst = 0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    for m in 0..n {
                        let mut s = Scalar::new(0.0, 0.0);
                        for k in 0..n {
                            s += c(i, j, k) * c(k, l, m)
                                + c(j, l, k) * c(k, i, m)
                                + c(l, i, k) * c(k, j, m);
                        }
                        worst = worst.max(s.norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest Frobenius norm among basis matrices.
    pub fn max_basis_norm(&self) -> f64 {
        self.basis.iter().map(Matrix::norm).fold(0.0, f64::max)
    }
}
