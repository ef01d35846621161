use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use serde::Serialize;

use super::exterior::{binomial, indices, ExteriorBasis};
use crate::characters::Character;
use crate::error::{Error, Result};
use crate::lie::MatrixLieAlgebra;
use crate::numeric::{rank_with_floor, CMatrix, Scalar, ToleranceConfig};

/// Relative bound on `|d_p d_{p+1}|` accepted when building a complex.
pub const COMPLEX_RESIDUAL_TOL: f64 = 1e-10;

static BUILT: AtomicUsize = AtomicUsize::new(0);
// bit patterns of non-negative floats order like the floats themselves
static WORST_RESIDUAL: AtomicU64 = AtomicU64::new(0);

/// Process-wide tally of the complexes assembled by [`build_complex`],
/// including ones rejected for their residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexStatistics {
    pub built: usize,
    pub max_residual: f64,
}

pub fn complex_statistics() -> ComplexStatistics {
    ComplexStatistics {
        built: BUILT.load(Ordering::Relaxed),
        max_residual: f64::from_bits(WORST_RESIDUAL.load(Ordering::Relaxed)),
    }
}

pub fn reset_complex_statistics() {
    BUILT.store(0, Ordering::Relaxed);
    WORST_RESIDUAL.store(0, Ordering::Relaxed);
}

fn record(residual: f64) {
    BUILT.fetch_add(1, Ordering::Relaxed);
    let bits = if residual.is_nan() { f64::INFINITY } else { residual }.to_bits();
    WORST_RESIDUAL.fetch_max(bits, Ordering::Relaxed);
}

/// The chain complex `Λ^p L ⊗ X` of the representation `ρ - f`.
///
/// On basis monomials (positions `j < l` counted from one)
///
/// ```text
/// d(x_1 ∧ … ∧ x_p ⊗ v) = Σ_j (-1)^{j+1} x_1 ∧ … x̂_j … ∧ x_p ⊗ (ρ(x_j) - f(x_j)) v
///                      + Σ_{j<l} (-1)^{j+l+1} [x_j, x_l] ∧ x_1 ∧ … x̂_j … x̂_l … ∧ x_p ⊗ v
/// ```
///
/// The bracket term carries `(-1)^{j+l+1}`: with a left action this is the
/// sign that makes `d ∘ d` vanish.
#[derive(Debug, Clone)]
pub struct ChevalleyEilenbergComplex {
    n: usize,
    d: usize,
    boundaries: Vec<CMatrix>,
    scale: f64,
    residual: f64,
}

/// Assembles and checks the complex for the character `f` of `alg`.
pub fn build_complex(
    alg: &MatrixLieAlgebra,
    f: &Character,
    cfg: &ToleranceConfig,
) -> Result<ChevalleyEilenbergComplex> {
    f.check(alg, cfg)?;
    let n = alg.dim();
    let d = alg.space_dim();
    let ext = ExteriorBasis::new(n);
    let shifted: Vec<CMatrix> = alg
        .basis()
        .iter()
        .zip(f.values())
        .map(|(b, fi)| b.as_cmatrix() - CMatrix::identity(d, d) * *fi)
        .collect();

    let mut boundaries = Vec::with_capacity(n);
    for p in 1..=n {
        let mut dp = CMatrix::zeros(ext.count(p - 1) * d, ext.count(p) * d);
        for (col, &mask) in ext.monomials(p).iter().enumerate() {
            let idx = indices(mask);
            for (j, &ij) in idx.iter().enumerate() {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let row = ext.position(mask & !(1 << ij));
                let mut block = dp.view_mut((row * d, col * d), (d, d));
                block += &shifted[ij] * Scalar::new(sign, 0.0);
            }
            for (j, &ij) in idx.iter().enumerate() {
                for (l, &il) in idx.iter().enumerate().skip(j + 1) {
                    // one-based (j+1)+(l+1)+1 has the parity of j+l+1
                    let pair_sign = if (j + l + 1) % 2 == 0 { 1.0 } else { -1.0 };
                    let rest = mask & !(1 << ij) & !(1 << il);
                    for k in 0..n {
                        let c = alg.structure_constant(ij, il, k);
                        if c == Scalar::new(0.0, 0.0) || rest & (1 << k) != 0 {
                            continue;
                        }
                        let before = (rest & ((1u32 << k) - 1)).count_ones();
                        let wedge_sign = if before % 2 == 0 { 1.0 } else { -1.0 };
                        let row = ext.position(rest | (1 << k));
                        let coef = c * (pair_sign * wedge_sign);
                        for t in 0..d {
                            dp[(row * d + t, col * d + t)] += coef;
                        }
                    }
                }
            }
        }
        boundaries.push(dp);
    }

    let scale = alg
        .max_basis_norm()
        .max(f.max_abs())
        .max(alg.max_structure_constant())
        .max(f64::MIN_POSITIVE);
    let mut residual = 0f64;
    let mut worst_degree = 0;
    for p in 1..n {
        let (a, b) = (&boundaries[p - 1], &boundaries[p]);
        let denom = a.norm() * b.norm();
        if denom == 0.0 {
            continue;
        }
        let r = (a * b).norm() / denom;
        if r.is_nan() || r > residual {
            residual = r;
            worst_degree = p;
        }
    }
    record(residual);
    if residual.is_nan() || residual > COMPLEX_RESIDUAL_TOL {
        return Err(Error::ComplexInconsistent {
            degree: worst_degree,
            residual,
        });
    }
    Ok(ChevalleyEilenbergComplex {
        n,
        d,
        boundaries,
        scale,
        residual,
    })
}

impl ChevalleyEilenbergComplex {
    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn space_dim(&self) -> usize {
        self.d
    }

    /// `d_p : Λ^p ⊗ X → Λ^{p-1} ⊗ X` for `1 ≤ p ≤ n`.
    pub fn boundary(&self, p: usize) -> Option<&CMatrix> {
        if p == 0 || p > self.n {
            None
        } else {
            Some(&self.boundaries[p - 1])
        }
    }

    /// `dim(Λ^p L ⊗ X)`.
    pub fn chain_dim(&self, p: usize) -> usize {
        binomial(self.n, p) * self.d
    }

    /// Largest relative `|d_p d_{p+1}|` over all degrees.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Magnitude of the data the boundaries were assembled from.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Numerical rank of `d_p`, zero outside `1..=n`.
    pub fn boundary_rank(&self, p: usize, cfg: &ToleranceConfig) -> Result<usize> {
        match self.boundary(p) {
            None => Ok(0),
            Some(m) => rank_with_floor(m, cfg.rank_tol(), self.scale),
        }
    }

    /// Ranks of `d_0, …, d_{n+1}` (the outer two are zero maps).
    pub fn ranks(&self, cfg: &ToleranceConfig) -> Result<Vec<usize>> {
        (0..=self.n + 1).map(|p| self.boundary_rank(p, cfg)).collect()
    }

    /// `dim H_p` for `p = 0..=n`.
    pub fn homology_dims(&self, cfg: &ToleranceConfig) -> Result<Vec<usize>> {
        let r = self.ranks(cfg)?;
        (0..=self.n)
            .map(|p| {
                let dim = self.chain_dim(p);
                dim.checked_sub(r[p] + r[p + 1]).ok_or_else(|| {
                    Error::NumericalBreakdown(format!(
                        "ranks {} + {} exceed chain dimension {dim} at degree {p}",
                        r[p],
                        r[p + 1]
                    ))
                })
            })
            .collect()
    }

    pub fn is_exact_at(&self, p: usize, cfg: &ToleranceConfig) -> Result<bool> {
        if p > self.n {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                max: self.n,
            });
        }
        let r = self.boundary_rank(p, cfg)? + self.boundary_rank(p + 1, cfg)?;
        if r > self.chain_dim(p) {
            return Err(Error::NumericalBreakdown(format!(
                "ranks exceed chain dimension at degree {p}"
            )));
        }
        Ok(r == self.chain_dim(p))
    }
}
