#![allow(dead_code)]

pub mod eigen;
pub mod exact;

use std::sync::Arc;

use jointspec::corpus::{generate, CorpusInstance, CorpusSpec, Profile};
use jointspec::io::Problem;
use jointspec::lie::verify_algebra;
use jointspec::numeric::CVector;
use jointspec::{Character, Matrix, MatrixLieAlgebra, Scalar, ToleranceConfig};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn ch(xs: &[f64]) -> Character {
    Character::new(xs.iter().map(|&x| Scalar::new(x, 0.0)).collect())
}

pub fn vector(xs: &[f64]) -> CVector {
    CVector::from_iterator(xs.len(), xs.iter().map(|&x| Scalar::new(x, 0.0)))
}

pub fn algebra(basis: &[Matrix]) -> Arc<MatrixLieAlgebra> {
    Arc::new(verify_algebra(basis, &cfg()).unwrap())
}

pub fn two_dim() -> Arc<MatrixLieAlgebra> {
    algebra(&[Matrix::real_diagonal(&[1.0, 0.0]), Matrix::unit(2, 0, 1)])
}

pub fn heisenberg() -> Arc<MatrixLieAlgebra> {
    algebra(&[Matrix::unit(3, 0, 1), Matrix::unit(3, 1, 2), Matrix::unit(3, 0, 2)])
}

/// Integer entries of `m`, if every entry is an integer.
pub fn integer_matrix(m: &Matrix) -> Option<exact::IntMatrix> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    (z.im == 0.0 && z.re.fract() == 0.0).then_some(z.re as i64)
                })
                .collect()
        })
        .collect()
}

pub fn exact_algebra(alg: &MatrixLieAlgebra) -> Option<exact::ExactAlgebra> {
    let basis = alg.basis().iter().map(integer_matrix).collect::<Option<Vec<_>>>()?;
    exact::ExactAlgebra::new(basis)
}

/// Problems from the seeded corpora used across the integration tests.
pub fn corpus(profile: Profile, seed: u64, count: usize, space: usize, alg: usize) -> Vec<(CorpusInstance, Problem)> {
    let spec = CorpusSpec::new(seed, count, space, alg, profile).unwrap();
    generate(&spec, &cfg())
        .unwrap()
        .into_iter()
        .map(|inst| {
            let p = inst.problem(&cfg()).unwrap();
            (inst, p)
        })
        .collect()
}

pub fn to_rows(m: &Matrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

pub fn gaussian_matrix(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let entries = (0..d * d)
        .map(|_| Scalar::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    Matrix::new(d, d, entries).unwrap()
}

/// `S` with `cond(S) ≤ max_cond`, and its inverse.
pub fn conditioned(d: usize, max_cond: f64, rng: &mut ChaCha8Rng) -> (Matrix, Matrix) {
    let u = gaussian_matrix(d, rng).into_cmatrix().qr().q();
    let v = gaussian_matrix(d, rng).into_cmatrix().qr().q();
    let sv: Vec<f64> = (0..d).map(|_| max_cond.powf(rng.random_range(0.0..1.0))).collect();
    let diag = |f: &dyn Fn(f64) -> f64| {
        Matrix::diagonal(&sv.iter().map(|&s| Scalar::new(f(s), 0.0)).collect::<Vec<_>>())
            .into_cmatrix()
    };
    let s = &u * diag(&|s| s) * v.adjoint();
    let s_inv = &v * diag(&|s| 1.0 / s) * u.adjoint();
    (Matrix::from_cmatrix(s).unwrap(), Matrix::from_cmatrix(s_inv).unwrap())
}

/// Upper-triangular integer matrix with entries in `−r..=r`.
pub fn triangular_int(d: usize, r: i64, rng: &mut ChaCha8Rng) -> Matrix {
    let mut e = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let x = if i <= j { rng.random_range(-r..=r) } else { 0 };
            e.push(Scalar::new(x as f64, 0.0));
        }
    }
    Matrix::new(d, d, e).unwrap()
}

/// Points as rounded real tuples, for comparing with integer oracles.
pub fn rounded(points: &[Character]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = points
        .iter()
        .map(|f| f.values().iter().map(|z| z.re.round() as i64).collect())
        .collect();
    out.sort();
    out
}
