//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use jointspec::corpus::{generate, generate_instance, named_catalog, CorpusSpec, Profile};
use jointspec::io::Problem;
use jointspec::{MatrixLieAlgebra, ToleranceConfig};

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// A named catalog algebra together with its families.
pub fn named(name: &str) -> Problem {
    let spec = CorpusSpec::new(0, 16, 6, 5, Profile::Named).expect("valid spec");
    let index = named_catalog(&spec)
        .iter()
        .position(|n| *n == name)
        .expect("catalog entry");
    generate(&spec, &cfg()).expect("catalog generates")[index]
        .problem(&cfg())
        .expect("valid problem")
}

/// The first generated instance for `seed` with the given size limits.
pub fn generated(profile: Profile, seed: u64, space: usize, alg: usize) -> Problem {
    let spec = CorpusSpec::new(seed, 1, space, alg, profile).expect("valid spec");
    generate_instance(&spec, 0, &cfg())
        .and_then(|inst| inst.problem(&cfg()))
        .expect("generated problem")
}

/// Generated algebras of exactly dimension `n`, searched from `seed` upward.
pub fn of_dimension(profile: Profile, n: usize, space: usize, seed: u64) -> Arc<MatrixLieAlgebra> {
    (seed..)
        .map(|s| generated(profile, s, space, n))
        .find(|p| p.algebra.dim() == n)
        .map(|p| p.algebra)
        .expect("some seed reaches the dimension")
}
