//! Seeded random corpus of solvable matrix Lie algebras with ideals and
//! directed families.
//!
//! Upper-triangular instances take integer diagonal generators and elementary
//! matrices `E_ij` over a transitively closed set of pairs, then mix the basis
//! by a unipotent integer matrix so that trailing segments stay ideals.
//! Conjugated instances additionally apply `S·B·S⁻¹` with `cond(S) ≤ 100`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::{BasisEntry, FamilyJson, MatrixJson, Problem, ProblemFile, WHOLE};
use crate::lie::{is_solvable_algebra, verify_directed_family};
use crate::numeric::{CMatrix, JsonScalar, Matrix, Scalar, ToleranceConfig};

pub const MAX_SPACE_DIM: usize = 6;
pub const MAX_ALGEBRA_DIM: usize = 5;
/// Attempts per instance before giving up.
pub const MAX_ATTEMPTS: usize = 64;
/// Upper bound on the condition number of conjugating matrices.
pub const MAX_CONDITION: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    UpperTriangular,
    Conjugated,
    Named,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::UpperTriangular => "upper_triangular",
            Profile::Conjugated => "conjugated",
            Profile::Named => "named",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "upper_triangular" | "triangular" => Ok(Profile::UpperTriangular),
            "conjugated" => Ok(Profile::Conjugated),
            "named" => Ok(Profile::Named),
            _ => Err(Error::InvalidInput(format!("unknown corpus profile `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub max_space_dim: usize,
    pub max_algebra_dim: usize,
    pub profile: Profile,
}

impl CorpusSpec {
    pub fn new(
        seed: u64,
        count: usize,
        max_space_dim: usize,
        max_algebra_dim: usize,
        profile: Profile,
    ) -> Result<Self> {
        let spec = Self {
            seed,
            count,
            max_space_dim,
            max_algebra_dim,
            profile,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidInput("count must be positive".into()));
        }
        if !(1..=MAX_SPACE_DIM).contains(&self.max_space_dim) {
            return Err(Error::InvalidInput(format!(
                "max_space_dim must lie in 1..={MAX_SPACE_DIM}"
            )));
        }
        if !(1..=MAX_ALGEBRA_DIM).contains(&self.max_algebra_dim) {
            return Err(Error::InvalidInput(format!(
                "max_algebra_dim must lie in 1..={MAX_ALGEBRA_DIM}"
            )));
        }
        Ok(())
    }
}

/// One generated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusInstance {
    pub name: String,
    pub seed: u64,
    pub file: ProblemFile,
}

impl CorpusInstance {
    pub fn problem(&self, cfg: &ToleranceConfig) -> Result<Problem> {
        Problem::resolve(self.file.clone(), cfg)
    }

    /// The serialized file, as written to disk.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut s = self.file.to_json_string()?;
        s.push('\n');
        Ok(s.into_bytes())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub name: String,
    pub seed: u64,
    pub sha256: String,
    pub space_dim: usize,
    pub algebra_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: CorpusSpec,
    pub instances: Vec<ManifestEntry>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of instance `index` under corpus seed `seed`.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

pub fn generate(spec: &CorpusSpec, cfg: &ToleranceConfig) -> Result<Vec<CorpusInstance>> {
    spec.validate()?;
    (0..spec.count)
        .map(|i| generate_instance(spec, i, cfg))
        .collect()
}

/// Generates instance `index`, retrying with derived seeds until the result
/// verifies.
pub fn generate_instance(
    spec: &CorpusSpec,
    index: usize,
    cfg: &ToleranceConfig,
) -> Result<CorpusInstance> {
    spec.validate()?;
    let seed = instance_seed(spec.seed, index);
    if spec.profile == Profile::Named {
        let file = named_instance(spec, index)?;
        let name = format!("{}_{index:03}", file.0);
        check_instance(&file.1, cfg)?;
        return Ok(CorpusInstance {
            name,
            seed,
            file: file.1,
        });
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed.wrapping_add(attempt as u64)));
        let Some(file) = random_instance(spec, &mut rng) else {
            continue;
        };
        if check_instance(&file, cfg).is_ok() {
            return Ok(CorpusInstance {
                name: format!("{}_{index:03}", spec.profile),
                seed,
                file,
            });
        }
    }
    Err(Error::GenerationExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

fn check_instance(file: &ProblemFile, cfg: &ToleranceConfig) -> Result<()> {
    let p = Problem::resolve(file.clone(), cfg)?;
    if !is_solvable_algebra(&p.algebra, cfg)? {
        return Err(Error::NotSolvable);
    }
    for (label, fam) in &p.families {
        let rep = verify_directed_family(fam, cfg)?;
        if !rep.passed() {
            return Err(Error::FamilyVerification(format!(
                "{label}: {}",
                rep.failures().join("; ")
            )));
        }
    }
    Ok(())
}

/// Writes every instance and `manifest.json` into `dir`.
pub fn write_corpus(spec: &CorpusSpec, dir: &Path, cfg: &ToleranceConfig) -> Result<Manifest> {
    let instances = generate(spec, cfg)?;
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(instances.len());
    for inst in &instances {
        let bytes = inst.to_bytes()?;
        let file = format!("{}.json", inst.name);
        std::fs::write(dir.join(&file), &bytes)?;
        entries.push(ManifestEntry {
            file,
            name: inst.name.clone(),
            seed: inst.seed,
            sha256: sha256_hex(&bytes),
            space_dim: inst.file.space_dim,
            algebra_dim: inst.file.basis.len(),
        });
    }
    let manifest = Manifest {
        spec: spec.clone(),
        instances: entries,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(dir.join("manifest.json"), text)?;
    Ok(manifest)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

// ---------------------------------------------------------------------------
// Random instances.

fn real(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

fn int_matrix(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Matrix {
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            entries.push(real(f(i, j)));
        }
    }
    Matrix::new(d, d, entries).expect("finite entries")
}

fn unit_vector(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// Adds `(i, j)` to `set` and closes under `(i,j),(j,k) ⇒ (i,k)`.
fn closed_insert(set: &[(usize, usize)], pair: (usize, usize)) -> Vec<(usize, usize)> {
    let mut out = set.to_vec();
    out.push(pair);
    loop {
        let mut added = false;
        for a in 0..out.len() {
            for b in 0..out.len() {
                let (i, j) = out[a];
                let (j2, k) = out[b];
                if j == j2 && !out.contains(&(i, k)) {
                    out.push((i, k));
                    added = true;
                }
            }
        }
        if !added {
            return out;
        }
    }
}

fn rank_real(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    m.rank(1e-9)
}

fn random_instance(spec: &CorpusSpec, rng: &mut ChaCha8Rng) -> Option<ProblemFile> {
    let d = if spec.max_space_dim >= 2 {
        rng.random_range(2..=spec.max_space_dim)
    } else {
        1
    };
    let cap = spec.max_algebra_dim.min(d * (d + 1) / 2);
    let n_target = rng.random_range(1..=cap);

    let (mut mats, nd) = if n_target == 1 {
        (vec![single_operator(d, rng)], 0)
    } else {
        triangular_basis(d, n_target, rng)?
    };
    let n = mats.len();

    // b'_k = b_k + Σ_{l>k} m_kl b_l keeps every trailing segment.
    let mut mixed = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = mats[k].clone();
        for l in (k + 1)..n {
            let m: i32 = rng.random_range(-1..=1);
            if m != 0 {
                acc = acc.sum(&mats[l].scaled(real(m as f64)).ok()?).ok()?;
            }
        }
        mixed.push(acc);
    }
    mats = mixed;

    if spec.profile == Profile::Conjugated {
        let (s, s_inv) = conditioned_pair(d, rng);
        mats = mats
            .iter()
            .map(|m| m.conjugated_by(&s, &s_inv))
            .collect::<Result<_>>()
            .ok()?;
    }

    let mut subalgebras: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    let trailing = |t: usize| (t..n).map(|i| unit_vector(n, i)).collect::<Vec<_>>();
    let mut chain = vec![WHOLE.to_string()];
    for t in 1..n {
        let label = format!("T{t}");
        subalgebras.insert(label.clone(), trailing(t));
        if rng.random_bool(0.6) {
            chain.push(label);
        }
    }
    if chain.len() == 1 && n > 1 {
        let t = rng.random_range(1..n);
        chain.push(format!("T{t}"));
    }
    subalgebras.insert("Z".into(), Vec::new());

    let lattice = if nd >= 2 {
        // N + span{u} is an ideal for any u: N contains [L, L].
        let mut us: Vec<Vec<f64>> = Vec::new();
        while us.len() < 2 {
            let u: Vec<f64> = (0..nd).map(|_| rng.random_range(-2..=2) as f64).collect();
            let mut trial = us.clone();
            trial.push(u);
            if rank_real(&trial) == trial.len() {
                us = trial;
            }
        }
        let mut members = vec![WHOLE.to_string()];
        if nd < n {
            subalgebras.insert("N".into(), trailing(nd));
            members.push("N".into());
        }
        for (i, u) in us.iter().enumerate() {
            let mut v = vec![0.0; n];
            v[..nd].copy_from_slice(u);
            let mut vs = vec![v];
            vs.extend(trailing(nd));
            let label = format!("J{}", i + 1);
            subalgebras.insert(label.clone(), vs);
            members.push(label);
        }
        members
    } else {
        let mut members = vec![WHOLE.to_string(), "Z".to_string()];
        if nd > 0 && nd < n {
            subalgebras.insert("N".into(), trailing(nd));
            members.push("N".into());
        }
        members
    };

    let mut families = BTreeMap::new();
    families.insert("chain".to_string(), family_json(chain));
    families.insert("lattice".to_string(), family_json(lattice));

    Some(ProblemFile {
        space_dim: d,
        basis: mats
            .iter()
            .enumerate()
            .map(|(k, m)| BasisEntry {
                name: format!("X{}", k + 1),
                matrix: MatrixJson::from_matrix(m),
            })
            .collect(),
        subalgebras: subalgebras
            .into_iter()
            .map(|(l, vs)| {
                (
                    l,
                    vs.into_iter()
                        .map(|v| v.into_iter().map(JsonScalar::Real).collect())
                        .collect(),
                )
            })
            .collect(),
        families,
        tasks: None,
    })
}

fn family_json(ideals: Vec<String>) -> FamilyJson {
    // declare every inclusion that holds by construction: L on top, Z at the
    // bottom, trailing segments nested by index
    let mut order = Vec::new();
    for a in &ideals {
        for b in &ideals {
            if a != b && declared_leq(a, b) {
                order.push([a.clone(), b.clone()]);
            }
        }
    }
    FamilyJson { ideals, order }
}

fn declared_leq(a: &str, b: &str) -> bool {
    let segment = |s: &str| s.strip_prefix('T').and_then(|t| t.parse::<usize>().ok());
    b == WHOLE
        || a == "Z"
        || (a == "N" && b.starts_with('J'))
        || matches!((segment(a), segment(b)), (Some(x), Some(y)) if x > y)
}

fn single_operator(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m = int_matrix(d, |i, j| {
            if i <= j {
                rng.random_range(-2..=2) as f64
            } else {
                0.0
            }
        });
        if m.norm() > 0.0 {
            return m;
        }
    }
}

/// Diagonal generators first, then `E_ij` ordered by `j − i`.
fn triangular_basis(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<(Vec<Matrix>, usize)> {
    let strict = d * (d - 1) / 2;
    let lo = n.saturating_sub(strict);
    let hi = n.min(d);
    if lo > hi {
        return None;
    }
    let nd = rng.random_range(lo..=hi);

    let mut diags: Vec<Vec<f64>> = Vec::new();
    let mut tries = 0;
    while diags.len() < nd {
        tries += 1;
        if tries > 100 {
            return None;
        }
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-2..=2) as f64).collect();
        let mut trial = diags.clone();
        trial.push(v);
        if rank_real(&trial) == trial.len() {
            diags = trial;
        }
    }

    let mut pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(rng);
    let budget = n - nd;
    let mut set: Vec<(usize, usize)> = Vec::new();
    for p in pairs {
        if set.len() == budget {
            break;
        }
        if set.contains(&p) {
            continue;
        }
        let next = closed_insert(&set, p);
        if next.len() <= budget {
            set = next;
        }
    }
    set.sort_by_key(|&(i, j)| (j - i, i));
    if nd + set.len() == 0 {
        return None;
    }

    let mut mats: Vec<Matrix> = diags
        .iter()
        .map(|v| Matrix::real_diagonal(v))
        .collect();
    mats.extend(set.iter().map(|&(i, j)| Matrix::unit(d, i, j)));
    Some((mats, nd))
}

/// `S = U·Σ·V*` with unitary `U, V` and singular values log-uniform in
/// `[1, MAX_CONDITION]`, together with its inverse.
fn conditioned_pair(d: usize, rng: &mut ChaCha8Rng) -> (Matrix, Matrix) {
    let gaussian = |rng: &mut ChaCha8Rng| -> CMatrix {
        CMatrix::from_fn(d, d, |_, _| {
            Scalar::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    };
    let u = gaussian(rng).qr().q();
    let v = gaussian(rng).qr().q();
    let sv: Vec<f64> = (0..d)
        .map(|_| MAX_CONDITION.powf(rng.random_range(0.0..1.0)))
        .collect();
    let sigma = CMatrix::from_fn(d, d, |i, j| if i == j { real(sv[i]) } else { real(0.0) });
    let sigma_inv =
        CMatrix::from_fn(d, d, |i, j| if i == j { real(1.0 / sv[i]) } else { real(0.0) });
    let s = &u * sigma * v.adjoint();
    let s_inv = &v * sigma_inv * u.adjoint();
    (
        Matrix::from_cmatrix(s).expect("finite"),
        Matrix::from_cmatrix(s_inv).expect("finite"),
    )
}

// ---------------------------------------------------------------------------
// Named catalog.

struct NamedExample {
    name: &'static str,
    space_dim: usize,
    basis: Vec<(&'static str, Matrix)>,
    subalgebras: Vec<(&'static str, Vec<Vec<f64>>)>,
    families: Vec<(&'static str, Vec<&'static str>)>,
}

fn catalog() -> Vec<NamedExample> {
    vec![
        NamedExample {
            name: "heisenberg",
            space_dim: 3,
            basis: vec![
                ("X", Matrix::unit(3, 0, 1)),
                ("Y", Matrix::unit(3, 1, 2)),
                ("Z", Matrix::unit(3, 0, 2)),
            ],
            subalgebras: vec![
                ("C", vec![vec![0.0, 0.0, 1.0]]),
                ("XZ", vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]),
                ("YZ", vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]),
            ],
            families: vec![
                ("chain", vec!["C", "XZ", "L"]),
                ("lattice", vec!["C", "XZ", "YZ", "L"]),
            ],
        },
        NamedExample {
            name: "two_dim_solvable",
            space_dim: 2,
            basis: vec![
                ("A", Matrix::real_diagonal(&[1.0, 0.0])),
                ("B", Matrix::unit(2, 0, 1)),
            ],
            subalgebras: vec![("I1", vec![vec![0.0, 1.0]])],
            families: vec![("chain", vec!["I1", "L"]), ("single", vec!["L"])],
        },
        NamedExample {
            name: "diagonal_abelian",
            space_dim: 2,
            basis: vec![
                ("D1", Matrix::real_diagonal(&[1.0, 2.0])),
                ("D2", Matrix::real_diagonal(&[1.0, 0.0])),
            ],
            subalgebras: vec![
                ("P1", vec![vec![1.0, 0.0]]),
                ("P2", vec![vec![0.0, 1.0]]),
            ],
            families: vec![("lattice", vec!["P1", "P2", "L"]), ("single", vec!["L"])],
        },
        NamedExample {
            name: "single_diagonal",
            space_dim: 2,
            basis: vec![("D", Matrix::real_diagonal(&[1.0, 2.0]))],
            subalgebras: vec![],
            families: vec![("single", vec!["L"])],
        },
        NamedExample {
            name: "single_jordan",
            space_dim: 2,
            basis: vec![(
                "J",
                Matrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).expect("finite"),
            )],
            subalgebras: vec![],
            families: vec![("single", vec!["L"])],
        },
    ]
}

/// Names of the catalog entries admitted by `spec`, in catalog order.
pub fn named_catalog(spec: &CorpusSpec) -> Vec<&'static str> {
    catalog()
        .into_iter()
        .filter(|e| e.space_dim <= spec.max_space_dim && e.basis.len() <= spec.max_algebra_dim)
        .map(|e| e.name)
        .collect()
}

fn named_instance(spec: &CorpusSpec, index: usize) -> Result<(&'static str, ProblemFile)> {
    let admitted: Vec<NamedExample> = catalog()
        .into_iter()
        .filter(|e| e.space_dim <= spec.max_space_dim && e.basis.len() <= spec.max_algebra_dim)
        .collect();
    if admitted.is_empty() {
        return Err(Error::InvalidInput(
            "no catalog example fits the requested dimensions".into(),
        ));
    }
    let e = &admitted[index % admitted.len()];
    let subalgebras = e
        .subalgebras
        .iter()
        .map(|(l, vs)| {
            (
                l.to_string(),
                vs.iter()
                    .map(|v| v.iter().map(|&x| JsonScalar::Real(x)).collect())
                    .collect(),
            )
        })
        .collect();
    let families = e
        .families
        .iter()
        .map(|(l, members)| {
            (
                l.to_string(),
                FamilyJson {
                    ideals: members.iter().map(|s| s.to_string()).collect(),
                    order: Vec::new(),
                },
            )
        })
        .collect();
    Ok((
        e.name,
        ProblemFile {
            space_dim: e.space_dim,
            basis: e
                .basis
                .iter()
                .map(|(n, m)| BasisEntry {
                    name: n.to_string(),
                    matrix: MatrixJson::from_matrix(m),
                })
                .collect(),
            subalgebras,
            families,
            tasks: None,
        },
    ))
}
