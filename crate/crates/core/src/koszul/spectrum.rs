use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::complex::build_complex;
use crate::characters::{match_sets, normalize_points, spectral_candidates, Character, SetMatch};
use crate::error::{Error, Result};
use crate::lie::{is_ideal, is_solvable_algebra, MatrixLieAlgebra, Subalgebra};
use crate::numeric::ToleranceConfig;

/// Which joint spectrum to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    /// Non-exact in some degree.
    Taylor,
    /// Non-exact in some degree `p ≤ k`.
    SlodkowskiDelta(usize),
    /// Non-exact in some degree `p ≥ n - k`.
    SlodkowskiPi(usize),
}

impl SpectrumKind {
    /// Parses `taylor`, `delta` or `pi` (the latter two require a level).
    pub fn from_parts(name: &str, k: Option<usize>) -> Result<Self> {
        match (name.to_ascii_lowercase().as_str(), k) {
            ("taylor", _) => Ok(Self::Taylor),
            ("delta" | "slodkowski_delta", Some(k)) => Ok(Self::SlodkowskiDelta(k)),
            ("pi" | "slodkowski_pi", Some(k)) => Ok(Self::SlodkowskiPi(k)),
            ("delta" | "slodkowski_delta" | "pi" | "slodkowski_pi", None) => Err(
                Error::InvalidKind(format!("kind `{name}` needs a level k")),
            ),
            _ => Err(Error::InvalidKind(format!("unknown kind `{name}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Taylor => "taylor",
            Self::SlodkowskiDelta(_) => "delta",
            Self::SlodkowskiPi(_) => "pi",
        }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            Self::Taylor => None,
            Self::SlodkowskiDelta(k) | Self::SlodkowskiPi(k) => Some(*k),
        }
    }

    /// The same kind with the level capped at `n`, for use on subalgebras of
    /// smaller dimension.
    pub fn clamp_to(&self, n: usize) -> Self {
        match *self {
            Self::Taylor => Self::Taylor,
            Self::SlodkowskiDelta(k) => Self::SlodkowskiDelta(k.min(n)),
            Self::SlodkowskiPi(k) => Self::SlodkowskiPi(k.min(n)),
        }
    }

    /// Whether non-exactness at degree `p` of an `n`-dimensional algebra
    /// counts toward membership.
    pub fn includes_degree(&self, p: usize, n: usize) -> bool {
        match *self {
            Self::Taylor => true,
            Self::SlodkowskiDelta(k) => p <= k,
            Self::SlodkowskiPi(k) => p + k >= n,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self.level() {
            Some(k) if k > n => Err(Error::InvalidKind(format!(
                "level {k} exceeds algebra dimension {n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Taylor plus every Słodkowski level for an `n`-dimensional algebra.
    pub fn all_for(n: usize) -> Vec<Self> {
        let mut out = vec![Self::Taylor];
        out.extend((0..=n).map(Self::SlodkowskiDelta));
        out.extend((0..=n).map(Self::SlodkowskiPi));
        out
    }
}

impl Serialize for SpectrumKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.level() {
            None => write!(f, "{}", self.name()),
            Some(k) => write!(f, "{}({k})", self.name()),
        }
    }
}

/// A computed spectrum: sorted, deduplicated characters.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub kind: SpectrumKind,
    pub points: Vec<Character>,
    pub tolerances: ToleranceConfig,
    /// Largest relative `d ∘ d` residual among the complexes built.
    pub max_complex_residual: f64,
    pub complexes_built: usize,
}

/// Homology dimensions of the complex for every candidate character, from
/// which the spectrum of any kind can be read off.
#[derive(Debug, Clone)]
pub struct HomologyTable {
    pub algebra_dim: usize,
    pub candidates: Vec<Character>,
    /// `homology[c][p] = dim H_p` for candidate `c`.
    pub homology: Vec<Vec<usize>>,
    pub max_complex_residual: f64,
    pub tolerances: ToleranceConfig,
}

/// Builds the complex for every spectral candidate of `alg` (in parallel).
pub fn homology_table(alg: &Arc<MatrixLieAlgebra>, cfg: &ToleranceConfig) -> Result<HomologyTable> {
    if !is_solvable_algebra(alg, cfg)? {
        return Err(Error::NotSolvable);
    }
    let candidates = spectral_candidates(alg, cfg)?;
    let rows: Vec<(Vec<usize>, f64)> = candidates
        .par_iter()
        .map(|f| {
            let cx = build_complex(alg, f, cfg)?;
            Ok((cx.homology_dims(cfg)?, cx.residual()))
        })
        .collect::<Result<_>>()?;
    let max_complex_residual = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(HomologyTable {
        algebra_dim: alg.dim(),
        candidates,
        homology: rows.into_iter().map(|r| r.0).collect(),
        max_complex_residual,
        tolerances: *cfg,
    })
}

impl HomologyTable {
    pub fn spectrum(&self, kind: SpectrumKind) -> Result<SpectrumResult> {
        kind.validate(self.algebra_dim)?;
        let n = self.algebra_dim;
        let members: Vec<Character> = self
            .candidates
            .iter()
            .zip(&self.homology)
            .filter(|(_, h)| {
                h.iter()
                    .enumerate()
                    .any(|(p, &dim)| dim > 0 && kind.includes_degree(p, n))
            })
            .map(|(f, _)| f.clone())
            .collect();
        let points = normalize_points(members, &self.tolerances);
        if points.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        Ok(SpectrumResult {
            kind,
            points,
            tolerances: self.tolerances,
            max_complex_residual: self.max_complex_residual,
            complexes_built: self.candidates.len(),
        })
    }
}

/// The joint spectrum of a solvable algebra acting on `C^d`.
///
/// Candidates are the characters returned by
/// [`spectral_candidates`]; each is tested by the exactness of its
/// Chevalley–Eilenberg complex in the degrees selected by `kind`.
pub fn spectrum(
    alg: &Arc<MatrixLieAlgebra>,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<SpectrumResult> {
    kind.validate(alg.dim())?;
    homology_table(alg, cfg)?.spectrum(kind)
}

/// Whether a single character belongs to the spectrum, decided directly from
/// its complex without enumerating candidates.
pub fn is_member(
    alg: &MatrixLieAlgebra,
    f: &Character,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    let n = alg.dim();
    kind.validate(n)?;
    let cx = build_complex(alg, f, cfg)?;
    for p in 0..=n {
        if kind.includes_degree(p, n) && !cx.is_exact_at(p, cfg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Comparison of `σ(L)|_H` with `σ(H)`.
#[derive(Debug, Clone, Serialize)]
pub struct ContractReport {
    pub kind: String,
    pub level: Option<usize>,
    pub whole: Vec<Character>,
    pub restricted: Vec<Character>,
    pub ideal: Vec<Character>,
    pub mismatch: SetMatch,
    pub passed: bool,
}

/// Checks the projection property `σ(L)|_H = σ(H)` for an ideal `H`; the
/// level of a Słodkowski kind is capped at `dim H` on the ideal side.
pub fn verify_spectrum_contract(
    l: &Arc<MatrixLieAlgebra>,
    h: &Subalgebra,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<ContractReport> {
    let whole = spectrum(l, kind, cfg)?.points;
    contract_report(l, h, kind, whole, cfg)
}

/// Like [`verify_spectrum_contract`] but with `σ(L)` supplied by the caller.
pub fn contract_report(
    l: &Arc<MatrixLieAlgebra>,
    h: &Subalgebra,
    kind: SpectrumKind,
    whole: Vec<Character>,
    cfg: &ToleranceConfig,
) -> Result<ContractReport> {
    if !is_ideal(h, l, cfg)? {
        return Err(Error::InvalidInput("subalgebra is not an ideal".into()));
    }
    let restricted = normalize_points(
        whole
            .iter()
            .map(|f| f.restrict(h))
            .collect::<Result<Vec<_>>>()?,
        cfg,
    );
    let ideal = spectrum(&h.to_algebra()?, kind.clamp_to(h.dim()), cfg)?.points;
    let mismatch = match_sets(&restricted, &ideal, cfg);
    Ok(ContractReport {
        kind: kind.name().into(),
        level: kind.level(),
        whole,
        restricted,
        ideal,
        passed: mismatch.equal(),
        mismatch,
    })
}
