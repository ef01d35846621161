use rayon::prelude::*;

use crate::characters::Character;
use crate::error::{Error, Result};
use crate::koszul::{spectrum, SpectrumKind, SpectrumResult};
use crate::lie::{inclusion_matrix, verify_directed_family, DirectedIdealFamily};
use crate::numeric::{CMatrix, ToleranceConfig};

/// Restriction `σ(I_upper) → σ(I_lower)` tabulated on point indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMap {
    pub lower: usize,
    pub upper: usize,
    pub image: Vec<usize>,
}

/// The spectra of the members of a directed family together with the
/// restriction maps between them.
#[derive(Debug, Clone)]
pub struct SpectrumInverseSystem {
    family: DirectedIdealFamily,
    kind: SpectrumKind,
    spaces: Vec<SpectrumResult>,
    maps: Vec<PointMap>,
    // map_index[a][b] = position in `maps` of the map from b down to a
    map_index: Vec<Vec<Option<usize>>>,
}

/// Restricts a character of `upper` along the inclusion matrix of `lower`.
pub(crate) fn restrict_along(f: &Character, inclusion: &CMatrix) -> Character {
    Character::new(
        (0..inclusion.ncols())
            .map(|j| {
                f.values()
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * inclusion[(k, j)])
                    .sum()
            })
            .collect(),
    )
}

/// First point of `targets` within `value_tol` of `f`.
pub(crate) fn locate(f: &Character, targets: &[Character], cfg: &ToleranceConfig) -> Option<usize> {
    targets.iter().position(|t| t.close_to(f, cfg))
}

/// Computes every member spectrum and tabulates all restriction maps,
/// checking the identity and composition laws along the way.
///
/// Members of dimension below a Słodkowski level use the level capped at
/// their dimension.
pub fn build_inverse_system(
    fam: &DirectedIdealFamily,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<SpectrumInverseSystem> {
    if let Some(k) = kind.level() {
        if k > fam.parent().dim() {
            return Err(Error::InvalidKind(format!(
                "level {k} exceeds algebra dimension {}",
                fam.parent().dim()
            )));
        }
    }
    let report = verify_directed_family(fam, cfg)?;
    if !report.passed() {
        return Err(Error::FamilyVerification(report.failures().join("; ")));
    }

    let spaces = fam
        .ideals()
        .par_iter()
        .map(|ideal| spectrum(&ideal.to_algebra()?, kind.clamp_to(ideal.dim()), cfg))
        .collect::<Result<Vec<_>>>()?;

    let m = fam.len();
    let mut maps = Vec::new();
    let mut map_index = vec![vec![None; m]; m];
    for a in 0..m {
        for b in 0..m {
            if !fam.leq(a, b) {
                continue;
            }
            let inc = inclusion_matrix(fam.ideal(a), fam.ideal(b))?;
            let mut image = Vec::with_capacity(spaces[b].points.len());
            for (i, x) in spaces[b].points.iter().enumerate() {
                let r = restrict_along(x, &inc);
                let target = locate(&r, &spaces[a].points, cfg).ok_or_else(|| {
                    Error::SystemAxiomViolation(format!(
                        "restriction of point {i} of `{}` is not in the spectrum of `{}`",
                        fam.labels()[b],
                        fam.labels()[a]
                    ))
                })?;
                image.push(target);
            }
            if a == b && image.iter().enumerate().any(|(i, &t)| i != t) {
                return Err(Error::SystemAxiomViolation(format!(
                    "restriction of `{}` to itself is not the identity",
                    fam.labels()[a]
                )));
            }
            map_index[a][b] = Some(maps.len());
            maps.push(PointMap {
                lower: a,
                upper: b,
                image,
            });
        }
    }

    let sys = SpectrumInverseSystem {
        family: fam.clone(),
        kind,
        spaces,
        maps,
        map_index,
    };
    sys.check_composition()?;
    Ok(sys)
}

impl SpectrumInverseSystem {
    pub fn family(&self) -> &DirectedIdealFamily {
        &self.family
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    /// `σ(I_α)` in family order.
    pub fn spaces(&self) -> &[SpectrumResult] {
        &self.spaces
    }

    pub fn maps(&self) -> &[PointMap] {
        &self.maps
    }

    /// The map `σ(I_upper) → σ(I_lower)`, if `I_lower ⊆ I_upper`.
    pub fn map(&self, lower: usize, upper: usize) -> Option<&PointMap> {
        self.map_index[lower][upper].map(|i| &self.maps[i])
    }

    fn check_composition(&self) -> Result<()> {
        let m = self.family.len();
        for a in 0..m {
            for b in 0..m {
                let Some(ab) = self.map(a, b) else { continue };
                for c in 0..m {
                    let Some(bc) = self.map(b, c) else { continue };
                    let ac = self.map(a, c).ok_or_else(|| {
                        Error::SystemAxiomViolation("inclusion is not transitive".into())
                    })?;
                    for (x, &y) in bc.image.iter().enumerate() {
                        if ab.image[y] != ac.image[x] {
                            return Err(Error::SystemAxiomViolation(format!(
                                "composition fails on `{}` ⊆ `{}` ⊆ `{}`",
                                self.family.labels()[a],
                                self.family.labels()[b],
                                self.family.labels()[c]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest complex residual over all member spectra.
    pub fn max_complex_residual(&self) -> f64 {
        self.spaces
            .iter()
            .map(|s| s.max_complex_residual)
            .fold(0.0, f64::max)
    }
}
