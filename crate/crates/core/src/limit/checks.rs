use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::inverse::{glue_character, inverse_limit, limit_by_characterization, InverseLimitSpectrum};
use super::system::{build_inverse_system, locate, restrict_along};
use crate::characters::{match_sets, normalize_points, Character, SetMatch};
use crate::error::{Error, Result};
use crate::koszul::{spectrum, SpectrumKind};
use crate::lie::{
    inclusion_matrix, intersect_with_ideal, is_ideal_of, DirectedIdealFamily, Subalgebra,
};
use crate::numeric::ToleranceConfig;

/// Builds the inverse system of `fam` and its limit in one step.
pub fn limit_spectrum(
    fam: &DirectedIdealFamily,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<InverseLimitSpectrum> {
    let sys = build_inverse_system(fam, kind, cfg)?;
    inverse_limit(&sys, cfg)
}

/// Boolean verdicts attached to a limit computation.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LimitChecks {
    pub system_axioms: bool,
    pub characterization_equivalence: bool,
    pub nonempty: bool,
    pub gluing_injective: bool,
    pub matches_direct_spectrum: bool,
}

impl LimitChecks {
    pub fn all(&self) -> bool {
        self.system_axioms
            && self.characterization_equivalence
            && self.nonempty
            && self.gluing_injective
            && self.matches_direct_spectrum
    }
}

/// A limit spectrum with its cross-checks.
#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub kind: SpectrumKind,
    /// Each compatible tuple as member label → point.
    pub tuples: Vec<BTreeMap<String, Character>>,
    pub glued: Vec<Character>,
    pub characterization: Vec<Character>,
    pub direct: Vec<Character>,
    pub checks: LimitChecks,
    #[serde(skip)]
    pub max_complex_residual: f64,
}

/// Computes the limit spectrum of `fam` and compares it with the
/// characterization set and with the spectrum of the parent computed
/// directly.
pub fn limit_report(
    fam: &DirectedIdealFamily,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<LimitReport> {
    let lim = limit_spectrum(fam, kind, cfg)?;
    let characterization = limit_by_characterization(fam, kind, cfg)?;
    let direct_result = spectrum(fam.parent(), kind, cfg)?;
    let tuples = (0..lim.tuples.len())
        .map(|t| {
            fam.labels()
                .iter()
                .cloned()
                .zip(lim.tuple_points(t).into_iter().cloned())
                .collect()
        })
        .collect();
    let checks = LimitChecks {
        system_axioms: true,
        characterization_equivalence: match_sets(&lim.glued, &characterization, cfg).equal(),
        nonempty: !lim.glued.is_empty(),
        gluing_injective: lim.gluing_injective(cfg),
        matches_direct_spectrum: match_sets(&lim.glued, &direct_result.points, cfg).equal(),
    };
    Ok(LimitReport {
        kind,
        tuples,
        max_complex_residual: lim
            .system()
            .max_complex_residual()
            .max(direct_result.max_complex_residual),
        glued: lim.glued,
        characterization,
        direct: direct_result.points,
        checks,
    })
}

/// Equality of the limit spectra of two presentations of one algebra.
#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub left: Vec<Character>,
    pub right: Vec<Character>,
    pub mismatch: SetMatch,
    pub equal: bool,
}

pub fn check_presentation_independence(
    fam1: &DirectedIdealFamily,
    fam2: &DirectedIdealFamily,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<PresentationReport> {
    if !(Arc::ptr_eq(fam1.parent(), fam2.parent()) || **fam1.parent() == **fam2.parent()) {
        return Err(Error::InvalidInput(
            "presentations are over different algebras".into(),
        ));
    }
    let left = limit_spectrum(fam1, kind, cfg)?.glued;
    let right = limit_spectrum(fam2, kind, cfg)?.glued;
    let mismatch = match_sets(&left, &right, cfg);
    Ok(PresentationReport {
        equal: mismatch.equal(),
        left,
        right,
        mismatch,
    })
}

/// Comparison of `σ(L, fam)|_H` with `σ(H, fam ∩ H)`, together with the
/// tuple-level map between the two limits.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    pub ideal_dim: usize,
    pub restricted: Vec<Character>,
    pub ideal_limit: Vec<Character>,
    pub mismatch: SetMatch,
    /// Every tuple maps componentwise to a compatible tuple of the ideal's
    /// system, and gluing commutes with restriction.
    pub tuple_map_consistent: bool,
    pub passed: bool,
    #[serde(skip)]
    pub max_complex_residual: f64,
}

/// Checks the projection property of the limit spectrum for an ideal `h` of
/// the family parent.
pub fn verify_projection_property(
    fam: &DirectedIdealFamily,
    h: &Subalgebra,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<ProjectionReport> {
    let whole = Subalgebra::whole(fam.parent());
    if !is_ideal_of(h, &whole, cfg)? {
        return Err(Error::InvalidInput("subalgebra is not an ideal".into()));
    }
    let lim = limit_spectrum(fam, kind, cfg)?;
    let fam_h = intersect_with_ideal(h, fam, cfg)?;
    let lim_h = limit_spectrum(&fam_h, kind.clamp_to(h.dim()), cfg)?;

    let restricted = normalize_points(
        lim.glued
            .iter()
            .map(|f| f.restrict(h))
            .collect::<Result<Vec<_>>>()?,
        cfg,
    );
    let mismatch = match_sets(&restricted, &lim_h.glued, cfg);

    // Componentwise restriction P_α : σ(I_α) → σ(H ∩ I_α).
    let mut components = Vec::with_capacity(fam.len());
    for (a, ideal) in fam.ideals().iter().enumerate() {
        let inter = h.intersect(ideal, cfg)?;
        components.push((a, inclusion_matrix(&inter, ideal)?));
    }
    let sys_h = lim_h.system();
    let mut consistent = true;
    'tuples: for (t, glued) in lim.glued.iter().enumerate() {
        let mut image = Vec::with_capacity(fam.len());
        for (a, inc) in &components {
            let x = &lim.system().spaces()[*a].points[lim.tuples[t][*a]];
            match locate(&restrict_along(x, inc), &sys_h.spaces()[*a].points, cfg) {
                Some(i) => image.push(i),
                None => {
                    consistent = false;
                    break 'tuples;
                }
            }
        }
        let Some(pos) = lim_h.tuples.iter().position(|u| *u == image) else {
            consistent = false;
            break;
        };
        if !glued.restrict(h)?.close_to(&lim_h.glued[pos], cfg) {
            consistent = false;
            break;
        }
    }

    let max_complex_residual = lim
        .system()
        .max_complex_residual()
        .max(lim_h.system().max_complex_residual());
    Ok(ProjectionReport {
        ideal_dim: h.dim(),
        passed: mismatch.equal() && consistent,
        restricted,
        ideal_limit: lim_h.glued,
        mismatch,
        tuple_map_consistent: consistent,
        max_complex_residual,
    })
}

/// Ideals and (subalgebra, ideal) pairs examined by [`uniqueness_audit`].
#[derive(Debug, Clone)]
pub struct AuditTargets {
    pub ideals: Vec<(String, Subalgebra)>,
    /// `(outer label, outer, inner label, inner)` with inner an ideal of outer.
    pub pairs: Vec<(String, Subalgebra, String, Subalgebra)>,
}

impl AuditTargets {
    /// Every member; pairs `(L, I_α)` and `(I_β, I_α)` for `I_α ⊊ I_β`.
    pub fn default_for(fam: &DirectedIdealFamily) -> Self {
        let whole = Subalgebra::whole(fam.parent());
        let ideals: Vec<(String, Subalgebra)> = fam
            .labels()
            .iter()
            .cloned()
            .zip(fam.ideals().iter().cloned())
            .collect();
        let mut pairs = Vec::new();
        for (l, s) in &ideals {
            pairs.push(("L".to_string(), whole.clone(), l.clone(), s.clone()));
        }
        for a in 0..fam.len() {
            for b in 0..fam.len() {
                if a != b && fam.leq(a, b) && !fam.leq(b, a) {
                    pairs.push((
                        fam.labels()[b].clone(),
                        fam.ideal(b).clone(),
                        fam.labels()[a].clone(),
                        fam.ideal(a).clone(),
                    ));
                }
            }
        }
        Self { ideals, pairs }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealAgreement {
    pub label: String,
    pub limit: Vec<Character>,
    pub direct: Vec<Character>,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairProjection {
    pub outer: String,
    pub inner: String,
    pub passed: bool,
    pub mismatch: SetMatch,
}

/// The three defining conditions of the extended spectrum, checked on the
/// computed assignment.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    /// The limit is a nonempty finite set of characters of the parent.
    pub nonempty_characters: bool,
    /// On solvable ideals the limit agrees with the directly computed
    /// spectrum.
    pub ideal_agreement: Vec<IdealAgreement>,
    /// Projection property for each (subalgebra, ideal) pair.
    pub projections: Vec<PairProjection>,
    pub passed: bool,
}

pub fn uniqueness_audit(
    fam: &DirectedIdealFamily,
    kind: SpectrumKind,
    targets: &AuditTargets,
    cfg: &ToleranceConfig,
) -> Result<UniquenessReport> {
    let lim = limit_spectrum(fam, kind, cfg)?;
    let nonempty_characters = !lim.glued.is_empty()
        && lim.glued.iter().all(|f| f.check(fam.parent(), cfg).is_ok());

    let mut ideal_agreement = Vec::new();
    for (label, h) in &targets.ideals {
        let k = kind.clamp_to(h.dim());
        let fam_h = intersect_with_ideal(h, fam, cfg)?;
        let limit = limit_spectrum(&fam_h, k, cfg)?.glued;
        let direct = spectrum(&h.to_algebra()?, k, cfg)?.points;
        ideal_agreement.push(IdealAgreement {
            label: label.clone(),
            equal: match_sets(&limit, &direct, cfg).equal(),
            limit,
            direct,
        });
    }

    let mut projections = Vec::new();
    for (outer_label, outer, inner_label, inner) in &targets.pairs {
        let fam_m = intersect_with_ideal(outer, fam, cfg)?;
        let inner_rel = inner.relative_to(outer, cfg)?;
        let rep = verify_projection_property(&fam_m, &inner_rel, kind.clamp_to(outer.dim()), cfg)?;
        projections.push(PairProjection {
            outer: outer_label.clone(),
            inner: inner_label.clone(),
            passed: rep.passed,
            mismatch: rep.mismatch,
        });
    }

    let passed = nonempty_characters
        && ideal_agreement.iter().all(|a| a.equal)
        && projections.iter().all(|p| p.passed);
    Ok(UniquenessReport {
        nonempty_characters,
        ideal_agreement,
        projections,
        passed,
    })
}

/// Glues an explicit tuple (one point per member, in family order).
pub fn glue_tuple(
    lim: &InverseLimitSpectrum,
    t: usize,
    cfg: &ToleranceConfig,
) -> Result<Character> {
    let parts: Vec<Character> = lim.tuple_points(t).into_iter().cloned().collect();
    glue_character(&parts, lim.system().family(), cfg)
}
