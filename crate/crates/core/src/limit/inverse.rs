use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::system::SpectrumInverseSystem;
use crate::characters::{normalize_points, restrict_character, spectral_candidates, Character};
use crate::error::{Error, Result};
use crate::koszul::{is_member, SpectrumKind};
use crate::lie::{verify_directed_family, DirectedIdealFamily};
use crate::numeric::{
    cmp_scalar_slices, hstack, kernel, pseudo_inverse, rank_with_floor, CVector,
    Scalar, ToleranceConfig,
};

const GLUE_SEED: u64 = 0x6a09_e667_f3bc_c908;

/// Compatible tuples of an inverse system and the characters they glue to.
#[derive(Debug, Clone)]
pub struct InverseLimitSpectrum {
    system: SpectrumInverseSystem,
    /// `tuples[t][α]` indexes a point of `σ(I_α)`.
    pub tuples: Vec<Vec<usize>>,
    /// One global character per tuple, in the same order.
    pub glued: Vec<Character>,
}

impl InverseLimitSpectrum {
    pub fn system(&self) -> &SpectrumInverseSystem {
        &self.system
    }

    /// The member characters of tuple `t`, in family order.
    pub fn tuple_points(&self, t: usize) -> Vec<&Character> {
        self.tuples[t]
            .iter()
            .enumerate()
            .map(|(a, &i)| &self.system.spaces()[a].points[i])
            .collect()
    }

    /// Whether distinct tuples glue to characters that differ beyond
    /// `value_tol`.
    pub fn gluing_injective(&self, cfg: &ToleranceConfig) -> bool {
        self.glued.iter().enumerate().all(|(i, f)| {
            self.glued[i + 1..].iter().all(|g| !f.close_to(g, cfg))
        })
    }
}

/// Enumerates compatible tuples depth first, members in decreasing dimension
/// (ties by label), and glues each one.
pub fn inverse_limit(
    sys: &SpectrumInverseSystem,
    cfg: &ToleranceConfig,
) -> Result<InverseLimitSpectrum> {
    let fam = sys.family();
    let mut order: Vec<usize> = (0..fam.len()).collect();
    order.sort_by(|&a, &b| {
        fam.ideal(b)
            .dim()
            .cmp(&fam.ideal(a).dim())
            .then_with(|| fam.labels()[a].cmp(&fam.labels()[b]))
    });

    let mut tuples = Vec::new();
    let mut current = vec![usize::MAX; fam.len()];
    extend(sys, &order, 0, &mut current, &mut tuples);
    if tuples.is_empty() {
        return Err(Error::EmptyLimit);
    }

    let mut pairs = Vec::with_capacity(tuples.len());
    for t in tuples {
        let parts: Vec<Character> = t
            .iter()
            .enumerate()
            .map(|(a, &i)| sys.spaces()[a].points[i].clone())
            .collect();
        pairs.push((glue_character(&parts, fam, cfg)?.canonical(), t));
    }
    pairs.sort_by(|x, y| {
        cmp_scalar_slices(x.0.values(), y.0.values()).then_with(|| x.1.cmp(&y.1))
    });
    let (glued, tuples) = pairs.into_iter().unzip();
    Ok(InverseLimitSpectrum {
        system: sys.clone(),
        tuples,
        glued,
    })
}

fn extend(
    sys: &SpectrumInverseSystem,
    order: &[usize],
    depth: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == order.len() {
        out.push(current.clone());
        return;
    }
    let a = order[depth];
    let assigned = &order[..depth];
    // a point forced by an already assigned member above `a`
    let mut forced: Option<usize> = None;
    for &b in assigned {
        if let Some(map) = sys.map(a, b) {
            let x = map.image[current[b]];
            match forced {
                Some(y) if y != x => return,
                _ => forced = Some(x),
            }
        }
    }
    let choices: Vec<usize> = match forced {
        Some(x) => vec![x],
        None => (0..sys.spaces()[a].points.len()).collect(),
    };
    for x in choices {
        let compatible = assigned.iter().all(|&b| match sys.map(b, a) {
            Some(map) => map.image[x] == current[b],
            None => true,
        });
        if compatible {
            current[a] = x;
            extend(sys, order, depth + 1, current, out);
        }
    }
    current[a] = usize::MAX;
}

/// The character `f` on the parent with `f|I_α = parts[α]`.
///
/// Each parent basis vector is decomposed over the stacked member bases twice:
/// once with the minimal-norm solution and once shifted by a seeded random
/// element of the kernel. The two evaluations must agree.
pub fn glue_character(
    parts: &[Character],
    fam: &DirectedIdealFamily,
    cfg: &ToleranceConfig,
) -> Result<Character> {
    if parts.len() != fam.len() {
        return Err(Error::DimensionMismatch {
            expected: fam.len(),
            found: parts.len(),
        });
    }
    for (p, ideal) in parts.iter().zip(fam.ideals()) {
        if p.dim() != ideal.dim() {
            return Err(Error::DimensionMismatch {
                expected: ideal.dim(),
                found: p.dim(),
            });
        }
    }
    let n = fam.parent().dim();
    if n == 0 {
        return Ok(Character::zero(0));
    }
    let blocks: Vec<CVector> = fam.ideals().iter().flat_map(|s| s.coeffs().to_vec()).collect();
    let stacked = hstack(n, &blocks);
    let rank = rank_with_floor(&stacked, cfg.rank_tol(), 0.0)?;
    if rank < n {
        return Err(Error::SpanFailure { missing: n - rank });
    }
    let flat: Vec<Scalar> = parts.iter().flat_map(|p| p.values().to_vec()).collect();
    let pinv = pseudo_inverse(&stacked)?;
    let ker = kernel(&stacked, cfg.rank_tol(), 0.0)?;
    let fmax = flat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eval = |y: &CVector| -> Scalar { flat.iter().zip(y.iter()).map(|(f, y)| f * y).sum() };

    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = CVector::zeros(n);
        e[k] = Scalar::new(1.0, 0.0);
        let y = &pinv * &e;
        let v = eval(&y);
        if ker.ncols() > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(GLUE_SEED ^ k as u64);
            let g = CVector::from_iterator(
                ker.ncols(),
                (0..ker.ncols()).map(|_| {
                    Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                }),
            );
            let mut z = &ker * g;
            let zn = z.norm();
            if zn > 0.0 {
                z *= Scalar::new(y.norm().max(1.0) / zn, 0.0);
            }
            let y2 = &y + &z;
            let v2 = eval(&y2);
            let scale = 1f64.max(fmax * (y.norm() + y2.norm()));
            if (v - v2).norm() > cfg.value_tol() * scale {
                return Err(Error::Inconsistent(format!(
                    "two decompositions of basis element {} evaluate to {v} and {v2}",
                    k + 1
                )));
            }
        }
        values.push(v);
    }
    let f = Character::new(values);
    f.check(fam.parent(), cfg)
        .map_err(|e| Error::Inconsistent(format!("glued functional is not a character: {e}")))?;
    Ok(f)
}

/// The characters of the parent whose restriction to every member lies in
/// that member's spectrum, decided member by member from the complexes
/// directly (no tuple search).
pub fn limit_by_characterization(
    fam: &DirectedIdealFamily,
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<Vec<Character>> {
    let report = verify_directed_family(fam, cfg)?;
    if !report.passed() {
        return Err(Error::FamilyVerification(report.failures().join("; ")));
    }
    let algebras = fam
        .ideals()
        .iter()
        .map(|s| s.to_algebra())
        .collect::<Result<Vec<_>>>()?;
    let candidates = spectral_candidates(fam.parent(), cfg)?;
    let keep = candidates
        .par_iter()
        .map(|f| {
            for (ideal, alg) in fam.ideals().iter().zip(&algebras) {
                let r = restrict_character(f, ideal)?;
                if !is_member(alg, &r, kind.clamp_to(ideal.dim()), cfg)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>>>()?;
    let members = candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(f, k)| k.then_some(f))
        .collect();
    Ok(normalize_points(members, cfg))
}
