use serde_json::{json, Value};

use jointspec::io::{parse_spectrum_points, Problem};
use jointspec::koszul::{contract_report, verify_spectrum_contract};
use jointspec::limit::{
    check_presentation_independence, uniqueness_audit, verify_projection_property, AuditTargets,
};
use jointspec::{Error, Result, SpectrumKind, ToleranceConfig};

use crate::KindArgs;

pub struct VerifyRequest<'a> {
    pub kind: &'a KindArgs,
    pub families: &'a [String],
    pub subalgebra: &'a str,
    pub ideal: Option<&'a str>,
    pub spectrum: Option<&'a str>,
}

/// The requested family, or the only family of the file.
pub fn pick_family(p: &Problem, label: Option<&str>) -> Result<String> {
    match label {
        Some(l) => Ok(l.to_string()),
        None if p.families.len() == 1 => Ok(p.families.keys().next().cloned().unwrap_or_default()),
        None => Err(Error::InvalidInput(
            "--family is required when the file defines several families".into(),
        )),
    }
}

/// Kinds to check on an `n`-dimensional algebra: one kind, or every kind
/// under `--kind all`.
fn kinds(args: &KindArgs, n: usize) -> Result<Vec<SpectrumKind>> {
    match args.kind.as_deref() {
        Some("all") => Ok(SpectrumKind::all_for(n)),
        other => Ok(vec![SpectrumKind::from_parts(other.unwrap_or("taylor"), args.k)?]),
    }
}

fn kind_entry(kind: SpectrumKind, passed: bool, report: Value) -> Value {
    json!({ "kind": kind.name(), "k": kind.level(), "passed": passed, "report": report })
}

fn ideal_label<'a>(req: &'a VerifyRequest) -> Result<&'a str> {
    req.ideal
        .ok_or_else(|| Error::InvalidInput("--ideal is required for this check".into()))
}

pub fn projection(p: &Problem, req: &VerifyRequest, cfg: &ToleranceConfig) -> Result<(Value, bool)> {
    let label = pick_family(p, req.families.first().map(String::as_str))?;
    let fam = p.family(&label)?;
    let h = p.subalgebra(ideal_label(req)?)?;
    let mut out = Vec::new();
    let mut all = true;
    for kind in kinds(req.kind, p.algebra.dim())? {
        let rep = verify_projection_property(fam, h, kind, cfg)?;
        all &= rep.passed;
        out.push(kind_entry(kind, rep.passed, serde_json::to_value(&rep)?));
    }
    Ok((Value::Array(out), all))
}

pub fn presentation(p: &Problem, req: &VerifyRequest, cfg: &ToleranceConfig) -> Result<(Value, bool)> {
    let [a, b] = req.families else {
        return Err(Error::InvalidInput(
            "presentation takes exactly two --family labels".into(),
        ));
    };
    let (fa, fb) = (p.family(a)?, p.family(b)?);
    let mut out = Vec::new();
    let mut all = true;
    for kind in kinds(req.kind, p.algebra.dim())? {
        let rep = check_presentation_independence(fa, fb, kind, cfg)?;
        all &= rep.equal;
        out.push(kind_entry(kind, rep.equal, serde_json::to_value(&rep)?));
    }
    Ok((Value::Array(out), all))
}

pub fn uniqueness(p: &Problem, req: &VerifyRequest, cfg: &ToleranceConfig) -> Result<(Value, bool)> {
    let label = pick_family(p, req.families.first().map(String::as_str))?;
    let fam = p.family(&label)?;
    let targets = AuditTargets::default_for(fam);
    let mut out = Vec::new();
    let mut all = true;
    for kind in kinds(req.kind, p.algebra.dim())? {
        let rep = uniqueness_audit(fam, kind, &targets, cfg)?;
        all &= rep.passed;
        out.push(kind_entry(kind, rep.passed, serde_json::to_value(&rep)?));
    }
    Ok((Value::Array(out), all))
}

#[derive(serde::Deserialize)]
struct ClaimedKind {
    kind: Option<String>,
    k: Option<usize>,
}

pub fn contract(p: &Problem, req: &VerifyRequest, cfg: &ToleranceConfig) -> Result<(Value, bool)> {
    let outer = p.subalgebra(req.subalgebra)?;
    let h = p.subalgebra(ideal_label(req)?)?.relative_to(outer, cfg)?;
    let l = outer.to_algebra()?;

    if let Some(source) = req.spectrum {
        let text = if source == "-" {
            std::io::read_to_string(std::io::stdin())?
        } else {
            std::fs::read_to_string(source)?
        };
        let claimed = parse_spectrum_points(&text)?;
        let kind = match req.kind.kind.as_deref() {
            Some(_) => parse_kind_single(req.kind)?,
            None => {
                let c: ClaimedKind = serde_json::from_str(&text)?;
                SpectrumKind::from_parts(c.kind.as_deref().unwrap_or("taylor"), c.k)?
            }
        };
        if let Some(f) = claimed.iter().find(|f| f.dim() != l.dim()) {
            return Err(Error::DimensionMismatch {
                expected: l.dim(),
                found: f.dim(),
            });
        }
        let rep = contract_report(&l, &h, kind, claimed, cfg)?;
        let passed = rep.passed;
        return Ok((
            Value::Array(vec![kind_entry(kind, passed, serde_json::to_value(&rep)?)]),
            passed,
        ));
    }

    let mut out = Vec::new();
    let mut all = true;
    for kind in kinds(req.kind, l.dim())? {
        let rep = verify_spectrum_contract(&l, &h, kind, cfg)?;
        all &= rep.passed;
        out.push(kind_entry(kind, rep.passed, serde_json::to_value(&rep)?));
    }
    Ok((Value::Array(out), all))
}

fn parse_kind_single(args: &KindArgs) -> Result<SpectrumKind> {
    SpectrumKind::from_parts(args.kind.as_deref().unwrap_or("taylor"), args.k)
}
