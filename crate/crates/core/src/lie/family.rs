use std::sync::Arc;

use serde::Serialize;

use super::algebra::MatrixLieAlgebra;
use super::subalgebra::{is_ideal, is_solvable, Subalgebra};
use crate::error::{Error, Result};
use crate::numeric::{column_space, columns, hstack, pseudo_inverse, ToleranceConfig};

/// A finite family of ideals of a parent algebra, ordered by inclusion.
#[derive(Debug, Clone)]
pub struct DirectedIdealFamily {
    parent: Arc<MatrixLieAlgebra>,
    labels: Vec<String>,
    ideals: Vec<Subalgebra>,
    declared_order: Vec<(String, String)>,
    // inclusion[a][b] ⇔ I_a ⊆ I_b
    inclusion: Vec<Vec<bool>>,
}

impl DirectedIdealFamily {
    /// Assembles a family; nothing beyond label and parent consistency is
    /// checked here (see [`verify_directed_family`]).
    pub fn new(
        parent: &Arc<MatrixLieAlgebra>,
        members: Vec<(String, Subalgebra)>,
        declared_order: Vec<(String, String)>,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("family has no ideals".into()));
        }
        let (labels, ideals): (Vec<String>, Vec<Subalgebra>) = members.into_iter().unzip();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate family label `{l}`")));
            }
        }
        for (l, s) in labels.iter().zip(&ideals) {
            if !(Arc::ptr_eq(s.parent(), parent) || **s.parent() == **parent) {
                return Err(Error::NotSubspace(format!(
                    "ideal `{l}` is not defined over the family parent"
                )));
            }
        }
        for (a, b) in &declared_order {
            for x in [a, b] {
                if !labels.contains(x) {
                    return Err(Error::UnknownLabel(x.clone()));
                }
            }
        }
        let mut inclusion = vec![vec![false; ideals.len()]; ideals.len()];
        for (a, row) in inclusion.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = a == b || ideals[b].contains(&ideals[a], cfg)?;
            }
        }
        Ok(Self {
            parent: parent.clone(),
            labels,
            ideals,
            declared_order,
            inclusion,
        })
    }

    pub fn parent(&self) -> &Arc<MatrixLieAlgebra> {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ideals(&self) -> &[Subalgebra] {
        &self.ideals
    }

    pub fn ideal(&self, idx: usize) -> &Subalgebra {
        &self.ideals[idx]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn declared_order(&self) -> &[(String, String)] {
        &self.declared_order
    }

    /// `I_a ⊆ I_b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.inclusion[a][b]
    }

    /// Index of the first member containing both `a` and `b`.
    pub fn upper_bound(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.len()).find(|&g| self.leq(a, g) && self.leq(b, g))
    }

    /// Sum of all members as a subspace of the parent.
    pub fn span(&self, cfg: &ToleranceConfig) -> Result<usize> {
        let n = self.parent.dim();
        let cols: Vec<_> = self.ideals.iter().flat_map(|s| columns(s.frame())).collect();
        Ok(column_space(&hstack(n, &cols), cfg.rank_tol(), 1.0)?.ncols())
    }

    /// The family restricted to a subset of labels, in the given order.
    pub fn subfamily(&self, labels: &[&str], cfg: &ToleranceConfig) -> Result<Self> {
        let members = labels
            .iter()
            .map(|l| Ok((l.to_string(), self.ideals[self.index_of(l)?].clone())))
            .collect::<Result<Vec<_>>>()?;
        let order = self
            .declared_order
            .iter()
            .filter(|(a, b)| labels.contains(&a.as_str()) && labels.contains(&b.as_str()))
            .cloned()
            .collect();
        Self::new(&self.parent, members, order, cfg)
    }
}

/// A pair of members and the member found to contain both.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct UpperBound {
    pub left: String,
    pub right: String,
    pub bound: Option<String>,
}

/// Outcome of [`verify_directed_family`]; mathematical failures are recorded
/// here instead of being raised.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FamilyReport {
    pub non_solvable: Vec<String>,
    pub non_ideals: Vec<String>,
    pub order_violations: Vec<(String, String)>,
    pub upper_bounds: Vec<UpperBound>,
    pub spans_parent: bool,
    pub span_dim: usize,
    pub parent_dim: usize,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.non_solvable {
            out.push(format!("ideal `{l}` is not solvable"));
        }
        for l in &self.non_ideals {
            out.push(format!("`{l}` is not an ideal of the parent"));
        }
        for (a, b) in &self.order_violations {
            out.push(format!("declared `{a}` <= `{b}` but `{a}` is not contained in `{b}`"));
        }
        for ub in self.upper_bounds.iter().filter(|u| u.bound.is_none()) {
            out.push(format!(
                "no upper bound for `{}` and `{}`",
                ub.left, ub.right
            ));
        }
        if !self.spans_parent {
            out.push(format!(
                "members span dimension {} of {}",
                self.span_dim, self.parent_dim
            ));
        }
        out
    }
}

/// Checks that every member is a solvable ideal, that the declared order is
/// inclusion, that every pair has an upper bound in the family, and that the
/// members span the parent.
pub fn verify_directed_family(
    fam: &DirectedIdealFamily,
    cfg: &ToleranceConfig,
) -> Result<FamilyReport> {
    let mut non_solvable = Vec::new();
    let mut non_ideals = Vec::new();
    for (l, s) in fam.labels.iter().zip(&fam.ideals) {
        if !is_solvable(s, cfg)? {
            non_solvable.push(l.clone());
        }
        if !is_ideal(s, &fam.parent, cfg)? {
            non_ideals.push(l.clone());
        }
    }
    let mut order_violations = Vec::new();
    for (a, b) in &fam.declared_order {
        if !fam.leq(fam.index_of(a)?, fam.index_of(b)?) {
            order_violations.push((a.clone(), b.clone()));
        }
    }
    let mut upper_bounds = Vec::new();
    for a in 0..fam.len() {
        for b in (a + 1)..fam.len() {
            upper_bounds.push(UpperBound {
                left: fam.labels[a].clone(),
                right: fam.labels[b].clone(),
                bound: fam.upper_bound(a, b).map(|g| fam.labels[g].clone()),
            });
        }
    }
    let span_dim = fam.span(cfg)?;
    let parent_dim = fam.parent.dim();
    Ok(FamilyReport {
        non_solvable,
        non_ideals,
        order_violations,
        upper_bounds,
        spans_parent: span_dim == parent_dim,
        span_dim,
        parent_dim,
    })
}

/// The family `(M ∩ I_α)_α` over `M` itself (as the new parent).
pub fn intersect_with_ideal(
    m: &Subalgebra,
    fam: &DirectedIdealFamily,
    cfg: &ToleranceConfig,
) -> Result<DirectedIdealFamily> {
    if !(Arc::ptr_eq(m.parent(), &fam.parent) || **m.parent() == *fam.parent) {
        return Err(Error::NotSubspace(
            "subalgebra is not defined over the family parent".into(),
        ));
    }
    let parent = m.to_algebra()?;
    let mut members = Vec::with_capacity(fam.len());
    let mut cols = Vec::new();
    for (l, ideal) in fam.labels.iter().zip(&fam.ideals) {
        let inter = m.intersect(ideal, cfg)?;
        let rel = inter.relative_to(m, cfg)?;
        cols.extend(columns(&rel.coeff_matrix()));
        members.push((l.clone(), rel));
    }
    let md = m.dim();
    let spanned = column_space(&hstack(md, &cols), cfg.rank_tol(), 0.0)?.ncols();
    if spanned < md {
        return Err(Error::SpanFailure {
            missing: md - spanned,
        });
    }
    DirectedIdealFamily::new(&parent, members, fam.declared_order.clone(), cfg)
}

/// Coordinates of the basis of `inner` in the basis of `outer` (`outer.dim ×
/// inner.dim`), both subalgebras of a common parent with `inner ⊆ outer`.
pub fn inclusion_matrix(
    inner: &Subalgebra,
    outer: &Subalgebra,
) -> Result<crate::numeric::CMatrix> {
    Ok(pseudo_inverse(&outer.coeff_matrix())? * inner.coeff_matrix())
}
