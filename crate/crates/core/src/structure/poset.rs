use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::numerics::Field;
use crate::scaling::ScalingVector;
use crate::subset::IndexSet;

/// Default cap on the support size for subset enumeration.
pub const POSET_CAP: usize = 20;

/// Index sets of tight subframes, plus the empty set, in graded order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPoset {
    members: Vec<IndexSet>,
}

impl FactorPoset {
    pub fn new(members: impl IntoIterator<Item = IndexSet>) -> Self {
        let mut members: Vec<IndexSet> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if !members.iter().any(IndexSet::is_empty) {
            members.push(IndexSet::empty());
        }
        members.sort_by(IndexSet::graded_cmp);
        Self { members }
    }

    pub fn members(&self) -> &[IndexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &IndexSet) -> bool {
        self.members.contains(s)
    }

    /// Covering pairs `(lower, upper)` as positions into [`members`](Self::members).
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let m = &self.members;
        let mut edges = Vec::new();
        for (b, upper) in m.iter().enumerate() {
            for (a, lower) in m.iter().enumerate().take(b) {
                if lower.len() == upper.len() || !lower.is_subset(upper) {
                    continue;
                }
                let covered = m.iter().any(|mid| {
                    mid.len() > lower.len()
                        && mid.len() < upper.len()
                        && lower.is_subset(mid)
                        && mid.is_subset(upper)
                });
                if !covered {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// Hasse diagram as a DOT digraph, edges pointing upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph factor_poset {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, s) in self.members.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{s}\"];");
        }
        for (a, b) in self.hasse_edges() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Minimal nonempty members of a factor poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptyCover {
    members: Vec<IndexSet>,
}

impl EmptyCover {
    /// Keeps only the inclusion-minimal nonempty sets.
    pub fn new(sets: impl IntoIterator<Item = IndexSet>) -> Self {
        let mut sets: Vec<IndexSet> = sets.into_iter().filter(|s| !s.is_empty()).collect();
        sets.sort_by(IndexSet::graded_cmp);
        sets.dedup();
        let mut members: Vec<IndexSet> = Vec::new();
        for s in sets {
            if !members.iter().any(|m| m.is_subset(&s)) {
                members.push(s);
            }
        }
        Self { members }
    }

    pub fn members(&self) -> &[IndexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Tight subsets of `supp(c)` (all of `{1..k}` with unit weights when `c` is
/// `None`).
///
/// A subset `J` is tight when `Σ_{i,j ∈ J} c_i c_j G̃(i,j) = 0` and the
/// subframe spans. Float mode compares against `tol · (Σ_J c)²`.
pub fn factor_poset<T: Field>(
    frame: &Frame<T>,
    c: Option<&ScalingVector<T>>,
    cap: usize,
) -> Result<FactorPoset> {
    let k = frame.k();
    let (weights, support) = match c {
        Some(c) => {
            if c.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    found: c.len(),
                });
            }
            (c.weights().to_vec(), c.support().clone())
        }
        None => (vec![T::one(); k], IndexSet::full(k)),
    };
    let idx = support.as_slice();
    let m = idx.len();
    if m > cap.min(63) {
        return Err(Error::TooLarge {
            what: "factor poset support",
            size: m,
            cap: cap.min(63),
        });
    }
    let g = frame.diagram_gramian();
    let g = g.matrix();
    let tol = frame.tol();
    let n = frame.n();

    // q[mask] = ‖Σ_{j ∈ mask} c_j f̃_j‖², w[mask] = Σ_{j ∈ mask} c_j, over
    // local positions in `idx`.
    let size = 1usize << m;
    let mut q = vec![T::zero(); size];
    let mut w = vec![T::zero(); size];
    let mut members = vec![IndexSet::empty()];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let ci = weights[idx[low]].clone();
        let mut cross = T::zero();
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            cross = cross + weights[idx[j]].clone() * g.get(idx[low], idx[j]).clone();
            r &= r - 1;
        }
        q[mask] = q[rest].clone()
            + ci.clone() * ci.clone() * g.get(idx[low], idx[low]).clone()
            + T::from_i64(2) * ci.clone() * cross;
        w[mask] = w[rest].clone() + ci;
        let scale = w[mask].to_f64().powi(2);
        if q[mask].is_zero_tol(tol, scale) {
            let local: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| idx[b]).collect();
            if frame.span_rank(&local) == n {
                members.push(IndexSet::new(local));
            }
        }
    }
    Ok(FactorPoset::new(members))
}

pub fn empty_cover(poset: &FactorPoset) -> EmptyCover {
    EmptyCover::new(poset.members().iter().cloned())
}

/// All unions of pairwise disjoint subfamilies of the empty cover, plus `∅`.
pub fn reconstruct_poset(ec: &EmptyCover) -> FactorPoset {
    let mut unions: BTreeSet<IndexSet> = BTreeSet::from([IndexSet::empty()]);
    for e in ec.members() {
        let extended: Vec<IndexSet> = unions
            .iter()
            .filter(|s| s.is_disjoint(e))
            .map(|s| s.union(e))
            .collect();
        unions.extend(extended);
    }
    FactorPoset::new(unions)
}

pub fn ec_pairwise_disjoint(ec: &EmptyCover) -> bool {
    let m = ec.members();
    m.iter()
        .enumerate()
        .all(|(i, a)| m[i + 1..].iter().all(|b| a.is_disjoint(b)))
}
