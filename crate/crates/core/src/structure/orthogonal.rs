use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::numerics::Field;
use crate::scaling::{convex_decompose, ensure_scaling, MinimalScalingSet, ScalingVector};
use crate::subset::IndexSet;

use super::poset::{empty_cover, factor_poset, EmptyCover, POSET_CAP};

/// Cap on the support size for exhaustive decomposition search.
pub const EXHAUSTIVE_CAP: usize = 8;

/// Connected components of the non-orthogonality graph on a subset of
/// scalings, ordered by least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalPartition {
    pub blocks: Vec<IndexSet>,
    pub covered: IndexSet,
}

/// Edges join `i, j` with `<v_i, v_j> > tol`. Scalings are nonnegative, so
/// the test is one-sided.
pub fn smallest_orthogonal_partition<T: Field>(
    vectors: &[ScalingVector<T>],
    subset: &IndexSet,
    tol: f64,
) -> Result<OrthogonalPartition> {
    if vectors.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&bad) = subset.as_slice().iter().find(|&&i| i >= vectors.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            k: vectors.len(),
        });
    }
    let idx = subset.as_slice();
    let mut component = vec![usize::MAX; idx.len()];
    let mut blocks = Vec::new();
    for start in 0..idx.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        component[start] = id;
        let mut stack = vec![start];
        let mut members = vec![idx[start]];
        while let Some(a) = stack.pop() {
            for b in 0..idx.len() {
                if component[b] == usize::MAX
                    && vectors[idx[a]].dot(&vectors[idx[b]]).is_positive_tol(tol, 1.0)
                {
                    component[b] = id;
                    members.push(idx[b]);
                    stack.push(b);
                }
            }
        }
        blocks.push(IndexSet::new(members));
    }
    Ok(OrthogonalPartition {
        blocks,
        covered: subset.clone(),
    })
}

/// Prime when the scaled frame has no proper nonempty tight subframe, i.e.
/// `EC(cF) = {supp(c)}`.
pub fn is_prime_scaling<T: Field>(frame: &Frame<T>, c: &ScalingVector<T>) -> Result<bool> {
    ensure_scaling(frame, c)?;
    let ec = empty_cover(&factor_poset(frame, Some(c), POSET_CAP)?);
    Ok(ec.members() == std::slice::from_ref(c.support()))
}

/// One block `E_j` of an orthogonal decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionBlock<T> {
    pub support: IndexSet,
    /// Rescale `λ_j = n / Σ_{E_j} c` making `c|_{E_j}` a Parseval scaling.
    pub lambda: T,
    /// Weight `1/λ_j` of this block in the convex combination for `c`.
    pub coefficient: T,
    /// `(vertex position in M, α)` with `λ_j c|_{E_j} = Σ α v`.
    pub vertices: Vec<(usize, T)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalDecomposition<T> {
    pub blocks: Vec<DecompositionBlock<T>>,
}

impl<T: Field> OrthogonalDecomposition<T> {
    /// Vertex positions used by the decomposition, one list per block.
    pub fn vertex_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.vertices.iter().map(|(i, _)| *i).collect())
            .collect()
    }
}

/// Orthogonal decomposition of `c` along an exact cover of `supp(c)` by
/// members of `EC(cF)`.
///
/// The cover is the first one found by a depth-first search that always
/// extends the least uncovered index, trying members in graded order.
pub fn orthogonal_decompose_scaling<T: Field>(
    frame: &Frame<T>,
    c: &ScalingVector<T>,
    minimal: &MinimalScalingSet<T>,
) -> Result<OrthogonalDecomposition<T>> {
    ensure_scaling(frame, c)?;
    let ec = empty_cover(&factor_poset(frame, Some(c), POSET_CAP)?);
    let mut covers = Vec::new();
    exact_covers(&ec, c.support(), Some(1), &mut covers);
    let cover = covers.pop().ok_or(Error::CoverNotFound)?;
    decompose_along(frame, c, minimal, &cover)
}

/// Every orthogonal decomposition of `c`, one per exact cover of `supp(c)`
/// by members of `EC(cF)`.
pub fn all_orthogonal_decompositions<T: Field>(
    frame: &Frame<T>,
    c: &ScalingVector<T>,
    minimal: &MinimalScalingSet<T>,
) -> Result<Vec<OrthogonalDecomposition<T>>> {
    ensure_scaling(frame, c)?;
    if c.support().len() > EXHAUSTIVE_CAP {
        return Err(Error::TooLarge {
            what: "support for exhaustive decomposition",
            size: c.support().len(),
            cap: EXHAUSTIVE_CAP,
        });
    }
    let ec = empty_cover(&factor_poset(frame, Some(c), POSET_CAP)?);
    let mut covers = Vec::new();
    exact_covers(&ec, c.support(), None, &mut covers);
    if covers.is_empty() {
        return Err(Error::CoverNotFound);
    }
    covers
        .iter()
        .map(|cover| decompose_along(frame, c, minimal, cover))
        .collect()
}

fn exact_covers(ec: &EmptyCover, target: &IndexSet, limit: Option<usize>, out: &mut Vec<Vec<IndexSet>>) {
    fn go(
        ec: &EmptyCover,
        remaining: &IndexSet,
        chosen: &mut Vec<IndexSet>,
        limit: Option<usize>,
        out: &mut Vec<Vec<IndexSet>>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        let Some(&first) = remaining.as_slice().first() else {
            out.push(chosen.clone());
            return;
        };
        for e in ec.members() {
            if e.contains(first) && e.is_subset(remaining) {
                let rest: IndexSet = remaining.as_slice().iter().copied().filter(|&i| !e.contains(i)).collect();
                chosen.push(e.clone());
                go(ec, &rest, chosen, limit, out);
                chosen.pop();
            }
        }
    }
    go(ec, target, &mut Vec::new(), limit, out);
}

fn decompose_along<T: Field>(
    frame: &Frame<T>,
    c: &ScalingVector<T>,
    minimal: &MinimalScalingSet<T>,
    cover: &[IndexSet],
) -> Result<OrthogonalDecomposition<T>> {
    let n = T::from_usize(frame.n());
    let k = frame.k();
    let mut blocks = Vec::with_capacity(cover.len());
    for e in cover {
        let mass = e
            .as_slice()
            .iter()
            .fold(T::zero(), |a, &i| a + c.weights()[i].clone());
        let lambda = n.clone() / mass.clone();
        let values: Vec<T> = e
            .as_slice()
            .iter()
            .map(|&i| lambda.clone() * c.weights()[i].clone())
            .collect();
        let target = ScalingVector::from_support(k, e, &values);
        let inside: Vec<usize> = (0..minimal.len())
            .filter(|&j| minimal.vertices()[j].support().is_subset(e))
            .collect();
        let candidates: Vec<ScalingVector<T>> = inside.iter().map(|&j| minimal.vertices()[j].clone()).collect();
        let alpha = convex_decompose(&target, &candidates, frame.tol())?;
        let vertices = inside
            .into_iter()
            .zip(alpha)
            .filter(|(_, a)| a.is_positive_tol(frame.tol(), 1.0))
            .collect();
        blocks.push(DecompositionBlock {
            support: e.clone(),
            coefficient: mass / n.clone(),
            lambda,
            vertices,
        });
    }
    Ok(OrthogonalDecomposition { blocks })
}
