//! Scalings, the scalability polytope and its vertices.

use std::cmp::Ordering;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::numerics::{independent_rows, lp_solve, solve, DenseMatrix, Field, LinearProgram, LinearSolution};
use crate::subset::IndexSet;

/// Largest frame the brute-force oracle accepts.
pub const BRUTE_FORCE_CAP: usize = 16;
/// Supports are tracked as bitmasks.
pub const MASK_CAP: usize = 64;
/// Componentwise distance below which float vertices are identified.
pub const FLOAT_DEDUP_TOL: f64 = 1e-7;

/// Nonnegative weights together with their support.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingVector<T> {
    weights: Vec<T>,
    support: IndexSet,
}

impl<T: Field> ScalingVector<T> {
    /// Rejects negative weights beyond `tol`; float weights in `(-tol, tol]`
    /// are left out of the support.
    pub fn new(weights: Vec<T>, tol: f64) -> Result<Self> {
        if let Some(index) = weights
            .iter()
            .position(|w| w.is_negative() && !w.is_zero_tol(tol, 1.0))
        {
            return Err(Error::NegativeWeight { index });
        }
        let support = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_positive_tol(tol, 1.0))
            .map(|(i, _)| i)
            .collect();
        Ok(Self { weights, support })
    }

    /// Weights given on `support` only, zero elsewhere.
    pub fn from_support(k: usize, support: &IndexSet, values: &[T]) -> Self {
        let mut weights = vec![T::zero(); k];
        for (&i, v) in support.as_slice().iter().zip(values) {
            weights[i] = v.clone();
        }
        Self {
            weights,
            support: support.clone(),
        }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn support(&self) -> &IndexSet {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, w| a + w.clone())
    }

    pub fn dot(&self, other: &Self) -> T {
        crate::numerics::dot(&self.weights, &other.weights)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.support.cmp(&other.support).then_with(|| {
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a.partial_cmp(b).unwrap_or(Ordering::Equal))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    fn close_to(&self, other: &Self, tol: f64) -> bool {
        self.weights.len() == other.weights.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| (a.clone() - b.clone()).is_zero_tol(tol, 1.0))
    }
}

/// Vertex set of the scalability polytope, sorted by support and then by
/// weights.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalScalingSet<T> {
    vertices: Vec<ScalingVector<T>>,
    n: usize,
    k: usize,
    gramian_rank: usize,
}

impl<T: Field> MinimalScalingSet<T> {
    pub fn new(n: usize, k: usize, gramian_rank: usize, mut vertices: Vec<ScalingVector<T>>) -> Self {
        vertices.sort_by(ScalingVector::canonical_cmp);
        let dedup_tol = if T::is_exact() { 0.0 } else { FLOAT_DEDUP_TOL };
        vertices.dedup_by(|a, b| a.close_to(b, dedup_tol));
        Self {
            vertices,
            n,
            k,
            gramian_rank,
        }
    }

    pub fn vertices(&self) -> &[ScalingVector<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gramian_rank(&self) -> usize {
        self.gramian_rank
    }

    pub fn position_of_support(&self, support: &IndexSet) -> Option<usize> {
        self.vertices.iter().position(|v| v.support() == support)
    }

    /// Same vertices up to `tol` componentwise (exact equality for rationals).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .vertices
                .iter()
                .zip(&other.vertices)
                .all(|(a, b)| a.support == b.support && a.close_to(b, tol))
    }
}

/// `[G̃_reduced; 1ᵀ] x = [0; n]`.
#[derive(Clone, Debug)]
pub struct ScalabilitySystem<T> {
    pub matrix: DenseMatrix<T>,
    pub rhs: Vec<T>,
    pub gramian_rank: usize,
}

impl<T: Field> ScalabilitySystem<T> {
    /// Unique solution of the system restricted to `support`, if strictly
    /// positive there.
    fn vertex_on(&self, support: &IndexSet, tol: f64) -> Option<Vec<T>> {
        let a = self.matrix.select_columns(support.as_slice());
        match solve(&a, &self.rhs, tol) {
            LinearSolution::Unique(x) if x.iter().all(|v| v.is_positive_tol(tol, 1.0)) => Some(x),
            _ => None,
        }
    }

    fn has_full_column_rank(&self, support: &IndexSet, tol: f64) -> bool {
        let a = self.matrix.select_columns(support.as_slice());
        crate::numerics::rank(&a, tol) == support.len()
    }
}

pub fn build_scalability_system<T: Field>(frame: &Frame<T>) -> ScalabilitySystem<T> {
    let g = frame.diagram_gramian().with_tol(frame.tol());
    let rows = independent_rows(g.matrix(), frame.tol());
    let k = frame.k();
    let mut stacked = g.matrix().select_rows(&rows).to_rows();
    stacked.push(vec![T::one(); k]);
    let mut rhs = vec![T::zero(); rows.len()];
    rhs.push(T::from_usize(frame.n()));
    ScalabilitySystem {
        matrix: DenseMatrix::from_rows(stacked).expect("system has at least the sum row"),
        rhs,
        gramian_rank: rows.len(),
    }
}

pub fn is_scalable<T: Field>(frame: &Frame<T>) -> Result<bool> {
    if frame.span_rank(&(0..frame.k()).collect::<Vec<_>>()) < frame.n() {
        return Ok(false);
    }
    let system = build_scalability_system(frame);
    let lp = LinearProgram::feasibility(system.matrix, system.rhs)?;
    Ok(lp_solve(&lp, frame.tol())?.is_optimal())
}

/// Candidate supports have size at most `min(rank(G̃) + 1, n(n+1)/2)`;
/// any superset of an accepted support is skipped.
pub fn enumerate_minimal_scalings<T: Field>(frame: &Frame<T>) -> Result<MinimalScalingSet<T>> {
    let k = frame.k();
    if k > MASK_CAP {
        return Err(Error::TooLarge {
            what: "frame vectors",
            size: k,
            cap: MASK_CAP,
        });
    }
    let n = frame.n();
    let tol = frame.tol();
    let system = build_scalability_system(frame);
    let max_size = (system.gramian_rank + 1).min(n * (n + 1) / 2).min(k);
    let mut accepted: Vec<u64> = Vec::new();
    let mut vertices = Vec::new();
    for size in 1..=max_size {
        let candidates: Vec<IndexSet> = (0..k)
            .combinations(size)
            .map(IndexSet::new)
            .filter(|s| {
                let m = s.mask();
                !accepted.iter().any(|&a| a & !m == 0)
            })
            .collect();
        let found: Vec<ScalingVector<T>> = candidates
            .par_iter()
            .filter_map(|s| {
                system
                    .vertex_on(s, tol)
                    .map(|x| ScalingVector::from_support(k, s, &x))
            })
            .collect();
        accepted.extend(found.iter().map(|v| v.support().mask()));
        vertices.extend(found);
    }
    Ok(MinimalScalingSet::new(n, k, system.gramian_rank, vertices))
}

/// Reference enumerator: every nonempty support, no size bound, no pruning.
pub fn brute_force_minimal_scalings<T: Field>(frame: &Frame<T>) -> Result<MinimalScalingSet<T>> {
    let k = frame.k();
    if k > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            what: "frame vectors for brute force",
            size: k,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let tol = frame.tol();
    let system = build_scalability_system(frame);
    let vertices = (1u64..1 << k)
        .into_par_iter()
        .filter_map(|mask| {
            let s = IndexSet::from_mask(mask);
            system
                .vertex_on(&s, tol)
                .map(|x| ScalingVector::from_support(k, &s, &x))
        })
        .collect();
    Ok(MinimalScalingSet::new(frame.n(), k, system.gramian_rank, vertices))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MboundReport {
    pub bound: u128,
    pub size: usize,
    pub holds: bool,
    pub equality: bool,
}

/// `|M(F)| <= C(k, rank(G̃) + 1)`.
pub fn check_mbound<T: Field>(set: &MinimalScalingSet<T>) -> MboundReport {
    let r = set.gramian_rank + 1;
    let bound = if r > set.k {
        0
    } else {
        num_integer::binomial(set.k as u128, r as u128)
    };
    let size = set.len();
    MboundReport {
        bound,
        size,
        holds: size as u128 <= bound,
        equality: size as u128 == bound,
    }
}

/// Errors with `NotAScaling` unless `c` makes the frame Parseval.
pub fn ensure_scaling<T: Field>(frame: &Frame<T>, c: &ScalingVector<T>) -> Result<()> {
    if c.len() != frame.k() {
        return Err(Error::LengthMismatch {
            expected: frame.k(),
            found: c.len(),
        });
    }
    if frame.is_parseval(c.weights())? {
        Ok(())
    } else {
        Err(Error::NotAScaling)
    }
}

/// Whether the scaling `c` is a vertex of the scalability polytope.
///
/// A scaling is a vertex exactly when `{f_i f_iᵀ : i ∈ supp(c)}` is linearly
/// independent, i.e. the system restricted to the support has full column
/// rank. This always implies `|supp(c)| <= n(n+1)/2`; the converse fails
/// when the frame repeats a vector (see [`support_within_bound`]).
pub fn is_minimal_scaling<T: Field>(frame: &Frame<T>, c: &ScalingVector<T>) -> Result<bool> {
    ensure_scaling(frame, c)?;
    let system = build_scalability_system(frame);
    Ok(system.has_full_column_rank(c.support(), frame.tol()))
}

/// `|supp(c)| <= n(n+1)/2`.
pub fn support_within_bound<T: Field>(frame: &Frame<T>, c: &ScalingVector<T>) -> Result<bool> {
    ensure_scaling(frame, c)?;
    let n = frame.n();
    Ok(c.support().len() <= n * (n + 1) / 2)
}

/// Coefficients `α >= 0`, `Σα = 1` with `Σ α_j v_j = c`.
pub fn convex_decompose<T: Field>(
    c: &ScalingVector<T>,
    vertices: &[ScalingVector<T>],
    tol: f64,
) -> Result<Vec<T>> {
    if vertices.is_empty() {
        return Err(Error::NotAScaling);
    }
    let k = c.len();
    if let Some(v) = vertices.iter().find(|v| v.len() != k) {
        return Err(Error::LengthMismatch {
            expected: k,
            found: v.len(),
        });
    }
    let m = vertices.len();
    let a = DenseMatrix::from_fn(k + 1, m, |i, j| {
        if i < k {
            vertices[j].weights[i].clone()
        } else {
            T::one()
        }
    });
    let mut b = c.weights.clone();
    b.push(T::one());
    let result = lp_solve(&LinearProgram::feasibility(a, b)?, tol)?;
    result.solution.ok_or(Error::NotAScaling)
}

/// `Σ c_i f_i f_iᵀ = I_n` within the frame tolerance.
pub fn verify_john_decomposition<T: Field>(frame: &Frame<T>, c: &ScalingVector<T>) -> Result<bool> {
    frame.is_parseval(c.weights())
}
