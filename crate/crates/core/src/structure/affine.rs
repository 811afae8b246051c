use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::numerics::{lp_solve, rank, solve, DenseMatrix, Field, LinearProgram, LinearSolution};
use crate::scaling::{convex_decompose, ensure_scaling, MinimalScalingSet, ScalingVector};
use crate::subset::IndexSet;

use super::poset::{empty_cover, factor_poset, EmptyCover, POSET_CAP};

/// Cap on `|V|` for the exponential witness searches.
pub const WITNESS_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessSearch<W> {
    Found(W),
    NotFound,
    Skipped { size: usize, cap: usize },
}

impl<W> WitnessSearch<W> {
    pub fn found(&self) -> Option<&W> {
        match self {
            Self::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Self::Skipped { .. })
    }
}

/// Disjoint `J₁, J₂` whose convex hulls share a relative-interior point.
#[derive(Clone, Debug, PartialEq)]
pub struct RelintWitness<T> {
    pub first: IndexSet,
    pub second: IndexSet,
    pub point: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineDependenceReport<T> {
    pub dependent: bool,
    /// Rank of the vertices with an appended constant coordinate.
    pub affine_rank: usize,
    /// `i` with `supp(v_i) ⊆ ∪_{j≠i} supp(v_j)`.
    pub support_containment: Option<usize>,
    pub relint_intersection: WitnessSearch<RelintWitness<T>>,
    /// Disjoint `(J₁, J₂)` with `∪_{J₁} supp = ∪_{J₂} supp`.
    pub equal_support_union: WitnessSearch<(IndexSet, IndexSet)>,
}

impl<T> AffineDependenceReport<T> {
    /// All four characterizations agree. `None` when a witness search was
    /// skipped.
    pub fn conditions_agree(&self) -> Option<bool> {
        if self.relint_intersection.is_skipped() || self.equal_support_union.is_skipped() {
            return None;
        }
        let d = self.dependent;
        Some(
            self.support_containment.is_some() == d
                && self.relint_intersection.found().is_some() == d
                && self.equal_support_union.found().is_some() == d,
        )
    }
}

pub fn affine_dependence_report<T: Field>(
    vertices: &[ScalingVector<T>],
    tol: f64,
) -> Result<AffineDependenceReport<T>> {
    if vertices.is_empty() {
        return Err(Error::EmptySubset);
    }
    let m = vertices.len();
    let affine_rank = affine_rank(vertices, tol);
    let dependent = affine_rank < m;

    let support_containment = (0..m).find(|&i| {
        let others = (0..m)
            .filter(|&j| j != i)
            .fold(IndexSet::empty(), |acc, j| acc.union(vertices[j].support()));
        vertices[i].support().is_subset(&others)
    });

    if m > WITNESS_CAP {
        return Ok(AffineDependenceReport {
            dependent,
            affine_rank,
            support_containment,
            relint_intersection: WitnessSearch::Skipped { size: m, cap: WITNESS_CAP },
            equal_support_union: WitnessSearch::Skipped { size: m, cap: WITNESS_CAP },
        });
    }

    let pairs = equal_union_pairs(vertices);
    let equal_support_union = match pairs.first() {
        Some(&(a, b)) => WitnessSearch::Found((IndexSet::from_mask(a), IndexSet::from_mask(b))),
        None => WitnessSearch::NotFound,
    };
    // Equal support unions are necessary for a shared relative-interior
    // point, since all weights are nonnegative.
    let mut relint_intersection = WitnessSearch::NotFound;
    for &(a, b) in &pairs {
        let (j1, j2) = (IndexSet::from_mask(a), IndexSet::from_mask(b));
        let r = relative_interiors_intersect(vertices, &j1, &j2, tol)?;
        if let (true, Some(point)) = (r.intersect, r.point) {
            relint_intersection = WitnessSearch::Found(RelintWitness {
                first: j1,
                second: j2,
                point,
            });
            break;
        }
    }
    Ok(AffineDependenceReport {
        dependent,
        affine_rank,
        support_containment,
        relint_intersection,
        equal_support_union,
    })
}

/// Disjoint nonempty pairs `(A, B)` of vertex masks with equal support
/// unions, `min A < min B`, ordered by total size and then by masks.
fn equal_union_pairs<T: Field>(vertices: &[ScalingVector<T>]) -> Vec<(u64, u64)> {
    let m = vertices.len();
    let full = (1u64 << m) - 1;
    let mut unions = vec![0u64; 1 << m];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        unions[mask as usize] = unions[(mask & (mask - 1)) as usize] | vertices[low].support().mask();
    }
    let mut pairs = Vec::new();
    for a in 1..=full {
        let rest = full & !a;
        let mut b = rest;
        while b != 0 {
            if b.trailing_zeros() > a.trailing_zeros() && unions[a as usize] == unions[b as usize] {
                pairs.push((a, b));
            }
            b = (b - 1) & rest;
        }
    }
    pairs.sort_by_key(|&(a, b)| (a.count_ones() + b.count_ones(), a, b));
    pairs
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelintResult<T> {
    pub intersect: bool,
    /// Largest common lower bound on the barycentric coefficients.
    pub margin: Option<T>,
    pub point: Option<Vec<T>>,
}

/// Maximizes `t` subject to `Σ_{J₁} α v = Σ_{J₂} β v`, `Σα = Σβ = 1` and
/// `α, β >= t >= 0`. The relative interiors meet when the optimum is
/// positive (above `tol` in float mode).
pub fn relative_interiors_intersect<T: Field>(
    vertices: &[ScalingVector<T>],
    j1: &IndexSet,
    j2: &IndexSet,
    tol: f64,
) -> Result<RelintResult<T>> {
    if j1.is_empty() || j2.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !j1.is_disjoint(j2) {
        return Err(Error::NotDisjoint);
    }
    for &i in j1.as_slice().iter().chain(j2.as_slice()) {
        if i >= vertices.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                k: vertices.len(),
            });
        }
    }
    let k = vertices[0].len();
    let (a, b) = (j1.len(), j2.len());
    // Columns: α (a), β (b), t, slacks (a + b).
    let t_col = a + b;
    let vars = 2 * (a + b) + 1;
    let rows = k + 2 + a + b;
    let members: Vec<usize> = j1.as_slice().iter().chain(j2.as_slice()).copied().collect();
    let mut mat = DenseMatrix::zeros(rows, vars);
    for (col, &v) in members.iter().enumerate() {
        let sign = if col < a { T::one() } else { -T::one() };
        for i in 0..k {
            mat.set(i, col, sign.clone() * vertices[v].weights()[i].clone());
        }
        mat.set(if col < a { k } else { k + 1 }, col, T::one());
        let r = k + 2 + col;
        mat.set(r, col, T::one());
        mat.set(r, t_col, -T::one());
        mat.set(r, t_col + 1 + col, -T::one());
    }
    let mut rhs = vec![T::zero(); rows];
    rhs[k] = T::one();
    rhs[k + 1] = T::one();
    let mut objective = vec![T::zero(); vars];
    objective[t_col] = T::one();
    let lp = LinearProgram::new(objective, mat, rhs, vec![true; vars])?;
    let res = lp_solve(&lp, tol)?;
    let optimal = res.is_optimal();
    let Some(x) = res.solution.filter(|_| optimal) else {
        return Ok(RelintResult {
            intersect: false,
            margin: None,
            point: None,
        });
    };
    let margin = x[t_col].clone();
    let intersect = margin.is_positive_tol(tol, 1.0);
    let mut point = vec![T::zero(); k];
    for (col, &v) in members.iter().enumerate().take(a) {
        for (p, w) in point.iter_mut().zip(vertices[v].weights()) {
            *p = p.clone() + x[col].clone() * w.clone();
        }
    }
    Ok(RelintResult {
        intersect,
        margin: Some(margin),
        point: intersect.then_some(point),
    })
}

/// Whether `target = Σ α_i v_i` for some `α` with `Σα = 1`.
pub fn affine_hull_member<T: Field>(vertices: &[ScalingVector<T>], target: &[T], tol: f64) -> Result<bool> {
    if vertices.is_empty() {
        return Err(Error::EmptySubset);
    }
    let k = target.len();
    if let Some(v) = vertices.iter().find(|v| v.len() != k) {
        return Err(Error::LengthMismatch {
            expected: k,
            found: v.len(),
        });
    }
    let a = DenseMatrix::from_fn(k + 1, vertices.len(), |i, j| {
        if i < k {
            vertices[j].weights()[i].clone()
        } else {
            T::one()
        }
    });
    let mut b = target.to_vec();
    b.push(T::one());
    Ok(!matches!(solve(&a, &b, tol), LinearSolution::Inconsistent))
}

/// Whether `{v_j}_{j ∈ J}` is the vertex set of a face of `conv V`.
///
/// Maximizes a margin `δ <= 1` over hyperplanes `<a, v_j> = b` on `J` with
/// `<a, v_i> <= b - δ` off `J`; a face exactly when `δ > tol` (or `δ > 0`
/// for exact scalars). `J` equal to all of `V` is the improper face.
pub fn is_face_subset<T: Field>(vertices: &[ScalingVector<T>], j: &IndexSet, tol: f64) -> Result<bool> {
    if j.is_empty() {
        return Err(Error::EmptySubset);
    }
    let m = vertices.len();
    if let Some(&bad) = j.as_slice().iter().find(|&&i| i >= m) {
        return Err(Error::IndexOutOfRange { index: bad, k: m });
    }
    if j.len() == m {
        return Ok(true);
    }
    let k = vertices[0].len();
    let outside: Vec<usize> = (0..m).filter(|&i| !j.contains(i)).collect();
    // Columns: a (k, free), b (free), δ, slack for δ <= 1, one slack per
    // outside vertex.
    let (b_col, d_col, s_col) = (k, k + 1, k + 2);
    let vars = k + 3 + outside.len();
    let rows = m + 1;
    let mut mat = DenseMatrix::zeros(rows, vars);
    for (r, &v) in j.as_slice().iter().chain(&outside).enumerate() {
        for i in 0..k {
            mat.set(r, i, vertices[v].weights()[i].clone());
        }
        mat.set(r, b_col, -T::one());
        if r >= j.len() {
            mat.set(r, d_col, T::one());
            mat.set(r, s_col + 1 + (r - j.len()), T::one());
        }
    }
    mat.set(m, d_col, T::one());
    mat.set(m, s_col, T::one());
    let mut rhs = vec![T::zero(); rows];
    rhs[m] = T::one();
    let mut objective = vec![T::zero(); vars];
    objective[d_col] = T::one();
    let mut nonneg = vec![true; vars];
    for flag in nonneg.iter_mut().take(k + 1) {
        *flag = false;
    }
    let res = lp_solve(&LinearProgram::new(objective, mat, rhs, nonneg)?, tol)?;
    Ok(res.is_optimal() && res.objective.is_some_and(|d| d.is_positive_tol(tol, 1.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrictScalingReport {
    pub strict: bool,
    pub ec: EmptyCover,
    /// Set when the minimal scalings are affinely independent and `c` is
    /// strict: whether every convex coefficient of `c` is positive.
    pub coefficients_all_positive: Option<bool>,
}

pub fn strict_scaling_report<T: Field>(
    frame: &Frame<T>,
    c: &ScalingVector<T>,
    minimal: &MinimalScalingSet<T>,
) -> Result<StrictScalingReport> {
    ensure_scaling(frame, c)?;
    let k = frame.k();
    let strict = c.support().len() == k;
    let ec = empty_cover(&factor_poset(frame, Some(c), POSET_CAP)?);
    let union = minimal
        .vertices()
        .iter()
        .fold(IndexSet::empty(), |acc, v| acc.union(v.support()));
    let independent = !minimal.is_empty()
        && !affine_dependence_flag(minimal.vertices(), frame.tol());
    let coefficients_all_positive = if strict && independent && union.len() == k {
        let alpha = convex_decompose(c, minimal.vertices(), frame.tol())?;
        Some(alpha.iter().all(|a| a.is_positive_tol(frame.tol(), 1.0)))
    } else {
        None
    };
    Ok(StrictScalingReport {
        strict,
        ec,
        coefficients_all_positive,
    })
}

/// Rank-based affine dependence without any witness search.
pub fn affine_dependence_flag<T: Field>(vertices: &[ScalingVector<T>], tol: f64) -> bool {
    !vertices.is_empty() && affine_rank(vertices, tol) < vertices.len()
}

fn affine_rank<T: Field>(vertices: &[ScalingVector<T>], tol: f64) -> usize {
    let k = vertices[0].len();
    let augmented = DenseMatrix::from_fn(vertices.len(), k + 1, |i, j| {
        if j < k {
            vertices[i].weights()[j].clone()
        } else {
            T::one()
        }
    });
    rank(&augmented, tol)
}
