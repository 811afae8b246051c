//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Programs are stated as `maximize c·x` subject to `A x = b`, with a
//! nonnegativity flag per variable. Free variables are split into a
//! difference of two nonnegative columns internally.

use super::field::Field;
use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Pivot budget; Bland's rule terminates long before this on desk-scale programs.
pub const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    constraints: DenseMatrix<T>,
    rhs: Vec<T>,
    nonneg: Vec<bool>,
}

impl<T: Field> LinearProgram<T> {
    pub fn new(
        objective: Vec<T>,
        constraints: DenseMatrix<T>,
        rhs: Vec<T>,
        nonneg: Vec<bool>,
    ) -> Result<Self> {
        let vars = constraints.cols();
        if objective.len() != vars {
            return Err(Error::MalformedProgram(format!(
                "objective has {} coefficients for {} variables",
                objective.len(),
                vars
            )));
        }
        if nonneg.len() != vars {
            return Err(Error::MalformedProgram(format!(
                "{} sign flags for {} variables",
                nonneg.len(),
                vars
            )));
        }
        if rhs.len() != constraints.rows() {
            return Err(Error::MalformedProgram(format!(
                "{} right-hand sides for {} constraints",
                rhs.len(),
                constraints.rows()
            )));
        }
        Ok(Self {
            objective,
            constraints,
            rhs,
            nonneg,
        })
    }

    /// Feasibility program over the nonnegative orthant with a zero objective.
    pub fn feasibility(constraints: DenseMatrix<T>, rhs: Vec<T>) -> Result<Self> {
        let vars = constraints.cols();
        Self::new(vec![T::zero(); vars], constraints, rhs, vec![true; vars])
    }

    pub fn variables(&self) -> usize {
        self.constraints.cols()
    }

    pub fn constraints(&self) -> &DenseMatrix<T> {
        &self.constraints
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn nonneg(&self) -> &[bool] {
        &self.nonneg
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpResult<T> {
    pub status: LpStatus,
    pub solution: Option<Vec<T>>,
    pub objective: Option<T>,
    /// Simplex pivots performed across both phases.
    pub pivots: usize,
}

impl<T> LpResult<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    /// Reduced costs; the last entry holds minus the objective value.
    costs: Vec<T>,
    basis: Vec<usize>,
    tol: f64,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<T: Field> Tableau<T> {
    fn width(&self) -> usize {
        self.costs.len() - 1
    }

    fn is_pos(&self, x: &T) -> bool {
        x.is_positive_tol(self.tol, 1.0)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
            row[e] = T::zero();
        }
        if !self.costs[e].is_zero() {
            let f = self.costs[e].clone();
            for (x, y) in self.costs.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
            self.costs[e] = T::zero();
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Runs simplex iterations over the columns in `0..allowed`.
    fn optimize(&mut self, allowed: usize) -> Result<Step> {
        let rhs = self.width();
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(Error::IterationLimit(MAX_PIVOTS));
            }
            // Bland: lowest-index improving column.
            let Some(e) = (0..allowed).find(|&j| self.is_pos(&self.costs[j])) else {
                return Ok(Step::Optimal);
            };
            // Bland: minimum ratio, ties to the lowest basic variable index.
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !self.is_pos(&row[e]) {
                    continue;
                }
                let ratio = row[rhs].clone() / row[e].clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((best, best_ratio)) => {
                        let diff = ratio.clone() - best_ratio.clone();
                        let tie = diff.is_zero_tol(self.tol, 1.0);
                        if (!tie && diff < T::zero()) || (tie && self.basis[i] < self.basis[best]) {
                            Some((i, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            match leave {
                None => return Ok(Step::Unbounded),
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }
}

/// Solves `p`; `tol` is the float-mode zero threshold and is ignored for
/// exact scalars.
pub fn lp_solve<T: Field>(p: &LinearProgram<T>, tol: f64) -> Result<LpResult<T>> {
    let m = p.constraints.rows();
    // Column layout: one column per nonnegative variable, two per free one.
    let mut columns: Vec<(usize, bool)> = Vec::new();
    for (j, &nn) in p.nonneg.iter().enumerate() {
        columns.push((j, true));
        if !nn {
            columns.push((j, false));
        }
    }
    let structural = columns.len();
    let width = structural + m;

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = p.rhs[i] < T::zero();
        let sign = |x: T| if flip { -x } else { x };
        let mut row = Vec::with_capacity(width + 1);
        for &(j, positive) in &columns {
            let a = p.constraints.get(i, j).clone();
            row.push(sign(if positive { a } else { -a }));
        }
        for a in 0..m {
            row.push(if a == i { T::one() } else { T::zero() });
        }
        row.push(sign(p.rhs[i].clone()));
        rows.push(row);
    }

    // Phase 1: maximize minus the sum of artificials.
    let mut costs = vec![T::zero(); width + 1];
    for row in &rows {
        for j in 0..structural {
            costs[j] = costs[j].clone() + row[j].clone();
        }
        costs[width] = costs[width].clone() + row[width].clone();
    }
    let mut t = Tableau {
        rows,
        costs,
        basis: (structural..width).collect(),
        tol,
        pivots: 0,
    };
    t.optimize(width)?;
    let infeasibility = t.costs[width].clone();
    let scale = 1.0 + p.rhs.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    if !infeasibility.is_zero_tol(tol, scale) {
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            solution: None,
            objective: None,
            pivots: t.pivots,
        });
    }

    // Drive remaining artificials out of the basis, dropping redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] < structural {
            r += 1;
            continue;
        }
        match (0..structural).find(|&j| !t.rows[r][j].is_zero_tol(tol, 1.0)) {
            Some(j) => {
                t.pivot(r, j);
                r += 1;
            }
            None => {
                t.rows.remove(r);
                t.basis.remove(r);
            }
        }
    }

    // Phase 2 reduced costs for the real objective.
    let cost_of = |col: usize| -> T {
        if col >= structural {
            return T::zero();
        }
        let (j, positive) = columns[col];
        let c = p.objective[j].clone();
        if positive {
            c
        } else {
            -c
        }
    };
    let mut costs: Vec<T> = (0..=width).map(|j| if j < width { cost_of(j) } else { T::zero() }).collect();
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        let cb = cost_of(b);
        if cb.is_zero() {
            continue;
        }
        for (x, y) in costs.iter_mut().zip(row) {
            *x = x.clone() - cb.clone() * y.clone();
        }
    }
    t.costs = costs;
    if let Step::Unbounded = t.optimize(structural)? {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            solution: None,
            objective: None,
            pivots: t.pivots,
        });
    }

    let mut x = vec![T::zero(); p.variables()];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        if b >= structural {
            continue;
        }
        let (j, positive) = columns[b];
        let v = row[width].clone();
        x[j] = if positive { x[j].clone() + v } else { x[j].clone() - v };
    }
    let objective = super::matrix::dot(&p.objective, &x);
    Ok(LpResult {
        status: LpStatus::Optimal,
        solution: Some(x),
        objective: Some(objective),
        pivots: t.pivots,
    })
}
