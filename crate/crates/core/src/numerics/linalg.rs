use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::Field;
use super::matrix::DenseMatrix;

/// Reduced row echelon form together with the pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub reduced: DenseMatrix<T>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination.
///
/// Float mode uses partial pivoting and accepts a pivot only when it exceeds
/// `tol` times the largest absolute entry of `m`; exact mode takes the first
/// nonzero entry in each column.
pub fn rref<T: Field>(m: &DenseMatrix<T>, tol: f64) -> Echelon<T> {
    let mut a = m.clone();
    let scale = m.max_abs();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let Some(p) = choose_pivot(&a, row, col, tol, scale) else {
            if !T::is_exact() {
                for i in row..a.rows() {
                    a.set(i, col, T::zero());
                }
            }
            continue;
        };
        a.swap_rows(row, p);
        let pivot = a.get(row, col).clone();
        for j in col..a.cols() {
            let v = a.get(row, j).clone() / pivot.clone();
            a.set(row, j, v);
        }
        for i in 0..a.rows() {
            if i == row || a.get(i, col).is_zero() {
                continue;
            }
            let factor = a.get(i, col).clone();
            for j in col..a.cols() {
                let v = a.get(i, j).clone() - factor.clone() * a.get(row, j).clone();
                a.set(i, j, v);
            }
            a.set(i, col, T::zero());
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { reduced: a, pivots }
}

fn choose_pivot<T: Field>(
    a: &DenseMatrix<T>,
    from: usize,
    col: usize,
    tol: f64,
    scale: f64,
) -> Option<usize> {
    if T::is_exact() {
        return (from..a.rows()).find(|&i| !a.get(i, col).is_zero());
    }
    let (best, mag) = (from..a.rows())
        .map(|i| (i, a.get(i, col).to_f64().abs()))
        .fold((from, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    (mag > tol * scale).then_some(best)
}

/// Numerical rank (float) or exact rank (rational).
pub fn rank<T: Field>(m: &DenseMatrix<T>, tol: f64) -> usize {
    T::rank_of(m, tol)
}

pub(crate) fn float_rank(m: &DenseMatrix<f64>, tol: f64) -> usize {
    rref(m, tol).pivots.len()
}

/// Bareiss fraction-free elimination over the integers.
pub(crate) fn fraction_free_rank(m: &DenseMatrix<BigInt>) -> usize {
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let pivot = a.get(r, c).clone();
        for i in r + 1..a.rows() {
            let lead = a.get(i, c).clone();
            for j in c + 1..a.cols() {
                let num = a.get(i, j) * &pivot - &lead * a.get(r, j);
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a.set(i, j, num / &prev);
            }
            a.set(i, c, BigInt::zero());
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn nullspace_basis<T: Field>(m: &DenseMatrix<T>, tol: f64) -> Vec<Vec<T>> {
    let Echelon { reduced, pivots } = rref(m, tol);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); m.cols()];
            x[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -reduced.get(r, f).clone();
            }
            x
        })
        .collect()
}

/// Outcome of solving `a x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<T> {
    Unique(Vec<T>),
    /// Consistent with free variables; the particular solution sets them to zero.
    Underdetermined { particular: Vec<T>, free: Vec<usize> },
    Inconsistent,
}

pub fn solve<T: Field>(a: &DenseMatrix<T>, b: &[T], tol: f64) -> LinearSolution<T> {
    assert_eq!(a.rows(), b.len(), "rhs length must match rows");
    let augmented = DenseMatrix::from_fn(a.rows(), a.cols() + 1, |i, j| {
        if j < a.cols() {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let Echelon { reduced, pivots } = rref(&augmented, tol);
    if pivots.last() == Some(&a.cols()) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![T::zero(); a.cols()];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = reduced.get(r, a.cols()).clone();
    }
    if pivots.len() == a.cols() {
        LinearSolution::Unique(x)
    } else {
        let free = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
        LinearSolution::Underdetermined { particular: x, free }
    }
}

/// Indices of a maximal linearly independent subset of the rows of `m`,
/// preferring earlier rows.
pub fn independent_rows<T: Field>(m: &DenseMatrix<T>, tol: f64) -> Vec<usize> {
    rref(&m.transpose(), tol).pivots
}

/// Rank of a symmetric matrix if it is positive semidefinite, `None`
/// otherwise.
///
/// Symmetric elimination in the given order: a negative pivot, or a zero
/// pivot with a nonzero remainder in its row, certifies indefiniteness.
pub fn psd_rank<T: Field>(m: &DenseMatrix<T>, tol: f64) -> Option<usize> {
    assert_eq!(m.rows(), m.cols(), "psd_rank needs a square matrix");
    let scale = m.max_abs();
    let mut a = m.clone();
    let k = a.rows();
    let mut rank = 0;
    for i in 0..k {
        let d = a.get(i, i).clone();
        if d.is_zero_tol(tol, scale) {
            if (i + 1..k).any(|j| !a.get(i, j).is_zero_tol(tol, scale)) {
                return None;
            }
            continue;
        }
        if d < T::zero() {
            return None;
        }
        for r in i + 1..k {
            let f = a.get(r, i).clone() / d.clone();
            if f.is_zero() {
                continue;
            }
            for c in i + 1..k {
                let v = a.get(r, c).clone() - f.clone() * a.get(i, c).clone();
                a.set(r, c, v);
            }
        }
        rank += 1;
    }
    Some(rank)
}
