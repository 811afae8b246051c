//! Frames, diagram vectors and the diagram Gramian.
//!
//! A float frame stores its unit-norm column vectors. An exact frame stores
//! a rational Gram matrix with unit diagonal; vector coordinates of unit
//! vectors are usually irrational, but every quantity the analyses need is
//! rational in the Gram entries.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numerics::{linalg, DenseMatrix, Field, Rational, ScalarMode};
use crate::subset::IndexSet;

/// Allowed deviation from unit norm for ingested float vectors.
pub const UNIT_NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Frame<T> {
    n: usize,
    gram: DenseMatrix<T>,
    vectors: Option<Vec<Vec<T>>>,
    labels: Option<Vec<String>>,
    tol: f64,
}

impl Frame<f64> {
    /// Validates unit-norm columns and renormalizes them exactly.
    pub fn from_vectors(n: usize, vectors: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let mode = ScalarMode::float(tol)?;
        check_shape(n, vectors.len())?;
        let mut unit = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.into_iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            if let Some(col) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite { row: col, col: i });
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::NotUnitNorm { index: i, norm });
            }
            unit.push(v.into_iter().map(|x| x / norm).collect::<Vec<_>>());
        }
        let gram = gram_of(&unit);
        Ok(Self {
            n,
            gram,
            vectors: Some(unit),
            labels: None,
            tol: mode.tol(),
        })
    }
}

impl Frame<Rational> {
    /// Exact frame from a rational Gram matrix with unit diagonal.
    pub fn from_gram(n: usize, gram: DenseMatrix<Rational>) -> Result<Self> {
        check_shape(n, gram.rows())?;
        if gram.rows() != gram.cols() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        for i in 0..gram.rows() {
            if *gram.get(i, i) != Rational::from_i64(1) {
                return Err(Error::BadDiagonal {
                    index: i,
                    value: gram.get(i, i).to_string(),
                });
            }
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let rank = linalg::psd_rank(&gram, 0.0).ok_or(Error::NotPsd)?;
        if rank > n {
            return Err(Error::RankExceedsDimension { rank, n });
        }
        Ok(Self {
            n,
            gram,
            vectors: None,
            labels: None,
            tol: 0.0,
        })
    }

    /// Exact frame from rational coordinates that are exactly unit norm.
    pub fn from_exact_vectors(n: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        check_shape(n, vectors.len())?;
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            let norm_sq = crate::numerics::dot(v, v);
            if norm_sq != Rational::from_i64(1) {
                return Err(Error::NotUnitNorm {
                    index: i,
                    norm: norm_sq.to_f64().sqrt(),
                });
            }
        }
        let gram = gram_of(&vectors);
        Ok(Self {
            n,
            gram,
            vectors: Some(vectors),
            labels: None,
            tol: 0.0,
        })
    }

    /// Float realization: coordinates from the top `n` eigenpairs of the
    /// Gram matrix, or the stored vectors when present.
    pub fn to_float(&self, tol: f64) -> Result<Frame<f64>> {
        let vectors = match &self.vectors {
            Some(v) => v
                .iter()
                .map(|col| col.iter().map(Field::to_f64).collect())
                .collect(),
            None => realize_from_gram(&self.gram.map(Field::to_f64), self.n),
        };
        let mut frame = Frame::from_vectors(self.n, vectors, tol)?;
        frame.labels = self.labels.clone();
        Ok(frame)
    }
}

fn check_shape(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if k < n {
        return Err(Error::TooFewVectors { n, k });
    }
    Ok(())
}

fn gram_of<T: Field>(vectors: &[Vec<T>]) -> DenseMatrix<T> {
    let k = vectors.len();
    let mut g = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let v = crate::numerics::dot(&vectors[i], &vectors[j]);
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    g
}

fn realize_from_gram(gram: &DenseMatrix<f64>, n: usize) -> Vec<Vec<f64>> {
    let k = gram.rows();
    let eig = SymmetricEigen::new(DMatrix::from_fn(k, k, |i, j| *gram.get(i, j)));
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    (0..k)
        .map(|col| {
            order[..n]
                .iter()
                .map(|&e| eig.eigenvalues[e].max(0.0).sqrt() * eig.eigenvectors[(col, e)])
                .collect()
        })
        .collect()
}

/// Result of a tightness test.
#[derive(Clone, Debug, PartialEq)]
pub struct Tightness<T> {
    pub tight: bool,
    /// Reconstruction constant `λ` with `f = λ Σ <f, f_j> f_j`, when tight.
    pub constant: Option<T>,
}

/// Smallest and largest eigenvalue of the frame operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    /// Set for exact frames, whose spectrum is computed in floating point.
    pub approximate: bool,
}

impl<T: Field> Frame<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &DenseMatrix<T> {
        &self.gram
    }

    pub fn vectors(&self) -> Option<&[Vec<T>]> {
        self.vectors.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Float tolerance; zero for exact frames.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Same frame with another decision tolerance. Exact frames keep zero.
    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if T::is_exact() {
            return Ok(self);
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::BadTolerance(tol));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn mode(&self) -> ScalarMode {
        T::mode(self.tol)
    }

    /// Subframe on the given indices, in the given order.
    pub fn subframe(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.k()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                k: self.k(),
            });
        }
        check_shape(self.n, indices.len())?;
        Ok(Self {
            n: self.n,
            gram: self.gram.principal(indices),
            vectors: self
                .vectors
                .as_ref()
                .map(|v| indices.iter().map(|&i| v[i].clone()).collect()),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i].clone()).collect()),
            tol: self.tol,
        })
    }

    /// The frame with a copy of `f_i` appended as a new last element.
    pub fn with_duplicate(&self, i: usize) -> Result<Self> {
        let mut idx: Vec<usize> = (0..self.k()).collect();
        idx.push(i);
        self.subframe(&idx)
    }

    /// Rank of `{f_j : j ∈ subset}` (the span dimension).
    pub fn span_rank(&self, subset: &[usize]) -> usize {
        if subset.is_empty() {
            return 0;
        }
        linalg::rank(&self.gram.principal(subset), self.tol)
    }

    pub fn diagram_gramian(&self) -> DiagramGramian<T> {
        match &self.vectors {
            Some(v) if !T::is_exact() => DiagramGramian::from_vectors(self.n, v)
                .expect("float diagram vectors are always representable"),
            _ => DiagramGramian::from_gram(self.n, &self.gram),
        }
    }

    /// Tightness of the unit-norm subframe on `subset`.
    pub fn is_tight(&self, subset: &IndexSet) -> Result<Tightness<T>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = subset.as_slice().iter().find(|&&i| i >= self.k()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                k: self.k(),
            });
        }
        let g = self.diagram_gramian();
        let q = g.quadratic_form(subset.as_slice(), None);
        let size = subset.len() as f64;
        let tight = q.is_zero_tol(self.tol, size * size)
            && self.span_rank(subset.as_slice()) == self.n;
        Ok(Tightness {
            tight,
            constant: tight.then(|| T::from_usize(self.n) / T::from_usize(subset.len())),
        })
    }

    /// Whether `Σ c_i f_i f_i^T = I_n`.
    ///
    /// Float frames sum the outer products directly. Exact frames without
    /// coordinates use the Gram identity `K C K = K`, which is equivalent
    /// when `K` has rank `n`.
    pub fn is_parseval(&self, weights: &[T]) -> Result<bool> {
        if weights.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                found: weights.len(),
            });
        }
        if let Some(index) = weights.iter().position(|w| w.is_negative() && !w.is_zero_tol(self.tol, 1.0)) {
            return Err(Error::NegativeWeight { index });
        }
        Ok(self.frame_operator_deviation(weights).is_zero_tol(self.tol, 1.0))
    }

    /// Largest entrywise deviation of the scaled frame operator from the
    /// identity (or of `K C K` from `K` for exact Gram frames).
    pub fn frame_operator_deviation(&self, weights: &[T]) -> T {
        let mut worst = T::zero();
        match &self.vectors {
            Some(v) => {
                for r in 0..self.n {
                    for c in 0..self.n {
                        let mut s = if r == c { -T::one() } else { T::zero() };
                        for (w, f) in weights.iter().zip(v) {
                            s = s + w.clone() * f[r].clone() * f[c].clone();
                        }
                        worst = max_abs(worst, s);
                    }
                }
            }
            None => {
                if linalg::rank(&self.gram, self.tol) < self.n {
                    return T::one();
                }
                let k = self.k();
                let kc = DenseMatrix::from_fn(k, k, |i, j| {
                    self.gram.get(i, j).clone() * weights[j].clone()
                });
                let kck = kc.matmul(&self.gram);
                for i in 0..k {
                    for j in 0..k {
                        worst = max_abs(worst, kck.get(i, j).clone() - self.gram.get(i, j).clone());
                    }
                }
            }
        }
        worst
    }

    /// Frame bounds `A <= B` from the spectrum of `F F^T`.
    pub fn frame_bounds(&self) -> Result<FrameBounds> {
        let rank = self.span_rank(&(0..self.k()).collect::<Vec<_>>());
        if rank < self.n {
            return Err(Error::NotSpanning { rank, n: self.n });
        }
        let (eigs, approximate) = match &self.vectors {
            Some(v) if !T::is_exact() => {
                let s = DMatrix::from_fn(self.n, self.n, |r, c| {
                    v.iter().map(|f| f[r].to_f64() * f[c].to_f64()).sum::<f64>()
                });
                (SymmetricEigen::new(s).eigenvalues.iter().copied().collect::<Vec<_>>(), false)
            }
            _ => {
                let k = self.k();
                let g = DMatrix::from_fn(k, k, |i, j| self.gram.get(i, j).to_f64());
                let mut e: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().copied().collect();
                e.sort_by(|a, b| b.total_cmp(a));
                e.truncate(self.n);
                (e, true)
            }
        };
        let lower = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        let upper = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(FrameBounds {
            lower,
            upper,
            approximate,
        })
    }
}

fn max_abs<T: Field>(a: T, b: T) -> T {
    let b = b.abs();
    if b > a {
        b
    } else {
        a
    }
}

/// Diagram vector of `f ∈ R^n`, of length `n(n-1)`.
///
/// Entries are `(f_i² - f_j²)/sqrt(n-1)` for all pairs `i < j` in
/// lexicographic order, followed by `sqrt(2n) f_i f_j / sqrt(n-1)` in the same
/// pair order. Unit vectors have unit diagram vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramVector<T>(pub Vec<T>);

impl<T: Field> DiagramVector<T> {
    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        crate::numerics::dot(&self.0, &other.0)
    }
}

pub fn diagram_vector<T: Field>(f: &[T], n: usize) -> Result<DiagramVector<T>> {
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.len(),
        });
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let root = |v: usize| {
        T::from_usize(v)
            .sqrt()
            .ok_or_else(|| Error::NotRepresentable(format!("sqrt({v})")))
    };
    let norm = root(n - 1)?;
    let product_scale = root(2 * n)? / norm.clone();
    let mut squares = Vec::with_capacity(n * (n - 1) / 2);
    let mut products = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let fi = f[i].clone();
            let fj = f[j].clone();
            squares.push((fi.clone() * fi.clone() - fj.clone() * fj.clone()) / norm.clone());
            products.push(product_scale.clone() * fi * fj);
        }
    }
    squares.extend(products);
    Ok(DiagramVector(squares))
}

/// Gram matrix of the diagram vectors, `G̃(i, j) = <f̃_i, f̃_j>`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramGramian<T> {
    matrix: DenseMatrix<T>,
    tol: f64,
}

impl<T: Field> DiagramGramian<T> {
    /// Inner products of explicit diagram vectors, one per unordered pair.
    pub fn from_vectors(n: usize, vectors: &[Vec<T>]) -> Result<Self> {
        let diagrams = vectors
            .iter()
            .map(|f| diagram_vector(f, n))
            .collect::<Result<Vec<_>>>()?;
        let k = diagrams.len();
        let mut m = DenseMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let v = diagrams[i].dot(&diagrams[j]);
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        Ok(Self {
            matrix: m,
            tol: crate::numerics::DEFAULT_TOL,
        })
    }

    /// Closed form `(n K(i,j)² - 1)/(n - 1)` from a unit-diagonal Gram matrix.
    pub fn from_gram(n: usize, gram: &DenseMatrix<T>) -> Self {
        let nn = T::from_usize(n);
        let denom = T::from_usize(n - 1);
        let k = gram.rows();
        let mut m = DenseMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let g = gram.get(i, j).clone();
                let v = (nn.clone() * g.clone() * g - T::one()) / denom.clone();
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        Self {
            matrix: m,
            tol: crate::numerics::DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix, self.tol)
    }

    /// `Σ_{i,j ∈ idx} w_i w_j G̃(i,j)`, the squared norm of the weighted
    /// diagram-vector sum. Unit weights when `weights` is `None`.
    pub fn quadratic_form(&self, idx: &[usize], weights: Option<&[T]>) -> T {
        let w = |i: usize| weights.map_or_else(T::one, |w| w[i].clone());
        let mut acc = T::zero();
        for &i in idx {
            let mut row = T::zero();
            for &j in idx {
                row = row + w(j) * self.matrix.get(i, j).clone();
            }
            acc = acc + w(i) * row;
        }
        acc
    }
}
