//! Shared fixtures: named example frames, a seeded corpus of scalable frames with
//! rational Gram matrices, and an independent minimal-scaling oracle.
#![allow(dead_code)]

use framescale::numerics::DenseMatrix;
use framescale::{Field, Frame, IndexSet, Rational, ScalingVector};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const COS10: f64 = 0.984_807_753_012_208_059_366_743_024_589_523_013_67;
pub const SIN10: f64 = 0.173_648_177_666_930_348_851_716_626_769_314_796_00;
pub const HALF_SQRT3: f64 = 0.866_025_403_784_438_646_763_723_170_752_936_183_47;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn float_frame(n: usize, cols: &[&[f64]]) -> Frame<f64> {
    Frame::from_vectors(n, cols.iter().map(|c| c.to_vec()).collect(), 1e-9).unwrap()
}

/// `[e1, e2, e1, e2, e2, e1]`.
pub fn sixvec_float() -> Frame<f64> {
    let (a, b): (&[f64], &[f64]) = (&[1.0, 0.0], &[0.0, 1.0]);
    float_frame(2, &[a, b, a, b, b, a])
}

pub fn sixvec_exact() -> Frame<Rational> {
    let axis = [0usize, 1, 0, 1, 1, 0];
    let g = DenseMatrix::from_fn(6, 6, |i, j| if axis[i] == axis[j] { q(1, 1) } else { q(0, 1) });
    Frame::from_gram(2, g).unwrap()
}

/// The nine listed minimal scalings of the six-vector frame, in listed order.
pub fn sixvec_listed() -> Vec<Vec<i64>> {
    vec![
        vec![1, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 0, 0],
        vec![0, 0, 0, 0, 1, 1],
        vec![0, 0, 0, 1, 0, 1],
        vec![0, 0, 1, 0, 1, 0],
        vec![0, 1, 0, 0, 0, 1],
        vec![0, 1, 1, 0, 0, 0],
        vec![1, 0, 0, 0, 1, 0],
        vec![1, 0, 0, 1, 0, 0],
    ]
}

/// `{e1, e2, -e1, -e2}`.
pub fn cross_float() -> Frame<f64> {
    float_frame(2, &[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]])
}

/// Unit vectors at 10°, 120°, 240°, 190°, 300°, 60°.
pub fn contact_frame() -> Frame<f64> {
    float_frame(
        2,
        &[
            &[COS10, SIN10],
            &[-0.5, HALF_SQRT3],
            &[-0.5, -HALF_SQRT3],
            &[-COS10, -SIN10],
            &[0.5, -HALF_SQRT3],
            &[0.5, HALF_SQRT3],
        ],
    )
}

/// Closed-form weights on the first three contact points.
pub fn contact_weights() -> [f64; 3] {
    let (c, s) = (COS10, SIN10);
    let r3 = 3f64.sqrt();
    let den = 3.0 * c * c - s * s;
    let c1 = 2.0 / den;
    let c2 = 2.0 * r3 / 3.0 * (r3 * c * c - r3 * s * s + 2.0 * c * s) / den;
    let c3 = 2.0 * r3 / 3.0 * (r3 * c * c - r3 * s * s - 2.0 * c * s) / den;
    [c1, c2, c3]
}

/// A corpus frame built from integer vectors of common squared norm `norm_sq`.
#[derive(Clone, Debug)]
pub struct CorpusFrame {
    pub n: usize,
    pub norm_sq: i64,
    pub ints: Vec<Vec<i64>>,
    pub exact: Frame<Rational>,
    pub float: Frame<f64>,
    /// The frame is exactly an orthonormal basis.
    pub is_onb: bool,
}

fn directions(n: usize, norm_sq: i64) -> Vec<Vec<i64>> {
    let r = (norm_sq as f64).sqrt() as i64;
    let mut out = Vec::new();
    let mut v = vec![-r; n];
    loop {
        if v.iter().map(|x| x * x).sum::<i64>() == norm_sq {
            let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            if first > 0 {
                out.push(v.clone());
            }
        }
        let mut i = 0;
        while i < n && v[i] == r {
            v[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
        v[i] += 1;
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthonormal_bases(dirs: &[Vec<i64>], n: usize) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    let m = dirs.len();
    for a in 0..m {
        for b in a + 1..m {
            if dot(&dirs[a], &dirs[b]) != 0 {
                continue;
            }
            if n == 2 {
                out.push(vec![dirs[a].clone(), dirs[b].clone()]);
                continue;
            }
            for c in b + 1..m {
                if dot(&dirs[a], &dirs[c]) == 0 && dot(&dirs[b], &dirs[c]) == 0 {
                    out.push(vec![dirs[a].clone(), dirs[b].clone(), dirs[c].clone()]);
                }
            }
        }
    }
    out
}

fn is_tight_int(vs: &[Vec<i64>], n: usize) -> bool {
    let s = |r: usize, c: usize| vs.iter().map(|v| v[r] * v[c]).sum::<i64>();
    (0..n).all(|r| (0..n).all(|c| if r == c { s(r, r) == s(0, 0) } else { s(r, c) == 0 }))
}

fn rotation(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    if n == 2 {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        return vec![vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]];
    }
    let mut qv: [f64; 4] = [0.0; 4];
    for x in qv.iter_mut() {
        *x = rng.gen_range(-1.0..1.0);
    }
    let norm = qv.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = qv.map(|v| v / norm);
    vec![
        vec![1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        vec![2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        vec![2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

impl CorpusFrame {
    pub fn from_ints(n: usize, norm_sq: i64, ints: Vec<Vec<i64>>, rng: &mut ChaCha8Rng) -> Self {
        let k = ints.len();
        let gram = DenseMatrix::from_fn(k, k, |i, j| q(dot(&ints[i], &ints[j]), norm_sq));
        let exact = Frame::from_gram(n, gram).unwrap();
        let rot = rotation(n, rng);
        let scale = (norm_sq as f64).sqrt();
        let vectors = ints
            .iter()
            .map(|u| {
                (0..n)
                    .map(|r| (0..n).map(|c| rot[r][c] * u[c] as f64).sum::<f64>() / scale)
                    .collect()
            })
            .collect();
        let float = Frame::from_vectors(n, vectors, 1e-9).unwrap();
        let is_onb = k == n && (0..k).all(|i| (0..i).all(|j| dot(&ints[i], &ints[j]) == 0));
        Self {
            n,
            norm_sq,
            ints,
            exact,
            float,
            is_onb,
        }
    }

    pub fn k(&self) -> usize {
        self.ints.len()
    }

    /// This frame with a copy of vector `i` appended.
    pub fn with_duplicate(&self, i: usize) -> (Frame<Rational>, Frame<f64>) {
        (self.exact.with_duplicate(i).unwrap(), self.float.with_duplicate(i).unwrap())
    }
}

/// `count` scalable frames, `n ∈ {2, 3}`, `k <= 9`, each a union of a tight
/// core (a rotated orthonormal basis or a symmetric tight set) with extra
/// vectors of the same squared norm. Every tenth frame is a bare basis.
pub fn corpus(count: usize, seed: u64) -> Vec<CorpusFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norms2 = [2i64, 5, 10, 25, 169, 625, 4225];
    let norms3 = [2i64, 3, 9, 49, 81, 121];
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let n = if idx % 2 == 0 { 2 } else { 3 };
        let mut norm_sq = *if n == 2 { &norms2[..] } else { &norms3[..] }.choose(&mut rng).unwrap();
        let mut dirs = directions(n, norm_sq);
        let mut bases = orthonormal_bases(&dirs, n);
        let bare_basis = idx % 10 == 9;
        if bare_basis && bases.is_empty() {
            norm_sq = 1;
            dirs = directions(n, 1);
            bases = orthonormal_bases(&dirs, n);
        }
        let symmetric = (dirs.len() <= 6 && is_tight_int(&dirs, n)).then(|| dirs.clone());
        let mut ints: Vec<Vec<i64>> = match (&symmetric, bases.is_empty()) {
            _ if bare_basis => bases.choose(&mut rng).unwrap().clone(),
            (Some(s), true) => s.clone(),
            (Some(s), false) if rng.gen_bool(0.3) => s.clone(),
            (_, false) => bases.choose(&mut rng).unwrap().clone(),
            (None, true) => unreachable!("every listed norm has a tight core"),
        };
        if !bare_basis {
            if !bases.is_empty() && ints.len() + n <= 9 && rng.gen_bool(0.4) {
                ints.extend(bases.choose(&mut rng).unwrap().iter().cloned());
            }
            let target = rng.gen_range(ints.len().max(n)..=9);
            while ints.len() < target {
                ints.push(dirs.choose(&mut rng).unwrap().clone());
            }
        }
        for v in ints.iter_mut() {
            if rng.gen_bool(0.3) {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        ints.shuffle(&mut rng);
        out.push(CorpusFrame::from_ints(n, norm_sq, ints, &mut rng));
    }
    out
}

/// Minimal scalings computed without the diagram Gramian.
///
/// On each support `S`, the Parseval condition forces `Σ_j c_j K(i,j)² = 1`
/// for `i ∈ S`. A vertex is a support where `(K∘K)_S` is nonsingular, the
/// unique solution is positive, and `K C K = K` holds.
pub fn oracle_minimal_scalings(frame: &Frame<Rational>) -> Vec<(IndexSet, Vec<Rational>)> {
    let k = frame.k();
    let g = frame.gram();
    let mut out = Vec::new();
    for mask in 1u64..1 << k {
        let s: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let m = s.len();
        let mut aug: Vec<Vec<Rational>> = s
            .iter()
            .map(|&i| {
                let mut row: Vec<Rational> = s.iter().map(|&j| g.get(i, j) * g.get(i, j)).collect();
                row.push(Rational::one());
                row
            })
            .collect();
        let Some(c) = gauss_unique(&mut aug, m) else { continue };
        if !c.iter().all(|x| *x > Rational::zero()) {
            continue;
        }
        let mut weights = vec![Rational::zero(); k];
        for (&i, x) in s.iter().zip(&c) {
            weights[i] = x.clone();
        }
        if kck_equals_k(g, &weights) {
            out.push((IndexSet::new(s), weights));
        }
    }
    out.sort();
    out
}

fn gauss_unique(aug: &mut [Vec<Rational>], m: usize) -> Option<Vec<Rational>> {
    for col in 0..m {
        let p = (col..m).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, p);
        let pivot = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &pivot;
        }
        let prow = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(aug.iter().map(|row| row[m].clone()).collect())
}

fn kck_equals_k(g: &DenseMatrix<Rational>, c: &[Rational]) -> bool {
    let k = g.rows();
    (0..k).all(|i| {
        (0..k).all(|j| {
            let s = (0..k).fold(Rational::zero(), |acc, l| acc + g.get(i, l) * &c[l] * g.get(l, j));
            s == *g.get(i, j)
        })
    })
}

/// Support and weights of each member, for set comparisons.
pub fn as_pairs<T: Field>(vs: &[ScalingVector<T>]) -> Vec<(IndexSet, Vec<T>)> {
    vs.iter().map(|v| (v.support().clone(), v.weights().to_vec())).collect()
}

/// Random point of the scalability polytope with strictly positive
/// barycentric weights on a random nonempty subset of vertices.
pub fn random_scaling(vertices: &[ScalingVector<Rational>], rng: &mut ChaCha8Rng, strict: bool) -> ScalingVector<Rational> {
    let m = vertices.len();
    let chosen: Vec<usize> = if strict {
        (0..m).collect()
    } else {
        let mut c: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
        if c.is_empty() {
            c.push(rng.gen_range(0..m));
        }
        c
    };
    let raw: Vec<i64> = chosen.iter().map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    let k = vertices[0].len();
    let mut w = vec![Rational::zero(); k];
    for (&j, &a) in chosen.iter().zip(&raw) {
        for (x, v) in w.iter_mut().zip(vertices[j].weights()) {
            *x = &*x + q(a, total) * v;
        }
    }
    ScalingVector::new(w, 0.0).unwrap()
}
