use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::linalg;
use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default tolerance for float-mode decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    #[serde(rename = "rational")]
    ExactRational,
    Float,
}

/// Arithmetic mode together with the tolerance used for float decisions.
///
/// The tolerance is ignored in exact mode, where every comparison is against
/// an exact zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarMode {
    kind: ScalarKind,
    tol: f64,
}

impl ScalarMode {
    pub fn exact() -> Self {
        Self {
            kind: ScalarKind::ExactRational,
            tol: 0.0,
        }
    }

    pub fn float(tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::BadTolerance(tol));
        }
        Ok(Self {
            kind: ScalarKind::Float,
            tol,
        })
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

impl Default for ScalarMode {
    fn default() -> Self {
        Self {
            kind: ScalarKind::Float,
            tol: DEFAULT_TOL,
        }
    }
}

/// Scalars the linear algebra and LP routines are generic over.
///
/// Two implementations exist: `f64`, where zero tests use a tolerance, and
/// [`Rational`], where they are exact.
pub trait Field:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const KIND: ScalarKind;

    fn from_i64(v: i64) -> Self;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Nearest value of this field (exact for rationals).
    fn from_rational(r: &Rational) -> Self;

    /// Square root when it is representable in this field.
    fn sqrt(&self) -> Option<Self>;

    /// Exact zero for rationals; `|x| <= tol * scale` for floats.
    fn is_zero_tol(&self, tol: f64, scale: f64) -> bool;

    /// Exact positivity for rationals; `x > tol * scale` for floats.
    fn is_positive_tol(&self, tol: f64, scale: f64) -> bool;

    /// Matrix rank using the mode's native elimination.
    fn rank_of(m: &DenseMatrix<Self>, tol: f64) -> usize;

    fn is_exact() -> bool {
        Self::KIND == ScalarKind::ExactRational
    }

    fn mode(tol: f64) -> ScalarMode {
        match Self::KIND {
            ScalarKind::ExactRational => ScalarMode::exact(),
            ScalarKind::Float => ScalarMode {
                kind: ScalarKind::Float,
                tol,
            },
        }
    }
}

impl Field for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        Field::to_f64(r)
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn is_zero_tol(&self, tol: f64, scale: f64) -> bool {
        self.abs() <= tol * scale
    }

    fn is_positive_tol(&self, tol: f64, scale: f64) -> bool {
        *self > tol * scale
    }

    fn rank_of(m: &DenseMatrix<Self>, tol: f64) -> usize {
        linalg::float_rank(m, tol)
    }
}

impl Field for Rational {
    const KIND: ScalarKind = ScalarKind::ExactRational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        (&num * &num == *self.numer() && &den * &den == *self.denom())
            .then(|| Rational::new(num, den))
    }

    fn is_zero_tol(&self, _tol: f64, _scale: f64) -> bool {
        self.is_zero()
    }

    fn is_positive_tol(&self, _tol: f64, _scale: f64) -> bool {
        self.is_positive()
    }

    fn rank_of(m: &DenseMatrix<Self>, _tol: f64) -> usize {
        linalg::fraction_free_rank(&clear_denominators(m))
    }
}

/// Scales each row by the lcm of its denominators, giving an integer matrix
/// with the same rank.
pub(crate) fn clear_denominators(m: &DenseMatrix<Rational>) -> DenseMatrix<BigInt> {
    let mut out = DenseMatrix::filled(m.rows(), m.cols(), BigInt::zero());
    for i in 0..m.rows() {
        let lcm = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for j in 0..m.cols() {
            let x = m.get(i, j);
            out.set(i, j, x.numer() * (&lcm / x.denom()));
        }
    }
    out
}

/// Exact rational value of the shortest decimal that round-trips to `x`.
///
/// Decimal literals such as `0.6` come back as `3/5` rather than the binary
/// expansion of the nearest double.
pub fn decimal_to_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::NotRepresentable(x.to_string()));
    }
    parse_rational(&format!("{x}"))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str_radix(p.trim(), 10).map_err(|_| bad())?;
        let q = BigInt::from_str_radix(q.trim(), 10).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut num = BigInt::from_str_radix(&digits, 10).map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u8), frac.len());
        return Ok(Rational::new(num, den));
    }
    BigInt::from_str_radix(s, 10)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}
