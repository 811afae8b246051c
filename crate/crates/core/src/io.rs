//! JSON file formats and report serialization.
//!
//! Frame file:
//!
//! ```json
//! {"dimension": 2, "mode": "float", "vectors": [[1, 0], [0, 1]]}
//! {"dimension": 2, "mode": "rational", "gram": [["1", "1/2"], ["1/2", "1"]]}
//! ```
//!
//! Scaling file: `{"weights": [0.5, "2/3", 1]}`. Any extra keys are ignored,
//! so each exported minimal scaling is itself a valid scaling file.

use std::io;

use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::numerics::{decimal_to_rational, parse_rational, DenseMatrix, Field, Rational, ScalarKind};
use crate::scaling::{MinimalScalingSet, ScalingVector};

/// A number or a rational string such as `"3/4"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Number(serde_json::Number),
    Text(String),
}

impl ScalarText {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Self::Number(n) => parse_rational(&n.to_string()),
            Self::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub dimension: usize,
    pub mode: ScalarKind,
    #[serde(default)]
    pub vectors: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub gram: Option<Vec<Vec<ScalarText>>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ScalingFile {
    pub weights: Vec<ScalarText>,
}

/// A validated frame in whichever scalar mode it was loaded.
#[derive(Clone, Debug)]
pub enum LoadedFrame {
    Float(Frame<f64>),
    Rational(Frame<Rational>),
}

impl LoadedFrame {
    pub fn kind(&self) -> ScalarKind {
        match self {
            Self::Float(_) => ScalarKind::Float,
            Self::Rational(_) => ScalarKind::ExactRational,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Float(f) => f.n(),
            Self::Rational(f) => f.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Self::Float(f) => f.k(),
            Self::Rational(f) => f.k(),
        }
    }
}

pub fn parse_frame_file(text: &str) -> Result<FrameFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Validates a frame file, optionally converting to another scalar mode.
///
/// Float vectors requested in rational mode are read as exact decimals and
/// must then have exactly unit norm. Rational Gram input requested in float
/// mode is realized by an eigendecomposition.
pub fn load_frame(file: FrameFile, mode: Option<ScalarKind>, tol: f64) -> Result<LoadedFrame> {
    let n = file.dimension;
    let target = mode.unwrap_or(file.mode);
    let frame = match (file.mode, file.vectors, file.gram) {
        (ScalarKind::Float, Some(vectors), None) => match target {
            ScalarKind::Float => LoadedFrame::Float(Frame::from_vectors(n, vectors, tol)?),
            ScalarKind::ExactRational => {
                let exact = vectors
                    .iter()
                    .map(|v| v.iter().map(|&x| decimal_to_rational(x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                LoadedFrame::Rational(Frame::from_exact_vectors(n, exact)?)
            }
        },
        (ScalarKind::ExactRational, None, Some(gram)) => {
            let rows = gram
                .iter()
                .map(|r| r.iter().map(ScalarText::to_rational).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let exact = Frame::from_gram(n, DenseMatrix::from_rows(rows)?)?;
            match target {
                ScalarKind::ExactRational => LoadedFrame::Rational(exact),
                ScalarKind::Float => LoadedFrame::Float(exact.to_float(tol)?),
            }
        }
        (ScalarKind::Float, _, _) => {
            return Err(Error::Parse("float mode needs \"vectors\" and no \"gram\"".into()))
        }
        (ScalarKind::ExactRational, _, _) => {
            return Err(Error::Parse("rational mode needs \"gram\" and no \"vectors\"".into()))
        }
    };
    Ok(match (frame, file.labels) {
        (f, None) => f,
        (LoadedFrame::Float(f), Some(l)) => LoadedFrame::Float(f.with_labels(l)?),
        (LoadedFrame::Rational(f), Some(l)) => LoadedFrame::Rational(f.with_labels(l)?),
    })
}

pub fn parse_scaling<T: Field>(text: &str, tol: f64) -> Result<ScalingVector<T>> {
    let file: ScalingFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let weights = file
        .weights
        .iter()
        .map(|w| w.to_rational().map(|r| T::from_rational(&r)))
        .collect::<Result<Vec<_>>>()?;
    ScalingVector::new(weights, tol)
}

/// Floats as JSON numbers, rationals as `"p/q"` strings.
pub fn scalar_json<T: Field>(x: &T) -> Value {
    if T::is_exact() {
        Value::String(x.to_string())
    } else {
        serde_json::Number::from_f64(x.to_f64()).map_or(Value::Null, Value::Number)
    }
}

pub fn scalars_json<T: Field>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(scalar_json).collect())
}

pub fn scaling_json<T: Field>(c: &ScalingVector<T>) -> Value {
    json!({ "support": c.support(), "weights": scalars_json(c.weights()) })
}

pub fn minimal_scalings_json<T: Field>(set: &MinimalScalingSet<T>) -> Value {
    Value::Array(set.vertices().iter().map(scaling_json).collect())
}

/// Pretty JSON with floats at 17 significant digits. Object keys come out
/// sorted because `serde_json::Map` is ordered.
pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits::default());
    serde::Serialize::serialize(value, &mut ser).expect("serializing a Value cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON output is UTF-8")
}

#[derive(Default)]
struct SigDigits(PrettyFormatter<'static>);

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
