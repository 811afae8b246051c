//! `framescale`: scalability analysis of unit-norm frames from JSON files.
//!
//! Reports go to standard output (or `--out`) as pretty JSON with sorted
//! keys. Failures print one JSON line on standard error and exit with 2
//! (invalid input) or 3 (a size cap was exceeded).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use framescale::io::{
    load_frame, minimal_scalings_json, parse_frame_file, parse_scaling, scalar_json, scalars_json, scaling_json,
    to_json_string, LoadedFrame,
};
use framescale::numerics::{ScalarKind, DEFAULT_TOL};
use framescale::scaling::{check_mbound, enumerate_minimal_scalings, is_scalable, verify_john_decomposition};
use framescale::structure::{
    affine_dependence_report, ec_pairwise_disjoint, empty_cover, factor_poset, is_prime_scaling,
    orthogonal_decompose_scaling, WitnessSearch, POSET_CAP, WITNESS_CAP,
};
use framescale::{Error, Field, Frame, MinimalScalingSet, ScalingVector};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "framescale", version, about = "Scalability analysis for finite unit-norm frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether some nonnegative rescaling is a Parseval frame.
    Scalable(Opts),
    /// List every minimal scaling with the vertex-count bound.
    MinimalScalings(Opts),
    /// Tight subsets of the (optionally scaled) frame.
    FactorPoset(Opts),
    /// Minimal nonempty members of the factor poset.
    EmptyCover(Opts),
    /// Orthogonal decomposition of the scaling given by --scaling.
    Decompose(Opts),
    /// Whether the scaled frame has no proper tight subframe.
    Prime(Opts),
    /// Affine dependence of the minimal scalings and its witnesses.
    AffineReport(Opts),
    /// Check Σ c_i f_i f_iᵀ = I for the weights given by --scaling.
    JohnCheck(Opts),
    /// Factor poset as a Graphviz digraph.
    PosetDot(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmd {
    Scalable,
    MinimalScalings,
    FactorPoset,
    EmptyCover,
    Decompose,
    Prime,
    AffineReport,
    JohnCheck,
    PosetDot,
}

impl Cmd {
    fn name(self) -> &'static str {
        match self {
            Cmd::Scalable => "scalable",
            Cmd::MinimalScalings => "minimal-scalings",
            Cmd::FactorPoset => "factor-poset",
            Cmd::EmptyCover => "empty-cover",
            Cmd::Decompose => "decompose",
            Cmd::Prime => "prime",
            Cmd::AffineReport => "affine-report",
            Cmd::JohnCheck => "john-check",
            Cmd::PosetDot => "poset-dot",
        }
    }

    fn needs_scaling(self) -> bool {
        matches!(self, Cmd::Decompose | Cmd::Prime | Cmd::JohnCheck)
    }
}

impl Command {
    fn split(self) -> (Cmd, Opts) {
        match self {
            Command::Scalable(o) => (Cmd::Scalable, o),
            Command::MinimalScalings(o) => (Cmd::MinimalScalings, o),
            Command::FactorPoset(o) => (Cmd::FactorPoset, o),
            Command::EmptyCover(o) => (Cmd::EmptyCover, o),
            Command::Decompose(o) => (Cmd::Decompose, o),
            Command::Prime(o) => (Cmd::Prime, o),
            Command::AffineReport(o) => (Cmd::AffineReport, o),
            Command::JohnCheck(o) => (Cmd::JohnCheck, o),
            Command::PosetDot(o) => (Cmd::PosetDot, o),
        }
    }
}

#[derive(Args, Debug)]
struct Opts {
    /// Frame file (JSON).
    frame: PathBuf,
    /// Scaling file with a "weights" array.
    #[arg(long)]
    scaling: Option<PathBuf>,
    /// Scalar mode, overriding the frame file.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Float-mode decision tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output format; csv only for minimal-scalings, dot only for
    /// factor-poset and poset-dot.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Largest accepted number of frame vectors.
    #[arg(long, default_value_t = POSET_CAP)]
    max_k: usize,
    /// Largest number of minimal scalings analyzed by affine-report.
    #[arg(long, default_value_t = WITNESS_CAP)]
    max_vertices: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "usage",
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            code: 2,
            kind: "io",
            message: format!("{}: {e}", path.display()),
        }
    }

    fn cap(what: &str, size: usize, cap: usize) -> Self {
        Self {
            code: 3,
            kind: "cap_exceeded",
            message: format!("{what} of size {size} exceeds the cap of {cap}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::TooLarge { .. } => (3, "cap_exceeded"),
            Error::Parse(_) => (2, "parse"),
            _ => (2, "validation"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// Command result before rendering.
struct Analysis {
    result: Value,
    /// CSV or DOT body when that format was requested.
    text: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            return fail(&Failure::usage(first.trim_start_matches("error: ")));
        }
    };
    let (cmd, opts) = cli.command.split();
    let out = opts.out.clone();
    match run(cmd, &opts) {
        Ok(output) => {
            let written = match &out {
                Some(path) => fs::write(path, &output).map_err(|e| Failure::io(path, e)),
                None => {
                    print!("{output}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(f) => fail(&f),
            }
        }
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", json!({"error": f.kind, "message": f.message}));
    ExitCode::from(f.code)
}

fn resolve_format(cmd: Cmd, requested: Option<Format>) -> Result<Format, Failure> {
    let format = requested.unwrap_or(if cmd == Cmd::PosetDot { Format::Dot } else { Format::Json });
    match (format, cmd) {
        (Format::Json, _) | (Format::Csv, Cmd::MinimalScalings) | (Format::Dot, Cmd::FactorPoset | Cmd::PosetDot) => {
            Ok(format)
        }
        (Format::Csv, _) => Err(Failure::usage(format!("csv output is not available for {}", cmd.name()))),
        (Format::Dot, _) => Err(Failure::usage(format!("dot output is not available for {}", cmd.name()))),
    }
}

fn run(cmd: Cmd, opts: &Opts) -> Result<String, Failure> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Failure::usage(format!("--tol must be positive, got {}", opts.tol)));
    }
    if opts.max_k == 0 || opts.max_vertices == 0 {
        return Err(Failure::usage("caps must be at least 1"));
    }
    let format = resolve_format(cmd, opts.format)?;
    if cmd.needs_scaling() && opts.scaling.is_none() {
        return Err(Failure::usage(format!("{} requires --scaling", cmd.name())));
    }
    let text = fs::read_to_string(&opts.frame).map_err(|e| Failure::io(&opts.frame, e))?;
    let file = parse_frame_file(&text)?;
    let k = file
        .vectors
        .as_ref()
        .map(Vec::len)
        .or(file.gram.as_ref().map(Vec::len))
        .unwrap_or(0);
    if k > opts.max_k {
        return Err(Failure::cap("frame vectors", k, opts.max_k));
    }
    let mode = opts.mode.map(|m| match m {
        Mode::Float => ScalarKind::Float,
        Mode::Rational => ScalarKind::ExactRational,
    });
    let frame = load_frame(file, mode, opts.tol)?;
    let scaling = match &opts.scaling {
        Some(path) => Some(fs::read_to_string(path).map_err(|e| Failure::io(path, e))?),
        None => None,
    };

    let start = Instant::now();
    let (analysis, warnings) = match &frame {
        LoadedFrame::Float(f) => analyze_float(f, cmd, scaling.as_deref(), opts, format)?,
        LoadedFrame::Rational(f) => (analyze(f, cmd, scaling.as_deref(), opts, format)?, Vec::new()),
    };
    let elapsed = start.elapsed().as_secs_f64();

    if let Some(text) = analysis.text {
        for w in &warnings {
            eprintln!("{}", json!({ "warning": w }));
        }
        return Ok(text);
    }
    let mut summary = json!({
        "n": frame.n(),
        "k": frame.k(),
        "mode": frame.kind(),
    });
    if frame.kind() == ScalarKind::Float {
        summary["tol"] = json!(opts.tol);
    }
    let mut report = json!({
        "command": cmd.name(),
        "frame": summary,
        "result": analysis.result,
        "warnings": warnings,
    });
    if opts.timing {
        report["timing"] = json!({ "seconds": elapsed });
    }
    Ok(to_json_string(&report))
}

/// Runs the command, then reruns it at 1/100 and 100 times the tolerance
/// and warns when the decision changes.
fn analyze_float(
    frame: &Frame<f64>,
    cmd: Cmd,
    scaling: Option<&str>,
    opts: &Opts,
    format: Format,
) -> Result<(Analysis, Vec<String>), Failure> {
    let base = analyze(frame, cmd, scaling, opts, format)?;
    let mut warnings = Vec::new();
    for factor in [1e-2, 1e2] {
        let tol = frame.tol() * factor;
        let shifted = frame.clone().with_tol(tol)?;
        match analyze(&shifted, cmd, scaling, opts, Format::Json) {
            Ok(other) if decision(cmd, &other.result) == decision(cmd, &base.result) => {}
            Ok(_) => warnings.push(format!("{} result changes at tolerance {tol:.1e}", cmd.name())),
            Err(f) => warnings.push(format!("{} fails at tolerance {tol:.1e}: {}", cmd.name(), f.message)),
        }
    }
    Ok((base, warnings))
}

/// The part of a result that a tolerance change could flip.
fn decision(cmd: Cmd, result: &Value) -> Value {
    let supports = |v: &Value| -> Value {
        v.as_array()
            .map(|a| a.iter().map(|x| x["support"].clone()).collect())
            .unwrap_or(Value::Null)
    };
    match cmd {
        Cmd::Scalable => result["scalable"].clone(),
        Cmd::MinimalScalings => supports(&result["minimal_scalings"]),
        Cmd::FactorPoset | Cmd::PosetDot => result["poset"].clone(),
        Cmd::EmptyCover => result["ec"].clone(),
        Cmd::Decompose => supports(&result["blocks"]),
        Cmd::Prime => result["prime"].clone(),
        Cmd::AffineReport => json!([result["dependent"], supports(&result["minimal_scalings"])]),
        Cmd::JohnCheck => result["john"].clone(),
    }
}

fn analyze<T: Field>(
    frame: &Frame<T>,
    cmd: Cmd,
    scaling: Option<&str>,
    opts: &Opts,
    format: Format,
) -> Result<Analysis, Failure> {
    let c: Option<ScalingVector<T>> = scaling.map(|s| parse_scaling(s, frame.tol())).transpose()?;
    if let Some(c) = &c {
        if c.len() != frame.k() {
            return Err(Error::LengthMismatch {
                expected: frame.k(),
                found: c.len(),
            }
            .into());
        }
    }
    let mut text = None;
    let result = match cmd {
        Cmd::Scalable => json!({ "scalable": is_scalable(frame)? }),
        Cmd::MinimalScalings => {
            let m = enumerate_minimal_scalings(frame)?;
            if format == Format::Csv {
                text = Some(minimal_scalings_csv(&m)?);
            }
            let r = check_mbound(&m);
            let bound = u64::try_from(r.bound).map_or_else(|_| json!(r.bound.to_string()), |b| json!(b));
            json!({
                "count": m.len(),
                "gramian_rank": m.gramian_rank(),
                "mbound": {"bound": bound, "size": r.size, "holds": r.holds, "equality": r.equality},
                "minimal_scalings": minimal_scalings_json(&m),
            })
        }
        Cmd::FactorPoset | Cmd::PosetDot => {
            let p = factor_poset(frame, c.as_ref(), POSET_CAP)?;
            if format == Format::Dot {
                text = Some(p.to_dot());
            }
            let covers: Vec<Value> = p
                .hasse_edges()
                .into_iter()
                .map(|(a, b)| json!([p.members()[a], p.members()[b]]))
                .collect();
            json!({ "poset": p.members(), "covers": covers })
        }
        Cmd::EmptyCover => {
            let ec = empty_cover(&factor_poset(frame, c.as_ref(), POSET_CAP)?);
            json!({ "ec": ec.members(), "pairwise_disjoint": ec_pairwise_disjoint(&ec) })
        }
        Cmd::Decompose => {
            let c = c.as_ref().expect("scaling checked");
            let m = enumerate_minimal_scalings(frame)?;
            let d = orthogonal_decompose_scaling(frame, c, &m)?;
            let blocks: Vec<Value> = d
                .blocks
                .iter()
                .map(|b| {
                    let vertices: Vec<Value> = b
                        .vertices
                        .iter()
                        .map(|(i, alpha)| {
                            json!({
                                "vertex": i + 1,
                                "alpha": scalar_json(alpha),
                                "scaling": scaling_json(&m.vertices()[*i]),
                            })
                        })
                        .collect();
                    json!({
                        "support": b.support,
                        "lambda": scalar_json(&b.lambda),
                        "coefficient": scalar_json(&b.coefficient),
                        "vertices": vertices,
                    })
                })
                .collect();
            json!({ "scaling": scaling_json(c), "blocks": blocks })
        }
        Cmd::Prime => {
            let c = c.as_ref().expect("scaling checked");
            let prime = is_prime_scaling(frame, c)?;
            let ec = empty_cover(&factor_poset(frame, Some(c), POSET_CAP)?);
            json!({ "prime": prime, "ec": ec.members() })
        }
        Cmd::AffineReport => {
            let m = enumerate_minimal_scalings(frame)?;
            if m.len() > opts.max_vertices {
                return Err(Failure::cap("minimal scalings", m.len(), opts.max_vertices));
            }
            let r = affine_dependence_report(m.vertices(), frame.tol())?;
            json!({
                "dependent": r.dependent,
                "affine_rank": r.affine_rank,
                "support_containment": r.support_containment.map(|i| i + 1),
                "relint_intersection": witness_json(&r.relint_intersection, |w| json!({
                    "first": w.first, "second": w.second, "point": scalars_json(&w.point),
                })),
                "equal_support_union": witness_json(&r.equal_support_union, |(a, b)| json!({
                    "first": a, "second": b,
                })),
                "conditions_agree": r.conditions_agree(),
                "minimal_scalings": minimal_scalings_json(&m),
            })
        }
        Cmd::JohnCheck => {
            let c = c.as_ref().expect("scaling checked");
            json!({
                "john": verify_john_decomposition(frame, c)?,
                "deviation": scalar_json(&frame.frame_operator_deviation(c.weights())),
                "trace": scalar_json(&c.sum()),
            })
        }
    };
    Ok(Analysis { result, text })
}

fn witness_json<W>(search: &WitnessSearch<W>, found: impl Fn(&W) -> Value) -> Value {
    match search {
        WitnessSearch::Found(w) => {
            let mut v = found(w);
            v["status"] = json!("found");
            v
        }
        WitnessSearch::NotFound => json!({ "status": "not_found" }),
        WitnessSearch::Skipped { size, cap } => json!({ "status": "skipped", "size": size, "cap": cap }),
    }
}

/// One row per minimal scaling: one-based support, then `w1..wk`.
fn minimal_scalings_csv<T: Field>(m: &MinimalScalingSet<T>) -> Result<String, Failure> {
    let to_failure = |e: csv::Error| Failure::usage(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("support".to_string()).chain((1..=m.k()).map(|i| format!("w{i}")));
    w.write_record(header).map_err(to_failure)?;
    for v in m.vertices() {
        let support = v.support().one_based().iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let weights = v.weights().iter().map(|x| {
            if T::is_exact() {
                x.to_string()
            } else {
                format!("{:.16e}", x.to_f64())
            }
        });
        w.write_record(std::iter::once(support).chain(weights)).map_err(to_failure)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::usage(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
