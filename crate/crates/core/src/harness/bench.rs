//! Benchmark runner: every (instance, algorithm) cell, one CSV row each.
//!
//! Config:
//!
//! ```json
//! {"instances": [{"file": "inst.json"},
//!                {"family": "tight", "a": 1, "count": 100},
//!                {"family": "random", "m": 2, "n": 4, "seed": 0, "count": 50}],
//!  "algorithms": ["jackson", "list:2,0,1", "exact",
//!                 "ptas:eps=1/2,mode=oracle-guided"],
//!  "out": "report.csv"}
//! ```
//!
//! A generated source with `count > 1` expands to consecutive instances,
//! stepping `a` for the tight family and `seed` otherwise. Relative file
//! paths are resolved against the config's directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use super::codec::{read_instance, CodecError};
use super::generate::{generate, Family, GenError, GeneratorSpec};
use crate::exact::{exact_solve, ExactLimits};
use crate::listsched::{jackson_priority, list_schedule, PriorityList};
use crate::model::{bounds, lateness_unchecked, validate_schedule, Instance, Schedule};
use crate::ptas::{ptas_solve, Mode, PtasError, PtasParams};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

pub const CSV_HEADER: [&str; 12] =
    ["instance", "algo", "m", "n", "lmax", "P", "Q", "lmax_star", "ratio", "ratio_float", "wall_ms", "status"];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("malformed config: {0}")]
    Config(String),
    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),
    #[error("algorithm '{text}': {reason}")]
    BadAlgorithm { text: String, reason: String },
    #[error("instance {source_index}: {reason}")]
    BadSource { source_index: usize, reason: String },
    #[error("reading {path}: {reason}")]
    Read { path: PathBuf, reason: String },
    #[error("instance {path}: {error}")]
    Instance { path: PathBuf, error: CodecError },
    #[error("generator: {0}")]
    Generator(#[from] GenError),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing {path}: {reason}")]
    Write { path: PathBuf, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algorithm {
    Jackson,
    List(Vec<usize>),
    Ptas(PtasParams),
    Exact(ExactLimits),
}

/// Algorithm plus the text it was parsed from, which labels CSV rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmSpec {
    pub label: String,
    pub algorithm: Algorithm,
}

fn bad(text: &str, reason: impl Into<String>) -> BenchError {
    BenchError::BadAlgorithm { text: text.to_string(), reason: reason.into() }
}

fn key_values<'a>(text: &str, args: &'a str) -> Result<Vec<(&'a str, &'a str)>, BenchError> {
    args.split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad(text, format!("expected key=value, got '{kv}'")))
        })
        .collect()
}

/// Parses `jackson`, `list:<perm>`, `exact[:max_combinations=N]` or
/// `ptas[:eps=a/b,mode=enumerate|oracle-guided,delta=a/b,budget=N,max_combinations=N]`.
/// PTAS defaults: `eps=1`, `mode=enumerate`.
pub fn parse_algorithm(text: &str) -> Result<AlgorithmSpec, BenchError> {
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let algorithm = match name.trim() {
        "jackson" => {
            if !args.is_empty() {
                return Err(bad(text, "jackson takes no arguments"));
            }
            Algorithm::Jackson
        }
        "list" => {
            let order = args
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad(text, format!("bad job index '{s}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            Algorithm::List(order)
        }
        "exact" => {
            let mut limits = ExactLimits::default();
            for (k, v) in key_values(text, args)? {
                match k {
                    "max_combinations" => {
                        limits.max_combinations = v.parse().map_err(|_| bad(text, format!("bad count '{v}'")))?
                    }
                    _ => return Err(bad(text, format!("unknown key '{k}'"))),
                }
            }
            Algorithm::Exact(limits)
        }
        "ptas" => {
            let mut eps = Rational::from_integer(1.into());
            let mut mode = Mode::Enumerate;
            let mut delta = None;
            let mut budget = None;
            let mut limits = ExactLimits::default();
            for (k, v) in key_values(text, args)? {
                match k {
                    "eps" | "epsilon" => eps = parse_rational(v).map_err(|e| bad(text, e.to_string()))?,
                    "mode" => mode = Mode::parse(v).ok_or_else(|| bad(text, format!("unknown mode '{v}'")))?,
                    "delta" => delta = Some(parse_rational(v).map_err(|e| bad(text, e.to_string()))?),
                    "budget" => budget = Some(v.parse::<u64>().map_err(|_| bad(text, format!("bad budget '{v}'")))?),
                    "max_combinations" => {
                        limits.max_combinations = v.parse().map_err(|_| bad(text, format!("bad count '{v}'")))?
                    }
                    _ => return Err(bad(text, format!("unknown key '{k}'"))),
                }
            }
            let to_bad = |e: PtasError| bad(text, e.to_string());
            let mut params = PtasParams::new(eps, mode).map_err(to_bad)?.with_exact_limits(limits);
            if let Some(d) = delta {
                params = params.with_delta(d).map_err(to_bad)?;
            }
            if let Some(b) = budget {
                params = params.with_budget(b).map_err(to_bad)?;
            }
            Algorithm::Ptas(params)
        }
        _ => return Err(BenchError::UnknownAlgorithm(text.to_string())),
    };
    Ok(AlgorithmSpec { label: text.to_string(), algorithm })
}

/// What one algorithm produced on one instance.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub schedule: Schedule,
    pub lmax: Rational,
    /// `Some` only for an exact run that proved optimality.
    pub certified: Option<Rational>,
    pub status: &'static str,
}

pub fn run_algorithm(instance: &Instance, algorithm: &Algorithm) -> Result<SolveOutput, String> {
    let listed = |schedule: Schedule| {
        let lmax = lateness_unchecked(instance, &schedule).lmax;
        SolveOutput { schedule, lmax, certified: None, status: "ok" }
    };
    match algorithm {
        Algorithm::Jackson => Ok(listed(list_schedule(instance, &jackson_priority(instance)))),
        Algorithm::List(order) => {
            let prio = PriorityList::new(order.clone(), instance.jobs()).map_err(|e| e.to_string())?;
            Ok(listed(list_schedule(instance, &prio)))
        }
        Algorithm::Exact(limits) => {
            let res = exact_solve(instance, *limits);
            let certified = res.is_optimal().then(|| res.lmax_star.clone());
            Ok(SolveOutput { schedule: res.schedule, lmax: res.lmax_star, certified, status: res.status.as_str() })
        }
        Algorithm::Ptas(params) => {
            let out = ptas_solve(instance, params).map_err(|e| match e {
                PtasError::BudgetExhausted { .. } => format!("budget-exhausted: {e}"),
                PtasError::ExactLimitExceeded { .. } => format!("limit-exceeded: {e}"),
                other => other.to_string(),
            })?;
            Ok(SolveOutput { schedule: out.schedule, lmax: out.lmax, certified: None, status: "ok" })
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct BenchConfig {
    #[serde(default)]
    pub instances: Vec<Value>,
    #[serde(default)]
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// When false the `wall_ms` column is left empty so the CSV is
    /// byte-identical across runs.
    #[serde(default = "yes")]
    pub record_time: bool,
}

fn yes() -> bool {
    true
}

impl BenchConfig {
    pub fn from_json(bytes: &[u8]) -> Result<Self, BenchError> {
        serde_json::from_slice(bytes).map_err(|e| BenchError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub id: String,
    pub instance: Instance,
}

/// Expands the config's instance sources in order.
pub fn load_instances(sources: &[Value], base_dir: &Path) -> Result<Vec<NamedInstance>, BenchError> {
    let mut out = Vec::new();
    for (idx, src) in sources.iter().enumerate() {
        let bad_src = |reason: String| BenchError::BadSource { source_index: idx, reason };
        let obj = src.as_object().ok_or_else(|| bad_src("expected an object".into()))?;
        let id = match obj.get("id") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(bad_src("id must be a string".into())),
        };
        if let Some(file) = obj.get("file") {
            let rel = file.as_str().ok_or_else(|| bad_src("file must be a string".into()))?;
            let path = base_dir.join(rel);
            let bytes =
                std::fs::read(&path).map_err(|e| BenchError::Read { path: path.clone(), reason: e.to_string() })?;
            let instance = read_instance(&bytes).map_err(|error| BenchError::Instance { path: path.clone(), error })?;
            let id = id.unwrap_or_else(|| {
                Path::new(rel).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| rel.to_string())
            });
            out.push(NamedInstance { id, instance });
            continue;
        }
        let mut fields = obj.clone();
        fields.remove("id");
        let count = match fields.remove("count") {
            None => 1,
            Some(v) => v.as_u64().ok_or_else(|| bad_src("count must be a non-negative integer".into()))?,
        };
        let base: GeneratorSpec = serde_json::from_value(Value::Object(fields)).map_err(|e| bad_src(e.to_string()))?;
        for step in 0..count {
            let mut spec = base.clone();
            match spec.family {
                Family::Tight => spec.a += step,
                _ => spec.seed += step,
            }
            let instance = generate(&spec)?;
            let name = match (&id, count) {
                (Some(id), 1) => id.clone(),
                (Some(id), _) => format!("{id}-{step}"),
                (None, _) => default_id(&spec),
            };
            out.push(NamedInstance { id: name, instance });
        }
    }
    Ok(out)
}

fn default_id(spec: &GeneratorSpec) -> String {
    match spec.family {
        Family::Tight => format!("tight-a{}", spec.a),
        Family::Random => format!("random-m{}-n{}-s{}", spec.m, spec.n, spec.seed),
        Family::Mixed => format!("mixed-m{}-b{}-t{}-s{}", spec.m, spec.big_ops, spec.tiny_count, spec.seed),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub instance: String,
    pub algorithm: String,
    pub m: usize,
    pub n: usize,
    pub lmax: Option<Rational>,
    pub p: Rational,
    pub q: Rational,
    pub lmax_star: Option<Rational>,
    pub ratio: Option<Rational>,
    pub wall_ms: Option<f64>,
    pub status: String,
    /// False when the produced schedule failed validation.
    pub valid: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub rows: Vec<RunRow>,
}

impl RunReport {
    pub fn has_invalid(&self) -> bool {
        self.rows.iter().any(|r| !r.valid)
    }

    pub fn to_csv(&self) -> Result<String, BenchError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        let opt = |v: &Option<Rational>| v.as_ref().map(format_rational).unwrap_or_default();
        for r in &self.rows {
            let ratio_float = r.ratio.as_ref().map(|x| format!("{:.6}", to_f64(x))).unwrap_or_default();
            let wall = r.wall_ms.map(|ms| format!("{ms:.3}")).unwrap_or_default();
            w.write_record([
                r.instance.clone(),
                r.algorithm.clone(),
                r.m.to_string(),
                r.n.to_string(),
                opt(&r.lmax),
                format_rational(&r.p),
                format_rational(&r.q),
                opt(&r.lmax_star),
                opt(&r.ratio),
                ratio_float,
                wall,
                r.status.clone(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| BenchError::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), BenchError> {
        std::fs::write(path, self.to_csv()?)
            .map_err(|e| BenchError::Write { path: path.to_path_buf(), reason: e.to_string() })
    }
}

/// Runs every cell; cells execute in parallel and rows come back in
/// instance-major, algorithm-minor order. Per-cell failures are recorded in
/// `status`; only config problems abort the run.
pub fn run_bench(config: &BenchConfig, base_dir: &Path) -> Result<RunReport, BenchError> {
    let algorithms = config.algorithms.iter().map(|a| parse_algorithm(a)).collect::<Result<Vec<_>, _>>()?;
    let instances = load_instances(&config.instances, base_dir)?;
    let cells: Vec<(usize, usize)> =
        (0..instances.len()).flat_map(|i| (0..algorithms.len()).map(move |a| (i, a))).collect();

    let mut rows: Vec<RunRow> =
        cells.par_iter().map(|&(i, a)| run_cell(&instances[i], &algorithms[a], config.record_time)).collect();

    // certified optimum per instance, from any exact cell
    let stars: Vec<Option<Rational>> =
        rows.chunks(algorithms.len().max(1)).map(|chunk| chunk.iter().find_map(|r| r.lmax_star.clone())).collect();
    for (k, row) in rows.iter_mut().enumerate() {
        let star = stars[k / algorithms.len()].clone();
        row.ratio = match (&row.lmax, &star) {
            (Some(l), Some(s)) if *s > Rational::from_integer(0.into()) => Some(l / s),
            _ => None,
        };
        row.lmax_star = star;
    }
    Ok(RunReport { rows })
}

fn run_cell(named: &NamedInstance, algo: &AlgorithmSpec, record_time: bool) -> RunRow {
    let inst = &named.instance;
    let b = bounds(inst);
    let started = Instant::now();
    let result = run_algorithm(inst, &algo.algorithm);
    let elapsed = started.elapsed().as_secs_f64() * 1000.0;
    let mut row = RunRow {
        instance: named.id.clone(),
        algorithm: algo.label.clone(),
        m: inst.machines(),
        n: inst.jobs(),
        lmax: None,
        p: b.p,
        q: b.q,
        lmax_star: None,
        ratio: None,
        wall_ms: record_time.then_some(elapsed),
        status: String::new(),
        valid: true,
    };
    match result {
        Err(msg) => row.status = format!("error: {msg}"),
        Ok(out) => {
            let violations = validate_schedule(inst, &out.schedule);
            if let Some(v) = violations.first() {
                row.valid = false;
                let mut s = format!("invalid: {v}");
                if violations.len() > 1 {
                    let _ = write!(s, " (+{} more)", violations.len() - 1);
                }
                row.status = s;
            } else {
                row.status = out.status.to_string();
            }
            row.lmax = Some(out.lmax);
            row.lmax_star = out.certified;
        }
    }
    row
}
