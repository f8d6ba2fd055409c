//! JSON file formats: the trace cache, cover files, and solver outputs.
//!
//! Rationals are strings `"p"` or `"p/q"` in lowest terms; vertex sets and
//! traces are lowercase hex bitmasks.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constructions::MultiCover;
use crate::error::{Error, Result};
use crate::geometry::{maximal_traces, trace_of, HyperplaneForm, Trace, WitnessedTrace};
use crate::ilp::{GResult, IlpResult};
use crate::lp::CoverLpSolution;
use crate::scalar::{format, Exact};
use crate::{Rational, Vertex};

/// Bumped whenever the cache layout or the trace order changes.
pub const TRACE_CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub bits: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceCacheFile {
    pub n: usize,
    pub traces: Vec<TraceEntry>,
}

impl TraceCacheFile {
    pub fn from_traces<S: Exact>(n: usize, traces: &[WitnessedTrace<S>]) -> Self {
        TraceCacheFile {
            n,
            traces: traces
                .iter()
                .map(|t| TraceEntry {
                    bits: t.trace.to_hex(),
                    witness: t.witness.coeffs().iter().map(format).collect(),
                })
                .collect(),
        }
    }

    /// Parses and re-checks every entry: each witness must cut out exactly
    /// its trace, and traces must be strictly ascending.
    pub fn into_traces<S: Exact>(self) -> Result<Vec<WitnessedTrace<S>>> {
        let n = self.n;
        let mut out: Vec<WitnessedTrace<S>> = Vec::with_capacity(self.traces.len());
        for e in self.traces {
            let trace = Trace::from_hex(n, &e.bits)?;
            let coeffs = e.witness.iter().map(|s| S::parse(s)).collect::<Result<Vec<S>>>()?;
            let witness = HyperplaneForm::new(coeffs)?;
            if witness.n() != n || trace_of(&witness)? != trace {
                return Err(Error::Parse(format!("witness does not cut out trace {}", e.bits)));
            }
            if out.last().is_some_and(|p| p.trace >= trace) {
                return Err(Error::Parse("traces are not in ascending order".into()));
            }
            out.push(WitnessedTrace { trace, witness });
        }
        Ok(out)
    }
}

pub fn trace_cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("traces_v{TRACE_CACHE_VERSION}_n{n}.json"))
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn json(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Maximal traces of `Q^n`, read from `dir` when a cache file exists and
/// written there otherwise.
pub fn cached_maximal_traces(dir: Option<&Path>, n: usize) -> Result<Vec<WitnessedTrace<Rational>>> {
    let Some(dir) = dir else { return maximal_traces(n) };
    let path = trace_cache_path(dir, n);
    if path.exists() {
        let file: TraceCacheFile = serde_json::from_str(&fs::read_to_string(&path).map_err(io)?).map_err(json)?;
        if file.n != n {
            return Err(Error::Parse(format!("{} holds traces for n = {}", path.display(), file.n)));
        }
        return file.into_traces();
    }
    let traces = maximal_traces(n)?;
    fs::create_dir_all(dir).map_err(io)?;
    let body = serde_json::to_string(&TraceCacheFile::from_traces(n, &traces)).map_err(json)?;
    // write then rename, so a concurrent reader never sees a partial file
    let tmp = path.with_extension(format!("json.{}", std::process::id()));
    fs::write(&tmp, body).map_err(io)?;
    fs::rename(&tmp, &path).map_err(io)?;
    Ok(traces)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneEntry {
    pub a: Vec<String>,
    /// A JSON integer, or a rational string for fractional covers.
    pub mult: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverFile {
    pub n: usize,
    pub planes: Vec<PlaneEntry>,
}

impl CoverFile {
    pub fn from_cover<S: Exact>(c: &MultiCover<S>) -> Self {
        CoverFile {
            n: c.n(),
            planes: c
                .planes()
                .iter()
                .map(|(p, m)| PlaneEntry {
                    a: p.coeffs().iter().map(format).collect(),
                    mult: match i64::try_from(m.to_big().to_integer()) {
                        Ok(i) if m.is_integral() => Value::from(i),
                        _ => Value::from(format(m)),
                    },
                })
                .collect(),
        }
    }

    pub fn to_cover<S: Exact>(&self) -> Result<MultiCover<S>> {
        let mut c = MultiCover::new(self.n)?;
        for p in &self.planes {
            let coeffs = p.a.iter().map(|s| S::parse(s)).collect::<Result<Vec<S>>>()?;
            if coeffs.len() != self.n {
                return Err(Error::CoefficientCount { expected: self.n, got: coeffs.len() });
            }
            let mult = match &p.mult {
                Value::Number(x) => S::parse(&x.to_string())?,
                Value::String(s) => S::parse(s)?,
                other => return Err(Error::Parse(format!("bad multiplicity {other}"))),
            };
            c.push(HyperplaneForm::new(coeffs)?, mult)?;
        }
        Ok(c)
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover files serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub bits: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriceEntry {
    pub vertex: String,
    pub price: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpOutput {
    pub n: usize,
    pub k: u64,
    pub value: String,
    pub primal: Vec<WeightEntry>,
    pub dual: Vec<PriceEntry>,
}

impl LpOutput {
    pub fn new<S: Exact>(n: usize, k: u64, columns: &[Trace], sol: &CoverLpSolution<S>) -> Self {
        LpOutput {
            n,
            k,
            value: format(&sol.value),
            primal: sol
                .primal
                .iter()
                .map(|(j, w)| WeightEntry { bits: columns[*j].to_hex(), weight: format(w) })
                .collect(),
            dual: sol
                .dual
                .iter()
                .map(|(v, y): (&Vertex, &S)| PriceEntry { vertex: v.to_hex(), price: format(y) })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultEntry {
    pub bits: String,
    pub mult: u64,
}

fn mult_entries(columns: &[Trace], witness: &[(usize, u64)]) -> Vec<MultEntry> {
    witness.iter().map(|&(j, m)| MultEntry { bits: columns[j].to_hex(), mult: m }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlpOutput {
    /// `"f"` or `"layered"`.
    pub problem: String,
    pub n: usize,
    pub k: u64,
    pub optimum: u64,
    pub lp_bound: String,
    pub lower_bound: u64,
    pub witness: Vec<MultEntry>,
    pub nodes: u64,
    pub status: String,
}

impl IlpOutput {
    pub fn new<S: Exact>(problem: &str, n: usize, k: u64, columns: &[Trace], r: &IlpResult<S>) -> Self {
        IlpOutput {
            problem: problem.to_string(),
            n,
            k,
            optimum: r.optimum,
            lp_bound: format(&r.lp_root_bound),
            lower_bound: r.lower_bound,
            witness: mult_entries(columns, &r.witness),
            nodes: r.nodes_explored,
            status: r.status.as_str().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GOutput {
    pub problem: String,
    pub n: usize,
    pub m: u64,
    pub k: u64,
    pub deficiency: u64,
    pub lower_bound: u64,
    pub witness: Vec<MultEntry>,
    pub nodes: u64,
    pub status: String,
}

impl GOutput {
    pub fn new(columns: &[Trace], r: &GResult) -> Self {
        GOutput {
            problem: "g".into(),
            n: r.n,
            m: r.m,
            k: r.k,
            deficiency: r.deficiency,
            lower_bound: r.lower_bound,
            witness: mult_entries(columns, &r.witness),
            nodes: r.nodes_explored,
            status: r.status.as_str().to_string(),
        }
    }
}

/// Turns a trace-multiset witness into a cover file through the stored
/// witness hyperplanes.
pub fn witness_cover(traces: &[WitnessedTrace<Rational>], witness: &[(usize, u64)]) -> Result<MultiCover<Rational>> {
    let n = traces.first().map(|t| t.trace.n()).ok_or_else(|| Error::InvalidArgument("no traces".into()))?;
    let mut c = MultiCover::new(n)?;
    for &(j, m) in witness {
        c.push(traces[j].witness.clone(), Rational::from_int(m as i64))?;
    }
    Ok(c)
}
