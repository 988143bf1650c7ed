//! Batch front end for `monodromy-core`: one JSON report per run, a
//! content-addressed cache, and parameter sweeps.

mod cache;
mod check;

use std::path::PathBuf;

use monodromy_core::certifier::{certify, Budgets, DensityCertificate, Status};
use monodromy_core::coverrep::curve_rep_report;
use monodromy_core::invariants::{invariants_report, valid_params, Params};
use monodromy_core::pham::pham_report;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use cache::Cache;
pub use check::verify_payload;

pub const TOOL_VERSION: &str = concat!("monodromy ", env!("CARGO_PKG_VERSION"));

/// Sweeps stop at this many points per curve.
pub const MAX_SWEEP_M: usize = 24;
/// Largest character support a `pham` run will enumerate.
pub const MAX_PHAM_SUPPORT: u128 = 1 << 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Invariant(_) => 70,
            CliError::Io(_) => 74,
        }
    }
}

impl From<monodromy_core::Error> for CliError {
    fn from(e: monodromy_core::Error) -> Self {
        use monodromy_core::Error as E;
        match e {
            E::BadParameters(s) | E::Parse(s) => CliError::Usage(s),
            E::InvariantViolated(s) => CliError::Invariant(s),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invariant(format!("payload does not round-trip: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    Pham { n: usize, r: u32 },
    CurveRep { m: usize, r: u32, i: u32, wedge: usize },
    Invariants { n: usize, m: usize, r: u32, i: u32 },
    Certify { n: usize, m: usize, r: u32, i: u32 },
    Sweep { n: usize, m_max: usize },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pham { .. } => "pham",
            Command::CurveRep { .. } => "curve-rep",
            Command::Invariants { .. } => "invariants",
            Command::Certify { .. } => "certify",
            Command::Sweep { .. } => "sweep",
        }
    }

    fn uses_budgets(&self) -> bool {
        matches!(
            self,
            Command::CurveRep { .. } | Command::Certify { .. } | Command::Sweep { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub budgets: Budgets,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub verify_cache: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            budgets: Budgets::default(),
            cache_dir: None,
            out: None,
            verify_cache: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budgets.words == 0 {
            return Err(CliError::Usage("--budget must be positive".into()));
        }
        if self.budgets.precision_bits < 16 {
            return Err(CliError::Usage("--precision must be at least 16 bits".into()));
        }
        match self.command {
            Command::Pham { n, r } => {
                if r < 2 {
                    return Err(CliError::Usage(format!("r = {r} must be at least 2")));
                }
                let size = (r as u128 - 1).checked_pow(n as u32 + 1);
                if size.is_none_or(|s| s > MAX_PHAM_SUPPORT) {
                    return Err(CliError::Usage(format!(
                        "support (r−1)^(n+1) exceeds {MAX_PHAM_SUPPORT}"
                    )));
                }
            }
            Command::CurveRep { m, wedge, .. } => {
                if wedge == 0 || wedge + 2 > m {
                    return Err(CliError::Usage(format!(
                        "--wedge {wedge} outside 1..={}",
                        m.saturating_sub(2).max(1)
                    )));
                }
            }
            Command::Invariants { n, m, r, i } | Command::Certify { n, m, r, i } => {
                Params::new(n, m, r, i).validate()?;
            }
            Command::Sweep { n, m_max } => {
                if n == 0 {
                    return Err(CliError::Usage("n must be positive".into()));
                }
                if m_max > MAX_SWEEP_M {
                    return Err(CliError::Usage(format!("--m-max {m_max} exceeds {MAX_SWEEP_M}")));
                }
            }
        }
        Ok(())
    }

    fn with_command(&self, command: Command) -> Self {
        Self {
            command,
            out: None,
            ..self.clone()
        }
    }
}

/// Deterministic work counters standing in for wall-clock time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub words_tried: usize,
    pub elements_searched: usize,
}

impl std::ops::AddAssign for Timing {
    fn add_assign(&mut self, o: Self) {
        self.words_tried += o.words_tried;
        self.elements_searched += o.elements_searched;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub subcommand: String,
    pub params: Value,
    pub payload: Value,
    pub timing: Timing,
    pub convention_flags: Vec<String>,
}

impl Report {
    /// Process exit status carried by the payload.
    pub fn exit_code(&self) -> i32 {
        match self.subcommand.as_str() {
            "certify" => self.status().map_or(70, |s| s.exit_code()),
            "sweep" => {
                let children = self.payload["reports"].as_array().cloned().unwrap_or_default();
                let bad = children.iter().any(|c| {
                    serde_json::from_value::<Report>(c.clone())
                        .ok()
                        .and_then(|r| r.status())
                        .is_none_or(|s| s == Status::NotVerified)
                });
                i32::from(bad)
            }
            _ => 0,
        }
    }

    pub fn status(&self) -> Option<Status> {
        serde_json::from_value(self.payload["status"].clone()).ok()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn params_value(config: &RunConfig) -> Result<Value> {
    let mut v = serde_json::to_value(config.command)?;
    let obj = v.as_object_mut().expect("command is an object");
    obj.remove("subcommand");
    if config.command.uses_budgets() {
        obj.insert("budgets".into(), serde_json::to_value(config.budgets)?);
    }
    Ok(v)
}

fn certificate_timing(c: &DensityCertificate) -> Timing {
    let mut t = Timing::default();
    if let Some(s) = &c.span {
        t.words_tried += s.words_tried;
    }
    if let Some(inv) = &c.invariant_subspace {
        t.words_tried += inv.per_seed.iter().map(|s| s.words_tried).sum::<usize>();
    }
    if let Some(inf) = &c.infinite {
        t.elements_searched += inf.elements_searched;
    }
    t
}

fn compute(config: &RunConfig) -> Result<Report> {
    let b = config.budgets;
    let (payload, timing, flags) = match config.command {
        Command::Pham { n, r } => (serde_json::to_value(pham_report(n, r)?)?, Timing::default(), vec![]),
        Command::CurveRep { m, r, i, wedge } => {
            let rep = curve_rep_report(m, r, i, wedge, b.precision_bits)?;
            let flags = vec![format!(
                "convention={}",
                serde_json::to_value(rep.convention)?.as_str().unwrap_or("")
            )];
            (serde_json::to_value(rep)?, Timing::default(), flags)
        }
        Command::Invariants { n, m, r, i } => (
            serde_json::to_value(invariants_report(&Params::new(n, m, r, i))?)?,
            Timing::default(),
            vec![],
        ),
        Command::Certify { n, m, r, i } => {
            let cert = certify(&Params::new(n, m, r, i), &b)?;
            let t = certificate_timing(&cert);
            let flags = cert.convention_flags.clone();
            (serde_json::to_value(cert)?, t, flags)
        }
        Command::Sweep { n, m_max } => {
            let tuples: Vec<Params> = valid_params(n, m_max).into_iter().filter(|p| p.n == n).collect();
            let reports = tuples
                .par_iter()
                .map(|p| {
                    run_single(&config.with_command(Command::Certify {
                        n: p.n,
                        m: p.m,
                        r: p.r,
                        i: p.i,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut t = Timing::default();
            for r in &reports {
                t += r.timing;
            }
            let payload = serde_json::json!({
                "count": reports.len(),
                "reports": reports,
            });
            (payload, t, vec![])
        }
    };
    Ok(Report {
        tool_version: TOOL_VERSION.to_string(),
        subcommand: config.command.name().to_string(),
        params: params_value(config)?,
        payload,
        timing,
        convention_flags: flags,
    })
}

/// Computes or loads one report, checks it, and caches it, without writing
/// `config.out`.
fn run_single(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let cache = config.cache_dir.as_ref().map(Cache::new);
    let key = Cache::key(TOOL_VERSION, &params_value(config)?, config.command.name());
    if let Some(c) = &cache {
        if let Some(report) = c.load(&key)? {
            if config.verify_cache {
                verify_payload(&config.command, &report.payload)
                    .map_err(|e| CliError::Invariant(format!("cache entry {key}: {e}")))?;
            }
            return Ok(report);
        }
    }
    let report = compute(config)?;
    let back: Report = serde_json::from_str(&report.to_json())?;
    if back != report {
        return Err(CliError::Invariant("report JSON does not round-trip".into()));
    }
    verify_payload(&config.command, &report.payload)?;
    if let Some(c) = &cache {
        c.store(&key, &report)?;
    }
    Ok(report)
}

/// Runs a configuration end to end and writes the report to `config.out`
/// when set.
pub fn run(config: &RunConfig) -> Result<Report> {
    let report = run_single(config)?;
    if let Some(path) = &config.out {
        cache::write_atomic(path, report.to_json().as_bytes())?;
    }
    Ok(report)
}
