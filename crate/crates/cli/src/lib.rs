//! Front end for `motivic-core`: reads JSON inputs, runs one command, and
//! assembles a deterministic [`Report`] of results and invariant verdicts.

pub mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{debug, info};
use motivic::cocycles::MAX_ENUMERATED as MAX_POINTS;
use motivic::dieudonne::build_dieudonne;
use motivic::extension_classes::{eta_class, extends_over_r, kato_pair, push_theorem_check, KummerClass};
use motivic::log_model::{build_model_algebra_limited, generic_fibre_failure, integrality_report};
use motivic::motive::{compute_monodromy, raynaud_decompose, split_pm, MonodromyMatrix, Motive};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Monodromy,
    Decompose,
    EtaClass,
    KatoPair,
    ModelAlgebra,
    Dieudonne,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Monodromy => "monodromy",
            Command::Decompose => "decompose",
            Command::EtaClass => "eta-class",
            Command::KatoPair => "kato-pair",
            Command::ModelAlgebra => "model-algebra",
            Command::Dieudonne => "dieudonne",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub motive: Option<PathBuf>,
    pub mu: Option<PathBuf>,
    pub n: Option<u64>,
    pub p: Option<u64>,
    pub m: Option<u32>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
    /// Cap on `n^r` for model tables.
    pub limit_points: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            motive: None,
            mu: None,
            n: None,
            p: None,
            m: None,
            seed: 0,
            out: None,
            suite: None,
            limit_points: MAX_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Verdict {
    fn check(name: &str, pass: bool, counterexample: impl FnOnce() -> Value) -> Self {
        Verdict { name: name.into(), pass, counterexample: (!pass).then(counterexample) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 over the command, parameters and input file contents.
    pub inputs_digest: String,
    pub seed: u64,
    pub results: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub timing: Timing,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            EXIT_OK
        } else {
            EXIT_INVARIANT
        }
    }

    /// The report with timing zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Report {
        Report { timing: Timing { elapsed_ms: 0 }, ..self.clone() }
    }

    pub fn render_human(&self) -> String {
        let mut out = format!("command: {}\ninputs:  {}\nseed:    {}\n", self.command, self.inputs_digest, self.seed);
        for v in &self.verdicts {
            out.push_str(&format!("[{}] {}\n", if v.pass { "PASS" } else { "FAIL" }, v.name));
            if let Some(c) = &v.counterexample {
                out.push_str(&format!("       counterexample: {c}\n"));
            }
        }
        for (k, v) in &self.results {
            let body = serde_json::to_string_pretty(v).unwrap_or_default();
            out.push_str(&format!("{k}:\n{}\n", indent(&body)));
        }
        out.push_str(&format!("elapsed: {} ms\n", self.timing.elapsed_ms));
        out
    }
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Io,
    Parse,
    Usage,
    Domain,
    Shape,
    Limit,
    Precision,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

/// Input error reported as JSON on stderr with exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Usage, message: message.into(), path: None, location: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&json!({ "error": self })).expect("plain data")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} error: {}", self.kind, self.message)?;
        if let Some(p) = &self.path {
            write!(f, " in {p}")?;
        }
        if let Some(l) = &self.location {
            write!(f, " at line {}, column {}", l.line, l.column)?;
        }
        Ok(())
    }
}

impl std::error::Error for CliError {}

impl From<motivic::Error> for CliError {
    fn from(e: motivic::Error) -> Self {
        let kind = match &e {
            motivic::Error::Domain(_) => ErrorKind::Domain,
            motivic::Error::Shape(_) => ErrorKind::Shape,
            motivic::Error::Limit(_) => ErrorKind::Limit,
            motivic::Error::Precision(_) => ErrorKind::Precision,
            motivic::Error::Inconsistent(_) => ErrorKind::Inconsistent,
        };
        CliError { kind, message: e.to_string(), path: None, location: None }
    }
}

/// Reads and parses a JSON input, keeping the raw bytes for the digest.
fn load<T: DeserializeOwned>(path: &Path, digest: &mut Sha256) -> Result<T, CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| CliError {
        kind: ErrorKind::Io,
        message: e.to_string(),
        path: Some(shown.clone()),
        location: None,
    })?;
    digest.update(&bytes);
    digest.update([0]);
    serde_json::from_slice(&bytes).map_err(|e| CliError {
        kind: ErrorKind::Parse,
        message: e.to_string(),
        path: Some(shown),
        location: Some(Location { line: e.line(), column: e.column() }),
    })
}

fn need<T: Copy>(v: Option<T>, flag: &str, cmd: Command) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("{} requires --{flag}", cmd.name())))
}

fn load_motive(cfg: &RunConfig, digest: &mut Sha256) -> Result<Motive, CliError> {
    let path = cfg.motive.as_ref().ok_or_else(|| CliError::usage(format!("{} requires --motive", cfg.command.name())))?;
    let m: Motive = load(path, digest)?;
    m.check_input_limits()?;
    Ok(m)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut digest = Sha256::new();
    digest.update(cfg.command.name().as_bytes());
    let params = json!({"n": cfg.n, "p": cfg.p, "m": cfg.m, "suite": cfg.suite, "limit_points": cfg.limit_points});
    digest.update(params.to_string().as_bytes());
    let mut results = BTreeMap::new();
    let mut verdicts = Vec::new();
    info!("running {}", cfg.command.name());

    match cfg.command {
        Command::Monodromy => {
            let m = load_motive(cfg, &mut digest)?;
            let mu = compute_monodromy(&m);
            results.insert("mu".into(), to_value(&mu));
            results.insert("nu_dual".into(), to_value(&mu.nu_dual()));
            results.insert("good_reduction".into(), json!(m.has_good_reduction()));
            let u2 = raynaud_decompose(&m).u2;
            verdicts.push(Verdict::check("u2_has_same_monodromy", compute_monodromy(&u2) == mu, || to_value(&u2)));
        }
        Command::Decompose => {
            let m = load_motive(cfg, &mut digest)?;
            let dec = raynaud_decompose(&m);
            let mu = compute_monodromy(&m);
            let (plus, minus) = split_pm(&mu);
            let product = dec.u1.mul(&dec.u2)?;
            verdicts.push(Verdict::check("u1_times_u2_is_u", product == m, || to_value(&product)));
            verdicts.push(Verdict::check("u1_good_reduction", dec.u1.has_good_reduction(), || to_value(&dec.u1)));
            results.insert("u1".into(), to_value(&dec.u1));
            results.insert("u2".into(), to_value(&dec.u2));
            results.insert("mu".into(), to_value(&mu));
            results.insert("mu_plus".into(), to_value(&plus));
            results.insert("mu_minus".into(), to_value(&minus));
        }
        Command::EtaClass => {
            let m = load_motive(cfg, &mut digest)?;
            let n = need(cfg.n, "n", cfg.command)?;
            let class = eta_class(&m, n)?;
            let renormalized = KummerClass::from_monomials(n, &class.representatives())?;
            verdicts.push(Verdict::check("class_is_canonical", renormalized == class, || to_value(&renormalized)));
            results.insert("class".into(), to_value(&class));
        }
        Command::KatoPair => {
            let m = load_motive(cfg, &mut digest)?;
            let n = need(cfg.n, "n", cfg.command)?;
            let pair = kato_pair(&m, n)?;
            let eta = eta_class(&m, n)?;
            let rebuilt = pair.reconstruct()?;
            let ext = extends_over_r(&m, n)?;
            verdicts.push(Verdict::check("reconstruction_matches_eta", rebuilt == eta, || to_value(&rebuilt)));
            verdicts.push(Verdict::check("push_theorem", push_theorem_check(&m, n)?, || to_value(&m)));
            verdicts.push(Verdict::check("good_reduction_iff_n_zero", ext == pair.n_op.is_zero(), || json!({"extends": ext})));
            results.insert("pair".into(), to_value(&pair));
            results.insert("extends_over_R".into(), json!(ext));
        }
        Command::ModelAlgebra => {
            let m = load_motive(cfg, &mut digest)?;
            let n = need(cfg.n, "n", cfg.command)?;
            let alg = build_model_algebra_limited(&m, n, cfg.limit_points)?;
            let integrality = integrality_report(&alg);
            let fibre = generic_fibre_failure(&alg, &m)?;
            verdicts.push(Verdict::check("integrality", integrality.integral, || json!(integrality.min_valuation)));
            verdicts.push(Verdict::check("generic_fibre", fibre.is_none(), || to_value(&fibre)));
            results.insert("algebra".into(), to_value(&alg));
            results.insert("integrality".into(), to_value(&integrality));
        }
        Command::Dieudonne => {
            let path = cfg.mu.as_ref().ok_or_else(|| CliError::usage("dieudonne requires --mu"))?;
            let mu: MonodromyMatrix = load(path, &mut digest)?;
            let p = need(cfg.p, "p", cfg.command)?;
            let m = need(cfg.m, "m", cfg.command)?;
            let data = build_dieudonne(&mu, p, m)?;
            let v = data.verdicts();
            let witness = || to_value(&data);
            verdicts.push(Verdict::check("FV_is_p", v.fv_is_p, witness));
            verdicts.push(Verdict::check("VF_is_p", v.vf_is_p, witness));
            verdicts.push(Verdict::check("N_squared_is_zero", v.n_squared_zero, witness));
            verdicts.push(Verdict::check("FNV_is_N", v.fnv_is_n, witness));
            verdicts.push(Verdict::check("N_block_shape", v.block_shape, witness));
            results.insert("F".into(), to_value(&data.f));
            results.insert("V".into(), to_value(&data.v));
            results.insert("N".into(), to_value(&data.nop));
        }
        Command::Verify => {
            let name = cfg.suite.as_deref().unwrap_or("all");
            let outcomes = suites::run_named(name, cfg.seed).ok_or_else(|| {
                CliError::usage(format!("unknown suite {name:?}; expected all or one of {:?}", suites::suite_names()))
            })??;
            for o in outcomes {
                debug!("suite {}: {} cases, {} failures", o.name, o.cases, o.failures);
                verdicts.push(Verdict { name: o.name.into(), pass: o.pass(), counterexample: o.counterexample.clone() });
                results.insert(o.name.into(), json!({"cases": o.cases, "failures": o.failures, "details": o.details}));
            }
        }
    }

    Ok(Report {
        command: cfg.command.name().into(),
        inputs_digest: hex::encode(digest.finalize()),
        seed: cfg.seed,
        results,
        verdicts,
        timing: Timing { elapsed_ms: start.elapsed().as_millis() as u64 },
    })
}
