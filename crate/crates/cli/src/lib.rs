//! Command implementations behind the `chainmod` binary: instance files,
//! reports and exit codes.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chainmod::arith::ChainRing;
use chainmod::chain::{ChainObject, Factor, ObjectSpec};
use chainmod::decomposition::{
    assemble, decide_iso, decide_iso_general, extract_digraph, oracle_on, swap_search, OracleOutcome, SwapSearchConfig,
    Verdict, DEFAULT_HALL_MAX_R, DEFAULT_ORACLE_CAP,
};
use chainmod::endo::{EndoConfig, EndoRing, DEFAULT_ENDO_CAP, DEFAULT_PAIR_CAP};
use chainmod::hom::{same_class, ClassKind, HomElement};
use chainmod::sweep::{run_sweep, SweepConfig};
use chainmod::Error;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "chainmod", version, about = "Chain-filtered modules over Z/p^e")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Clone, Copy, Debug, Args, Serialize)]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    pub count: usize,
    /// Largest endomorphism ring that is materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_ENDO_CAP)]
    pub endo_cap: u128,
    /// Largest endomorphism ring on which pairwise checks run.
    #[arg(long, global = true, default_value_t = DEFAULT_PAIR_CAP)]
    pub pair_cap: usize,
    /// Largest number of morphisms the oracle enumerates.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: u128,
    /// Largest side of a digraph on which every vertex subset is audited.
    #[arg(long, global = true, default_value_t = DEFAULT_HALL_MAX_R)]
    pub hall_max_r: usize,
}

impl GlobalArgs {
    fn endo(&self) -> EndoConfig {
        EndoConfig { endo_cap: self.endo_cap, pair_cap: self.pair_cap }
    }
}

#[derive(Debug, Args)]
pub struct RingArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub e: u32,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct SidesArgs {
    pub file: PathBuf,
    /// Comma-separated object names of the left-hand sum.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub lhs: Vec<String>,
    /// Comma-separated object names of the right-hand sum.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub rhs: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chain validity and factor profile of every object in a file.
    Validate { file: PathBuf },
    /// Class equality at every level and kind for two objects.
    Classes { file: PathBuf, a: String, b: String },
    /// Endomorphism ring report for one object.
    Endo { file: PathBuf, object: String },
    /// Decides whether two direct sums are isomorphic.
    Decide {
        #[command(flatten)]
        sides: SidesArgs,
        /// Allow vanishing factors and different summand counts.
        #[arg(long)]
        general: bool,
        /// Confirm the verdict by exhaustive search.
        #[arg(long)]
        cross_check: bool,
        /// Harness self-test: reports the opposite verdict.
        #[arg(long, hide = true)]
        flip_verdict: bool,
    },
    /// Exhaustive isomorphism search between two direct sums.
    Oracle {
        #[command(flatten)]
        sides: SidesArgs,
    },
    /// Randomized run of every invariant.
    Sweep {
        #[command(flatten)]
        ring: RingArgs,
        /// Largest module order drawn (default p^6).
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long, hide = true)]
        inject_mutant: bool,
    },
    /// Random search for A ⊕ B ≅ C ⊕ D with pairwise non-isomorphic summands.
    SwapSearch {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 64)]
        max_order: u64,
        #[arg(long, default_value_t = 8)]
        max_findings: usize,
    },
}

/// A named object of an instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedObject {
    pub name: String,
    #[serde(flatten)]
    pub spec: ObjectSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub e: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ring: RingSpec,
    pub objects: Vec<NamedObject>,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Lib(e) if e.is_cap() => EXIT_CAP,
            CliError::Lib(e) if e.is_violation() => EXIT_VIOLATION,
            CliError::Lib(_) => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "{s}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl InstanceFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid instance file: {e}")))?;
        let mut seen = BTreeSet::new();
        for o in &file.objects {
            if !seen.insert(o.name.as_str()) {
                return Err(CliError::Input(format!("duplicate object name {:?}", o.name)));
            }
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn ring(&self) -> CliResult<ChainRing> {
        Ok(ChainRing::new(self.ring.p, self.ring.e)?)
    }

    pub fn get(&self, name: &str) -> CliResult<ChainObject> {
        let o = self
            .objects
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| CliError::Input(format!("unknown object {name:?}")))?;
        Ok(o.spec.build(self.ring()?)?)
    }

    /// The same file with every level given by its canonical basis.
    pub fn normalized(&self) -> CliResult<Self> {
        let ring = self.ring()?;
        let objects = self
            .objects
            .iter()
            .map(|o| Ok(NamedObject { name: o.name.clone(), spec: o.spec.build(ring)?.spec() }))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(InstanceFile { ring: self.ring, objects })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: GlobalArgs,
    pub result: Value,
    pub findings: Vec<Value>,
    pub timing_ms: f64,
}

/// What the binary prints and returns.
pub struct Outcome {
    pub report: Option<Report>,
    pub code: i32,
    pub diagnostics: Vec<String>,
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let name = command_name(&cli.command);
    let mut diagnostics = Vec::new();
    match dispatch(cli, &mut diagnostics) {
        Ok((result, findings, code)) => {
            let code = if code == EXIT_OK && !findings.is_empty() { EXIT_VIOLATION } else { code };
            let report = Report {
                command: name.to_string(),
                config: cli.global,
                result,
                findings,
                timing_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            Outcome { report: Some(report), code, diagnostics }
        }
        Err(e) => {
            diagnostics.push(format!("error: {e}"));
            Outcome { report: None, code: e.exit_code(), diagnostics }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Classes { .. } => "classes",
        Command::Endo { .. } => "endo",
        Command::Decide { .. } => "decide",
        Command::Oracle { .. } => "oracle",
        Command::Sweep { .. } => "sweep",
        Command::SwapSearch { .. } => "swap-search",
    }
}

type Dispatched = (Value, Vec<Value>, i32);

fn dispatch(cli: &Cli, diagnostics: &mut Vec<String>) -> CliResult<Dispatched> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { file } => cmd_validate(&InstanceFile::load(file)?),
        Command::Classes { file, a, b } => cmd_classes(&InstanceFile::load(file)?, a, b),
        Command::Endo { file, object } => cmd_endo(&InstanceFile::load(file)?, object, g),
        Command::Decide { sides, general, cross_check, flip_verdict } => {
            let opts = DecideOptions { general: *general, cross_check: *cross_check, flip_verdict: *flip_verdict };
            cmd_decide(&InstanceFile::load(&sides.file)?, &sides.lhs, &sides.rhs, opts, g, diagnostics)
        }
        Command::Oracle { sides } => cmd_oracle(&InstanceFile::load(&sides.file)?, &sides.lhs, &sides.rhs, g),
        Command::Sweep { ring, max_order, inject_mutant } => {
            let mut cfg = SweepConfig::new(ring.p, ring.e, ring.n, g.count, g.seed);
            if let Some(m) = max_order {
                cfg.max_order = *m;
            }
            cfg.endo = g.endo();
            cfg.oracle_cap = g.oracle_cap;
            cfg.hall_max_r = g.hall_max_r;
            cfg.inject_mutant = *inject_mutant;
            let rep = run_sweep(&cfg)?;
            let findings = rep.findings.iter().map(to_value).collect();
            Ok((to_value(&rep), findings, EXIT_OK))
        }
        Command::SwapSearch { ring, max_order, max_findings } => {
            let r = ChainRing::new(ring.p, ring.e)?;
            let cfg = SwapSearchConfig { budget: g.count, max_order: *max_order, oracle_cap: g.oracle_cap, max_findings: *max_findings };
            let found = swap_search(r, ring.n, g.seed, &cfg)?;
            let findings = found.iter().filter(|f| f.oracle_confirmed == Some(false)).map(to_value).collect();
            Ok((json!({ "search": cfg, "examples": found }), findings, EXIT_OK))
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn profile_value(obj: &ChainObject) -> Vec<Value> {
    obj.profile()
        .iter()
        .map(|f| match f {
            Factor::Zero => json!("zero"),
            Factor::Cyclic(a) => json!({ "cyclic": a }),
            Factor::Decomposable(v) => json!({ "decomposable": v }),
        })
        .collect()
}

pub fn cmd_validate(file: &InstanceFile) -> CliResult<Dispatched> {
    let ring = file.ring()?;
    let mut any_invalid = false;
    let objects: Vec<Value> = file
        .objects
        .iter()
        .map(|o| match o.spec.build(ring) {
            Ok(obj) => json!({
                "name": o.name,
                "valid": true,
                "n": obj.n(),
                "order_log": obj.module().order_log(),
                "factors": profile_value(&obj),
                "uniserial_factors": obj.require_uniserial_factors().is_ok(),
                "in_un": obj.is_in_un(),
            }),
            Err(e) => {
                any_invalid = true;
                let index = match &e {
                    Error::NotIncreasing { index } => Some(*index),
                    _ => None,
                };
                json!({ "name": o.name, "valid": false, "error": e.to_string(), "level": index })
            }
        })
        .collect();
    Ok((json!({ "ring": file.ring, "objects": objects }), Vec::new(), if any_invalid { EXIT_INPUT } else { EXIT_OK }))
}

pub fn cmd_classes(file: &InstanceFile, a: &str, b: &str) -> CliResult<Dispatched> {
    let (m, n) = (file.get(a)?, file.get(b)?);
    if m.n() != n.n() {
        return Err(Error::LengthMismatch { expected: m.n(), got: n.n() }.into());
    }
    let grid = (1..=m.n())
        .map(|i| {
            Ok(json!({
                "level": i,
                "mono": same_class(&m, &n, i, ClassKind::Mono)?,
                "epi": same_class(&m, &n, i, ClassKind::Epi)?,
            }))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((json!({ "a": a, "b": b, "grid": grid }), Vec::new(), EXIT_OK))
}

pub fn cmd_endo(file: &InstanceFile, name: &str, g: &GlobalArgs) -> CliResult<Dispatched> {
    let m = file.get(name)?;
    m.require_uniserial_factors()?;
    let e = EndoRing::new(&m, &g.endo())?;
    let ideals: Vec<Value> = e
        .level_ideals()?
        .iter()
        .map(|h| json!({ "ideal": h.tag, "order": h.order() }))
        .collect();
    let radical = e.jacobson_radical()?;
    let semisimple = e.semisimple_report()?;
    let mut findings = Vec::new();
    let checklist = if m.is_in_un() {
        let check = e.structure_check()?;
        for c in check.checklist.failed_clauses() {
            findings.push(to_value(c));
        }
        to_value(&check.checklist)
    } else {
        Value::Null
    };
    let result = json!({
        "object": name,
        "ring_order": e.order(),
        "level_ideals": ideals,
        "radical_order": radical.order(),
        "semisimple": semisimple,
        "checklist": checklist,
    });
    Ok((result, findings, EXIT_OK))
}

fn sides(file: &InstanceFile, lhs: &[String], rhs: &[String]) -> CliResult<(Vec<ChainObject>, Vec<ChainObject>)> {
    let get = |names: &[String]| names.iter().map(|s| file.get(s)).collect::<CliResult<Vec<_>>>();
    Ok((get(lhs)?, get(rhs)?))
}

fn common_n(ms: &[ChainObject], ns: &[ChainObject]) -> CliResult<usize> {
    ms.iter()
        .chain(ns)
        .map(|o| o.n())
        .next()
        .ok_or_else(|| CliError::Input("both sides are empty".into()))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DecideOptions {
    pub general: bool,
    pub cross_check: bool,
    pub flip_verdict: bool,
}

pub fn cmd_decide(
    file: &InstanceFile,
    lhs: &[String],
    rhs: &[String],
    opts: DecideOptions,
    g: &GlobalArgs,
    diagnostics: &mut Vec<String>,
) -> CliResult<Dispatched> {
    let (ms, ns) = sides(file, lhs, rhs)?;
    let mut rep = if opts.general { decide_iso_general(&ms, &ns)? } else { decide_iso(&ms, &ns)? };
    if opts.flip_verdict {
        rep.verdict = if rep.verdict == Verdict::Iso { Verdict::NotIso } else { Verdict::Iso };
    }
    let mut result = json!({ "lhs": lhs, "rhs": rhs, "general": opts.general, "decision": rep });
    let mut findings = Vec::new();
    let mut code = EXIT_OK;
    if opts.cross_check && !(ms.is_empty() && ns.is_empty()) {
        let ring = file.ring()?;
        let n = common_n(&ms, &ns)?;
        let (left, right) = (assemble(ring, n, &ms)?, assemble(ring, n, &ns)?);
        match oracle_on(&left.object, &right.object, g.oracle_cap) {
            Ok(o) => {
                if o.is_iso() != (rep.verdict == Verdict::Iso) {
                    findings.push(json!({ "clause": "decision agrees with the oracle", "decision": rep.verdict, "oracle": o }));
                }
                result["oracle"] = to_value(&o);
            }
            Err(e) if e.is_cap() => {
                diagnostics.push(format!("cross-check skipped: {e}"));
                result["oracle"] = json!("cap_exceeded");
                code = EXIT_CAP;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((result, findings, code))
}

pub fn cmd_oracle(file: &InstanceFile, lhs: &[String], rhs: &[String], g: &GlobalArgs) -> CliResult<Dispatched> {
    let (ms, ns) = sides(file, lhs, rhs)?;
    let ring = file.ring()?;
    let n = common_n(&ms, &ns)?;
    let (left, right) = (assemble(ring, n, &ms)?, assemble(ring, n, &ns)?);
    let outcome = oracle_on(&left.object, &right.object, g.oracle_cap)?;
    let mut digraphs = Vec::new();
    let mut findings = Vec::new();
    if let OracleOutcome::Iso { witness, .. } = &outcome {
        let f = HomElement { images: witness.clone() };
        for i in 1..=n {
            for kind in ClassKind::BOTH {
                match extract_digraph(&f, &left, &right, i, kind, g.hall_max_r) {
                    Ok(d) => digraphs.push(to_value(&d)),
                    Err(e) if e.is_violation() => {
                        findings.push(json!({ "level": i, "kind": kind, "error": e.to_string() }))
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok((json!({ "lhs": lhs, "rhs": rhs, "outcome": outcome, "digraphs": digraphs }), findings, EXIT_OK))
}
