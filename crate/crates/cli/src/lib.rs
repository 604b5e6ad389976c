//! Command-line adapter over `jkssi-core`: reads v1 game specs and prints a
//! JSON report with exact results as `"p/q"` strings.

pub mod spec;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use jkssi_core::average::{average_game, average_of_combo};
use jkssi_core::axioms::{check_axiom, Axiom, AxiomReport, Case, Verdict};
use jkssi_core::builtin::{builtin_suite, interval_suite};
use jkssi_core::decomposition::{convex_veto_decomposition, reconstruct_phi_via_ac, ws_basis_decompose};
use jkssi_core::indices::{
    phi, phi_parametric, phi_rollcall_with, ssi_simple, IndexKind, ParamProfile, PivotCounting, DEFAULT_ROLLCALL_BUDGET,
};
use jkssi_core::interval::{
    check_interval_axiom, interval_average_closed, psi, psi_monte_carlo, psi_parametric, psi_parametric_sampled,
    reconstruct_psi_via_ac, IntervalAxiomReport, IntervalCase, IntervalIndexKind, StepIntervalGame,
};
use jkssi_core::rational::{format_rational, to_f64};
use jkssi_core::tu::weighted_sum;
use jkssi_core::{Coalition, GameError, JKGame, PowerVector, Profile, Rational, TUGame};
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use spec::{combo_to_spec, game_to_spec, interval_to_spec, parse_document, parse_exact, GameSpec, Loaded, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        // The variant name doubles as a stable tag for scripts reading stderr.
        let debug = format!("{e:?}");
        let tag = debug.split(['(', ' ', '{']).next().unwrap_or_default().to_string();
        let msg = format!("{tag}: {e}");
        match e {
            GameError::SizeCapExceeded { .. } => CliError::Cap(msg),
            GameError::Parse(_) | GameError::BadParam(_) => CliError::Parse(msg),
            e if e.is_validation() => CliError::Validation(msg),
            _ => CliError::Failed(msg),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "jkssi", version, about = "Exact power indices for (j,k) simple games and interval simple games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Add wall-clock timing to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a game spec.
    Validate { input: PathBuf },
    /// Phi via the swing formula.
    Phi { input: PathBuf },
    /// Phi by enumerating every roll-call.
    PhiRollcall {
        input: PathBuf,
        /// Count each h-pivot event instead of the uncertainty drop.
        #[arg(long)]
        literal: bool,
    },
    /// Phi^a for a level vector, e.g. `--a 1,1,0`.
    PhiParam {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u32>,
    },
    /// Shapley-Shubik index of a (2,2) game.
    Ssi { input: PathBuf },
    /// The average TU game (Psi-hat for interval games).
    Average { input: PathBuf },
    /// Convex decomposition into veto-set games.
    DecomposeVeto {
        input: PathBuf,
        /// Print the decomposition as a combo spec instead of a report.
        #[arg(long)]
        emit_specs: bool,
    },
    /// Coefficients of the average game in the point-veto average basis.
    DecomposeBasis { input: PathBuf },
    /// Rebuild the index from the basis games through average convexity.
    ReconstructAc { input: PathBuf },
    /// Check axioms of an index over a suite.
    Axioms {
        /// Suite file (JSON array of specs) or builtin name: golden, grid, random, standard, builtin, interval.
        #[arg(long)]
        suite: String,
        /// phi | psi | scaled:<r> | blend:<r> | parametric:<d> | parametric-uniform:<level> | parametric:<alpha> (interval) | basis-weighted:<player>
        #[arg(long)]
        index: String,
        /// Restrict to these axioms, e.g. `--axiom E,NP`.
        #[arg(long, value_delimiter = ',')]
        axiom: Vec<String>,
    },
    /// Psi of an interval game.
    Psi {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Psi^alpha of an interval game.
    PsiParam {
        input: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Phi { .. } => "phi",
            Command::PhiRollcall { .. } => "phi-rollcall",
            Command::PhiParam { .. } => "phi-param",
            Command::Ssi { .. } => "ssi",
            Command::Average { .. } => "average",
            Command::DecomposeVeto { .. } => "decompose-veto",
            Command::DecomposeBasis { .. } => "decompose-basis",
            Command::ReconstructAc { .. } => "reconstruct-ac",
            Command::Axioms { .. } => "axioms",
            Command::Psi { .. } => "psi",
            Command::PsiParam { .. } => "psi-param",
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(format_rational(r))).collect())
}

fn vector(p: &PowerVector) -> Value {
    rationals(p.entries())
}

fn players(s: Coalition) -> Value {
    Value::Array(s.players().map(|i| json!(i + 1)).collect())
}

fn tu_table(g: &TUGame) -> Value {
    Value::Array(Coalition::all(g.n()).map(|s| json!({"coalition": players(s), "value": format_rational(&g[s])})).collect())
}

fn spec_value(s: &GameSpec) -> Value {
    serde_json::to_value(s).expect("specs serialize")
}

fn weighted_games(terms: &[(Rational, JKGame)]) -> Value {
    Value::Array(terms.iter().map(|(w, g)| json!({"weight": format_rational(w), "game": spec_value(&game_to_spec(g))})).collect())
}

fn weighted_intervals(terms: &[(Rational, StepIntervalGame)]) -> Value {
    Value::Array(terms.iter().map(|(w, g)| json!({"weight": format_rational(w), "game": spec_value(&interval_to_spec(g))})).collect())
}

fn case_value(c: &Case) -> Value {
    match c {
        Case::Single { axiom, game } => json!({"kind": "single", "axiom": axiom.to_string(), "game": spec_value(&game_to_spec(game))}),
        Case::Permuted { game, perm } => json!({
            "kind": "permuted",
            "game": spec_value(&game_to_spec(game)),
            "perm": perm.iter().map(|p| p + 1).collect::<Vec<_>>(),
        }),
        Case::Transfer { u, v } => {
            json!({"kind": "transfer", "u": spec_value(&game_to_spec(u)), "v": spec_value(&game_to_spec(v))})
        }
        Case::Combination { axiom, combined, terms } => json!({
            "kind": "combination",
            "axiom": axiom.to_string(),
            "combined": spec_value(&game_to_spec(combined)),
            "terms": weighted_games(terms),
        }),
        Case::AverageConvexity { left, right } => {
            json!({"kind": "average-convexity", "left": weighted_games(left), "right": weighted_games(right)})
        }
    }
}

fn interval_case_value(c: &IntervalCase) -> Value {
    match c {
        IntervalCase::Single { axiom, game } => {
            json!({"kind": "single", "axiom": axiom.to_string(), "game": spec_value(&interval_to_spec(game))})
        }
        IntervalCase::AverageConvexity { left, right } => {
            json!({"kind": "average-convexity", "left": weighted_intervals(left), "right": weighted_intervals(right)})
        }
    }
}

fn verdict_str(v: Verdict) -> Value {
    serde_json::to_value(v).expect("verdict serializes")
}

fn report_value(r: &AxiomReport) -> Value {
    json!({
        "axiom": r.axiom.to_string(),
        "verdict": verdict_str(r.verdict),
        "cases": r.cases,
        "skipped": r.skipped,
        "message": r.message,
        "witness": r.witness.as_ref().map(case_value),
    })
}

fn interval_report_value(r: &IntervalAxiomReport) -> Value {
    json!({
        "axiom": r.axiom.to_string(),
        "verdict": verdict_str(r.verdict),
        "cases": r.cases,
        "skipped": r.skipped,
        "message": r.message,
        "witness": r.witness.as_ref().map(interval_case_value),
    })
}

fn load(bytes: &[u8]) -> Result<Loaded, CliError> {
    parse_document(bytes)?.load()
}

fn not_interval(l: &Loaded, command: &str) -> Result<(), CliError> {
    match l {
        Loaded::Interval(_) => Err(CliError::Parse(format!("{command} needs a (j,k) game; use psi for interval games"))),
        _ => Ok(()),
    }
}

fn only_interval(l: Loaded, command: &str) -> Result<StepIntervalGame, CliError> {
    match l {
        Loaded::Interval(v) => Ok(v),
        other => Err(CliError::Parse(format!("{command} needs an interval-step game, got {}", other.kind()))),
    }
}

/// Applies a linear index termwise, so combos need not be integral.
fn linear(l: &Loaded, f: impl Fn(&JKGame) -> jkssi_core::Result<PowerVector>) -> Result<PowerVector, CliError> {
    match l {
        Loaded::Game(g) => Ok(f(g)?),
        Loaded::Combo(c) => {
            let terms = c.terms().iter().map(|(w, g)| Ok((w.clone(), f(g)?))).collect::<Result<Vec<_>, GameError>>()?;
            Ok(weighted_sum(&terms, c.shape().n()))
        }
        Loaded::Interval(_) => unreachable!("checked by caller"),
    }
}

/// The single game behind the input; combos must sum to a valid game.
fn single_game(l: Loaded) -> Result<JKGame, CliError> {
    match l {
        Loaded::Game(g) => Ok(g),
        Loaded::Combo(c) => Ok(c.to_game()?),
        Loaded::Interval(_) => unreachable!("checked by caller"),
    }
}

enum Suite {
    Games(Vec<JKGame>),
    Intervals(Vec<StepIntervalGame>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SuiteFile {
    List(Vec<GameSpec>),
    Wrapped { games: Vec<GameSpec> },
}

fn load_suite(arg: &str) -> Result<(Suite, Vec<u8>), CliError> {
    let path = Path::new(arg);
    if !path.exists() {
        let name = arg.strip_prefix("builtin:").unwrap_or(arg);
        let digest_input = format!("builtin:{name}").into_bytes();
        if name == "interval" {
            return Ok((Suite::Intervals(interval_suite()), digest_input));
        }
        return Ok((Suite::Games(builtin_suite(name)?), digest_input));
    }
    let bytes = read_input(path)?;
    let specs = match serde_json::from_slice::<SuiteFile>(&bytes).map_err(|e| CliError::Parse(format!("suite: {e}")))? {
        SuiteFile::List(s) | SuiteFile::Wrapped { games: s } => s,
    };
    let loaded = specs.iter().map(GameSpec::load).collect::<Result<Vec<_>, _>>()?;
    let suite = if !loaded.is_empty() && loaded.iter().all(|l| matches!(l, Loaded::Interval(_))) {
        Suite::Intervals(loaded.into_iter().map(|l| only_interval(l, "axioms")).collect::<Result<_, _>>()?)
    } else {
        let mut games = Vec::new();
        for l in loaded {
            not_interval(&l, "a mixed suite")?;
            games.push(single_game(l)?);
        }
        Suite::Games(games)
    };
    Ok((suite, bytes))
}

fn param<'a>(name: &'a str, key: &str) -> Option<&'a str> {
    name.strip_prefix(key).and_then(|rest| rest.strip_prefix(':').or_else(|| rest.strip_prefix('=')))
}

fn player(s: &str) -> Result<usize, CliError> {
    match s.parse::<usize>() {
        Ok(p) if p >= 1 => Ok(p - 1),
        _ => Err(CliError::Parse(format!("player must be a 1-based integer, got {s:?}"))),
    }
}

fn level(s: &str) -> Result<u32, CliError> {
    s.parse().map_err(|_| CliError::Parse(format!("expected a level, got {s:?}")))
}

pub fn parse_index(name: &str) -> Result<IndexKind, CliError> {
    if name == "phi" {
        return Ok(IndexKind::Phi);
    }
    if let Some(r) = param(name, "scaled") {
        return Ok(IndexKind::Scaled(parse_exact(r)?));
    }
    if let Some(r) = param(name, "blend") {
        return Ok(IndexKind::BlendEqualDivision(parse_exact(r)?));
    }
    if let Some(d) = param(name, "parametric") {
        return Ok(IndexKind::Parametric(ParamProfile::BelowTop(level(d)?)));
    }
    if let Some(l) = param(name, "parametric-uniform") {
        return Ok(IndexKind::Parametric(ParamProfile::Uniform(level(l)?)));
    }
    if let Some(p) = param(name, "basis-weighted") {
        return Ok(IndexKind::BasisWeighted { favored: player(p)? });
    }
    Err(CliError::Parse(format!("unknown index {name:?}")))
}

pub fn parse_interval_index(name: &str) -> Result<IntervalIndexKind, CliError> {
    if name == "psi" || name == "phi" {
        return Ok(IntervalIndexKind::Psi);
    }
    if let Some(r) = param(name, "scaled") {
        return Ok(IntervalIndexKind::Scaled(parse_exact(r)?));
    }
    if let Some(r) = param(name, "blend") {
        return Ok(IntervalIndexKind::BlendEqualDivision(parse_exact(r)?));
    }
    if let Some(a) = param(name, "parametric") {
        return Ok(IntervalIndexKind::Parametric(parse_exact(a)?));
    }
    if let Some(p) = param(name, "basis-weighted") {
        return Ok(IntervalIndexKind::BasisWeighted { favored: player(p)? });
    }
    Err(CliError::Parse(format!("unknown interval index {name:?}")))
}

fn parse_axioms(names: &[String], default: &[Axiom]) -> Result<Vec<Axiom>, CliError> {
    if names.is_empty() {
        return Ok(default.to_vec());
    }
    names.iter().map(|n| Axiom::parse(n).ok_or_else(|| CliError::Parse(format!("unknown axiom {n:?}")))).collect()
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes).as_slice())
}

/// Runs one command and returns the text for stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let start = Instant::now();
    let command = &cli.command;
    let mut out = Map::new();
    let digest_input: Vec<u8>;
    match command {
        Command::Axioms { suite, index, axiom } => {
            let (suite, bytes) = load_suite(suite)?;
            digest_input = bytes;
            match suite {
                Suite::Games(games) => {
                    let f = parse_index(index)?;
                    let axioms = parse_axioms(axiom, &Axiom::ALL)?;
                    let reports = axioms.iter().map(|&a| check_axiom(a, &f, &games)).collect::<Result<Vec<_>, _>>()?;
                    out.insert("index".into(), json!(jkssi_core::indices::PowerIndex::name(&f)));
                    out.insert("games".into(), json!(games.len()));
                    out.insert("reports".into(), Value::Array(reports.iter().map(report_value).collect()));
                }
                Suite::Intervals(games) => {
                    let f = parse_interval_index(index)?;
                    let axioms = parse_axioms(axiom, &[Axiom::E, Axiom::S, Axiom::NP, Axiom::AC])?;
                    let reports =
                        axioms.iter().map(|&a| check_interval_axiom(a, &f, &games)).collect::<Result<Vec<_>, _>>()?;
                    out.insert("index".into(), json!(f.name()));
                    out.insert("games".into(), json!(games.len()));
                    out.insert("reports".into(), Value::Array(reports.iter().map(interval_report_value).collect()));
                }
            }
        }
        Command::Validate { input }
        | Command::Phi { input }
        | Command::PhiRollcall { input, .. }
        | Command::PhiParam { input, .. }
        | Command::Ssi { input }
        | Command::Average { input }
        | Command::DecomposeVeto { input, .. }
        | Command::DecomposeBasis { input }
        | Command::ReconstructAc { input }
        | Command::Psi { input, .. }
        | Command::PsiParam { input, .. } => {
            digest_input = read_input(input)?;
            let loaded = load(&digest_input)?;
            if let Command::DecomposeVeto { emit_specs: true, .. } = command {
                not_interval(&loaded, "decompose-veto")?;
                let d = convex_veto_decomposition(&single_game(loaded)?)?;
                let text = serde_json::to_string_pretty(&combo_to_spec(&d.to_combo()?)).expect("specs serialize");
                return Ok(text + "\n");
            }
            dispatch(command, loaded, &mut out)?;
        }
    }
    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA_VERSION));
    report.insert("command".into(), json!(command.name()));
    report.insert("input_sha256".into(), json!(sha256_hex(&digest_input)));
    report.extend(out);
    if cli.timing {
        report.insert("timing".into(), json!({"elapsed_ms": start.elapsed().as_secs_f64() * 1e3}));
    }
    Ok(serde_json::to_string_pretty(&Value::Object(report)).expect("reports serialize") + "\n")
}

fn dispatch(command: &Command, loaded: Loaded, out: &mut Map<String, Value>) -> Result<(), CliError> {
    let name = command.name();
    match command {
        Command::Validate { .. } => {
            out.insert("valid".into(), json!(true));
            out.insert("kind".into(), json!(loaded.kind()));
            match &loaded {
                Loaded::Game(g) => {
                    let s = g.shape();
                    out.insert("shape".into(), json!({"n": s.n(), "j": s.j(), "k": s.k()}));
                }
                Loaded::Combo(c) => {
                    let s = c.shape();
                    out.insert("shape".into(), json!({"n": s.n(), "j": s.j(), "k": s.k()}));
                    out.insert("convex".into(), json!(c.is_convex()));
                    out.insert("terms".into(), json!(c.terms().len()));
                }
                Loaded::Interval(v) => {
                    out.insert("shape".into(), json!({"n": v.n()}));
                    out.insert("steps".into(), json!(v.steps().len()));
                }
            }
        }
        Command::Phi { .. } => {
            not_interval(&loaded, name)?;
            out.insert("phi".into(), vector(&linear(&loaded, phi)?));
        }
        Command::PhiRollcall { literal, .. } => {
            not_interval(&loaded, name)?;
            let mode = if *literal { PivotCounting::HPivot } else { PivotCounting::UncertaintyReduction };
            out.insert("phi".into(), vector(&linear(&loaded, |g| phi_rollcall_with(g, mode, DEFAULT_ROLLCALL_BUDGET))?));
        }
        Command::PhiParam { a, .. } => {
            not_interval(&loaded, name)?;
            let p = linear(&loaded, |g| phi_parametric(g, &Profile::new(a.clone(), g.shape())?))?;
            out.insert("a".into(), json!(a));
            out.insert("phi_a".into(), vector(&p));
        }
        Command::Ssi { .. } => {
            not_interval(&loaded, name)?;
            out.insert("ssi".into(), vector(&linear(&loaded, ssi_simple)?));
        }
        Command::Average { .. } => {
            let g = match &loaded {
                Loaded::Game(g) => average_game(g),
                Loaded::Combo(c) => average_of_combo(c),
                Loaded::Interval(v) => interval_average_closed(v)?,
            };
            out.insert("average".into(), tu_table(&g));
        }
        Command::DecomposeVeto { .. } => {
            not_interval(&loaded, name)?;
            let d = convex_veto_decomposition(&single_game(loaded)?)?;
            let terms = d
                .terms()
                .iter()
                .map(|(w, f)| json!({"weight": format_rational(w), "support": f.iter().map(|p| p.levels().to_vec()).collect::<Vec<_>>()}))
                .collect();
            out.insert("terms".into(), Value::Array(terms));
        }
        Command::DecomposeBasis { .. } => {
            not_interval(&loaded, name)?;
            let (avg, shape) = match &loaded {
                Loaded::Game(g) => (average_game(g), *g.shape()),
                Loaded::Combo(c) => (average_of_combo(c), *c.shape()),
                Loaded::Interval(_) => unreachable!(),
            };
            let x = ws_basis_decompose(&avg, &shape)?;
            let coeffs = x.nonzero().map(|(s, c)| json!({"coalition": players(s), "value": format_rational(c)})).collect();
            out.insert("coefficients".into(), Value::Array(coeffs));
        }
        Command::ReconstructAc { .. } => match loaded {
            Loaded::Interval(v) => {
                let n = v.n();
                let r = reconstruct_psi_via_ac(&v, |s| PowerVector::uniform_on(s, n))?;
                let coeffs = Coalition::all(n)
                    .filter(|s| !r.coefficients[*s].is_zero())
                    .map(|s| json!({"coalition": players(s), "value": format_rational(&r.coefficients[s])}))
                    .collect();
                out.insert("coefficients".into(), Value::Array(coeffs));
                out.insert("varpi".into(), json!(format_rational(&r.varpi)));
                out.insert("index".into(), vector(&r.index));
            }
            other => {
                let r = reconstruct_phi_via_ac(&single_game(other)?)?;
                let coeffs = r.coefficients.nonzero().map(|(s, c)| json!({"coalition": players(s), "value": format_rational(c)})).collect();
                out.insert("coefficients".into(), Value::Array(coeffs));
                out.insert("positive".into(), Value::Array(r.positive.iter().map(|s| players(*s)).collect()));
                out.insert("negative".into(), Value::Array(r.negative.iter().map(|s| players(*s)).collect()));
                out.insert("varpi".into(), json!(format_rational(&r.varpi)));
                out.insert("index".into(), vector(&r.index));
            }
        },
        Command::Psi { method, samples, seed, .. } => {
            let v = only_interval(loaded, name)?;
            match method {
                Method::Closed => {
                    out.insert("psi".into(), vector(&psi(&v)?));
                }
                Method::Mc => {
                    let est = psi_monte_carlo(&v.to_black_box(), *samples, *seed)?;
                    out.insert("psi_mc".into(), serde_json::to_value(est).expect("estimate serializes"));
                }
            }
        }
        Command::PsiParam { alpha, method, samples, seed, .. } => {
            let v = only_interval(loaded, name)?;
            let a = parse_exact(alpha)?;
            out.insert("alpha".into(), json!(format_rational(&a)));
            match method {
                Method::Closed => {
                    out.insert("psi_alpha".into(), vector(&psi_parametric(&v, &a)?));
                }
                Method::Mc => {
                    let est = psi_parametric_sampled(&v.to_black_box(), to_f64(&a), *samples, *seed)?;
                    out.insert("psi_alpha_mc".into(), serde_json::to_value(est).expect("estimate serializes"));
                }
            }
        }
        Command::Axioms { .. } => unreachable!("handled by run"),
    }
    Ok(())
}
