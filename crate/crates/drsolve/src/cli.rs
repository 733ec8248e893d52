//! Command-line dispatch.
//!
//! Verdicts go to stdout as single-line JSON; certificates go to files when
//! an output path is given (and are embedded in the stdout JSON otherwise);
//! diagnostics go to stderr.  Exit codes: 0 — completed with a verdict,
//! 1 — usage or input error, 2 — an internal certificate failed to
//! re-check.
//!
//! Environment: `DRSOLVE_SEED` overrides the sampling seed,
//! `DRSOLVE_FORM_CAP` overrides the form enumeration/printing cap.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use drs_core::decide::{
    decide_eq, decide_sat, dimension_set, split, zero_dim_witness, DecideError, Verdict,
    ZeroDimOutcome, ZeroDimReason,
};
use drs_core::forms::{count_forms, FormContext};
use drs_core::oracle::{
    check_axioms, enumerate_units, gam_eval, gam_to_unit, oracle_sat, AxiomCheckOptions,
    OracleBounds,
};
use drs_core::parser::{parse_formula, parse_term};
use drs_core::term::{formula_to_term, Term};
use drs_core::unit::evaluate;

use crate::dot::witness_dot;
use crate::json::{
    axiom_report_json, ev_json, form_json, gam_from_json, unit_json, verdict_json,
    witness_json, GamModelJson,
};

/// Result of one dispatch: exit code plus captured streams.
#[derive(Debug)]
pub struct Dispatch {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "drsolve",
    about = "Decide terms over relativized diagonal-free set algebras and \
             produce checkable certificates",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonOpts {
    /// Dimension override (defaults to the effective dimension of the input).
    #[arg(long)]
    dim: Option<u32>,
    /// Emit wall-clock milliseconds in stats (off by default so equal runs
    /// are byte-identical).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability, validity, or an equation.
    Decide {
        /// Term to test for satisfiability.
        #[arg(long, conflicts_with_all = ["valid", "eq"], allow_hyphen_values = true)]
        sat: Option<String>,
        /// Term to test for validity (equality with 1).
        #[arg(long, conflicts_with = "eq", allow_hyphen_values = true)]
        valid: Option<String>,
        /// Two terms to test for equality.
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        eq: Option<Vec<String>>,
        /// Include the exhausted label trace in UNSAT verdicts.
        #[arg(long)]
        trace: bool,
        /// Write the certificate to this file instead of embedding it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build and emit the witness model of a satisfiable term.
    Witness {
        #[arg(allow_hyphen_values = true)]
        term: String,
        /// Write the witness JSON here (stdout otherwise).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also write a Graphviz rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Split a satisfiable term into two disjoint satisfiable parts below it.
    Split {
        #[arg(allow_hyphen_values = true)]
        term: String,
        /// Write the pair to this file as well.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Refute zero-dimensionality of a term strictly between 0 and 1.
    Zerodim {
        #[arg(allow_hyphen_values = true)]
        term: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Count or enumerate normal forms.
    Forms {
        /// Count forms: SIZE_X N K.
        #[arg(long, num_args = 3, value_names = ["SIZE_X", "N", "K"])]
        count: Option<Vec<String>>,
        /// Enumerate forms: VARS (comma separated, possibly empty) N K.
        #[arg(long, num_args = 3, value_names = ["VARS", "N", "K"])]
        enumerate: Option<Vec<String>>,
    },
    /// Brute-force reference checks.
    Oracle {
        /// Check the operator axioms on all units up to --max-base.
        #[arg(long)]
        check_axioms: bool,
        /// Search for a model of the term within bounds.
        #[arg(long, allow_hyphen_values = true)]
        sat: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_base: u32,
        #[arg(long, default_value_t = 5)]
        max_v: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Formula-level operations on general assignment models.
    Gam {
        /// Decide validity of a formula via its term translation.
        #[arg(long, conflicts_with = "eval", allow_hyphen_values = true)]
        valid: Option<String>,
        /// Evaluate a formula on a model file: MODEL.json FORMULA.
        #[arg(long, num_args = 2, value_names = ["MODEL", "FORMULA"], allow_hyphen_values = true)]
        eval: Option<Vec<String>>,
    },
}

enum AppError {
    Usage(String),
    Internal(String),
}

impl From<DecideError> for AppError {
    fn from(e: DecideError) -> AppError {
        match e {
            DecideError::CertificateFailure(_) => AppError::Internal(e.to_string()),
            other => AppError::Usage(other.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Usage(e.to_string())
}

fn env_seed() -> u64 {
    std::env::var("DRSOLVE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed_0001)
}

fn env_form_cap() -> Option<u64> {
    std::env::var("DRSOLVE_FORM_CAP").ok().and_then(|s| s.parse().ok())
}

fn context_for(terms: &[&Term], dim: Option<u32>) -> Result<FormContext, AppError> {
    let mut ctx = FormContext::for_terms(terms, dim.unwrap_or(2)).map_err(usage)?;
    if let Some(cap) = env_form_cap() {
        ctx.set_form_cap(cap);
    }
    Ok(ctx)
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), AppError> {
    std::fs::write(path, contents)
        .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn compact<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serialization is infallible")
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization is infallible")
}

/// Run one command line.  The first element of `args` is the program name.
pub fn dispatch(args: &[String]) -> Dispatch {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            return if code == 0 {
                Dispatch { code, stdout: rendered, stderr: String::new() }
            } else {
                Dispatch { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    match run(cli) {
        Ok(stdout) => Dispatch { code: 0, stdout, stderr: String::new() },
        Err(AppError::Usage(msg)) => {
            Dispatch { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
        Err(AppError::Internal(msg)) => Dispatch {
            code: 2,
            stdout: String::new(),
            stderr: format!("internal error: {msg}\n"),
        },
    }
}

fn run(cli: Cli) -> Result<String, AppError> {
    match cli.command {
        Command::Decide { sat, valid, eq, trace, out, common } => {
            decide_cmd(sat, valid, eq, trace, out, common)
        }
        Command::Witness { term, json, dot, common } => witness_cmd(term, json, dot, common),
        Command::Split { term, out, common } => split_cmd(term, out, common),
        Command::Zerodim { term, common } => zerodim_cmd(term, common),
        Command::Forms { count, enumerate } => forms_cmd(count, enumerate),
        Command::Oracle { check_axioms, sat, max_base, max_v, seed, common } => {
            oracle_cmd(check_axioms, sat, max_base, max_v, seed, common)
        }
        Command::Gam { valid, eval } => gam_cmd(valid, eval),
    }
}

fn decide_cmd(
    sat: Option<String>,
    valid: Option<String>,
    eq: Option<Vec<String>>,
    trace: bool,
    out: Option<PathBuf>,
    common: CommonOpts,
) -> Result<String, AppError> {
    let started = Instant::now();
    let (verdict, ctx) = if let Some(text) = sat {
        let t = parse_term(&text).map_err(usage)?;
        let mut ctx = context_for(&[&t], common.dim)?;
        (decide_sat(&mut ctx, &t)?, ctx)
    } else if let Some(text) = valid {
        let t = parse_term(&text).map_err(usage)?;
        let mut ctx = context_for(&[&t], common.dim)?;
        (decide_eq(&mut ctx, &t, &Term::one())?, ctx)
    } else if let Some(pair) = eq {
        let s = parse_term(&pair[0]).map_err(usage)?;
        let t = parse_term(&pair[1]).map_err(usage)?;
        let mut ctx = context_for(&[&s, &t], common.dim)?;
        (decide_eq(&mut ctx, &s, &t)?, ctx)
    } else {
        return Err(AppError::Usage(
            "decide needs one of --sat, --valid, or --eq".to_string(),
        ));
    };
    let millis = common.timings.then(|| started.elapsed().as_millis());
    let mut body = verdict_json(&ctx, &verdict, trace, millis);
    if let Some(path) = out {
        if let Some(cert) = body.certificate.take() {
            write_file(&path, &pretty(&cert))?;
        }
    }
    Ok(compact(&body) + "\n")
}

fn witness_cmd(
    term: String,
    json_path: Option<PathBuf>,
    dot_path: Option<PathBuf>,
    common: CommonOpts,
) -> Result<String, AppError> {
    let t = parse_term(&term).map_err(usage)?;
    let mut ctx = context_for(&[&t], common.dim)?;
    match decide_sat(&mut ctx, &t)? {
        Verdict::Sat { model, .. } => {
            let wj = witness_json(&ctx, &model);
            if let Some(path) = &dot_path {
                write_file(path, &witness_dot(&model))?;
            }
            if let Some(path) = &json_path {
                write_file(path, &pretty(&wj))?;
                Ok(compact(&serde_json::json!({
                    "verdict": "SAT",
                    "written": path.display().to_string(),
                })) + "\n")
            } else {
                Ok(compact(&serde_json::json!({ "verdict": "SAT", "witness": wj })) + "\n")
            }
        }
        Verdict::Unsat { .. } => {
            Ok(compact(&serde_json::json!({ "verdict": "UNSAT" })) + "\n")
        }
        _ => unreachable!("decide_sat yields Sat/Unsat"),
    }
}

fn split_cmd(
    term: String,
    out: Option<PathBuf>,
    common: CommonOpts,
) -> Result<String, AppError> {
    let t = parse_term(&term).map_err(usage)?;
    let mut ctx = context_for(&[&t], common.dim)?;
    let (a, b) = split(&mut ctx, &t)?;
    let body = serde_json::json!({
        "left": a.to_string(),
        "right": b.to_string(),
    });
    if let Some(path) = out {
        write_file(&path, &pretty(&body))?;
    }
    Ok(compact(&body) + "\n")
}

fn zerodim_cmd(term: String, common: CommonOpts) -> Result<String, AppError> {
    let t = parse_term(&term).map_err(usage)?;
    let mut ctx = context_for(&[&t], common.dim)?;
    let dims = dimension_set(&mut ctx, &t)?;
    match zero_dim_witness(&mut ctx, &t)? {
        ZeroDimOutcome::ZeroDimensional(reason) => Ok(compact(&serde_json::json!({
            "verdict": "ZERO_DIMENSIONAL",
            "reason": match reason {
                ZeroDimReason::IsZero => "is-zero",
                ZeroDimReason::IsOne => "is-one",
            },
            "dimensionSet": dims,
        })) + "\n"),
        ZeroDimOutcome::Refuted { indices, model, point } => {
            Ok(compact(&serde_json::json!({
                "verdict": "NOT_ZERO_DIMENSIONAL",
                "indices": indices,
                "point": point,
                "dimensionSet": dims,
                "witness": witness_json(&ctx, &model),
            })) + "\n")
        }
    }
}

fn forms_cmd(
    count: Option<Vec<String>>,
    enumerate: Option<Vec<String>>,
) -> Result<String, AppError> {
    if let Some(args) = count {
        let size_x: u32 = args[0].parse().map_err(usage)?;
        let n: u32 = args[1].parse().map_err(usage)?;
        let k: u32 = args[2].parse().map_err(usage)?;
        let c = count_forms(size_x, n, k).map_err(usage)?;
        return Ok(compact(&serde_json::json!({
            "sizeX": size_x, "n": n, "k": k,
            "count": c.to_string(),
        })) + "\n");
    }
    if let Some(args) = enumerate {
        let vars: Vec<&str> =
            args[0].split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let n: u32 = args[1].parse().map_err(usage)?;
        let k: u32 = args[2].parse().map_err(usage)?;
        let mut ctx = FormContext::new(&vars, n).map_err(usage)?;
        if let Some(cap) = env_form_cap() {
            ctx.set_form_cap(cap);
        }
        let ids = ctx.enumerate_forms(k).map_err(usage)?;
        let consistent: Vec<bool> = ids.iter().map(|&f| ctx.is_consistent(f)).collect();
        let table: BTreeMap<String, _> =
            ids.iter().map(|&f| (f.to_string(), form_json(&ctx, f))).collect();
        return Ok(compact(&serde_json::json!({
            "vars": ctx.vars(), "n": n, "k": k,
            "count": ids.len(),
            "formIds": ids,
            "consistent": consistent,
            "forms": table,
        })) + "\n");
    }
    Err(AppError::Usage("forms needs --count or --enumerate".to_string()))
}

fn oracle_cmd(
    do_axioms: bool,
    sat: Option<String>,
    max_base: u32,
    max_v: usize,
    seed: Option<u64>,
    common: CommonOpts,
) -> Result<String, AppError> {
    let seed = seed.unwrap_or_else(env_seed);
    if do_axioms {
        let n = common.dim.unwrap_or(2);
        let opts = AxiomCheckOptions { seed, ..AxiomCheckOptions::default() };
        let mut checks = Vec::new();
        let mut units = 0usize;
        for unit in enumerate_units(max_base, n).map_err(usage)? {
            let report = check_axioms(&unit, &opts);
            checks.extend(axiom_report_json(units, &report));
            units += 1;
        }
        let passed = checks.iter().all(|c| c.failures.is_empty());
        return Ok(compact(&serde_json::json!({
            "unitsChecked": units,
            "passed": passed,
            "checks": checks,
        })) + "\n");
    }
    if let Some(text) = sat {
        let t = parse_term(&text).map_err(usage)?;
        let bounds = OracleBounds {
            max_base,
            max_points: max_v,
            seed,
            ..OracleBounds::default()
        };
        let outcome = oracle_sat(&t, &bounds).map_err(usage)?;
        return Ok(match outcome.model {
            Some((unit, ev)) => compact(&serde_json::json!({
                "verdict": "SAT",
                "unit": unit_json(&unit),
                "ev": ev_json(&ev),
                "exhaustive": outcome.exhaustive,
                "unitsChecked": outcome.units_checked,
                "evaluations": outcome.evaluations,
            })) + "\n",
            None => compact(&serde_json::json!({
                "verdict": "NONE",
                "exhaustive": outcome.exhaustive,
                "unitsChecked": outcome.units_checked,
                "evaluations": outcome.evaluations,
            })) + "\n",
        });
    }
    Err(AppError::Usage("oracle needs --check-axioms or --sat".to_string()))
}

fn gam_cmd(valid: Option<String>, eval: Option<Vec<String>>) -> Result<String, AppError> {
    if let Some(text) = valid {
        let f = parse_formula(&text).map_err(usage)?;
        let t = formula_to_term(&f);
        let mut ctx = context_for(&[&t], None)?;
        let verdict = decide_eq(&mut ctx, &t, &Term::one())?;
        let body = verdict_json(&ctx, &verdict, false, None);
        return Ok(compact(&body) + "\n");
    }
    if let Some(args) = eval {
        let raw = std::fs::read_to_string(&args[0])
            .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", args[0])))?;
        let mj: GamModelJson = serde_json::from_str(&raw).map_err(usage)?;
        let model = gam_from_json(&mj).map_err(usage)?;
        let f = parse_formula(&args[1]).map_err(usage)?;
        let mut results = Vec::new();
        for s in model.assignments() {
            let holds = gam_eval(&model, &f, s).map_err(usage)?;
            let named: Vec<&str> =
                s.iter().map(|&d| model.domain()[d as usize].as_str()).collect();
            results.push(serde_json::json!({ "assignment": named, "holds": holds }));
        }
        // cross-check through the term translation
        let (unit, ev) = gam_to_unit(&model, &f).map_err(usage)?;
        let sem = evaluate(&unit, &ev, &formula_to_term(&f))
            .map_err(|e| AppError::Internal(e.to_string()))?;
        for (p, r) in results.iter().enumerate() {
            let direct = r["holds"].as_bool().unwrap();
            if direct != sem.contains(p as u32) {
                return Err(AppError::Internal(
                    "formula evaluation disagrees with its term translation".to_string(),
                ));
            }
        }
        return Ok(compact(&serde_json::json!({ "results": results })) + "\n");
    }
    Err(AppError::Usage("gam needs --valid or --eval".to_string()))
}
