//! `deckit`: check decorated theories, decide equations in the finite
//! models, verify derivations, and validate the rule catalogs.
//!
//! Exit codes: 0 all checks pass; 1 a check or verification failed;
//! 2 parse/type/formation error; 3 resource cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use deckit_core::calculus::{check_formation, infer_decoration, typecheck};
use deckit_core::error::ModelError;
use deckit_core::exc::{ExcEnv, ExcVerdict};
use deckit_core::kernel::rules::rule_catalog;
use deckit_core::kernel::{check_derivation, node_path_display, Verdict};
use deckit_core::profile::ProfileName;
use deckit_core::soundness::{check_rule_sound, Budget, SoundnessError};
use deckit_core::st::{StEnv, StVerdict};
use deckit_core::syntax::{parse_derivation, parse_eval_input_str, parse_term_str, parse_theory};
use deckit_core::term::Equation;
use deckit_core::theory::{EffectSide, EvalInput, Expectation, Theory};
use deckit_core::value::Point;
use deckit_core::{DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES};

#[derive(Parser)]
#[command(name = "deckit", version, about = "Decorated equational logics for exceptions and state")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a theory file and typecheck and formation-check everything in it.
    Check {
        file: PathBuf,
    },
    /// Run all check statements of a theory and compare with expectations.
    Verify {
        file: PathBuf,
        /// Restrict to one check: a 1-based index or an equation substring.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: bool,
        /// Print elapsed time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate a term on one input.
    Eval {
        file: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long)]
        input: String,
        /// State literal for state-sided theories, e.g. `{X=0, Y=u}`.
        #[arg(long)]
        state: Option<String>,
    },
    /// Check a derivation file against a theory.
    Prove {
        file: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sample rule instantiations and validate them in the finite model.
    Soundness {
        file: PathBuf,
        /// `all` or one rule name.
        #[arg(long, default_value = "all")]
        rules: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Print the rule catalog of a logic profile.
    Rules {
        #[arg(long)]
        logic: String,
        #[arg(long)]
        json: bool,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_STATIC_ERROR: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Check { file } => cmd_check(&file),
        Cmd::Verify { file, only, json, timing } => cmd_verify(&file, only.as_deref(), json, timing),
        Cmd::Eval { file, term, input, state } => cmd_eval(&file, &term, &input, state.as_deref()),
        Cmd::Prove { file, proof, json } => cmd_prove(&file, &proof, json),
        Cmd::Soundness { file, rules, samples, seed, json, timing } => {
            cmd_soundness(&file, &rules, samples, seed, json, timing)
        }
        Cmd::Rules { logic, json } => cmd_rules(&logic, json),
    };
    ExitCode::from(code)
}

fn max_carrier() -> usize {
    std::env::var("DECKIT_MAX_CARRIER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_CARRIER)
}

fn resource_code(e: &ModelError) -> u8 {
    match e {
        ModelError::CarrierTooLarge { .. }
        | ModelError::StateSpaceTooLarge { .. }
        | ModelError::EnumerationTooLarge { .. } => EXIT_RESOURCE,
        _ => EXIT_STATIC_ERROR,
    }
}

fn load_theory(file: &Path) -> Result<Theory, u8> {
    let text = std::fs::read_to_string(file).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", file.display());
        EXIT_STATIC_ERROR
    })?;
    parse_theory(&text).map_err(|e| {
        eprintln!("error: {}:{e}", file.display());
        EXIT_STATIC_ERROR
    })
}

/// The model environment for a theory, by its declared side.
enum Env<'t> {
    Exc(ExcEnv<'t>),
    St(StEnv<'t>),
}

impl<'t> Env<'t> {
    fn new(theory: &'t Theory) -> Result<Env<'t>, ModelError> {
        match theory.side {
            EffectSide::States => {
                Ok(Env::St(StEnv::new(theory, max_carrier(), DEFAULT_MAX_STATES)?))
            }
            _ => Ok(Env::Exc(ExcEnv::new(theory, max_carrier())?)),
        }
    }

    /// `Ok(None)` when the equation holds; otherwise the counterexample
    /// as `(input, lhs, rhs)` strings.
    fn decide(&self, eq: &Equation) -> Result<Option<(String, String, String)>, ModelError> {
        match self {
            Env::Exc(env) => Ok(match env.decide(eq)? {
                ExcVerdict::Holds => None,
                ExcVerdict::Fails(c) => {
                    Some((c.input.to_string(), c.lhs.to_string(), c.rhs.to_string()))
                }
            }),
            Env::St(env) => Ok(match env.decide(eq)? {
                StVerdict::Holds => None,
                StVerdict::Fails(c) => Some((
                    format!("({}, {})", c.input.0, c.input.1.display(env)),
                    format!("({}, {})", c.lhs.0, c.lhs.1.display(env)),
                    format!("({}, {})", c.rhs.0, c.rhs.1.display(env)),
                )),
            }),
        }
    }

    fn eval_stmt(&self, term: &deckit_core::term::Term, input: &EvalInput) -> Result<String, ModelError> {
        match self {
            Env::Exc(env) => {
                let den = env.eval(term)?;
                let point = match input {
                    EvalInput::Plain(v) | EvalInput::Ord(v) => Point::Ord(v.clone()),
                    EvalInput::Packet(n, v) => {
                        Point::Exc(deckit_core::value::Packet::new(n, v.clone()))
                    }
                    EvalInput::WithState(..) => {
                        return Err(ModelError::WrongSide { expected: "state".to_string() })
                    }
                };
                Ok(env.apply(&den, &point)?.to_string())
            }
            Env::St(env) => {
                let den = env.eval(term)?;
                let (v, lit) = match input {
                    EvalInput::WithState(v, lit) => (v.clone(), lit.clone()),
                    _ => {
                        return Err(ModelError::WrongSide { expected: "exception".to_string() })
                    }
                };
                let s = env.resolve_state(&lit)?;
                let (out_v, out_s) = env.apply(&den, &v, &s)?;
                Ok(format!("({out_v}, {})", out_s.display(env)))
            }
        }
    }
}

/// Typechecks and formation-checks a term, reporting diagnostics.
fn static_check_term(
    what: &str,
    term: &deckit_core::term::Term,
    th: &Theory,
) -> Result<(), u8> {
    if let Err(e) = typecheck(term, th) {
        eprintln!("error: {what}: {e}");
        return Err(EXIT_STATIC_ERROR);
    }
    match check_formation(term, th.profile, th) {
        Ok(violations) if violations.is_empty() => Ok(()),
        Ok(violations) => {
            for v in violations {
                eprintln!("error: {what}: formation violation: {v}");
            }
            Err(EXIT_STATIC_ERROR)
        }
        Err(e) => {
            eprintln!("error: {what}: {e}");
            Err(EXIT_STATIC_ERROR)
        }
    }
}

fn static_check_eq(what: &str, eq: &Equation, th: &Theory) -> Result<(), u8> {
    static_check_term(what, &eq.lhs, th)?;
    static_check_term(what, &eq.rhs, th)?;
    let (ls, lt) = typecheck(&eq.lhs, th).expect("checked");
    let (rs, rt) = typecheck(&eq.rhs, th).expect("checked");
    if ls != rs || lt != rt {
        eprintln!("error: {what}: sides have different types: {ls} -> {lt} vs {rs} -> {rt}");
        return Err(EXIT_STATIC_ERROR);
    }
    Ok(())
}

fn cmd_check(file: &Path) -> u8 {
    let th = match load_theory(file) {
        Ok(th) => th,
        Err(code) => return code,
    };
    // building the environment validates the declared operation tables
    if let Err(e) = Env::new(&th) {
        eprintln!("error: {e}");
        return resource_code(&e);
    }
    for (i, ax) in th.axioms.iter().enumerate() {
        if let Err(code) = static_check_eq(&format!("axiom {} ({})", i + 1, ax.name), &ax.eq, &th)
        {
            return code;
        }
    }
    for (i, c) in th.checks.iter().enumerate() {
        if let Err(code) = static_check_eq(&format!("check {}", i + 1), &c.eq, &th) {
            return code;
        }
    }
    for (i, e) in th.evals.iter().enumerate() {
        if let Err(code) = static_check_term(&format!("eval {}", i + 1), &e.term, &th) {
            return code;
        }
    }
    println!(
        "{}: theory `{}` ({}, {}): {} types, {} effect names, {} ops, {} axioms, {} checks, {} evals: OK",
        file.display(),
        th.name,
        th.side,
        th.profile,
        th.base_types.len(),
        th.effects.len(),
        th.ops.len(),
        th.axioms.len(),
        th.checks.len(),
        th.evals.len()
    );
    EXIT_OK
}

fn cmd_verify(file: &Path, only: Option<&str>, json: bool, timing: bool) -> u8 {
    let started = Instant::now();
    let th = match load_theory(file) {
        Ok(th) => th,
        Err(code) => return code,
    };
    let env = match Env::new(&th) {
        Ok(env) => env,
        Err(e) => {
            eprintln!("error: {e}");
            return resource_code(&e);
        }
    };
    let selected = |i: usize, eq: &Equation| -> bool {
        match only {
            None => true,
            Some(sel) => match sel.parse::<usize>() {
                Ok(n) => n == i + 1,
                Err(_) => eq.to_string().contains(sel),
            },
        }
    };
    let mut results = Vec::new();
    let mut failed = 0usize;
    for (i, c) in th.checks.iter().enumerate() {
        if !selected(i, &c.eq) {
            continue;
        }
        if let Err(code) = static_check_eq(&format!("check {}", i + 1), &c.eq, &th) {
            return code;
        }
        let verdict = match env.decide(&c.eq) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: check {}: {e}", i + 1);
                return resource_code(&e);
            }
        };
        let holds = verdict.is_none();
        let ok = holds == (c.expect == Expectation::Holds);
        if !ok {
            failed += 1;
        }
        results.push((i, c, holds, ok, verdict));
    }
    let mut evals = Vec::new();
    if only.is_none() {
        for (i, e) in th.evals.iter().enumerate() {
            if let Err(code) = static_check_term(&format!("eval {}", i + 1), &e.term, &th) {
                return code;
            }
            match env.eval_stmt(&e.term, &e.input) {
                Ok(out) => evals.push((e, out)),
                Err(err) => {
                    eprintln!("error: eval {}: {err}", i + 1);
                    return resource_code(&err);
                }
            }
        }
    }
    if json {
        let doc = json!({
            "file": file.display().to_string(),
            "theory": th.name,
            "profile": th.profile.to_string(),
            "checks": results.iter().map(|(i, c, holds, ok, cex)| json!({
                "index": i + 1,
                "equation": c.eq.to_string(),
                "strength": match c.eq.strength {
                    deckit_core::term::Strength::Strong => "strong",
                    deckit_core::term::Strength::Weak => "weak",
                    deckit_core::term::Strength::Order => "order",
                },
                "expected": c.expect.to_string(),
                "actual": if *holds { "holds" } else { "fails" },
                "ok": ok,
                "counterexample": cex.as_ref().map(|(input, lhs, rhs)| json!({
                    "input": input, "lhs": lhs, "rhs": rhs,
                })),
            })).collect::<Vec<_>>(),
            "evals": evals.iter().map(|(e, out)| json!({
                "term": e.term.to_string(),
                "input": render_input(&e.input),
                "output": out,
            })).collect::<Vec<_>>(),
            "passed": results.len() - failed,
            "failed": failed,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        for (i, c, holds, ok, cex) in &results {
            let actual = if *holds { "holds" } else { "fails" };
            let mark = if *ok { "ok" } else { "MISMATCH" };
            println!(
                "check {}: {} expect {} -> {} [{mark}]",
                i + 1,
                c.eq,
                c.expect,
                actual
            );
            if let Some((input, lhs, rhs)) = cex {
                println!("  counterexample ({}): input {input}: lhs {lhs}, rhs {rhs}", c.eq.strength);
            }
        }
        for (e, out) in &evals {
            println!("eval {} on {} -> {out}", e.term, render_input(&e.input));
        }
        println!(
            "{}: {} checks, {} mismatches",
            th.name,
            results.len(),
            failed
        );
        if timing {
            println!("elapsed: {:?}", started.elapsed());
        }
    }
    if failed > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn render_input(input: &EvalInput) -> String {
    match input {
        EvalInput::Plain(v) => v.to_string(),
        EvalInput::Ord(v) => format!("ok {v}"),
        EvalInput::Packet(n, v) => format!("exn {n} {v}"),
        EvalInput::WithState(v, lit) => {
            let cells: Vec<String> = lit.iter().map(|(n, v)| format!("{n}={v}")).collect();
            format!("({v}, {{{}}})", cells.join(", "))
        }
    }
}

fn cmd_eval(file: &Path, term: &str, input: &str, state: Option<&str>) -> u8 {
    let th = match load_theory(file) {
        Ok(th) => th,
        Err(code) => return code,
    };
    let term = match parse_term_str(term, &th) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: --term: {e}");
            return EXIT_STATIC_ERROR;
        }
    };
    if let Err(code) = static_check_term("--term", &term, &th) {
        return code;
    }
    let mut parsed_input = match parse_eval_input_str(input) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: --input: {e}");
            return EXIT_STATIC_ERROR;
        }
    };
    if let Some(state) = state {
        let lit = match parse_eval_input_str(&format!("((), {state})")) {
            Ok(EvalInput::WithState(_, lit)) => lit,
            _ => {
                eprintln!("error: --state must be a literal like {{X=0}}");
                return EXIT_STATIC_ERROR;
            }
        };
        let v = match parsed_input {
            EvalInput::Plain(v) | EvalInput::Ord(v) => v,
            other => {
                eprintln!("error: --state does not combine with input {}", render_input(&other));
                return EXIT_STATIC_ERROR;
            }
        };
        parsed_input = EvalInput::WithState(v, lit);
    }
    let env = match Env::new(&th) {
        Ok(env) => env,
        Err(e) => {
            eprintln!("error: {e}");
            return resource_code(&e);
        }
    };
    let deco = infer_decoration(&term, &th).expect("typechecked");
    match env.eval_stmt(&term, &parsed_input) {
        Ok(out) => {
            println!("{term} [deco {deco}] on {} -> {out}", render_input(&parsed_input));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            resource_code(&e)
        }
    }
}

fn cmd_prove(file: &Path, proof: &Path, json: bool) -> u8 {
    let th = match load_theory(file) {
        Ok(th) => th,
        Err(code) => return code,
    };
    let text = match std::fs::read_to_string(proof) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", proof.display());
            return EXIT_STATIC_ERROR;
        }
    };
    let d = match parse_derivation(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}:{e}", proof.display());
            return EXIT_STATIC_ERROR;
        }
    };
    match check_derivation(&d, &th) {
        Verdict::Accepted => {
            if json {
                let doc = json!({
                    "proof": proof.display().to_string(),
                    "theory": th.name,
                    "verdict": "accepted",
                    "nodes": d.node_count(),
                    "conclusion": d.conclusion.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                println!(
                    "accepted: {} node(s), concluding {}",
                    d.node_count(),
                    d.conclusion
                );
            }
            EXIT_OK
        }
        Verdict::Rejected { path, reason } => {
            if json {
                let doc = json!({
                    "proof": proof.display().to_string(),
                    "theory": th.name,
                    "verdict": "rejected",
                    "path": path,
                    "node": node_path_display(&path),
                    "reason": reason,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                println!("rejected at {}: {reason}", node_path_display(&path));
            }
            EXIT_CHECK_FAILED
        }
    }
}

fn cmd_soundness(
    file: &Path,
    rules: &str,
    samples: usize,
    seed: u64,
    json: bool,
    timing: bool,
) -> u8 {
    let started = Instant::now();
    let th = match load_theory(file) {
        Ok(th) => th,
        Err(code) => return code,
    };
    let budget = Budget { samples, seed, max_depth: 5 };
    let names: Vec<String> = if rules == "all" {
        rule_catalog(th.profile).iter().map(|r| r.name.to_string()).collect()
    } else {
        vec![rules.to_string()]
    };
    let mut reports = Vec::new();
    let mut exhausted: Vec<String> = Vec::new();
    let mut unsound = 0usize;
    for name in &names {
        match check_rule_sound(name, &th, &budget) {
            Ok(report) => {
                if !report.sound() {
                    unsound += 1;
                }
                reports.push(report);
            }
            Err(SoundnessError::UnknownRule(name, profile)) => {
                eprintln!("error: unknown rule `{name}` in profile {profile}");
                return EXIT_STATIC_ERROR;
            }
            // reported, not fatal: the theory cannot instantiate the schema
            // (e.g. a two-name axiom over a single declared effect name)
            Err(SoundnessError::BudgetExhausted(name)) => exhausted.push(name),
            Err(SoundnessError::Model(e)) => {
                eprintln!("error: {e}");
                return resource_code(&e);
            }
        }
    }
    if json {
        let doc = json!({
            "file": file.display().to_string(),
            "theory": th.name,
            "profile": th.profile.to_string(),
            "samples": samples,
            "seed": seed,
            "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "budget_exhausted": exhausted,
            "unsound": unsound,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        for r in &reports {
            println!("{}", r.render_text());
        }
        for name in &exhausted {
            println!("rule {name:<18} [{}]: no instantiations generated (budget exhausted)", th.profile);
        }
        println!(
            "{}: {} rules checked, {} not instantiable, {} unsound",
            th.profile,
            reports.len(),
            exhausted.len(),
            unsound
        );
        if timing {
            println!("elapsed: {:?}", started.elapsed());
        }
    }
    if unsound > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn cmd_rules(logic: &str, json: bool) -> u8 {
    let Some(profile) = ProfileName::parse(logic) else {
        eprintln!("error: unknown logic profile `{logic}` (EQ, MON, COMON, EXC, EXC_PLUS, ST, ST_PLUS)");
        return EXIT_STATIC_ERROR;
    };
    let catalog = rule_catalog(profile);
    if json {
        let doc = json!({
            "profile": profile.to_string(),
            "count": catalog.len(),
            "rules": catalog.iter().map(|r| json!({
                "name": r.name,
                "profiles": r.profiles.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "premises": r.premises.len(),
                "conclusions": r.conclusions.len(),
                "schema": r.render(),
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{profile}: {} rules", catalog.len());
        for r in &catalog {
            println!("{}", r.render());
        }
    }
    EXIT_OK
}
