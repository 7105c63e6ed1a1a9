//! `ipa` — invariant generation and safety checking by predicate
//! abstraction with indexed predicates.

mod report;

use clap::{Args, Parser, Subcommand};
use ipa_core::abstraction::{
    generate_instantiations, InstantiationOptions, Scope, SubstitutionSet,
};
use ipa_core::logic::{parse_expr, ParseCtx};
use ipa_core::model::{parse_model, parse_substitutions, ModelError, ModelFile};
use ipa_core::oracle::{soundness_check, OracleConfig};
use ipa_core::reach::{
    check_inductive, check_property, reach, render_reach_dump, PropertyStatus, ReachOptions,
};
use ipa_core::sat::Backend;
use report::PropertyOutcome;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "ipa", version, about = "Indexed predicate abstraction verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the reachable abstract states of a model and check its
    /// properties.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Model file.
    model: String,
    /// Iteration budget for the fixpoint computation.
    #[arg(long, default_value_t = 64)]
    max_iters: u32,
    /// `auto` (derive substitutions from the predicates) or a file with
    /// one substitution per line, e.g. `x := i + 1; y := y`.
    #[arg(long, default_value = "auto")]
    subs: String,
    /// Instantiate all index symbols at once (full cross product).
    #[arg(long)]
    cross_product: bool,
    /// SAT backend: `internal` or `dimacs:<command>`.
    #[arg(long, default_value = "internal")]
    sat: String,
    /// Write the reachable-set dump here.
    #[arg(long)]
    dump_reach: Option<String>,
    /// Check a formula over the predicate names for inductiveness.
    #[arg(long)]
    check_inductive: Option<String>,
    /// Cross-check against bounded concrete reachability at this scope,
    /// written `lo..hi`.
    #[arg(long)]
    oracle_scope: Option<String>,
    /// Narrow an input or initial-value symbol for the oracle,
    /// `sym=lo..hi`; may repeat.
    #[arg(long)]
    oracle_input: Vec<String>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<String>,
    /// Reserved for solver randomization; the stock solver is fully
    /// deterministic and ignores it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => match run_verify(&args) {
            Ok(code) => code,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
    }
}

fn parse_range(s: &str) -> Result<Scope, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("bad range `{s}` (expected lo..hi)"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(Scope::new(lo, hi))
}

fn load_model(path: &str) -> Result<ModelFile, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    parse_model(&text).map_err(|e| match e {
        ModelError::Parse(p) => format!("{path}:{p}"),
        other => format!("{path}: {other}"),
    })
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, String> {
    let t0 = Instant::now();
    let mf = load_model(&args.model)?;
    let backend = Backend::from_config(&args.sat).map_err(|e| e.to_string())?;
    let _ = args.seed;

    let pi = if args.subs == "auto" {
        generate_instantiations(
            &mf.model,
            &mf.bank,
            InstantiationOptions {
                cross_product: args.cross_product,
            },
        )
    } else {
        let text = std::fs::read_to_string(&args.subs)
            .map_err(|e| format!("cannot read {}: {e}", args.subs))?;
        parse_substitutions(&text, &mf).map_err(|e| e.to_string())?
    };
    print_substitutions(&pi);

    let result = reach(
        &mf.model,
        &mf.bank,
        &pi,
        &backend,
        ReachOptions {
            max_iters: args.max_iters,
        },
    )
    .map_err(|e| e.to_string())?;

    let mut outcomes = Vec::new();
    for (name, psi) in &mf.properties {
        let verdict =
            check_property(&result.rho, psi, &mf.bank, 10).map_err(|e| e.to_string())?;
        outcomes.push(PropertyOutcome {
            name: name.clone(),
            status: verdict.status,
            witnesses: verdict.witnesses,
        });
    }

    print!(
        "{}",
        report::render_text(&args.model, &mf.bank, &result, &outcomes)
    );

    if let Some(path) = &args.dump_reach {
        std::fs::write(path, render_reach_dump(&result.rho, &mf.bank))
            .map_err(|e| format!("cannot write {path}: {e}"))?;
    }

    if let Some(formula) = &args.check_inductive {
        let ctx = ParseCtx::new(&mf.model.sig, &mf.consts);
        let chi = parse_expr(formula, ctx).map_err(|e| format!("--check-inductive: {e}"))?;
        let rep = check_inductive(&chi, &mf.model, &mf.bank, &pi, &backend)
            .map_err(|e| e.to_string())?;
        if rep.inductive {
            println!("{formula}: inductive under the substitution set");
        } else {
            let mut reasons = Vec::new();
            if !rep.base_failures.is_empty() {
                reasons.push(format!("base fails on {} cubes", rep.base_failures.len()));
            }
            if !rep.step_failures.is_empty() {
                reasons.push(format!("step fails on {} cubes", rep.step_failures.len()));
            }
            println!(
                "{formula}: not inductive under the substitution set: {}",
                reasons.join("; ")
            );
        }
    }

    let mut sound = true;
    if let Some(range) = &args.oracle_scope {
        let scope = parse_range(range)?;
        let mut cfg = OracleConfig::new(scope);
        if args.oracle_input.is_empty() {
            headroom_defaults(&mf, scope, &mut cfg);
        }
        for ov in &args.oracle_input {
            let (sym, r) = ov
                .split_once('=')
                .ok_or_else(|| format!("bad --oracle-input `{ov}` (expected sym=lo..hi)"))?;
            cfg = cfg.with_override(sym.trim(), parse_range(r)?);
        }
        let rep = soundness_check(&mf.model, &mf.bank, &result.rho, &cfg)
            .map_err(|e| e.to_string())?;
        if rep.violations.is_empty() {
            println!(
                "oracle: {} bounded-reachable states abstract inside the reachable set",
                rep.states_checked
            );
        } else {
            sound = false;
            println!(
                "oracle: {} VIOLATIONS over {} states (engine bug)",
                rep.violations.len(),
                rep.states_checked
            );
        }
    }

    if let Some(path) = &args.json {
        let doc = report::json_report(
            &args.model,
            &mf.bank,
            &result,
            &outcomes,
            t0.elapsed().as_secs_f64() * 1e3,
        );
        let text =
            serde_json::to_string_pretty(&doc).map_err(|e| format!("json encoding: {e}"))?;
        std::fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}"))?;
    }

    let all_hold = outcomes
        .iter()
        .all(|o| o.status == PropertyStatus::Holds);
    Ok(if all_hold && sound {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_substitutions(pi: &SubstitutionSet) {
    let rendered: Vec<String> = pi
        .subs
        .iter()
        .map(|sub| {
            sub.iter()
                .map(|(x, e)| format!("{x} := {e}"))
                .collect::<Vec<_>>()
                .join("; ")
        })
        .collect();
    println!("substitutions ({}): {}", pi.len(), rendered.join("  |  "));
}

/// Without explicit overrides, give input and initial-value symbols
/// enough headroom that +c terms in the model stay inside the scope.
fn headroom_defaults(mf: &ModelFile, scope: Scope, cfg: &mut OracleConfig) {
    use ipa_core::logic::{ExprNode, SymbolClass};
    fn offsets(e: &ipa_core::logic::Expr, lo: &mut i64, hi: &mut i64) {
        match e.node() {
            ExprNode::PlusConst(inner, k) => {
                let k: i64 = k.try_into().unwrap_or(0);
                *lo = (*lo).min(k);
                *hi = (*hi).max(k);
                offsets(inner, lo, hi);
            }
            ExprNode::Not(a) => offsets(a, lo, hi),
            ExprNode::And(cs) | ExprNode::Or(cs) => cs.iter().for_each(|c| offsets(c, lo, hi)),
            ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => {
                offsets(l, lo, hi);
                offsets(r, lo, hi);
            }
            ExprNode::Ite(c, t, f) => {
                offsets(c, lo, hi);
                offsets(t, lo, hi);
                offsets(f, lo, hi);
            }
            ExprNode::FuncApply(g, args) | ExprNode::PredApply(g, args) => {
                offsets(g, lo, hi);
                args.iter().for_each(|a| offsets(a, lo, hi));
            }
            ExprNode::LambdaBool(_, b) | ExprNode::LambdaInt(_, b) => offsets(b, lo, hi),
            _ => {}
        }
    }
    let mut min_off = 0i64;
    let mut max_off = 0i64;
    for e in mf.model.init.values().chain(mf.model.next.values()) {
        offsets(e, &mut min_off, &mut max_off);
    }
    let lo = scope.lo - min_off;
    let hi = scope.hi - max_off;
    if lo > scope.lo || hi < scope.hi {
        let narrowed = Scope::new(lo.min(hi), hi.max(lo));
        for sym in mf
            .model
            .sig
            .symbols_in(SymbolClass::Input)
            .into_iter()
            .chain(mf.model.sig.symbols_in(SymbolClass::Init))
        {
            if mf.model.sig.sort_of(&sym) == Some(ipa_core::logic::Sort::Int) {
                cfg.overrides.insert(sym, narrowed);
            }
        }
    }
}
