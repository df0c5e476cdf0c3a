use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use nosol_core::constructions::{self, ThreeVarConfig, ThreeVarOutcome};
use nosol_core::oracle::{distinct_lift_pin, find_with_stats};
use nosol_core::rate::{alpha_optimal, c_epsilon, random_tuple_sweep, rate_report, Sampling};
use nosol_core::search::{auto_grid, grid_search, ProgressEvent, SearchConfig, SearchMode};
use nosol_core::{Certificate, Equation, Error, Mode, SolutionQuery, Strategy};

use crate::io::{self, malformed, Run};
use crate::{exit, Cli, Command, GridArg, Recipe, StrategyArg};

pub fn run(cli: Cli) -> Result<i32> {
    let mut run = Run::new(cli.budget, cli.manifest.clone());
    run.config = serde_json::to_value(&cli.command)?;
    let code = match &cli.command {
        Command::Verify(a) => verify(a, &mut run)?,
        Command::Construct(a) => construct(a, &mut run)?,
        Command::Search(a) => search(a, &mut run)?,
        Command::Sweep(a) => sweep(a, &mut run)?,
        Command::Alpha(a) => alpha(a, &mut run)?,
        Command::Rate(a) => rate(a)?,
    };
    run.finish(code)?;
    Ok(code)
}

fn print(value: &impl Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn mode(distinct: bool) -> Mode {
    if distinct {
        Mode::Distinct
    } else {
        Mode::All
    }
}

fn verify(a: &crate::VerifyArgs, run: &mut Run) -> Result<i32> {
    let (eq, set, mode, cert) = if let Some(path) = &a.cert {
        let cert = io::read_certificate(path)?;
        let m = if a.distinct { Mode::Distinct } else { cert.mode() };
        (cert.equation().clone(), cert.digits().to_vec(), m, Some(cert))
    } else {
        let eq = io::equation(a.equation.sym.as_deref(), a.equation.eq.as_deref())?;
        let set = match (&a.set, &a.set_file) {
            (Some(s), None) => io::parse_list(s)?,
            (None, Some(p)) => io::read_set_file(p)?,
            _ => return Err(malformed("give one of --set, --set-file or --cert")),
        };
        (eq, set, mode(a.distinct), None)
    };
    if let Some(c) = &cert {
        let ds = c.digit_set();
        if !ds.no_carry_holds() {
            return Err(Error::Carry {
                s: ds.equation().side_sum(),
                max_digit: ds.max_digit(),
                base: ds.base(),
            }
            .into());
        }
    }
    let strategy = match a.strategy {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Dfs => Strategy::Dfs,
        StrategyArg::Mitm => Strategy::MeetInMiddle,
        StrategyArg::Naive => Strategy::Naive,
    };
    let q = SolutionQuery::new(eq.clone(), set.clone())?
        .with_mode(mode)
        .with_budget(run.budget)
        .with_strategy(strategy)
        .with_parallel(a.parallel);
    let mut report = json!({
        "schema": 1,
        "equation": eq.coeffs(),
        "set": q.ground_set(),
        "mode": mode,
    });
    let outcome = match find_with_stats(&q) {
        Ok(o) => o,
        Err(Error::BudgetExhausted { budget }) => {
            report["result"] = json!("budget_exhausted");
            report["budget"] = json!(budget);
            run.nodes_used = budget;
            print(&report)?;
            return Ok(exit::BUDGET);
        }
        Err(e) => return Err(e.into()),
    };
    run.nodes_used = outcome.nodes;
    report["nodes"] = json!(outcome.nodes);
    report["strategy"] = json!(outcome.strategy);
    let code = match &outcome.witness {
        Some(w) => {
            report["result"] = json!("witness");
            report["witness"] = json!(w.assignment);
            exit::WITNESS
        }
        None if mode == Mode::Distinct && cert.is_some() => {
            // The lift is only sound with a pinned pair of positions.
            match distinct_lift_pin(&eq, &set, run.budget)? {
                Some(pin) => {
                    report["result"] = json!("solution_free");
                    report["pin"] = json!([pin.0, pin.1]);
                    exit::CLEAN
                }
                None => {
                    report["result"] = json!("unpinned");
                    exit::WITNESS
                }
            }
        }
        None => {
            report["result"] = json!("solution_free");
            exit::CLEAN
        }
    };
    if let Some(c) = &cert {
        report["rate"] = json!(c.rate().decimal());
        report["base"] = json!(c.base());
    }
    print(&report)?;
    Ok(code)
}

fn summary(cert: &Certificate) -> Value {
    let r = cert.rate();
    json!({
        "schema": 1,
        "equation": cert.equation().coeffs(),
        "base": cert.base(),
        "digits": cert.digits(),
        "mode": cert.mode(),
        "method": cert.method(),
        "rate": r.decimal(),
        "rate_logs": [r.num_log, r.den_log],
        "degenerate": cert.is_degenerate(),
    })
}

/// Largest lifted set echoed inline when no `--lifted-out` is given.
const INLINE_LIFT: u64 = 64;

fn emit_certificate(cert: &Certificate, out: &crate::OutputArgs, run: &mut Run, mut report: Value) -> Result<()> {
    match &out.out {
        Some(path) => {
            run.save_certificate(path, cert)?;
            report["certificate"] = json!(path);
        }
        None => report["certificate"] = serde_json::from_str(&cert.to_json())?,
    }
    if let Some(n) = out.n {
        let lifted = constructions::lift(cert, n)?;
        let size = lifted.count();
        report["lifted"] = json!({ "n": n, "size": size });
        if let Some(p) = &out.lifted_out {
            io::write_lines(p, lifted.iter())?;
            run.save_output(p);
            report["lifted"]["path"] = json!(p);
        } else if size <= INLINE_LIFT {
            report["lifted"]["set"] = json!(lifted.to_vec());
        }
    }
    print(&report)
}

fn construct(a: &crate::ConstructArgs, run: &mut Run) -> Result<i32> {
    let mut extra = json!({});
    let cert = match &a.recipe {
        Recipe::Geometric { m, k } => constructions::geometric_digits(*m, *k)?,
        Recipe::TwoVar { a, b } => constructions::two_var_digits(*a, *b)?,
        Recipe::CoprimePower { a, b, k } => constructions::coprime_power_digits(*a, *b, *k)?,
        Recipe::Spaced { a, s } => constructions::spaced_digits(&io::parse_list(a)?, *s)?,
        Recipe::Section5 { d } => constructions::section5_digits(*d)?,
        Recipe::DistinctVar { m } => constructions::distinct_var_digits(*m)?,
        Recipe::Thm3 { a, b, c, alpha, literal } => {
            let mut cfg = if *literal {
                ThreeVarConfig::literal()
            } else {
                ThreeVarConfig::default()
            };
            cfg.budget = run.budget;
            match constructions::theorem_three_pipeline(*a, *b, *c, *alpha, &cfg)? {
                ThreeVarOutcome::Certified(r) => {
                    extra = json!({
                        "case": r.case,
                        "dependency": r.dependency.map(|d| d.as_array()),
                        "alpha2": r.alpha2,
                        "guaranteed_window": r.guaranteed_window,
                    });
                    r.certificate
                }
                plan @ ThreeVarOutcome::Unverified(_) => {
                    print(&json!({ "schema": 1, "status": "unverified", "plan": plan }))?;
                    return Ok(exit::BEST_EFFORT);
                }
            }
        }
        Recipe::Shift { cert, i, j } => {
            let src = io::read_certificate(cert)?;
            let t = constructions::shift_transfer(&src, &io::parse_list(i)?, &io::parse_list(j)?)?;
            extra = json!({ "approx_rate": t.approx_rate });
            t.certificate
        }
    };
    run.nodes_used = cert.oracle_nodes();
    let mut report = summary(&cert);
    if let (Value::Object(r), Value::Object(e)) = (&mut report, extra) {
        r.extend(e);
    }
    emit_certificate(&cert, &a.output, run, report)?;
    Ok(exit::CLEAN)
}

/// Progress callback writing one JSON object per line to stderr.
fn progress_sink(l: u64, e: &ProgressEvent) {
    let line = json!({ "l": l, "best_size": e.best_size, "nodes": e.nodes, "depth": e.depth });
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

fn search(a: &crate::SearchArgs, run: &mut Run) -> Result<i32> {
    let eq: Equation = io::equation(a.equation.sym.as_deref(), a.equation.eq.as_deref())?;
    let grid: Vec<u64> = match (&a.l, a.l_grid) {
        (Some(s), None) => io::parse_list(s)?
            .into_iter()
            .map(|v| u64::try_from(v).map_err(|_| malformed(format!("L must be positive, got {v}"))))
            .collect::<Result<_>>()?,
        (None, Some(g)) => auto_grid(&eq, matches!(g, GridArg::Extended)),
        (None, None) => auto_grid(&eq, false),
        (Some(_), Some(_)) => return Err(malformed("give only one of --L or --L-grid")),
    };
    if grid.is_empty() {
        return Err(malformed("empty L grid"));
    }
    let cfg = SearchConfig {
        budget: run.budget,
        mode: if a.greedy {
            SearchMode::Greedy
        } else if a.anytime {
            SearchMode::Anytime
        } else {
            SearchMode::Exact
        },
        report_interval: if a.progress { 64 } else { 0 },
        solution_mode: mode(a.distinct),
        parallel: a.parallel,
        ..SearchConfig::default()
    };
    let mut sink = progress_sink;
    let progress: Option<&mut dyn FnMut(u64, &ProgressEvent)> = if a.progress { Some(&mut sink) } else { None };
    let report = grid_search(&eq, &grid, &cfg, progress)?;
    run.nodes_used = report.rows.iter().map(|r| r.nodes).sum();
    let mut out = json!({
        "schema": 1,
        "equation": eq.coeffs(),
        "mode": cfg.solution_mode,
        "search_mode": cfg.mode,
        "budget": cfg.budget,
        "grid": grid,
        "rows": report.rows,
        "all_exhausted": report.all_exhausted(),
        "best": report.best_row(),
    });
    if let Some(cert) = &report.best {
        out["best_rate"] = json!(cert.rate().decimal());
        match &a.out {
            Some(path) => {
                run.save_certificate(path, cert)?;
                out["certificate"] = json!(path);
            }
            None => out["certificate"] = serde_json::from_str(&cert.to_json())?,
        }
    }
    print(&out)?;
    Ok(if report.all_exhausted() { exit::CLEAN } else { exit::BEST_EFFORT })
}

fn write_report(value: &Value, out: Option<&Path>, run: &mut Run) -> Result<()> {
    if let Some(p) = out {
        io::write_json(p, value).with_context(|| format!("writing {}", p.display()))?;
        run.save_output(p);
    }
    print(value)
}

fn sweep(a: &crate::SweepArgs, run: &mut Run) -> Result<i32> {
    let sampling = match (a.exhaustive, a.samples) {
        (true, None) => Sampling::Exhaustive,
        (false, Some(samples)) => Sampling::MonteCarlo { samples, seed: a.seed },
        _ => return Err(malformed("give --exhaustive or --samples")),
    };
    let report = random_tuple_sweep(a.k, a.c, a.eps, sampling, run.budget)?;
    let ce = c_epsilon(a.k, a.eps)?;
    run.nodes_used = report.total;
    let mut v = serde_json::to_value(&report)?;
    v["schema"] = json!(1);
    v["c_epsilon"] = serde_json::to_value(ce)?;
    write_report(&v, a.out.as_deref(), run)?;
    Ok(exit::CLEAN)
}

fn alpha(a: &crate::AlphaArgs, run: &mut Run) -> Result<i32> {
    let p = alpha_optimal(a.beta, a.q)?;
    let mut v = serde_json::to_value(p)?;
    v["schema"] = json!(1);
    v["inverse_rate"] = json!(p.inverse_rate());
    write_report(&v, a.out.as_deref(), run)?;
    Ok(exit::CLEAN)
}

fn rate(a: &crate::RateArgs) -> Result<i32> {
    let cert = io::read_certificate(&a.cert)?;
    let mut v = serde_json::to_value(rate_report(&cert)?)?;
    v["schema"] = json!(1);
    print(&v)?;
    Ok(exit::CLEAN)
}
