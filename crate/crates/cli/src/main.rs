use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use slcoll::bench::{self, PlanOverrides};
use slcoll::builtins::{self, default_plan};
use slcoll::report::{emit_decay_csv, RunRecord, SweepRecord};
use slcoll::{
    relative_drift, solve_problem, sweep, BoundaryCondition, Grading, Method, Plan64, Problem64, SlError,
    SolveOptions,
};

#[derive(Parser)]
#[command(name = "slcoll", version, about = "Spectral collocation eigenvalues for singular Sturm-Liouville problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Cheb,
    Sinc,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradingArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphaArg {
    N,
    Length,
}

#[derive(clap::Args, Clone, Default)]
struct ProblemArgs {
    /// Boyd regularization epsilon.
    #[arg(long)]
    eps: Option<f64>,
    /// Bessel order.
    #[arg(long)]
    nu: Option<f64>,
    /// Singular point of the generalized Bessel problem.
    #[arg(long)]
    tau: Option<f64>,
    /// Rod potential constant.
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one registered problem.
    Solve {
        problem: String,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        n: Option<usize>,
        /// Sinc step size.
        #[arg(long)]
        h: Option<f64>,
        /// Truncated interval `A,B`.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        domain: Option<(f64, f64)>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long, value_enum)]
        grading: Option<GradingArg>,
        /// Also write coefficient magnitudes as CSV.
        #[arg(long)]
        decay_csv: Option<PathBuf>,
        #[command(flatten)]
        params: ProblemArgs,
    },
    /// Relative drift between two runs differing in `n` or truncation length.
    Drift {
        problem: String,
        #[arg(long, value_enum)]
        alpha: AlphaArg,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        values: (f64, f64),
        #[arg(long, default_value_t = 1e-10)]
        threshold: f64,
        #[arg(long, default_value_t = 32)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ProblemArgs,
    },
    /// Track the lowest eigenvalues of the generalized Bessel problem over tau.
    Sweep {
        problem: String,
        /// `START,STOP,STEPS`.
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        tau_grid: (f64, f64, usize),
        #[arg(long, default_value_t = 1.0 / 3.0)]
        nu: f64,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score the benchmark registry against its reference tables.
    Bench {
        /// Case name or tag (`hard`, `generalized`, `sinc`).
        #[arg(long)]
        filter: Option<String>,
    },
    /// List registered problems.
    List,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v: Vec<&str> = s.split(',').collect();
    if v.len() != 2 {
        return Err(format!("expected A,B, got `{s}`"));
    }
    let a = v[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = v[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let v: Vec<&str> = s.split(',').collect();
    if v.len() != 3 {
        return Err(format!("expected START,STOP,STEPS, got `{s}`"));
    }
    let start = v[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let stop = v[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let steps = v[2].trim().parse::<usize>().map_err(|e| e.to_string())?;
    if steps == 0 {
        return Err("STEPS must be positive".into());
    }
    Ok((start, stop, steps))
}

fn build_problem(name: &str, p: &ProblemArgs) -> slcoll::Result<Problem64> {
    let unused = |flag: &str| Err(SlError::InvalidArgument(format!("--{flag} does not apply to {name}")));
    match name {
        "boyd" => {
            if p.nu.is_some() || p.tau.is_some() || p.gamma.is_some() {
                return unused("nu/tau/gamma");
            }
            builtins::boyd(p.eps.unwrap_or(1e-6))
        }
        "bessel" => {
            if p.eps.is_some() || p.tau.is_some() || p.gamma.is_some() {
                return unused("eps/tau/gamma");
            }
            builtins::bessel(p.nu.unwrap_or(0.0))
        }
        "bessel_generalized" => {
            if p.eps.is_some() || p.gamma.is_some() {
                return unused("eps/gamma");
            }
            Ok(builtins::bessel_generalized(p.nu.unwrap_or(1.0 / 3.0), p.tau.unwrap_or(0.0)))
        }
        "rod" => {
            if p.eps.is_some() || p.nu.is_some() || p.tau.is_some() {
                return unused("eps/nu/tau");
            }
            Ok(builtins::rod(p.gamma.unwrap_or(0.0)))
        }
        _ => {
            if p.eps.is_some() || p.nu.is_some() || p.tau.is_some() || p.gamma.is_some() {
                return unused("eps/nu/tau/gamma");
            }
            builtins::lookup(name)
        }
    }
}

/// Moves truncation conditions to the new plan endpoints so `--domain` acts
/// as a truncation override.
fn retruncate(problem: Problem64, plan: &Plan64) -> Problem64 {
    let (lo, hi) = plan.domain;
    let shift = |bc: &BoundaryCondition<f64>, at: f64| match bc {
        BoundaryCondition::TruncatedDirichlet { .. } => BoundaryCondition::TruncatedDirichlet { at },
        other => other.clone(),
    };
    let left = shift(&problem.bc_left, lo);
    let right = shift(&problem.bc_right, hi);
    let (a, b) = (problem.a, problem.b);
    let (dlo, dhi) = (lo.max(a), hi.min(b));
    problem.with_bcs(left, right).with_domain(dlo, dhi)
}

fn write_text(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::List => {
            for p in builtins::builtin_problems::<f64>() {
                println!(
                    "{:<20} ({}, {})  left: {}  right: {}",
                    p.name,
                    p.a,
                    p.b,
                    p.bc_left.describe(),
                    p.bc_right.describe()
                );
            }
            Ok(true)
        }
        Command::Solve {
            problem,
            method,
            n,
            h,
            domain,
            count,
            out,
            format,
            grading,
            decay_csv,
            params,
        } => {
            let prob = build_problem(&problem, &params)?;
            let overrides = PlanOverrides {
                method: method.map(|m| match m {
                    MethodArg::Cheb => Method::Chebyshev,
                    MethodArg::Sinc => Method::Sinc,
                }),
                n,
                h,
                domain,
            };
            let mut plan = overrides.apply(&default_plan(&prob)?)?;
            if let Some(g) = grading {
                plan = plan.with_grading(match g {
                    GradingArg::Linear => Grading::Linear,
                    GradingArg::Log => Grading::Logarithmic,
                });
            }
            let prob = if domain.is_some() { retruncate(prob, &plan) } else { prob };
            let mut options = SolveOptions::default();
            if let Some(c) = count {
                options = options.with_count(c);
            }
            let (pencil, spectrum) = solve_problem(&prob, &plan, &options)?;
            let record = RunRecord::new(&prob, &plan, &pencil, &spectrum);
            if let Some(path) = decay_csv {
                emit_decay_csv(&record, &path)?;
            }
            let text = match format {
                FormatArg::Json => record.to_json()? + "\n",
                FormatArg::Csv => record.eigenvalue_csv(),
            };
            write_text(&out, &text)?;
            Ok(true)
        }
        Command::Drift {
            problem,
            alpha,
            values,
            threshold,
            count,
            out,
            params,
        } => {
            let base = build_problem(&problem, &params)?;
            let base_plan = default_plan(&base)?;
            let options = SolveOptions::default().with_count(count);
            let run_one = |v: f64| -> anyhow::Result<(Problem64, Plan64)> {
                match alpha {
                    AlphaArg::N => {
                        if v.fract() != 0.0 || v < 2.0 {
                            bail!(SlError::InvalidArgument(format!("--values for n must be integers >= 2, got {v}")));
                        }
                        let plan = PlanOverrides {
                            n: Some(v as usize),
                            ..Default::default()
                        }
                        .apply(&base_plan)?;
                        Ok((base.clone(), plan))
                    }
                    AlphaArg::Length => length_variant(&problem, &base, &base_plan, v),
                }
            };
            let (p1, plan1) = run_one(values.0)?;
            let (p2, plan2) = run_one(values.1)?;
            let (pencil, s1) = solve_problem(&p1, &plan1, &options)?;
            let (_, s2) = solve_problem(&p2, &plan2, &options)?;
            let name = match alpha {
                AlphaArg::N => "n",
                AlphaArg::Length => "length",
            };
            let drift = relative_drift(&s1.eigenvalues, &s2.eigenvalues, name, values.0, values.1, threshold)?;
            let mut record = RunRecord::new(&p1, &plan1, &pencil, &s1);
            record.drift = Some(drift);
            write_text(&out, &(record.to_json()? + "\n"))?;
            Ok(true)
        }
        Command::Sweep {
            problem,
            tau_grid,
            nu,
            n,
            count,
            out,
        } => {
            if problem != "bessel_generalized" {
                bail!(SlError::InvalidArgument(format!("sweep supports bessel_generalized only, got {problem}")));
            }
            let (start, stop, steps) = tau_grid;
            let grid: Vec<f64> = if steps == 1 {
                vec![start]
            } else {
                (0..steps)
                    .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
                    .collect()
            };
            let base = builtins::bessel_generalized(nu, start);
            let plan = default_plan(&base)?.with_n(n);
            let options = SolveOptions::default();
            let result = sweep(|tau| Ok(builtins::bessel_generalized(nu, tau)), &grid, &plan, count, &options)?;
            let (pencil, spectrum) = solve_problem(&base, &plan, &options.clone().with_count(count))?;
            let mut record = RunRecord::new(&base, &plan, &pencil, &spectrum);
            record.sweep = Some(SweepRecord::from(&result));
            write_text(&out, &(record.to_json()? + "\n"))?;
            Ok(true)
        }
        Command::Bench { filter } => {
            let names = bench::select(filter.as_deref());
            if names.is_empty() {
                bail!(SlError::NotFound(format!("no benchmark case matches `{}`", filter.unwrap_or_default())));
            }
            let mut all = true;
            for name in names {
                let card = bench::run_case(&name, &PlanOverrides::default())?;
                all &= card.pass;
                println!("{} {} ({:.2} s)", if card.pass { "PASS" } else { "FAIL" }, card.name, card.wall_time_s);
                for e in &card.entries {
                    println!(
                        "  {:<4} {:<6} [{:>2}] computed {:>22} reference {:>22.15e} err {:>9} tol {:.0e}",
                        if e.pass { "ok" } else { "FAIL" },
                        e.label,
                        e.index,
                        e.computed.map_or("-".to_string(), |v| format!("{v:.15e}")),
                        e.reference,
                        e.error.map_or("-".to_string(), |v| format!("{v:.2e}")),
                        e.tol
                    );
                }
                for note in &card.notes {
                    println!("  note: {note}");
                }
            }
            Ok(all)
        }
    }
}

fn length_variant(name: &str, base: &Problem64, plan: &Plan64, v: f64) -> anyhow::Result<(Problem64, Plan64)> {
    match name {
        "fokker_planck" => {
            let p = builtins::fokker_planck(v);
            let plan = plan.clone().with_domain(-v, v);
            Ok((p, plan))
        }
        "dunford_schwartz" => {
            let plan = plan.clone().with_domain(plan.domain.0, v);
            Ok((retruncate(base.clone(), &plan), plan))
        }
        _ => bail!(SlError::InvalidArgument(format!(
            "--alpha length needs a truncated infinite endpoint; {name} has none"
        ))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            let usage = matches!(
                err.downcast_ref::<SlError>(),
                Some(SlError::InvalidArgument(_) | SlError::NotFound(_))
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
