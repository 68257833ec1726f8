//! Argument definitions and subcommand dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracplanar_core::analysis::{basin_estimate, decay_exponent, weighted_norm};
use fracplanar_core::solver::{solve_nonlinear_picard, solve_pi_trapezoidal, PicardConfig, StepperConfig};
use fracplanar_core::specfun::{linear_voc_solution, Family, KernelEvaluator, KernelIndex, SpecFunKind};
use fracplanar_core::stability::{triple_verdict_with, WindingOptions};
use fracplanar_core::Trajectory;

use crate::io::{load_trajectory, write_kernel, write_trajectory};
use crate::report::{stability_exit_code, AnalyzeReport, StabilityReport};
use crate::reproduce::{reproduce_all, reproduce_example, run_dir};
use crate::spec::SystemSpec;

#[derive(Debug, Parser)]
#[command(name = "fracplanar", version, about = "Stability and simulation of incommensurate fractional planar systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide asymptotic stability of the linear part.
    ///
    /// Exit status: 0 stable, 2 not stable, 3 inconclusive, 1 on error.
    Stability(StabilityArgs),
    /// Integrate a system and print `t,x1,x2` CSV.
    Solve(SolveArgs),
    /// Tabulate one kernel of the R or S family.
    Specfun(SpecfunArgs),
    /// Fit the decay rate of a trajectory CSV.
    Analyze(AnalyzeArgs),
    /// Regenerate solution, scaled solution and report for catalogued examples.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    pub spec: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Maximum number of characteristic-function evaluations in the zero count.
    #[arg(long, value_name = "N")]
    pub zero_count_budget: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Pi,
    Voc,
    Picard,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value = "pi")]
    pub method: SolveMethod,
    #[arg(long, default_value_t = 0.005)]
    pub h: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Initial value as `x1,x2`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub x0: [f64; 2],
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    R,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndexArg {
    #[value(name = "0")]
    Zero,
    A1,
    A2,
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct SpecfunArgs {
    pub spec: PathBuf,
    #[arg(long, value_enum, ignore_case = true)]
    pub family: FamilyArg,
    #[arg(long, value_enum)]
    pub index: IndexArg,
    /// Range `lo..hi` with `0 < lo < hi`.
    #[arg(long, value_parser = parse_range)]
    pub t: (f64, f64),
    #[arg(long, default_value_t = 128)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub spacing: Spacing,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Trajectory CSV with columns `t,x1,x2` on a uniform grid.
    pub csv: PathBuf,
    /// Expected decay exponent.
    #[arg(long)]
    pub nu: f64,
    /// Fit window `lo,hi`; defaults to the second half of the trajectory.
    #[arg(long, value_parser = parse_pair)]
    pub window: Option<[f64; 2]>,
    /// Nonlinear system spec, to report a basin radius.
    #[arg(long, requires = "epsilon")]
    pub spec: Option<PathBuf>,
    #[arg(long, requires = "spec")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Example number 1 to 8.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8), conflicts_with = "all", required_unless_present = "all")]
    pub example: Option<u8>,
    /// All eight examples, in parallel.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected two comma-separated numbers, got {s:?}"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let pair = [num(parts[0])?, num(parts[1])?];
    if pair.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(pair)
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(format!("need 0 < lo < hi, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Stability(a) => cmd_stability(&a),
        Command::Solve(a) => cmd_solve(&a).map(|_| 0),
        Command::Specfun(a) => cmd_specfun(&a).map(|_| 0),
        Command::Analyze(a) => cmd_analyze(&a).map(|_| 0),
        Command::Reproduce(a) => cmd_reproduce(&a).map(|_| 0),
    }
}

/// Writes to stdout, reporting a closed pipe as an error instead of panicking.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// True when `e` comes from writing into a closed pipe.
pub fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe))
        || e.chain().any(|c| {
            c.downcast_ref::<csv::Error>().is_some_and(
                |ce| matches!(ce.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe),
            )
        })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

pub fn cmd_stability(a: &StabilityArgs) -> Result<i32> {
    let system = SystemSpec::load(&a.spec)?.to_system()?;
    let mut opts = WindingOptions::default();
    if let Some(b) = a.zero_count_budget {
        opts.budget = b;
    }
    let verdict = triple_verdict_with(system.char_triple(), system.orders, &opts)?;
    let report = StabilityReport::new(&system, &verdict);
    if a.json {
        emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
    } else {
        emit(&report.render())?;
    }
    Ok(stability_exit_code(verdict.status))
}

pub fn solve_spec(spec: &SystemSpec, method: SolveMethod, x0: [f64; 2], h: f64, t_end: f64) -> Result<Trajectory> {
    let system = spec.to_system()?;
    Ok(match method {
        SolveMethod::Pi => solve_pi_trapezoidal(&system, x0, &StepperConfig::new(h, t_end))?,
        SolveMethod::Voc => {
            if !system.is_linear() {
                bail!("--method voc needs a linear system; use picard for a nonlinearity");
            }
            linear_voc_solution(&system, x0, h, t_end)?
        }
        SolveMethod::Picard => solve_nonlinear_picard(&system, x0, &PicardConfig::new(h, t_end))?.trajectory,
    })
}

fn cmd_solve(a: &SolveArgs) -> Result<()> {
    let spec = SystemSpec::load(&a.spec)?;
    let traj = solve_spec(&spec, a.method, a.x0, a.h, a.t_end)?;
    write_trajectory(output(&a.out)?, &traj)
}

/// The `t` grid of `specfun`: `points` values from `lo` to `hi`, strictly increasing.
pub fn specfun_grid(lo: f64, hi: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let u = i as f64 / (n - 1) as f64;
            match spacing {
                Spacing::Linear => lo + u * (hi - lo),
                Spacing::Log => (lo.ln() + u * (hi.ln() - lo.ln())).exp(),
            }
        })
        .collect()
}

fn cmd_specfun(a: &SpecfunArgs) -> Result<()> {
    let system = SystemSpec::load(&a.spec)?.to_system()?;
    let family = match a.family {
        FamilyArg::R => Family::R,
        FamilyArg::S => Family::S,
    };
    let index = match a.index {
        IndexArg::Zero => KernelIndex::Zero,
        IndexArg::A1 => KernelIndex::Alpha1,
        IndexArg::A2 => KernelIndex::Alpha2,
        IndexArg::L => KernelIndex::L,
    };
    let kind = SpecFunKind::new(family, index)?;
    let ev = KernelEvaluator::new(system.char_triple(), system.orders)?;
    let ts = specfun_grid(a.t.0, a.t.1, a.points, a.spacing);
    let values = ev.kernel_many(kind, &ts)?;
    let fam = if family == Family::R { "R" } else { "S" };
    write_kernel(output(&a.out)?, &ts, &values, fam, index.as_str())
}

pub fn analyze(a: &AnalyzeArgs) -> Result<AnalyzeReport> {
    let traj = load_trajectory(&a.csv)?;
    let window = match a.window {
        Some([lo, hi]) => (lo, hi),
        None => ((traj.t_end() / 2.0).max(1.0), traj.t_end()),
    };
    let decay = decay_exponent(&traj, a.nu, window)?;
    let mut report = AnalyzeReport::new(&decay, weighted_norm(&traj, a.nu));
    if let (Some(spec), Some(eps)) = (&a.spec, a.epsilon) {
        let system = SystemSpec::load(spec)?.to_system()?;
        if system.is_linear() {
            bail!("--spec for a basin radius must carry a nonlinearity");
        }
        let basin = basin_estimate(&system, eps)?;
        report.delta = Some(basin.delta);
        report.epsilon_used = Some(basin.epsilon);
    }
    Ok(report)
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<()> {
    let report = analyze(a)?;
    emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(())
}

fn cmd_reproduce(a: &ReproduceArgs) -> Result<()> {
    let reports = match a.example {
        Some(n) => reproduce_example(n, &a.out_dir)?,
        None => reproduce_all(&a.out_dir)?,
    };
    for r in &reports {
        let base = if a.all { a.out_dir.join(format!("example{}", r.example)) } else { a.out_dir.clone() };
        let dir: &Path = &run_dir(&base, r.run - 1);
        let mu = r.fitted_mu.map_or("n/a".to_string(), |m| format!("{m:.4}"));
        emit(&format!(
            "example {} run {} x0 = ({}, {}): {} (fitted mu {}, nu {:.4}) -> {}\n",
            r.example,
            r.run,
            r.x0[0],
            r.x0[1],
            r.verdict,
            mu,
            r.nu,
            dir.display()
        ))?;
    }
    Ok(())
}
