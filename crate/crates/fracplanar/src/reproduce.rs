//! Reproduction runs for the catalogued examples.
//!
//! Each run integrates with the trapezoidal product-integration stepper at
//! `h = 1/200` on `[0, 100]` and fits the decay exponent on `[50, 100]`.
//! The example's `spec.json` and its primary run go into the output directory;
//! further runs go into `run2/`, `run3/`, ... below it.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fracplanar_core::analysis::{decay_exponent, ml_stability_check, weighted_norm};
use fracplanar_core::catalog::{example, Example, REFERENCE_STEP};
use fracplanar_core::solver::{solve_pi_trapezoidal_lenient, SolveOutcome, StepperConfig};
use fracplanar_core::stability::stability_verdict;
use rayon::prelude::*;

use crate::io::{write_scaled, write_trajectory};
use crate::report::{finite, RunReport, StabilityReport};
use crate::spec::SystemSpec;

pub const T_END: f64 = 100.0;
pub const WINDOW: (f64, f64) = (50.0, 100.0);
/// Bound used for the Mittag-Leffler check on nonlinear examples.
pub const ML_BOUND: f64 = 10.0;

/// Directory of run `run` (0-based) below an example's output directory.
pub fn run_dir(base: &Path, run: usize) -> PathBuf {
    if run == 0 {
        base.to_path_buf()
    } else {
        base.join(format!("run{}", run + 1))
    }
}

/// Solves, analyses and writes every run of example `n` into `out_dir`.
pub fn reproduce_example(n: u8, out_dir: &Path) -> Result<Vec<RunReport>> {
    let ex = example(n)?;
    let stability = StabilityReport::new(&ex.system, &stability_verdict(&ex.system)?);
    std::fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    std::fs::write(out_dir.join("spec.json"), SystemSpec::from_system(&ex.system).to_json() + "\n")?;
    let mut reports = Vec::new();
    for (run, x0) in ex.initial_conditions.iter().enumerate() {
        let dir = run_dir(out_dir, run);
        std::fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let outcome = solve(&ex, *x0)?;
        let report = summarize(&ex, run, *x0, &outcome, &stability)?;
        write_trajectory(BufWriter::new(File::create(dir.join("solution.csv"))?), &outcome.trajectory)?;
        write_scaled(BufWriter::new(File::create(dir.join("scaled.csv"))?), &outcome.trajectory, ex.nu)?;
        let json = serde_json::to_string_pretty(&report)? + "\n";
        std::fs::write(dir.join("report.json"), json)?;
        reports.push(report);
    }
    Ok(reports)
}

fn solve(ex: &Example, x0: [f64; 2]) -> Result<SolveOutcome> {
    let config = StepperConfig::new(REFERENCE_STEP, T_END);
    solve_pi_trapezoidal_lenient(&ex.system, x0, &config).with_context(|| format!("example {} from {x0:?}", ex.id))
}

fn summarize(
    ex: &Example,
    run: usize,
    x0: [f64; 2],
    outcome: &SolveOutcome,
    stability: &StabilityReport,
) -> Result<RunReport> {
    let traj = &outcome.trajectory;
    let (fitted_mu, tail_sup, verdict, wnorm) = if outcome.blow_up.is_some() {
        (None, None, "Unbounded".to_string(), None)
    } else {
        let d = decay_exponent(traj, ex.nu, WINDOW)?;
        (finite(d.fitted_mu), finite(d.tail_sup), d.verdict.as_str().to_string(), Some(weighted_norm(traj, ex.nu)))
    };
    let nonlinear = !ex.is_linear();
    let ml_stable = (nonlinear && outcome.blow_up.is_none()).then(|| ml_stability_check(traj, ex.nu, ML_BOUND));
    Ok(RunReport {
        example: ex.id,
        run: run + 1,
        x0,
        method: traj.method.as_str().to_string(),
        h: REFERENCE_STEP,
        t_end: T_END,
        nu: ex.nu,
        window: [WINDOW.0, WINDOW.1],
        verdict,
        fitted_mu,
        tail_sup,
        weighted_norm: wnorm,
        ml_stable,
        m_bound: nonlinear.then_some(ML_BOUND),
        blow_up: outcome.blow_up,
        stability: stability.clone(),
    })
}

/// Runs all examples in parallel, each into `out_dir/example<n>`.
///
/// `FRACPLANAR_THREADS` caps the worker count.
pub fn reproduce_all(out_dir: &Path) -> Result<Vec<RunReport>> {
    let threads = std::env::var("FRACPLANAR_THREADS")
        .ok()
        .map(|v| v.trim().parse::<usize>().context("FRACPLANAR_THREADS must be a positive integer"))
        .transpose()?
        .filter(|&n| n > 0);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let results: Vec<Result<Vec<RunReport>>> = pool.install(|| {
        (1..=8u8).into_par_iter().map(|n| reproduce_example(n, &out_dir.join(format!("example{n}")))).collect()
    });
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }
    Ok(all)
}
