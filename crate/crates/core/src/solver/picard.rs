//! Fixed-point iteration `ξ_{k+1} = T_{x0}(ξ_k)` of the operator
//!
//! ```text
//! (T ξ)(t) = [homogeneous solution from x0](t) + Σ_j K_ij ∗ f_j(ξ(·))
//! ```
//!
//! with the kernels of the variation-of-constants formula. The start is
//! the constant `ξ_0 ≡ x0`; distances are measured in the weighted norm.
//!
//! Over long intervals the iterates from `ξ_0 ≡ x0` can grow by many
//! orders of magnitude before they settle, even for data whose solution is
//! perfectly tame. The operator is causal, so its fixed point on `[0, T]`
//! is the restriction of the fixed point on any longer interval. When the
//! direct iteration stalls the solver marches instead: the grid is cut into
//! blocks, and on each block the iteration runs with all earlier samples
//! frozen at their converged values (halving the block when it stalls).
//! A final full application of the operator measures the fixed-point
//! defect of the assembled trajectory.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use crate::specfun::VocOperator;
use crate::system::PlanarSystem;
use crate::trajectory::{weighted_sup, Method, Trajectory};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardConfig {
    pub h: f64,
    pub t_end: f64,
    pub max_iter: usize,
    /// Stop once consecutive iterates are this close in the weighted norm.
    pub tol: f64,
}

impl PicardConfig {
    pub fn new(h: f64, t_end: f64) -> Self {
        Self { h, t_end, max_iter: 100, tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardReport {
    pub trajectory: Trajectory,
    pub iterations: usize,
    /// Weighted distance between the last two iterates.
    pub last_distance: f64,
    /// Number of segments solved; 1 when the direct iteration converged.
    pub stages: usize,
}

/// One application of the operator to `xi`.
pub fn apply_operator(op: &VocOperator, system: &PlanarSystem, x0: [f64; 2], xi: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = xi.len();
    let mut g = [Vec::with_capacity(n), Vec::with_capacity(n)];
    for (k, x) in xi.iter().enumerate() {
        let v = source(system, k as f64 * op.h, *x);
        g[0].push(v[0]);
        g[1].push(v[1]);
    }
    op.apply(x0, [&g[0], &g[1]])
}

/// Iterates until the weighted distance drops below `tol`.
pub fn solve_nonlinear_picard(system: &PlanarSystem, x0: [f64; 2], config: &PicardConfig) -> Result<PicardReport> {
    let system = system.validate()?;
    if !(config.h > 0.0) || !(config.t_end >= config.h) || config.max_iter == 0 {
        return Err(Error::InvalidConfig("need h > 0, t_end >= h and max_iter >= 1"));
    }
    let len = (config.t_end / config.h).round() as usize;
    let op = VocOperator::for_system(&system, config.h, len)?;
    picard_with_operator(&op, &system, x0, config)
}

/// As [`solve_nonlinear_picard`] with a prebuilt operator.
pub fn picard_with_operator(
    op: &VocOperator,
    system: &PlanarSystem,
    x0: [f64; 2],
    config: &PicardConfig,
) -> Result<PicardReport> {
    let len = op.len();
    let direct = iterate(op, system, x0, alloc::vec![x0; len + 1], config);
    let err = match direct {
        Ok((xi, iterations, last_distance)) => {
            return Ok(PicardReport {
                trajectory: Trajectory::new(0.0, op.h, xi, Method::Picard),
                iterations,
                last_distance,
                stages: 1,
            })
        }
        Err(e) => e,
    };

    let nu = system.orders.nu();
    let mut xi: Vec<[f64; 2]> = alloc::vec![x0; len + 1];
    let mut g = [alloc::vec![0.0; len + 1], alloc::vec![0.0; len + 1]];
    let set_g = |g: &mut [Vec<f64>; 2], k: usize, x: [f64; 2]| {
        let v = source(system, k as f64 * op.h, x);
        g[0][k] = v[0];
        g[1][k] = v[1];
    };
    set_g(&mut g, 0, x0);
    let mut done = 0;
    let mut block = (len / 64).max(1);
    let (mut iterations, mut stages) = (0, 0);
    while done < len {
        let (lo, hi) = (done + 1, (done + block).min(len));
        let mut history: Vec<f64> = Vec::new();
        let mut converged = false;
        for _ in 0..config.max_iter {
            iterations += 1;
            let next = op.apply_range(x0, [&g[0][..=hi], &g[1][..=hi]], lo, hi);
            let diff: Vec<[f64; 2]> = next.iter().zip(&xi[lo..=hi]).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect();
            let dist = weighted_sup(lo as f64 * op.h, op.h, &diff, nu);
            for (k, x) in next.into_iter().enumerate() {
                xi[lo + k] = x;
                set_g(&mut g, lo + k, x);
            }
            if !dist.is_finite() {
                break;
            }
            if dist < config.tol {
                converged = true;
                break;
            }
            history.push(dist);
            let k = history.len();
            if k >= 3 && history[k - 1] >= history[k - 2] && history[k - 2] >= history[k - 3] {
                break;
            }
        }
        if converged {
            stages += 1;
            done = hi;
            block = (block * 2).min(len);
        } else if block > 1 {
            block /= 2;
            let last = xi[done];
            for (k, x) in xi.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *x = last;
                set_g(&mut g, k, last);
            }
        } else {
            return Err(err);
        }
    }
    let check = apply_operator(op, system, x0, &xi);
    let diff: Vec<[f64; 2]> = check.iter().zip(&xi).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect();
    let last_distance = weighted_sup(0.0, op.h, &diff, nu);
    Ok(PicardReport { trajectory: Trajectory::new(0.0, op.h, xi, Method::Picard), iterations, last_distance, stages })
}

fn source(system: &PlanarSystem, t: f64, x: [f64; 2]) -> [f64; 2] {
    let mut v = system.nonlinearity.as_ref().map_or([0.0, 0.0], |f| f.eval(x));
    let forcing = system.forcing_at(t);
    v[0] += forcing[0];
    v[1] += forcing[1];
    v
}

/// Runs the iteration on the segment covered by `xi`.
fn iterate(
    op: &VocOperator,
    system: &PlanarSystem,
    x0: [f64; 2],
    mut xi: Vec<[f64; 2]>,
    config: &PicardConfig,
) -> Result<(Vec<[f64; 2]>, usize, f64)> {
    let nu = system.orders.nu();
    let mut history: Vec<f64> = Vec::new();
    for it in 1..=config.max_iter {
        let next = apply_operator(op, system, x0, &xi);
        let diff: Vec<[f64; 2]> = next.iter().zip(&xi).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect();
        let dist = weighted_sup(0.0, op.h, &diff, nu);
        xi = next;
        if !dist.is_finite() {
            return Err(Error::NotContractive { iterations: it, distance: dist });
        }
        if dist < config.tol {
            return Ok((xi, it, dist));
        }
        history.push(dist);
        let k = history.len();
        if k >= 3 && history[k - 1] >= history[k - 2] && history[k - 2] >= history[k - 3] {
            return Err(Error::NotContractive { iterations: it, distance: dist });
        }
    }
    Err(Error::NotContractive { iterations: config.max_iter, distance: history.last().copied().unwrap_or(f64::NAN) })
}
