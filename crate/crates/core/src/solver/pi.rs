//! Implicit product-integration trapezoidal rule.
//!
//! With `g = A x + f`, component `i` of order `α` advances as
//!
//! ```text
//! x_i(t_n) = x_i(0) + h^α [ c_n g_i(t_0, x_0) + Σ_{j=1}^{n-1} b_{n-j} g_i(t_j, x_j) + b_0 g_i(t_n, x_n) ]
//! ```
//!
//! with `b_0 = 1/Γ(α+2)`, `b_k = ((k+1)^{α+1} - 2k^{α+1} + (k-1)^{α+1})/Γ(α+2)`
//! and `c_n = ((n-1)^{α+1} - n^α (n-α-1))/Γ(α+2)`. The implicit equation for
//! `x_n` is solved by Newton's method with the analytic Jacobian; the
//! history sum is accumulated directly.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use crate::math::gamma;
use crate::system::PlanarSystem;
use crate::trajectory::{sup_norm, Method, Trajectory};
use crate::{Error, Result};

/// Magnitude beyond which a solution counts as blown up.
pub const BLOW_UP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub h: f64,
    pub newton_tol: f64,
    pub newton_max: usize,
    pub t_end: f64,
}

impl StepperConfig {
    pub fn new(h: f64, t_end: f64) -> Self {
        Self { h, t_end, ..Self::default() }
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.h).round() as usize
    }

    fn check(&self) -> Result<()> {
        if !(self.h > 0.0) || !(self.t_end >= self.h) || !self.t_end.is_finite() {
            return Err(Error::InvalidConfig("need h > 0 and t_end >= h"));
        }
        if !(self.newton_tol > 0.0) || self.newton_max == 0 {
            return Err(Error::InvalidConfig("Newton tolerance and iteration cap must be positive"));
        }
        Ok(())
    }
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self { h: 1.0 / 200.0, newton_tol: 1e-12, newton_max: 50, t_end: 1.0 }
    }
}

/// The weight sequences for one order.
#[derive(Debug, Clone, PartialEq)]
pub struct PiWeights {
    /// `b_k`, `k = 0..=n`.
    pub b: Vec<f64>,
    /// `c_n`, `n = 0..=n` (`c_0` unused).
    pub c: Vec<f64>,
}

pub fn pi_weights(alpha: f64, n: usize) -> PiWeights {
    let g = gamma(alpha + 2.0);
    let p = |k: usize| (k as f64).powf(alpha + 1.0);
    let mut b = Vec::with_capacity(n + 1);
    b.push(1.0 / g);
    for k in 1..=n {
        b.push((p(k + 1) - 2.0 * p(k) + p(k - 1)) / g);
    }
    let mut c = Vec::with_capacity(n + 1);
    c.push(0.0);
    for k in 1..=n {
        let kf = k as f64;
        c.push((p(k - 1) - kf.powf(alpha) * (kf - alpha - 1.0)) / g);
    }
    PiWeights { b, c }
}

/// Result of a solve that may stop early at blow-up.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// Samples up to (and including) the first one beyond [`BLOW_UP`].
    pub trajectory: Trajectory,
    /// Time at which the magnitude first exceeded [`BLOW_UP`].
    pub blow_up: Option<f64>,
}

/// Integrates on `[0, t_end]`; blow-up is an [`Error::Overflow`].
pub fn solve_pi_trapezoidal(system: &PlanarSystem, x0: [f64; 2], config: &StepperConfig) -> Result<Trajectory> {
    let out = solve_pi_trapezoidal_lenient(system, x0, config)?;
    match out.blow_up {
        Some(t) => Err(Error::Overflow { t }),
        None => Ok(out.trajectory),
    }
}

/// Like [`solve_pi_trapezoidal`] but returns the partial trajectory when
/// the solution blows up.
pub fn solve_pi_trapezoidal_lenient(
    system: &PlanarSystem,
    x0: [f64; 2],
    config: &StepperConfig,
) -> Result<SolveOutcome> {
    config.check()?;
    if !x0[0].is_finite() || !x0[1].is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let system = system.validate()?;
    let h = config.h;
    let n_steps = config.steps();
    let alpha = [system.orders.alpha1(), system.orders.alpha2()];
    let w = [pi_weights(alpha[0], n_steps), pi_weights(alpha[1], n_steps)];
    let ha = [h.powf(alpha[0]), h.powf(alpha[1])];
    // Coefficient of g(t_n, x_n) in each implicit equation.
    let lead = [ha[0] * w[0].b[0], ha[1] * w[1].b[0]];

    let mut xs: Vec<[f64; 2]> = Vec::with_capacity(n_steps + 1);
    let mut gs: Vec<[f64; 2]> = Vec::with_capacity(n_steps + 1);
    xs.push(x0);
    gs.push(system.rhs(0.0, x0));

    for n in 1..=n_steps {
        let t = n as f64 * h;
        // Known part of the right-hand side.
        let mut known = [0.0; 2];
        for i in 0..2 {
            let b = &w[i].b;
            let mut hist = w[i].c[n] * gs[0][i];
            for j in 1..n {
                hist += b[n - j] * gs[j][i];
            }
            known[i] = x0[i] + ha[i] * hist;
        }
        let guess = xs[n - 1];
        let x = match newton(&system, t, known, lead, guess, config) {
            Ok(x) => x,
            Err(_) => {
                // Explicit rectangle predictor as a second starting point.
                let mut pred = [0.0; 2];
                for i in 0..2 {
                    let gi = gamma(alpha[i] + 1.0);
                    let mut s = 0.0;
                    for (j, g) in gs.iter().enumerate().take(n) {
                        let (a, b) = ((n - j) as f64, (n - j - 1) as f64);
                        s += (a.powf(alpha[i]) - b.powf(alpha[i])) * g[i];
                    }
                    pred[i] = x0[i] + ha[i] * s / gi;
                }
                newton(&system, t, known, lead, pred, config)?
            }
        };
        xs.push(x);
        gs.push(system.rhs(t, x));
        if !(sup_norm(x) <= BLOW_UP) {
            return Ok(SolveOutcome {
                trajectory: Trajectory::new(0.0, h, xs, Method::PiTrapezoidal),
                blow_up: Some(t),
            });
        }
    }
    Ok(SolveOutcome { trajectory: Trajectory::new(0.0, h, xs, Method::PiTrapezoidal), blow_up: None })
}

/// Solves `x_i = known_i + lead_i g_i(t, x)`.
fn newton(
    system: &PlanarSystem,
    t: f64,
    known: [f64; 2],
    lead: [f64; 2],
    mut x: [f64; 2],
    config: &StepperConfig,
) -> Result<[f64; 2]> {
    let mut residual = f64::INFINITY;
    for _ in 0..config.newton_max {
        let g = system.rhs(t, x);
        let f = [x[0] - known[0] - lead[0] * g[0], x[1] - known[1] - lead[1] * g[1]];
        residual = sup_norm(f);
        if !residual.is_finite() {
            break;
        }
        if residual <= config.newton_tol * (1.0 + sup_norm(x)) {
            return Ok(x);
        }
        let jg = system.rhs_jacobian(x);
        let j = [[1.0 - lead[0] * jg[0][0], -lead[0] * jg[0][1]], [-lead[1] * jg[1][0], 1.0 - lead[1] * jg[1][1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = [(j[1][1] * f[0] - j[0][1] * f[1]) / det, (j[0][0] * f[1] - j[1][0] * f[0]) / det];
        x = [x[0] - dx[0], x[1] - dx[1]];
        // A step that changes nothing at machine precision is converged.
        if sup_norm(dx) <= f64::EPSILON * sup_norm(x) {
            return Ok(x);
        }
    }
    Err(Error::NewtonDiverged { t, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{Forcing, FracOrders};

    #[test]
    fn weights_sum_to_fractional_integral_of_one() {
        // Σ weights reproduce ∫_0^{t_n} (t_n - s)^{α-1}/Γ(α) ds = n^α / Γ(α+1).
        let alpha = 0.37;
        let w = pi_weights(alpha, 50);
        for n in 1..=50 {
            let s: f64 = w.c[n] + (1..n).map(|j| w.b[n - j]).sum::<f64>() + w.b[0];
            assert!((s - (n as f64).powf(alpha) / gamma(alpha + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_forcing_gives_power_law() {
        let o = FracOrders::new(0.5, 0.8).unwrap();
        let f = Forcing::Table(alloc::vec![[0.0, 1.0, 0.0]]);
        let s = PlanarSystem::new([[0.0; 2]; 2], o).with_forcing(f);
        let tr = solve_pi_trapezoidal(&s, [0.0, 0.0], &StepperConfig::new(1.0 / 200.0, 1.0)).unwrap();
        let x = tr.samples.last().unwrap();
        assert!((x[0] - 1.0 / gamma(1.5)).abs() < 1e-3);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn deterministic_replay() {
        let ex = crate::catalog::example(2).unwrap();
        let cfg = StepperConfig::new(0.01, 5.0);
        let a = solve_pi_trapezoidal(&ex.system, [0.1, -0.2], &cfg).unwrap();
        let b = solve_pi_trapezoidal(&ex.system, [0.1, -0.2], &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn blow_up_is_reported() {
        let o = FracOrders::new(0.8, 1.0).unwrap();
        let n = crate::system::Nonlinearity::new(alloc::vec![crate::system::PolyTerm::new(1.0, 2, 0)], alloc::vec![]);
        let s = PlanarSystem::new([[0.0; 2]; 2], o).with_nonlinearity(n);
        let cfg = StepperConfig::new(0.01, 50.0);
        let r = solve_pi_trapezoidal(&s, [5.0, 0.0], &cfg);
        assert!(matches!(r, Err(Error::Overflow { .. }) | Err(Error::NewtonDiverged { .. })), "{r:?}");
        let lenient = solve_pi_trapezoidal_lenient(&s, [5.0, 0.0], &cfg);
        if let Ok(out) = lenient {
            assert!(out.blow_up.is_some());
        }
    }

    #[test]
    fn classical_limit_matches_matrix_exponential() {
        // α1 = α2 = 1: x' = A x with A = [[-1, 2], [-2, -1]];
        // x(t) = e^{-t} (cos 2t x1 + sin 2t x2, -sin 2t x1 + cos 2t x2).
        let o = FracOrders::commensurate(1.0).unwrap();
        let s = PlanarSystem::new([[-1.0, 2.0], [-2.0, -1.0]], o);
        let tr = solve_pi_trapezoidal(&s, [1.0, 0.5], &StepperConfig::new(1.0 / 200.0, 1.0)).unwrap();
        let x = tr.samples.last().unwrap();
        let (e, c, sn) = ((-1.0f64).exp(), 2.0f64.cos(), 2.0f64.sin());
        let want = [e * (c * 1.0 + sn * 0.5), e * (-sn * 1.0 + c * 0.5)];
        assert!((x[0] - want[0]).abs() < 1e-4 && (x[1] - want[1]).abs() < 1e-4, "{x:?} vs {want:?}");
    }
}
