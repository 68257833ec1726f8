//! Inverse Laplace transforms `K(t) = (1/2πi) ∫ e^{st} s^p W(s) / Q(s) ds`
//! over Hankel contours.
//!
//! Times are grouped into dyadic blocks `[T, 2T)`. Within a block the
//! variable `σ = sT` is used, and the contour in the σ-plane is fixed: a
//! ray at angle `-θ` from `r_max` in to the unit circle, the unit arc from
//! `-θ` to `θ`, and a ray at `θ` back out to `r_max`, where
//! `θ = π/2 + δ`. With `τ = t/T ∈ [1, 2)` the factor `e^{στ}` is at most
//! `e²` on the arc and decays like `e^{-r sin δ}` along the rays, so no
//! block suffers exponential cancellation.
//!
//! Each block rule is refined by splitting every panel in two until the
//! values at `T`, `1.5T` and `2T` agree between consecutive levels.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use crate::charfun::{eval_q, inner_radius, outer_radius, q_scale};
use crate::math::{cexp, cpow, gauss_legendre, PI};
use crate::stability::{sector_report, WindingOptions};
use crate::system::{CharTriple, FracOrders};
use crate::{Complex, Error, Result};

/// Geometry of the contour used for one block, expressed in the s-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Arc radius.
    pub mu: f64,
    /// Ray angle `π/2 + δ`.
    pub theta: f64,
    /// Radius at which the rays are truncated.
    pub ray_truncation: f64,
    /// Gauss–Legendre nodes per panel.
    pub nodes_per_unit: usize,
}

/// Extra factor `W(s)` in the transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    /// `W = 1`: the kernel itself.
    Plain,
    /// `W = (e^{sh} - 1)/s`: `∫_t^{t+h} K(u) du`.
    Step(f64),
    /// `W = ∫_0^h v e^{sv} dv / h`: `∫_0^h K(t+v) v dv / h`.
    Ramp(f64),
}

impl Weight {
    fn eval(&self, s: Complex) -> Complex {
        match *self {
            Weight::Plain => Complex::new(1.0, 0.0),
            Weight::Step(h) => psi0(s * h) * h,
            Weight::Ramp(h) => psi1(s * h) * h,
        }
    }
}

/// `(e^z - 1)/z`.
fn psi0(z: Complex) -> Complex {
    if z.norm() < 0.5 {
        let mut term = Complex::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..20 {
            term = term * z / (k as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        (cexp(z) - 1.0) / z
    }
}

/// `∫_0^1 v e^{zv} dv = (e^z (z - 1) + 1)/z²`.
fn psi1(z: Complex) -> Complex {
    if z.norm() < 0.5 {
        // Σ z^k / (k! (k+2))
        let mut fact = Complex::new(1.0, 0.0);
        let mut sum = Complex::new(0.5, 0.0);
        for k in 1..22 {
            fact = fact * z / k as f64;
            sum += fact / (k as f64 + 2.0);
        }
        sum
    } else {
        (cexp(z) * (z - 1.0) + 1.0) / (z * z)
    }
}

const PANEL_NODES: usize = 16;
const FIRST_PANEL: f64 = 0.25;
const PANEL_GROWTH: f64 = 1.3;
const MAX_PANEL: f64 = 4.0;
const ARC_PANELS: usize = 4;
const MAX_LEVEL: u32 = 5;
const ACCEPT_TOL: f64 = 1e-11;
const FAIL_TOL: f64 = 1e-7;
const IMAG_TOL: f64 = 1e-8;

/// Quadrature rule for one dyadic block `[T, 2T)`.
#[derive(Debug, Clone)]
pub struct BlockRule {
    pub block_start: f64,
    nodes: Vec<Complex>,
    weights: Vec<Complex>,
}

impl BlockRule {
    /// The complex value of the contour integral at `t`; its imaginary
    /// part vanishes up to rounding.
    #[inline]
    pub fn eval_complex(&self, t: f64) -> Complex {
        let tau = t / self.block_start;
        let mut acc = Complex::new(0.0, 0.0);
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * cexp(*z * tau);
        }
        acc
    }

    /// `Σ |w_j e^{σ_j τ}|`, the size of the terms being summed.
    fn magnitude(&self, t: f64) -> f64 {
        let tau = t / self.block_start;
        self.nodes.iter().zip(&self.weights).map(|(z, w)| w.norm() * (z.re * tau).exp()).sum()
    }

    /// Values at `t0 + k h` for `k = 0..count`, all inside this block.
    pub fn eval_uniform(&self, t0: f64, h: f64, count: usize, out: &mut Vec<f64>) {
        const RESEED: usize = 64;
        let (tau0, dtau) = (t0 / self.block_start, h / self.block_start);
        let mut k = 0;
        let mut acc = alloc::vec![Complex::new(0.0, 0.0); count];
        while k < count {
            let chunk = RESEED.min(count - k);
            let tau = tau0 + k as f64 * dtau;
            for (z, w) in self.nodes.iter().zip(&self.weights) {
                let mut e = *w * cexp(*z * tau);
                let step = cexp(*z * dtau);
                for a in acc[k..k + chunk].iter_mut() {
                    *a += e;
                    e *= step;
                }
            }
            k += chunk;
        }
        out.extend(acc.iter().map(|v| v.re));
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Contour machinery bound to one characteristic function.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    triple: CharTriple,
    orders: FracOrders,
    delta: f64,
    gl_x: Vec<f64>,
    gl_w: Vec<f64>,
}

/// Candidate offsets past the imaginary axis, tried in order.
const DELTAS: [f64; 6] = [0.3, 0.15, 0.075, 0.0375, 0.01875, 0.01];
const RAY_PROBES: usize = 512;
const RAY_CLEARANCE: f64 = 0.05;
const RAY_CLEARANCE_MIN: f64 = 1e-4;

impl KernelEvaluator {
    /// Picks `δ` so that `Q` has no zero with `|arg s| <= π/2 + δ` and
    /// stays clear of zero along the rays.
    pub fn new(triple: CharTriple, orders: FracOrders) -> Result<Self> {
        if !(triple.c > 0.0) || !triple.a.is_finite() || !triple.b.is_finite() || !triple.c.is_finite() {
            return Err(Error::ContourInvalid);
        }
        let eps = inner_radius(triple, orders)?;
        let big = outer_radius(triple, orders);
        let (lo, hi) = ((eps / 10.0).ln(), (10.0 * big).ln());
        let opts = WindingOptions { density: 128, ..WindingOptions::default() };
        let mut fallback: Option<(f64, f64)> = None;
        for delta in DELTAS {
            let theta = PI / 2.0 + delta;
            match sector_report(triple, orders, theta, &opts) {
                Ok(rep) if rep.count == 0 => {}
                _ => continue,
            }
            let clearance = (0..RAY_PROBES)
                .map(|k| {
                    let r = (lo + (hi - lo) * k as f64 / (RAY_PROBES - 1) as f64).exp();
                    let s = Complex::new(r * theta.cos(), r * theta.sin());
                    eval_q(triple, orders, s).norm() / q_scale(triple, orders, r)
                })
                .fold(f64::INFINITY, f64::min);
            if clearance >= RAY_CLEARANCE {
                return Ok(Self::with_delta(triple, orders, delta));
            }
            if clearance >= RAY_CLEARANCE_MIN && fallback.is_none_or(|(_, c)| clearance > c) {
                fallback = Some((delta, clearance));
            }
        }
        match fallback {
            Some((delta, _)) => Ok(Self::with_delta(triple, orders, delta)),
            None => Err(Error::ContourInvalid),
        }
    }

    fn with_delta(triple: CharTriple, orders: FracOrders, delta: f64) -> Self {
        let (gl_x, gl_w) = gauss_legendre(PANEL_NODES);
        Self { triple, orders, delta, gl_x, gl_w }
    }

    pub fn triple(&self) -> CharTriple {
        self.triple
    }

    pub fn orders(&self) -> FracOrders {
        self.orders
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn r_max(&self) -> f64 {
        (40.0 / self.delta.sin()).max(4.0)
    }

    /// Contour geometry used for the block containing `t`.
    pub fn contour_spec(&self, t: f64) -> ContourSpec {
        let big_t = block_start(t);
        ContourSpec {
            mu: 1.0 / big_t,
            theta: PI / 2.0 + self.delta,
            ray_truncation: self.r_max() / big_t,
            nodes_per_unit: PANEL_NODES,
        }
    }

    /// `s^p W(s) / Q(s)`. For integer `p >= 0` the entire part `s^p W / c`
    /// has a vanishing contour integral; removing it avoids cancellation on
    /// contours close to the origin (`subtract`), but would introduce it
    /// far from the origin where `|Q| ≫ c`.
    fn integrand(&self, p: f64, weight: Weight, s: Complex, subtract: bool) -> Complex {
        let q = eval_q(self.triple, self.orders, s);
        let sp = cpow(s, p);
        let w = weight.eval(s);
        if subtract && p >= 0.0 && p == p.round() {
            let c = self.triple.c;
            -(sp * w) * (q - c) / (q * c)
        } else {
            sp * w / q
        }
    }

    /// Builds the rule for block `[T, 2T)` at refinement `level`.
    pub fn block_rule_at_level(&self, p: f64, weight: Weight, big_t: f64, level: u32) -> BlockRule {
        let theta = PI / 2.0 + self.delta;
        let split = 1usize << level;
        let r_max = self.r_max();
        let mut bounds = alloc::vec![1.0];
        let mut width = FIRST_PANEL;
        while *bounds.last().unwrap() < r_max {
            let next = (bounds.last().unwrap() + width).min(r_max);
            bounds.push(next);
            width = (width * PANEL_GROWTH).min(MAX_PANEL);
        }
        let ray_nodes = (bounds.len() - 1) * split * PANEL_NODES;
        let arc_nodes = ARC_PANELS * split * PANEL_NODES;
        let mut rule = BlockRule {
            block_start: big_t,
            nodes: Vec::with_capacity(2 * ray_nodes + arc_nodes),
            weights: Vec::with_capacity(2 * ray_nodes + arc_nodes),
        };
        // (1/2πi) · ds, with ds = dσ / T.
        let pref = Complex::new(0.0, -1.0 / (2.0 * PI * big_t));
        let subtract = big_t.powf(-self.orders.l()) <= self.triple.c;
        let mut push = |sigma: Complex, dsigma: Complex| {
            let f = self.integrand(p, weight, sigma / big_t, subtract);
            rule.nodes.push(sigma);
            rule.weights.push(pref * f * dsigma);
        };

        for sign in [-1.0, 1.0] {
            let dir = Complex::new(theta.cos(), sign * theta.sin());
            // The lower ray runs inward, the upper ray outward.
            let orient = sign;
            for win in bounds.windows(2) {
                let sub = (win[1] - win[0]) / split as f64;
                for k in 0..split {
                    let a = win[0] + k as f64 * sub;
                    for (x, w) in self.gl_x.iter().zip(&self.gl_w) {
                        let r = a + 0.5 * sub * (x + 1.0);
                        push(dir * r, dir * (orient * 0.5 * sub * w));
                    }
                }
            }
            if sign < 0.0 {
                let panels = ARC_PANELS * split;
                let sub = 2.0 * theta / panels as f64;
                for k in 0..panels {
                    let a = -theta + k as f64 * sub;
                    for (x, w) in self.gl_x.iter().zip(&self.gl_w) {
                        let phi = a + 0.5 * sub * (x + 1.0);
                        let e = Complex::new(phi.cos(), phi.sin());
                        push(e, Complex::new(0.0, 1.0) * e * (0.5 * sub * w));
                    }
                }
            }
        }
        rule
    }

    /// Refines the block rule until three probe values agree between
    /// consecutive levels.
    pub fn block_rule(&self, p: f64, weight: Weight, big_t: f64) -> Result<BlockRule> {
        let probes = [big_t, 1.5 * big_t, 2.0 * big_t];
        let mut prev = self.block_rule_at_level(p, weight, big_t, 0);
        let mut prev_vals: Vec<Complex> = probes.iter().map(|&t| prev.eval_complex(t)).collect();
        let mut last_diff = f64::INFINITY;
        for level in 1..=MAX_LEVEL {
            let next = self.block_rule_at_level(p, weight, big_t, level);
            let vals: Vec<Complex> = probes.iter().map(|&t| next.eval_complex(t)).collect();
            let scale = vals.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
            let floor = probes.iter().map(|&t| next.magnitude(t)).fold(0.0, f64::max) * 1e-13;
            let diff = vals
                .iter()
                .zip(&prev_vals)
                .map(|(a, b)| (a.re - b.re).abs() / (a.re.abs() + 1e-6 * scale + floor + f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            let imag = vals
                .iter()
                .map(|v| v.im.abs() / (v.re.abs() + 1e-6 * scale + floor + f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            if diff < ACCEPT_TOL {
                if imag > IMAG_TOL {
                    return Err(Error::QuadratureNotConverged { rel_diff: imag });
                }
                return Ok(next);
            }
            last_diff = diff;
            prev = next;
            prev_vals = vals;
        }
        if last_diff <= FAIL_TOL {
            Ok(prev)
        } else {
            Err(Error::QuadratureNotConverged { rel_diff: last_diff })
        }
    }

    /// `K_p(t)` with factor `W` at each `t > 0`, in input order.
    pub fn eval_many(&self, p: f64, weight: Weight, ts: &[f64]) -> Result<Vec<f64>> {
        let mut order: Vec<usize> = (0..ts.len()).collect();
        order.sort_by(|&i, &j| ts[i].total_cmp(&ts[j]));
        let mut out = alloc::vec![0.0; ts.len()];
        let mut current: Option<BlockRule> = None;
        for i in order {
            let t = ts[i];
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidConfig("kernel evaluation needs finite t > 0"));
            }
            let big_t = block_start(t);
            if current.as_ref().is_none_or(|r| r.block_start != big_t) {
                current = Some(self.block_rule(p, weight, big_t)?);
            }
            out[i] = current.as_ref().unwrap().eval_complex(t).re;
        }
        Ok(out)
    }

    /// `K_p(n h)` for `n = 1..=count`.
    pub fn eval_grid(&self, p: f64, weight: Weight, h: f64, count: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(count);
        let mut n = 1;
        while n <= count {
            let t = n as f64 * h;
            let big_t = block_start(t);
            // Last index still inside [T, 2T).
            let mut end = ((2.0 * big_t) / h).ceil() as usize;
            while end as f64 * h >= 2.0 * big_t {
                end -= 1;
            }
            while ((end + 1) as f64 * h) < 2.0 * big_t {
                end += 1;
            }
            let end = end.min(count).max(n);
            let rule = self.block_rule(p, weight, big_t)?;
            rule.eval_uniform(t, h, end - n + 1, &mut out);
            n = end + 1;
        }
        Ok(out)
    }

    /// `K_p(T (1 + j/per_block))` for `j = 0..=per_block` in the block
    /// starting at `big_t`.
    pub fn eval_block(&self, p: f64, big_t: f64, per_block: usize) -> Result<Vec<f64>> {
        let rule = self.block_rule(p, Weight::Plain, big_t)?;
        let mut out = Vec::with_capacity(per_block + 1);
        rule.eval_uniform(big_t, big_t / per_block as f64, per_block + 1, &mut out);
        Ok(out)
    }

    pub fn eval(&self, p: f64, t: f64) -> Result<f64> {
        Ok(self.eval_many(p, Weight::Plain, &[t])?[0])
    }
}

/// `T = 2^k` with `T <= t < 2T`.
pub fn block_start(t: f64) -> f64 {
    let k = libm::floor(libm::log2(t));
    let mut big_t = libm::exp2(k);
    // Guard against rounding in log2.
    if big_t > t {
        big_t *= 0.5;
    } else if 2.0 * big_t <= t {
        big_t *= 2.0;
    }
    big_t
}
