//! Kernel tables.
//!
//! - [`KernelTable`]: samples on a uniform grid with monotone cubic
//!   interpolation between them.
//! - [`DyadicTable`]: samples uniform inside each dyadic block, covering
//!   many orders of magnitude in `t`.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use super::{KernelEvaluator, SpecFunKind, Weight};
use crate::Result;

/// `K(n h)` for `n = 1..=count`, filled once and read-only afterwards.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub kind: SpecFunKind,
    pub h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl KernelTable {
    pub fn new(evaluator: &KernelEvaluator, kind: SpecFunKind, h: f64, count: usize) -> Result<Self> {
        let p = kind.laplace_power(evaluator.orders());
        let values = evaluator.eval_grid(p, Weight::Plain, h, count)?;
        let slopes = fritsch_carlson(&values, h);
        Ok(Self { kind, h, values, slopes })
    }

    /// Samples at `h, 2h, …`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Interpolated value for `h <= t <= count·h`; `None` outside.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let x = t / self.h - 1.0;
        let last = self.values.len().checked_sub(1)?;
        if !(x >= 0.0) || x > last as f64 {
            return None;
        }
        let i = (x.floor() as usize).min(last.saturating_sub(1));
        if last == 0 {
            return Some(self.values[0]);
        }
        let u = x - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.h, self.slopes[i + 1] * self.h);
        let (u2, u3) = (u * u, u * u * u);
        Some((2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * m1)
    }
}

/// `g(t) = t^{-q} K(t)` at `t = 2^k (1 + j/m)` for `k_lo <= k < k_hi`,
/// `0 <= j <= m`, read back by four-point Lagrange interpolation inside
/// the block. `q` is chosen to cancel the power behaviour of `K` at `0⁺`,
/// so below the table `g` is held at its first value.
#[derive(Debug, Clone)]
pub struct DyadicTable {
    pub kind: SpecFunKind,
    q: f64,
    k_lo: i32,
    per_block: usize,
    g: Vec<Vec<f64>>,
}

impl DyadicTable {
    pub fn new(
        evaluator: &KernelEvaluator,
        kind: SpecFunKind,
        q: f64,
        k_lo: i32,
        k_hi: i32,
        per_block: usize,
    ) -> Result<Self> {
        let p = kind.laplace_power(evaluator.orders());
        let per_block = per_block.max(3);
        let mut g = Vec::with_capacity((k_hi - k_lo).max(0) as usize);
        for k in k_lo..k_hi {
            let big_t = libm::exp2(k as f64);
            let vals = evaluator.eval_block(p, big_t, per_block)?;
            let row = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * (big_t * (1.0 + j as f64 / per_block as f64)).powf(-q))
                .collect();
            g.push(row);
        }
        Ok(Self { kind, q, k_lo, per_block, g })
    }

    /// Every sample as `(t, K(t))`.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.g.iter().enumerate().flat_map(move |(b, row)| {
            let big_t = libm::exp2((self.k_lo + b as i32) as f64);
            row.iter().enumerate().map(move |(j, g)| {
                let t = big_t * (1.0 + j as f64 / self.per_block as f64);
                (t, g * t.powf(self.q))
            })
        })
    }

    /// Interpolated `K(t)`; clamped to the table's range in `g`.
    pub fn value_at(&self, t: f64) -> f64 {
        let lo = libm::exp2(self.k_lo as f64);
        let gv = if t <= lo {
            self.g[0][0]
        } else {
            let b = (libm::log2(t).floor() as i32 - self.k_lo) as usize;
            if b >= self.g.len() {
                *self.g.last().unwrap().last().unwrap()
            } else {
                let big_t = libm::exp2((self.k_lo + b as i32) as f64);
                let x = (t / big_t - 1.0) * self.per_block as f64;
                let row = &self.g[b];
                let i = (x.floor() as usize).clamp(1, self.per_block - 2);
                let u = x - i as f64;
                let (y0, y1, y2, y3) = (row[i - 1], row[i], row[i + 1], row[i + 2]);
                -u * (u - 1.0) * (u - 2.0) / 6.0 * y0 + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * y1
                    - (u + 1.0) * u * (u - 2.0) / 2.0 * y2
                    + (u + 1.0) * u * (u - 1.0) / 6.0 * y3
            }
        };
        gv * t.powf(self.q)
    }
}

/// Monotonicity-preserving derivative estimates.
fn fritsch_carlson(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    if n < 2 {
        return alloc::vec![0.0; n];
    }
    let d: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let mut m = alloc::vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        m[i] = if d[i - 1] * d[i] <= 0.0 { 0.0 } else { 0.5 * (d[i - 1] + d[i]) };
    }
    for i in 0..n - 1 {
        if d[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let (a, b) = (m[i] / d[i], m[i + 1] / d[i]);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m[i] = tau * a * d[i];
            m[i + 1] = tau * b * d[i];
        }
    }
    m
}
