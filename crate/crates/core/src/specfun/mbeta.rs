//! `M_β = sup_{t} t^ν ∫_0^t |S^β(t - s)| s^{-ν} ds` over dyadic `t ∈ [1, t_max]`.
//!
//! The integral is split at `s = t/2`. On `[0, t/2]` the substitution
//! `s = (t/2) u^{1/(1-ν)}` absorbs `s^{-ν}`; on `[t/2, t]` the substitution
//! `t - s = (t/2) v^{1/β}` absorbs the `(t - s)^{β-1}` behaviour of the
//! kernel. Both halves are then smooth apart from kinks of `|S^β|`, and
//! composite Gauss–Legendre rules are doubled until they agree.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use super::{DyadicTable, Family, KernelEvaluator, SpecFunKind};
use crate::math::gauss_legendre;
use crate::{Error, Result};

const NODES: usize = 8;
const START_PANELS: usize = 4;
const MAX_PANELS: usize = 16384;
const REL_TOL: f64 = 1e-4;

/// `M_β` from an arbitrary kernel sampler (values are taken in absolute
/// value). `sample(ts)` must return the kernel at each `ts[i] > 0`.
pub fn m_beta_with<F>(mut sample: F, beta: f64, nu: f64, t_max: f64) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    if !(nu > 0.0 && nu < 1.0) || !(beta > 0.0) || !(t_max >= 1.0) {
        return Err(Error::InvalidConfig("need 0 < ν < 1, β > 0 and t_max >= 1"));
    }
    let (gx, gw) = gauss_legendre(NODES);
    let mut best: f64 = 0.0;
    let mut t = 1.0;
    while t <= t_max * (1.0 + 1e-12) {
        let half = 0.5 * t;
        let mut integral = |panels: usize| -> Result<f64> {
            let mut us = Vec::with_capacity(panels * NODES);
            let mut ws = Vec::with_capacity(panels * NODES);
            for k in 0..panels {
                let (a, w) = (k as f64 / panels as f64, 1.0 / panels as f64);
                for (x, wx) in gx.iter().zip(&gw) {
                    us.push(a + 0.5 * w * (x + 1.0));
                    ws.push(0.5 * w * wx);
                }
            }
            // Left half: argument of S is t - s(u).
            let left_args: Vec<f64> = us.iter().map(|u| t - half * u.powf(1.0 / (1.0 - nu))).collect();
            // Right half: τ(v) = (t/2) v^{1/β}.
            let right_args: Vec<f64> = us.iter().map(|v| half * v.powf(1.0 / beta)).collect();
            let mut args = left_args.clone();
            args.extend_from_slice(&right_args);
            let vals = sample(&args)?;
            let (left_vals, right_vals) = vals.split_at(us.len());
            let left: f64 =
                left_vals.iter().zip(&ws).map(|(s, w)| w * s.abs()).sum::<f64>() * half.powf(1.0 - nu) / (1.0 - nu);
            let right: f64 = right_vals
                .iter()
                .zip(&ws)
                .zip(us.iter().zip(&right_args))
                .map(|((s, w), (v, tau))| w * s.abs() * (t - tau).powf(-nu) * v.powf(1.0 / beta - 1.0))
                .sum::<f64>()
                * half
                / beta;
            Ok(left + right)
        };
        let mut panels = START_PANELS;
        let mut prev = integral(panels)?;
        loop {
            panels *= 2;
            let next = integral(panels)?;
            let diff = (next - prev).abs() / next.abs().max(f64::MIN_POSITIVE);
            prev = next;
            if diff < REL_TOL {
                break;
            }
            if panels >= MAX_PANELS {
                return Err(Error::QuadratureNotConverged { rel_diff: diff });
            }
        }
        best = best.max(t.powf(nu) * prev);
        t *= 2.0;
    }
    Ok(best)
}

/// `M_β` for the kernel `S^β` of the evaluator's system.
///
/// The kernel is tabulated once in a [`DyadicTable`] (as `τ^{1-β} S^β(τ)`,
/// which tends to a constant at `0⁺`) and interpolated, so the panel
/// doubling costs no further contour quadratures.
pub fn compute_m_beta(evaluator: &KernelEvaluator, kind: SpecFunKind, t_max: f64) -> Result<f64> {
    if kind.family != Family::S {
        return Err(Error::InvalidKernelIndex { family: 'S', index: kind.index.as_str() });
    }
    let table = s_table(evaluator, kind, t_max)?;
    m_beta_from_table(&table, evaluator, t_max)
}

/// Table of `S^β` suitable for [`m_beta_from_table`].
pub fn s_table(evaluator: &KernelEvaluator, kind: SpecFunKind, t_max: f64) -> Result<DyadicTable> {
    let beta = kind.index.value(evaluator.orders());
    let hi = libm::log2(t_max).ceil() as i32 + 1;
    DyadicTable::new(evaluator, kind, beta - 1.0, TABLE_MIN_LOG2, hi, TABLE_PER_BLOCK)
}

pub fn m_beta_from_table(table: &DyadicTable, evaluator: &KernelEvaluator, t_max: f64) -> Result<f64> {
    let orders = evaluator.orders();
    let beta = table.kind.index.value(orders);
    m_beta_with(|ts| Ok(ts.iter().map(|&t| table.value_at(t)).collect()), beta, orders.nu(), t_max)
}

const TABLE_PER_BLOCK: usize = 64;
const TABLE_MIN_LOG2: i32 = -30;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;
    use crate::specfun::KernelIndex;

    #[test]
    fn power_law_kernel_closed_form() {
        // |S| = τ^{β-1}: t^ν ∫_0^t (t-s)^{β-1} s^{-ν} ds = t^β B(β, 1-ν).
        let (beta, nu) = (0.5, 0.25);
        let m = m_beta_with(|ts| Ok(ts.iter().map(|t| t.powf(beta - 1.0)).collect()), beta, nu, 4.0).unwrap();
        let b = crate::math::gamma(beta) * crate::math::gamma(1.0 - nu) / crate::math::gamma(beta + 1.0 - nu);
        assert!((m - 4f64.powf(beta) * b).abs() < 1e-4 * m);
    }

    #[test]
    fn doubling_the_kernel_doubles_the_bound() {
        let ex = example(3).unwrap();
        let ev = KernelEvaluator::new(ex.system.char_triple(), ex.system.orders).unwrap();
        let kind = SpecFunKind::s(KernelIndex::Alpha1);
        let table = s_table(&ev, kind, 8.0).unwrap();
        let one = m_beta_with(|ts| Ok(ts.iter().map(|&t| table.value_at(t)).collect()), 0.6, 0.6, 8.0).unwrap();
        let two = m_beta_with(|ts| Ok(ts.iter().map(|&t| 2.0 * table.value_at(t)).collect()), 0.6, 0.6, 8.0).unwrap();
        assert!((two - 2.0 * one).abs() < 1e-12 * two);
    }

    #[test]
    fn tabulated_kernel_matches_direct_samples() {
        let ex = example(3).unwrap();
        let ev = KernelEvaluator::new(ex.system.char_triple(), ex.system.orders).unwrap();
        let kind = SpecFunKind::s(KernelIndex::Alpha1);
        let direct = m_beta_with(|ts| ev.kernel_many(kind, ts), 0.6, 0.6, 4.0).unwrap();
        let tabled = compute_m_beta(&ev, kind, 4.0).unwrap();
        assert!((direct - tabled).abs() < 2e-4 * direct, "{direct} vs {tabled}");
    }
}
