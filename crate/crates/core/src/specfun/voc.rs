//! Variation-of-constants solution of `D^α x = A x + g(t)`:
//!
//! ```text
//! φ1 = (R⁰ - a22 R^α2) x1 + a12 R^α1 x2 + (S^α1 - a22 S^l) ∗ g1 + a12 S^l ∗ g2
//! φ2 = a21 R^α2 x1 + (R⁰ - a11 R^α1) x2 + a21 S^l ∗ g1 + (S^α2 - a11 S^l) ∗ g2
//! ```

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use super::{ConvolutionKernel, KernelEvaluator, KernelIndex, SpecFunKind, Weight};
use crate::system::PlanarSystem;
use crate::trajectory::{Method, Trajectory};
use crate::{Error, Result};

/// Everything needed to evaluate the formula on the grid `t_n = n h`,
/// `n = 0..=len`, for any initial value and any sampled `g`.
#[derive(Debug, Clone)]
pub struct VocOperator {
    pub h: f64,
    matrix: [[f64; 2]; 2],
    /// `R⁰, R^α1, R^α2` at `t_n`, with the `t → 0⁺` limits at `n = 0`.
    r: [Vec<f64>; 3],
    /// Row-major `[[K11, K12], [K21, K22]]`.
    k: [[ConvolutionKernel; 2]; 2],
}

impl VocOperator {
    pub fn new(evaluator: &KernelEvaluator, matrix: [[f64; 2]; 2], h: f64, len: usize) -> Result<Self> {
        if !(h > 0.0) || len == 0 {
            return Err(Error::InvalidConfig("grid needs h > 0 and at least one step"));
        }
        let orders = evaluator.orders();
        let mut r: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (slot, index) in r.iter_mut().zip([KernelIndex::Zero, KernelIndex::Alpha1, KernelIndex::Alpha2]) {
            let kind = SpecFunKind::r(index);
            let mut v = Vec::with_capacity(len + 1);
            v.push(kind.value_at_zero(orders).unwrap_or(0.0));
            v.extend(evaluator.eval_grid(kind.laplace_power(orders), Weight::Plain, h, len)?);
            *slot = v;
        }
        let s1 = ConvolutionKernel::new(evaluator, SpecFunKind::s(KernelIndex::Alpha1), h, len)?;
        let s2 = ConvolutionKernel::new(evaluator, SpecFunKind::s(KernelIndex::Alpha2), h, len)?;
        let sl = ConvolutionKernel::new(evaluator, SpecFunKind::s(KernelIndex::L), h, len)?;
        let [[a11, a12], [a21, a22]] = matrix;
        let k = [
            [ConvolutionKernel::combine(&[(1.0, &s1), (-a22, &sl)])?, sl.scaled(a12)],
            [sl.scaled(a21), ConvolutionKernel::combine(&[(1.0, &s2), (-a11, &sl)])?],
        ];
        Ok(Self { h, matrix, r, k })
    }

    /// Builds the operator for a system, checking that its contour exists.
    pub fn for_system(system: &PlanarSystem, h: f64, len: usize) -> Result<Self> {
        let ev = KernelEvaluator::new(system.char_triple(), system.orders)?;
        Self::new(&ev, system.matrix, h, len)
    }

    /// Largest grid index.
    pub fn len(&self) -> usize {
        self.r[0].len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The initial-value part alone.
    pub fn homogeneous(&self, x0: [f64; 2]) -> Vec<[f64; 2]> {
        let [[a11, a12], [a21, a22]] = self.matrix;
        let [r0, r1, r2] = &self.r;
        let mut out: Vec<[f64; 2]> = (0..=self.len())
            .map(|n| {
                [
                    (r0[n] - a22 * r2[n]) * x0[0] + a12 * r1[n] * x0[1],
                    a21 * r2[n] * x0[0] + (r0[n] - a11 * r1[n]) * x0[1],
                ]
            })
            .collect();
        out[0] = x0;
        out
    }

    /// Full formula with `g_i` sampled at `t_n`. The result has as many
    /// samples as `g[0]` (at most `len + 1`), so shorter inputs give the
    /// solution on an initial segment of the grid.
    pub fn apply(&self, x0: [f64; 2], g: [&[f64]; 2]) -> Vec<[f64; 2]> {
        let n = g[0].len().min(self.len() + 1);
        let mut out = self.homogeneous(x0);
        out.truncate(n);
        let mut comp = [alloc::vec![0.0; n], alloc::vec![0.0; n]];
        for (i, c) in comp.iter_mut().enumerate() {
            for (j, gj) in g.iter().enumerate() {
                if gj.iter().any(|v| *v != 0.0) {
                    self.k[i][j].apply_add(gj, c);
                }
            }
        }
        for (k, x) in out.iter_mut().enumerate().skip(1) {
            x[0] += comp[0][k];
            x[1] += comp[1][k];
        }
        out
    }
}

impl VocOperator {
    /// The formula at indices `lo..=hi` only (`1 <= lo`, `g` reaching `hi`).
    pub fn apply_range(&self, x0: [f64; 2], g: [&[f64]; 2], lo: usize, hi: usize) -> Vec<[f64; 2]> {
        let [[a11, a12], [a21, a22]] = self.matrix;
        let [r0, r1, r2] = &self.r;
        let active = [g[0].iter().any(|v| *v != 0.0), g[1].iter().any(|v| *v != 0.0)];
        (lo.max(1)..=hi)
            .map(|n| {
                let mut x = [
                    (r0[n] - a22 * r2[n]) * x0[0] + a12 * r1[n] * x0[1],
                    a21 * r2[n] * x0[0] + (r0[n] - a11 * r1[n]) * x0[1],
                ];
                for (i, xi) in x.iter_mut().enumerate() {
                    for j in 0..2 {
                        if active[j] {
                            *xi += self.k[i][j].value_at(g[j], n);
                        }
                    }
                }
                x
            })
            .collect()
    }
}

/// Solves `D^α x = A x + f(t)` on `[0, t_end]` with step `h` through the
/// kernel representation.
pub fn linear_voc_solution(system: &PlanarSystem, x0: [f64; 2], h: f64, t_end: f64) -> Result<Trajectory> {
    let system = system.validate()?;
    if !system.is_linear() {
        return Err(Error::InvalidConfig("variation of constants needs a linear system"));
    }
    if !(h > 0.0) || !(t_end >= h) {
        return Err(Error::InvalidConfig("need h > 0 and t_end >= h"));
    }
    let len = (t_end / h).round() as usize;
    let op = VocOperator::for_system(&system, h, len)?;
    let mut g = [Vec::with_capacity(len + 1), Vec::with_capacity(len + 1)];
    for n in 0..=len {
        let f = system.forcing_at(n as f64 * h);
        g[0].push(f[0]);
        g[1].push(f[1]);
    }
    let samples = op.apply(x0, [&g[0], &g[1]]);
    Ok(Trajectory::new(0.0, h, samples, Method::Voc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::gamma;
    use crate::system::FracOrders;

    fn ml(alpha: f64, z: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..400 {
            let term = z.powi(k) / gamma(alpha * k as f64 + 1.0);
            sum += term;
            if k > 10 && term.abs() < 1e-18 {
                break;
            }
        }
        sum
    }

    #[test]
    fn range_evaluation_matches_full_application() {
        let ex = crate::catalog::example(3).unwrap();
        let op = VocOperator::for_system(&ex.system, 0.05, 60).unwrap();
        let g1: Vec<f64> = (0..=60).map(|n| (n as f64 * 0.1).sin()).collect();
        let g2: Vec<f64> = (0..=60).map(|n| 1.0 / (1.0 + n as f64)).collect();
        let full = op.apply([1.0, -1.0], [&g1, &g2]);
        let part = op.apply_range([1.0, -1.0], [&g1, &g2], 20, 45);
        for (k, x) in part.iter().enumerate() {
            assert!((x[0] - full[20 + k][0]).abs() < 1e-14 && (x[1] - full[20 + k][1]).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let o = FracOrders::new(1.0 / 3.0, 0.5).unwrap();
        let s = PlanarSystem::new([[0.0, 0.25], [-2.0, 1.0]], o);
        let tr = linear_voc_solution(&s, [0.0, 0.0], 0.01, 1.0).unwrap();
        assert!(tr.samples.iter().all(|x| x[0] == 0.0 && x[1] == 0.0));
    }

    #[test]
    fn decoupled_system_matches_mittag_leffler() {
        let o = FracOrders::new(0.55, 0.85).unwrap();
        let (a11, a22) = (-1.2, -0.4);
        let s = PlanarSystem::new([[a11, 0.0], [0.0, a22]], o);
        let x0 = [1.5, -0.5];
        let tr = linear_voc_solution(&s, x0, 0.01, 2.0).unwrap();
        for (t, x) in tr.iter().step_by(10) {
            let want = [ml(0.55, a11 * t.powf(0.55)) * x0[0], ml(0.85, a22 * t.powf(0.85)) * x0[1]];
            assert!((x[0] - want[0]).abs() < 1e-6 && (x[1] - want[1]).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn tends_to_the_initial_value() {
        let ex = crate::catalog::example(3).unwrap();
        let tr = linear_voc_solution(&ex.system, [1.0, 2.0], 1e-7, 5e-7).unwrap();
        assert_eq!(tr.samples[0], [1.0, 2.0]);
        let x = tr.samples[1];
        assert!((x[0] - 1.0).abs() < 1e-3 && (x[1] - 2.0).abs() < 1e-3, "{x:?}");
        // Leading behaviour x1 ≈ 1 + (x1 + 2 x2 + f1)(0) t^0.6 / Γ(1.6).
        let t: f64 = 1e-7;
        let lead = 6.0 * t.powf(0.6) / gamma(1.6);
        assert!(((x[0] - 1.0) - lead).abs() < 0.1 * lead);
    }
}
