//! Product-integration weights for `(K ∗ g)(t_n) = ∫_0^{t_n} K(t_n - u) g(u) du`
//! with `g` interpolated linearly between grid samples.
//!
//! Over `[t_m, t_{m+1}]` the kernel enters only through the moments
//! `A_m = ∫ K(u) du` and `B_m = ∫ K(u) (u - t_m)/h du`. Both are computed
//! as contour integrals of the kernel transform times `(e^{sh} - 1)/s` and
//! `∫_0^h v e^{sv} dv / h`, so no differences of nearly equal numbers are
//! formed and the weak singularity of `K` at the origin is integrated
//! exactly. The first interval uses the antiderivatives `K_{p-1}` and
//! `K_{p-2}` at `t = h` instead.

use alloc::vec::Vec;

use super::{Family, KernelEvaluator, SpecFunKind, Weight};
use crate::{Error, Result};

/// Convolution weights for one kernel (or a linear combination of
/// kernels) on a fixed grid `t_n = n h`, `n = 0..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionKernel {
    pub h: f64,
    /// `ω_0 = A_0 - B_0`, `ω_m = A_m - B_m + B_{m-1}`.
    omega: Vec<f64>,
    /// `B_m`, the weight of `g_0` in `(K ∗ g)(t_{m+1})`.
    ramp: Vec<f64>,
}

impl ConvolutionKernel {
    /// Weights for `K_p` with `p` the Laplace exponent of `kind`, for grid
    /// indices up to `len`.
    pub fn new(evaluator: &KernelEvaluator, kind: SpecFunKind, h: f64, len: usize) -> Result<Self> {
        Self::for_power(evaluator, kind.laplace_power(evaluator.orders()), h, len)
    }

    pub fn for_power(evaluator: &KernelEvaluator, p: f64, h: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Ok(Self { h, omega: Vec::new(), ramp: Vec::new() });
        }
        let first = evaluator.eval_many(p - 1.0, Weight::Plain, &[h])?[0];
        let second = evaluator.eval_many(p - 2.0, Weight::Plain, &[h])?[0];
        let mut a = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        a.push(first);
        b.push(first - second / h);
        if len > 1 {
            a.extend(evaluator.eval_grid(p, Weight::Step(h), h, len - 1)?);
            b.extend(evaluator.eval_grid(p, Weight::Ramp(h), h, len - 1)?);
        }
        let mut omega = Vec::with_capacity(len);
        omega.push(a[0] - b[0]);
        for m in 1..len {
            omega.push(a[m] - b[m] + b[m - 1]);
        }
        Ok(Self { h, omega, ramp: b })
    }

    /// Largest `n` for which `(K ∗ g)(t_n)` is available.
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// `Σ c_k K_k` over kernels on the same grid.
    pub fn combine(parts: &[(f64, &ConvolutionKernel)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::InvalidConfig("empty kernel combination"))?.1;
        let (h, len) = (first.h, first.len());
        if parts.iter().any(|(_, k)| k.h != h || k.len() != len) {
            return Err(Error::InvalidConfig("kernels live on different grids"));
        }
        let mut omega = alloc::vec![0.0; len];
        let mut ramp = alloc::vec![0.0; len];
        for (c, k) in parts {
            for i in 0..len {
                omega[i] += c * k.omega[i];
                ramp[i] += c * k.ramp[i];
            }
        }
        Ok(Self { h, omega, ramp })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            h: self.h,
            omega: self.omega.iter().map(|w| c * w).collect(),
            ramp: self.ramp.iter().map(|w| c * w).collect(),
        }
    }

    /// `(K ∗ g)(t_n)` for `n = 0..g.len()`, where `g[j] = g(t_j)`.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; g.len()];
        self.apply_add(g, &mut out);
        out
    }

    /// `(K ∗ g)(t_n)` for a single `n >= 1` (`g` must reach index `n`).
    #[inline]
    pub fn value_at(&self, g: &[f64], n: usize) -> f64 {
        let hist: f64 = self.omega[..n].iter().zip(g[1..=n].iter().rev()).map(|(w, v)| w * v).sum();
        hist + self.ramp[n - 1] * g[0]
    }

    /// Adds `(K ∗ g)(t_n)` to `out[n]`.
    pub fn apply_add(&self, g: &[f64], out: &mut [f64]) {
        let n_max = g.len().min(out.len()).saturating_sub(1).min(self.len());
        for n in 1..=n_max {
            // Σ_{m=0}^{n-1} ω_m g_{n-m}
            let hist: f64 = self.omega[..n].iter().zip(g[1..=n].iter().rev()).map(|(w, v)| w * v).sum();
            out[n] += hist + self.ramp[n - 1] * g[0];
        }
    }
}

/// `(S^β ∗ f)(n h)` for `n = 0..=count`.
pub fn convolve_s(
    evaluator: &KernelEvaluator,
    kind: SpecFunKind,
    f: impl Fn(f64) -> f64,
    h: f64,
    count: usize,
) -> Result<Vec<f64>> {
    if kind.family != Family::S {
        return Err(Error::InvalidKernelIndex { family: 'S', index: kind.index.as_str() });
    }
    let g: Vec<f64> = (0..=count).map(|n| f(n as f64 * h)).collect();
    if g.iter().all(|v| *v == 0.0) {
        return Ok(alloc::vec![0.0; count + 1]);
    }
    let k = ConvolutionKernel::new(evaluator, kind, h, count)?;
    Ok(k.apply(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::gamma;
    use crate::specfun::KernelIndex;
    use crate::system::{CharTriple, FracOrders};

    fn ml(alpha: f64, beta: f64, z: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..400 {
            let term = z.powi(k) / gamma(alpha * k as f64 + beta);
            sum += term;
            if k > 10 && term.abs() < 1e-18 {
                break;
            }
        }
        sum
    }

    #[test]
    fn zero_input_gives_zero() {
        let o = FracOrders::new(0.3, 0.6).unwrap();
        let ev = KernelEvaluator::new(CharTriple::new(-1.0, -1.0, 1.0), o).unwrap();
        let v = convolve_s(&ev, SpecFunKind::s(KernelIndex::Alpha1), |_| 0.0, 0.01, 50).unwrap();
        assert!(v.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn constant_input_matches_mittag_leffler() {
        // Diagonal A: (S^α1 - a22 S^l) ∗ 1 = (E_α1(a11 t^α1) - 1)/a11.
        let (a11, a22) = (-0.8, -0.5);
        let o = FracOrders::new(0.45, 0.7).unwrap();
        let ev = KernelEvaluator::new(CharTriple::new(a11, a22, a11 * a22), o).unwrap();
        let (h, n) = (0.01, 200);
        let k1 = ConvolutionKernel::new(&ev, SpecFunKind::s(KernelIndex::Alpha1), h, n).unwrap();
        let kl = ConvolutionKernel::new(&ev, SpecFunKind::s(KernelIndex::L), h, n).unwrap();
        let k = ConvolutionKernel::combine(&[(1.0, &k1), (-a22, &kl)]).unwrap();
        let out = k.apply(&alloc::vec![1.0; n + 1]);
        for i in [1usize, 10, 100, 200] {
            let t = i as f64 * h;
            let want = (ml(0.45, 1.0, a11 * t.powf(0.45)) - 1.0) / a11;
            assert!((out[i] - want).abs() < 1e-9 * want.abs().max(1e-3), "t={t}: {} vs {want}", out[i]);
        }
    }

    #[test]
    fn linear_in_the_input() {
        let o = FracOrders::new(0.3, 0.4).unwrap();
        let ev = KernelEvaluator::new(CharTriple::new(1.0, 1.0, 3.0), o).unwrap();
        let k = ConvolutionKernel::new(&ev, SpecFunKind::s(KernelIndex::Alpha2), 0.02, 300).unwrap();
        let f: Vec<f64> = (0..=300).map(|n| (n as f64 * 0.02).sin()).collect();
        let g: Vec<f64> = (0..=300).map(|n| 1.0 / (1.0 + n as f64 * 0.02)).collect();
        let mix: Vec<f64> = f.iter().zip(&g).map(|(x, y)| 2.5 * x - 0.7 * y).collect();
        let (cf, cg, cm) = (k.apply(&f), k.apply(&g), k.apply(&mix));
        for i in 0..=300 {
            assert!((cm[i] - (2.5 * cf[i] - 0.7 * cg[i])).abs() < 1e-9);
        }
    }
}
