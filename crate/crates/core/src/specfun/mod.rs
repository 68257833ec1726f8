//! The kernels of the variation-of-constants formula
//!
//! ```text
//! R^λ(t) = L⁻¹{ s^(l-λ-1) / Q(s) },   λ ∈ {0, α1, α2}
//! S^β(t) = L⁻¹{ s^(l-β)   / Q(s) },   β ∈ {α1, α2, l}
//! ```
//!
//! evaluated by contour quadrature ([`contour`]), their convolutions with
//! sampled functions ([`convolution`]), the resulting linear solution
//! ([`voc`]) and the weighted convolution bounds `M_β` ([`mbeta`]).

pub mod contour;
pub mod convolution;
pub mod mbeta;
pub mod table;
pub mod voc;

pub use contour::{block_start, BlockRule, ContourSpec, KernelEvaluator, Weight};
pub use convolution::{convolve_s, ConvolutionKernel};
pub use mbeta::{compute_m_beta, m_beta_from_table, m_beta_with, s_table};
pub use table::{DyadicTable, KernelTable};
pub use voc::{linear_voc_solution, VocOperator};

use crate::system::{CharTriple, FracOrders};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    R,
    S,
}

/// Which of `0`, `α1`, `α2`, `l = α1 + α2` a kernel is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelIndex {
    Zero,
    Alpha1,
    Alpha2,
    L,
}

impl KernelIndex {
    pub fn value(&self, orders: FracOrders) -> f64 {
        match self {
            KernelIndex::Zero => 0.0,
            KernelIndex::Alpha1 => orders.alpha1(),
            KernelIndex::Alpha2 => orders.alpha2(),
            KernelIndex::L => orders.l(),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            KernelIndex::Zero => "0",
            KernelIndex::Alpha1 => "a1",
            KernelIndex::Alpha2 => "a2",
            KernelIndex::L => "l",
        }
    }
}

/// A member of the `R` or `S` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpecFunKind {
    pub family: Family,
    pub index: KernelIndex,
}

impl SpecFunKind {
    /// `R` admits `0, α1, α2`; `S` admits `α1, α2, l`.
    pub fn new(family: Family, index: KernelIndex) -> Result<Self> {
        let ok = match family {
            Family::R => index != KernelIndex::L,
            Family::S => index != KernelIndex::Zero,
        };
        if ok {
            Ok(Self { family, index })
        } else {
            let f = if family == Family::R { 'R' } else { 'S' };
            Err(Error::InvalidKernelIndex { family: f, index: index.as_str() })
        }
    }

    pub const fn r(index: KernelIndex) -> Self {
        Self { family: Family::R, index }
    }

    pub const fn s(index: KernelIndex) -> Self {
        Self { family: Family::S, index }
    }

    /// Exponent `p` in `L⁻¹{ s^p / Q }`.
    pub fn laplace_power(&self, orders: FracOrders) -> f64 {
        let (a1, a2) = (orders.alpha1(), orders.alpha2());
        match (self.family, self.index) {
            (Family::R, KernelIndex::Zero) => a1 + a2 - 1.0,
            (Family::R, KernelIndex::Alpha1) => a2 - 1.0,
            (Family::R, KernelIndex::Alpha2) => a1 - 1.0,
            (Family::S, KernelIndex::Alpha1) => a2,
            (Family::S, KernelIndex::Alpha2) => a1,
            (Family::S, KernelIndex::L) => 0.0,
            (Family::R, KernelIndex::L) => -1.0,
            (Family::S, KernelIndex::Zero) => a1 + a2,
        }
    }

    /// Limit of the kernel as `t → 0⁺`, when finite: `lim s^(p+1)/Q(s)` as
    /// `s → ∞`, which is 1 when `p + 1 = l` and 0 when `p + 1 < l`.
    pub fn value_at_zero(&self, orders: FracOrders) -> Option<f64> {
        let gap = orders.l() - self.laplace_power(orders) - 1.0;
        if gap.abs() < 1e-14 {
            Some(1.0)
        } else if gap > 0.0 {
            Some(0.0)
        } else {
            None
        }
    }
}

/// `R^λ(t)` by contour quadrature.
pub fn eval_r(kind: SpecFunKind, t: f64, triple: CharTriple, orders: FracOrders) -> Result<f64> {
    if kind.family != Family::R {
        return Err(Error::InvalidKernelIndex { family: 'R', index: kind.index.as_str() });
    }
    KernelEvaluator::new(triple, orders)?.kernel(kind, t)
}

/// `S^β(t)` by contour quadrature.
pub fn eval_s(kind: SpecFunKind, t: f64, triple: CharTriple, orders: FracOrders) -> Result<f64> {
    if kind.family != Family::S {
        return Err(Error::InvalidKernelIndex { family: 'S', index: kind.index.as_str() });
    }
    KernelEvaluator::new(triple, orders)?.kernel(kind, t)
}

impl KernelEvaluator {
    /// Kernel value at `t > 0`.
    pub fn kernel(&self, kind: SpecFunKind, t: f64) -> Result<f64> {
        self.eval(kind.laplace_power(self.orders()), t)
    }

    /// Kernel values at many `t > 0`.
    pub fn kernel_many(&self, kind: SpecFunKind, ts: &[f64]) -> Result<alloc::vec::Vec<f64>> {
        self.eval_many(kind.laplace_power(self.orders()), Weight::Plain, ts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_indices() {
        assert!(SpecFunKind::new(Family::R, KernelIndex::Zero).is_ok());
        assert!(SpecFunKind::new(Family::R, KernelIndex::L).is_err());
        assert!(SpecFunKind::new(Family::S, KernelIndex::Zero).is_err());
        assert!(SpecFunKind::new(Family::S, KernelIndex::L).is_ok());
    }

    #[test]
    fn values_at_zero() {
        let o = FracOrders::new(0.3, 0.5).unwrap();
        assert_eq!(SpecFunKind::r(KernelIndex::Zero).value_at_zero(o), Some(1.0));
        assert_eq!(SpecFunKind::r(KernelIndex::Alpha2).value_at_zero(o), Some(0.0));
        assert_eq!(SpecFunKind::s(KernelIndex::Alpha1).value_at_zero(o), None);
    }

    #[test]
    fn r_zero_tends_to_one() {
        let o = FracOrders::new(1.0 / 3.0, 0.5).unwrap();
        let t = CharTriple::new(0.0, 0.0, 1.0);
        let v = eval_r(SpecFunKind::r(KernelIndex::Zero), 1e-9, t, o).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }
}
