//! Asymptotic stability of `D^α x = A x`: every zero of `Q` must lie in the
//! open left half-plane.
//!
//! [`stability_verdict`] combines the closed-form [`criteria`], the
//! imaginary-axis test in [`imaginary`] and the zero count in [`winding`].

pub mod criteria;
pub mod imaginary;
pub mod winding;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

pub use criteria::{evaluate_criteria, sufficient_criteria, Criterion, CriterionCheck};
pub use imaginary::{imaginary_zero_test, ImaginaryZeroReport};
pub use winding::{sector_report, winding_count, winding_report, WindingOptions, WindingReport};

use crate::system::{CharTriple, FracOrders, PlanarSystem};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityStatus {
    AsymptoticallyStable,
    NotAsymptoticallyStable,
    Inconclusive,
}

impl StabilityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityStatus::AsymptoticallyStable => "AsymptoticallyStable",
            StabilityStatus::NotAsymptoticallyStable => "NotAsymptoticallyStable",
            StabilityStatus::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub criteria_hit: Vec<Criterion>,
    pub winding_count: Option<i64>,
    pub imaginary_zero_free: Option<bool>,
    pub diagnostics: String,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        self.status == StabilityStatus::AsymptoticallyStable
    }
}

/// Verdict for a validated system with `α1 < α2`.
pub fn stability_verdict(system: &PlanarSystem) -> Result<StabilityVerdict> {
    triple_verdict(system.char_triple(), system.orders)
}

/// Verdict from the coefficients alone.
///
/// Order of decisions: `c <= 0` is never stable (`Q(0) = c` and `Q → +∞`
/// along the positive axis, or `s = 0` is itself a zero); a matching
/// closed-form criterion is sufficient; otherwise a zero-free imaginary axis
/// together with a zero count of 0 is stable, a located imaginary zero or a
/// positive count is not, and anything else is inconclusive.
pub fn triple_verdict(triple: CharTriple, orders: FracOrders) -> Result<StabilityVerdict> {
    triple_verdict_with(triple, orders, &WindingOptions::default())
}

/// [`triple_verdict`] with explicit zero-count options.
pub fn triple_verdict_with(triple: CharTriple, orders: FracOrders, opts: &WindingOptions) -> Result<StabilityVerdict> {
    let checks = evaluate_criteria(triple, orders)?;
    let criteria_hit: Vec<Criterion> = checks.iter().filter(|c| c.holds).map(|c| c.criterion).collect();
    let mut diagnostics = String::new();
    for c in checks.iter().filter(|c| c.boundary) {
        let _ = writeln!(diagnostics, "criterion boundary: {} holds with equality to 1e-12", c.criterion);
    }

    if triple.c <= 0.0 {
        if triple.c == 0.0 {
            diagnostics.push_str("c = 0: Q(s) = s^α1 (s^α2 - a s^(α2-α1) - b), so s = 0 is a zero on the boundary\n");
            return Ok(StabilityVerdict {
                status: StabilityStatus::NotAsymptoticallyStable,
                criteria_hit,
                winding_count: None,
                imaginary_zero_free: None,
                diagnostics,
            });
        }
        diagnostics.push_str("c < 0: Q has a positive real zero\n");
        let winding = match winding_report(triple, orders, opts).map(|r| r.count) {
            Ok(z) => Some(z),
            Err(e) => {
                let _ = writeln!(diagnostics, "zero count failed: {e}");
                None
            }
        };
        return Ok(StabilityVerdict {
            status: StabilityStatus::NotAsymptoticallyStable,
            criteria_hit,
            winding_count: winding,
            imaginary_zero_free: None,
            diagnostics,
        });
    }

    let imag = match imaginary_zero_test(triple, orders) {
        Ok(r) => {
            if !r.zero_free {
                let _ = writeln!(diagnostics, "imaginary zeros at ω = {:?}", r.scan_roots_omega);
            }
            if r.closed_form_zero_free == Some(true) && !r.zero_free {
                diagnostics.push_str("closed-form imaginary test disagrees with scan\n");
            }
            Some(r.zero_free)
        }
        Err(e) => {
            let _ = writeln!(diagnostics, "imaginary-axis test failed: {e}");
            None
        }
    };
    let winding = match winding_report(triple, orders, opts).map(|r| r.count) {
        Ok(z) => Some(z),
        Err(e) => {
            let _ = writeln!(diagnostics, "zero count failed: {e}");
            None
        }
    };

    let status = if !criteria_hit.is_empty() {
        if winding.is_some_and(|z| z != 0) || imag == Some(false) {
            diagnostics.push_str("closed-form criterion disagrees with numerical zero location\n");
        }
        StabilityStatus::AsymptoticallyStable
    } else if imag == Some(true) && winding == Some(0) {
        StabilityStatus::AsymptoticallyStable
    } else if imag == Some(false) || winding.is_some_and(|z| z >= 1) {
        StabilityStatus::NotAsymptoticallyStable
    } else {
        StabilityStatus::Inconclusive
    };
    if status == StabilityStatus::Inconclusive && diagnostics.is_empty() {
        diagnostics = format!("no criterion applies and the zero count was {winding:?}");
    }
    Ok(StabilityVerdict { status, criteria_hit, winding_count: winding, imaginary_zero_free: imag, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;

    #[test]
    fn reference_example_is_stable() {
        let v = stability_verdict(&example(1).unwrap().system).unwrap();
        assert_eq!(v.status, StabilityStatus::AsymptoticallyStable);
        assert!(v.criteria_hit.contains(&Criterion::VanishingA));
        assert_eq!(v.winding_count, Some(0));
        assert_eq!(v.imaginary_zero_free, Some(true));
    }

    #[test]
    fn negative_c_is_unstable() {
        let o = FracOrders::new(0.3, 0.6).unwrap();
        let v = triple_verdict(CharTriple::new(0.2, 0.3, -1.0), o).unwrap();
        assert_eq!(v.status, StabilityStatus::NotAsymptoticallyStable);
        let v = triple_verdict(CharTriple::new(0.2, 0.3, 0.0), o).unwrap();
        assert_eq!(v.status, StabilityStatus::NotAsymptoticallyStable);
        assert!(v.diagnostics.contains("c = 0"));
    }

    #[test]
    fn positive_large_example_is_stable() {
        let v = triple_verdict(CharTriple::new(1.0, 1.0, 3.0), FracOrders::new(0.3, 0.4).unwrap()).unwrap();
        assert_eq!(v.status, StabilityStatus::AsymptoticallyStable);
        assert!(v.criteria_hit.contains(&Criterion::PositiveLarge));
    }

    #[test]
    fn unstable_by_count_when_no_criterion_applies() {
        let o = FracOrders::new(1.0 / 3.0, 0.5).unwrap();
        let v = triple_verdict(CharTriple::new(0.0, 3.0, 0.5), o).unwrap();
        assert!(v.criteria_hit.is_empty());
        assert_eq!(v.status, StabilityStatus::NotAsymptoticallyStable);
    }

    #[test]
    fn imaginary_zero_is_not_stable() {
        let o = FracOrders::new(0.3, 0.8).unwrap();
        let k = crate::charfun::trig_consts(o).unwrap();
        let v = triple_verdict(CharTriple::new(k.rho2 - k.rho1, k.rho2 - k.rho1, 1.0), o).unwrap();
        assert_eq!(v.status, StabilityStatus::NotAsymptoticallyStable);
        assert_eq!(v.imaginary_zero_free, Some(false));
        assert_eq!(v.winding_count, None);
    }

    #[test]
    fn starved_zero_count_is_inconclusive() {
        let o = FracOrders::new(0.3, 0.6).unwrap();
        let t = CharTriple::new(-1.0, 1.0, 0.5);
        assert_eq!(triple_verdict(t, o).unwrap().status, StabilityStatus::AsymptoticallyStable);
        let starved = WindingOptions { budget: 10, ..WindingOptions::default() };
        let v = triple_verdict_with(t, o, &starved).unwrap();
        assert!(v.criteria_hit.is_empty());
        assert_eq!(v.status, StabilityStatus::Inconclusive);
        assert_eq!(v.winding_count, None);
    }
}
