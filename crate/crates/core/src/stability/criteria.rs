//! Closed-form sufficient conditions for all zeros of `Q` to lie in the open
//! left half-plane. Each condition is evaluated exactly as stated, with no
//! slack on strict or non-strict inequalities.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use crate::charfun::trig_consts;
use crate::system::{CharTriple, FracOrders};
use crate::Result;

/// The seven sufficient conditions. The string tags (`"L3.2"` and so on)
/// are the stable identifiers used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    /// `a <= 0`, `b <= 0`, `c > 0`.
    NonpositiveDiagonal,
    /// `a = 0`, `b > 0`, `c > (b q1)^(α1/α2) b q2`.
    VanishingA,
    /// `b = 0`, `a > 0`, `c > (a q2)^(α2/α1) a q1`.
    VanishingB,
    /// `a, b, c > 0`, `a q2 + b q1 > 1`,
    /// `a q2 ((a+b) q2)^(α2/α1) + b (a+b) q2² <= c`.
    PositiveLarge,
    /// `a, b, c > 0`, `a q2 + b q1 <= 1`, `a q1 + b q2 < c`.
    PositiveSmall,
    /// `a < 0`, `b, c > 0`, `a q2 + b q1 > 1`, `(b q1)^(α1/α2) b q2 <= c`.
    MixedLarge,
    /// `a < 0`, `b, c > 0`, `a q2 + b q1 <= 1`, `b q2 <= c`.
    MixedSmall,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Criterion::NonpositiveDiagonal,
        Criterion::VanishingA,
        Criterion::VanishingB,
        Criterion::PositiveLarge,
        Criterion::PositiveSmall,
        Criterion::MixedLarge,
        Criterion::MixedSmall,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Criterion::NonpositiveDiagonal => "L3.2",
            Criterion::VanishingA => "L3.3",
            Criterion::VanishingB => "L3.4",
            Criterion::PositiveLarge => "L3.5i",
            Criterion::PositiveSmall => "L3.5ii",
            Criterion::MixedLarge => "L3.6i",
            Criterion::MixedSmall => "L3.6ii",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

impl core::fmt::Display for Criterion {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Outcome of one condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionCheck {
    pub criterion: Criterion,
    pub holds: bool,
    /// The sign pattern matched and the deciding inequality is an equality
    /// to within `1e-12` relative.
    pub boundary: bool,
}

const BOUNDARY_TOL: f64 = 1e-12;

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= BOUNDARY_TOL * x.abs().max(y.abs()).max(1.0)
}

/// Every condition with its outcome and boundary flag.
pub fn evaluate_criteria(triple: CharTriple, orders: FracOrders) -> Result<Vec<CriterionCheck>> {
    let k = trig_consts(orders)?;
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    let CharTriple { a, b, c } = triple;
    let (q1, q2) = (k.q1, k.q2);
    let split = a * q2 + b * q1;
    let split_boundary = near(split, 1.0);

    let mut out = Vec::with_capacity(7);
    let mut push = |criterion, sign_ok: bool, holds: bool, lhs: f64, rhs: f64, uses_split: bool| {
        let boundary = sign_ok && (near(lhs, rhs) || (uses_split && split_boundary));
        out.push(CriterionCheck { criterion, holds: sign_ok && holds, boundary });
    };

    push(Criterion::NonpositiveDiagonal, a <= 0.0 && b <= 0.0, c > 0.0, c, 0.0, false);

    let bound = (b * q1).powf(a1 / a2) * b * q2;
    push(Criterion::VanishingA, a == 0.0 && b > 0.0, c > bound, c, bound, false);

    let bound = (a * q2).powf(a2 / a1) * a * q1;
    push(Criterion::VanishingB, b == 0.0 && a > 0.0, c > bound, c, bound, false);

    let positive = a > 0.0 && b > 0.0 && c > 0.0;
    let bound = a * q2 * ((a + b) * q2).powf(a2 / a1) + b * (a + b) * q2 * q2;
    push(Criterion::PositiveLarge, positive && split > 1.0, bound <= c, c, bound, true);
    let bound = a * q1 + b * q2;
    push(Criterion::PositiveSmall, positive && split <= 1.0, bound < c, c, bound, true);

    let mixed = a < 0.0 && b > 0.0 && c > 0.0;
    let bound = (b * q1).powf(a1 / a2) * b * q2;
    push(Criterion::MixedLarge, mixed && split > 1.0, bound <= c, c, bound, true);
    let bound = b * q2;
    push(Criterion::MixedSmall, mixed && split <= 1.0, bound <= c, c, bound, true);

    Ok(out)
}

/// The conditions that hold, in declaration order.
pub fn sufficient_criteria(triple: CharTriple, orders: FracOrders) -> Result<Vec<Criterion>> {
    Ok(evaluate_criteria(triple, orders)?.into_iter().filter(|c| c.holds).map(|c| c.criterion).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfun::trig_consts;
    use crate::Error;

    fn hits(a: f64, b: f64, c: f64, a1: f64, a2: f64) -> Vec<Criterion> {
        sufficient_criteria(CharTriple::new(a, b, c), FracOrders::new(a1, a2).unwrap()).unwrap()
    }

    #[test]
    fn reference_triples_hit_expected_conditions() {
        assert!(hits(0.0, 1.0, 0.5, 1.0 / 3.0, 0.5).contains(&Criterion::VanishingA));
        assert!(hits(1.0, 0.0, 2.0, 0.6, 0.8).contains(&Criterion::VanishingB));
        assert!(hits(1.0, 1.0, 3.0, 0.3, 0.4).contains(&Criterion::PositiveLarge));
        assert!(hits(0.1, 0.2, 0.3, 0.3, 0.4).contains(&Criterion::PositiveSmall));
        assert!(hits(-1.0, 4.0, 6.0, 0.4, 0.5).contains(&Criterion::MixedLarge));
        assert!(hits(-1.0, 2.0, 2.0, 0.4, 0.5).contains(&Criterion::MixedSmall));
        assert!(hits(-1.0, -1.0, 1.0, 0.2, 0.7).contains(&Criterion::NonpositiveDiagonal));
    }

    #[test]
    fn reference_bounds_numerically() {
        let o = FracOrders::new(1.0 / 3.0, 0.5).unwrap();
        let k = trig_consts(o).unwrap();
        let bound = k.q1.powf(2.0 / 3.0) * k.q2;
        assert!((bound - 0.472).abs() < 1e-3);

        let o = FracOrders::new(0.4, 0.5).unwrap();
        let k = trig_consts(o).unwrap();
        assert!((k.q1 - 0.5951).abs() < 1e-4 && (k.q2 - 0.7159).abs() < 1e-4);
        let split = -k.q2 + 4.0 * k.q1;
        assert!((split - 1.664).abs() < 1e-3);
        let bound = (4.0 * k.q1).powf(0.8) * 4.0 * k.q2;
        assert!((bound - 5.73).abs() < 1e-2 && bound <= 6.0);
    }

    #[test]
    fn nothing_applies_for_nonpositive_c() {
        assert!(hits(-1.0, -1.0, 0.0, 0.3, 0.5).is_empty());
        assert!(hits(1.0, 1.0, -2.0, 0.3, 0.5).is_empty());
    }

    #[test]
    fn equal_orders_are_rejected() {
        let o = FracOrders::commensurate(0.5).unwrap();
        let r = sufficient_criteria(CharTriple::new(-1.0, -1.0, 1.0), o);
        assert!(matches!(r, Err(Error::DegenerateOrders { .. })));
    }

    #[test]
    fn strict_inequality_fails_exactly_at_bound() {
        // With b q2 = c exactly, the non-strict mixed-small condition holds.
        let o = FracOrders::new(0.4, 0.5).unwrap();
        let k = trig_consts(o).unwrap();
        let b = 0.5;
        let c = b * k.q2;
        let checks = evaluate_criteria(CharTriple::new(-1.0, b, c), o).unwrap();
        let ms = checks.iter().find(|c| c.criterion == Criterion::MixedSmall).unwrap();
        assert!(ms.holds && ms.boundary);
    }

    #[test]
    fn tags_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(Criterion::from_tag(c.tag()), Some(c));
        }
    }
}
