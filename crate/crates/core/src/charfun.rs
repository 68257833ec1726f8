//! The characteristic function `Q(s) = s^l - a s^α2 - b s^α1 + c` with
//! `l = α1 + α2`, its traces on the positive imaginary axis and the radii
//! that separate its zeros from the origin and from infinity.
//!
//! All powers use the principal branch, `arg s ∈ (-π, π]`.

#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{cpow, PI};
use crate::system::{CharTriple, FracOrders};
use crate::{Complex, Error, Result};

/// `Q(s)`. `Q(0) = c`.
pub fn eval_q(triple: CharTriple, orders: FracOrders, s: Complex) -> Complex {
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    cpow(s, a1 + a2) - cpow(s, a2) * triple.a - cpow(s, a1) * triple.b + triple.c
}

/// `|s|^l + |a| |s|^α2 + |b| |s|^α1 + |c|`, the natural magnitude against
/// which `|Q(s)|` is compared.
pub fn q_scale(triple: CharTriple, orders: FracOrders, modulus: f64) -> f64 {
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    modulus.powf(a1 + a2) + triple.a.abs() * modulus.powf(a2) + triple.b.abs() * modulus.powf(a1) + triple.c.abs()
}

/// `(Re Q(iω), Im Q(iω))` from the closed forms.
pub fn boundary_trace(triple: CharTriple, orders: FracOrders, omega: f64) -> (f64, f64) {
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    let l = a1 + a2;
    let (wl, w2, w1) = (omega.powf(l), omega.powf(a2), omega.powf(a1));
    let (sl, cl) = (l * PI / 2.0).sin_cos();
    let (s2, c2) = (a2 * PI / 2.0).sin_cos();
    let (s1, c1) = (a1 * PI / 2.0).sin_cos();
    let h1 = wl * cl - triple.a * w2 * c2 - triple.b * w1 * c1 + triple.c;
    let h2 = wl * sl - triple.a * w2 * s2 - triple.b * w1 * s1;
    (h1, h2)
}

/// The constants `ρ1, ρ2, q1, q2` built from sines of the orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigConsts {
    pub rho1: f64,
    pub rho2: f64,
    pub q1: f64,
    pub q2: f64,
}

pub fn trig_consts(orders: FracOrders) -> Result<TrigConsts> {
    orders.require_incommensurate()?;
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    let half = PI / 2.0;
    let (s1, s2) = ((a1 * half).sin(), (a2 * half).sin());
    let d = ((a2 - a1) * half).sin();
    let sl = ((a1 + a2) * half).sin();
    Ok(TrigConsts { rho1: s1 / d, rho2: s2 / d, q1: s1 / sl, q2: s2 / sl })
}

const RADIUS_REL_TOL: f64 = 1e-9;

/// Smallest `R >= 1` (to relative width 1e-9) with
/// `R^l >= 2(|a| R^α2 + |b| R^α1 + |c|)`, so that `|Q(s)| >= |s|^l / 2`
/// whenever `|s| >= R`.
pub fn outer_radius(triple: CharTriple, orders: FracOrders) -> f64 {
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    let (a, b, c) = (triple.a.abs(), triple.b.abs(), triple.c.abs());
    // Dividing through by R^l leaves an increasing function of R.
    let ok = |r: f64| 1.0 - 2.0 * a * r.powf(-a1) - 2.0 * b * r.powf(-a2) - 2.0 * c * r.powf(-a1 - a2) >= 0.0;
    if ok(1.0) {
        return 1.0;
    }
    let mut hi = 2.0;
    while !ok(hi) {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while hi - lo > RADIUS_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// A radius `ε <= 1` with `ε^l + |a| ε^α2 + |b| ε^α1 <= c / 2`, so that
/// `|Q(s)| >= c / 2` on `|s| <= ε`.
pub fn inner_radius(triple: CharTriple, orders: FracOrders) -> Result<f64> {
    if !(triple.c > 0.0) {
        return Err(Error::NonpositiveC { c: triple.c });
    }
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    let (a, b, c) = (triple.a.abs(), triple.b.abs(), triple.c);
    let ok = |e: f64| e.powf(a1 + a2) + a * e.powf(a2) + b * e.powf(a1) <= 0.5 * c;
    if ok(1.0) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > RADIUS_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex1() -> (CharTriple, FracOrders) {
        (CharTriple::new(0.0, 1.0, 0.5), FracOrders::new(1.0 / 3.0, 0.5).unwrap())
    }

    #[test]
    fn q_at_zero_and_one() {
        let o = FracOrders::new(0.2, 0.9).unwrap();
        assert_eq!(eval_q(CharTriple::new(0.0, 0.0, 1.0), o, Complex::new(0.0, 0.0)), Complex::new(1.0, 0.0));
        let (t, o) = ex1();
        let q = eval_q(t, o, Complex::new(1.0, 0.0));
        assert!((q.re - 0.5).abs() < 1e-15 && q.im.abs() < 1e-15);
    }

    #[test]
    fn trig_constants_reference_orders() {
        let (_, o) = ex1();
        let k = trig_consts(o).unwrap();
        assert!((k.q1 - 0.517_638_090_205_041_5).abs() < 1e-12);
        assert!((k.q2 - 0.732_050_807_568_877_2).abs() < 1e-12);
        assert!((k.rho1 - 1.931_851_652_578_136_6).abs() < 1e-12);
        assert!((k.rho2 - 2.732_050_807_568_877).abs() < 1e-12);
        assert!(matches!(trig_consts(FracOrders::commensurate(0.4).unwrap()), Err(Error::DegenerateOrders { .. })));
    }

    #[test]
    fn q_constants_grow_near_order_two() {
        let lo = trig_consts(FracOrders::new(0.4, 0.5).unwrap()).unwrap();
        let hi = trig_consts(FracOrders::new(0.99, 1.0).unwrap()).unwrap();
        assert!(hi.q1 > lo.q1 && hi.q2 > lo.q2);
    }

    #[test]
    fn h2_root_for_negative_a_lies_in_bracket() {
        let t = CharTriple::new(-1.0, 4.0, 6.0);
        let o = FracOrders::new(0.4, 0.5).unwrap();
        let k = trig_consts(o).unwrap();
        let upper = (t.b * k.q1).powf(1.0 / o.alpha2());
        let h2 = |w: f64| boundary_trace(t, o, w).1;
        assert!(h2(1.0) < 0.0 && h2(upper) > 0.0);
        let (mut lo, mut hi) = (1.0, upper);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h2(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!(lo > 1.0 && hi < upper);
        // Only one sign change on a fine log grid.
        let mut changes = 0;
        let mut prev = h2(1e-6);
        for i in 1..=4000 {
            let w = 1e-6 * (1e10_f64).powf(i as f64 / 4000.0);
            let v = h2(w);
            if v.signum() != prev.signum() {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn outer_radius_examples() {
        let o = FracOrders::new(1.0 / 3.0, 0.5).unwrap();
        assert_eq!(outer_radius(CharTriple::new(0.0, 0.0, 0.0), o), 1.0);
        let (t, o) = ex1();
        let r = outer_radius(t, o);
        assert!(r.powf(5.0 / 6.0) >= 2.0 * (r.powf(1.0 / 3.0) + 0.5));
        let r_lo = r * (1.0 - 1e-8);
        assert!(r_lo.powf(5.0 / 6.0) < 2.0 * (r_lo.powf(1.0 / 3.0) + 0.5));
    }

    #[test]
    fn inner_radius_examples() {
        let o = FracOrders::new(0.25, 0.75).unwrap();
        let e = inner_radius(CharTriple::new(0.0, 0.0, 1.0), o).unwrap();
        assert!(e <= 0.5 && (e - 0.5).abs() < 1e-8);
        let (t, o) = ex1();
        let e = inner_radius(t, o).unwrap();
        assert!(e.powf(5.0 / 6.0) + e.powf(1.0 / 3.0) <= 0.25);
        assert!(matches!(inner_radius(CharTriple::new(1.0, 1.0, 0.0), o), Err(Error::NonpositiveC { .. })));
        assert!(matches!(inner_radius(CharTriple::new(1.0, 1.0, -1.0), o), Err(Error::NonpositiveC { .. })));
    }

    fn orders_strategy() -> impl Strategy<Value = FracOrders> {
        (0.02f64..0.97, 0.02f64..1.0).prop_map(|(a1, gap)| {
            let a2 = (a1 + gap * (1.0 - a1)).min(1.0).max(a1 + 1e-3);
            FracOrders::new(a1, a2.min(1.0)).unwrap()
        })
    }

    fn triple_strategy() -> impl Strategy<Value = CharTriple> {
        (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b, c)| CharTriple::new(a, b, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn conjugate_symmetry(t in triple_strategy(), o in orders_strategy(), re in -10.0f64..10.0, im in -10.0f64..10.0) {
            let s = Complex::new(re, im);
            prop_assume!(im != 0.0);
            let q = eval_q(t, o, s);
            let qc = eval_q(t, o, s.conj());
            prop_assert!((q.conj() - qc).norm() <= 1e-12 * (1.0 + q.norm()));
        }

        #[test]
        fn trace_matches_evaluation(t in triple_strategy(), o in orders_strategy(), w in 1e-3f64..1e3) {
            let (h1, h2) = boundary_trace(t, o, w);
            let q = eval_q(t, o, Complex::new(0.0, w));
            let scale = q_scale(t, o, w);
            prop_assert!((h1 - q.re).abs() <= 1e-12 * scale);
            prop_assert!((h2 - q.im).abs() <= 1e-12 * scale);
        }

        #[test]
        fn pure_power_trace_is_positive(o in orders_strategy(), c in 0.1f64..5.0, w in 1e-4f64..1e4) {
            let (_, h2) = boundary_trace(CharTriple::new(0.0, 0.0, c), o, w);
            prop_assert!(h2 > 0.0);
        }

        #[test]
        fn ratio_identity(o in orders_strategy()) {
            let k = trig_consts(o).unwrap();
            prop_assert!((k.q1 / k.q2 - k.rho1 / k.rho2).abs() < 1e-14);
            prop_assert!(0.0 < k.q1 && k.q1 < k.q2 && 0.0 < k.rho1 && k.rho1 < k.rho2);
        }

        #[test]
        fn outer_radius_bounds_q(t in triple_strategy(), o in orders_strategy(), k in 0usize..1000, grow in 1.0f64..50.0) {
            let r = outer_radius(t, o);
            let modulus = r * grow;
            let phi = -PI + 2.0 * PI * (k as f64 + 0.5) / 1000.0;
            let s = Complex::new(modulus * phi.cos(), modulus * phi.sin());
            prop_assert!(eval_q(t, o, s).norm() >= 0.49 * modulus.powf(o.l()));
        }
    }

    #[test]
    fn outer_radius_sampled_on_circle() {
        let (t, o) = ex1();
        let r = outer_radius(t, o);
        let min = (0..360)
            .map(|k| {
                let phi = -PI + 2.0 * PI * (k as f64) / 360.0;
                eval_q(t, o, Complex::new(r * phi.cos(), r * phi.sin())).norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(min >= 0.49 * r.powf(o.l()));
    }
}
