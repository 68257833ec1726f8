//! Detection of zeros of `Q` on the positive imaginary axis.
//!
//! A zero `iω` exists exactly when, for that `ω`,
//! `a = ρ2 ω^α1 - c ρ1 ω^-α2` and `b = c ρ2 ω^-α1 - ρ1 ω^α2`.
//! Substituting `X = ω^α2` gives a quadratic whose discriminant factors as
//! `(ab - c(ρ1+ρ2)²)(ab - c(ρ2-ρ1)²)`; for `a, b > 0` it rules out such
//! zeros when `c(ρ2²-ρ1²) < ab < c(ρ2²+ρ1²)` or `ab <= c(ρ2-ρ1)²`.
//! Independently of that shortcut, the roots of `h2 = Im Q(iω)` are
//! scanned and the pair of identities is checked at each of them.
//!
//! Only the scan decides `zero_free`. The second branch of the shortcut is
//! not a valid certificate: when `ab <= c(ρ2-ρ1)²` the middle coefficient
//! of the quadratic is negative, so both roots are positive, and every
//! triple with a zero at `s = iω` satisfies it (at `ω = 1`,
//! `ab - c(ρ2-ρ1)² = -ρ1ρ2(1-c)²`). The shortcut is still reported for
//! comparison.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use crate::charfun::{boundary_trace, trig_consts, TrigConsts};
use crate::system::{CharTriple, FracOrders};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryZeroReport {
    /// No `ω > 0` satisfying the pair of identities was found by the scan.
    pub zero_free: bool,
    /// `(ab - c(ρ1+ρ2)²)(ab - c(ρ2-ρ1)²)`.
    pub discriminant: f64,
    /// Real roots `X` of `aρ1 X² + [ab - c(ρ2²-ρ1²)] X + bcρ1 = 0`.
    pub roots_x: Vec<f64>,
    /// Values of `ω` where both identities hold to relative `1e-9`.
    pub scan_roots_omega: Vec<f64>,
    /// Verdict of the closed-form shortcut, `None` unless `a, b > 0`.
    /// `Some(true)` means it certifies the absence of imaginary zeros.
    pub closed_form_zero_free: Option<bool>,
    /// Every root of `h2` located by the scan, whether or not the pair holds.
    pub h2_roots: Vec<f64>,
}

const SCAN_POINTS: usize = 2048;
const SCAN_LO: f64 = 1e-6;
const PAIR_TOL: f64 = 1e-9;

/// Upper end of the scan: no root of `h2` lies beyond it.
pub fn scan_upper_limit(triple: CharTriple, orders: FracOrders, k: &TrigConsts) -> f64 {
    let bound = ((triple.a.abs() + triple.b.abs()) * k.q2 + 1.0).powf(1.0 / orders.alpha1());
    bound.max(2.0)
}

/// Relative residual of the pair of identities at `ω`.
pub fn pair_residual(triple: CharTriple, orders: FracOrders, k: &TrigConsts, omega: f64) -> f64 {
    let (a1, a2) = (orders.alpha1(), orders.alpha2());
    let (w1, w2) = (omega.powf(a1), omega.powf(a2));
    let CharTriple { a, b, c } = triple;
    let (ta, tb) = (k.rho2 * w1, c * k.rho1 / w2);
    let (ua, ub) = (c * k.rho2 / w1, k.rho1 * w2);
    let ra = (a - (ta - tb)).abs() / (a.abs() + ta.abs() + tb.abs());
    let rb = (b - (ua - ub)).abs() / (b.abs() + ua.abs() + ub.abs());
    ra.max(rb)
}

fn quadratic_roots(qa: f64, qb: f64, qc: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    if qa == 0.0 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
        return roots;
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return roots;
    }
    // Cancellation-free form.
    let sq = disc.sqrt();
    let t = -0.5 * (qb + qb.signum() * sq);
    if t != 0.0 {
        roots.push(t / qa);
        roots.push(qc / t);
    } else {
        roots.push(0.0);
        roots.push(0.0);
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimisation of `g` on `[lo, hi]`.
fn golden_min(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi {
            break;
        }
        if g1 < g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Runs both the closed-form shortcut and the scan.
pub fn imaginary_zero_test(triple: CharTriple, orders: FracOrders) -> Result<ImaginaryZeroReport> {
    if !(triple.c > 0.0) {
        return Err(Error::PreconditionC { c: triple.c });
    }
    let k = trig_consts(orders)?;
    let CharTriple { a, b, c } = triple;
    let (r1, r2) = (k.rho1, k.rho2);

    let ab = a * b;
    let discriminant = (ab - c * (r1 + r2) * (r1 + r2)) * (ab - c * (r2 - r1) * (r2 - r1));
    let roots_x = quadratic_roots(a * r1, ab - c * (r2 * r2 - r1 * r1), b * c * r1);
    let closed_form_zero_free = (a > 0.0 && b > 0.0).then(|| {
        let first = c * (r2 * r2 - r1 * r1) < ab && ab < c * (r2 * r2 + r1 * r1);
        let second = ab <= c * (r2 - r1) * (r2 - r1);
        first || second
    });

    // Scan h2 / ω^α1, which has the same roots but is better scaled near 0.
    let a1 = orders.alpha1();
    let h2 = |w: f64| boundary_trace(triple, orders, w).1 / w.powf(a1);
    let hi = scan_upper_limit(triple, orders, &k);
    let ratio = (hi / SCAN_LO).ln();
    let grid: Vec<f64> =
        (0..SCAN_POINTS).map(|i| SCAN_LO * (ratio * i as f64 / (SCAN_POINTS - 1) as f64).exp()).collect();
    let vals: Vec<f64> = grid.iter().map(|&w| h2(w)).collect();

    let mut h2_roots = Vec::new();
    for i in 0..SCAN_POINTS - 1 {
        let (v0, v1) = (vals[i], vals[i + 1]);
        if v0 == 0.0 {
            h2_roots.push(grid[i]);
        } else if (v0 < 0.0) != (v1 < 0.0) && v1 != 0.0 {
            h2_roots.push(bisect(h2, grid[i], grid[i + 1]));
        }
    }
    // Double roots do not change sign; look for local minima of |h2| that
    // come close to zero.
    for i in 1..SCAN_POINTS - 1 {
        let (vm, v0, vp) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
        if v0 <= vm && v0 <= vp && (vals[i - 1] < 0.0) == (vals[i + 1] < 0.0) {
            let w = golden_min(|x| h2(x).abs(), grid[i - 1], grid[i + 1]);
            let scale = w.powf(orders.alpha2()) + a.abs() * w.powf(orders.alpha2() - a1) + b.abs();
            if h2(w).abs() <= PAIR_TOL * scale {
                h2_roots.push(w);
            }
        }
    }
    h2_roots.sort_by(|x, y| x.total_cmp(y));
    h2_roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());

    let scan_roots_omega: Vec<f64> =
        h2_roots.iter().copied().filter(|&w| pair_residual(triple, orders, &k, w) <= PAIR_TOL).collect();

    Ok(ImaginaryZeroReport {
        zero_free: scan_roots_omega.is_empty(),
        discriminant,
        roots_x,
        scan_roots_omega,
        closed_form_zero_free,
        h2_roots,
    })
}
