//! Argument-principle count of the zeros of `Q` in the closed right
//! half-plane.
//!
//! The contour bounds the half annulus `ε <= |s| <= R`, `Re s >= 0`, with
//! `ε` from [`inner_radius`](crate::charfun::inner_radius) and `R` from
//! [`outer_radius`]. It is traversed counter-clockwise: the large arc from
//! `-iR` to `iR`, the imaginary axis down to `iε`, the small arc back to
//! `-iε` and the axis down to `-iR`. `Q` is analytic there, so the change of
//! `arg Q` divided by `2π` is the number of enclosed zeros.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use crate::charfun::{eval_q, outer_radius, q_scale};
use crate::math::{wrap_angle, PI};
use crate::system::{CharTriple, FracOrders};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingOptions {
    /// Initial samples per unit of the contour parametrisation (each arc and
    /// each axis piece is one unit).
    pub density: usize,
    /// Integrate over the upper half only and double, using `Q(s̄) = conj Q(s)`.
    pub use_symmetry: bool,
    /// Maximum number of `Q` evaluations.
    pub budget: usize,
}

impl Default for WindingOptions {
    fn default() -> Self {
        Self { density: 256, use_symmetry: false, budget: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingReport {
    /// Nearest integer to `turns`.
    pub count: i64,
    /// Accumulated change of `arg Q` divided by `2π`.
    pub turns: f64,
    pub samples: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

/// A contour piece `u ∈ [0, 1] → s`.
#[derive(Clone, Copy)]
enum Piece {
    /// `s = r e^{iφ}` with `φ` running linearly from `from` to `to`.
    Arc { r: f64, from: f64, to: f64 },
    /// `s = ρ e^{iφ}` on a fixed ray, with `ln ρ` running linearly between
    /// the endpoints.
    Ray { angle: f64, from: f64, to: f64 },
}

impl Piece {
    fn point(&self, u: f64) -> Complex {
        match *self {
            Piece::Arc { r, from, to } => {
                let phi = from + (to - from) * u;
                Complex::new(r * phi.cos(), r * phi.sin())
            }
            Piece::Ray { angle, from, to } => {
                let (lf, lt) = (from.ln(), to.ln());
                let rho = (lf + (lt - lf) * u).exp();
                Complex::new(rho * angle.cos(), rho * angle.sin())
            }
        }
    }
}

/// `ε` with `|Q| >= |c|/2` on `|s| <= ε`, valid for either sign of `c`.
fn inner_radius_abs(triple: CharTriple, orders: FracOrders) -> Result<f64> {
    if triple.c == 0.0 || !triple.c.is_finite() {
        return Err(Error::NonpositiveC { c: triple.c });
    }
    let t = CharTriple { c: triple.c.abs(), ..triple };
    crate::charfun::inner_radius(t, orders)
}

struct Walker<'a> {
    triple: CharTriple,
    orders: FracOrders,
    opts: &'a WindingOptions,
    samples: usize,
}

impl Walker<'_> {
    fn value(&mut self, piece: &Piece, u: f64) -> Result<(f64, Complex)> {
        self.samples += 1;
        if self.samples > self.opts.budget {
            return Err(Error::BudgetExhausted(self.opts.budget));
        }
        let s = piece.point(u);
        let q = eval_q(self.triple, self.orders, s);
        if q.norm() < 1e-10 * q_scale(self.triple, self.orders, s.norm()) {
            return Err(Error::ZeroOnContour { re: s.re, im: s.im });
        }
        Ok((q.im.atan2(q.re), s))
    }

    /// Change of `arg Q` along the whole piece.
    fn piece_change(&mut self, piece: Piece) -> Result<f64> {
        let n = self.opts.density.max(2);
        let mut total = 0.0;
        let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
        let (mut u0, mut arg0) = (0.0, self.value(&piece, 0.0)?.0);
        for k in 1..=n {
            let u1 = k as f64 / n as f64;
            let arg1 = self.value(&piece, u1)?.0;
            stack.push((u0, arg0, u1, arg1));
            while let Some((ua, aa, ub, ab)) = stack.pop() {
                let d = wrap_angle(ab - aa);
                if d.abs() < PI / 4.0 {
                    total += d;
                    continue;
                }
                let um = 0.5 * (ua + ub);
                if um <= ua || um >= ub {
                    // Parameter resolution exhausted: the image passes
                    // (numerically) through the origin.
                    let s = piece.point(um);
                    return Err(Error::ZeroOnContour { re: s.re, im: s.im });
                }
                let am = self.value(&piece, um)?.0;
                // Process the left half first.
                stack.push((um, am, ub, ab));
                stack.push((ua, aa, um, am));
            }
            u0 = u1;
            arg0 = arg1;
        }
        Ok(total)
    }
}

/// Counts zeros with explicit options.
pub fn winding_report(triple: CharTriple, orders: FracOrders, opts: &WindingOptions) -> Result<WindingReport> {
    sector_report(triple, orders, PI / 2.0, opts)
}

/// Zeros of `Q` in the sector `|arg s| <= theta` (with `theta < π`),
/// counted over the same annulus as [`winding_report`].
pub fn sector_report(
    triple: CharTriple,
    orders: FracOrders,
    theta: f64,
    opts: &WindingOptions,
) -> Result<WindingReport> {
    let eps = inner_radius_abs(triple, orders)?;
    let r = outer_radius(triple, orders).max(2.0 * eps);
    let pieces: Vec<Piece> = if opts.use_symmetry {
        alloc::vec![
            Piece::Arc { r, from: 0.0, to: theta },
            Piece::Ray { angle: theta, from: r, to: eps },
            Piece::Arc { r: eps, from: theta, to: 0.0 },
        ]
    } else {
        alloc::vec![
            Piece::Arc { r, from: -theta, to: theta },
            Piece::Ray { angle: theta, from: r, to: eps },
            Piece::Arc { r: eps, from: theta, to: -theta },
            Piece::Ray { angle: -theta, from: eps, to: r },
        ]
    };
    let mut walker = Walker { triple, orders, opts, samples: 0 };
    let mut total = 0.0;
    for p in pieces {
        total += walker.piece_change(p)?;
    }
    if opts.use_symmetry {
        total *= 2.0;
    }
    let turns = total / (2.0 * PI);
    Ok(WindingReport {
        count: turns.round() as i64,
        turns,
        samples: walker.samples,
        inner_radius: eps,
        outer_radius: r,
    })
}

/// Number of zeros of `Q` in the closed right half-plane.
pub fn winding_count(triple: CharTriple, orders: FracOrders) -> Result<i64> {
    Ok(winding_report(triple, orders, &WindingOptions::default())?.count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> FracOrders {
        FracOrders::new(1.0 / 3.0, 0.5).unwrap()
    }

    #[test]
    fn pure_power_has_no_right_zeros() {
        assert_eq!(winding_count(CharTriple::new(0.0, 0.0, 1.0), o()).unwrap(), 0);
    }

    #[test]
    fn reference_triple_has_no_right_zeros() {
        let rep = winding_report(CharTriple::new(0.0, 1.0, 0.5), o(), &WindingOptions::default()).unwrap();
        assert_eq!(rep.count, 0);
        assert!(rep.turns.abs() < 1e-3);
    }

    #[test]
    fn negative_c_gives_a_real_zero() {
        // Q(0) < 0 < Q(+∞) forces a positive real zero.
        let rep = winding_report(CharTriple::new(0.5, 0.5, -1.0), o(), &WindingOptions::default()).unwrap();
        assert!(rep.count >= 1);
    }

    #[test]
    fn large_b_moves_zeros_right() {
        let t = CharTriple::new(0.0, 3.0, 0.5);
        let full = winding_report(t, o(), &WindingOptions::default()).unwrap();
        assert!(full.count >= 1);
        assert!((full.turns - full.turns.round()).abs() < 1e-3);
        let sym = winding_report(t, o(), &WindingOptions { use_symmetry: true, ..Default::default() }).unwrap();
        assert_eq!(sym.count, full.count);
        let dense = winding_report(t, o(), &WindingOptions { density: 512, ..Default::default() }).unwrap();
        assert_eq!(dense.count, full.count);
    }

    #[test]
    fn zero_on_axis_is_reported() {
        // A constructed zero at s = i.
        let orders = FracOrders::new(0.3, 0.8).unwrap();
        let k = crate::charfun::trig_consts(orders).unwrap();
        let t = CharTriple::new(k.rho2 - k.rho1, k.rho2 - k.rho1, 1.0);
        let r = winding_report(t, orders, &WindingOptions::default());
        assert!(matches!(r, Err(Error::ZeroOnContour { .. })), "{r:?}");
    }

    #[test]
    fn zero_c_is_rejected() {
        assert!(matches!(winding_count(CharTriple::new(1.0, 1.0, 0.0), o()), Err(Error::NonpositiveC { .. })));
    }
}
