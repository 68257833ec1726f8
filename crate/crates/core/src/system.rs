//! Domain types: fractional orders, planar systems, forcing functions and
//! polynomial nonlinearities.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

use crate::{Error, Result};

/// The multi-index `α = (α1, α2)` together with `ν = min(α1, α2)` and
/// `l = α1 + α2`.
///
/// Construction enforces `0 < α_i <= 1` and `α1 < α2`; equal orders are
/// only accepted through [`FracOrders::commensurate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrders {
    alpha1: f64,
    alpha2: f64,
}

impl FracOrders {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::with_flag(alpha1, alpha2, false)
    }

    /// Equal orders `α1 = α2 = alpha`. Accepted by the solvers, rejected by
    /// the stability criteria with [`Error::DegenerateOrders`].
    pub fn commensurate(alpha: f64) -> Result<Self> {
        Self::with_flag(alpha, alpha, true)
    }

    pub fn with_flag(alpha1: f64, alpha2: f64, allow_equal: bool) -> Result<Self> {
        let in_range = |a: f64| a.is_finite() && a > 0.0 && a <= 1.0;
        if !in_range(alpha1) || !in_range(alpha2) {
            return Err(Error::OrdersOutOfRange { alpha1, alpha2 });
        }
        if alpha1 == alpha2 {
            if !allow_equal {
                return Err(Error::EqualOrdersWithoutFlag { alpha: alpha1 });
            }
        } else if alpha1 > alpha2 {
            return Err(Error::DegenerateOrders { alpha1, alpha2 });
        }
        Ok(Self { alpha1, alpha2 })
    }

    #[inline]
    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    #[inline]
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// `ν = min(α1, α2)`.
    #[inline]
    pub fn nu(&self) -> f64 {
        self.alpha1.min(self.alpha2)
    }

    /// `l(α) = α1 + α2`.
    #[inline]
    pub fn l(&self) -> f64 {
        self.alpha1 + self.alpha2
    }

    #[inline]
    pub fn is_commensurate(&self) -> bool {
        self.alpha1 == self.alpha2
    }

    /// Errors unless `α1 < α2`.
    pub fn require_incommensurate(&self) -> Result<()> {
        if self.is_commensurate() {
            Err(Error::DegenerateOrders { alpha1: self.alpha1, alpha2: self.alpha2 })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn get(&self, component: usize) -> f64 {
        if component == 0 {
            self.alpha1
        } else {
            self.alpha2
        }
    }
}

/// Coefficients of `Q(s) = s^(α1+α2) - a s^α2 - b s^α1 + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharTriple {
    /// `a11`
    pub a: f64,
    /// `a22`
    pub b: f64,
    /// `det A`
    pub c: f64,
}

impl CharTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }
}

/// `(a11, a22, a11 a22 - a12 a21)`.
pub fn char_coeffs(system: &PlanarSystem) -> CharTriple {
    let m = &system.matrix;
    CharTriple { a: m[0][0], b: m[1][1], c: m[0][0] * m[1][1] - m[0][1] * m[1][0] }
}

/// One monomial `coef * x1^p1 * x2^p2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyTerm {
    pub coef: f64,
    pub p1: u32,
    pub p2: u32,
}

impl PolyTerm {
    pub fn new(coef: f64, p1: u32, p2: u32) -> Self {
        Self { coef, p1, p2 }
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.p1 + self.p2
    }

    #[inline]
    fn eval(&self, x: [f64; 2]) -> f64 {
        self.coef * x[0].powi(self.p1 as i32) * x[1].powi(self.p2 as i32)
    }

    #[inline]
    fn grad(&self, x: [f64; 2]) -> [f64; 2] {
        let d1 = if self.p1 == 0 {
            0.0
        } else {
            self.coef * self.p1 as f64 * x[0].powi(self.p1 as i32 - 1) * x[1].powi(self.p2 as i32)
        };
        let d2 = if self.p2 == 0 {
            0.0
        } else {
            self.coef * self.p2 as f64 * x[0].powi(self.p1 as i32) * x[1].powi(self.p2 as i32 - 1)
        };
        [d1, d2]
    }
}

/// Autonomous polynomial nonlinearity `f(x) = (f1(x), f2(x))`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Nonlinearity {
    pub terms: [Vec<PolyTerm>; 2],
}

impl Nonlinearity {
    pub fn new(x1: Vec<PolyTerm>, x2: Vec<PolyTerm>) -> Self {
        Self { terms: [x1, x2] }
    }

    /// `f1 = x1² x2²`, `f2 = x1² + x2²`, the nonlinearity shared by the
    /// nonlinear reference examples.
    pub fn reference() -> Self {
        Self::new(
            alloc::vec![PolyTerm::new(1.0, 2, 2)],
            alloc::vec![PolyTerm::new(1.0, 2, 0), PolyTerm::new(1.0, 0, 2)],
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|c| c.iter().all(|t| t.coef == 0.0))
    }

    pub fn eval(&self, x: [f64; 2]) -> [f64; 2] {
        let f = |terms: &[PolyTerm]| terms.iter().map(|t| t.eval(x)).sum::<f64>();
        [f(&self.terms[0]), f(&self.terms[1])]
    }

    /// `J[i][j] = ∂f_i/∂x_j`.
    pub fn jacobian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let mut jac = [[0.0; 2]; 2];
        for (row, terms) in jac.iter_mut().zip(self.terms.iter()) {
            for t in terms {
                let g = t.grad(x);
                row[0] += g[0];
                row[1] += g[1];
            }
        }
        jac
    }

    /// Lipschitz bound of `f` on `B(0, r)` in the max-norm: for each
    /// component the sum of `|coef| (p1 + p2) r^(p1+p2-1)` bounds the
    /// 1-norm of its gradient on the ball.
    pub fn lipschitz_bound(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|t| {
                        let d = t.degree();
                        if d == 0 {
                            0.0
                        } else {
                            t.coef.abs() * d as f64 * r.powi(d as i32 - 1)
                        }
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn normalized(&self) -> Result<Self> {
        let mut out: [Vec<PolyTerm>; 2] = [Vec::new(), Vec::new()];
        for (component, (terms, merged)) in self.terms.iter().zip(out.iter_mut()).enumerate() {
            for t in terms {
                if !t.coef.is_finite() {
                    return Err(Error::NonFiniteInput);
                }
                if t.degree() < 2 && t.coef != 0.0 {
                    return Err(Error::NonlinearityViolatesLipschitzAtZero {
                        component: component + 1,
                        coef: t.coef,
                        p1: t.p1,
                        p2: t.p2,
                    });
                }
                match merged.iter_mut().find(|m| m.p1 == t.p1 && m.p2 == t.p2) {
                    Some(m) => m.coef += t.coef,
                    None => merged.push(*t),
                }
            }
            merged.retain(|t| t.coef != 0.0);
            merged.sort_by_key(|x| (x.p1, x.p2));
        }
        Ok(Self { terms: out })
    }
}

/// Time-dependent forcing `f(t) = (f1(t), f2(t))`.
#[derive(Debug, Clone, PartialEq)]
pub enum Forcing {
    /// `f_i(t) = 1` on `[0, 1)` and `t^(-2i)` on `[1, ∞)`.
    Paper,
    /// Rows `(t, f1, f2)` with strictly increasing `t`, interpolated
    /// linearly and held constant outside the tabulated range.
    Table(Vec<[f64; 3]>),
}

impl Forcing {
    pub fn eval(&self, t: f64) -> [f64; 2] {
        match self {
            Forcing::Paper => [paper_forcing_value(1, t), paper_forcing_value(2, t)],
            Forcing::Table(rows) => table_eval(rows, t),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Forcing::Table(rows) = self {
            if rows.is_empty() {
                return Err(Error::InvalidForcingTable("table has no rows"));
            }
            if rows.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidForcingTable("non-finite entry"));
            }
            if rows.windows(2).any(|w| w[1][0] <= w[0][0]) {
                return Err(Error::InvalidForcingTable("time column must be strictly increasing"));
            }
        }
        Ok(())
    }
}

fn table_eval(rows: &[[f64; 3]], t: f64) -> [f64; 2] {
    let first = rows[0];
    let last = rows[rows.len() - 1];
    if t <= first[0] {
        return [first[1], first[2]];
    }
    if t >= last[0] {
        return [last[1], last[2]];
    }
    let k = rows.partition_point(|r| r[0] <= t) - 1;
    let (r0, r1) = (rows[k], rows[k + 1]);
    let w = (t - r0[0]) / (r1[0] - r0[0]);
    [r0[1] + w * (r1[1] - r0[1]), r0[2] + w * (r1[2] - r0[2])]
}

fn paper_forcing_value(i: usize, t: f64) -> f64 {
    if t < 1.0 {
        1.0
    } else {
        t.powi(-2 * i as i32)
    }
}

/// Component `i ∈ {1, 2}` of the reference forcing.
pub fn paper_forcing(component_index: usize) -> Result<impl Fn(f64) -> f64> {
    if component_index != 1 && component_index != 2 {
        return Err(Error::ForcingIndexOutOfRange(component_index));
    }
    Ok(move |t: f64| paper_forcing_value(component_index, t))
}

/// `D^α x = A x + f`, with `f` either a forcing `f(t)` or a nonlinearity
/// `f(x)` (never both).
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSystem {
    pub matrix: [[f64; 2]; 2],
    pub orders: FracOrders,
    pub forcing: Option<Forcing>,
    pub nonlinearity: Option<Nonlinearity>,
}

impl PlanarSystem {
    pub fn new(matrix: [[f64; 2]; 2], orders: FracOrders) -> Self {
        Self { matrix, orders, forcing: None, nonlinearity: None }
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn with_nonlinearity(mut self, nonlinearity: Nonlinearity) -> Self {
        self.nonlinearity = Some(nonlinearity);
        self
    }

    pub fn char_triple(&self) -> CharTriple {
        char_coeffs(self)
    }

    pub fn is_linear(&self) -> bool {
        self.nonlinearity.as_ref().is_none_or(Nonlinearity::is_zero)
    }

    /// Checks the invariants and returns a copy with merged, sorted
    /// nonlinearity terms.
    pub fn validate(&self) -> Result<Self> {
        validate(self)
    }

    /// Right-hand side `A x + f`.
    #[inline]
    pub fn rhs(&self, t: f64, x: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        let mut g = [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]];
        if let Some(f) = &self.forcing {
            let v = f.eval(t);
            g[0] += v[0];
            g[1] += v[1];
        }
        if let Some(n) = &self.nonlinearity {
            let v = n.eval(x);
            g[0] += v[0];
            g[1] += v[1];
        }
        g
    }

    /// `∂(A x + f)/∂x`.
    #[inline]
    pub fn rhs_jacobian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let mut jac = self.matrix;
        if let Some(n) = &self.nonlinearity {
            let j = n.jacobian(x);
            for r in 0..2 {
                for c in 0..2 {
                    jac[r][c] += j[r][c];
                }
            }
        }
        jac
    }

    /// The forcing as a function, zero when absent.
    pub fn forcing_at(&self, t: f64) -> [f64; 2] {
        self.forcing.as_ref().map_or([0.0, 0.0], |f| f.eval(t))
    }
}

/// Validates a system. See [`PlanarSystem::validate`].
pub fn validate(system: &PlanarSystem) -> Result<PlanarSystem> {
    if system.matrix.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let o = system.orders;
    let orders = FracOrders::with_flag(o.alpha1(), o.alpha2(), o.is_commensurate())?;
    if let Some(f) = &system.forcing {
        f.validate()?;
    }
    let nonlinearity = match &system.nonlinearity {
        Some(n) => Some(n.normalized()?),
        None => None,
    };
    if system.forcing.is_some() && nonlinearity.as_ref().is_some_and(|n| !n.is_zero()) {
        return Err(Error::InvalidConfig("forcing and nonlinearity cannot be combined"));
    }
    Ok(PlanarSystem { matrix: system.matrix, orders, forcing: system.forcing.clone(), nonlinearity })
}
