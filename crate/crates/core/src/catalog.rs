//! The eight reference systems, their initial data and expected decay rates.
//!
//! Odd examples are linear with the piecewise forcing `f_i(t) = 1` on
//! `[0, 1)` and `t^(-2i)` afterwards, started from `(1, 2)`. Even examples
//! carry the nonlinearity `(x1² x2², x1² + x2²)` and start from
//! `(0.1, -0.2)`; example 2 additionally has a far start `(1, -1)` where
//! boundedness persists but decay does not.

use alloc::vec;
use alloc::vec::Vec;

use crate::system::{Forcing, FracOrders, Nonlinearity, PlanarSystem};
use crate::{Error, Result};

/// Step size used by every reference run.
pub const REFERENCE_STEP: f64 = 1.0 / 200.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub id: u8,
    pub system: PlanarSystem,
    /// Initial conditions; the first one is the primary run.
    pub initial_conditions: Vec<[f64; 2]>,
    /// Expected decay exponent `ν = min(α1, α2)`.
    pub nu: f64,
}

impl Example {
    pub fn is_linear(&self) -> bool {
        self.system.nonlinearity.is_none()
    }
}

/// Example `n ∈ 1..=8`.
pub fn example(n: u8) -> Result<Example> {
    let (matrix, a1, a2): ([[f64; 2]; 2], f64, f64) = match n {
        1 | 2 => ([[0.0, 0.25], [-2.0, 1.0]], 1.0 / 3.0, 0.5),
        3 | 4 => ([[1.0, 2.0], [-1.0, 0.0]], 0.6, 0.8),
        5 => ([[1.0, -1.0], [2.0, 1.0]], 0.3, 0.4),
        6 => ([[0.1, -0.4], [0.7, 0.2]], 0.3, 0.4),
        7 => ([[-1.0, 2.0], [-5.0, 4.0]], 0.4, 0.5),
        8 => ([[-1.0, -2.0], [2.0, 2.0]], 0.4, 0.5),
        _ => return Err(Error::InvalidConfig("example id must be in 1..=8")),
    };
    let orders = FracOrders::new(a1, a2)?;
    let base = PlanarSystem::new(matrix, orders);
    let (system, initial_conditions) = if n % 2 == 1 {
        (base.with_forcing(Forcing::Paper), vec![[1.0, 2.0]])
    } else {
        let ics = if n == 2 { vec![[0.1, -0.2], [1.0, -1.0]] } else { vec![[0.1, -0.2]] };
        (base.with_nonlinearity(Nonlinearity::reference()), ics)
    };
    Ok(Example { id: n, system: system.validate()?, initial_conditions, nu: orders.nu() })
}

/// All eight examples in order.
pub fn all_examples() -> Vec<Example> {
    (1..=8).map(|n| example(n).expect("catalog entries are valid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::CharTriple;

    #[test]
    fn triples_match_reference_values() {
        let expected = [
            (0.0, 1.0, 0.5),
            (0.0, 1.0, 0.5),
            (1.0, 0.0, 2.0),
            (1.0, 0.0, 2.0),
            (1.0, 1.0, 3.0),
            (0.1, 0.2, 0.3),
            (-1.0, 4.0, 6.0),
            (-1.0, 2.0, 2.0),
        ];
        for (ex, (a, b, c)) in all_examples().iter().zip(expected) {
            let t = ex.system.char_triple();
            let want = CharTriple::new(a, b, c);
            assert!((t.a - want.a).abs() < 1e-12 && (t.b - want.b).abs() < 1e-12 && (t.c - want.c).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_conditions_and_rates() {
        let ex = all_examples();
        assert_eq!(ex[0].initial_conditions, vec![[1.0, 2.0]]);
        assert_eq!(ex[1].initial_conditions.len(), 2);
        assert_eq!(ex[5].initial_conditions, vec![[0.1, -0.2]]);
        let nus: Vec<f64> = ex.iter().map(|e| e.nu).collect();
        assert_eq!(nus, vec![1.0 / 3.0, 1.0 / 3.0, 0.6, 0.6, 0.3, 0.3, 0.4, 0.4]);
        assert!(example(0).is_err() && example(9).is_err());
    }
}
