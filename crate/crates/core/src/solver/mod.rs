//! Time-domain solvers.
//!
//! - [`pi`]: the implicit product-integration trapezoidal rule, usable for
//!   every system.
//! - [`picard`]: fixed-point iteration of the variation-of-constants
//!   operator with the nonlinearity fed through the convolutions.

pub mod pi;
pub mod picard;

pub use pi::{pi_weights, solve_pi_trapezoidal, solve_pi_trapezoidal_lenient, PiWeights, SolveOutcome, StepperConfig};
pub use picard::{solve_nonlinear_picard, PicardConfig, PicardReport};
