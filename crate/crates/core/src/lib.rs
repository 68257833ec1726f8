//! # fracplanar-core
//!
//! Analysis and numerical solution of two-component incommensurate
//! fractional-order (Caputo) planar systems
//!
//! ```text
//! D^α1 x1(t) = a11 x1 + a12 x2 + f1(t or x)
//! D^α2 x2(t) = a21 x1 + a22 x2 + f2(t or x),     0 < α1 < α2 <= 1
//! ```
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`system`]: orders, matrices, forcing and polynomial nonlinearities,
//!   the characteristic coefficients `(a, b, c) = (a11, a22, det A)`.
//! - [`charfun`]: the characteristic function
//!   `Q(s) = s^(α1+α2) - a s^α2 - b s^α1 + c`, its traces on the imaginary
//!   axis and the radii that bound its zeros.
//! - [`stability`]: explicit sufficient criteria, the purely-imaginary-zero
//!   test and an argument-principle zero count on the right half-plane.
//! - [`specfun`]: the kernels `R^λ` and `S^β` by inverse-Laplace contour
//!   quadrature, convolution weights and the variation-of-constants solution.
//! - [`solver`]: the implicit product-integration trapezoidal stepper and a
//!   Picard iteration of the Lyapunov–Perron operator.
//! - [`analysis`]: decay-rate fits, weighted norms and basin estimates.
//! - [`catalog`]: the eight reference systems used for reproduction runs.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod catalog;
pub mod charfun;
mod error;
pub(crate) mod math;
pub mod solver;
pub mod specfun;
pub mod stability;
pub mod system;
pub mod trajectory;

pub use error::{Error, Result};
pub use system::{char_coeffs, paper_forcing, CharTriple, Forcing, FracOrders, Nonlinearity, PlanarSystem};
pub use trajectory::{Method, Trajectory};

/// Double-precision complex number used throughout the crate.
pub type Complex = num_complex::Complex64;
