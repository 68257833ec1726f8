use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional orders out of range: alpha = ({alpha1}, {alpha2}), each must lie in (0, 1]")]
    OrdersOutOfRange { alpha1: f64, alpha2: f64 },

    #[error("equal orders alpha1 = alpha2 = {alpha} require the commensurate flag")]
    EqualOrdersWithoutFlag { alpha: f64 },

    #[error("orders must satisfy alpha1 < alpha2 for this operation (got {alpha1}, {alpha2})")]
    DegenerateOrders { alpha1: f64, alpha2: f64 },

    #[error("nonlinearity term {coef}*x1^{p1}*x2^{p2} in component {component} has total degree < 2")]
    NonlinearityViolatesLipschitzAtZero { component: usize, coef: f64, p1: u32, p2: u32 },

    #[error("forcing component index {0} is not 1 or 2")]
    ForcingIndexOutOfRange(usize),

    #[error("invalid forcing table: {0}")]
    InvalidForcingTable(&'static str),

    #[error("matrix or coefficient is not finite")]
    NonFiniteInput,

    #[error("det A = {c} must be positive")]
    NonpositiveC { c: f64 },

    #[error("the purely-imaginary-zero test requires c > 0 (got {c})")]
    PreconditionC { c: f64 },

    #[error("characteristic function vanishes on the contour near s = {re} + {im}i")]
    ZeroOnContour { re: f64, im: f64 },

    #[error("argument refinement exceeded {0} samples")]
    BudgetExhausted(usize),

    #[error("no zero-free sector |arg s| <= pi/2 + delta found for delta >= 0.01")]
    ContourInvalid,

    #[error("quadrature refinement levels disagree by {rel_diff:e} (relative)")]
    QuadratureNotConverged { rel_diff: f64 },

    #[error("index {index} is not admissible for kernel family {family}")]
    InvalidKernelIndex { family: char, index: &'static str },

    #[error("Newton iteration did not converge at t = {t} (residual {residual:e})")]
    NewtonDiverged { t: f64, residual: f64 },

    #[error("solution magnitude exceeded 1e12 at t = {t} (finite-time blow-up)")]
    Overflow { t: f64 },

    #[error("Picard iteration is not contracting (distance {distance:e} after {iterations} iterations)")]
    NotContractive { iterations: usize, distance: f64 },

    #[error("window [{t_lo}, {t_hi}] holds {samples} samples, at least 20 are needed")]
    WindowTooShort { t_lo: f64, t_hi: f64, samples: usize },

    #[error("no contractive radius above 1e-8 (r0 = {r0})")]
    NoContractiveRadius { r0: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
