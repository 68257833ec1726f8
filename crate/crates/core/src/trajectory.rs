//! Uniformly sampled two-component solutions.

#[allow(unused_imports)]
use crate::math::Float;
use alloc::vec::Vec;

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PiTrapezoidal,
    Voc,
    Picard,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::PiTrapezoidal => "pi-trapezoidal",
            Method::Voc => "voc",
            Method::Picard => "picard",
        }
    }
}

/// Samples `x(t0 + n h)` for `n = 0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub h: f64,
    pub samples: Vec<[f64; 2]>,
    pub method: Method,
}

impl Trajectory {
    pub fn new(t0: f64, h: f64, samples: Vec<[f64; 2]>, method: Method) -> Self {
        debug_assert!(!samples.is_empty());
        Self { t0, h, samples, method }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    #[inline]
    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.h
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.samples.len().saturating_sub(1))
    }

    /// `(t_n, x_n)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, [f64; 2])> + '_ {
        self.samples.iter().enumerate().map(move |(n, x)| (self.time(n), *x))
    }

    /// Largest component magnitude over all samples.
    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|x| sup_norm(*x)).fold(0.0, f64::max)
    }

    /// `max_n ‖self_n − other_n‖∞` over the common prefix.
    pub fn max_distance(&self, other: &Trajectory) -> f64 {
        self.samples.iter().zip(&other.samples).map(|(a, b)| sup_norm([a[0] - b[0], a[1] - b[1]])).fold(0.0, f64::max)
    }

    /// Keeps the samples with `t <= t_end` (with a half-step tolerance).
    pub fn truncated(&self, t_end: f64) -> Trajectory {
        let n = (((t_end - self.t0) / self.h) + 0.5).floor().max(0.0) as usize + 1;
        let mut out = self.clone();
        out.samples.truncate(n.min(self.samples.len()));
        out
    }
}

/// `max(|x1|, |x2|)`.
#[inline]
pub fn sup_norm(x: [f64; 2]) -> f64 {
    x[0].abs().max(x[1].abs())
}

/// `max(sup_{t<=1} ‖x‖, sup_{t>=1} t^ν ‖x‖)` over samples `x_n` at
/// `t0 + n h`.
pub fn weighted_sup(t0: f64, h: f64, samples: &[[f64; 2]], nu: f64) -> f64 {
    samples
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let t = t0 + n as f64 * h;
            let w = if t <= 1.0 { 1.0 } else { t.powf(nu) };
            w * sup_norm(*x)
        })
        .fold(0.0, f64::max)
}
