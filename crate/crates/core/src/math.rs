//! Small numeric helpers shared by the modules.

use crate::Complex;
pub(crate) use core::f64::consts::PI;
#[allow(unused_imports)]
pub(crate) use num_traits::Float;

pub(crate) fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Principal logarithm with `arg ∈ (-π, π]`.
#[inline]
pub(crate) fn principal_ln(s: Complex) -> Complex {
    Complex::new(s.norm().ln(), s.im.atan2(s.re))
}

/// `exp(z)` for complex `z`.
#[inline]
pub(crate) fn cexp(z: Complex) -> Complex {
    let m = z.re.exp();
    let (sin, cos) = z.im.sin_cos();
    Complex::new(m * cos, m * sin)
}

/// Principal power `s^beta`, with `0^beta = 0` for `beta > 0` and `0^0 = 1`.
#[inline]
pub(crate) fn cpow(s: Complex, beta: f64) -> Complex {
    if s.re == 0.0 && s.im == 0.0 {
        return if beta == 0.0 { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) };
    }
    cexp(principal_ln(s) * beta)
}

/// Wraps an angle difference into `(-π, π]`.
#[inline]
pub(crate) fn wrap_angle(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
