//! Series-stabilised elementary functions that stay finite as the cone
//! parameter goes to zero.

use num_complex::Complex64;

/// Below this magnitude of the product `theta * x` the Taylor branch is used.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// `sinh(theta * x) / theta`, equal to `x` at `theta = 0`.
pub fn sinhc(theta: f64, x: f64) -> f64 {
    let y = theta * x;
    if y.abs() < SERIES_THRESHOLD {
        let y2 = y * y;
        x * (1.0 + y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0)))
    } else {
        y.sinh() / theta
    }
}

/// `theta * coth(theta * x)`, equal to `1 / x` at `theta = 0`.
pub fn theta_coth(theta: f64, x: f64) -> f64 {
    let y = theta * x;
    if y.abs() < SERIES_THRESHOLD {
        let y2 = y * y;
        (1.0 + y2 / 3.0 - y2 * y2 / 45.0 + 2.0 * y2 * y2 * y2 / 945.0) / x
    } else {
        theta / y.tanh()
    }
}

/// Complex `sinh(theta * w) / theta`, equal to `w` at `theta = 0`.
pub fn sinhc_complex(theta: f64, w: Complex64) -> Complex64 {
    let y = w * theta;
    if y.norm() < SERIES_THRESHOLD {
        let y2 = y * y;
        w * (1.0 + y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0)))
    } else {
        y.sinh() / theta
    }
}

/// `sin(pi * theta) / theta`, equal to `pi` at `theta = 0`.
pub fn sin_pi_over(theta: f64) -> f64 {
    let y = std::f64::consts::PI * theta;
    if y.abs() < SERIES_THRESHOLD {
        let y2 = y * y;
        std::f64::consts::PI * (1.0 - y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0)))
    } else {
        y.sin() / theta
    }
}
