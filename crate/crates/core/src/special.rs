//! Trigonometric helpers that stay accurate where the textbook formulas do not.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

/// Below this magnitude the arc functions switch to their Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// `(cos, sin)` of the angle `2π·k/n`.
///
/// The angle is reduced with integer arithmetic to the first octant before any
/// floating-point trigonometry happens, and the special angles 0, π/6 and π/4
/// come out exactly. Consequently cos(2π/3) is exactly −1/2 and cos(π/2) is
/// exactly 0, rather than the few-ulp residue of `(2π/3).cos()`.
pub fn unit_circle(k: usize, n: usize) -> (f64, f64) {
    debug_assert!(n > 0);
    let k = k % n;
    // quadrant index and the remainder within it, in units of (π/2)/n
    let quadrant = (4 * k) / n;
    let rem = 4 * k - quadrant * n;
    let (c, s) = if 2 * rem <= n {
        first_octant(rem, n)
    } else {
        let (c, s) = first_octant(n - rem, n);
        (s, c)
    };
    let (c, s) = match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    // no negative zeros in the output
    (c + 0.0, s + 0.0)
}

/// `(cos, sin)` of `(π/2)·r/n` for `0 <= 2r <= n`.
fn first_octant(r: usize, n: usize) -> (f64, f64) {
    if r == 0 {
        (1.0, 0.0)
    } else if 2 * r == n {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else if 3 * r == n {
        (3f64.sqrt() / 2.0, 0.5)
    } else {
        let angle = FRAC_PI_2 * (r as f64) / (n as f64);
        let (s, c) = angle.sin_cos();
        (c, s)
    }
}

/// `sin(x)/x`, equal to 1 at the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// `(1 − cos(x))/x`, equal to 0 at the origin.
pub fn versinc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        x / 2.0 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0))
    } else {
        let h = (0.5 * x).sin();
        2.0 * h * h / x
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let wrapped = angle.rem_euclid(tau);
    // rem_euclid can round up to exactly tau for tiny negative inputs
    if wrapped >= tau {
        0.0
    } else {
        wrapped
    }
}
