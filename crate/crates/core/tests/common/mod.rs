//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's numerical paths: angles are evaluated
//! naively and arcs are integrated step by step.
#![allow(dead_code)]

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `cos ψᵢ`, `sin ψᵢ` for `ψᵢ = 2π(i−1)/n`, straight from libm.
pub fn naive_modes(n: usize) -> (Vec<f64>, Vec<f64>) {
    (0..n)
        .map(|i| {
            let psi = TAU * i as f64 / n as f64;
            (psi.cos(), psi.sin())
        })
        .unzip()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least-squares coefficients `(a, b)` of `ρᵢ ≈ a cos ψᵢ + b sin ψᵢ` from the
/// 2×2 normal equations, solved by Cramer's rule.
pub fn normal_equation_fit(rho: &[f64]) -> (f64, f64) {
    let (cos, sin) = naive_modes(rho.len());
    let (acc, acs, ass) = (dot(&cos, &cos), dot(&cos, &sin), dot(&sin, &sin));
    let (bc, bs) = (dot(&cos, rho), dot(&sin, rho));
    let det = acc * ass - acs * acs;
    ((bc * ass - acs * bs) / det, (acc * bs - acs * bc) / det)
}

/// Nearest point of span{cos ψ, sin ψ} to `rho` by successive grid
/// refinement over the two coefficients. Stops once the grid spacing is at
/// most `resolution`; returns the coefficients and the final spacing.
pub fn grid_nearest(rho: &[f64], resolution: f64) -> ((f64, f64), f64) {
    let (cos, sin) = naive_modes(rho.len());
    let objective = |a: f64, b: f64| -> f64 {
        rho.iter()
            .zip(cos.iter().zip(&sin))
            .map(|(r, (c, s))| {
                let e = r - a * c - b * s;
                e * e
            })
            .sum()
    };
    let max = rho.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut step = (0.4 * max).max(resolution);
    let mut center = (0.0, 0.0);
    loop {
        let mut best = (f64::INFINITY, center);
        for i in -10..=10 {
            for j in -10..=10 {
                let a = center.0 + i as f64 * step;
                let b = center.1 + j as f64 * step;
                let f = objective(a, b);
                if f < best.0 {
                    best = (f, (a, b));
                }
            }
        }
        center = best.1;
        if step <= resolution {
            return (center, step);
        }
        step = (step / 4.0).max(resolution);
    }
}

pub type Vec3 = [f64; 3];

fn axpy(a: f64, x: Vec3, y: Vec3) -> Vec3 {
    [y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]]
}

fn lin(a: f64, x: Vec3, b: f64, y: Vec3) -> Vec3 {
    [a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]]
}

/// Frame carried along a backbone: position and the three body axes, the
/// third being the backbone tangent.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub p: Vec3,
    pub x: Vec3,
    pub y: Vec3,
    pub z: Vec3,
}

impl Frame {
    pub fn base() -> Self {
        Frame {
            p: [0.0; 3],
            x: [1.0, 0.0, 0.0],
            y: [0.0, 1.0, 0.0],
            z: [0.0, 0.0, 1.0],
        }
    }
}

/// Walks along an arc of curvature `kappa` and length `l`, bending toward
/// `cos θ·x + sin θ·y` of the current frame, in `steps` midpoint steps.
pub fn integrate_arc(start: Frame, kappa: f64, theta: f64, l: f64, steps: usize) -> Frame {
    let h = l / steps as f64;
    let (st, ct) = theta.sin_cos();
    // in-plane pair: tangent and normal; binormal stays fixed along the arc
    let mut t = start.z;
    let mut n = lin(ct, start.x, st, start.y);
    let binormal = lin(-st, start.x, ct, start.y);
    let (sh, ch) = (0.5 * kappa * h).sin_cos();
    let (sf, cf) = (kappa * h).sin_cos();
    let mut p = start.p;
    for _ in 0..steps {
        let mid = lin(ch, t, sh, n);
        p = axpy(h, mid, p);
        let t_next = lin(cf, t, sf, n);
        n = lin(-sf, t, cf, n);
        t = t_next;
    }
    // rebuild the body x/y axes from the rotated bending-plane basis
    Frame {
        p,
        x: lin(ct, n, -st, binormal),
        y: lin(st, n, ct, binormal),
        z: t,
    }
}

/// Rotates `v` by the unit quaternion `(w, x, y, z)`.
pub fn rotate(q: [f64; 4], v: Vec3) -> Vec3 {
    let [w, x, y, z] = q;
    let r = [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ];
    [dot(&r[0], &v), dot(&r[1], &v), dot(&r[2], &v)]
}

pub fn dist(a: Vec3, b: Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Random arc parameters `(κ, θ, ℓ)` with `κℓ` drawn from `bend`.
pub fn random_arc(rng: &mut impl Rng, bend: std::ops::Range<f64>) -> (f64, f64, f64) {
    let l = rng.random_range(0.05..0.5);
    let x = rng.random_range(bend);
    (x / l, rng.random_range(0.0..TAU), l)
}
