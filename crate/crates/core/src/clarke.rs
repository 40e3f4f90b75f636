//! Generalized Clarke transform for `n` symmetrically placed actuators.
//!
//! Actuator `i` (1-based) sits at angle `ψᵢ = 2π(i−1)/n` on a circle of
//! radius `d` around the backbone. The 2×n Clarke matrix
//!
//! ```text
//!           2  ⎡ cos ψ₁  cos ψ₂  …  cos ψₙ ⎤
//!   M_P  =  ─  ⎢                          ⎥
//!           n  ⎣ sin ψ₁  sin ψ₂  …  sin ψₙ ⎦
//! ```
//!
//! maps a joint vector `ρ` to its Clarke coordinates `(ρ_Re, ρ_Im)`, and the
//! right inverse `(n/2)·M_Pᵀ` maps them back to `ρᵢ = ρ_Re cos ψᵢ + ρ_Im sin ψᵢ`.
//! Composing the two gives the orthogonal projector onto the 2-DoF manifold of
//! feasible displacements.

use serde::{Deserialize, Serialize};

use crate::error::{finite, positive, Error, Result};
use crate::special::unit_circle;

/// Default tolerance for feasibility checks, in meters.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Geometry of one segment: actuator count, pitch radius and arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentGeometry {
    n: usize,
    d: f64,
    l: f64,
}

impl SegmentGeometry {
    pub fn new(n: usize, d: f64, l: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::ActuatorCount(n));
        }
        positive("pitch radius d", d)?;
        positive("segment length l", l)?;
        Ok(SegmentGeometry { n, d, l })
    }

    /// Actuator count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Pitch radius in meters.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Arc length in meters.
    pub fn l(&self) -> f64 {
        self.l
    }

    /// Angular positions `ψᵢ` of the actuators, in radians.
    pub fn actuator_angles(&self) -> Vec<f64> {
        actuator_angles(self.n)
    }
}

fn actuator_angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| std::f64::consts::TAU * k as f64 / n as f64)
        .collect()
}

/// Clarke coordinates `(ρ_Re, ρ_Im)`, both in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClarkeCoordinates {
    pub re: f64,
    pub im: f64,
}

impl ClarkeCoordinates {
    pub const ZERO: ClarkeCoordinates = ClarkeCoordinates { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        ClarkeCoordinates { re, im }
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Rotates the pair by `angle` radians in the Clarke plane.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        ClarkeCoordinates {
            re: c * self.re - s * self.im,
            im: s * self.re + c * self.im,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ClarkeCoordinates {
            re: factor * self.re,
            im: factor * self.im,
        }
    }
}

/// Displacements `ρᵢ` of the `n` actuators of one segment, in meters.
///
/// Any vector is representable; whether it is reachable by a constant-curvature
/// segment is checked with [`ClarkeMatrix::feasibility`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JointDisplacements(Vec<f64>);

impl JointDisplacements {
    pub fn new(values: Vec<f64>) -> Self {
        JointDisplacements(values)
    }

    pub fn zeros(n: usize) -> Self {
        JointDisplacements(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Displacement of tendon `i`, 1-based.
    pub fn get(&self, i: usize) -> Option<f64> {
        i.checked_sub(1).and_then(|k| self.0.get(k)).copied()
    }
}

impl From<Vec<f64>> for JointDisplacements {
    fn from(values: Vec<f64>) -> Self {
        JointDisplacements(values)
    }
}

impl AsRef<[f64]> for JointDisplacements {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Residuals reported by a feasibility check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// `|Σρᵢ|`
    pub sum_residual: f64,
    /// `‖ρ − P·ρ‖∞`, distance to the manifold in the max norm.
    pub manifold_residual: f64,
}

/// The 2×n generalized Clarke transformation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkeMatrix {
    n: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
    re_row: Vec<f64>,
    im_row: Vec<f64>,
}

impl ClarkeMatrix {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::ActuatorCount(n));
        }
        let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n).map(|k| unit_circle(k, n)).unzip();
        let scale = |c: &f64| 2.0 * c / n as f64 + 0.0;
        let re_row = cos.iter().map(scale).collect();
        let im_row = sin.iter().map(scale).collect();
        Ok(ClarkeMatrix {
            n,
            cos,
            sin,
            re_row,
            im_row,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// First row, `(2/n)·cos ψᵢ`.
    pub fn re_row(&self) -> &[f64] {
        &self.re_row
    }

    /// Second row, `(2/n)·sin ψᵢ`.
    pub fn im_row(&self) -> &[f64] {
        &self.im_row
    }

    /// Entry at `(row, col)`, both 0-based.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        match row {
            0 => self.re_row[col],
            1 => self.im_row[col],
            _ => panic!("Clarke matrix has two rows, asked for row {row}"),
        }
    }

    /// The cosine mode `cos ψᵢ`, first column of the right inverse.
    pub fn cos_mode(&self) -> &[f64] {
        &self.cos
    }

    /// The sine mode `sin ψᵢ`, second column of the right inverse.
    pub fn sin_mode(&self) -> &[f64] {
        &self.sin
    }

    /// Right inverse `(n/2)·M_Pᵀ` as n rows of two entries.
    pub fn right_inverse(&self) -> Vec<[f64; 2]> {
        self.cos
            .iter()
            .zip(&self.sin)
            .map(|(&c, &s)| [c, s])
            .collect()
    }

    /// Dense n×n projector `M_P⁻¹·M_P`, row-major.
    pub fn projector(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.cos[i] * self.re_row[j] + self.sin[i] * self.im_row[j])
                    .collect()
            })
            .collect()
    }

    fn check_len(&self, rho: &JointDisplacements) -> Result<()> {
        if rho.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: rho.len(),
            });
        }
        Ok(())
    }

    /// `M_P·ρ`. For any `ρ` this is the least-squares fit of the cosine and
    /// sine modes to the samples.
    pub fn transform(&self, rho: &JointDisplacements) -> Result<ClarkeCoordinates> {
        self.check_len(rho)?;
        let dot = |row: &[f64]| row.iter().zip(rho.as_slice()).map(|(m, r)| m * r).sum();
        Ok(ClarkeCoordinates {
            re: dot(&self.re_row),
            im: dot(&self.im_row),
        })
    }

    /// `ρᵢ = ρ_Re cos ψᵢ + ρ_Im sin ψᵢ`. The result always sums to zero up to
    /// rounding.
    pub fn inverse(&self, c: ClarkeCoordinates) -> JointDisplacements {
        JointDisplacements(
            self.cos
                .iter()
                .zip(&self.sin)
                .map(|(&cos, &sin)| c.re * cos + c.im * sin)
                .collect(),
        )
    }

    /// Nearest feasible joint vector, `M_P⁻¹·M_P·ρ*`.
    pub fn project(&self, rho_star: &JointDisplacements) -> Result<JointDisplacements> {
        Ok(self.inverse(self.transform(rho_star)?))
    }

    /// Checks membership in the feasible set: `ρ` must lie on the span of the
    /// cosine and sine modes, and sum to zero, both within `tol` meters.
    pub fn feasibility(&self, rho: &JointDisplacements, tol: f64) -> Result<Feasibility> {
        if !(tol > 0.0) {
            return Err(Error::Tolerance(tol));
        }
        let projected = self.project(rho)?;
        let manifold_residual = rho
            .as_slice()
            .iter()
            .zip(projected.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let sum_residual = rho.sum().abs();
        Ok(Feasibility {
            feasible: manifold_residual <= tol && sum_residual <= tol,
            sum_residual,
            manifold_residual,
        })
    }
}

/// Builds the Clarke matrix for `n` actuators.
pub fn build_clarke_matrix(n: usize) -> Result<ClarkeMatrix> {
    ClarkeMatrix::new(n)
}

pub fn clarke_transform(rho: &JointDisplacements, m: &ClarkeMatrix) -> Result<ClarkeCoordinates> {
    m.transform(rho)
}

pub fn inverse_clarke_transform(c: ClarkeCoordinates, m: &ClarkeMatrix) -> JointDisplacements {
    m.inverse(c)
}

pub fn project_to_manifold(
    rho_star: &JointDisplacements,
    m: &ClarkeMatrix,
) -> Result<JointDisplacements> {
    m.project(rho_star)
}

pub fn is_feasible(rho: &JointDisplacements, m: &ClarkeMatrix, tol: f64) -> Result<Feasibility> {
    m.feasibility(rho, tol)
}

pub(crate) fn check_clarke(c: ClarkeCoordinates) -> Result<ClarkeCoordinates> {
    finite("rho_re", c.re)?;
    finite("rho_im", c.im)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    // Naive ψ evaluation, independent of the exact reduction used by the matrix.
    fn naive_modes(n: usize) -> (Vec<f64>, Vec<f64>) {
        (0..n)
            .map(|i| {
                let psi = TAU * i as f64 / n as f64;
                (psi.cos(), psi.sin())
            })
            .unzip()
    }

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn n3_matrix() {
        let m = build_clarke_matrix(3).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expected_re = [1.0, -0.5, -0.5].map(|v| 2.0 * v / 3.0);
        let expected_im = [0.0, h, -h].map(|v| 2.0 * v / 3.0);
        assert_eq!(m.re_row(), expected_re);
        assert_eq!(m.im_row(), expected_im);
    }

    #[test]
    fn n4_matrix() {
        let m = build_clarke_matrix(4).unwrap();
        assert_eq!(m.re_row(), [0.5, 0.0, -0.5, 0.0]);
        assert_eq!(m.im_row(), [0.0, 0.5, 0.0, -0.5]);
    }

    #[test]
    fn n7_rows_sum_to_zero() {
        let m = build_clarke_matrix(7).unwrap();
        let (cos, sin) = naive_modes(7);
        let brute_re: f64 = cos.iter().map(|c| 2.0 * c / 7.0).sum();
        let brute_im: f64 = sin.iter().map(|s| 2.0 * s / 7.0).sum();
        assert!(brute_re.abs() < 1e-12 && brute_im.abs() < 1e-12);
        assert!(m.re_row().iter().sum::<f64>().abs() < 1e-12);
        assert!(m.im_row().iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn rejects_small_n() {
        for n in 0..3 {
            assert_eq!(build_clarke_matrix(n), Err(Error::ActuatorCount(n)));
        }
        assert!(SegmentGeometry::new(2, 0.01, 0.1).is_err());
        assert!(SegmentGeometry::new(3, 0.0, 0.1).is_err());
        assert!(SegmentGeometry::new(3, 0.01, -0.1).is_err());
        assert!(SegmentGeometry::new(3, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn actuator_angles_start_at_zero() {
        let g = SegmentGeometry::new(4, 0.008, 0.15).unwrap();
        let psi = g.actuator_angles();
        assert_eq!(psi[0], 0.0);
        assert_abs_diff_eq!(psi[1], TAU / 4.0);
        assert!(psi.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn transform_of_pure_cosine_mode() {
        let m = build_clarke_matrix(3).unwrap();
        let c = 0.004;
        let rho = JointDisplacements::new(vec![c, -c / 2.0, -c / 2.0]);
        let out = m.transform(&rho).unwrap();
        assert_abs_diff_eq!(out.re, c, epsilon = 1e-15);
        assert_abs_diff_eq!(out.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn transform_annihilates_uniform_vector() {
        let m = build_clarke_matrix(3).unwrap();
        let out = m.transform(&vec![0.002; 3].into()).unwrap();
        assert_abs_diff_eq!(out.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn transform_recovers_mode_coefficients_n5() {
        let (a, b) = (0.003, -0.001);
        let (cos, sin) = naive_modes(5);
        let rho: Vec<f64> = cos.iter().zip(&sin).map(|(c, s)| a * c + b * s).collect();
        let out = build_clarke_matrix(5).unwrap().transform(&rho.into()).unwrap();
        assert_abs_diff_eq!(out.re, a, epsilon = 1e-12);
        assert_abs_diff_eq!(out.im, b, epsilon = 1e-12);
    }

    #[test]
    fn transform_rejects_wrong_length() {
        let m = build_clarke_matrix(4).unwrap();
        assert_eq!(
            m.transform(&vec![0.0; 3].into()),
            Err(Error::LengthMismatch {
                expected: 4,
                found: 3
            })
        );
        assert!(m.project(&vec![0.0; 5].into()).is_err());
    }

    #[test]
    fn inverse_examples() {
        for n in 3..10 {
            let m = build_clarke_matrix(n).unwrap();
            assert_eq!(m.inverse(ClarkeCoordinates::ZERO), JointDisplacements::zeros(n));
        }
        let m4 = build_clarke_matrix(4).unwrap();
        assert_eq!(
            m4.inverse(ClarkeCoordinates::new(0.002, 0.0)).as_slice(),
            [0.002, 0.0, -0.002, 0.0]
        );
        let rho = build_clarke_matrix(3)
            .unwrap()
            .inverse(ClarkeCoordinates::new(0.001, 0.001));
        let expected = [
            0.001,
            0.000_366_025_403_784_438_646_763_723_2,
            -0.001_366_025_403_784_438_646_763_723,
        ];
        assert!(max_abs_diff(rho.as_slice(), &expected) < 1e-18);
    }

    #[test]
    fn projection_examples() {
        let m3 = build_clarke_matrix(3).unwrap();
        let feasible = m3.inverse(ClarkeCoordinates::new(0.002, -0.0007));
        let p = m3.project(&feasible).unwrap();
        assert!(max_abs_diff(p.as_slice(), feasible.as_slice()) < 1e-12);

        let p = m3.project(&vec![0.001; 3].into()).unwrap();
        assert!(max_abs_diff(p.as_slice(), &[0.0; 3]) < 1e-15);

        // feasible part plus a uniform offset; the uniform mode is in the
        // null space of a projector built by brute force from naive modes
        let m7 = build_clarke_matrix(7).unwrap();
        let (cos, sin) = naive_modes(7);
        let brute_p = |i: usize, j: usize| 2.0 / 7.0 * (cos[i] * cos[j] + sin[i] * sin[j]);
        let null: f64 = (0..7).map(|j| brute_p(2, j) * 0.01).sum();
        assert!(null.abs() < 1e-15);
        let feasible = m7.inverse(ClarkeCoordinates::new(-0.004, 0.0025));
        let perturbed: Vec<f64> = feasible.as_slice().iter().map(|v| v + 0.01).collect();
        let p = m7.project(&perturbed.into()).unwrap();
        assert!(max_abs_diff(p.as_slice(), feasible.as_slice()) < 1e-12);
    }

    #[test]
    fn feasibility_examples() {
        let m3 = build_clarke_matrix(3).unwrap();
        let rho = m3.inverse(ClarkeCoordinates::new(0.003, 0.001));
        assert!(m3.feasibility(&rho, DEFAULT_TOLERANCE).unwrap().feasible);

        // alternating mode sums to zero but is orthogonal to both modes at n = 4
        let m4 = build_clarke_matrix(4).unwrap();
        let a = 0.001;
        let alternating: JointDisplacements = vec![a, -a, a, -a].into();
        let (cos, sin) = naive_modes(4);
        for i in 0..4 {
            let brute: f64 = (0..4)
                .map(|j| 0.5 * (cos[i] * cos[j] + sin[i] * sin[j]) * alternating.as_slice()[j])
                .sum();
            assert!(brute.abs() < 1e-18);
        }
        let report = m4.feasibility(&alternating, DEFAULT_TOLERANCE).unwrap();
        assert!(!report.feasible);
        assert!(report.sum_residual < 1e-18);
        assert_abs_diff_eq!(report.manifold_residual, a, epsilon = 1e-18);

        let report = m3.feasibility(&vec![0.001; 3].into(), DEFAULT_TOLERANCE).unwrap();
        assert!(!report.feasible);
        assert_abs_diff_eq!(report.sum_residual, 0.003, epsilon = 1e-18);
    }

    #[test]
    fn feasibility_rejects_bad_tolerance() {
        let m = build_clarke_matrix(3).unwrap();
        let rho = JointDisplacements::zeros(3);
        for tol in [0.0, -1e-9, f64::NAN] {
            assert!(matches!(m.feasibility(&rho, tol), Err(Error::Tolerance(_))));
        }
    }

    #[test]
    fn right_inverse_and_row_orthogonality() {
        for n in 3..=32 {
            let m = build_clarke_matrix(n).unwrap();
            let inv = m.right_inverse();
            for (r, row) in [m.re_row(), m.im_row()].iter().enumerate() {
                for c in 0..2 {
                    let v: f64 = row.iter().zip(&inv).map(|(a, b)| a * b[c]).sum();
                    let id = if r == c { 1.0 } else { 0.0 };
                    assert!((v - id).abs() <= 1e-12, "n={n} ({r},{c}) = {v}");
                }
            }
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            let g = 2.0 / n as f64;
            assert!((dot(m.re_row(), m.re_row()) - g).abs() < 1e-12);
            assert!((dot(m.im_row(), m.im_row()) - g).abs() < 1e-12);
            assert!(dot(m.re_row(), m.im_row()).abs() < 1e-12);
        }
    }

    #[test]
    fn projector_laws() {
        for n in 3..=32 {
            let p = build_clarke_matrix(n).unwrap().projector();
            let mut trace = 0.0;
            for i in 0..n {
                trace += p[i][i];
                for j in 0..n {
                    assert!((p[i][j] - p[j][i]).abs() < 1e-10);
                    let pp: f64 = (0..n).map(|k| p[i][k] * p[k][j]).sum();
                    assert!((pp - p[i][j]).abs() < 1e-10);
                }
            }
            assert!((trace - 2.0).abs() < 1e-10);
        }
    }

    // Normal-equation fit with naive modes and Cramer's rule.
    fn normal_equation_fit(rho: &[f64]) -> (f64, f64) {
        let (cos, sin) = naive_modes(rho.len());
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (acc, acs, ass) = (dot(&cos, &cos), dot(&cos, &sin), dot(&sin, &sin));
        let (bc, bs) = (dot(&cos, rho), dot(&sin, rho));
        let det = acc * ass - acs * acs;
        ((bc * ass - acs * bs) / det, (acc * bs - acs * bc) / det)
    }

    fn joint_vector() -> impl Strategy<Value = Vec<f64>> {
        (3usize..16).prop_flat_map(|n| prop::collection::vec(-0.05f64..0.05, n))
    }

    proptest! {
        #[test]
        fn inverse_output_sums_to_zero(n in 3usize..40, re in -0.1f64..0.1, im in -0.1f64..0.1) {
            let m = build_clarke_matrix(n).unwrap();
            let c = ClarkeCoordinates::new(re, im);
            let rho = m.inverse(c);
            prop_assert!(rho.sum().abs() <= 1e-12 * n as f64 * c.norm().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn transform_inverts_inverse(n in 3usize..40, re in -0.1f64..0.1, im in -0.1f64..0.1) {
            let m = build_clarke_matrix(n).unwrap();
            let c = ClarkeCoordinates::new(re, im);
            let back = m.transform(&m.inverse(c)).unwrap();
            let err = (back.re - c.re).hypot(back.im - c.im);
            prop_assert!(err <= 1e-12 * c.norm().max(1e-300));
        }

        #[test]
        fn transform_is_least_squares_fit(rho in joint_vector()) {
            let c = build_clarke_matrix(rho.len()).unwrap().transform(&rho.clone().into()).unwrap();
            let (a, b) = normal_equation_fit(&rho);
            prop_assert!((c.re - a).abs() < 1e-10 && (c.im - b).abs() < 1e-10);
        }

        #[test]
        fn projection_is_idempotent_and_feasible(rho in joint_vector()) {
            let m = build_clarke_matrix(rho.len()).unwrap();
            let once = m.project(&rho.into()).unwrap();
            let twice = m.project(&once).unwrap();
            prop_assert!(max_abs_diff(once.as_slice(), twice.as_slice()) < 1e-15);
            prop_assert!(m.feasibility(&once, DEFAULT_TOLERANCE).unwrap().feasible);
        }

        #[test]
        fn projection_residual_is_orthogonal(rho in joint_vector()) {
            let m = build_clarke_matrix(rho.len()).unwrap();
            let p = m.project(&rho.clone().into()).unwrap();
            let residual: Vec<f64> = rho.iter().zip(p.as_slice()).map(|(a, b)| a - b).collect();
            let dot = |mode: &[f64]| mode.iter().zip(&residual).map(|(x, y)| x * y).sum::<f64>();
            prop_assert!(dot(m.cos_mode()).abs() < 1e-15);
            prop_assert!(dot(m.sin_mode()).abs() < 1e-15);
        }
    }
}
