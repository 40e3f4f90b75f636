//! Robot-dependent mapping between Clarke coordinates and arc parameters.
//!
//! For a constant-curvature segment of length `ℓ` with actuators on a circle
//! of radius `d`,
//!
//! ```text
//!   (ρ_Re, ρ_Im) = ℓ·d·κ·(cos θ, sin θ)
//! ```
//!
//! which is linear in `κ` and has a closed-form inverse.
//!
//! Sign convention: a positive `ρᵢ` shortens tendon `i`. The tendon lying in
//! the bending plane on the inside of the bend (`ψᵢ = θ`) carries the largest
//! positive displacement, `ρᵢ = ℓ·d·κ`.

use serde::{Deserialize, Serialize};

use crate::clarke::{check_clarke, ClarkeCoordinates, ClarkeMatrix, JointDisplacements, SegmentGeometry};
use crate::error::{finite, positive, Error, Result};
use crate::special::wrap_angle;

/// Relative tolerance used when comparing an arc length against the segment's.
const LENGTH_RTOL: f64 = 1e-12;

/// Curvature (1/m), bending-plane angle (rad) and arc length (m).
///
/// Canonical form: `κ >= 0`, `θ ∈ [0, 2π)`, and `θ = 0` whenever `κ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcParameters {
    kappa: f64,
    theta: f64,
    l: f64,
}

impl ArcParameters {
    /// A negative curvature is folded into the bending plane by adding π.
    pub fn new(kappa: f64, theta: f64, l: f64) -> Result<Self> {
        finite("curvature kappa", kappa)?;
        finite("bending-plane angle theta", theta)?;
        positive("arc length l", l)?;
        let (kappa, theta) = if kappa < 0.0 {
            (-kappa, theta + std::f64::consts::PI)
        } else {
            (kappa, theta)
        };
        let theta = if kappa == 0.0 { 0.0 } else { wrap_angle(theta) };
        Ok(ArcParameters { kappa, theta, l })
    }

    /// Straight segment of length `l`.
    pub fn straight(l: f64) -> Result<Self> {
        ArcParameters::new(0.0, 0.0, l)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Total bending angle `κℓ`.
    pub fn bending_angle(&self) -> f64 {
        self.kappa * self.l
    }

    /// Whether the arc stays within the model for pitch radius `d`.
    pub fn validity(&self, d: f64) -> ModelValidity {
        ModelValidity::for_curvature(self.kappa, d)
    }
}

/// Whether `κ·d < 1`, i.e. the tendons stay on their side of the backbone's
/// center of curvature. The closed-form maps stay defined either way; this
/// flag only marks physical plausibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ModelValidity {
    Valid,
    TendonCrossesAxis { kappa_d: f64 },
}

impl ModelValidity {
    pub fn for_curvature(kappa: f64, d: f64) -> Self {
        let kappa_d = kappa * d;
        if kappa_d < 1.0 {
            ModelValidity::Valid
        } else {
            ModelValidity::TendonCrossesAxis { kappa_d }
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, ModelValidity::Valid)
    }
}

/// Result of the inverse mapping: the arc together with its validity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[must_use]
pub struct CheckedArc {
    pub arc: ArcParameters,
    pub validity: ModelValidity,
}

fn check_length(arc: &ArcParameters, geom: &SegmentGeometry) -> Result<()> {
    if (arc.l - geom.l()).abs() > LENGTH_RTOL * geom.l() {
        return Err(Error::ArcLengthMismatch {
            arc: arc.l,
            segment: geom.l(),
        });
    }
    Ok(())
}

/// Arc parameters to Clarke coordinates.
pub fn f_dep(arc: &ArcParameters, geom: &SegmentGeometry) -> Result<ClarkeCoordinates> {
    check_length(arc, geom)?;
    let (s, c) = arc.theta.sin_cos();
    let scale = arc.l * geom.d() * arc.kappa;
    Ok(ClarkeCoordinates::new(scale * c, scale * s))
}

/// Clarke coordinates to arc parameters; `ℓ` is taken from the geometry.
pub fn f_dep_inv(c: ClarkeCoordinates, geom: &SegmentGeometry) -> Result<CheckedArc> {
    let c = check_clarke(c)?;
    let norm = c.norm();
    let kappa = norm / (geom.l() * geom.d());
    let theta = if norm == 0.0 { 0.0 } else { c.im.atan2(c.re) };
    let arc = ArcParameters::new(kappa, theta, geom.l())?;
    Ok(CheckedArc {
        arc,
        validity: arc.validity(geom.d()),
    })
}

/// Displacement of tendon `i` (1-based), `ℓ·d·κ·cos(θ − ψᵢ)`.
pub fn tendon_displacement(arc: &ArcParameters, geom: &SegmentGeometry, i: usize) -> Result<f64> {
    if i == 0 || i > geom.n() {
        return Err(Error::TendonIndex { index: i, n: geom.n() });
    }
    check_length(arc, geom)?;
    let psi = std::f64::consts::TAU * (i - 1) as f64 / geom.n() as f64;
    Ok(arc.l * geom.d() * arc.kappa * (arc.theta - psi).cos())
}

/// All tendon displacements for an arc, via the Clarke matrix.
pub fn joint_displacements(
    arc: &ArcParameters,
    geom: &SegmentGeometry,
    m: &ClarkeMatrix,
) -> Result<JointDisplacements> {
    if m.n() != geom.n() {
        return Err(Error::LengthMismatch {
            expected: geom.n(),
            found: m.n(),
        });
    }
    Ok(m.inverse(f_dep(arc, geom)?))
}
