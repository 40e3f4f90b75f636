//! Robot-independent mapping between arc parameters and segment tip poses.
//!
//! Frame convention: the segment leaves its base along `+z`. It bends in the
//! plane spanned by `z` and `(cos θ, sin θ, 0)`, toward the latter. The tip
//! frame is the base frame rotated by `κℓ` about `(−sin θ, cos θ, 0)`.
//!
//! ```text
//!        z
//!        ^      . tip
//!        |    .´
//!        |  .´   bending plane at angle θ from x
//!        | /
//!        |/_________> (cos θ, sin θ, 0)
//! ```
//!
//! Quaternions are scalar-first `(w, x, y, z)` and kept in the `w >= 0`
//! hemisphere.

use nalgebra::{Quaternion, Unit, UnitQuaternion, Vector3};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::arc::ArcParameters;
use crate::error::{Error, Result};
use crate::special::{sinc, versinc};

/// Position (m) and orientation of a frame relative to a parent frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPose {
    pub p: Vector3<f64>,
    pub xi: UnitQuaternion<f64>,
}

impl SegmentPose {
    pub fn identity() -> Self {
        SegmentPose {
            p: Vector3::zeros(),
            xi: UnitQuaternion::identity(),
        }
    }

    /// Builds a pose, normalizing the quaternion into the `w >= 0` hemisphere.
    pub fn new(p: Vector3<f64>, xi: Quaternion<f64>) -> Self {
        SegmentPose {
            p,
            xi: canonical(UnitQuaternion::from_quaternion(xi)),
        }
    }

    /// Quaternion as `[w, x, y, z]`.
    pub fn wxyz(&self) -> [f64; 4] {
        let q = self.xi.quaternion();
        [q.w, q.i, q.j, q.k]
    }

    /// `self` followed by `next`, with `next` expressed in `self`'s tip frame.
    pub fn then(&self, next: &SegmentPose) -> SegmentPose {
        let p = self.p + self.xi.transform_vector(&next.p);
        let xi = UnitQuaternion::new_normalize(self.xi.into_inner() * next.xi.into_inner());
        SegmentPose {
            p,
            xi: canonical(xi),
        }
    }

    /// Euclidean distance between positions.
    pub fn position_distance(&self, other: &SegmentPose) -> f64 {
        (self.p - other.p).norm()
    }

    /// `min(‖q₁ − q₂‖, ‖q₁ + q₂‖)`, which identifies `q` with `−q`.
    pub fn quaternion_distance(&self, other: &SegmentPose) -> f64 {
        let a = self.xi.coords;
        let b = other.xi.coords;
        (a - b).norm().min((a + b).norm())
    }
}

impl Serialize for SegmentPose {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SegmentPose", 2)?;
        s.serialize_field("p", &[self.p.x, self.p.y, self.p.z])?;
        s.serialize_field("xi", &self.wxyz())?;
        s.end()
    }
}

fn canonical(q: UnitQuaternion<f64>) -> UnitQuaternion<f64> {
    if q.w < 0.0 {
        Unit::new_unchecked(-q.into_inner())
    } else {
        q
    }
}

/// Tip pose of a constant-curvature arc, relative to its base.
///
/// Finite at `κ = 0`: the position terms are evaluated through `sin(x)/x` and
/// `(1 − cos x)/x` with series branches near zero.
pub fn f_ind(arc: &ArcParameters) -> SegmentPose {
    let l = arc.l();
    let x = arc.bending_angle();
    let (st, ct) = arc.theta().sin_cos();
    let radial = l * versinc(x);
    let p = Vector3::new(ct * radial, st * radial, l * sinc(x));
    let (sh, ch) = (0.5 * x).sin_cos();
    let xi = Quaternion::new(ch, -st * sh, ct * sh, 0.0);
    SegmentPose::new(p, xi)
}

/// Arc parameters of the single segment whose tip is at `p`.
///
/// Restricted to the principal branch `κℓ ∈ [0, π]`, where the arc through a
/// given tip position is unique.
pub fn f_ind_inv(p: &Vector3<f64>) -> Result<ArcParameters> {
    let unreachable = || Error::Unreachable {
        x: p.x,
        y: p.y,
        z: p.z,
    };
    if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) || p.z < 0.0 {
        return Err(unreachable());
    }
    let r = p.x.hypot(p.y);
    if r == 0.0 {
        if p.z > 0.0 {
            return ArcParameters::straight(p.z);
        }
        return Err(unreachable());
    }
    let theta = p.y.atan2(p.x);
    let chord2 = r * r + p.z * p.z;
    let kappa = 2.0 * r / chord2;
    // tan(κℓ/2) = r / p_z
    let bend = 2.0 * r.atan2(p.z);
    ArcParameters::new(kappa, theta, bend / kappa)
}

/// Left-to-right rigid composition of a chain of relative poses.
pub fn compose(poses: &[SegmentPose]) -> Result<SegmentPose> {
    let (first, rest) = poses.split_first().ok_or(Error::EmptyChain)?;
    Ok(rest.iter().fold(*first, |acc, next| acc.then(next)))
}

/// Cumulative frames of a chain: entry `k` is the pose of the tip of segment `k`.
pub fn cumulative(poses: &[SegmentPose]) -> Vec<SegmentPose> {
    poses
        .iter()
        .scan(None::<SegmentPose>, |acc, pose| {
            let next = match acc {
                None => *pose,
                Some(prev) => prev.then(pose),
            };
            *acc = Some(next);
            Some(next)
        })
        .collect()
}
