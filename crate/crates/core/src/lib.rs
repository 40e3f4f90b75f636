//! Kinematics of displacement-actuated constant-curvature continuum robot
//! segments with any number `n >= 3` of symmetrically placed actuators.
//!
//! The crate is layered along the chain of spaces
//!
//! ```text
//!   joint ρ  ⇄  Clarke (ρ_Re, ρ_Im)  ⇄  arc (κ, θ, ℓ)  ⇄  pose (p, ξ)
//!        clarke           arc                pose
//! ```
//!
//! and [`robot`] strings the layers together for multi-segment robots,
//! trajectories and the joint-space projection workflow.

pub mod arc;
pub mod batch;
pub mod clarke;
pub mod cli;
mod error;
pub mod format;
pub mod pose;
pub mod robot;
pub mod special;

pub use arc::{f_dep, f_dep_inv, tendon_displacement, ArcParameters, CheckedArc, ModelValidity};
pub use clarke::{
    build_clarke_matrix, clarke_transform, inverse_clarke_transform, is_feasible,
    project_to_manifold, ClarkeCoordinates, ClarkeMatrix, Feasibility, JointDisplacements,
    SegmentGeometry, DEFAULT_TOLERANCE,
};
pub use error::{Error, Result};
pub use pose::{compose, f_ind, f_ind_inv, SegmentPose};
pub use robot::{
    ConfigurationSet, FkOptions, ForwardKinematics, RobotDescription, SegmentConfig,
};
