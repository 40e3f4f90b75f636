use serde::Serialize;

use super::{ConfigurationSet, RobotDescription, SegmentConfig};
use crate::arc::{f_dep, f_dep_inv, ArcParameters, ModelValidity};
use crate::batch;
use crate::clarke::{check_clarke, ClarkeCoordinates, Feasibility, JointDisplacements, DEFAULT_TOLERANCE};
use crate::error::{positive, Error, Result};
use crate::pose::{cumulative, f_ind, SegmentPose};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FkOptions {
    /// Feasibility tolerance for joint-space entries, in meters.
    pub tol: f64,
    /// Continue on the projection of an infeasible joint vector instead of
    /// failing.
    pub project_infeasible: bool,
}

impl Default for FkOptions {
    fn default() -> Self {
        FkOptions {
            tol: DEFAULT_TOLERANCE,
            project_infeasible: false,
        }
    }
}

/// One segment's state in every space, plus its poses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentState {
    pub arc: ArcParameters,
    pub clarke: ClarkeCoordinates,
    /// Feasible joint vector the computation used.
    pub joints: JointDisplacements,
    pub validity: ModelValidity,
    /// Feasibility of the joint input, when the input was in joint space.
    pub feasibility: Option<Feasibility>,
    /// Tip pose relative to the segment base.
    pub local: SegmentPose,
    /// Tip pose relative to the robot base.
    pub frame: SegmentPose,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForwardKinematics {
    pub segments: Vec<SegmentState>,
    pub tip: SegmentPose,
}

/// Normalizes every entry to arc parameters and chains the segment poses.
pub fn forward_kinematics(
    robot: &RobotDescription,
    config: &ConfigurationSet,
    opts: &FkOptions,
) -> Result<ForwardKinematics> {
    positive("tolerance", opts.tol).map_err(|_| Error::Tolerance(opts.tol))?;
    config.check(robot)?;
    let mut states = Vec::with_capacity(robot.len());
    for (k, (entry, geom)) in config.entries().iter().zip(robot.segments()).enumerate() {
        let m = robot.matrix(k);
        let (clarke, feasibility) = match entry {
            SegmentConfig::Joint(rho) => {
                let report = m.feasibility(rho, opts.tol)?;
                if !report.feasible && !opts.project_infeasible {
                    return Err(Error::Infeasible {
                        segment: k + 1,
                        sum_residual: report.sum_residual,
                        manifold_residual: report.manifold_residual,
                        tol: opts.tol,
                    });
                }
                (m.transform(rho)?, Some(report))
            }
            SegmentConfig::Clarke(c) => (check_clarke(*c)?, None),
            SegmentConfig::Arc(arc) => (f_dep(arc, geom)?, None),
        };
        let (arc, validity) = match entry {
            SegmentConfig::Arc(arc) => (*arc, arc.validity(geom.d())),
            _ => {
                let checked = f_dep_inv(clarke, geom)?;
                (checked.arc, checked.validity)
            }
        };
        let local = f_ind(&arc);
        states.push(SegmentState {
            arc,
            clarke,
            joints: m.inverse(clarke),
            validity,
            feasibility,
            local,
            frame: local,
        });
    }
    let locals: Vec<SegmentPose> = states.iter().map(|s| s.local).collect();
    for (state, frame) in states.iter_mut().zip(cumulative(&locals)) {
        state.frame = frame;
    }
    let tip = states.last().expect("robot has a segment").frame;
    Ok(ForwardKinematics {
        segments: states,
        tip,
    })
}

/// [`forward_kinematics`] over many rows; rows are independent and may be
/// evaluated in parallel. Results keep the input order.
pub fn forward_kinematics_batch(
    robot: &RobotDescription,
    rows: &[ConfigurationSet],
    opts: &FkOptions,
) -> Vec<Result<ForwardKinematics>> {
    batch::map(rows, |row| forward_kinematics(robot, row, opts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseKinematics {
    /// Joint-space configuration, feasible by construction.
    pub config: ConfigurationSet,
    pub validity: Vec<ModelValidity>,
}

/// Joint vectors producing the given per-segment arcs.
pub fn inverse_kinematics_arcwise(
    robot: &RobotDescription,
    arcs: &[ArcParameters],
) -> Result<InverseKinematics> {
    if arcs.len() != robot.len() {
        return Err(Error::SegmentCount {
            expected: robot.len(),
            found: arcs.len(),
        });
    }
    let mut config = Vec::with_capacity(arcs.len());
    let mut validity = Vec::with_capacity(arcs.len());
    for (k, (arc, geom)) in arcs.iter().zip(robot.segments()).enumerate() {
        let clarke = f_dep(arc, geom)?;
        config.push(SegmentConfig::Joint(robot.matrix(k).inverse(clarke)));
        validity.push(arc.validity(geom.d()));
    }
    Ok(InverseKinematics {
        config: ConfigurationSet::new(config),
        validity,
    })
}

/// Runs `op` on each segment's Clarke coordinates and maps the result back to
/// joint space.
///
/// Joint entries need not be feasible: the Clarke transform discards the
/// off-manifold part, so the identity operator yields the projection of the
/// input. `op` receives the 0-based segment index.
pub fn disentangle_apply<F>(
    robot: &RobotDescription,
    config: &ConfigurationSet,
    op: F,
) -> Result<ConfigurationSet>
where
    F: Fn(usize, ClarkeCoordinates) -> ClarkeCoordinates,
{
    config.check(robot)?;
    config
        .entries()
        .iter()
        .zip(robot.segments())
        .enumerate()
        .map(|(k, (entry, geom))| {
            let m = robot.matrix(k);
            let clarke = match entry {
                SegmentConfig::Joint(rho) => m.transform(rho)?,
                SegmentConfig::Clarke(c) => *c,
                SegmentConfig::Arc(arc) => f_dep(arc, geom)?,
            };
            let out = op(k, clarke);
            if !out.is_finite() {
                return Err(Error::OperatorOutput {
                    segment: k + 1,
                    re: out.re,
                    im: out.im,
                });
            }
            Ok(SegmentConfig::Joint(m.inverse(out)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorkspaceSample {
    pub kappa: f64,
    pub theta: f64,
    pub tip: SegmentPose,
}

/// Tip poses over the grid `kappas × thetas` for segment `segment` (0-based),
/// with every other segment straight. Rows are ordered curvature-major.
pub fn sample_workspace(
    robot: &RobotDescription,
    segment: usize,
    kappas: &[f64],
    thetas: &[f64],
) -> Result<Vec<WorkspaceSample>> {
    let geom = robot.segment(segment).ok_or(Error::SegmentCount {
        expected: robot.len(),
        found: segment + 1,
    })?;
    let straight = robot
        .segments()
        .iter()
        .map(|s| ArcParameters::straight(s.l()).map(|a| f_ind(&a)))
        .collect::<Result<Vec<_>>>()?;
    let grid: Vec<(f64, f64)> = kappas
        .iter()
        .flat_map(|&k| thetas.iter().map(move |&t| (k, t)))
        .collect();
    batch::map(&grid, |&(kappa, theta)| {
        let arc = ArcParameters::new(kappa, theta, geom.l())?;
        let mut chain = straight.clone();
        chain[segment] = f_ind(&arc);
        let tip = *cumulative(&chain).last().expect("non-empty chain");
        Ok(WorkspaceSample { kappa, theta, tip })
    })
    .into_iter()
    .collect()
}
