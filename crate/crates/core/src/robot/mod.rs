//! Multi-segment robots: description files, configurations in any of the
//! joint/Clarke/arc spaces, trajectories and the kinematic pipelines.

mod description;
mod pipeline;
mod trajectory;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::arc::ArcParameters;
use crate::clarke::{ClarkeCoordinates, ClarkeMatrix, JointDisplacements, SegmentGeometry};
use crate::error::{Error, Result};

pub use description::load_robot;
pub use pipeline::{
    disentangle_apply, forward_kinematics, forward_kinematics_batch, inverse_kinematics_arcwise,
    sample_workspace, FkOptions, ForwardKinematics, InverseKinematics, SegmentState,
    WorkspaceSample,
};
pub use trajectory::{load_trajectory, write_trajectory};

/// A chain of segments, base to tip. Segments may differ in `n`, `d` and `l`.
#[derive(Debug, Clone)]
pub struct RobotDescription {
    name: String,
    segments: Vec<SegmentGeometry>,
    matrices: Vec<Arc<ClarkeMatrix>>,
}

impl PartialEq for RobotDescription {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.segments == other.segments
    }
}

impl RobotDescription {
    pub fn new(name: impl Into<String>, segments: Vec<SegmentGeometry>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Description("robot needs at least one segment".into()));
        }
        let mut cache: BTreeMap<usize, Arc<ClarkeMatrix>> = BTreeMap::new();
        let mut matrices = Vec::with_capacity(segments.len());
        for seg in &segments {
            let m = match cache.get(&seg.n()) {
                Some(m) => Arc::clone(m),
                None => {
                    let m = Arc::new(ClarkeMatrix::new(seg.n())?);
                    cache.insert(seg.n(), Arc::clone(&m));
                    m
                }
            };
            matrices.push(m);
        }
        Ok(RobotDescription {
            name: name.into(),
            segments,
            matrices,
        })
    }

    /// One-segment robot.
    pub fn single(geometry: SegmentGeometry) -> Self {
        RobotDescription::new("segment", vec![geometry]).expect("one segment")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn segments(&self) -> &[SegmentGeometry] {
        &self.segments
    }

    pub fn segment(&self, index: usize) -> Option<&SegmentGeometry> {
        self.segments.get(index)
    }

    /// Clarke matrix of segment `index` (0-based). Segments with equal `n`
    /// share one matrix.
    pub fn matrix(&self, index: usize) -> &ClarkeMatrix {
        &self.matrices[index]
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total backbone length.
    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.l()).sum()
    }
}

/// State of one segment, expressed in one of the three spaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "space", content = "value", rename_all = "snake_case")]
pub enum SegmentConfig {
    Joint(JointDisplacements),
    Clarke(ClarkeCoordinates),
    Arc(ArcParameters),
}

impl SegmentConfig {
    pub fn space(&self) -> Space {
        match self {
            SegmentConfig::Joint(_) => Space::Joint,
            SegmentConfig::Clarke(_) => Space::Clarke,
            SegmentConfig::Arc(_) => Space::Arc,
        }
    }
}

impl From<JointDisplacements> for SegmentConfig {
    fn from(v: JointDisplacements) -> Self {
        SegmentConfig::Joint(v)
    }
}

impl From<ClarkeCoordinates> for SegmentConfig {
    fn from(v: ClarkeCoordinates) -> Self {
        SegmentConfig::Clarke(v)
    }
}

impl From<ArcParameters> for SegmentConfig {
    fn from(v: ArcParameters) -> Self {
        SegmentConfig::Arc(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Joint,
    Clarke,
    Arc,
}

/// One configuration of a whole robot: an entry per segment.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct ConfigurationSet(Vec<SegmentConfig>);

impl ConfigurationSet {
    pub fn new(entries: Vec<SegmentConfig>) -> Self {
        ConfigurationSet(entries)
    }

    pub fn entries(&self) -> &[SegmentConfig] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks the entry count and the joint vector lengths against `robot`.
    pub fn check(&self, robot: &RobotDescription) -> Result<()> {
        if self.0.len() != robot.len() {
            return Err(Error::SegmentCount {
                expected: robot.len(),
                found: self.0.len(),
            });
        }
        for (entry, seg) in self.0.iter().zip(robot.segments()) {
            if let SegmentConfig::Joint(rho) = entry {
                if rho.len() != seg.n() {
                    return Err(Error::LengthMismatch {
                        expected: seg.n(),
                        found: rho.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Joint vectors, if every entry is in joint space.
    pub fn joints(&self) -> Option<Vec<&JointDisplacements>> {
        self.0
            .iter()
            .map(|e| match e {
                SegmentConfig::Joint(rho) => Some(rho),
                _ => None,
            })
            .collect()
    }
}

impl FromIterator<SegmentConfig> for ConfigurationSet {
    fn from_iter<I: IntoIterator<Item = SegmentConfig>>(iter: I) -> Self {
        ConfigurationSet(iter.into_iter().collect())
    }
}
