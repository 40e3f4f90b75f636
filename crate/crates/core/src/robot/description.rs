//! JSON robot descriptions.
//!
//! ```json
//! { "name": "tdcr", "segments": [ { "n": 4, "d_m": 0.008, "l_m": 0.15 } ] }
//! ```
//!
//! Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::RobotDescription;
use crate::clarke::SegmentGeometry;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    name: String,
    segments: Vec<RawSegment>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    n: Number,
    d_m: f64,
    l_m: f64,
}

/// Parses and validates a robot description.
pub fn load_robot(text: &str) -> Result<RobotDescription> {
    let raw: RawRobot =
        serde_json::from_str(text).map_err(|e| Error::Description(e.to_string()))?;
    if raw.segments.is_empty() {
        return Err(Error::Description("`segments` must not be empty".into()));
    }
    let segments = raw
        .segments
        .iter()
        .enumerate()
        .map(|(k, seg)| {
            let fail = |msg: String| Error::Description(format!("segment {}: {msg}", k + 1));
            let n = seg
                .n
                .as_u64()
                .ok_or_else(|| fail(format!("n must be a non-negative integer, got {}", seg.n)))?;
            let n = usize::try_from(n).map_err(|_| fail(format!("n = {n} is too large")))?;
            SegmentGeometry::new(n, seg.d_m, seg.l_m).map_err(|e| fail(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    RobotDescription::new(raw.name, segments)
}

impl RobotDescription {
    /// Pretty-printed JSON accepted by [`load_robot`].
    pub fn to_json(&self) -> String {
        let raw = RawRobot {
            name: self.name.clone(),
            segments: self
                .segments
                .iter()
                .map(|s| RawSegment {
                    n: Number::from(s.n() as u64),
                    d_m: s.d(),
                    l_m: s.l(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("robot serializes")
    }
}
