//! CSV trajectories: one robot configuration per row.
//!
//! The header names, for every segment, the space its state is given in:
//!
//! - `joint:<seg>:<i>` for tendon `i = 1..=n`
//! - `clarke:<seg>:re` and `clarke:<seg>:im`
//! - `arc:<seg>:kappa`, `arc:<seg>:theta`, and optionally `arc:<seg>:l`
//!
//! Segment and tendon numbers are 1-based. Columns may appear in any order,
//! but each segment must be described in exactly one space.

use std::collections::BTreeMap;
use std::io::Write;

use super::{ConfigurationSet, RobotDescription, SegmentConfig, Space};
use crate::arc::ArcParameters;
use crate::clarke::{ClarkeCoordinates, JointDisplacements};
use crate::error::{Error, Result};
use crate::format::g17;

/// Column positions for one segment.
#[derive(Debug)]
enum SegmentColumns {
    Joint(Vec<usize>),
    Clarke { re: usize, im: usize },
    Arc { kappa: usize, theta: usize, l: Option<usize> },
}

fn parse_column(name: &str) -> Option<(Space, usize, &str)> {
    let mut parts = name.trim().splitn(3, ':');
    let space = match parts.next()? {
        "joint" => Space::Joint,
        "clarke" => Space::Clarke,
        "arc" => Space::Arc,
        _ => return None,
    };
    let seg: usize = parts.next()?.parse().ok()?;
    let component = parts.next()?;
    Some((space, seg, component))
}

fn layout(header: &csv::StringRecord, robot: &RobotDescription) -> Result<Vec<SegmentColumns>> {
    let fail = |msg: String| Error::Trajectory(format!("header: {msg}"));
    // segment -> space -> component -> column
    let mut found: BTreeMap<usize, BTreeMap<Space, BTreeMap<String, usize>>> = BTreeMap::new();
    for (col, name) in header.iter().enumerate() {
        let (space, seg, component) = parse_column(name).ok_or_else(|| {
            fail(format!(
                "column {} `{name}` is not of the form joint:<seg>:<i>, clarke:<seg>:re|im or arc:<seg>:kappa|theta|l",
                col + 1
            ))
        })?;
        if seg == 0 || seg > robot.len() {
            return Err(fail(format!(
                "column `{name}` refers to segment {seg}, robot has segments 1..={}",
                robot.len()
            )));
        }
        let slot = found.entry(seg).or_default().entry(space).or_default();
        if slot.insert(component.to_string(), col).is_some() {
            return Err(fail(format!("duplicate column `{name}`")));
        }
    }

    (1..=robot.len())
        .map(|seg| {
            let spaces = found
                .remove(&seg)
                .ok_or_else(|| fail(format!("no columns for segment {seg}")))?;
            if spaces.len() != 1 {
                return Err(fail(format!("segment {seg} is given in more than one space")));
            }
            let (space, mut cols) = spaces.into_iter().next().expect("one space");
            let mut take = |component: &str| {
                cols.remove(component)
                    .ok_or_else(|| fail(format!("segment {seg} is missing column `{component}`")))
            };
            let columns = match space {
                Space::Joint => {
                    let n = robot.segments()[seg - 1].n();
                    let idx = (1..=n)
                        .map(|i| take(&i.to_string()))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|_| {
                            fail(format!("segment {seg} needs joint columns 1..={n} (n = {n})"))
                        })?;
                    SegmentColumns::Joint(idx)
                }
                Space::Clarke => SegmentColumns::Clarke {
                    re: take("re")?,
                    im: take("im")?,
                },
                Space::Arc => SegmentColumns::Arc {
                    kappa: take("kappa")?,
                    theta: take("theta")?,
                    l: cols.remove("l"),
                },
            };
            if let Some(extra) = cols.keys().next() {
                return Err(fail(format!("segment {seg} has unexpected component `{extra}`")));
            }
            Ok(columns)
        })
        .collect()
}

/// Parses a trajectory for `robot`. Every row becomes one configuration.
pub fn load_trajectory(text: &str, robot: &RobotDescription) -> Result<Vec<ConfigurationSet>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Trajectory(format!("header: {e}")))?
        .clone();
    let width = header.len();
    let columns = layout(&header, robot)?;

    reader
        .records()
        .enumerate()
        .map(|(k, record)| {
            let row = k + 1;
            let fail = |msg: String| Error::Trajectory(format!("row {row}: {msg}"));
            let record = record.map_err(|e| fail(e.to_string()))?;
            if record.len() != width {
                return Err(fail(format!("expected {width} fields, found {}", record.len())));
            }
            let value = |col: usize| -> Result<f64> {
                let field = &record[col];
                let v: f64 = field
                    .parse()
                    .map_err(|_| fail(format!("column `{}`: `{field}` is not a number", &header[col])))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(fail(format!("column `{}`: value must be finite", &header[col])))
                }
            };
            columns
                .iter()
                .zip(robot.segments())
                .enumerate()
                .map(|(s, (cols, geom))| {
                    Ok(match cols {
                        SegmentColumns::Joint(idx) => SegmentConfig::Joint(JointDisplacements::new(
                            idx.iter().map(|&c| value(c)).collect::<Result<_>>()?,
                        )),
                        SegmentColumns::Clarke { re, im } => {
                            SegmentConfig::Clarke(ClarkeCoordinates::new(value(*re)?, value(*im)?))
                        }
                        SegmentColumns::Arc { kappa, theta, l } => {
                            let l = match l {
                                Some(c) => value(*c)?,
                                None => geom.l(),
                            };
                            if (l - geom.l()).abs() > 1e-12 * geom.l() {
                                return Err(fail(format!(
                                    "segment {}: arc length {l} differs from segment length {}",
                                    s + 1,
                                    geom.l()
                                )));
                            }
                            let arc = ArcParameters::new(value(*kappa)?, value(*theta)?, l)
                                .map_err(|e| fail(format!("segment {}: {e}", s + 1)))?;
                            SegmentConfig::Arc(arc)
                        }
                    })
                })
                .collect::<Result<ConfigurationSet>>()
        })
        .collect()
}

fn header_for(entry: &SegmentConfig, seg: usize) -> Vec<String> {
    match entry {
        SegmentConfig::Joint(rho) => (1..=rho.len()).map(|i| format!("joint:{seg}:{i}")).collect(),
        SegmentConfig::Clarke(_) => vec![format!("clarke:{seg}:re"), format!("clarke:{seg}:im")],
        SegmentConfig::Arc(_) => vec![
            format!("arc:{seg}:kappa"),
            format!("arc:{seg}:theta"),
            format!("arc:{seg}:l"),
        ],
    }
}

fn fields_for(entry: &SegmentConfig) -> Vec<f64> {
    match entry {
        SegmentConfig::Joint(rho) => rho.as_slice().to_vec(),
        SegmentConfig::Clarke(c) => vec![c.re, c.im],
        SegmentConfig::Arc(a) => vec![a.kappa(), a.theta(), a.l()],
    }
}

/// Writes rows in the format read by [`load_trajectory`]. The header follows
/// the first row; every row must use the same spaces.
pub fn write_trajectory<W: Write>(
    robot: &RobotDescription,
    rows: &[ConfigurationSet],
    out: W,
) -> Result<()> {
    let io = |e: csv::Error| Error::Trajectory(e.to_string());
    let mut writer = csv::WriterBuilder::new().from_writer(out);
    let Some(first) = rows.first() else {
        return Ok(());
    };
    first.check(robot)?;
    let header: Vec<String> = first
        .entries()
        .iter()
        .enumerate()
        .flat_map(|(k, e)| header_for(e, k + 1))
        .collect();
    writer.write_record(&header).map_err(io)?;
    for (r, row) in rows.iter().enumerate() {
        row.check(robot)?;
        let same_layout = row
            .entries()
            .iter()
            .zip(first.entries())
            .all(|(a, b)| a.space() == b.space());
        if !same_layout {
            return Err(Error::Trajectory(format!(
                "row {}: spaces differ from the first row",
                r + 1
            )));
        }
        let fields: Vec<String> = row.entries().iter().flat_map(fields_for).map(g17).collect();
        writer.write_record(&fields).map_err(io)?;
    }
    writer
        .flush()
        .map_err(|e| Error::Trajectory(e.to_string()))
}
