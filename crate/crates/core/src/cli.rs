//! The `clarke` command-line tool.
//!
//! Numbers are written with 17 significant digits so every value survives a
//! text round trip. Exit status: 0 on success, 1 on a validation error, 2 on a
//! usage error. Every validation error prints one line
//! `error: <module>: <message>` to standard error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arc::{f_dep, f_dep_inv, ArcParameters, ModelValidity};
use crate::clarke::{ClarkeCoordinates, ClarkeMatrix, JointDisplacements, DEFAULT_TOLERANCE};
use crate::error::Error;
use crate::format::{g17, join_g17};
use crate::robot::{
    forward_kinematics_batch, inverse_kinematics_arcwise, load_robot, load_trajectory,
    sample_workspace, write_trajectory, ConfigurationSet, FkOptions, ForwardKinematics,
    RobotDescription,
};
use crate::{batch, pose::SegmentPose};

#[derive(Debug, Parser)]
#[command(
    name = "clarke",
    version,
    about = "Generalized Clarke transform kinematics for continuum robot segments"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Feasibility tolerance in meters.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, global = true, allow_negative_numbers = true)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Robot description (JSON).
    #[arg(long)]
    pub robot: PathBuf,
    /// Segment number, 1-based.
    #[arg(long, default_value_t = 1)]
    pub segment: usize,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    /// Robot description (JSON).
    #[arg(long)]
    pub robot: PathBuf,
    /// Trajectory CSV.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the 2×n Clarke matrix.
    Matrix {
        #[arg(long)]
        n: usize,
    },
    /// Joint displacements to Clarke coordinates.
    Transform {
        #[command(flatten)]
        seg: SegmentArgs,
        /// Comma-separated joint displacements in meters.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        rho: Vec<f64>,
    },
    /// Clarke coordinates to joint displacements.
    Inverse {
        #[command(flatten)]
        seg: SegmentArgs,
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, allow_negative_numbers = true)]
        im: f64,
    },
    /// Project joint displacements onto the feasible manifold.
    Project {
        #[command(flatten)]
        seg: SegmentArgs,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        rho: Vec<f64>,
    },
    /// Arc parameters to Clarke coordinates.
    Fdep {
        #[command(flatten)]
        seg: SegmentArgs,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Clarke coordinates to arc parameters.
    FdepInv {
        #[command(flatten)]
        seg: SegmentArgs,
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, allow_negative_numbers = true)]
        im: f64,
    },
    /// Forward kinematics for every row of a trajectory.
    Fk {
        #[command(flatten)]
        traj: TrajectoryArgs,
        /// Project infeasible joint vectors instead of rejecting them.
        #[arg(long)]
        project: bool,
    },
    /// Joint-space trajectory reproducing the arcs of a trajectory.
    Ik {
        #[command(flatten)]
        traj: TrajectoryArgs,
    },
    /// Tip positions over a curvature × bending-plane grid.
    Sample {
        #[command(flatten)]
        seg: SegmentArgs,
        #[arg(long, default_value_t = 10.0)]
        kappa_max: f64,
        #[arg(long, default_value_t = 11)]
        kappa_steps: usize,
        #[arg(long, default_value_t = 16)]
        theta_steps: usize,
    },
    /// Feasibility residuals for every joint vector of a trajectory.
    Check {
        #[command(flatten)]
        traj: TrajectoryArgs,
    },
}

/// A failure reported as `error: <module>: <message>`.
#[derive(Debug)]
pub struct Diagnostic {
    pub module: &'static str,
    pub message: String,
}

impl From<Error> for Diagnostic {
    fn from(e: Error) -> Self {
        Diagnostic {
            module: e.module(),
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // single line, whatever the underlying message looks like
        let message = self.message.replace('\n', " ");
        write!(f, "error: {}: {message}", self.module)
    }
}

fn cli_error(message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        module: "cli",
        message: message.into(),
    }
}

fn with_row(row: usize, e: Error) -> Diagnostic {
    Diagnostic {
        module: e.module(),
        message: format!("row {row}: {e}"),
    }
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut text = String::new();
    let (status, diagnostics) = execute(&cli, &mut text);
    for d in &diagnostics {
        let _ = writeln!(stderr, "{d}");
    }
    if let Err(d) = emit(&cli, &text, stdout) {
        let _ = writeln!(stderr, "{d}");
        return 1;
    }
    status
}

fn emit(cli: &Cli, text: &str, stdout: &mut dyn Write) -> Result<(), Diagnostic> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| cli_error(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| cli_error(format!("cannot write output: {e}"))),
    }
}

/// Runs the command, appending output to `out`. Returns the exit status and
/// the diagnostics to print.
pub fn execute(cli: &Cli, out: &mut String) -> (i32, Vec<Diagnostic>) {
    if !(cli.tol > 0.0) {
        return (1, vec![Error::Tolerance(cli.tol).into()]);
    }
    match dispatch(cli, out) {
        Ok(diagnostics) if diagnostics.is_empty() => (0, diagnostics),
        Ok(diagnostics) => (1, diagnostics),
        Err(d) => {
            out.clear();
            (1, vec![d])
        }
    }
}

fn read(path: &Path) -> Result<String, Diagnostic> {
    fs::read_to_string(path).map_err(|e| cli_error(format!("cannot read {}: {e}", path.display())))
}

fn robot_from(path: &Path) -> Result<RobotDescription, Diagnostic> {
    Ok(load_robot(&read(path)?)?)
}

fn segment_of(seg: &SegmentArgs) -> Result<(RobotDescription, usize), Diagnostic> {
    let robot = robot_from(&seg.robot)?;
    if seg.segment == 0 || seg.segment > robot.len() {
        return Err(cli_error(format!(
            "segment {} does not exist, robot has segments 1..={}",
            seg.segment,
            robot.len()
        )));
    }
    Ok((robot, seg.segment - 1))
}

fn trajectory_of(
    traj: &TrajectoryArgs,
) -> Result<(RobotDescription, Vec<ConfigurationSet>), Diagnostic> {
    let robot = robot_from(&traj.robot)?;
    let rows = load_trajectory(&read(&traj.input)?, &robot)?;
    Ok((robot, rows))
}

fn csv_line(out: &mut String, values: &[f64]) {
    out.push_str(&join_g17(values, ","));
    out.push('\n');
}

fn json_out(out: &mut String, value: &Value) {
    out.push_str(&serde_json::to_string_pretty(value).expect("json value serializes"));
    out.push('\n');
}

fn joints_header(n: usize) -> String {
    (1..=n).map(|i| format!("rho_{i}")).collect::<Vec<_>>().join(",")
}

fn validity_fields(v: &ModelValidity) -> (bool, Option<f64>) {
    match v {
        ModelValidity::Valid => (true, None),
        ModelValidity::TendonCrossesAxis { kappa_d } => (false, Some(*kappa_d)),
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<Vec<Diagnostic>, Diagnostic> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Matrix { n } => {
            let m = ClarkeMatrix::new(*n)?;
            if json {
                json_out(out, &json!({ "n": n, "rows": [m.re_row(), m.im_row()] }));
            } else {
                csv_line(out, m.re_row());
                csv_line(out, m.im_row());
            }
        }
        Command::Transform { seg, rho } => {
            let (robot, k) = segment_of(seg)?;
            let c = robot.matrix(k).transform(&JointDisplacements::new(rho.clone()))?;
            clarke_out(out, json, c);
        }
        Command::Inverse { seg, re, im } => {
            let (robot, k) = segment_of(seg)?;
            let c = crate::clarke::check_clarke(ClarkeCoordinates::new(*re, *im))?;
            joints_out(out, json, &robot.matrix(k).inverse(c));
        }
        Command::Project { seg, rho } => {
            let (robot, k) = segment_of(seg)?;
            let p = robot.matrix(k).project(&JointDisplacements::new(rho.clone()))?;
            joints_out(out, json, &p);
        }
        Command::Fdep { seg, kappa, theta } => {
            let (robot, k) = segment_of(seg)?;
            let geom = robot.segments()[k];
            let arc = ArcParameters::new(*kappa, *theta, geom.l())?;
            clarke_out(out, json, f_dep(&arc, &geom)?);
        }
        Command::FdepInv { seg, re, im } => {
            let (robot, k) = segment_of(seg)?;
            let checked = f_dep_inv(ClarkeCoordinates::new(*re, *im), &robot.segments()[k])?;
            let (valid, kappa_d) = validity_fields(&checked.validity);
            let a = checked.arc;
            if json {
                json_out(
                    out,
                    &json!({ "kappa": a.kappa(), "theta": a.theta(), "l": a.l(),
                             "valid": valid, "kappa_d": kappa_d }),
                );
            } else {
                out.push_str("kappa,theta,l,valid\n");
                let _ = writeln!(out, "{},{},{},{valid}", g17(a.kappa()), g17(a.theta()), g17(a.l()));
            }
        }
        Command::Fk { traj, project } => {
            let (robot, rows) = trajectory_of(traj)?;
            let opts = FkOptions {
                tol: cli.tol,
                project_infeasible: *project,
            };
            let results = forward_kinematics_batch(&robot, &rows, &opts);
            let mut solved = Vec::with_capacity(results.len());
            for (r, res) in results.into_iter().enumerate() {
                solved.push(res.map_err(|e| with_row(r + 1, e))?);
            }
            fk_out(out, json, &solved);
        }
        Command::Ik { traj } => {
            let (robot, rows) = trajectory_of(traj)?;
            // express every row as arcs first, then map each arc to joints
            let opts = FkOptions {
                tol: cli.tol,
                project_infeasible: false,
            };
            let solved = batch::map(&rows, |row| {
                let fk = crate::robot::forward_kinematics(&robot, row, &opts)?;
                let arcs: Vec<ArcParameters> = fk.segments.iter().map(|s| s.arc).collect();
                inverse_kinematics_arcwise(&robot, &arcs)
            });
            let mut configs = Vec::with_capacity(solved.len());
            for (r, res) in solved.into_iter().enumerate() {
                configs.push(res.map_err(|e| with_row(r + 1, e))?);
            }
            if json {
                let records: Vec<Value> = configs
                    .iter()
                    .enumerate()
                    .map(|(r, ik)| json!({ "row": r + 1, "joints": ik.config, "validity": ik.validity }))
                    .collect();
                json_out(out, &Value::Array(records));
            } else {
                let joint_rows: Vec<ConfigurationSet> =
                    configs.into_iter().map(|ik| ik.config).collect();
                let mut buf = Vec::new();
                write_trajectory(&robot, &joint_rows, &mut buf)?;
                out.push_str(&String::from_utf8(buf).expect("csv output is utf-8"));
            }
        }
        Command::Sample {
            seg,
            kappa_max,
            kappa_steps,
            theta_steps,
        } => {
            let (robot, k) = segment_of(seg)?;
            if !(kappa_max.is_finite() && *kappa_max >= 0.0) {
                return Err(cli_error(format!("--kappa-max must be finite and >= 0, got {kappa_max}")));
            }
            if *kappa_steps < 1 || *theta_steps < 1 {
                return Err(cli_error("--kappa-steps and --theta-steps must be at least 1"));
            }
            let kappas: Vec<f64> = (0..*kappa_steps)
                .map(|i| match kappa_steps {
                    1 => 0.0,
                    _ => kappa_max * i as f64 / (kappa_steps - 1) as f64,
                })
                .collect();
            let thetas: Vec<f64> = (0..*theta_steps)
                .map(|j| std::f64::consts::TAU * j as f64 / *theta_steps as f64)
                .collect();
            let samples = sample_workspace(&robot, k, &kappas, &thetas)?;
            if json {
                let records: Vec<Value> = samples
                    .iter()
                    .map(|s| json!({ "kappa": s.kappa, "theta": s.theta,
                                     "p": [s.tip.p.x, s.tip.p.y, s.tip.p.z] }))
                    .collect();
                json_out(out, &Value::Array(records));
            } else {
                out.push_str("kappa,theta,px,py,pz\n");
                for s in &samples {
                    csv_line(out, &[s.kappa, s.theta, s.tip.p.x, s.tip.p.y, s.tip.p.z]);
                }
            }
        }
        Command::Check { traj } => {
            let (robot, rows) = trajectory_of(traj)?;
            return check(&robot, &rows, cli.tol, json, out);
        }
    }
    Ok(Vec::new())
}

fn clarke_out(out: &mut String, json: bool, c: ClarkeCoordinates) {
    if json {
        json_out(out, &json!({ "rho_re": c.re, "rho_im": c.im }));
    } else {
        out.push_str("rho_re,rho_im\n");
        csv_line(out, &[c.re, c.im]);
    }
}

fn joints_out(out: &mut String, json: bool, rho: &JointDisplacements) {
    if json {
        json_out(out, &json!({ "rho": rho }));
    } else {
        out.push_str(&joints_header(rho.len()));
        out.push('\n');
        csv_line(out, rho.as_slice());
    }
}

fn pose_fields(pose: &SegmentPose) -> [f64; 7] {
    let [w, x, y, z] = pose.wxyz();
    [pose.p.x, pose.p.y, pose.p.z, w, x, y, z]
}

fn fk_out(out: &mut String, json: bool, solved: &[ForwardKinematics]) {
    if json {
        let records: Vec<Value> = solved
            .iter()
            .enumerate()
            .map(|(r, fk)| {
                let segments: Vec<Value> = fk
                    .segments
                    .iter()
                    .enumerate()
                    .map(|(k, s)| {
                        let (valid, kappa_d) = validity_fields(&s.validity);
                        json!({
                            "segment": k + 1,
                            "arc": { "kappa": s.arc.kappa(), "theta": s.arc.theta(), "l": s.arc.l() },
                            "clarke": s.clarke,
                            "joints": s.joints,
                            "valid": valid,
                            "kappa_d": kappa_d,
                            "frame": s.frame,
                        })
                    })
                    .collect();
                json!({ "row": r + 1, "segments": segments, "tip": fk.tip })
            })
            .collect();
        json_out(out, &Value::Array(records));
        return;
    }
    out.push_str("row,segment,kappa,theta,l,rho_re,rho_im,px,py,pz,qw,qx,qy,qz,valid,joints\n");
    for (r, fk) in solved.iter().enumerate() {
        for (k, s) in fk.segments.iter().enumerate() {
            let mut values = vec![s.arc.kappa(), s.arc.theta(), s.arc.l(), s.clarke.re, s.clarke.im];
            values.extend(pose_fields(&s.frame));
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r + 1,
                k + 1,
                join_g17(&values, ","),
                s.validity.is_valid(),
                join_g17(s.joints.as_slice(), ";"),
            );
        }
    }
}

fn check(
    robot: &RobotDescription,
    rows: &[ConfigurationSet],
    tol: f64,
    json: bool,
    out: &mut String,
) -> Result<Vec<Diagnostic>, Diagnostic> {
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        row.check(robot).map_err(|e| with_row(r + 1, e))?;
        for (k, entry) in row.entries().iter().enumerate() {
            let m = robot.matrix(k);
            let geom = &robot.segments()[k];
            let rho = match entry {
                crate::robot::SegmentConfig::Joint(rho) => rho.clone(),
                crate::robot::SegmentConfig::Clarke(c) => m.inverse(*c),
                crate::robot::SegmentConfig::Arc(a) => {
                    m.inverse(f_dep(a, geom).map_err(|e| with_row(r + 1, e))?)
                }
            };
            let report = m.feasibility(&rho, tol).map_err(|e| with_row(r + 1, e))?;
            if !report.feasible {
                diagnostics.push(with_row(
                    r + 1,
                    Error::Infeasible {
                        segment: k + 1,
                        sum_residual: report.sum_residual,
                        manifold_residual: report.manifold_residual,
                        tol,
                    },
                ));
            }
            records.push((r + 1, k + 1, report));
        }
    }
    if json {
        let values: Vec<Value> = records
            .iter()
            .map(|(r, k, f)| json!({ "row": r, "segment": k, "sum_residual": f.sum_residual,
                                     "manifold_residual": f.manifold_residual, "feasible": f.feasible }))
            .collect();
        json_out(out, &Value::Array(values));
    } else {
        out.push_str("row,segment,sum_residual,manifold_residual,feasible\n");
        for (r, k, f) in &records {
            let _ = writeln!(
                out,
                "{r},{k},{},{},{}",
                g17(f.sum_residual),
                g17(f.manifold_residual),
                f.feasible
            );
        }
    }
    Ok(diagnostics)
}
