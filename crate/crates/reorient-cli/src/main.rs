//! `reorient`: batch queries against the inertial reorientation library.
//!
//! Subcommands cover the full design loop: `optimize` prints the gearing
//! constants for a torque cap (or a CSV sweep over caps), `reduce` maps a
//! surveyed robot onto the template, `simulate` runs the nonlinear body
//! and exports the trajectory, `feasible` checks a task against a body,
//! `errormap` grids the anchoring error over the (effectiveness, eta)
//! plane, `regress` recomputes the survey columns, and `list` names the
//! bundled robots.
//!
//! Output is byte-deterministic: JSON uses fixed field order, CSV fixed
//! columns, and every float is printed at 10 significant digits.
//! Non-finite values appear as quoted strings in JSON. Exit codes:
//! 0 success; 1 when a queried condition is flagged (infeasible task,
//! survey mismatch); 2 on input errors.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{write_atomic, Json};
use reorient::control::{guard_angle, optimal_gain_ratio, pd_gains_from_dimensionless, simulate_pd};
use reorient::corpus::{bundled, run_regression, AppendageKind, RobotRecord};
use reorient::gearing::{beta_sweep, beta_sweep_csv, optimize_gearing, resolved_switch_tilde};
use reorient::simulate::{error_map, simulate_tail_phys, SweepPolicy};
use reorient::template::{dimensionless_gearing, gamma_of};
use reorient::types::units::deg_to_rad;
use reorient::types::{Stroke, TailParams, TaskSpec, TemplateParams, Trajectory};
use reorient::{
    exact_feasibility, reduce_limbs, reduce_tail, reduce_wheel, BangBangSchedule, EventGuard,
    FeasibilityReport, TailController,
};

#[derive(Parser)]
#[command(
    name = "reorient",
    version,
    about = "Design and analysis of inertial reorientation appendages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal gearing constants for a torque cap, or a CSV sweep over caps.
    Optimize(OptimizeArgs),
    /// Map a robot morphology onto the template and report the reduction.
    Reduce(ReduceArgs),
    /// Simulate a maneuver on the full nonlinear body and export the trajectory.
    Simulate(SimulateArgs),
    /// Check whether a body can execute a reorientation task.
    Feasible(FeasibleArgs),
    /// Grid the anchoring errors over the (effectiveness, eta) plane as CSV.
    Errormap(ErrormapArgs),
    /// Recompute the survey columns and compare with the published values.
    Regress,
    /// List the bundled robots.
    List,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Torque cap as a fraction of stall torque, in (0, 1].
    #[arg(long, default_value_t = 1.0, conflicts_with = "sweep")]
    beta: f64,
    /// Comma-separated torque caps; emits the sweep as CSV instead of JSON.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,
    /// Destination file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Bundled robot name (see `list`).
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    robot: Option<String>,
    /// JSON file holding a single robot record in the corpus schema.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Body rotation of the embedded task (degrees).
    #[arg(long, default_value_t = 90.0)]
    theta_deg: f64,
    /// Horizon of the embedded task (seconds).
    #[arg(long, default_value_t = 1.0)]
    tf: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Bundled robot name; tail and wheel records can be simulated.
    #[arg(long)]
    robot: String,
    /// Switching policy driving the maneuver.
    #[arg(long, value_enum)]
    controller: ControllerKind,
    /// Body rotation of the task (degrees).
    #[arg(long, default_value_t = 90.0)]
    theta_deg: f64,
    /// Time available for the task (seconds).
    #[arg(long, default_value_t = 1.0)]
    tf: f64,
    /// Dimensionless proportional gain for the pd controller.
    #[arg(long, default_value_t = 100.0)]
    gain: f64,
    /// Integration step (seconds); defaults to horizon / 10000.
    #[arg(long)]
    dt: Option<f64>,
    /// Trajectory CSV destination; stdout when omitted (and the summary
    /// is suppressed so stdout stays machine-readable).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ControllerKind {
    /// Open-loop switch at the critical time.
    Bang,
    /// Brake when the body angle crosses the guard fraction.
    Event,
    /// Saturated PD on the body angle, simulated on the template.
    Pd,
}

impl ControllerKind {
    fn as_str(self) -> &'static str {
        match self {
            ControllerKind::Bang => "bang",
            ControllerKind::Event => "event",
            ControllerKind::Pd => "pd",
        }
    }
}

#[derive(Args)]
struct FeasibleArgs {
    /// Bundled robot name; alternative to the raw template flags.
    #[arg(long)]
    robot: Option<String>,
    /// Template effectiveness in (0, 1).
    #[arg(long, conflicts_with = "robot")]
    effectiveness: Option<f64>,
    /// Driven inertia (kg m^2).
    #[arg(long, conflicts_with = "robot")]
    driven_inertia: Option<f64>,
    /// Peak drive power (W).
    #[arg(long, conflicts_with = "robot")]
    power: Option<f64>,
    /// No-load speed of the appendage relative to the body (rad/s).
    #[arg(long, conflicts_with = "robot")]
    no_load: Option<f64>,
    /// Torque cap as a fraction of stall torque, in (0, 1].
    #[arg(long, default_value_t = 1.0, conflicts_with = "robot")]
    torque_fraction: f64,
    /// Appendage stroke (degrees); omit for continuous rotation.
    #[arg(long, conflicts_with = "robot")]
    stroke_deg: Option<f64>,
    /// Required body rotation (degrees).
    #[arg(long)]
    theta_deg: f64,
    /// Time available for the maneuver (seconds).
    #[arg(long)]
    tf: f64,
}

#[derive(Args)]
struct ErrormapArgs {
    /// Grid size as COLSxROWS over (effectiveness, eta), e.g. 24x16.
    #[arg(long, default_value = "24x16")]
    grid: String,
    /// Sweep policy applied at every grid cell.
    #[arg(long, value_enum, default_value_t = SweepKind::Half180)]
    sweep: SweepKind,
    /// Stroke length (degrees); required with `--sweep stroke`.
    #[arg(long)]
    stroke_deg: Option<f64>,
    /// Effectiveness range as LO:HI inside (0, 1).
    #[arg(long, default_value = "0.05:0.95")]
    xi_range: String,
    /// Eta range as LO:HI, LO >= 0.
    #[arg(long, default_value = "0:1.5")]
    eta_range: String,
    /// Destination file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    /// Half rotation of the appendage centered on the back position.
    Half180,
    /// A finite stroke of `--stroke-deg`, likewise centered.
    Stroke,
}

/// Why the command did not exit 0.
#[derive(Debug)]
enum Failure {
    /// The analysis ran and flagged the queried condition; details are
    /// already on stdout.
    Flagged,
    /// Bad input: unknown name, malformed file, out-of-range flag.
    Input(String),
}

fn input(err: impl std::fmt::Display) -> Failure {
    Failure::Input(err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Flagged) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Optimize(args) => run_optimize(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Feasible(args) => run_feasible(args),
        Command::Errormap(args) => run_errormap(args),
        Command::Regress => run_regress(),
        Command::List => run_list(),
    }
}

/// Write data to stdout, exiting quietly if the reader hung up (as under
/// `reorient regress | head`) so pipelines do not see a panic.
fn print_out(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

/// Print to stdout, or write atomically when a destination was given.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print_out(text);
            Ok(())
        }
    }
}

fn task_from(theta_deg: f64, tf: f64) -> Result<TaskSpec, Failure> {
    let task = TaskSpec {
        body_rotation: deg_to_rad(theta_deg),
        horizon: tf,
    };
    task.validate().map_err(input)?;
    Ok(task)
}

fn run_optimize(args: OptimizeArgs) -> Result<(), Failure> {
    if let Some(betas) = args.sweep {
        let rows = beta_sweep(&betas).map_err(input)?;
        return emit(args.out.as_deref(), &beta_sweep_csv(&rows));
    }
    let g = optimize_gearing(args.beta).map_err(input)?;
    let doc = Json::Obj(vec![
        ("beta", Json::Num(g.beta)),
        ("omega_tilde_star", Json::Num(g.omega_tilde_star)),
        ("k_t", Json::Num(g.k_t)),
        ("t_h_star", Json::Num(g.t_h_star)),
        ("k_p", Json::Num(g.k_p)),
        ("k_s", Json::Num(g.k_s)),
        ("switch_fraction", Json::Num(g.switch_fraction)),
        ("switch_angle", Json::Num(g.switch_angle)),
    ]);
    emit(args.out.as_deref(), &doc.render())
}

fn load_record(robot: Option<&str>, file: Option<&Path>) -> Result<RobotRecord, Failure> {
    match (robot, file) {
        (Some(name), None) => bundled().find(name).cloned().map_err(input),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{} is not a robot record: {e}", path.display())))
        }
        // Clap enforces exactly one of the two.
        _ => unreachable!("clap requires exactly one of --robot/--file"),
    }
}

fn template_json(t: &TemplateParams) -> Json {
    Json::Obj(vec![
        ("effectiveness", Json::Num(t.effectiveness)),
        ("driven_inertia", Json::Num(t.driven_inertia)),
        (
            "stroke_rad",
            match t.stroke {
                Stroke::Finite(s) => Json::Num(s),
                Stroke::Unbounded => Json::Null,
            },
        ),
        ("peak_power", Json::Num(t.motor.peak_power)),
        ("no_load_speed", Json::Num(t.motor.no_load_speed)),
        ("torque_fraction", Json::Num(t.motor.torque_fraction)),
        (
            "switch_time",
            match t.switch_time {
                Some(ts) => Json::Num(ts),
                None => Json::Null,
            },
        ),
        (
            "task",
            Json::Obj(vec![
                ("body_rotation", Json::Num(t.task.body_rotation)),
                ("horizon", Json::Num(t.task.horizon)),
            ]),
        ),
    ])
}

fn run_reduce(args: ReduceArgs) -> Result<(), Failure> {
    let record = load_record(args.robot.as_deref(), args.file.as_deref())?;
    let task = task_from(args.theta_deg, args.tf)?;
    let mut fields = vec![
        ("robot", Json::Str(record.name.clone())),
        ("kind", Json::Str(record.kind.as_str().to_string())),
    ];
    match record.kind {
        AppendageKind::Tail => {
            let params = record.tail_params(&task).map_err(input)?;
            let reduction = reduce_tail(&params).map_err(input)?;
            let d = &reduction.dimensionless;
            fields.push((
                "dimensionless",
                Json::Obj(vec![
                    ("effectiveness", Json::Num(d.effectiveness)),
                    ("eta", Json::Num(d.eta)),
                    ("reduced_mass", Json::Num(d.reduced_mass)),
                    ("appendage_moi", Json::Num(d.appendage_moi)),
                    ("body_moi", Json::Num(d.body_moi)),
                ]),
            ));
            fields.push(("template", template_json(&reduction.template)));
        }
        AppendageKind::Wheel => {
            let params = record.wheel_params(&task).map_err(input)?;
            let template = reduce_wheel(&params).map_err(input)?;
            fields.push(("template", template_json(&template)));
        }
        AppendageKind::Limbs => {
            let params = record.limb_params(&task).map_err(input)?;
            let reduction = reduce_limbs(&params).map_err(input)?;
            fields.push(("in_phase", Json::Bool(reduction.in_phase)));
            fields.push(("coupled_mass", Json::Num(reduction.coupled_mass)));
            fields.push(("pivot_moi", Json::Num(reduction.pivot_moi)));
            fields.push(("template", template_json(&reduction.template)));
        }
    }
    print_out(&Json::Obj(fields).render());
    Ok(())
}

/// Tail-coordinate parameters for a record the nonlinear simulation can
/// run: tails directly, wheels as the exactly decoupled zero-length tail.
fn simulatable_params(record: &RobotRecord, task: &TaskSpec) -> Result<TailParams, Failure> {
    match record.kind {
        AppendageKind::Tail => record.tail_params(task).map_err(input),
        AppendageKind::Wheel => {
            let w = record.wheel_params(task).map_err(input)?;
            Ok(TailParams {
                body_mass: w.body_mass,
                tail_mass: w.wheel_mass,
                pivot_offset: w.pivot_offset,
                tail_length: 0.0,
                body_inertia: w.body_inertia,
                tail_inertia: w.wheel_inertia,
                stroke: Stroke::Unbounded,
                motor: w.motor,
                switch_time: w.switch_time,
                task: w.task,
            })
        }
        AppendageKind::Limbs => Err(Failure::Input(format!(
            "record {:?} has kind limbs; simulate supports tail and wheel records",
            record.name
        ))),
    }
}

fn run_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let record = bundled().find(&args.robot).map_err(input)?;
    let task = task_from(args.theta_deg, args.tf)?;

    let (trajectory, csv): (Trajectory, String) = if args.controller == ControllerKind::Pd {
        let template = match record.kind {
            AppendageKind::Tail => {
                reduce_tail(&record.tail_params(&task).map_err(input)?)
                    .map_err(input)?
                    .template
            }
            AppendageKind::Wheel => {
                reduce_wheel(&record.wheel_params(&task).map_err(input)?).map_err(input)?
            }
            AppendageKind::Limbs => {
                reduce_limbs(&record.limb_params(&task).map_err(input)?)
                    .map_err(input)?
                    .template
            }
        };
        // `!(x > 0.0)` rather than `x <= 0.0` so NaN is rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(args.gain > 0.0) {
            return Err(Failure::Input(format!(
                "--gain must be positive (got {})",
                args.gain
            )));
        }
        let dg = dimensionless_gearing(&template).map_err(input)?;
        let ratio = optimal_gain_ratio(dg.omega_tilde, dg.beta).map_err(input)?;
        let gains =
            pd_gains_from_dimensionless(&template, args.gain, ratio * args.gain).map_err(input)?;
        let trajectory = simulate_pd(&template, &gains, args.dt).map_err(input)?;
        let csv = trajectory.to_template_csv();
        (trajectory, csv)
    } else {
        let params = simulatable_params(record, &task)?;
        let template = reduce_tail(&params).map_err(input)?.template;
        let controller = match args.controller {
            ControllerKind::Bang => {
                let gamma = gamma_of(&template).map_err(input)?;
                let switch_tilde = resolved_switch_tilde(&template).map_err(input)?;
                TailController::BangBang(BangBangSchedule {
                    switch_time: switch_tilde / gamma,
                })
            }
            ControllerKind::Event => {
                let dg = dimensionless_gearing(&template).map_err(input)?;
                TailController::EventGuard(EventGuard {
                    switch_angle: guard_angle(dg.omega_tilde, dg.beta).map_err(input)?,
                })
            }
            ControllerKind::Pd => unreachable!("pd handled above"),
        };
        let trajectory = simulate_tail_phys(&params, &controller, args.dt).map_err(input)?;
        let csv = trajectory.to_anchor_csv();
        (trajectory, csv)
    };

    emit(args.out.as_deref(), &csv)?;
    if let Some(path) = &args.out {
        let last = trajectory.final_sample();
        let doc = Json::Obj(vec![
            ("robot", Json::Str(record.name.clone())),
            ("controller", Json::Str(args.controller.as_str().into())),
            ("halted", Json::Bool(trajectory.status.is_halted())),
            ("final_time", Json::Num(last.t)),
            ("final_body_angle", Json::Num(last.theta_b)),
            ("samples", Json::Num(trajectory.samples.len() as f64)),
            ("out", Json::Str(path.display().to_string())),
        ]);
        print_out(&doc.render());
    }
    Ok(())
}

fn feasibility_json(r: &FeasibilityReport) -> Json {
    let mut limits = Vec::new();
    if !r.stroke_ok {
        limits.push(Json::Str("stroke".into()));
    }
    if !r.time_ok {
        limits.push(Json::Str("time".into()));
    }
    if !r.rotation_ok {
        limits.push(Json::Str("rotation".into()));
    }
    Json::Obj(vec![
        ("stroke_ok", Json::Bool(r.stroke_ok)),
        ("stroke_margin", Json::Num(r.stroke_margin)),
        ("time_ok", Json::Bool(r.time_ok)),
        ("time_margin", Json::Num(r.time_margin)),
        ("rotation_ok", Json::Bool(r.rotation_ok)),
        ("rotation_residual", Json::Num(r.rotation_residual)),
        ("feasible", Json::Bool(r.feasible)),
        ("limits", Json::Arr(limits)),
    ])
}

fn run_feasible(args: FeasibleArgs) -> Result<(), Failure> {
    let task = task_from(args.theta_deg, args.tf)?;
    let template = if let Some(name) = &args.robot {
        let record = bundled().find(name).map_err(input)?;
        let mut template = match record.kind {
            AppendageKind::Tail => {
                reduce_tail(&record.tail_params(&task).map_err(input)?)
                    .map_err(input)?
                    .template
            }
            AppendageKind::Wheel => {
                reduce_wheel(&record.wheel_params(&task).map_err(input)?).map_err(input)?
            }
            AppendageKind::Limbs => {
                reduce_limbs(&record.limb_params(&task).map_err(input)?)
                    .map_err(input)?
                    .template
            }
        };
        template.task = task;
        template
    } else {
        let missing: Vec<&str> = [
            ("--effectiveness", args.effectiveness.is_none()),
            ("--driven-inertia", args.driven_inertia.is_none()),
            ("--power", args.power.is_none()),
            ("--no-load", args.no_load.is_none()),
        ]
        .iter()
        .filter(|(_, absent)| *absent)
        .map(|(flag, _)| *flag)
        .collect();
        if !missing.is_empty() {
            return Err(Failure::Input(format!(
                "raw template queries need {}; or name a robot with --robot",
                missing.join(", ")
            )));
        }
        TemplateParams {
            effectiveness: args.effectiveness.unwrap(),
            driven_inertia: args.driven_inertia.unwrap(),
            stroke: match args.stroke_deg {
                Some(deg) => Stroke::Finite(deg_to_rad(deg)),
                None => Stroke::Unbounded,
            },
            motor: reorient::MotorModel {
                peak_power: args.power.unwrap(),
                no_load_speed: args.no_load.unwrap(),
                torque_fraction: args.torque_fraction,
            },
            switch_time: None,
            task,
        }
    };
    let report = exact_feasibility(&template).map_err(input)?;
    print_out(&feasibility_json(&report).render());
    if report.feasible {
        Ok(())
    } else {
        Err(Failure::Flagged)
    }
}

fn parse_grid(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Input(format!("--grid must be COLSxROWS with both >= 1 (got {text:?})"));
    let (cols, rows) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let cols: usize = cols.trim().parse().map_err(|_| bad())?;
    let rows: usize = rows.trim().parse().map_err(|_| bad())?;
    if cols == 0 || rows == 0 {
        return Err(bad());
    }
    Ok((cols, rows))
}

fn parse_range(flag: &str, text: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::Input(format!("{flag} must be LO:HI with LO <= HI (got {text:?})"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn run_errormap(args: ErrormapArgs) -> Result<(), Failure> {
    let (cols, rows) = parse_grid(&args.grid)?;
    let (xi_lo, xi_hi) = parse_range("--xi-range", &args.xi_range)?;
    if !(xi_lo > 0.0 && xi_hi < 1.0) {
        return Err(Failure::Input(format!(
            "--xi-range must lie strictly inside (0, 1) (got {}:{})",
            xi_lo, xi_hi
        )));
    }
    let (eta_lo, eta_hi) = parse_range("--eta-range", &args.eta_range)?;
    if eta_lo < 0.0 {
        return Err(Failure::Input(format!(
            "--eta-range must start at or above 0 (got {}:{})",
            eta_lo, eta_hi
        )));
    }
    let policy = match args.sweep {
        SweepKind::Half180 => SweepPolicy::HalfRotation,
        SweepKind::Stroke => {
            let deg = args.stroke_deg.ok_or_else(|| {
                Failure::Input("--stroke-deg is required with --sweep stroke".into())
            })?;
            SweepPolicy::Stroke(deg_to_rad(deg))
        }
    };
    let xis = linspace(xi_lo, xi_hi, cols);
    let etas = linspace(eta_lo, eta_hi, rows);
    let map = error_map(&xis, &etas, policy).map_err(input)?;
    emit(args.out.as_deref(), &map.to_csv())
}

fn run_regress() -> Result<(), Failure> {
    let report = run_regression(bundled()).map_err(input)?;
    let mut text = report.to_table();
    let verdict = if report.all_pass() {
        text.push_str(&format!(
            "all {} survey cells reproduce at printed precision\n",
            report.rows.len()
        ));
        Ok(())
    } else {
        text.push_str(&format!(
            "{} of {} survey cells do not reproduce at printed precision\n",
            report.failures().len(),
            report.rows.len()
        ));
        Err(Failure::Flagged)
    };
    print_out(&text);
    verdict
}

fn run_list() -> Result<(), Failure> {
    let mut text = format!(
        "{:<14} {:<6} {:>10} {:>9} {:>10}\n",
        "robot", "kind", "body_g", "power_w", "stroke_deg"
    );
    for record in &bundled().robots {
        let stroke = if record.continuous_rotation {
            "cont".to_string()
        } else {
            record
                .stroke_deg
                .map(|d| d.to_string())
                .unwrap_or_else(|| "-".to_string())
        };
        text.push_str(&format!(
            "{:<14} {:<6} {:>10} {:>9} {:>10}\n",
            record.name,
            record.kind.as_str(),
            record.body_mass_g,
            record.peak_power_w,
            stroke
        ));
    }
    print_out(&text);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_range_parsing() {
        assert_eq!(parse_grid("24x16").unwrap(), (24, 16));
        assert_eq!(parse_grid("3X2").unwrap(), (3, 2));
        assert!(parse_grid("0x5").is_err());
        assert!(parse_grid("24").is_err());
        assert_eq!(parse_range("--xi-range", "0.1:0.9").unwrap(), (0.1, 0.9));
        assert!(parse_range("--xi-range", "0.9:0.1").is_err());
        assert!(parse_range("--xi-range", "0.5").is_err());
    }

    #[test]
    fn linspace_endpoints_and_degenerate_count() {
        let grid = linspace(1.0, 3.0, 5);
        assert_eq!(grid, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(linspace(0.7, 0.9, 1), vec![0.7]);
    }
}
