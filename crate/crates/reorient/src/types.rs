//! Shared parameter and trajectory types.
//!
//! All quantities are SI throughout the library: kilograms, meters,
//! seconds, radians, watts. The corpus layer converts from tagged survey
//! units (grams, centimeters, degrees, RPM) at ingestion.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::format::sig;

/// Reorientation task: rotate the body by `body_rotation` within
/// `horizon`, starting and ending at rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    /// Required body rotation (rad, > 0).
    pub body_rotation: f64,
    /// Time available for the maneuver (s, > 0).
    pub horizon: f64,
}

impl TaskSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("task body_rotation", self.body_rotation)?;
        positive("task horizon", self.horizon)
    }
}

/// Linear speed-torque drive model: a DC motor behind a gearbox, rated
/// by peak output power and appendage-side no-load speed, with a current
/// (torque) cap expressed as a fraction of stall torque.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorModel {
    /// Peak mechanical output power (W, > 0); equals stall torque times
    /// no-load speed over four.
    pub peak_power: f64,
    /// No-load speed of the appendage relative to the body, after the
    /// gearbox (rad/s, > 0).
    pub no_load_speed: f64,
    /// Torque cap as a fraction of stall torque, in (0, 1]; 1 means the
    /// drive can deliver full stall torque.
    pub torque_fraction: f64,
}

impl MotorModel {
    /// Stall torque (N m) implied by the power rating.
    pub fn stall_torque(&self) -> f64 {
        4.0 * self.peak_power / self.no_load_speed
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        positive("peak_power", self.peak_power)?;
        positive("no_load_speed", self.no_load_speed)?;
        if !(self.torque_fraction > 0.0 && self.torque_fraction <= 1.0) {
            return Err(ParamError::OutOfRange {
                name: "torque_fraction",
                value: self.torque_fraction,
                range: "(0, 1]",
            });
        }
        Ok(())
    }
}

/// Appendage travel available to the maneuver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Stroke {
    /// Hard-stop limited range (rad, > 0).
    Finite(f64),
    /// Continuous rotation (wheels, recirculating limbs): no travel limit.
    Unbounded,
}

impl Stroke {
    /// The travel limit, or `None` when unbounded.
    pub fn limit(&self) -> Option<f64> {
        match self {
            Stroke::Finite(s) => Some(*s),
            Stroke::Unbounded => None,
        }
    }

    /// Remaining travel beyond `sweep`; infinite when unbounded.
    pub fn margin(&self, sweep: f64) -> f64 {
        match self {
            Stroke::Finite(s) => s - sweep,
            Stroke::Unbounded => f64::INFINITY,
        }
    }

    /// Whether the stroke accommodates a sweep of `sweep` radians.
    pub fn allows(&self, sweep: f64) -> bool {
        self.margin(sweep) >= 0.0
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        match self {
            Stroke::Finite(s) => positive("stroke", *s),
            Stroke::Unbounded => Ok(()),
        }
    }
}

/// Parameters of the single-body reorientation template: one rigid body
/// of driven inertia rotated through a constant-effectiveness momentum
/// connection by the switched drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemplateParams {
    /// Effectiveness: body rotation per unit of appendage counter-rotation
    /// under the zero-momentum connection, in (0, 1).
    pub effectiveness: f64,
    /// Driven inertia (kg m^2): joint torque per unit body angular
    /// acceleration.
    pub driven_inertia: f64,
    /// Appendage stroke available for the maneuver.
    pub stroke: Stroke,
    pub motor: MotorModel,
    /// Open-loop switch from drive to brake (s); `None` selects the
    /// critical switch for the task wherever one is needed.
    pub switch_time: Option<f64>,
    pub task: TaskSpec,
}

impl TemplateParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        in_open_unit("effectiveness", self.effectiveness)?;
        positive("driven_inertia", self.driven_inertia)?;
        self.stroke.validate()?;
        self.motor.validate()?;
        if let Some(ts) = self.switch_time {
            nonnegative("switch_time", ts)?;
        }
        self.task.validate()
    }
}

/// Physical parameters of a body with a single-link revolute tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailParams {
    /// Body mass (kg).
    pub body_mass: f64,
    /// Tail mass (kg).
    pub tail_mass: f64,
    /// Body COM to tail pivot distance (m, >= 0).
    pub pivot_offset: f64,
    /// Pivot to tail COM distance (m, >= 0).
    pub tail_length: f64,
    /// Body inertia about its COM (kg m^2).
    pub body_inertia: f64,
    /// Tail inertia about its COM (kg m^2, >= 0; 0 for a point mass).
    pub tail_inertia: f64,
    pub stroke: Stroke,
    pub motor: MotorModel,
    pub switch_time: Option<f64>,
    pub task: TaskSpec,
}

impl TailParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("body_mass", self.body_mass)?;
        positive("tail_mass", self.tail_mass)?;
        nonnegative("pivot_offset", self.pivot_offset)?;
        nonnegative("tail_length", self.tail_length)?;
        positive("body_inertia", self.body_inertia)?;
        nonnegative("tail_inertia", self.tail_inertia)?;
        self.stroke.validate()?;
        self.motor.validate()?;
        if let Some(ts) = self.switch_time {
            nonnegative("switch_time", ts)?;
        }
        self.task.validate()
    }
}

/// Body with a reaction wheel (or conically swung rotor) on an axle
/// offset from the body COM. Wheels rotate continuously, so no stroke.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WheelParams {
    pub body_mass: f64,
    /// Wheel mass (kg).
    pub wheel_mass: f64,
    /// Body COM to axle distance (m, >= 0).
    pub pivot_offset: f64,
    /// Wheel spin inertia about the axle (kg m^2).
    pub wheel_inertia: f64,
    pub body_inertia: f64,
    pub motor: MotorModel,
    pub switch_time: Option<f64>,
    pub task: TaskSpec,
}

impl WheelParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("body_mass", self.body_mass)?;
        positive("wheel_mass", self.wheel_mass)?;
        nonnegative("pivot_offset", self.pivot_offset)?;
        positive("wheel_inertia", self.wheel_inertia)?;
        positive("body_inertia", self.body_inertia)?;
        self.motor.validate()?;
        if let Some(ts) = self.switch_time {
            nonnegative("switch_time", ts)?;
        }
        self.task.validate()
    }
}

/// One limb of a synchronized flail set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limb {
    /// Signed hip offset along the body centerline from the COM
    /// (m; negative = behind the COM).
    pub offset: f64,
    /// Spin phase: +1 rotates with the group, -1 against it.
    pub phase: i8,
}

/// Body with N identical limbs recirculated in synchrony about parallel
/// hip axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimbParams {
    pub body_mass: f64,
    /// Mass of one limb (kg).
    pub limb_mass: f64,
    /// Hip to limb COM distance (m, > 0).
    pub limb_length: f64,
    /// Inertia of one limb about its own COM (kg m^2, >= 0).
    pub limb_inertia: f64,
    pub body_inertia: f64,
    pub limbs: Vec<Limb>,
    pub stroke: Stroke,
    pub motor: MotorModel,
    pub switch_time: Option<f64>,
    pub task: TaskSpec,
}

impl LimbParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("body_mass", self.body_mass)?;
        positive("limb_mass", self.limb_mass)?;
        positive("limb_length", self.limb_length)?;
        nonnegative("limb_inertia", self.limb_inertia)?;
        positive("body_inertia", self.body_inertia)?;
        if self.limbs.is_empty() {
            return Err(ParamError::OutOfRange {
                name: "limbs",
                value: 0.0,
                range: "at least one limb",
            });
        }
        for limb in &self.limbs {
            if !limb.offset.is_finite() {
                return Err(ParamError::NotNonnegative {
                    name: "limb offset",
                    value: limb.offset,
                });
            }
            if limb.phase != 1 && limb.phase != -1 {
                return Err(ParamError::OutOfRange {
                    name: "limb phase",
                    value: limb.phase as f64,
                    range: "{-1, +1}",
                });
            }
        }
        self.stroke.validate()?;
        self.motor.validate()?;
        if let Some(ts) = self.switch_time {
            nonnegative("switch_time", ts)?;
        }
        self.task.validate()
    }

    /// Total system mass (kg): body plus all limbs.
    pub fn total_mass(&self) -> f64 {
        self.body_mass + self.limbs.len() as f64 * self.limb_mass
    }
}

/// Dimensionless drive parameters after the spatiotemporal rescaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessGearing {
    /// Normalized no-load speed.
    pub omega_tilde: f64,
    /// Torque cap fraction, carried over unchanged by the rescaling.
    pub beta: f64,
}

/// Drive regime tag attached to every trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrivePhase {
    /// Accelerating against the current cap.
    CurrentLimited,
    /// Accelerating on the back-EMF line.
    VoltageLimited,
    /// Braking at the current cap.
    Braking,
    /// At rest after the maneuver.
    Halted,
    /// PD command inside the saturation bounds.
    PdLinear,
    /// PD command clipped at the accelerating bound.
    PdUpperSat,
    /// PD command clipped at the braking bound.
    PdLowerSat,
}

impl DrivePhase {
    pub fn as_str(&self) -> &'static str {
        match self {
            DrivePhase::CurrentLimited => "current_limited",
            DrivePhase::VoltageLimited => "voltage_limited",
            DrivePhase::Braking => "braking",
            DrivePhase::Halted => "halted",
            DrivePhase::PdLinear => "pd_linear",
            DrivePhase::PdUpperSat => "pd_upper_sat",
            DrivePhase::PdLowerSat => "pd_lower_sat",
        }
    }
}

/// Termination state of a simulated trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HaltStatus {
    /// Body came to rest at `time` (event-located).
    Halted { time: f64 },
    /// No halt before the integration horizon.
    TimedOut { time: f64 },
}

impl HaltStatus {
    pub fn is_halted(&self) -> bool {
        matches!(self, HaltStatus::Halted { .. })
    }

    pub fn time(&self) -> f64 {
        match self {
            HaltStatus::Halted { time } | HaltStatus::TimedOut { time } => *time,
        }
    }
}

/// One integration sample. Dimensioned simulations fill SI values;
/// dimensionless simulations fill rescaled ones. `theta_r`/`rate_r`
/// always refer to the appendage coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub theta_b: f64,
    pub rate_b: f64,
    pub theta_r: f64,
    pub rate_r: f64,
    pub torque: f64,
    pub phase: DrivePhase,
}

/// A simulated trajectory: strictly time-increasing samples plus the
/// termination state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub status: HaltStatus,
}

impl Trajectory {
    /// Final integration sample.
    pub fn final_sample(&self) -> &Sample {
        self.samples.last().expect("trajectory has samples")
    }

    /// CSV with the body-only template columns.
    pub fn to_template_csv(&self) -> String {
        let mut out = String::from("t,theta_b,theta_b_dot,tau,phase\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                sig(s.t, 10),
                sig(s.theta_b, 10),
                sig(s.rate_b, 10),
                sig(s.torque, 10),
                s.phase.as_str()
            ));
        }
        out
    }

    /// CSV with both body and appendage coordinates.
    pub fn to_anchor_csv(&self) -> String {
        let mut out = String::from("t,theta_b,theta_b_dot,theta_r,theta_r_dot,tau,phase\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                sig(s.t, 10),
                sig(s.theta_b, 10),
                sig(s.rate_b, 10),
                sig(s.theta_r, 10),
                sig(s.rate_r, 10),
                sig(s.torque, 10),
                s.phase.as_str()
            ));
        }
        out
    }
}

/// Unit conversions used at the corpus boundary; the library itself is
/// SI-only.
pub mod units {
    use std::f64::consts::PI;

    pub fn grams_to_kg(g: f64) -> f64 {
        g * 1e-3
    }

    pub fn cm_to_m(cm: f64) -> f64 {
        cm * 1e-2
    }

    pub fn deg_to_rad(deg: f64) -> f64 {
        deg * PI / 180.0
    }

    pub fn rad_to_deg(rad: f64) -> f64 {
        rad * 180.0 / PI
    }

    pub fn rpm_to_rad_s(rpm: f64) -> f64 {
        rpm * 2.0 * PI / 60.0
    }

    pub fn rad_s_to_hz(rad_s: f64) -> f64 {
        rad_s / (2.0 * PI)
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::NotPositive { name, value })
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ParamError::NotNonnegative { name, value })
    }
}

fn in_open_unit(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(ParamError::OutOfRange {
            name,
            value,
            range: "(0, 1)",
        })
    }
}
