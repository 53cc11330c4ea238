//! Design and analysis of inertial reorientation appendages: tails,
//! flailing limb sets, and reaction wheels that let an airborne robot
//! point its body before landing.
//!
//! The library is organized around a single dimensionless template, a
//! driven body plus appendage pair with a speed-limited drive, to which
//! the supported morphologies reduce:
//!
//! - [`template`]: closed-form switched maneuver of the template and
//!   the rescaling to and from dimensioned designs.
//! - [`gearing`]: optimal gearing of the drive, the pinned constants it
//!   produces, and their dependence on the available torque fraction.
//! - [`control`]: bang-bang schedules, event-based switching, and the
//!   saturated PD controller that recovers them at high gain.
//! - [`reductions`]: morphological reductions from tails, limb sets,
//!   and wheels to the template, with the kinematic error they incur.
//! - [`simulate`]: nonlinear anchor simulations, in template-normalized
//!   and dimensioned coordinates, quantifying reduction accuracy.
//! - [`design`]: feasibility of a task on a body, the minimum-power
//!   rule, capability boundaries, and requirement-driven tail sizing.
//! - [`corpus`]: a bundled survey of published platforms and a
//!   regression harness against their reported values.
//!
//! Angles are radians, times seconds, masses kilograms, inertias
//! kg m^2, power watts, unless a name says otherwise.

// Validators use `!(x > 0.0)`-style guards on purpose: unlike `x <= 0.0`,
// they also reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod corpus;
pub mod design;
pub mod error;
pub mod format;
pub mod gearing;
mod numerics;
pub mod reductions;
pub mod simulate;
pub mod template;
pub mod types;

pub use control::{BangBangSchedule, EventGuard, PdGains, TailController};
pub use design::{
    exact_feasibility, power_rule_feasibility, select_tail_body, task_projection, BodySpec,
    FeasibilityReport, PowerRuleQuery, PowerRuleReport, ProjectionPoint, TailDesign,
    TailSelectionQuery,
};
pub use error::{CorpusError, DesignError, GearingError, ParamError, SimError};
pub use gearing::{constants_at, optimal_full_torque, optimize_gearing, GearingConstants};
pub use reductions::{
    reduce_limbs, reduce_tail, reduce_wheel, tail_effectiveness, EffectivenessStrategy,
    LimbReduction, TailReduction,
};
pub use simulate::{anchoring_errors, error_map, simulate_tail_phys, ErrorMap, SweepPolicy};
pub use template::{dimensionless_gearing, gamma_of};
pub use types::{
    DimensionlessGearing, DrivePhase, HaltStatus, Limb, LimbParams, MotorModel, Sample, Stroke,
    TailParams, TaskSpec, TemplateParams, Trajectory, WheelParams,
};
