//! Design-space queries: exact feasibility of a task on a given body,
//! the minimum-power rule with gearing slaved to the optimum, projection
//! of a body's capability boundary over task horizons, and sizing a tail
//! for a requirement.

use serde::Serialize;

use crate::error::{DesignError, GearingError, ParamError};
use crate::gearing::{constants_at, critical_switch, optimize_gearing, resolved_switch_tilde};
use crate::template::{dimensionless_gearing, g_h_tilde, g_theta_tilde, gamma_of, gamma_raw};
use crate::types::{Stroke, TaskSpec, TemplateParams};

/// Relative tolerance for the rotation budget being met exactly.
const ROTATION_TOL: f64 = 1e-6;

/// Relative slack forgiving roundoff at the power-rule boundary.
const POWER_SLACK: f64 = 1e-9;

/// Angular resolution (rad) of the capability-boundary bisection.
const PROJECTION_TOL: f64 = 1e-6;

/// Feasibility of a task on a concrete template, every constraint
/// reported with its margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// Appendage travel fits the stroke.
    pub stroke_ok: bool,
    /// Remaining stroke after the maneuver (rad); infinite when
    /// unbounded.
    pub stroke_margin: f64,
    /// Maneuver finishes within the horizon.
    pub time_ok: bool,
    /// Horizon minus maneuver time (s).
    pub time_margin: f64,
    /// The switched maneuver meets the rotation budget.
    pub rotation_ok: bool,
    /// Achieved rotation minus the budget (rad).
    pub rotation_residual: f64,
    pub feasible: bool,
}

/// Decide whether the template can execute its task, from the closed-form
/// maneuver. With a concrete switch time the achieved rotation must match
/// the budget; with none, the critical switch (which meets the budget
/// exactly) is used and only stroke and time can bind.
pub fn exact_feasibility(p: &TemplateParams) -> Result<FeasibilityReport, GearingError> {
    let g = dimensionless_gearing(p)?;
    let gamma = gamma_of(p)?;
    let switch = resolved_switch_tilde(p)?;
    let theta_bf = p.task.body_rotation;
    let rotation = g_theta_tilde(g.omega_tilde, g.beta, switch) * theta_bf;
    let duration = g_h_tilde(g.omega_tilde, g.beta, switch) / gamma;

    let rotation_residual = rotation - theta_bf;
    let rotation_ok = rotation_residual.abs() <= ROTATION_TOL * theta_bf;
    let time_margin = p.task.horizon - duration;
    let time_ok = time_margin >= 0.0;
    let sweep = rotation / p.effectiveness;
    let stroke_margin = p.stroke.margin(sweep);
    let stroke_ok = stroke_margin >= 0.0;
    Ok(FeasibilityReport {
        stroke_ok,
        stroke_margin,
        time_ok,
        time_margin,
        rotation_ok,
        rotation_residual,
        feasible: stroke_ok && time_ok && rotation_ok,
    })
}

/// Inputs to the minimum-power rule: a body and task, with the drive's
/// speed rating left free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerRuleQuery {
    pub effectiveness: f64,
    pub driven_inertia: f64,
    pub stroke: Stroke,
    /// Power available from the drive (W).
    pub peak_power: f64,
    pub torque_fraction: f64,
    pub task: TaskSpec,
}

/// Verdict of the power rule, with the optimally slaved drive parameters
/// that achieve the task at minimum power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerRuleReport {
    pub stroke_ok: bool,
    pub power_ok: bool,
    /// Minimum peak power for the task (W).
    pub required_power: f64,
    /// Available minus required power (W).
    pub power_margin: f64,
    /// No-load speed of the minimum-power gearing (rad/s).
    pub no_load_speed: f64,
    /// Switch time of the minimum-power maneuver (s).
    pub switch_time: f64,
    pub feasible: bool,
}

fn check_power_query(q: &PowerRuleQuery) -> Result<(), ParamError> {
    if !(q.effectiveness > 0.0 && q.effectiveness < 1.0) {
        return Err(ParamError::OutOfRange {
            name: "effectiveness",
            value: q.effectiveness,
            range: "(0, 1)",
        });
    }
    if !(q.driven_inertia > 0.0) {
        return Err(ParamError::NotPositive {
            name: "driven_inertia",
            value: q.driven_inertia,
        });
    }
    if !(q.peak_power > 0.0) {
        return Err(ParamError::NotPositive {
            name: "peak_power",
            value: q.peak_power,
        });
    }
    q.stroke.validate()?;
    q.task.validate()
}

/// Minimum peak power for the task on a body (xi, I_d), at optimal
/// gearing (omega_tilde = None) or at a pinned normalized speed:
/// P = k_p(omega, beta) I_d theta_bf^2 / (xi t_f^3).
pub fn min_power_at(
    effectiveness: f64,
    driven_inertia: f64,
    task: &TaskSpec,
    beta: f64,
    omega_tilde: Option<f64>,
) -> Result<f64, GearingError> {
    task.validate()?;
    let k_p = match omega_tilde {
        Some(omega) => constants_at(omega, beta)?.k_p,
        None => optimize_gearing(beta)?.k_p,
    };
    let theta = task.body_rotation;
    let t_f = task.horizon;
    Ok(k_p * driven_inertia * theta * theta / (effectiveness * t_f.powi(3)))
}

/// Evaluate the power rule: the task is feasible iff the stroke covers
/// it and the available power meets the optimal-gearing minimum. Also
/// reports the slaved no-load speed and switch time realizing that
/// minimum.
pub fn power_rule_feasibility(q: &PowerRuleQuery) -> Result<PowerRuleReport, DesignError> {
    check_power_query(q)?;
    let g = optimize_gearing(q.torque_fraction)?;
    let theta = q.task.body_rotation;
    let t_f = q.task.horizon;
    let required_power =
        g.k_p * q.driven_inertia * theta * theta / (q.effectiveness * t_f.powi(3));
    let power_margin = q.peak_power - required_power;
    let power_ok = q.peak_power >= required_power * (1.0 - POWER_SLACK);
    let stroke_ok = q.stroke.allows(theta / q.effectiveness);
    // The minimum-power design's time scale puts the whole horizon on
    // the maneuver: gamma = t_h_star / t_f.
    let gamma = g.t_h_star / t_f;
    Ok(PowerRuleReport {
        stroke_ok,
        power_ok,
        required_power,
        power_margin,
        no_load_speed: g.k_s * theta / (q.effectiveness * t_f),
        switch_time: g.k_t / gamma,
        feasible: stroke_ok && power_ok,
    })
}

/// A fixed body with its drive, for capability-boundary queries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BodySpec {
    pub effectiveness: f64,
    pub driven_inertia: f64,
    /// Peak drive power (W).
    pub peak_power: f64,
    /// No-load speed of the appendage (rad/s).
    pub no_load_speed: f64,
    pub torque_fraction: f64,
    pub stroke: Stroke,
}

/// Which constraint caps the achievable rotation at a horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BindingConstraint {
    Stroke,
    Time,
}

/// One point of a capability boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionPoint {
    /// Task horizon (s).
    pub horizon: f64,
    /// Largest achievable body rotation (rad).
    pub max_rotation: f64,
    pub binding: BindingConstraint,
}

fn check_body_spec(b: &BodySpec) -> Result<(), ParamError> {
    if !(b.effectiveness > 0.0 && b.effectiveness < 1.0) {
        return Err(ParamError::OutOfRange {
            name: "effectiveness",
            value: b.effectiveness,
            range: "(0, 1)",
        });
    }
    if !(b.driven_inertia > 0.0) {
        return Err(ParamError::NotPositive {
            name: "driven_inertia",
            value: b.driven_inertia,
        });
    }
    if !(b.peak_power > 0.0) {
        return Err(ParamError::NotPositive {
            name: "peak_power",
            value: b.peak_power,
        });
    }
    if !(b.no_load_speed > 0.0) {
        return Err(ParamError::NotPositive {
            name: "no_load_speed",
            value: b.no_load_speed,
        });
    }
    if !(b.torque_fraction > 0.0 && b.torque_fraction <= 1.0) {
        return Err(ParamError::OutOfRange {
            name: "torque_fraction",
            value: b.torque_fraction,
            range: "(0, 1]",
        });
    }
    b.stroke.validate()
}

/// Whether the body can rotate by `theta` within `t_f`, time constraint
/// only: gear-independent closed-form maneuver at the critical switch.
fn rotation_in_time(b: &BodySpec, theta: f64, t_f: f64) -> Result<bool, GearingError> {
    let gamma = gamma_raw(b.peak_power, b.effectiveness, b.driven_inertia, theta);
    let omega = b.effectiveness * b.no_load_speed / (gamma * theta);
    let switch = critical_switch(omega, b.torque_fraction)?;
    Ok(g_h_tilde(omega, b.torque_fraction, switch) <= gamma * t_f)
}

/// Project a body's capability boundary: for each horizon, the largest
/// achievable rotation (to 1e-6 rad) and whether stroke or time binds it.
pub fn task_projection(
    b: &BodySpec,
    horizons: &[f64],
) -> Result<Vec<ProjectionPoint>, DesignError> {
    check_body_spec(b)?;
    let mut points = Vec::with_capacity(horizons.len());
    for &t_f in horizons {
        if !(t_f > 0.0) {
            return Err(ParamError::NotPositive {
                name: "horizon",
                value: t_f,
            }
            .into());
        }
        let stroke_cap = b.stroke.limit().map(|s| b.effectiveness * s);
        // Establish an infeasible upper bracket; the stroke cap serves
        // directly when the maneuver it allows fits the horizon.
        let hi = match stroke_cap {
            Some(cap) if rotation_in_time(b, cap, t_f)? => {
                points.push(ProjectionPoint {
                    horizon: t_f,
                    max_rotation: cap,
                    binding: BindingConstraint::Stroke,
                });
                continue;
            }
            Some(cap) => cap,
            None => {
                let mut hi = 1.0;
                let mut doublings = 0;
                while rotation_in_time(b, hi, t_f)? {
                    hi *= 2.0;
                    doublings += 1;
                    if doublings > 60 {
                        return Err(GearingError::BracketExhausted { max: hi }.into());
                    }
                }
                hi
            }
        };
        let mut lo = 0.0;
        let mut hi = hi;
        while hi - lo > PROJECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if rotation_in_time(b, mid, t_f)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        points.push(ProjectionPoint {
            horizon: t_f,
            max_rotation: 0.5 * (lo + hi),
            binding: BindingConstraint::Time,
        });
    }
    Ok(points)
}

/// Requirement-driven tail sizing: task and stroke fix the needed
/// effectiveness; body and tail masses fix the length achieving it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSelectionQuery {
    pub task: TaskSpec,
    /// Tail stroke available (rad).
    pub stroke: f64,
    pub body_mass: f64,
    pub body_inertia: f64,
    pub tail_mass: f64,
    /// Body COM to tail pivot distance (m).
    pub pivot_offset: f64,
    /// Tail inertia about its own COM (kg m^2).
    pub tail_inertia: f64,
    pub torque_fraction: f64,
}

/// A sized tail with the minimum-power drive for its task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailDesign {
    /// Effectiveness the stroke demands, theta_bf / s_r.
    pub required_effectiveness: f64,
    /// Pivot-to-COM tail length achieving it (m).
    pub tail_length: f64,
    pub eta: f64,
    /// Driven inertia of the reduced design (kg m^2).
    pub driven_inertia: f64,
    /// Minimum peak power for the task (W).
    pub min_power: f64,
    /// Slaved no-load speed (rad/s).
    pub no_load_speed: f64,
    /// Slaved switch time (s).
    pub switch_time: f64,
    /// Time-scale factor of the minimum-power design (1/s).
    pub gamma: f64,
}

/// Size a tail for a body so the stroke exactly covers the rotation
/// budget, then gear the drive for minimum power on the horizon.
pub fn select_tail_body(q: &TailSelectionQuery) -> Result<TailDesign, DesignError> {
    q.task.validate()?;
    for (name, value) in [
        ("stroke", q.stroke),
        ("body_mass", q.body_mass),
        ("body_inertia", q.body_inertia),
        ("tail_mass", q.tail_mass),
    ] {
        if !(value > 0.0) {
            return Err(ParamError::NotPositive { name, value }.into());
        }
    }
    if !(q.pivot_offset >= 0.0) {
        return Err(ParamError::NotNonnegative {
            name: "pivot_offset",
            value: q.pivot_offset,
        }
        .into());
    }
    if !(q.tail_inertia >= 0.0) {
        return Err(ParamError::NotNonnegative {
            name: "tail_inertia",
            value: q.tail_inertia,
        }
        .into());
    }
    let xi = q.task.body_rotation / q.stroke;
    if xi >= 1.0 {
        return Err(DesignError::EffectivenessUnreachable {
            required: xi,
            stroke_deg: q.stroke.to_degrees(),
        });
    }
    let m_r = q.body_mass * q.tail_mass / (q.body_mass + q.tail_mass);
    let body_moi = q.body_inertia + m_r * q.pivot_offset * q.pivot_offset;
    let appendage_moi = body_moi * xi / (1.0 - xi);
    if appendage_moi <= q.tail_inertia {
        return Err(DesignError::InertiaExceedsBudget {
            existing: q.tail_inertia,
            required: appendage_moi,
        });
    }
    let tail_length = ((appendage_moi - q.tail_inertia) / m_r).sqrt();
    let eta = m_r * q.pivot_offset * tail_length / appendage_moi;
    let limit = ((1.0 - xi) / xi).sqrt();
    if !(eta < limit) {
        return Err(DesignError::Param(ParamError::TailDomain { xi, eta, limit }));
    }
    let driven_inertia = body_moi * (1.0 - 2.0 * eta / std::f64::consts::PI);
    let g = optimize_gearing(q.torque_fraction)?;
    let theta = q.task.body_rotation;
    let t_f = q.task.horizon;
    let min_power = g.k_p * driven_inertia * theta * theta / (xi * t_f.powi(3));
    let gamma = g.t_h_star / t_f;
    Ok(TailDesign {
        required_effectiveness: xi,
        tail_length,
        eta,
        driven_inertia,
        min_power,
        no_load_speed: g.k_s * theta / (xi * t_f),
        switch_time: g.k_t / gamma,
        gamma,
    })
}

/// How the specific power demanded by a fixed reorientation task scales
/// with isometric body size: linear dimension L gives mass ~ L^3,
/// inertia ~ L^5, and gravitational fall time ~ sqrt(L), so required
/// power per unit mass grows as sqrt(L). Larger bodies need
/// disproportionately stronger drives; smaller ones reorient cheaply.
pub fn power_density_scaling(length_ratio: f64) -> f64 {
    length_ratio.sqrt()
}
