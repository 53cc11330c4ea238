//! Closed-form dynamics of the switched reorientation template.
//!
//! The template body of driven inertia I_d accelerates under the linear
//! speed-torque drive (capped at a fraction beta of stall torque), then
//! brakes at the current cap until it rests. Both phases integrate in
//! closed form, in dimensioned units and in the rescaled dimensionless
//! chart t = gamma t_phys, theta = theta_b / theta_bf.

use crate::error::ParamError;
use crate::types::{DimensionlessGearing, DrivePhase, TemplateParams};

/// Dimensionless template state on the switched flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    /// Dimensionless time.
    pub t: f64,
    /// Body angle in units of the target rotation.
    pub theta: f64,
    /// Body rate d(theta)/dt.
    pub rate: f64,
    pub phase: DrivePhase,
}

/// Time-scale factor gamma (1/s): the rescaling t_tilde = gamma t that
/// normalizes the full-torque template to unit parameters.
pub fn gamma_of(p: &TemplateParams) -> Result<f64, ParamError> {
    p.validate()?;
    Ok(gamma_raw(
        p.motor.peak_power,
        p.effectiveness,
        p.driven_inertia,
        p.task.body_rotation,
    ))
}

pub(crate) fn gamma_raw(
    peak_power: f64,
    effectiveness: f64,
    driven_inertia: f64,
    body_rotation: f64,
) -> f64 {
    (4.0 * peak_power * effectiveness / (driven_inertia * body_rotation * body_rotation)).cbrt()
}

/// Dimensionless gearing of a template: normalized no-load speed and the
/// torque fraction.
pub fn dimensionless_gearing(p: &TemplateParams) -> Result<DimensionlessGearing, ParamError> {
    let gamma = gamma_of(p)?;
    Ok(DimensionlessGearing {
        omega_tilde: p.effectiveness * p.motor.no_load_speed / (gamma * p.task.body_rotation),
        beta: p.motor.torque_fraction,
    })
}

/// Dimensionless time at which the drive leaves the current cap and meets
/// the back-EMF line: (1-beta)/beta * omega^2. Zero when beta = 1.
pub fn current_limit_exit(omega: f64, beta: f64) -> f64 {
    (1.0 - beta) / beta * omega * omega
}

/// Acceleration-phase state at dimensionless time `t` from rest:
/// current-limited (constant torque beta) until `current_limit_exit`,
/// then sliding down the back-EMF line.
pub fn accel_state(omega: f64, beta: f64, t: f64) -> FlowState {
    let t_l = current_limit_exit(omega, beta);
    if t <= t_l {
        FlowState {
            t,
            theta: 0.5 * beta / omega * t * t,
            rate: beta / omega * t,
            phase: DrivePhase::CurrentLimited,
        }
    } else {
        let dt = t - t_l;
        // em1 = exp(-dt/omega^2) - 1, kept in expm1 form for small dt.
        let em1 = (-dt / (omega * omega)).exp_m1();
        let theta_l = (1.0 - beta) * (1.0 - beta) / (2.0 * beta) * omega.powi(3);
        FlowState {
            t,
            theta: theta_l + omega * dt + beta * omega.powi(3) * em1,
            rate: omega * ((1.0 - beta) - beta * em1),
            phase: DrivePhase::VoltageLimited,
        }
    }
}

/// State on the full accelerate-brake-halt flow switched at `switch`.
/// Braking decelerates at beta/omega; past the halt the state is clamped
/// at rest.
pub fn flow_state(omega: f64, beta: f64, switch: f64, t: f64) -> FlowState {
    if t < switch {
        return accel_state(omega, beta, t);
    }
    let s = accel_state(omega, beta, switch);
    let decel = beta / omega;
    let brake = t - switch;
    let t_halt = switch + s.rate / decel;
    if t >= t_halt {
        FlowState {
            t,
            theta: s.theta + 0.5 * s.rate * s.rate / decel,
            rate: 0.0,
            phase: DrivePhase::Halted,
        }
    } else {
        FlowState {
            t,
            theta: s.theta + s.rate * brake - 0.5 * decel * brake * brake,
            rate: s.rate - decel * brake,
            phase: DrivePhase::Braking,
        }
    }
}

/// Total dimensionless body rotation of the maneuver switched at
/// `switch`: acceleration distance plus the braking parabola.
pub fn g_theta_tilde(omega: f64, beta: f64, switch: f64) -> f64 {
    let s = accel_state(omega, beta, switch);
    s.theta + 0.5 * omega / beta * s.rate * s.rate
}

/// Total dimensionless maneuver time (through braking to rest).
pub fn g_h_tilde(omega: f64, beta: f64, switch: f64) -> f64 {
    let s = accel_state(omega, beta, switch);
    switch + omega / beta * s.rate
}

/// Dimensioned acceleration-phase state (rad, rad/s) at time `t` after
/// drive-on, from rest. Standalone closed form; no rescaling involved.
fn phys_accel_state(p: &TemplateParams, t: f64) -> (f64, f64) {
    let xi = p.effectiveness;
    let tau_m = p.motor.stall_torque();
    let beta = p.motor.torque_fraction;
    // Initial full-line acceleration and the drive time constant.
    let a0 = tau_m / p.driven_inertia;
    let t_c = p.driven_inertia * xi * p.motor.no_load_speed / tau_m;
    let t_l = (1.0 - beta) / beta * t_c;
    if t <= t_l {
        (0.5 * beta * a0 * t * t, beta * a0 * t)
    } else {
        let dt = t - t_l;
        let em1 = (-dt / t_c).exp_m1();
        let v_top = xi * p.motor.no_load_speed;
        let theta_l = 0.5 * beta * a0 * t_l * t_l;
        (
            theta_l + v_top * dt + beta * v_top * t_c * em1,
            v_top * ((1.0 - beta) - beta * em1),
        )
    }
}

/// Dimensioned total body rotation (rad) of the switched maneuver.
/// Requires a concrete switch time.
pub fn g_theta_phys(p: &TemplateParams) -> Result<f64, ParamError> {
    p.validate()?;
    let ts = require_switch(p)?;
    let (theta_s, rate_s) = phys_accel_state(p, ts);
    let decel = p.motor.torque_fraction * p.motor.stall_torque() / p.driven_inertia;
    Ok(theta_s + 0.5 * rate_s * rate_s / decel)
}

/// Dimensioned maneuver duration (s) through braking to rest.
pub fn g_h_phys(p: &TemplateParams) -> Result<f64, ParamError> {
    p.validate()?;
    let ts = require_switch(p)?;
    let (_, rate_s) = phys_accel_state(p, ts);
    let decel = p.motor.torque_fraction * p.motor.stall_torque() / p.driven_inertia;
    Ok(ts + rate_s / decel)
}

fn require_switch(p: &TemplateParams) -> Result<f64, ParamError> {
    p.switch_time.ok_or(ParamError::SwitchTimeRequired {
        context: "closed-form maneuver evaluation",
    })
}
