//! Controllers executing the template maneuver: the open-loop bang-bang
//! schedule, an event-based braking guard, and saturated PD feedback on
//! the body angle.

use serde::Serialize;

use crate::error::{GearingError, ParamError, SimError};
use crate::gearing::critical_switch;
use crate::numerics::{bisect, rk4_step};
use crate::template::{accel_state, flow_state, g_h_tilde, gamma_of};
use crate::types::{DrivePhase, HaltStatus, Sample, TemplateParams, Trajectory};

/// Open-loop schedule: full drive until `switch_time`, then brake.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BangBangSchedule {
    /// Drive-to-brake switch (s, >= 0).
    pub switch_time: f64,
}

/// Event-based switch: brake once the body angle crosses the guard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventGuard {
    /// Guard angle as a fraction of the target rotation, in (0, 1).
    pub switch_angle: f64,
}

/// Dimensioned PD gains on the body angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdGains {
    /// Proportional gain (N m / rad, > 0).
    pub k_p: f64,
    /// Derivative gain (N m s / rad, >= 0).
    pub k_d: f64,
}

/// Controller for the full tailed-body simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TailController {
    BangBang(BangBangSchedule),
    EventGuard(EventGuard),
}

/// Dimensionless state at the critical switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwitchState {
    pub time: f64,
    pub theta: f64,
    pub rate: f64,
}

/// Body angle fraction covered when the critical switch fires; braking
/// from here spends the remaining budget exactly.
pub fn guard_angle(omega: f64, beta: f64) -> Result<f64, GearingError> {
    Ok(switch_state(omega, beta)?.theta)
}

/// Full dimensionless state (time, angle, rate) at the critical switch.
pub fn switch_state(omega: f64, beta: f64) -> Result<SwitchState, GearingError> {
    let ts = critical_switch(omega, beta)?;
    let s = accel_state(omega, beta, ts);
    Ok(SwitchState {
        time: ts,
        theta: s.theta,
        rate: s.rate,
    })
}

/// Dimensionless PD gain ratio k_d/k_p that zeroes the PD command exactly
/// at the critical switch state, so saturation releases where the
/// bang-bang schedule would brake. The dimensioned ratio K_d/K_p is this
/// value divided by gamma.
pub fn optimal_gain_ratio(omega: f64, beta: f64) -> Result<f64, GearingError> {
    let s = switch_state(omega, beta)?;
    Ok((1.0 - s.theta) / s.rate)
}

/// Scale dimensionless gains onto a template: K_p = k_p gamma^2 I_d,
/// K_d = k_d gamma I_d.
pub fn pd_gains_from_dimensionless(
    p: &TemplateParams,
    k_p_tilde: f64,
    k_d_tilde: f64,
) -> Result<PdGains, ParamError> {
    let gamma = gamma_of(p)?;
    Ok(PdGains {
        k_p: k_p_tilde * gamma * gamma * p.driven_inertia,
        k_d: k_d_tilde * gamma * p.driven_inertia,
    })
}

/// Equivalent servo on the appendage coordinate: gains scaled by the
/// effectiveness, target mapped through the connection. Produces the
/// same body-side torque history as the body-angle PD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InternalAnglePd {
    /// Appendage proportional gain, effectiveness * K_p.
    pub k_p: f64,
    /// Appendage derivative gain, effectiveness * K_d.
    pub k_d: f64,
    /// Appendage target angle, -body_target / effectiveness.
    pub target: f64,
}

/// Map a body-angle PD to the internal-angle form.
pub fn internal_angle_equivalent(gains: &PdGains, effectiveness: f64, body_target: f64) -> InternalAnglePd {
    InternalAnglePd {
        k_p: effectiveness * gains.k_p,
        k_d: effectiveness * gains.k_d,
        target: -body_target / effectiveness,
    }
}

/// Unsaturated body-side PD command from body-angle feedback.
pub fn pd_torque(gains: &PdGains, body_target: f64, theta_b: f64, rate_b: f64) -> f64 {
    gains.k_p * (body_target - theta_b) - gains.k_d * rate_b
}

/// Unsaturated body-side command computed from appendage feedback; equals
/// `pd_torque` whenever the states satisfy the connection
/// theta_b = -effectiveness * theta_r.
pub fn internal_pd_torque(servo: &InternalAnglePd, theta_r: f64, rate_r: f64) -> f64 {
    servo.k_p * (theta_r - servo.target) + servo.k_d * rate_r
}

/// Execute the event guard on the closed-form flows: accelerate until the
/// guard angle, then brake to rest. Returns the final (angle, time) in
/// dimensionless units.
pub fn execute_event_guard(
    omega: f64,
    beta: f64,
    guard: f64,
) -> Result<(f64, f64), GearingError> {
    if !(guard > 0.0 && guard < 1.0) {
        return Err(ParamError::OutOfRange {
            name: "guard angle",
            value: guard,
            range: "(0, 1)",
        }
        .into());
    }
    // The accel angle is strictly increasing; bracket by doubling.
    let mut hi = 1.0;
    let mut n = 0;
    while accel_state(omega, beta, hi).theta < guard {
        hi *= 2.0;
        n += 1;
        if n > 64 {
            return Err(GearingError::BracketExhausted { max: hi });
        }
    }
    let t_g = bisect(
        |t| accel_state(omega, beta, t).theta - guard,
        0.0,
        hi,
        1e-13,
    );
    let s = accel_state(omega, beta, t_g);
    let theta_h = s.theta + 0.5 * omega / beta * s.rate * s.rate;
    let t_h = t_g + omega / beta * s.rate;
    Ok((theta_h, t_h))
}

/// Simulate saturated PD tracking of the target angle on the template:
/// theta_ddot = sat(K_p (theta_bf - theta) - K_d theta_dot) / I_d, with
/// the command clipped between the braking cap and the back-EMF line
/// (appendage speed mapped through the connection). Fixed-step RK4 with
/// sign-change halt detection refined by bisection.
pub fn simulate_pd(
    p: &TemplateParams,
    gains: &PdGains,
    dt: Option<f64>,
) -> Result<Trajectory, SimError> {
    p.validate()?;
    if !(gains.k_p > 0.0) || !(gains.k_d >= 0.0) {
        return Err(ParamError::NotPositive {
            name: "pd gains",
            value: gains.k_p,
        }
        .into());
    }
    let dt = dt.unwrap_or(1e-4 * p.task.horizon);
    if !(dt > 0.0) {
        return Err(ParamError::NotPositive {
            name: "dt",
            value: dt,
        }
        .into());
    }

    let xi = p.effectiveness;
    let tau_m = p.motor.stall_torque();
    let beta = p.motor.torque_fraction;
    let target = p.task.body_rotation;
    let inertia = p.driven_inertia;
    let omega_m = p.motor.no_load_speed;

    let saturate = move |theta: f64, rate: f64| -> (f64, DrivePhase) {
        let cmd = gains.k_p * (target - theta) - gains.k_d * rate;
        // Acceleration bound: current cap or back-EMF line at the
        // appendage speed rate/xi, whichever is lower.
        let upper = (beta * tau_m).min(tau_m * (1.0 - rate / (xi * omega_m)));
        let lower = -beta * tau_m;
        if cmd >= upper {
            (upper, DrivePhase::PdUpperSat)
        } else if cmd <= lower {
            (lower, DrivePhase::PdLowerSat)
        } else {
            (cmd, DrivePhase::PdLinear)
        }
    };
    let rhs = move |_t: f64, y: &[f64; 2]| -> [f64; 2] {
        let (tau, _) = saturate(y[0], y[1]);
        [y[1], tau / inertia]
    };

    let t_max = 10.0 * p.task.horizon;
    let halt_tol = 1e-10 * p.task.horizon;
    let mut t = 0.0;
    let mut y = [0.0_f64, 0.0];
    let mut moved = false;
    let mut samples = Vec::with_capacity((t_max / dt) as usize / 4 + 2);
    let push = |samples: &mut Vec<Sample>, t: f64, y: &[f64; 2], tau: f64, phase: DrivePhase| {
        samples.push(Sample {
            t,
            theta_b: y[0],
            rate_b: y[1],
            theta_r: -y[0] / xi,
            rate_r: -y[1] / xi,
            torque: tau,
            phase,
        });
    };
    {
        let (tau0, ph0) = saturate(y[0], y[1]);
        push(&mut samples, t, &y, tau0, ph0);
    }

    let status = loop {
        if !y[0].is_finite() || !y[1].is_finite() {
            return Err(SimError::NonFiniteState { t });
        }
        if t >= t_max {
            break HaltStatus::TimedOut { time: t };
        }
        let y_next = rk4_step(&rhs, t, &y, dt);
        if moved && y_next[1] <= 0.0 && y[1] > 0.0 {
            // Bracket the rate zero inside this step: the rate falls from
            // positive to nonpositive, so negate for the bisector.
            let h = bisect(|h| -rk4_step(&rhs, t, &y, h)[1], 0.0, dt, halt_tol);
            let y_halt = rk4_step(&rhs, t, &y, h);
            t += h;
            let (tau, _) = saturate(y_halt[0], y_halt[1]);
            push(&mut samples, t, &y_halt, tau, DrivePhase::Halted);
            break HaltStatus::Halted { time: t };
        }
        if y_next[1] > 0.0 {
            moved = true;
        }
        y = y_next;
        t += dt;
        let (tau, ph) = saturate(y[0], y[1]);
        push(&mut samples, t, &y, tau, ph);
    };
    Ok(Trajectory { samples, status })
}

/// Maneuver time of the open-loop schedule on the template (s), for
/// cross-checking feedback executions.
pub fn bang_bang_halt_time(p: &TemplateParams) -> Result<f64, GearingError> {
    let gamma = gamma_of(p)?;
    let omega = p.effectiveness * p.motor.no_load_speed / (gamma * p.task.body_rotation);
    let ts = match p.switch_time {
        Some(ts) => gamma * ts,
        None => critical_switch(omega, p.motor.torque_fraction)?,
    };
    Ok(g_h_tilde(omega, p.motor.torque_fraction, ts) / gamma)
}

/// Closed-form template trajectory under the open-loop schedule,
/// dimensioned, for comparison against feedback simulations.
pub fn bang_bang_reference(p: &TemplateParams, t: f64) -> Result<(f64, f64), GearingError> {
    let gamma = gamma_of(p)?;
    let omega = p.effectiveness * p.motor.no_load_speed / (gamma * p.task.body_rotation);
    let ts = match p.switch_time {
        Some(ts) => gamma * ts,
        None => critical_switch(omega, p.motor.torque_fraction)?,
    };
    let s = flow_state(omega, p.motor.torque_fraction, ts, gamma * t);
    Ok((
        s.theta * p.task.body_rotation,
        s.rate * p.task.body_rotation * gamma,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gearing::optimal_full_torque;
    use crate::types::{MotorModel, Stroke, TaskSpec};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn guard_angle_at_optimum_matches_frozen_value() {
        let g = optimal_full_torque();
        let guard = guard_angle(g.omega_tilde_star, 1.0).unwrap();
        assert!((guard - 0.8198036704).abs() < 1e-8, "guard = {guard}");
        assert!(guard < 1.0);
    }

    #[test]
    fn gain_ratio_at_optimum_matches_frozen_value() {
        let g = optimal_full_torque();
        let r = optimal_gain_ratio(g.omega_tilde_star, 1.0).unwrap();
        assert!((r - 0.2575361539).abs() < 1e-8, "ratio = {r}");
        // Defining property: zero net PD command at the switch state.
        let s = switch_state(g.omega_tilde_star, 1.0).unwrap();
        assert!(((1.0 - s.theta) - r * s.rate).abs() < 1e-12);
    }

    #[test]
    fn gain_ratio_grows_as_torque_cap_tightens() {
        let g = optimal_full_torque();
        let r1 = optimal_gain_ratio(g.omega_tilde_star, 1.0).unwrap();
        let r05 = optimal_gain_ratio(g.omega_tilde_star, 0.5).unwrap();
        let r033 = optimal_gain_ratio(g.omega_tilde_star, 0.33).unwrap();
        assert!(r05 > r1);
        assert!(r033 > r05);
    }

    #[test]
    fn event_guard_halts_on_target() {
        let g = optimal_full_torque();
        let guard = guard_angle(g.omega_tilde_star, 1.0).unwrap();
        let (theta_h, t_h) = execute_event_guard(g.omega_tilde_star, 1.0, guard).unwrap();
        assert!((theta_h - 1.0).abs() < 1e-6);
        assert!((t_h - g.t_h_star).abs() < 1e-6);
    }

    #[test]
    fn internal_angle_servo_reproduces_body_torque() {
        let gains = PdGains { k_p: 3.7, k_d: 0.41 };
        let xi = 0.5587;
        let target = FRAC_PI_2;
        let servo = internal_angle_equivalent(&gains, xi, target);
        for i in 0..50 {
            let theta_r = -2.0 + 0.08 * i as f64;
            let rate_r = -1.5 + 0.06 * i as f64;
            let body = pd_torque(&gains, target, -xi * theta_r, -xi * rate_r);
            let internal = internal_pd_torque(&servo, theta_r, rate_r);
            assert!((body - internal).abs() < 1e-12);
        }
    }

    fn rhex_like_template() -> TemplateParams {
        TemplateParams {
            effectiveness: 0.5587,
            driven_inertia: 0.141,
            stroke: Stroke::Finite(3.01),
            motor: MotorModel {
                peak_power: 342.0,
                no_load_speed: 37.28,
                torque_fraction: 1.0,
            },
            switch_time: None,
            task: TaskSpec {
                body_rotation: FRAC_PI_2,
                horizon: 0.34,
            },
        }
    }

    #[test]
    fn high_gain_pd_approaches_bang_bang() {
        let p = rhex_like_template();
        let gamma = crate::template::gamma_of(&p).unwrap();
        let omega = p.effectiveness * p.motor.no_load_speed / (gamma * p.task.body_rotation);
        let ratio = optimal_gain_ratio(omega, 1.0).unwrap();
        let t_bang = bang_bang_halt_time(&p).unwrap();

        let mut worst_prev = f64::INFINITY;
        for scale in [10.0, 100.0, 1000.0] {
            let gains = pd_gains_from_dimensionless(&p, scale, scale * ratio).unwrap();
            let traj = simulate_pd(&p, &gains, None).unwrap();
            assert!(traj.status.is_halted());
            let mut worst: f64 = 0.0;
            for s in &traj.samples {
                let (theta_ref, _) = bang_bang_reference(&p, s.t).unwrap();
                worst = worst.max((s.theta_b - theta_ref).abs());
            }
            assert!(
                worst < worst_prev,
                "deviation must shrink as gains grow: {worst} !< {worst_prev}"
            );
            worst_prev = worst;
        }

        // At the stiffest gains the execution matches the plan closely.
        let gains = pd_gains_from_dimensionless(&p, 1000.0, 1000.0 * ratio).unwrap();
        let traj = simulate_pd(&p, &gains, None).unwrap();
        let end = traj.final_sample();
        assert!((end.theta_b - p.task.body_rotation).abs() / p.task.body_rotation < 0.01);
        assert!((traj.status.time() - t_bang).abs() / t_bang < 0.02);
    }

    #[test]
    fn zero_proportional_gain_is_rejected() {
        let p = rhex_like_template();
        let gains = PdGains { k_p: 0.0, k_d: 0.1 };
        assert!(simulate_pd(&p, &gains, None).is_err());
    }

    #[test]
    fn pd_saturation_is_asymmetric() {
        // With a large positive command the torque sits on the
        // accelerating bound; once the body is fast, the EMF line caps
        // it below the current cap.
        let p = rhex_like_template();
        let tau_m = p.motor.stall_torque();
        let gains = PdGains { k_p: 1e6, k_d: 0.0 };
        let traj = simulate_pd(&p, &gains, None).unwrap();
        let fast = traj
            .samples
            .iter()
            .find(|s| s.rate_b > 0.5 * p.effectiveness * p.motor.no_load_speed)
            .expect("trajectory reaches half no-load speed");
        assert!(fast.torque < tau_m * 0.55);
        assert_eq!(fast.phase, DrivePhase::PdUpperSat);
    }
}
