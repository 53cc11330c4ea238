//! Nonlinear simulation of the tailed body, in the dimensionless template
//! chart and in dimensioned absolute coordinates, plus the anchoring-error
//! protocol that quantifies how faithfully the reduced template predicts
//! the full dynamics.
//!
//! The two simulators are independent routes to the same physics: the
//! dimensionless one integrates the relative-coordinate equations
//! normalized by the reduction, the dimensioned one integrates absolute
//! body/tail angles from raw parameters. Tests hold them against each
//! other and against the closed-form template.

use std::f64::consts::PI;

use serde::Serialize;

use crate::control::TailController;
use crate::error::{ParamError, SimError};
use crate::format::sig;
use crate::gearing::optimal_full_torque;
use crate::numerics::{bisect, rk4_step};
use crate::reductions::{kinematic_error, validate_tail_domain};
use crate::types::{DrivePhase, HaltStatus, Sample, Stroke, TailParams, Trajectory};

/// Fixed dimensionless step of the anchoring-error protocol.
pub const PROTOCOL_DT: f64 = 1e-4;

/// Dimensionless integration horizon: no sane maneuver approaches it.
const ND_TIMEOUT: f64 = 50.0;

/// Width of the halt-locating bisection, in units of the integration time.
const HALT_TOL: f64 = 1e-10;

/// Tail sweep driven by the error protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SweepPolicy {
    /// Half rotation centered on full extension; the survey default.
    HalfRotation,
    /// The body's actual stroke (rad), still centered on full extension.
    Stroke(f64),
}

impl SweepPolicy {
    /// Tail travel commanded by the policy (rad).
    pub fn sweep_length(&self) -> f64 {
        match self {
            SweepPolicy::HalfRotation => PI,
            SweepPolicy::Stroke(s) => *s,
        }
    }

    fn validate(&self) -> Result<(), ParamError> {
        match self {
            SweepPolicy::HalfRotation => Ok(()),
            SweepPolicy::Stroke(s) => {
                if s.is_finite() && *s > 0.0 {
                    Ok(())
                } else {
                    Err(ParamError::NotPositive {
                        name: "sweep stroke",
                        value: *s,
                    })
                }
            }
        }
    }
}

/// Anchoring error of one maneuver, as fractions of the template
/// prediction: `angle` compares the final body rotation to the target,
/// `time` compares the halting time to the template's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorPair {
    /// (theta_b(t_halt) - theta_bf) / theta_bf.
    pub angle: f64,
    /// (t_halt - t_h) / t_h.
    pub time: f64,
}

/// One cell of an anchoring-error map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorMapCell {
    pub xi: f64,
    pub eta: f64,
    /// Whether (xi, eta) lies in the reducible domain.
    pub valid: bool,
    /// Kinematic error of the constant-effectiveness approximation;
    /// NaN outside the domain.
    pub e_c: f64,
    /// Simulated anchoring errors; `None` outside the domain.
    pub errors: Option<ErrorPair>,
}

/// Grid of anchoring errors over the dimensionless design plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorMap {
    pub policy: SweepPolicy,
    pub cells: Vec<ErrorMapCell>,
}

impl ErrorMap {
    /// CSV export, one row per cell; invalid cells carry NaN error
    /// columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi_t,eta,valid,e_c,e_b,e_t\n");
        for cell in &self.cells {
            let (e_b, e_t) = match cell.errors {
                Some(e) => (e.angle, e.time),
                None => (f64::NAN, f64::NAN),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sig(cell.xi, 10),
                sig(cell.eta, 10),
                cell.valid,
                sig(cell.e_c, 10),
                sig(e_b, 10),
                sig(e_t, 10)
            ));
        }
        out
    }
}

fn check_nd_inputs(
    xi: f64,
    eta: f64,
    theta_bf: f64,
    omega: f64,
    beta: f64,
    switch: f64,
    dt: f64,
) -> Result<(), ParamError> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(ParamError::OutOfRange {
            name: "effectiveness",
            value: xi,
            range: "(0, 1)",
        });
    }
    if !(eta >= 0.0) {
        return Err(ParamError::NotNonnegative {
            name: "eta",
            value: eta,
        });
    }
    let limit = ((1.0 - xi) / xi).sqrt();
    if !(eta < limit) {
        return Err(ParamError::TailDomain { xi, eta, limit });
    }
    if !(theta_bf > 0.0) {
        return Err(ParamError::NotPositive {
            name: "theta_bf",
            value: theta_bf,
        });
    }
    if !(omega > 0.0) {
        return Err(ParamError::NotPositive {
            name: "omega_tilde",
            value: omega,
        });
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(ParamError::OutOfRange {
            name: "torque_fraction",
            value: beta,
            range: "(0, 1]",
        });
    }
    if !(switch > 0.0) {
        return Err(ParamError::NotPositive {
            name: "switch",
            value: switch,
        });
    }
    if !(dt > 0.0) {
        return Err(ParamError::NotPositive { name: "dt", value: dt });
    }
    Ok(())
}

/// Body-frame accelerations of the dimensionless tailed body. State is
/// [theta_tilde, theta_tilde', theta_r, u] with u = d(theta_r)/d(t_tilde);
/// `tau` is the normalized body-side drive torque.
fn nd_accels(xi: f64, eta: f64, theta_bf: f64, tau: f64, y: &[f64; 4]) -> [f64; 4] {
    let rate = y[1];
    let c = y[2].cos();
    let s = y[2].sin();
    let u = y[3];
    let a11 = (1.0 - xi) / xi + 1.0 - 2.0 * eta * c;
    let a12 = 1.0 - eta * c;
    // det = a11 - a12^2; positive throughout the validated domain.
    let det = (1.0 - xi) / xi - eta * eta * c * c;
    let c1 = eta * s * (2.0 * rate * u + u * u / theta_bf);
    let c2 = -eta * s * theta_bf * rate * rate;
    let b1 = -c1;
    let b2 = -((1.0 - xi) / xi) * tau - c2;
    let x1 = (b1 - a12 * b2) / det;
    let x2 = (-a12 * b1 + a11 * b2) / det;
    [rate, x1, u, x2 * theta_bf]
}

/// Normalized angular momentum of the dimensionless state: zero along
/// any drive, since the motor torque is internal.
pub fn normalized_momentum(xi: f64, eta: f64, theta_bf: f64, y: &[f64; 4]) -> f64 {
    let c = y[2].cos();
    (1.0 - 2.0 * xi * eta * c) * theta_bf * y[1] + xi * (1.0 - eta * c) * y[3]
}

struct NdRun {
    trajectory: Trajectory,
    final_state: [f64; 4],
}

#[allow(clippy::too_many_arguments)]
fn run_tail_nd(
    xi: f64,
    eta: f64,
    theta_bf: f64,
    omega: f64,
    switch: f64,
    beta: f64,
    dt: f64,
    record: bool,
) -> Result<NdRun, SimError> {
    check_nd_inputs(xi, eta, theta_bf, omega, beta, switch, dt)?;
    // Driving the anchor with the template-optimal motor: gamma was
    // computed from the reduced driven inertia rho*B, so the body-side
    // normalized torque carries the ratio rho.
    let rho = 1.0 - 2.0 * eta / PI;
    let drive = move |u: f64| -> (f64, DrivePhase) {
        let emf = 1.0 - xi * u.abs() / (theta_bf * omega);
        if beta <= emf {
            (rho * beta / omega, DrivePhase::CurrentLimited)
        } else {
            (rho * emf / omega, DrivePhase::VoltageLimited)
        }
    };
    let accel_rhs = move |_t: f64, y: &[f64; 4]| nd_accels(xi, eta, theta_bf, drive(y[3]).0, y);
    let brake_tau = -rho * beta / omega;
    let brake_rhs = move |_t: f64, y: &[f64; 4]| nd_accels(xi, eta, theta_bf, brake_tau, y);

    let s_r = theta_bf / xi;
    let mut t = 0.0;
    let mut y = [0.0, 0.0, PI + 0.5 * s_r, 0.0];
    let mut samples = Vec::new();
    let push = |t: f64, y: &[f64; 4], tau: f64, phase: DrivePhase, samples: &mut Vec<Sample>| {
        samples.push(Sample {
            t,
            theta_b: y[0],
            rate_b: y[1],
            theta_r: y[2],
            rate_r: y[3],
            torque: tau,
            phase,
        });
    };
    {
        let (tau0, ph0) = drive(y[3]);
        push(t, &y, tau0, ph0, &mut samples);
    }

    let check = |t: f64, y: &[f64; 4]| -> Result<(), SimError> {
        if !(y[0].is_finite() && y[1].is_finite() && y[2].is_finite() && y[3].is_finite()) {
            return Err(SimError::NonFiniteState { t });
        }
        let c = y[2].cos();
        let det = (1.0 - xi) / xi - eta * eta * c * c;
        if det <= 0.0 {
            return Err(SimError::MassMatrixSingular { det, theta_r: y[2] });
        }
        Ok(())
    };

    // Drive phase: fixed steps, with a final partial step landing
    // exactly on the switch so the discontinuity never sits inside a
    // step.
    while t < switch {
        let h = dt.min(switch - t);
        y = rk4_step(&accel_rhs, t, &y, h);
        t += h;
        check(t, &y)?;
        if record {
            let (tau, ph) = drive(y[3]);
            push(t, &y, tau, ph, &mut samples);
        }
    }

    // Braking phase: run until the body rate crosses zero, then bisect
    // the crossing inside the bracketing step.
    let status = loop {
        if t >= ND_TIMEOUT {
            break HaltStatus::TimedOut { time: t };
        }
        let y_next = rk4_step(&brake_rhs, t, &y, dt);
        if y[1] > 0.0 && y_next[1] <= 0.0 {
            let h = bisect(|h| -rk4_step(&brake_rhs, t, &y, h)[1], 0.0, dt, HALT_TOL);
            y = rk4_step(&brake_rhs, t, &y, h);
            t += h;
            check(t, &y)?;
            push(t, &y, brake_tau, DrivePhase::Halted, &mut samples);
            break HaltStatus::Halted { time: t };
        }
        y = y_next;
        t += dt;
        check(t, &y)?;
        if record {
            push(t, &y, brake_tau, DrivePhase::Braking, &mut samples);
        }
    };
    if !status.is_halted() {
        push(t, &y, brake_tau, DrivePhase::Braking, &mut samples);
    }
    Ok(NdRun {
        trajectory: Trajectory { samples, status },
        final_state: y,
    })
}

/// Integrate the dimensionless tailed body under the switched drive
/// (omega, beta) with the open-loop switch at `switch`, starting at rest
/// with the tail cocked half a sweep past full extension. Records every
/// step.
pub fn simulate_tail_nd(
    xi: f64,
    eta: f64,
    theta_bf: f64,
    omega: f64,
    switch: f64,
    beta: f64,
    dt: f64,
) -> Result<Trajectory, SimError> {
    Ok(run_tail_nd(xi, eta, theta_bf, omega, switch, beta, dt, true)?.trajectory)
}

/// Integrate the dimensionless tailed body with the drive off, from an
/// arbitrary state: pure momentum exchange, for conservation checks.
pub fn coast_tail_nd(
    xi: f64,
    eta: f64,
    theta_bf: f64,
    y0: [f64; 4],
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, SimError> {
    check_nd_inputs(xi, eta, theta_bf, 1.0, 1.0, 1.0, dt)?;
    if !(t_end > 0.0) {
        return Err(ParamError::NotPositive {
            name: "t_end",
            value: t_end,
        }
        .into());
    }
    let rhs = move |_t: f64, y: &[f64; 4]| nd_accels(xi, eta, theta_bf, 0.0, y);
    let mut t = 0.0;
    let mut y = y0;
    let mut samples = Vec::new();
    let push = |t: f64, y: &[f64; 4], samples: &mut Vec<Sample>| {
        samples.push(Sample {
            t,
            theta_b: y[0],
            rate_b: y[1],
            theta_r: y[2],
            rate_r: y[3],
            torque: 0.0,
            phase: DrivePhase::Halted,
        });
    };
    push(t, &y, &mut samples);
    while t < t_end {
        let h = dt.min(t_end - t);
        y = rk4_step(&rhs, t, &y, h);
        t += h;
        if !(y[0].is_finite() && y[1].is_finite() && y[2].is_finite() && y[3].is_finite()) {
            return Err(SimError::NonFiniteState { t });
        }
        push(t, &y, &mut samples);
    }
    Ok(Trajectory {
        samples,
        status: HaltStatus::TimedOut { time: t },
    })
}

/// Anchoring errors of the template-optimal maneuver executed on the
/// nonlinear tail (xi, eta): gear the full-torque optimum to the sweep,
/// drive open loop with the template's critical switch, and compare the
/// natural halt against the template's prediction (angle error) and the
/// template's halting time (time error).
pub fn anchoring_errors(xi: f64, eta: f64, policy: SweepPolicy) -> Result<ErrorPair, SimError> {
    policy.validate()?;
    let g = optimal_full_torque();
    let s_r = policy.sweep_length();
    let theta_bf = xi * s_r;
    let run = run_tail_nd(
        xi,
        eta,
        theta_bf,
        g.omega_tilde_star,
        g.k_t,
        1.0,
        PROTOCOL_DT,
        false,
    )?;
    let t_n = run.trajectory.status.time();
    Ok(ErrorPair {
        angle: run.final_state[0] - 1.0,
        time: (t_n - g.t_h_star) / g.t_h_star,
    })
}

/// Evaluate kinematic and anchoring errors over a (xi, eta) grid. Cells
/// outside the reducible domain are marked invalid and carry NaN errors.
pub fn error_map(xis: &[f64], etas: &[f64], policy: SweepPolicy) -> Result<ErrorMap, SimError> {
    policy.validate()?;
    let s_r = policy.sweep_length();
    let mut cells = Vec::with_capacity(xis.len() * etas.len());
    for &xi in xis {
        for &eta in etas {
            let valid = xi > 0.0 && xi < 1.0 && eta >= 0.0 && eta < ((1.0 - xi) / xi).sqrt();
            if !valid {
                cells.push(ErrorMapCell {
                    xi,
                    eta,
                    valid,
                    e_c: f64::NAN,
                    errors: None,
                });
                continue;
            }
            let e_c = kinematic_error(xi, eta, PI + 0.5 * s_r, PI - 0.5 * s_r)
                .unwrap_or(f64::NAN);
            let errors = anchoring_errors(xi, eta, policy)?;
            cells.push(ErrorMapCell {
                xi,
                eta,
                valid,
                e_c,
                errors: Some(errors),
            });
        }
    }
    Ok(ErrorMap { policy, cells })
}

struct PhysBody {
    body_moi: f64,
    tail_moi: f64,
    coupling: f64,
}

impl PhysBody {
    /// Accelerations in absolute coordinates [theta_b, rate_b, theta_t,
    /// rate_t] under relative motor torque `tau_rel` (positive drives the
    /// tail toward larger theta_r).
    fn accels(&self, tau_rel: f64, y: &[f64; 4]) -> [f64; 4] {
        let theta_r = y[2] - y[0];
        let fc = self.coupling * theta_r.cos();
        let e = self.coupling * theta_r.sin();
        let det = self.body_moi * self.tail_moi - fc * fc;
        let rhs_b = -tau_rel - e * y[3] * y[3];
        let rhs_t = tau_rel + e * y[1] * y[1];
        [
            y[1],
            (self.tail_moi * rhs_b + fc * rhs_t) / det,
            y[3],
            (fc * rhs_b + self.body_moi * rhs_t) / det,
        ]
    }
}

/// System angular momentum about the mass center computed from one
/// trajectory sample of the dimensioned tail simulation. Conserved along
/// any torque history, since the motor acts internally.
pub fn physical_momentum(p: &TailParams, s: &Sample) -> Result<f64, ParamError> {
    let dim = validate_tail_domain(p)?;
    let fc = dim.reduced_mass * p.pivot_offset * p.tail_length * s.theta_r.cos();
    let rate_t = s.rate_b + s.rate_r;
    Ok((dim.body_moi - fc) * s.rate_b + (dim.appendage_moi - fc) * rate_t)
}

/// Integrate the dimensioned tailed body in absolute coordinates under a
/// bang-bang or event-guard controller. Starts at rest with the tail
/// cocked half a stroke past full extension (a finite stroke is required
/// unless the dynamics are configuration independent). Halts when the
/// body comes to rest after braking begins; times out at ten task
/// horizons. Default step is 1e-4 of the task horizon.
pub fn simulate_tail_phys(
    p: &TailParams,
    controller: &TailController,
    dt: Option<f64>,
) -> Result<Trajectory, SimError> {
    let dim = validate_tail_domain(p)?;
    let body = PhysBody {
        body_moi: dim.body_moi,
        tail_moi: dim.appendage_moi,
        coupling: dim.reduced_mass * p.pivot_offset * p.tail_length,
    };
    let dt = dt.unwrap_or(1e-4 * p.task.horizon);
    if !(dt > 0.0) {
        return Err(ParamError::NotPositive { name: "dt", value: dt }.into());
    }
    let theta_r0 = match p.stroke {
        Stroke::Finite(s) => PI + 0.5 * s,
        Stroke::Unbounded if dim.eta == 0.0 => PI,
        Stroke::Unbounded => {
            return Err(ParamError::StrokeRequired {
                context: "the start configuration of a configuration-dependent tail",
            }
            .into())
        }
    };
    let switch_time = match controller {
        TailController::BangBang(b) => {
            if !(b.switch_time > 0.0) {
                return Err(ParamError::NotPositive {
                    name: "switch_time",
                    value: b.switch_time,
                }
                .into());
            }
            Some(b.switch_time)
        }
        TailController::EventGuard(g) => {
            if !(g.switch_angle > 0.0 && g.switch_angle < 1.0) {
                return Err(ParamError::OutOfRange {
                    name: "switch_angle",
                    value: g.switch_angle,
                    range: "(0, 1)",
                }
                .into());
            }
            None
        }
    };

    let tau_m = p.motor.stall_torque();
    let beta = p.motor.torque_fraction;
    let omega_m = p.motor.no_load_speed;
    let drive = move |y: &[f64; 4]| -> (f64, DrivePhase) {
        let rel_rate = y[3] - y[1];
        let emf = 1.0 - rel_rate.abs() / omega_m;
        if beta <= emf {
            (-beta * tau_m, DrivePhase::CurrentLimited)
        } else {
            (-emf * tau_m, DrivePhase::VoltageLimited)
        }
    };
    let accel_rhs = |_t: f64, y: &[f64; 4]| body.accels(drive(y).0, y);
    let brake_tau = beta * tau_m;
    let brake_rhs = |_t: f64, y: &[f64; 4]| body.accels(brake_tau, y);

    let t_max = 10.0 * p.task.horizon;
    let halt_tol = HALT_TOL * p.task.horizon;
    let guard_angle = match controller {
        TailController::EventGuard(g) => Some(g.switch_angle * p.task.body_rotation),
        TailController::BangBang(_) => None,
    };

    let mut t = 0.0;
    let mut y = [0.0, 0.0, theta_r0, 0.0];
    let mut samples = Vec::new();
    let push = |t: f64, y: &[f64; 4], tau: f64, phase: DrivePhase, samples: &mut Vec<Sample>| {
        samples.push(Sample {
            t,
            theta_b: y[0],
            rate_b: y[1],
            theta_r: y[2] - y[0],
            rate_r: y[3] - y[1],
            torque: tau,
            phase,
        });
    };
    {
        let (tau0, ph0) = drive(&y);
        push(t, &y, tau0, ph0, &mut samples);
    }

    // Drive until the switch event: a known time for bang-bang, a body
    // angle crossing for the event guard. Either way the step containing
    // the event is split so braking starts exactly there.
    let mut braking = false;
    while !braking {
        if t >= t_max {
            return Ok(Trajectory {
                samples,
                status: HaltStatus::TimedOut { time: t },
            });
        }
        let h_full = match switch_time {
            Some(ts) => {
                if ts - t <= 0.0 {
                    braking = true;
                    continue;
                }
                dt.min(ts - t)
            }
            None => dt,
        };
        let y_next = rk4_step(&accel_rhs, t, &y, h_full);
        if let Some(guard) = guard_angle {
            if y_next[0] >= guard {
                let h = bisect(
                    |h| rk4_step(&accel_rhs, t, &y, h)[0] - guard,
                    0.0,
                    h_full,
                    halt_tol,
                );
                y = rk4_step(&accel_rhs, t, &y, h);
                t += h;
                let (tau, ph) = drive(&y);
                push(t, &y, tau, ph, &mut samples);
                braking = true;
                continue;
            }
        }
        y = y_next;
        t += h_full;
        if !(y[0].is_finite() && y[1].is_finite() && y[2].is_finite() && y[3].is_finite()) {
            return Err(SimError::NonFiniteState { t });
        }
        let (tau, ph) = drive(&y);
        push(t, &y, tau, ph, &mut samples);
        if let Some(ts) = switch_time {
            if t >= ts {
                braking = true;
            }
        }
    }

    let status = loop {
        if t >= t_max {
            break HaltStatus::TimedOut { time: t };
        }
        let y_next = rk4_step(&brake_rhs, t, &y, dt);
        if y[1] > 0.0 && y_next[1] <= 0.0 {
            let h = bisect(|h| -rk4_step(&brake_rhs, t, &y, h)[1], 0.0, dt, halt_tol);
            y = rk4_step(&brake_rhs, t, &y, h);
            t += h;
            push(t, &y, brake_tau, DrivePhase::Halted, &mut samples);
            break HaltStatus::Halted { time: t };
        }
        y = y_next;
        t += dt;
        if !(y[0].is_finite() && y[1].is_finite() && y[2].is_finite() && y[3].is_finite()) {
            return Err(SimError::NonFiniteState { t });
        }
        push(t, &y, brake_tau, DrivePhase::Braking, &mut samples);
    };
    Ok(Trajectory { samples, status })
}

/// Integrate the dimensioned tailed body with the drive off from an
/// arbitrary absolute-coordinate state [theta_b, rate_b, theta_t,
/// rate_t].
pub fn coast_tail_phys(
    p: &TailParams,
    y0: [f64; 4],
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, SimError> {
    let dim = validate_tail_domain(p)?;
    if !(t_end > 0.0) {
        return Err(ParamError::NotPositive {
            name: "t_end",
            value: t_end,
        }
        .into());
    }
    if !(dt > 0.0) {
        return Err(ParamError::NotPositive { name: "dt", value: dt }.into());
    }
    let body = PhysBody {
        body_moi: dim.body_moi,
        tail_moi: dim.appendage_moi,
        coupling: dim.reduced_mass * p.pivot_offset * p.tail_length,
    };
    let rhs = |_t: f64, y: &[f64; 4]| body.accels(0.0, y);
    let mut t = 0.0;
    let mut y = y0;
    let mut samples = Vec::new();
    let push = |t: f64, y: &[f64; 4], samples: &mut Vec<Sample>| {
        samples.push(Sample {
            t,
            theta_b: y[0],
            rate_b: y[1],
            theta_r: y[2] - y[0],
            rate_r: y[3] - y[1],
            torque: 0.0,
            phase: DrivePhase::Halted,
        });
    };
    push(t, &y, &mut samples);
    while t < t_end {
        let h = dt.min(t_end - t);
        y = rk4_step(&rhs, t, &y, h);
        t += h;
        if !(y[0].is_finite() && y[1].is_finite() && y[2].is_finite() && y[3].is_finite()) {
            return Err(SimError::NonFiniteState { t });
        }
        push(t, &y, &mut samples);
    }
    Ok(Trajectory {
        samples,
        status: HaltStatus::TimedOut { time: t },
    })
}
