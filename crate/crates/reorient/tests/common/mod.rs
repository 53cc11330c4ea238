//! Shared helpers for the integration suite: an independently written
//! fixed-step RK4 integrator, adaptive Simpson quadrature, seeded RNG
//! construction, and the randomized agreement sweeps reused by the
//! acceptance gate. The numerical routines deliberately duplicate
//! nothing from the library internals, so closed-form results are always
//! checked against a second route.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reorient::gearing::critical_switch;
use reorient::reductions::{integrate_connection, reduce_wheel};
use reorient::template::{g_h_phys, g_h_tilde, g_theta_phys, g_theta_tilde, gamma_of};
use reorient::{
    simulate_tail_phys, BangBangSchedule, MotorModel, Stroke, TailController, TailParams,
    TaskSpec, WheelParams,
};

/// Deterministic RNG for a named stream.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One classical RK4 step of size `h`.
pub fn rk4<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = f(t, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = f(t + 0.5 * h, &y2);
    let mut y3 = *y;
    for i in 0..N {
        y3[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = f(t + 0.5 * h, &y3);
    let mut y4 = *y;
    for i in 0..N {
        y4[i] = y[i] + h * k3[i];
    }
    let k4 = f(t + h, &y4);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate from `t0` to `t1` with fixed steps near `h`, shortening the
/// last step to land exactly on `t1`.
pub fn rk4_march<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: &[f64; N],
    t1: f64,
    h: f64,
) -> [f64; N] {
    let mut t = t0;
    let mut y = *y0;
    while t < t1 {
        let step = h.min(t1 - t);
        y = rk4(f, t, &y, step);
        t += step;
    }
    y
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_split(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_split(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_split(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_split(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Independently integrated switched maneuver in dimensionless form.
pub struct OracleFlow {
    pub theta_s: f64,
    pub rate_s: f64,
    pub theta_halt: f64,
    pub t_halt: f64,
}

/// March the dimensionless template ODE with the local RK4: drive with
/// the torque capped at `beta` and falling on the back-EMF line above
/// the cap-release speed, then brake at the constant cap until the rate
/// crosses zero. The drive march splits exactly at the cap release so
/// every leg is smooth; the braking rate is linear in time, so the final
/// partial step lands on the crossing.
pub fn oracle_flow(omega: f64, beta: f64, switch: f64, h: f64) -> OracleFlow {
    let drive = |_t: f64, y: &[f64; 2]| {
        let a = (1.0 - y[1] / omega).min(beta) / omega;
        [y[1], a]
    };
    let cap_release = (1.0 - beta) / beta * omega * omega;
    let mid = cap_release.min(switch);
    let mut y = rk4_march(&drive, 0.0, &[0.0, 0.0], mid, h);
    if switch > mid {
        y = rk4_march(&drive, mid, &y, switch, h);
    }
    let (theta_s, rate_s) = (y[0], y[1]);

    let brake = |_t: f64, y: &[f64; 2]| [y[1], -beta / omega];
    let mut t = switch;
    while y[1] * omega / beta > h {
        y = rk4(&brake, t, &y, h);
        t += h;
    }
    let last = y[1] * omega / beta;
    if last > 0.0 {
        y = rk4(&brake, t, &y, last);
        t += last;
    }
    OracleFlow {
        theta_s,
        rate_s,
        theta_halt: y[0],
        t_halt: t,
    }
}

/// Worst disagreement between the closed-form maneuver totals and the
/// independent RK4 march over `n` seeded (omega, beta, switch) triples.
/// Returns the larger of the angle and time discrepancies.
pub fn flow_agreement(seed: u64, n: usize, h: f64) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let omega = r.gen_range(0.1..3.0);
        let beta = r.gen_range(0.1..1.0);
        let switch = r.gen_range(0.1..4.0);
        let o = oracle_flow(omega, beta, switch, h);
        worst = worst
            .max((o.theta_halt - g_theta_tilde(omega, beta, switch)).abs())
            .max((o.t_halt - g_h_tilde(omega, beta, switch)).abs());
    }
    worst
}

/// Worst disagreement between the closed-form connection integral and
/// adaptive quadrature of the connection field over `n` seeded
/// (xi, eta, interval) draws spanning several turns.
pub fn connection_agreement(seed: u64, n: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let xi: f64 = r.gen_range(0.05..0.95);
        let eta = r.gen_range(0.0..0.95) * ((1.0 - xi) / xi).sqrt();
        let from = r.gen_range(-7.0..7.0);
        let to = r.gen_range(-7.0..7.0);
        let field = |theta: f64| {
            let c = theta.cos();
            -xi * (1.0 - eta * c) / (1.0 - 2.0 * xi * eta * c)
        };
        let quad = adaptive_simpson(&field, from, to, 1e-13);
        worst = worst.max((integrate_connection(xi, eta, from, to) - quad).abs());
    }
    worst
}

/// Worst disagreement between the full two-body simulation of seeded
/// wheeled bodies and the closed-form template maneuver they reduce to:
/// (angle discrepancy in rad, relative halt-time discrepancy). A wheel
/// is a tail of zero length, so the coupling vanishes and the reduction
/// is exact; any residual is integration error.
pub fn wheel_agreement(seed: u64, n: usize) -> (f64, f64) {
    let mut r = rng(seed);
    let mut worst_angle = 0.0_f64;
    let mut worst_time = 0.0_f64;
    for _ in 0..n {
        let body_mass = r.gen_range(0.5..20.0);
        let wheel_mass = r.gen_range(0.02..2.0);
        let pivot_offset = r.gen_range(0.0..0.25);
        let wheel_inertia = r.gen_range(1e-5..2e-2);
        let body_inertia = r.gen_range(5e-3..0.5);
        let peak_power = r.gen_range(1.0..200.0);
        let beta = r.gen_range(0.25..1.0);
        let rotation = r.gen_range(0.3..std::f64::consts::PI);
        let omega_tilde = r.gen_range(0.3..1.8);

        let mut wheel = WheelParams {
            body_mass,
            wheel_mass,
            pivot_offset,
            wheel_inertia,
            body_inertia,
            motor: MotorModel {
                peak_power,
                no_load_speed: 1.0,
                torque_fraction: beta,
            },
            switch_time: None,
            task: TaskSpec {
                body_rotation: rotation,
                horizon: 1.0,
            },
        };
        // Gear the drive to the drawn normalized no-load speed; the time
        // scale does not depend on the speed, so one pass suffices.
        let mut template = reduce_wheel(&wheel).unwrap();
        let gamma = gamma_of(&template).unwrap();
        let xi = template.effectiveness;
        let no_load = omega_tilde * gamma * rotation / xi;
        wheel.motor.no_load_speed = no_load;
        template.motor.no_load_speed = no_load;
        let switch = critical_switch(omega_tilde, beta).unwrap() / gamma;
        template.switch_time = Some(switch);

        let theta_pred = g_theta_phys(&template).unwrap();
        let t_pred = g_h_phys(&template).unwrap();

        let tail_form = TailParams {
            body_mass,
            tail_mass: wheel_mass,
            pivot_offset,
            tail_length: 0.0,
            body_inertia,
            tail_inertia: wheel_inertia,
            stroke: Stroke::Unbounded,
            motor: wheel.motor,
            switch_time: Some(switch),
            task: TaskSpec {
                body_rotation: rotation,
                horizon: t_pred,
            },
        };
        let traj = simulate_tail_phys(
            &tail_form,
            &TailController::BangBang(BangBangSchedule {
                switch_time: switch,
            }),
            None,
        )
        .unwrap();
        assert!(traj.status.is_halted(), "wheel maneuver must halt");
        let end = traj.final_sample();
        worst_angle = worst_angle.max((end.theta_b - theta_pred).abs());
        worst_time = worst_time.max((traj.status.time() - t_pred).abs() / t_pred);
    }
    (worst_angle, worst_time)
}
