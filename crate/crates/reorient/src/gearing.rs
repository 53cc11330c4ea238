//! Gearing selection for the switched template: the critical switch time
//! that exactly spends the rotation budget, the no-load speed minimizing
//! maneuver time, and the derived design constants k_p, k_t, k_s.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{GearingError, ParamError};
use crate::format::sig;
use crate::numerics::bisect;
use crate::template::{accel_state, g_h_tilde, g_theta_tilde, gamma_of};
use crate::types::TemplateParams;

/// Bisection width for the critical switch (dimensionless time).
const SWITCH_TOL: f64 = 1e-12;
/// Bisection width for the optimal no-load speed.
const OMEGA_TOL: f64 = 1e-12;
/// Coarse-scan points bracketing the global minimum of t_h(omega).
const SCAN_POINTS: usize = 200;
/// Search window for the normalized no-load speed.
const OMEGA_LO: f64 = 0.05;
const OMEGA_HI: f64 = 5.0;

/// Design constants evaluated at one (omega, beta) point with critical
/// switching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GearingConstants {
    /// Torque cap fraction the constants were evaluated at.
    pub beta: f64,
    /// Normalized no-load speed (the optimum for `optimize_gearing`).
    pub omega_tilde_star: f64,
    /// Critical dimensionless switch time at that speed.
    pub k_t: f64,
    /// Dimensionless maneuver time at the critical switch.
    pub t_h_star: f64,
    /// Power constant t_h^3/4: minimum peak power is
    /// k_p I_d theta_bf^2 / (xi t_f^3).
    pub k_p: f64,
    /// Speed constant omega * t_h: the matched no-load speed is
    /// k_s theta_bf / (xi t_f).
    pub k_s: f64,
    /// Fraction of the maneuver spent accelerating, k_t / t_h.
    pub switch_fraction: f64,
    /// Body angle fraction already covered at the switch.
    pub switch_angle: f64,
}

fn check_omega(omega: f64) -> Result<(), GearingError> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(ParamError::NotPositive {
            name: "omega_tilde",
            value: omega,
        }
        .into())
    }
}

fn check_beta(beta: f64) -> Result<(), GearingError> {
    if beta.is_finite() && beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(ParamError::OutOfRange {
            name: "beta",
            value: beta,
            range: "(0, 1]",
        }
        .into())
    }
}

/// Critical switch time: the unique switch for which the total rotation
/// lands exactly on the budget (g_theta = 1). The rotation grows without
/// bound in the switch time, so a doubling bracket always closes.
pub fn critical_switch(omega: f64, beta: f64) -> Result<f64, GearingError> {
    check_omega(omega)?;
    check_beta(beta)?;
    let mut hi = 1.0;
    let mut doublings = 0;
    while g_theta_tilde(omega, beta, hi) < 1.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 64 {
            return Err(GearingError::BracketExhausted { max: hi });
        }
    }
    Ok(bisect(
        |ts| g_theta_tilde(omega, beta, ts) - 1.0,
        0.0,
        hi,
        SWITCH_TOL,
    ))
}

/// Constants at a queried no-load speed with critical switching.
pub fn constants_at(omega: f64, beta: f64) -> Result<GearingConstants, GearingError> {
    let k_t = critical_switch(omega, beta)?;
    let t_h = g_h_tilde(omega, beta, k_t);
    Ok(GearingConstants {
        beta,
        omega_tilde_star: omega,
        k_t,
        t_h_star: t_h,
        k_p: t_h.powi(3) / 4.0,
        k_s: omega * t_h,
        switch_fraction: k_t / t_h,
        switch_angle: accel_state(omega, beta, k_t).theta,
    })
}

/// Minimize the maneuver time over the no-load speed: a coarse scan over
/// [0.05, 5] brackets the minimum, then bisection on the slope pins it.
/// The minimum is flat, so comparing t_h values directly loses the
/// optimum's location in roundoff several digits early; the slope's sign
/// stays reliable far closer in.
pub fn optimize_gearing(beta: f64) -> Result<GearingConstants, GearingError> {
    check_beta(beta)?;
    let t_h_of = |omega: f64| {
        let ts = critical_switch(omega, beta).expect("omega inside scan window");
        g_h_tilde(omega, beta, ts)
    };
    let step = (OMEGA_HI - OMEGA_LO) / (SCAN_POINTS - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..SCAN_POINTS {
        let t = t_h_of(OMEGA_LO + i as f64 * step);
        if t < best {
            best = t;
            best_i = i;
        }
    }
    let lo = OMEGA_LO + step * best_i.saturating_sub(1) as f64;
    let hi = (OMEGA_LO + step * (best_i + 1) as f64).min(OMEGA_HI);
    // Fourth-order central difference: truncation is negligible at this
    // stencil width while roundoff stays near 1e-11.
    let slope = |omega: f64| {
        let h = 1e-4;
        (t_h_of(omega - 2.0 * h) - 8.0 * t_h_of(omega - h) + 8.0 * t_h_of(omega + h)
            - t_h_of(omega + 2.0 * h))
            / (12.0 * h)
    };
    let omega = bisect(slope, lo, hi, OMEGA_TOL);
    constants_at(omega, beta)
}

/// Cached full-torque optimum, shared by the anchoring-error protocol.
pub fn optimal_full_torque() -> &'static GearingConstants {
    static CACHE: OnceLock<GearingConstants> = OnceLock::new();
    CACHE.get_or_init(|| optimize_gearing(1.0).expect("beta = 1 is valid"))
}

/// Per-beta optimal constants over a grid.
pub fn beta_sweep(betas: &[f64]) -> Result<Vec<GearingConstants>, GearingError> {
    betas.iter().map(|&b| optimize_gearing(b)).collect()
}

/// CSV export of a beta sweep.
pub fn beta_sweep_csv(rows: &[GearingConstants]) -> String {
    let mut out = String::from("beta,switch_fraction,k_s,k_p,theta_s_tilde\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig(r.beta, 10),
            sig(r.switch_fraction, 10),
            sig(r.k_s, 10),
            sig(r.k_p, 10),
            sig(r.switch_angle, 10),
        ));
    }
    out
}

/// A template's dimensionless switch time: gamma t_s when given,
/// otherwise the critical switch for its gearing.
pub fn resolved_switch_tilde(p: &TemplateParams) -> Result<f64, GearingError> {
    let gamma = gamma_of(p)?;
    match p.switch_time {
        Some(ts) => Ok(gamma * ts),
        None => {
            let omega = p.effectiveness * p.motor.no_load_speed / (gamma * p.task.body_rotation);
            critical_switch(omega, p.motor.torque_fraction)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_switch_lands_on_unit_rotation() {
        for &(w, b) in &[(0.3, 1.0), (0.74, 1.0), (1.5, 0.33), (0.61, 0.5)] {
            let ts = critical_switch(w, b).unwrap();
            assert!((g_theta_tilde(w, b, ts) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tiny_speed_switch_approaches_inverse_omega() {
        // With omega << 1 braking is instant, so the switch must spend
        // the whole budget: ts ~ 1/omega.
        let ts = critical_switch(0.01, 1.0).unwrap();
        assert!((ts - 100.0).abs() / 100.0 < 0.01, "ts = {ts}");
    }

    #[test]
    fn full_torque_optimum_matches_frozen_values() {
        let g = optimize_gearing(1.0).unwrap();
        assert!((g.omega_tilde_star - 0.7361400837).abs() < 1e-6);
        assert!((g.k_t - 1.6287240278).abs() < 1e-8);
        assert!((g.t_h_star - 2.1437963357).abs() < 1e-8);
        assert!((g.k_p - 2.4631484195).abs() < 1e-8);
        assert!((g.k_s - 1.5781344141).abs() < 1e-7);
        assert!((g.switch_fraction - 0.7597382273).abs() < 1e-8);
        assert!((g.switch_angle - 0.8198036704).abs() < 1e-8);
    }

    #[test]
    fn optimality_certificate() {
        let g = optimize_gearing(1.0).unwrap();
        let t_h = |w: f64| {
            let ts = critical_switch(w, 1.0).unwrap();
            g_h_tilde(w, 1.0, ts)
        };
        for d in [1e-3, 1e-2] {
            assert!(t_h(g.omega_tilde_star + d) >= g.t_h_star);
            assert!(t_h(g.omega_tilde_star - d) >= g.t_h_star);
        }
    }

    #[test]
    fn reduced_torque_optima_match_frozen_values() {
        let g = optimize_gearing(0.5).unwrap();
        assert!((g.omega_tilde_star - 0.61576736).abs() < 1e-6);
        assert!((g.k_t - 1.72416460).abs() < 1e-7);
        assert!((g.t_h_star - 2.47158159).abs() < 1e-7);
        assert!((g.k_p - 3.77454723).abs() < 1e-7);
    }

    #[test]
    fn legacy_gearing_constants() {
        // Suboptimal drive evaluated at omega = 1, beta = 0.33.
        let g = constants_at(1.0, 0.33).unwrap();
        assert!((g.k_t - 1.7407765596).abs() < 1e-8);
        assert!((g.k_p - 10.5501609670).abs() < 1e-7);
    }

    #[test]
    fn constants_at_optimum_reproduce_optimize() {
        let opt = optimize_gearing(1.0).unwrap();
        let at = constants_at(opt.omega_tilde_star, 1.0).unwrap();
        assert!((at.k_p - opt.k_p).abs() < 1e-12);
        assert!((at.k_t - opt.k_t).abs() < 1e-12);
    }

    #[test]
    fn sweep_is_monotone_in_beta_and_csv_is_stable() {
        let betas = [1.0, 0.5, 0.33, 0.25, 0.1];
        let rows = beta_sweep(&betas).unwrap();
        for pair in rows.windows(2) {
            assert!(
                pair[1].k_p > pair[0].k_p,
                "k_p must grow as the torque cap tightens"
            );
        }
        let csv = beta_sweep_csv(&rows);
        assert!(csv.starts_with("beta,switch_fraction,k_s,k_p,theta_s_tilde\n"));
        assert_eq!(csv.lines().count(), betas.len() + 1);
    }

    #[test]
    fn random_speeds_never_beat_the_optimum() {
        let opt = optimize_gearing(1.0).unwrap();
        // Deterministic pseudo-random sweep of the window.
        let mut x = 0.123_456_789_f64;
        for _ in 0..100 {
            x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let w = 0.05 + 4.95 * x;
            let g = constants_at(w, 1.0).unwrap();
            assert!(g.k_p >= opt.k_p - 1e-9);
        }
    }
}
