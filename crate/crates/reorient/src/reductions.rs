//! Morphological reductions: map tail, reaction-wheel, and synchronized
//! limb morphologies onto the single-body template, expose the exact
//! momentum connection they approximate, and quantify the kinematic
//! error of the constant-effectiveness approximation.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::ParamError;
use crate::types::{LimbParams, Stroke, TailParams, TemplateParams, WheelParams};

/// Dimensionless description of a tailed body: the two numbers that fix
/// its zero-momentum kinematics, plus the grouped moments they came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailDimensionless {
    /// Nominal effectiveness xi_t = K/(K + B), the connection magnitude
    /// where the tail is perpendicular to the pivot offset.
    pub effectiveness: f64,
    /// Nonlinearity eta = m_r l_b l_t / K: 0 for a centered pivot, larger
    /// when offset coupling bends the connection with configuration.
    pub eta: f64,
    /// Reduced mass m_r = m_b m_t / (m_b + m_t) (kg).
    pub reduced_mass: f64,
    /// Tail moment about the pivot, K = I_t + m_r l_t^2 (kg m^2).
    pub appendage_moi: f64,
    /// Body moment about the pivot, B = I_b + m_r l_b^2 (kg m^2).
    pub body_moi: f64,
}

/// A tail mapped onto the template, keeping the dimensionless pair that
/// measures how much the mapping forgets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReduction {
    pub template: TemplateParams,
    pub dimensionless: TailDimensionless,
}

/// A limb set mapped onto the template.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimbReduction {
    pub template: TemplateParams,
    /// Whether all limbs spin with the group (+1 phases).
    pub in_phase: bool,
    /// Mass coupled to each limb's swing: the reduced mass when the limb
    /// reactions cancel pairwise is unavailable, the full limb mass when
    /// anti-phase pairs pin the body COM.
    pub coupled_mass: f64,
    /// System inertia about the body COM with limbs folded in,
    /// I_p = I_b + m_t sum(l_i^2) (kg m^2).
    pub pivot_moi: f64,
}

/// Compute the dimensionless tail pair and check it lies in the domain
/// where the two-body mass matrix stays positive definite for every tail
/// angle: eta < sqrt((1 - xi)/xi), which also implies 2 xi eta < 1.
pub fn validate_tail_domain(p: &TailParams) -> Result<TailDimensionless, ParamError> {
    p.validate()?;
    let m_r = p.body_mass * p.tail_mass / (p.body_mass + p.tail_mass);
    let appendage_moi = p.tail_inertia + m_r * p.tail_length * p.tail_length;
    let body_moi = p.body_inertia + m_r * p.pivot_offset * p.pivot_offset;
    if !(appendage_moi > 0.0) {
        return Err(ParamError::NotPositive {
            name: "tail moment about pivot",
            value: appendage_moi,
        });
    }
    let xi = appendage_moi / (appendage_moi + body_moi);
    let eta = m_r * p.pivot_offset * p.tail_length / appendage_moi;
    let limit = ((1.0 - xi) / xi).sqrt();
    if !(eta < limit) {
        return Err(ParamError::TailDomain { xi, eta, limit });
    }
    Ok(TailDimensionless {
        effectiveness: xi,
        eta,
        reduced_mass: m_r,
        appendage_moi,
        body_moi,
    })
}

/// Reduce a tailed body to template parameters: constant effectiveness
/// xi_t and the stroke-averaged driven inertia B(1 - 2 eta / pi).
pub fn reduce_tail(p: &TailParams) -> Result<TailReduction, ParamError> {
    let dim = validate_tail_domain(p)?;
    let template = TemplateParams {
        effectiveness: dim.effectiveness,
        driven_inertia: driven_inertia_average(&dim),
        stroke: p.stroke,
        motor: p.motor,
        switch_time: p.switch_time,
        task: p.task,
    };
    template.validate()?;
    Ok(TailReduction {
        template,
        dimensionless: dim,
    })
}

/// Reduce a reaction wheel to template parameters. The wheel's inertia
/// is configuration independent, so the reduction is exact: constant
/// effectiveness I_w/(I_w + B) and driven inertia B, with no stroke
/// limit.
pub fn reduce_wheel(p: &WheelParams) -> Result<TemplateParams, ParamError> {
    p.validate()?;
    let m_r = p.body_mass * p.wheel_mass / (p.body_mass + p.wheel_mass);
    let body_moi = p.body_inertia + m_r * p.pivot_offset * p.pivot_offset;
    let template = TemplateParams {
        effectiveness: p.wheel_inertia / (p.wheel_inertia + body_moi),
        driven_inertia: body_moi,
        stroke: Stroke::Unbounded,
        motor: p.motor,
        switch_time: p.switch_time,
        task: p.task,
    };
    template.validate()?;
    Ok(template)
}

/// Reduce a synchronized limb set. Requires balanced pivots
/// (sum of offsets = 0) and uniform phasing (all +1, or a balanced
/// half-and-half split summing to 0); these make the system COM
/// stationary in the body frame so the reduction is configuration
/// independent and exact.
pub fn reduce_limbs(p: &LimbParams) -> Result<LimbReduction, ParamError> {
    p.validate()?;
    let independent = check_limb_independence(p);
    let n = p.limbs.len();
    let offset_sum: f64 = p.limbs.iter().map(|l| l.offset).sum();
    let offset_scale = p.limbs.iter().map(|l| l.offset.abs()).sum::<f64>() + p.limb_length;
    if offset_sum.abs() > 1e-12 * offset_scale {
        return Err(ParamError::AsymmetricPivots {
            offset_sum,
            independent,
        });
    }
    let phase_sum: i32 = p.limbs.iter().map(|l| i32::from(l.phase)).sum();
    let in_phase = phase_sum == n as i32;
    if !in_phase && phase_sum != 0 {
        return Err(ParamError::UnsupportedPhasing {
            phase_sum,
            limb_count: n,
            independent,
        });
    }
    // In phase, the limb set reacts against the body alone, so each limb
    // couples through the body-system reduced mass; anti-phase pairs
    // cancel their COM motion and each limb swings its full mass.
    let coupled_mass = if in_phase {
        p.body_mass * p.limb_mass / p.total_mass()
    } else {
        p.limb_mass
    };
    let sum_sq: f64 = p.limbs.iter().map(|l| l.offset * l.offset).sum();
    let pivot_moi = p.body_inertia + p.limb_mass * sum_sq;
    let per_limb = p.limb_inertia + coupled_mass * p.limb_length * p.limb_length;
    let group = n as f64 * per_limb;
    let template = TemplateParams {
        effectiveness: group / (pivot_moi + group),
        driven_inertia: pivot_moi,
        stroke: p.stroke,
        motor: p.motor,
        switch_time: p.switch_time,
        task: p.task,
    };
    template.validate()?;
    Ok(LimbReduction {
        template,
        in_phase,
        coupled_mass,
        pivot_moi,
    })
}

/// General configuration-independence criterion for a limb set:
/// sum_i m_i l_i (c + s_i L_i) = 0 with c = -(1/m_tot) sum_i m_i s_i L_i,
/// where l_i is the pivot offset and L_i the limb length. True means the
/// system COM stays fixed in the body frame through the synchronized
/// stroke, so a constant-effectiveness template captures the dynamics
/// exactly.
pub fn check_limb_independence(p: &LimbParams) -> bool {
    let m_tot = p.total_mass();
    let c = -p
        .limbs
        .iter()
        .map(|l| p.limb_mass * f64::from(l.phase) * p.limb_length)
        .sum::<f64>()
        / m_tot;
    let residual: f64 = p
        .limbs
        .iter()
        .map(|l| p.limb_mass * l.offset * (c + f64::from(l.phase) * p.limb_length))
        .sum();
    let scale = p.limb_mass
        * p.limb_length
        * (p.limbs.iter().map(|l| l.offset.abs()).sum::<f64>() + p.limb_length);
    residual.abs() <= 1e-12 * scale
}

/// Zero-momentum connection of the tail anchor: the instantaneous body
/// rotation per unit tail rotation,
/// dtheta_b/dtheta_r = -xi (1 - eta cos theta_r)/(1 - 2 xi eta cos theta_r).
/// Constant -xi when eta = 0 and exactly -1/2 when xi = 1/2.
pub fn tail_connection(xi: f64, eta: f64, theta_r: f64) -> f64 {
    let c = theta_r.cos();
    -xi * (1.0 - eta * c) / (1.0 - 2.0 * xi * eta * c)
}

/// The same connection evaluated from raw physical parameters,
/// -(K - D)/(K + B - 2D) with D = m_r l_b l_t cos theta_r. Kept as an
/// independent algebraic route for cross-checking.
pub fn tail_connection_raw(p: &TailParams, theta_r: f64) -> Result<f64, ParamError> {
    let dim = validate_tail_domain(p)?;
    let d = dim.reduced_mass * p.pivot_offset * p.tail_length * theta_r.cos();
    Ok(-(dim.appendage_moi - d) / (dim.appendage_moi + dim.body_moi - 2.0 * d))
}

/// Antiderivative kernel for the connection integral: the tan-half-angle
/// arctangent continued across odd multiples of pi by counting turns,
/// R(theta) = atan(k tan(phi/2)) + pi n with theta = phi + 2 pi n.
fn turn_corrected_arctan(theta: f64, k: f64) -> f64 {
    let n = (theta / TAU).round_ties_even();
    let phi = theta - TAU * n;
    (k * (0.5 * phi).tan()).atan() + PI * n
}

/// Exact body rotation over a tail sweep from `from` to `to` (rad),
/// the closed-form integral of `tail_connection`:
/// -(to - from)/2 + (1 - 2 xi)/sqrt(1 - (2 xi eta)^2) * (R(to) - R(from)).
pub fn integrate_connection(xi: f64, eta: f64, from: f64, to: f64) -> f64 {
    if eta == 0.0 {
        return -xi * (to - from);
    }
    let a = 2.0 * xi * eta;
    let k = ((1.0 + a) / (1.0 - a)).sqrt();
    let prefactor = (1.0 - 2.0 * xi) / (1.0 - a * a).sqrt();
    -0.5 * (to - from) + prefactor * (turn_corrected_arctan(to, k) - turn_corrected_arctan(from, k))
}

/// Relative error of the constant-effectiveness approximation over a
/// sweep: e_c = (theta_bf - xi s_r)/theta_bf, where theta_bf is the
/// exact body rotation magnitude and s_r the sweep length. Zero when
/// eta = 0; positive when the true rotation beats the approximation.
pub fn kinematic_error(xi: f64, eta: f64, from: f64, to: f64) -> Result<f64, ParamError> {
    let sweep = (to - from).abs();
    let theta_bf = integrate_connection(xi, eta, from, to).abs();
    if sweep == 0.0 || theta_bf == 0.0 {
        return Err(ParamError::DegenerateSweep);
    }
    Ok((theta_bf - xi * sweep) / theta_bf)
}

/// Choice of the constant effectiveness standing in for the
/// configuration-dependent connection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EffectivenessStrategy {
    /// The nominal xi_t = K/(K + B): exact where the tail is
    /// perpendicular to the offset. The library default.
    Nominal,
    /// Connection magnitude at full extension (theta_r = pi),
    /// xi (1 + eta)/(1 + 2 xi eta).
    AtExtension,
    /// Exact average over a sweep: |integrate_connection| / sweep.
    StrokeAveraged { from: f64, to: f64 },
}

/// Evaluate an effectiveness strategy on the dimensionless tail pair.
pub fn tail_effectiveness(
    dim: &TailDimensionless,
    strategy: EffectivenessStrategy,
) -> Result<f64, ParamError> {
    let (xi, eta) = (dim.effectiveness, dim.eta);
    match strategy {
        EffectivenessStrategy::Nominal => Ok(xi),
        EffectivenessStrategy::AtExtension => Ok(-tail_connection(xi, eta, PI)),
        EffectivenessStrategy::StrokeAveraged { from, to } => {
            let sweep = (to - from).abs();
            if sweep == 0.0 {
                return Err(ParamError::DegenerateSweep);
            }
            Ok(integrate_connection(xi, eta, from, to).abs() / sweep)
        }
    }
}

/// Configuration-dependent driven inertia of the tail anchor,
/// I_d(theta_r) = (K B - D^2)/(K - D) with D = m_r l_b l_t cos theta_r:
/// the torque per unit body acceleration felt through the exact
/// connection. Diverges where the connection vanishes (K = D).
pub fn driven_inertia_profile(p: &TailParams, theta_r: f64) -> Result<f64, ParamError> {
    let dim = validate_tail_domain(p)?;
    let d = dim.reduced_mass * p.pivot_offset * p.tail_length * theta_r.cos();
    Ok((dim.appendage_moi * dim.body_moi - d * d) / (dim.appendage_moi - d))
}

/// Stroke-averaged driven inertia adopted by the reduction,
/// B(1 - 2 eta / pi): the mean of the xi = 1/2 profile B(1 + eta cos)
/// over a half rotation centered on full extension.
pub fn driven_inertia_average(dim: &TailDimensionless) -> f64 {
    dim.body_moi * (1.0 - 2.0 * dim.eta / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Limb, MotorModel, TaskSpec};
    use std::f64::consts::FRAC_PI_2;

    fn motor() -> MotorModel {
        MotorModel {
            peak_power: 342.0,
            no_load_speed: 37.28,
            torque_fraction: 1.0,
        }
    }

    fn task() -> TaskSpec {
        TaskSpec {
            body_rotation: FRAC_PI_2,
            horizon: 0.34,
        }
    }

    fn rhex_tail() -> TailParams {
        TailParams {
            body_mass: 8.1,
            tail_mass: 0.6,
            pivot_offset: 0.08,
            tail_length: 0.59,
            body_inertia: 0.15,
            tail_inertia: 0.0,
            stroke: Stroke::Finite(172.5f64.to_radians()),
            motor: motor(),
            switch_time: None,
            task: task(),
        }
    }

    fn tailbot_tail() -> TailParams {
        TailParams {
            body_mass: 0.160,
            tail_mass: 0.017,
            pivot_offset: 0.045,
            tail_length: 0.103,
            body_inertia: 154e-6,
            tail_inertia: 0.0,
            stroke: Stroke::Finite(255f64.to_radians()),
            motor: MotorModel {
                peak_power: 4.0,
                no_load_speed: 3000.0 * std::f64::consts::TAU / 60.0,
                torque_fraction: 1.0,
            },
            switch_time: None,
            task: task(),
        }
    }

    #[test]
    fn rhex_tail_reduces_to_frozen_values() {
        let r = reduce_tail(&rhex_tail()).unwrap();
        let d = r.dimensionless;
        assert!((d.reduced_mass - 0.558620689655).abs() < 1e-10);
        assert!((d.appendage_moi - 0.194455862069).abs() < 1e-10);
        assert!((d.body_moi - 0.153575172414).abs() < 1e-10);
        assert!((d.effectiveness - 0.558731385429).abs() < 1e-10);
        assert!((d.eta - 0.135593220339).abs() < 1e-10);
        assert!((r.template.driven_inertia - 0.140318360034).abs() < 1e-10);
    }

    #[test]
    fn tailbot_matches_published_digits() {
        let r = reduce_tail(&tailbot_tail()).unwrap();
        assert!((r.dimensionless.effectiveness - 0.4683).abs() < 0.5e-4);
        assert!((r.dimensionless.eta - 0.437).abs() < 0.5e-3);
    }

    #[test]
    fn centered_pivot_is_linear() {
        let mut p = rhex_tail();
        p.pivot_offset = 0.0;
        let r = reduce_tail(&p).unwrap();
        assert_eq!(r.dimensionless.eta, 0.0);
        assert_eq!(r.template.driven_inertia, p.body_inertia);
        let xi = r.dimensionless.effectiveness;
        assert!((tail_connection(xi, 0.0, 1.3) + xi).abs() < 1e-15);
        assert!((integrate_connection(xi, 0.0, 0.3, 2.7) + xi * 2.4).abs() < 1e-15);
    }

    #[test]
    fn connection_forms_agree() {
        let p = rhex_tail();
        let d = validate_tail_domain(&p).unwrap();
        for i in 0..100 {
            let theta = -4.0 + 0.09 * i as f64;
            let normalized = tail_connection(d.effectiveness, d.eta, theta);
            let raw = tail_connection_raw(&p, theta).unwrap();
            assert!((normalized - raw).abs() < 1e-12);
        }
    }

    #[test]
    fn half_effectiveness_halves_any_sweep() {
        // Construct xi = 1/2 by putting all tail moment in m_r l_t^2
        // with l_t chosen so K = B.
        let mut p = rhex_tail();
        let m_r = p.body_mass * p.tail_mass / (p.body_mass + p.tail_mass);
        let b = p.body_inertia + m_r * p.pivot_offset * p.pivot_offset;
        p.tail_inertia = 0.0;
        p.tail_length = (b / m_r).sqrt();
        let d = validate_tail_domain(&p).unwrap();
        assert!((d.effectiveness - 0.5).abs() < 1e-15);
        for i in 0..20 {
            let theta = 0.3 * i as f64;
            assert!((tail_connection(0.5, d.eta, theta) + 0.5).abs() < 1e-15);
        }
        let sweep = integrate_connection(0.5, d.eta, FRAC_PI_2, 3.0 * FRAC_PI_2);
        assert!((sweep + FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn rhex_half_sweep_rotation_and_kinematic_error() {
        let d = validate_tail_domain(&rhex_tail()).unwrap();
        let sweep =
            integrate_connection(d.effectiveness, d.eta, FRAC_PI_2, 3.0 * FRAC_PI_2);
        assert!((sweep - (-1.73938611192)).abs() < 1e-9, "sweep = {sweep}");
        let e_c =
            kinematic_error(d.effectiveness, d.eta, 3.0 * FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((e_c - (-0.00915282912814)).abs() < 1e-9, "e_c = {e_c}");
        assert!(e_c.abs() < 0.01);
    }

    #[test]
    fn connection_integral_is_continuous_across_odd_pi() {
        let (xi, eta) = (0.5587, 0.437);
        for center in [PI, 3.0 * PI, -PI] {
            let step = 1e-6;
            let below = integrate_connection(xi, eta, 0.0, center - step);
            let at = integrate_connection(xi, eta, 0.0, center);
            let above = integrate_connection(xi, eta, 0.0, center + step);
            assert!((at - below).abs() < 1e-5);
            assert!((above - at).abs() < 1e-5);
            // And the derivative matches the connection there.
            let fd = (above - below) / (2.0 * step);
            assert!((fd - tail_connection(xi, eta, center)).abs() < 1e-6);
        }
    }

    #[test]
    fn assembled_tails_always_lie_inside_the_domain() {
        // (m_r l_b l_t)^2 <= (I_b + m_r l_b^2)(I_t + m_r l_t^2) for any
        // nonnegative inertias, so every assembled tail satisfies
        // eta < sqrt((1 - xi)/xi) strictly; the bound only degenerates
        // when both spin inertias vanish. Push toward that corner and
        // check the margin shrinks without inverting.
        let mut p = rhex_tail();
        p.tail_inertia = 0.0;
        let mut last_ratio = 0.0;
        for body_inertia in [0.15, 1e-3, 1e-6, 1e-9, 1e-12] {
            p.body_inertia = body_inertia;
            let d = validate_tail_domain(&p).unwrap();
            let limit = ((1.0 - d.effectiveness) / d.effectiveness).sqrt();
            assert!(d.eta < limit);
            last_ratio = d.eta / limit;
        }
        assert!(last_ratio > 0.999_999, "ratio = {last_ratio}");
    }

    #[test]
    fn effectiveness_strategies_bracket_the_sweep_average() {
        let d = validate_tail_domain(&rhex_tail()).unwrap();
        let nominal = tail_effectiveness(&d, EffectivenessStrategy::Nominal).unwrap();
        let extended = tail_effectiveness(&d, EffectivenessStrategy::AtExtension).unwrap();
        let averaged = tail_effectiveness(
            &d,
            EffectivenessStrategy::StrokeAveraged {
                from: FRAC_PI_2,
                to: 3.0 * FRAC_PI_2,
            },
        )
        .unwrap();
        assert!((nominal - d.effectiveness).abs() < 1e-15);
        // With xi > 1/2 the connection weakens toward extension, so the
        // sweep average sits between the extension value and the nominal
        // one; this ordering flips for xi < 1/2.
        assert!(extended < averaged);
        assert!(averaged < nominal);
        let xi = d.effectiveness;
        let eta = d.eta;
        assert!((extended - xi * (1.0 + eta) / (1.0 + 2.0 * xi * eta)).abs() < 1e-15);
    }

    #[test]
    fn inertia_profile_identities() {
        // l_b = 0: profile is I_b at every angle.
        let mut p = rhex_tail();
        p.pivot_offset = 0.0;
        for i in 0..10 {
            let theta = 0.7 * i as f64;
            let prof = driven_inertia_profile(&p, theta).unwrap();
            assert!((prof - p.body_inertia).abs() < 1e-15);
        }
        // xi = 1/2: profile reduces to B (1 + eta cos) exactly.
        let mut q = rhex_tail();
        let m_r = q.body_mass * q.tail_mass / (q.body_mass + q.tail_mass);
        let b = q.body_inertia + m_r * q.pivot_offset * q.pivot_offset;
        q.tail_inertia = 0.0;
        q.tail_length = (b / m_r).sqrt();
        let d = validate_tail_domain(&q).unwrap();
        for i in 0..50 {
            let theta = -3.0 + 0.13 * i as f64;
            let prof = driven_inertia_profile(&q, theta).unwrap();
            let compact = d.body_moi * (1.0 + d.eta * theta.cos());
            assert!((prof - compact).abs() < 1e-12 * prof);
        }
        // And its mean over the centered half sweep is the adopted
        // average B(1 - 2 eta / pi): trapezoid the compact form.
        let n = 200_000;
        let h = PI / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let theta = FRAC_PI_2 + h * i as f64;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * driven_inertia_profile(&q, theta).unwrap();
        }
        let mean = acc * h / PI;
        let adopted = driven_inertia_average(&d);
        assert!((mean - adopted).abs() < 1e-9 * adopted);
    }

    #[test]
    fn wheel_reduction_matches_tail_with_zero_length() {
        let w = WheelParams {
            body_mass: 0.040,
            wheel_mass: 0.005,
            pivot_offset: 0.025,
            wheel_inertia: 12e-6,
            body_inertia: 17e-6,
            motor: MotorModel {
                peak_power: 0.34,
                no_load_speed: 916.0 * std::f64::consts::TAU / 60.0,
                torque_fraction: 1.0,
            },
            switch_time: None,
            task: task(),
        };
        let t = reduce_wheel(&w).unwrap();
        let b = 17e-6 + (0.040 * 0.005 / 0.045) * 0.025 * 0.025;
        assert!((t.driven_inertia - b).abs() < 1e-18);
        assert!((t.driven_inertia - 19.7778e-6).abs() < 1e-9);
        assert!((t.effectiveness - 12e-6 / (12e-6 + b)).abs() < 1e-12);
        assert_eq!(t.stroke, Stroke::Unbounded);

        // Same numbers through the tail route with l_t = 0 and the wheel
        // spin inertia standing in for I_t.
        let tp = TailParams {
            body_mass: w.body_mass,
            tail_mass: w.wheel_mass,
            pivot_offset: w.pivot_offset,
            tail_length: 0.0,
            body_inertia: w.body_inertia,
            tail_inertia: w.wheel_inertia,
            stroke: Stroke::Finite(1.0),
            motor: w.motor,
            switch_time: None,
            task: w.task,
        };
        let r = reduce_tail(&tp).unwrap();
        assert!((r.template.effectiveness - t.effectiveness).abs() < 1e-15);
        assert!((r.template.driven_inertia - t.driven_inertia).abs() < 1e-15);
        assert_eq!(r.dimensionless.eta, 0.0);
    }

    fn rhex_limbs(phases: [i8; 6]) -> LimbParams {
        let offsets = [0.25, 0.25, 0.0, 0.0, -0.25, -0.25];
        LimbParams {
            body_mass: 7.5,
            limb_mass: 0.063,
            limb_length: 0.10,
            limb_inertia: 0.46e-3,
            body_inertia: 0.15,
            limbs: offsets
                .iter()
                .zip(phases)
                .map(|(&offset, phase)| Limb { offset, phase })
                .collect(),
            stroke: Stroke::Unbounded,
            motor: MotorModel {
                peak_power: 2052.0,
                no_load_speed: 434.0 * std::f64::consts::TAU / 60.0,
                torque_fraction: 1.0,
            },
            switch_time: None,
            task: task(),
        }
    }

    #[test]
    fn limb_reduction_frozen_values_and_phasing_gain() {
        let in_phase = reduce_limbs(&rhex_limbs([1; 6])).unwrap();
        assert!(in_phase.in_phase);
        assert!((in_phase.pivot_moi - 0.16575).abs() < 1e-12);
        assert!((in_phase.template.effectiveness - 0.03694544037).abs() < 1e-9);

        let anti = reduce_limbs(&rhex_limbs([1, -1, 1, -1, 1, -1])).unwrap();
        assert!(!anti.in_phase);
        assert!((anti.template.effectiveness - 0.03795925474).abs() < 1e-9);
        let ratio = anti.template.effectiveness / in_phase.template.effectiveness;
        assert!((ratio - 1.027440852).abs() < 1e-8);
        assert!((1.02..1.05).contains(&ratio));
    }

    #[test]
    fn single_centered_limb_equals_centered_tail() {
        let mut p = rhex_limbs([1; 6]);
        p.limbs = vec![Limb {
            offset: 0.0,
            phase: 1,
        }];
        let limb = reduce_limbs(&p).unwrap();
        let tail = reduce_tail(&TailParams {
            body_mass: p.body_mass,
            tail_mass: p.limb_mass,
            pivot_offset: 0.0,
            tail_length: p.limb_length,
            body_inertia: p.body_inertia,
            tail_inertia: p.limb_inertia,
            stroke: Stroke::Finite(1.0),
            motor: p.motor,
            switch_time: None,
            task: p.task,
        })
        .unwrap();
        assert!((limb.template.effectiveness - tail.template.effectiveness).abs() < 1e-15);
        assert!((limb.template.driven_inertia - tail.template.driven_inertia).abs() < 1e-15);
    }

    #[test]
    fn independence_criterion_cases() {
        assert!(check_limb_independence(&rhex_limbs([1; 6])));
        assert!(check_limb_independence(&rhex_limbs([1, -1, 1, -1, 1, -1])));

        // Adding a limb at the COM preserves independence.
        let mut extended = rhex_limbs([1; 6]);
        extended.limbs.push(Limb {
            offset: 0.0,
            phase: 1,
        });
        assert!(check_limb_independence(&extended));

        // Asymmetric pivots break it.
        let mut bad = rhex_limbs([1; 6]);
        bad.limbs = vec![
            Limb {
                offset: 0.30,
                phase: 1,
            },
            Limb {
                offset: -0.10,
                phase: 1,
            },
        ];
        assert!(!check_limb_independence(&bad));
        match reduce_limbs(&bad) {
            Err(ParamError::AsymmetricPivots { independent, .. }) => assert!(!independent),
            other => panic!("expected pivot rejection, got {other:?}"),
        }
    }

    #[test]
    fn mixed_unbalanced_phasing_is_rejected() {
        match reduce_limbs(&rhex_limbs([1, 1, 1, 1, 1, -1])) {
            Err(ParamError::UnsupportedPhasing {
                phase_sum,
                limb_count,
                ..
            }) => {
                assert_eq!(phase_sum, 4);
                assert_eq!(limb_count, 6);
            }
            other => panic!("expected phasing rejection, got {other:?}"),
        }
    }

    #[test]
    fn connection_magnitude_bounded_by_unity() {
        // The bound |A| <= 1 holds on the extension half of the stroke
        // (cos theta_r <= 0) for every valid pair, and over the whole
        // circle whenever eta <= (1 - xi)/xi; folded configurations of
        // strongly coupled tails outside that band can exceed it.
        for i in 1..20 {
            let xi = i as f64 * 0.05;
            let limit = ((1.0 - xi) / xi).sqrt();
            for j in 0..10 {
                let eta = 0.95 * limit * j as f64 / 10.0;
                for k in 0..=30 {
                    let theta = FRAC_PI_2 + PI * k as f64 / 30.0;
                    assert!(tail_connection(xi, eta, theta).abs() <= 1.0 + 1e-12);
                }
                if eta <= (1.0 - xi) / xi {
                    for k in 0..=30 {
                        let theta = -PI + TAU * k as f64 / 30.0;
                        assert!(tail_connection(xi, eta, theta).abs() <= 1.0 + 1e-12);
                    }
                }
            }
        }
        // Direct witness that the blanket bound fails when the tail
        // folds toward the body: eta above (1 - xi)/xi at theta_r = 0.
        assert!(tail_connection(0.9, 0.3, 0.0).abs() > 1.0);
    }
}
