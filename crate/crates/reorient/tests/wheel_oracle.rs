//! Wheeled bodies reduce to the template exactly: the axle coupling
//! vanishes, so the full two-body simulation and the closed-form
//! template maneuver must agree to integration accuracy.

mod common;

use common::wheel_agreement;

const ANGLE_TOL_RAD: f64 = 1e-6;
const TIME_TOL_REL: f64 = 1e-6;

#[test]
fn simulated_wheel_bodies_match_template_predictions() {
    let (worst_angle, worst_time) = wheel_agreement(0x4EE1_0001, 20);
    assert!(
        worst_angle < ANGLE_TOL_RAD,
        "worst angle disagreement {worst_angle} rad exceeds {ANGLE_TOL_RAD}"
    );
    assert!(
        worst_time < TIME_TOL_REL,
        "worst relative time disagreement {worst_time} exceeds {TIME_TOL_REL}"
    );
}
