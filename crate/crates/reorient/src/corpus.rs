//! Bundled survey of reorientation platforms and a regression harness
//! comparing this library's reductions against each platform's reported
//! values at the precision they were printed with.

use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::format::sig;
use crate::reductions::{reduce_limbs, reduce_tail, reduce_wheel};
use crate::types::{
    units, Limb, LimbParams, MotorModel, Stroke, TailParams, TaskSpec, WheelParams,
};

/// A value as printed in a survey, with the number of significant
/// figures it was printed to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigValue {
    pub value: f64,
    pub sig_figs: u32,
}

/// Reported reduction results for one platform. Absent columns were not
/// published.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpectedColumns {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effectiveness: Option<SigValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<SigValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub driven_inertia_kgm2: Option<SigValue>,
    /// Reported template angle error over the platform's maneuver (%).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_error_pct: Option<f64>,
    /// Reported template halt-time error (%).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_error_pct: Option<f64>,
}

/// Which morphology the record's appendage fields describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppendageKind {
    Tail,
    Limbs,
    Wheel,
}

impl AppendageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AppendageKind::Tail => "tail",
            AppendageKind::Limbs => "limbs",
            AppendageKind::Wheel => "wheel",
        }
    }
}

/// One surveyed platform, in the units the survey used (grams,
/// centimeters, RPM, degrees; inertias in kg m^2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotRecord {
    pub name: String,
    pub kind: AppendageKind,
    /// Free-text provenance note.
    pub note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body_length_cm: Option<f64>,
    pub body_mass_g: f64,
    pub body_inertia_kgm2: f64,
    /// Appendage mass; per limb for limbed records (g).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appendage_mass_g: Option<f64>,
    /// Body COM to pivot distance (cm); absent for limbed records,
    /// which carry per-limb offsets instead.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot_offset_cm: Option<f64>,
    /// Pivot to appendage COM distance (cm); absent for wheels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appendage_length_cm: Option<f64>,
    /// Appendage inertia about its own COM, or the wheel's spin
    /// inertia (kg m^2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appendage_inertia_kgm2: Option<f64>,
    /// Signed fore-aft hip offsets along the body axis, one per limb (cm).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limb_offsets_cm: Option<Vec<f64>>,
    /// Swing direction of each limb, +1 or -1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limb_phases: Option<Vec<i8>>,
    pub peak_power_w: f64,
    pub no_load_speed_rpm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stroke_deg: Option<f64>,
    #[serde(default)]
    pub continuous_rotation: bool,
    pub expected: ExpectedColumns,
}

/// The full survey.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub version: u32,
    pub robots: Vec<RobotRecord>,
}

static BUNDLED: OnceLock<Corpus> = OnceLock::new();

/// The corpus shipped with the crate.
pub fn bundled() -> &'static Corpus {
    BUNDLED.get_or_init(|| {
        from_json(include_str!("../data/corpus.json")).expect("bundled corpus parses")
    })
}

/// Parse a corpus from JSON.
pub fn from_json(text: &str) -> Result<Corpus, CorpusError> {
    Ok(serde_json::from_str(text)?)
}

impl Corpus {
    /// Look a platform up by name.
    pub fn find(&self, name: &str) -> Result<&RobotRecord, CorpusError> {
        self.robots
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| CorpusError::UnknownRobot {
                name: name.to_string(),
            })
    }
}

impl RobotRecord {
    fn require(&self, field: &'static str, value: Option<f64>) -> Result<f64, CorpusError> {
        value.ok_or_else(|| CorpusError::MissingField {
            name: self.name.clone(),
            field,
        })
    }

    fn require_kind(&self, expected: AppendageKind) -> Result<(), CorpusError> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(CorpusError::WrongKind {
                name: self.name.clone(),
                actual: self.kind.as_str(),
                expected: expected.as_str(),
            })
        }
    }

    fn motor(&self) -> MotorModel {
        MotorModel {
            peak_power: self.peak_power_w,
            no_load_speed: units::rpm_to_rad_s(self.no_load_speed_rpm),
            torque_fraction: 1.0,
        }
    }

    /// Appendage travel limit in radians, or [`Stroke::Unbounded`] for
    /// continuous-rotation appendages.
    pub fn stroke(&self) -> Result<Stroke, CorpusError> {
        if self.continuous_rotation {
            Ok(Stroke::Unbounded)
        } else {
            Ok(Stroke::Finite(units::deg_to_rad(
                self.require("stroke_deg", self.stroke_deg)?,
            )))
        }
    }

    /// Assemble tail dynamics parameters from the record.
    pub fn tail_params(&self, task: &TaskSpec) -> Result<TailParams, CorpusError> {
        self.require_kind(AppendageKind::Tail)?;
        Ok(TailParams {
            body_mass: units::grams_to_kg(self.body_mass_g),
            tail_mass: units::grams_to_kg(self.require("appendage_mass_g", self.appendage_mass_g)?),
            pivot_offset: units::cm_to_m(self.require("pivot_offset_cm", self.pivot_offset_cm)?),
            tail_length: units::cm_to_m(
                self.require("appendage_length_cm", self.appendage_length_cm)?,
            ),
            body_inertia: self.body_inertia_kgm2,
            tail_inertia: self.require("appendage_inertia_kgm2", self.appendage_inertia_kgm2)?,
            stroke: self.stroke()?,
            motor: self.motor(),
            switch_time: None,
            task: *task,
        })
    }

    /// Assemble reaction-wheel parameters from the record.
    pub fn wheel_params(&self, task: &TaskSpec) -> Result<WheelParams, CorpusError> {
        self.require_kind(AppendageKind::Wheel)?;
        Ok(WheelParams {
            body_mass: units::grams_to_kg(self.body_mass_g),
            wheel_mass: units::grams_to_kg(
                self.require("appendage_mass_g", self.appendage_mass_g)?,
            ),
            pivot_offset: units::cm_to_m(self.require("pivot_offset_cm", self.pivot_offset_cm)?),
            wheel_inertia: self.require("appendage_inertia_kgm2", self.appendage_inertia_kgm2)?,
            body_inertia: self.body_inertia_kgm2,
            motor: self.motor(),
            switch_time: None,
            task: *task,
        })
    }

    /// Assemble limbed-body parameters from the record. Missing phases
    /// default to all limbs swinging together.
    pub fn limb_params(&self, task: &TaskSpec) -> Result<LimbParams, CorpusError> {
        self.require_kind(AppendageKind::Limbs)?;
        let offsets = self
            .limb_offsets_cm
            .as_ref()
            .ok_or_else(|| CorpusError::MissingField {
                name: self.name.clone(),
                field: "limb_offsets_cm",
            })?;
        let phases: Vec<i8> = match &self.limb_phases {
            Some(p) => p.clone(),
            None => vec![1; offsets.len()],
        };
        if phases.len() != offsets.len() {
            return Err(CorpusError::MissingField {
                name: self.name.clone(),
                field: "limb_phases (one per offset)",
            });
        }
        let limbs = offsets
            .iter()
            .zip(&phases)
            .map(|(&offset, &phase)| Limb {
                offset: units::cm_to_m(offset),
                phase,
            })
            .collect();
        Ok(LimbParams {
            body_mass: units::grams_to_kg(self.body_mass_g),
            limb_mass: units::grams_to_kg(self.require("appendage_mass_g", self.appendage_mass_g)?),
            limb_length: units::cm_to_m(
                self.require("appendage_length_cm", self.appendage_length_cm)?,
            ),
            limb_inertia: self.require("appendage_inertia_kgm2", self.appendage_inertia_kgm2)?,
            body_inertia: self.body_inertia_kgm2,
            limbs,
            stroke: self.stroke()?,
            motor: self.motor(),
            switch_time: None,
            task: *task,
        })
    }
}

/// Whether a computed value agrees with a printed one to within half a
/// unit in the last printed significant figure (with a hair of slack so
/// exact half-unit gaps count as agreement).
pub fn matches_printed(computed: f64, published: f64, sig_figs: u32) -> bool {
    if published == 0.0 {
        return computed == 0.0;
    }
    let magnitude = published.abs().log10().floor() as i32;
    let last_digit = 10f64.powi(magnitude - sig_figs as i32 + 1);
    (computed - published).abs() <= 0.5 * last_digit * (1.0 + 1e-9)
}

/// One compared cell of the regression.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionRow {
    pub robot: String,
    pub column: &'static str,
    pub computed: f64,
    pub published: f64,
    pub sig_figs: u32,
    pub pass: bool,
}

/// All compared cells, in corpus order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionReport {
    pub rows: Vec<RegressionRow>,
}

impl RegressionReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&RegressionRow> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    /// Plain-text table, one row per compared cell.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(
            "robot          column                  computed    published  sig  result\n",
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<14} {:<15} {:>16} {:>12} {:>4}  {}",
                row.robot,
                row.column,
                sig(row.computed, 10),
                sig(row.published, row.sig_figs as usize),
                row.sig_figs,
                if row.pass { "ok" } else { "MISMATCH" }
            );
        }
        out
    }
}

fn push_row(
    rows: &mut Vec<RegressionRow>,
    robot: &str,
    column: &'static str,
    computed: f64,
    printed: Option<SigValue>,
) {
    if let Some(p) = printed {
        rows.push(RegressionRow {
            robot: robot.to_string(),
            column,
            computed,
            published: p.value,
            sig_figs: p.sig_figs,
            pass: matches_printed(computed, p.value, p.sig_figs),
        });
    }
}

/// Recompute every record's reduction and compare each published column
/// at its printed precision.
pub fn run_regression(corpus: &Corpus) -> Result<RegressionReport, CorpusError> {
    // The reductions do not depend on the task; any valid one serves.
    let task = TaskSpec {
        body_rotation: std::f64::consts::FRAC_PI_2,
        horizon: 1.0,
    };
    let mut rows = Vec::new();
    for record in &corpus.robots {
        let e = &record.expected;
        match record.kind {
            AppendageKind::Tail => {
                let reduction = reduce_tail(&record.tail_params(&task)?)?;
                let dim = reduction.dimensionless;
                push_row(&mut rows, &record.name, "effectiveness", dim.effectiveness, e.effectiveness);
                push_row(&mut rows, &record.name, "eta", dim.eta, e.eta);
                push_row(
                    &mut rows,
                    &record.name,
                    "driven_inertia",
                    reduction.template.driven_inertia,
                    e.driven_inertia_kgm2,
                );
            }
            AppendageKind::Wheel => {
                let template = reduce_wheel(&record.wheel_params(&task)?)?;
                push_row(&mut rows, &record.name, "effectiveness", template.effectiveness, e.effectiveness);
                push_row(
                    &mut rows,
                    &record.name,
                    "driven_inertia",
                    template.driven_inertia,
                    e.driven_inertia_kgm2,
                );
            }
            AppendageKind::Limbs => {
                let reduction = reduce_limbs(&record.limb_params(&task)?)?;
                push_row(
                    &mut rows,
                    &record.name,
                    "effectiveness",
                    reduction.template.effectiveness,
                    e.effectiveness,
                );
                push_row(
                    &mut rows,
                    &record.name,
                    "driven_inertia",
                    reduction.template.driven_inertia,
                    e.driven_inertia_kgm2,
                );
            }
        }
    }
    Ok(RegressionReport { rows })
}
