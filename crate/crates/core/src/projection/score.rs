//! Letter grade for energy per task on a logarithmic scale.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Grade {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Strict upper bound (kWh per task) of each grade.
pub const THRESHOLDS: [(Grade, f64); 7] = [
    (Grade::A, 1e-8),
    (Grade::B, 1e-7),
    (Grade::C, 1e-6),
    (Grade::D, 1e-5),
    (Grade::E, 1e-4),
    (Grade::F, 1e-3),
    (Grade::G, 1e-2),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcoScore {
    pub energy_kwh: f64,
    pub grade: Grade,
    /// Set when the energy is at or above the top threshold and the grade is clamped to G.
    pub beyond_scale: bool,
}

/// Grade of a task consuming `energy_kwh`.
///
/// # Example
///
/// ```
/// use ai_footprint::projection::{eco_score, Grade};
///
/// assert_eq!(eco_score(3.46e-8).unwrap().grade, Grade::B);
/// assert_eq!(eco_score(1e-8).unwrap().grade, Grade::B);
/// ```
pub fn eco_score(energy_kwh: f64) -> Result<EcoScore> {
    if energy_kwh.is_nan() || energy_kwh < 0.0 {
        return Err(Error::invalid("kwh", format!("{energy_kwh} must be >= 0")));
    }
    let hit = THRESHOLDS.iter().find(|(_, t)| energy_kwh < *t);
    Ok(EcoScore {
        energy_kwh,
        grade: hit.map_or(Grade::G, |(g, _)| *g),
        beyond_scale: hit.is_none(),
    })
}
