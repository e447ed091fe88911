//! Hardware efficiency needed to cut GHG emissions to a target.

use serde::{Deserialize, Serialize};

use super::{baseline, project_on, ScenarioParams};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::portfolio::PortfolioSpec;

pub const DEFAULT_OFFSET_PUE: f64 = 1.04;
/// Grid factor 0.55 of today's intensity.
pub const DEFAULT_OFFSET_GRID_REDUCTION: f64 = 0.45;
const BRACKET: (f64, f64) = (1.0, 1e6);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetResult {
    pub scenario: String,
    pub target_fraction: f64,
    pub target_index: f64,
    /// Solved hardware efficiency factor.
    pub factor: f64,
    pub ghg_index: f64,
    pub energy_index: f64,
    pub water_index: f64,
    pub pue: f64,
    pub grid_reduction: f64,
    pub iterations: u32,
}

/// Bisection (in log space) on the hardware efficiency factor so that the
/// projected GHG index equals `100 * (1 - target_fraction)`.
///
/// Returns factor 1 when the target is already met without hardware gains,
/// and [`Error::Unreachable`] when even the top of the bracket falls short.
pub fn solve_hardware_efficiency(
    model: &Model,
    spec: &PortfolioSpec,
    scenario: &ScenarioParams,
    target_fraction: f64,
    pue: f64,
    grid_reduction: f64,
) -> Result<OffsetResult> {
    if !(target_fraction > 0.0 && target_fraction < 1.0) {
        return Err(Error::invalid(
            "target",
            format!("{target_fraction} is not in (0, 1)"),
        ));
    }
    let mut s = scenario.clone();
    s.pue_2030 = pue;
    s.grid_reduction = grid_reduction;
    s.validate()?;
    let base = baseline(model, spec)?;
    let target = 100.0 * (1.0 - target_fraction);

    let eval = |hw: f64| -> Result<super::ScenarioResult> {
        let mut p = s.clone();
        p.hardware_efficiency_factor = hw;
        project_on(model, spec, &base, &p)
    };
    let done = |hw: f64, iterations: u32| -> Result<OffsetResult> {
        let r = eval(hw)?;
        Ok(OffsetResult {
            scenario: scenario.name.clone(),
            target_fraction,
            target_index: target,
            factor: hw,
            ghg_index: r.index.gwp,
            energy_index: r.index.final_energy,
            water_index: r.index.water,
            pue,
            grid_reduction,
            iterations,
        })
    };

    let (mut lo, mut hi) = BRACKET;
    if eval(lo)?.index.gwp <= target {
        return done(lo, 0);
    }
    let floor = eval(hi)?.index.gwp;
    if floor > target {
        return Err(Error::Unreachable {
            reason: format!(
                "GHG index {floor:.3} at hardware factor {hi:e} stays above target {target:.3}; \
                 storage, network and embodied terms do not scale with hardware efficiency"
            ),
        });
    }
    let mut iterations = 0;
    while iterations < 200 && hi / lo - 1.0 > 1e-12 {
        let mid = (lo * hi).sqrt();
        if eval(mid)?.index.gwp > target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    done(hi, iterations)
}
