//! Silicon area needed per chip: dies per wafer, edge/kerf yield and
//! defect yield (Moore model).

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge-loss term of the die-per-wafer estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeFormula {
    /// `π·D / √(2·A)`, the usual die-per-wafer formula.
    #[default]
    Standard,
    /// `π·D / (√2·A)` as printed in some references; dimensionally off.
    Literal,
}

/// Lengths in mm, areas in mm², defect density per mm².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaferGeometry {
    pub wafer_diameter: f64,
    pub chip_area: f64,
    pub kerf: f64,
    pub defect_density: f64,
    #[serde(default)]
    pub edge_formula: EdgeFormula,
}

impl WaferGeometry {
    pub fn new(wafer_diameter: f64, chip_area: f64, kerf: f64, defect_density: f64) -> Self {
        Self {
            wafer_diameter,
            chip_area,
            kerf,
            defect_density,
            edge_formula: EdgeFormula::Standard,
        }
    }

    /// A100 die on a 300 mm wafer.
    pub fn a100(defect_density: f64) -> Self {
        Self::new(300.0, 826.0, 0.2, defect_density)
    }

    /// Cascade Lake XCC die (Xeon Platinum 8275CL) on a 300 mm wafer.
    pub fn xeon_platinum(defect_density: f64) -> Self {
        Self::new(300.0, 694.0, 0.2, defect_density)
    }

    pub fn wafer_area(&self) -> f64 {
        PI * (self.wafer_diameter / 2.0).powi(2)
    }

    pub fn chip_area_with_kerf(&self) -> f64 {
        (self.chip_area.sqrt() + self.kerf).powi(2)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.wafer_diameter,
            self.chip_area,
            self.kerf,
            self.defect_density,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite || self.chip_area <= 0.0 || self.wafer_diameter <= 0.0 {
            return Err(Error::invalid(
                "wafer",
                "diameter and chip area must be > 0",
            ));
        }
        if self.kerf < 0.0 {
            return Err(Error::invalid("kerf", "must be >= 0"));
        }
        if self.defect_density < 0.0 {
            return Err(Error::invalid("defect_density", "must be >= 0"));
        }
        if self.chip_area.sqrt() + self.kerf >= self.wafer_diameter {
            return Err(Error::ChipTooLarge {
                reason: format!(
                    "side {:.3} mm with kerf does not fit a {} mm wafer",
                    self.chip_area.sqrt() + self.kerf,
                    self.wafer_diameter
                ),
            });
        }
        Ok(())
    }
}

/// Gross dies per wafer, as a real number.
///
/// # Example
///
/// ```
/// use ai_footprint::lca::wafer::{dies_per_wafer, WaferGeometry};
///
/// let n = dies_per_wafer(&WaferGeometry::a100(0.0)).unwrap();
/// assert!(n > 60.0 && n < 63.0);
/// ```
pub fn dies_per_wafer(geom: &WaferGeometry) -> Result<f64> {
    geom.validate()?;
    let a = geom.chip_area_with_kerf();
    let d = geom.wafer_diameter;
    let edge = match geom.edge_formula {
        EdgeFormula::Standard => PI * d / (2.0 * a).sqrt(),
        EdgeFormula::Literal => PI * d / (SQRT_2 * a),
    };
    let n = geom.wafer_area() / a - edge;
    if n > 0.0 {
        Ok(n)
    } else {
        Err(Error::NoUsableDie { estimate: n })
    }
}

/// Share of wafer area that ends up in whole dies.
pub fn edge_kerf_yield(geom: &WaferGeometry) -> Result<f64> {
    Ok(dies_per_wafer(geom)? * geom.chip_area / geom.wafer_area())
}

/// Moore model: `exp(-sqrt(D * A))`.
pub fn defect_yield(geom: &WaferGeometry) -> f64 {
    (-(geom.defect_density * geom.chip_area).sqrt()).exp()
}

/// Silicon consumed per good chip, in m².
pub fn silicon_area_needed(geom: &WaferGeometry) -> Result<f64> {
    let y = edge_kerf_yield(geom)?;
    Ok(geom.chip_area / (y * defect_yield(geom)) * 1e-6)
}

/// Defect density (per mm²) that makes [`silicon_area_needed`] equal
/// `target_m2`, found by bisection.
pub fn calibrate_defect_density(geom: &WaferGeometry, target_m2: f64) -> Result<f64> {
    let mut g = *geom;
    g.defect_density = 0.0;
    let floor = silicon_area_needed(&g)?;
    if !(target_m2.is_finite() && target_m2 >= floor) {
        return Err(Error::Unreachable {
            reason: format!("target {target_m2} m² is below the defect-free area {floor:.4e} m²"),
        });
    }
    // area grows like exp(sqrt(D*A)); bracket D so that sqrt(D*A) spans [0, 700]
    let (mut lo, mut hi) = (0.0, 700.0f64.powi(2) / geom.chip_area);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        g.defect_density = mid;
        if silicon_area_needed(&g)? < target_m2 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
