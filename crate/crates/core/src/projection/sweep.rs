//! One-parameter sensitivity sweeps and least-squares polynomial fits.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{baseline, project_on, ScenarioParams};
use crate::error::{Error, Result};
use crate::impact::ImpactVector;
use crate::model::Model;
use crate::portfolio::PortfolioSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    ModelSizeFactor,
    OutputTokenFactor,
    AgentsCagr,
}

impl SweepParam {
    pub const ALL: [SweepParam; 3] = [
        SweepParam::ModelSizeFactor,
        SweepParam::OutputTokenFactor,
        SweepParam::AgentsCagr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::ModelSizeFactor => "model_size_factor",
            SweepParam::OutputTokenFactor => "output_token_factor",
            SweepParam::AgentsCagr => "agents_cagr",
        }
    }

    pub fn get(self, s: &ScenarioParams) -> f64 {
        match self {
            SweepParam::ModelSizeFactor => s.model_size_factor,
            SweepParam::OutputTokenFactor => s.output_token_factor,
            SweepParam::AgentsCagr => s.agents_cagr,
        }
    }

    pub fn set(self, s: &mut ScenarioParams, v: f64) {
        match self {
            SweepParam::ModelSizeFactor => s.model_size_factor = v,
            SweepParam::OutputTokenFactor => s.output_token_factor = v,
            SweepParam::AgentsCagr => s.agents_cagr = v,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| {
                Error::invalid(
                    "param",
                    format!("unknown `{s}` (expected model_size_factor, output_token_factor or agents_cagr)"),
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub index: ImpactVector,
}

/// `y = c0 + c1·x + c2·x² + …` fitted to the energy index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyFit {
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub scenario: String,
    pub parameter: SweepParam,
    pub points: Vec<SweepPoint>,
    /// Degree-2 fit of energy index on the parameter (three or more distinct values).
    pub fit: Option<PolyFit>,
}

/// Least-squares polynomial coefficients, lowest degree first.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("polyfit", "x and y lengths differ"));
    }
    if xs.len() <= degree {
        return Err(Error::invalid(
            "polyfit",
            format!(
                "{} points cannot fix a degree-{degree} polynomial",
                xs.len()
            ),
        ));
    }
    let a = DMatrix::from_fn(xs.len(), degree + 1, |i, j| xs[i].powi(j as i32));
    let b = DVector::from_column_slice(ys);
    let svd = a.svd(true, true);
    let sol = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::invalid("polyfit", e.to_string()))?;
    Ok(sol.iter().copied().collect())
}

fn fit_energy(points: &[SweepPoint]) -> Option<PolyFit> {
    let xs: Vec<f64> = points.iter().map(|p| p.value).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.index.final_energy).collect();
    let mut distinct = xs.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return None;
    }
    let coefficients = polyfit(&xs, &ys, 2).ok()?;
    let fit = PolyFit {
        coefficients,
        r_squared: 0.0,
    };
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - fit.eval(*x)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(PolyFit { r_squared, ..fit })
}

/// Re-run the projection for each value of one parameter.
pub fn sensitivity_sweep(
    model: &Model,
    spec: &PortfolioSpec,
    scenario: &ScenarioParams,
    param: SweepParam,
    values: &[f64],
) -> Result<Sweep> {
    if values.is_empty() {
        return Err(Error::EmptySweep);
    }
    let base = baseline(model, spec)?;
    let points = values
        .iter()
        .map(|v| {
            let mut s = scenario.clone();
            param.set(&mut s, *v);
            s.validate().map_err(|e| match e {
                Error::InvalidInput { field, reason } => Error::InvalidInput {
                    field,
                    reason: format!("{reason} (sweep value {v})"),
                },
                other => other,
            })?;
            Ok(SweepPoint {
                value: *v,
                index: project_on(model, spec, &base, &s)?.index,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        scenario: scenario.name.clone(),
        parameter: param,
        fit: fit_energy(&points),
        points,
    })
}

/// Parse `lo:hi:step` into an inclusive grid.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = |why: &str| Error::invalid("range", format!("`{s}`: {why}"));
    if parts.len() != 3 {
        return Err(bad("expected lo:hi:step"));
    }
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if step <= 0.0 {
        return Err(bad("step must be > 0"));
    }
    if hi < lo {
        return Err(bad("hi < lo"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n > 10_000 {
        return Err(bad("more than 10000 points"));
    }
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}
