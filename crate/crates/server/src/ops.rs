//! Requests shared by the CLI and the HTTP service.

use serde::{Deserialize, Serialize};

use ai_footprint::data::{resolve_scenario, DataBundle};
use ai_footprint::portfolio::{aggregate_portfolio, PortfolioSpec};
use ai_footprint::projection::{
    baseline, eco_score, find_scenario, parse_range, project_on, sensitivity_sweep,
    solve_hardware_efficiency, ScenarioParams, SweepParam, DEFAULT_OFFSET_GRID_REDUCTION,
    DEFAULT_OFFSET_PUE,
};
use ai_footprint::report::{cluster_matrix, Report};
use ai_footprint::{Error, Result};

/// A preset name (or scenario file path) or a full parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Name(String),
    Params(Box<ScenarioParams>),
}

impl<'de> Deserialize<'de> for ScenarioRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(ScenarioRef::Name(s)),
            v @ serde_json::Value::Object(_) => serde_json::from_value(v)
                .map(|p| ScenarioRef::Params(Box::new(p)))
                .map_err(|e| D::Error::custom(format!("scenario: {e}"))),
            _ => Err(D::Error::custom(
                "scenario: expected a preset name or an object",
            )),
        }
    }
}

/// Where a scenario name may point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    /// Preset names only.
    Presets,
    /// Preset names or paths to scenario documents.
    PresetsOrFiles,
}

impl ScenarioRef {
    pub fn resolve(&self, bundle: &DataBundle, lookup: Lookup) -> Result<ScenarioParams> {
        match self {
            ScenarioRef::Name(n) => match lookup {
                Lookup::Presets => find_scenario(&bundle.scenarios, n).cloned(),
                Lookup::PresetsOrFiles => resolve_scenario(n, &bundle.scenarios),
            },
            ScenarioRef::Params(p) => {
                p.validate()?;
                Ok((**p).clone())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectRequest {
    /// Omitted: every preset.
    #[serde(default)]
    pub scenario: Option<ScenarioRef>,
    #[serde(default)]
    pub portfolio: Option<PortfolioSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRequest {
    #[serde(default = "default_scenario")]
    pub scenario: ScenarioRef,
    pub param: String,
    /// `lo:hi:step`; ignored when `values` is given.
    #[serde(default)]
    pub range: Option<String>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub portfolio: Option<PortfolioSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetRequest {
    #[serde(default = "default_scenario")]
    pub scenario: ScenarioRef,
    /// GHG cut as a fraction of 2024.
    #[serde(default = "default_target")]
    pub target: f64,
    #[serde(default)]
    pub pue: Option<f64>,
    #[serde(default)]
    pub grid_reduction: Option<f64>,
    #[serde(default)]
    pub portfolio: Option<PortfolioSpec>,
}

fn default_scenario() -> ScenarioRef {
    ScenarioRef::Name("intermediate".into())
}

pub fn default_target() -> f64 {
    0.9
}

fn spec_or_default<'a>(
    bundle: &'a DataBundle,
    spec: &'a Option<PortfolioSpec>,
) -> &'a PortfolioSpec {
    spec.as_ref().unwrap_or(&bundle.portfolio)
}

pub fn clusters(bundle: &DataBundle) -> Result<Report> {
    Ok(Report::Clusters(cluster_matrix(
        &bundle.model,
        &bundle.portfolio,
    )?))
}

pub fn portfolio(bundle: &DataBundle, spec: Option<&PortfolioSpec>) -> Result<Report> {
    let spec = spec.unwrap_or(&bundle.portfolio);
    Ok(Report::Footprint(Box::new(aggregate_portfolio(
        &bundle.model,
        spec,
    )?)))
}

pub fn project(bundle: &DataBundle, lookup: Lookup, req: &ProjectRequest) -> Result<Report> {
    let spec = spec_or_default(bundle, &req.portfolio);
    let scenarios = match &req.scenario {
        Some(s) => vec![s.resolve(bundle, lookup)?],
        None => bundle.scenarios.clone(),
    };
    let base = baseline(&bundle.model, spec)?;
    let results = scenarios
        .iter()
        .map(|s| project_on(&bundle.model, spec, &base, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::Scenarios(results))
}

pub fn sweep(bundle: &DataBundle, lookup: Lookup, req: &SweepRequest) -> Result<Report> {
    let param: SweepParam = req.param.parse()?;
    let scenario = req.scenario.resolve(bundle, lookup)?;
    let values = match (&req.values, &req.range) {
        (Some(v), _) => v.clone(),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => return Err(Error::EmptySweep),
    };
    let spec = spec_or_default(bundle, &req.portfolio);
    Ok(Report::Sweep(sensitivity_sweep(
        &bundle.model,
        spec,
        &scenario,
        param,
        &values,
    )?))
}

pub fn offset(bundle: &DataBundle, lookup: Lookup, req: &OffsetRequest) -> Result<Report> {
    let scenario = req.scenario.resolve(bundle, lookup)?;
    let spec = spec_or_default(bundle, &req.portfolio);
    Ok(Report::Offset(solve_hardware_efficiency(
        &bundle.model,
        spec,
        &scenario,
        req.target,
        req.pue.unwrap_or(DEFAULT_OFFSET_PUE),
        req.grid_reduction.unwrap_or(DEFAULT_OFFSET_GRID_REDUCTION),
    )?))
}

pub fn score(kwh: f64) -> Result<Report> {
    Ok(Report::Score(eco_score(kwh)?))
}

pub fn scenarios(bundle: &DataBundle) -> &[ScenarioParams] {
    &bundle.scenarios
}
