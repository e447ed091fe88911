//! 2030 projection of the portfolio under usage and efficiency scenarios.

pub mod offset;
pub mod score;
pub mod sweep;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impact::ImpactVector;
use crate::model::Model;
use crate::portfolio::{aggregate_with, Adjustment, AnnualFootprint, PortfolioSpec};
use crate::usecase::energy::DemandScaling;
use crate::usecase::{AiType, UseCaseType};

pub use offset::{
    solve_hardware_efficiency, OffsetResult, DEFAULT_OFFSET_GRID_REDUCTION, DEFAULT_OFFSET_PUE,
};
pub use score::{eco_score, EcoScore, Grade, THRESHOLDS};
pub use sweep::{parse_range, polyfit, sensitivity_sweep, PolyFit, Sweep, SweepParam, SweepPoint};

fn one() -> f64 {
    1.0
}

fn six() -> u32 {
    6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub title: String,
    #[serde(default = "six")]
    pub horizon_years: u32,
    /// GenAI excluding agents.
    pub genai_cagr: f64,
    pub agents_cagr: f64,
    pub cv_cagr: f64,
    pub nlp_cagr: f64,
    pub tabular_cagr: f64,
    pub model_size_factor: f64,
    /// Compute energy scales with `model_size_factor ^ model_size_exponent`.
    #[serde(default = "one")]
    pub model_size_exponent: f64,
    pub output_token_factor: f64,
    pub quantization_factor: f64,
    pub hardware_efficiency_factor: f64,
    pub pue_2030: f64,
    /// Fractional cut applied to every grid criterion.
    pub grid_reduction: f64,
}

/// `(1 + cagr)^years`.
pub fn usage_scale(cagr: f64, years: u32) -> f64 {
    (1.0 + cagr).powi(years as i32)
}

impl ScenarioParams {
    /// No growth, no efficiency change: indexes at exactly 100.
    pub fn identity(model: &Model) -> Self {
        Self {
            name: "identity".into(),
            title: "No change".into(),
            horizon_years: 6,
            genai_cagr: 0.0,
            agents_cagr: 0.0,
            cv_cagr: 0.0,
            nlp_cagr: 0.0,
            tabular_cagr: 0.0,
            model_size_factor: 1.0,
            model_size_exponent: 1.0,
            output_token_factor: 1.0,
            quantization_factor: 1.0,
            hardware_efficiency_factor: 1.0,
            pue_2030: model.datacenter.pue,
            grid_reduction: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cagrs = [
            ("genai_cagr", self.genai_cagr),
            ("agents_cagr", self.agents_cagr),
            ("cv_cagr", self.cv_cagr),
            ("nlp_cagr", self.nlp_cagr),
            ("tabular_cagr", self.tabular_cagr),
        ];
        for (name, v) in cagrs {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("{v} must be >= 0")));
            }
        }
        for (name, v) in [
            ("model_size_factor", self.model_size_factor),
            ("output_token_factor", self.output_token_factor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("{v} must be > 0")));
            }
        }
        if !self.model_size_exponent.is_finite() || self.model_size_exponent < 0.0 {
            return Err(Error::invalid("model_size_exponent", "must be >= 0"));
        }
        for (name, v) in [
            ("quantization_factor", self.quantization_factor),
            (
                "hardware_efficiency_factor",
                self.hardware_efficiency_factor,
            ),
            ("pue_2030", self.pue_2030),
        ] {
            if !(v.is_finite() && v >= 1.0) {
                return Err(Error::invalid(name, format!("{v} must be >= 1")));
            }
        }
        if !(self.grid_reduction.is_finite() && (0.0..1.0).contains(&self.grid_reduction)) {
            return Err(Error::invalid(
                "grid_reduction",
                format!("{} is not in [0, 1)", self.grid_reduction),
            ));
        }
        Ok(())
    }

    pub fn growth(&self, uc: UseCaseType) -> f64 {
        let cagr = match uc {
            UseCaseType::Chat | UseCaseType::Rag => self.genai_cagr,
            UseCaseType::Agents => self.agents_cagr,
            UseCaseType::ComputerVision => self.cv_cagr,
            UseCaseType::Nlp => self.nlp_cagr,
            UseCaseType::Tabular => self.tabular_cagr,
        };
        usage_scale(cagr, self.horizon_years)
    }

    /// Multiplier on LLM generation demand.
    pub fn llm_scale(&self) -> f64 {
        self.model_size_factor.powf(self.model_size_exponent) * self.output_token_factor
            / (self.hardware_efficiency_factor * self.quantization_factor)
    }

    pub fn adjustment(&self) -> Adjustment {
        Adjustment {
            growth: UseCaseType::ALL
                .iter()
                .map(|u| (*u, self.growth(*u)))
                .collect(),
            scaling: DemandScaling {
                llm: self.llm_scale(),
                task: 1.0 / self.hardware_efficiency_factor,
                storage: 1.0,
                network: 1.0,
            },
            pue: self.pue_2030,
            grid_scale: 1.0 - self.grid_reduction,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn preset(
    name: &str,
    title: &str,
    cagr: [f64; 5],
    size: f64,
    out: f64,
    quant: f64,
    hw: f64,
    pue: f64,
    reduction: f64,
) -> ScenarioParams {
    ScenarioParams {
        name: name.into(),
        title: title.into(),
        horizon_years: 6,
        genai_cagr: cagr[0],
        agents_cagr: cagr[1],
        cv_cagr: cagr[2],
        nlp_cagr: cagr[3],
        tabular_cagr: cagr[4],
        model_size_factor: size,
        model_size_exponent: 1.0,
        output_token_factor: out,
        quantization_factor: quant,
        hardware_efficiency_factor: hw,
        pue_2030: pue,
        grid_reduction: reduction,
    }
}

const LOW_USAGE: [f64; 5] = [0.32, 0.35, 0.13, 0.22, 0.17];
const HIGH_USAGE: [f64; 5] = [0.47, 0.55, 0.20, 0.30, 0.24];

/// The five reference scenarios, in ascending energy order of the
/// published results: steady, high, limited, tech, intermediate.
pub fn presets() -> Vec<ScenarioParams> {
    // GPU trend x4.4 times inference-specialized chips x4.8
    let breakthrough_hw = 4.4 * 4.8;
    vec![
        preset(
            "steady_ascent",
            "Steady ascent",
            LOW_USAGE,
            3.0,
            1.33,
            1.0,
            4.4,
            1.15,
            0.24,
        ),
        preset(
            "high_adoption",
            "High adoption without boundaries",
            HIGH_USAGE,
            3.0,
            3.0,
            1.0,
            4.4,
            1.15,
            0.24,
        ),
        preset(
            "limited_growth",
            "Limited growth with efficiency breakthrough",
            LOW_USAGE,
            1.0,
            1.13,
            1.2,
            breakthrough_hw,
            1.1,
            0.45,
        ),
        preset(
            "tech_breakthrough",
            "Technological breakthrough",
            HIGH_USAGE,
            3.0,
            3.0,
            1.2,
            breakthrough_hw,
            1.1,
            0.45,
        ),
        preset(
            "intermediate",
            "Intermediate scenario",
            [0.40, 0.45, 0.20, 0.30, 0.24],
            2.0,
            2.0,
            1.0,
            4.4,
            1.15,
            0.24,
        ),
    ]
}

/// Look a scenario up by name among `scenarios` (case and separator insensitive).
pub fn find_scenario<'a>(
    scenarios: &'a [ScenarioParams],
    name: &str,
) -> Result<&'a ScenarioParams> {
    let norm = |s: &str| s.to_ascii_lowercase().replace(['-', ' '], "_");
    let key = norm(name);
    scenarios
        .iter()
        .find(|s| norm(&s.name) == key || norm(&s.title) == key)
        .ok_or_else(|| {
            let known: Vec<_> = scenarios.iter().map(|s| s.name.as_str()).collect();
            Error::invalid(
                "scenario",
                format!("unknown `{name}` (known: {})", known.join(", ")),
            )
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub params: ScenarioParams,
    /// Baseline = 100 per criterion.
    pub index: ImpactVector,
    pub projected: ImpactVector,
    pub baseline: ImpactVector,
    pub use_cases: f64,
    pub baseline_use_cases: f64,
    /// GenAI share of projected use cases.
    pub genai_share: f64,
    pub genai_energy_share: f64,
    pub by_ai_type: BTreeMap<AiType, ImpactVector>,
}

/// Baseline footprint through the same evaluation path as projections.
pub fn baseline(model: &Model, spec: &PortfolioSpec) -> Result<AnnualFootprint> {
    aggregate_with(model, spec, &ScenarioParams::identity(model).adjustment())
}

/// Project against an already computed baseline.
pub fn project_on(
    model: &Model,
    spec: &PortfolioSpec,
    base: &AnnualFootprint,
    scenario: &ScenarioParams,
) -> Result<ScenarioResult> {
    scenario.validate()?;
    let fp = aggregate_with(model, spec, &scenario.adjustment())?;
    let use_cases = fp.use_case_count();
    let genai = fp.use_cases.get(&AiType::GenAi).copied().unwrap_or(0.0);
    Ok(ScenarioResult {
        scenario: scenario.name.clone(),
        params: scenario.clone(),
        index: fp.total.indexed_on(&base.total),
        projected: fp.total,
        baseline: base.total,
        use_cases,
        baseline_use_cases: base.use_case_count(),
        genai_share: if use_cases > 0.0 {
            genai / use_cases
        } else {
            0.0
        },
        genai_energy_share: fp.genai_energy_share(),
        by_ai_type: fp.by_ai_type.clone(),
    })
}

/// Projected footprint indexed on the baseline portfolio.
///
/// # Example
///
/// ```
/// use ai_footprint::{projection::{project, ScenarioParams}, portfolio::PortfolioSpec, Model};
///
/// let model = Model::default();
/// let r = project(&model, &PortfolioSpec::default(), &ScenarioParams::identity(&model)).unwrap();
/// assert_eq!(r.index.gwp, 100.0);
/// ```
pub fn project(
    model: &Model,
    spec: &PortfolioSpec,
    scenario: &ScenarioParams,
) -> Result<ScenarioResult> {
    let base = baseline(model, spec)?;
    project_on(model, spec, &base, scenario)
}
