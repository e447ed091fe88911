//! Distribution-based company portfolio and its annual footprint.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impact::ImpactVector;
use crate::lca::{Component, ImpactGrid, OperationalFactors, Region, Stage, Step};
use crate::model::Model;
use crate::usecase::energy::{demand_grid, finetuning_demands, inference_demands, DemandScaling};
use crate::usecase::{
    enumerate_clusters, AiType, FreqClass, InferenceKind, ModelSize, UseCaseCluster, UseCaseType,
    UsersClass,
};

/// A categorical distribution per AI family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerFamily<K: Ord> {
    #[serde(rename = "GenAI")]
    pub genai: BTreeMap<K, f64>,
    #[serde(rename = "Traditional")]
    pub traditional: BTreeMap<K, f64>,
}

impl<K: Ord> PerFamily<K> {
    pub fn get(&self, ai: AiType) -> &BTreeMap<K, f64> {
        match ai {
            AiType::GenAi => &self.genai,
            AiType::Traditional => &self.traditional,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSpec {
    pub n_use_cases: f64,
    pub genai_share: f64,
    /// Use-case type shares within each family.
    pub type_shares: PerFamily<UseCaseType>,
    /// GenAI model sizes.
    pub model_sizes: BTreeMap<ModelSize, f64>,
    pub users: PerFamily<UsersClass>,
    pub frequency: PerFamily<FreqClass>,
    /// Requests per user per day for each frequency class.
    pub requests_per_day: BTreeMap<FreqClass, f64>,
    pub business_days: f64,
    pub region_weights: BTreeMap<Region, f64>,
}

impl Default for PortfolioSpec {
    fn default() -> Self {
        use FreqClass as F;
        use UseCaseType as U;
        use UsersClass as Us;
        Self {
            n_use_cases: 100.0,
            genai_share: 0.29,
            type_shares: PerFamily {
                genai: BTreeMap::from([(U::Agents, 0.33), (U::Chat, 0.28), (U::Rag, 0.39)]),
                traditional: BTreeMap::from([
                    (U::ComputerVision, 0.11),
                    (U::Nlp, 0.10),
                    (U::Tabular, 0.79),
                ]),
            },
            model_sizes: BTreeMap::from([
                (ModelSize::Low, 0.131),
                (ModelSize::Medium, 0.011),
                (ModelSize::High, 0.858),
            ]),
            users: PerFamily {
                genai: BTreeMap::from([
                    (Us::Low, 0.1),
                    (Us::Medium, 0.4),
                    (Us::High, 0.3),
                    (Us::VeryHigh, 0.2),
                ]),
                traditional: BTreeMap::from([
                    (Us::Low, 0.8),
                    (Us::Medium, 0.15),
                    (Us::High, 0.05),
                    (Us::VeryHigh, 0.0),
                ]),
            },
            frequency: PerFamily {
                genai: BTreeMap::from([
                    (F::Low, 0.35),
                    (F::Medium, 0.4),
                    (F::High, 0.2),
                    (F::VeryHigh, 0.05),
                ]),
                traditional: BTreeMap::from([
                    (F::Low, 0.25),
                    (F::Medium, 0.25),
                    (F::High, 0.25),
                    (F::VeryHigh, 0.25),
                ]),
            },
            requests_per_day: BTreeMap::from([
                (F::Low, 0.2),
                (F::Medium, 1.0),
                (F::High, 10.0),
                (F::VeryHigh, 50.0),
            ]),
            business_days: 250.0,
            region_weights: BTreeMap::from([
                (Region::Us, 0.45),
                (Region::Eu27, 0.28),
                (Region::Cn, 0.27),
            ]),
        }
    }
}

fn check_distribution<K: Ord + Copy + std::fmt::Display>(
    path: &str,
    dist: &BTreeMap<K, f64>,
    allowed: &[K],
) -> Result<()> {
    for (k, v) in dist {
        if !allowed.contains(k) {
            return Err(Error::invalid(
                format!("{path}.{k}"),
                "category not allowed here",
            ));
        }
        if !(v.is_finite() && (0.0..=1.0).contains(v)) {
            return Err(Error::invalid(
                format!("{path}.{k}"),
                format!("{v} is not in [0, 1]"),
            ));
        }
    }
    let sum: f64 = dist.values().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Distribution {
            field: path.to_string(),
            sum,
        });
    }
    Ok(())
}

impl PortfolioSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.n_use_cases.is_finite() && self.n_use_cases >= 0.0) {
            return Err(Error::invalid("n_use_cases", "must be >= 0"));
        }
        if !(self.genai_share.is_finite() && (0.0..=1.0).contains(&self.genai_share)) {
            return Err(Error::invalid(
                "genai_share",
                format!("{} is not in [0, 1]", self.genai_share),
            ));
        }
        for ai in AiType::ALL {
            let fam = match ai {
                AiType::GenAi => "GenAI",
                AiType::Traditional => "Traditional",
            };
            check_distribution(
                &format!("type_shares.{fam}"),
                self.type_shares.get(ai),
                &ai.use_case_types(),
            )?;
            check_distribution(
                &format!("users.{fam}"),
                self.users.get(ai),
                &UsersClass::ALL,
            )?;
            check_distribution(
                &format!("frequency.{fam}"),
                self.frequency.get(ai),
                &FreqClass::ALL,
            )?;
        }
        check_distribution("model_sizes", &self.model_sizes, &ModelSize::ALL)?;
        check_distribution("region_weights", &self.region_weights, &Region::ALL)?;
        for f in FreqClass::ALL {
            match self.requests_per_day.get(&f) {
                Some(v) if v.is_finite() && *v >= 0.0 => {}
                Some(_) => {
                    return Err(Error::invalid(
                        format!("requests_per_day.{f}"),
                        "must be >= 0",
                    ))
                }
                None => return Err(Error::invalid(format!("requests_per_day.{f}"), "missing")),
            }
        }
        if !(self.business_days.is_finite() && self.business_days >= 0.0) {
            return Err(Error::invalid("business_days", "must be >= 0"));
        }
        Ok(())
    }

    fn family_share(&self, ai: AiType) -> f64 {
        match ai {
            AiType::GenAi => self.genai_share,
            AiType::Traditional => 1.0 - self.genai_share,
        }
    }

    /// Expected number of use cases of a given type (size marginal included
    /// for GenAI kinds).
    pub fn kind_weight(&self, kind: InferenceKind) -> f64 {
        let ai = kind.ai_type();
        let size = kind
            .model_size
            .map(|s| self.model_sizes.get(&s).copied().unwrap_or(0.0))
            .unwrap_or(1.0);
        self.n_use_cases
            * self.family_share(ai)
            * self
                .type_shares
                .get(ai)
                .get(&kind.uc_type)
                .copied()
                .unwrap_or(0.0)
            * size
    }

    fn class_weight(&self, c: &UseCaseCluster) -> f64 {
        self.users
            .get(c.ai_type)
            .get(&c.users)
            .copied()
            .unwrap_or(0.0)
            * self
                .frequency
                .get(c.ai_type)
                .get(&c.freq)
                .copied()
                .unwrap_or(0.0)
    }
}

/// The 192 clusters with their expected use-case counts.
pub fn expand_clusters(spec: &PortfolioSpec) -> Result<Vec<(UseCaseCluster, f64)>> {
    spec.validate()?;
    Ok(enumerate_clusters()
        .into_iter()
        .map(|c| {
            let w = spec.kind_weight(c.kind()) * spec.class_weight(&c);
            (c, w)
        })
        .collect())
}

/// Inferences per year for one use case of a cluster.
pub fn annual_inferences(cluster: &UseCaseCluster, spec: &PortfolioSpec) -> f64 {
    let per_day = spec
        .requests_per_day
        .get(&cluster.freq)
        .copied()
        .unwrap_or(0.0);
    spec.business_days * cluster.users.users() * per_day
}

/// One row of the stage × step × component × AI-type pivot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PivotRow {
    pub ai_type: AiType,
    pub step: Step,
    pub component: Component,
    pub stage: Stage,
    pub impact: ImpactVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualFootprint {
    pub total: ImpactVector,
    pub by_stage: BTreeMap<Stage, ImpactVector>,
    pub by_step: BTreeMap<Step, ImpactVector>,
    pub by_component: BTreeMap<Component, ImpactVector>,
    pub by_ai_type: BTreeMap<AiType, ImpactVector>,
    pub by_uc_type: BTreeMap<UseCaseType, ImpactVector>,
    pub pivot: Vec<PivotRow>,
    pub use_cases: BTreeMap<AiType, f64>,
    pub inferences: f64,
}

impl AnnualFootprint {
    pub fn use_case_count(&self) -> f64 {
        self.use_cases.values().sum()
    }

    /// Share of final energy from GenAI.
    pub fn genai_energy_share(&self) -> f64 {
        let g = self
            .by_ai_type
            .get(&AiType::GenAi)
            .map_or(0.0, |v| v.final_energy);
        if self.total.final_energy == 0.0 {
            0.0
        } else {
            g / self.total.final_energy
        }
    }

    /// Embodied share of each criterion.
    pub fn embodied_share(&self) -> ImpactVector {
        let e = self
            .by_stage
            .get(&Stage::Embodied)
            .copied()
            .unwrap_or_default();
        e.zip_with(&self.total, |a, b| if b == 0.0 { 0.0 } else { a / b })
    }
}

/// Levers a projection applies on top of the baseline portfolio.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjustment {
    /// Use-case count multiplier per type.
    pub growth: BTreeMap<UseCaseType, f64>,
    pub scaling: DemandScaling,
    pub pue: f64,
    pub grid_scale: f64,
}

impl Adjustment {
    pub fn baseline(model: &Model) -> Self {
        Self {
            growth: UseCaseType::ALL.iter().map(|u| (*u, 1.0)).collect(),
            scaling: DemandScaling::IDENTITY,
            pue: model.datacenter.pue,
            grid_scale: 1.0,
        }
    }
}

/// Annual footprint of the portfolio in the baseline year.
///
/// # Example
///
/// ```
/// use ai_footprint::{portfolio::{aggregate_portfolio, PortfolioSpec}, Model};
///
/// let fp = aggregate_portfolio(&Model::default(), &PortfolioSpec::default()).unwrap();
/// assert!(fp.genai_energy_share() > 0.99);
/// ```
pub fn aggregate_portfolio(model: &Model, spec: &PortfolioSpec) -> Result<AnnualFootprint> {
    aggregate_with(model, spec, &Adjustment::baseline(model))
}

/// Annual footprint under an [`Adjustment`]; the baseline adjustment gives
/// exactly [`aggregate_portfolio`].
pub fn aggregate_with(
    model: &Model,
    spec: &PortfolioSpec,
    adj: &Adjustment,
) -> Result<AnnualFootprint> {
    spec.validate()?;
    model.validate()?;
    let mut dc = model.datacenter.clone();
    dc.region_weights = spec.region_weights.clone();
    let ops = OperationalFactors::with_overrides(&dc, &model.factors, adj.pue, adj.grid_scale)?;

    let mut per_type: BTreeMap<UseCaseType, ImpactGrid> = BTreeMap::new();
    let mut use_cases: BTreeMap<AiType, f64> = BTreeMap::new();
    let mut inferences = 0.0;

    for kind in InferenceKind::all() {
        let growth = adj.growth.get(&kind.uc_type).copied().unwrap_or(1.0);
        let demands = inference_demands(model, kind)?;
        let unit = demand_grid(model, &demands, &ops, &adj.scaling);
        let kind_w = spec.kind_weight(kind) * growth;
        let mut n_inf = 0.0;
        let mut n_uc = 0.0;
        for users in UsersClass::ALL {
            for freq in FreqClass::ALL {
                let c = UseCaseCluster {
                    id: 0,
                    ai_type: kind.ai_type(),
                    uc_type: kind.uc_type,
                    model_size: kind.model_size,
                    users,
                    freq,
                };
                let w = kind_w * spec.class_weight(&c);
                n_uc += w;
                n_inf += w * annual_inferences(&c, spec);
            }
        }
        *use_cases.entry(kind.ai_type()).or_default() += n_uc;
        inferences += n_inf;
        per_type
            .entry(kind.uc_type)
            .or_default()
            .merge(&unit.scaled(n_inf));
    }

    for uc in AiType::Traditional.use_case_types() {
        let growth = adj.growth.get(&uc).copied().unwrap_or(1.0);
        let years = model.catalog.task(uc)?.finetune.lifetime_years;
        let demands = finetuning_demands(model, uc)?;
        let lifetime = demand_grid(model, &demands, &ops, &adj.scaling);
        let w = spec.kind_weight(InferenceKind::traditional(uc)) * growth;
        per_type
            .entry(uc)
            .or_default()
            .merge(&lifetime.scaled(w / years));
    }

    Ok(build_footprint(&per_type, use_cases, inferences))
}

fn build_footprint(
    per_type: &BTreeMap<UseCaseType, ImpactGrid>,
    use_cases: BTreeMap<AiType, f64>,
    inferences: f64,
) -> AnnualFootprint {
    let mut pivot = Vec::with_capacity(32);
    for ai in AiType::ALL {
        let mut g = ImpactGrid::default();
        for uc in ai.use_case_types() {
            if let Some(t) = per_type.get(&uc) {
                g.merge(t);
            }
        }
        pivot.extend(g.iter().map(|c| PivotRow {
            ai_type: ai,
            step: c.step,
            component: c.component,
            stage: c.stage,
            impact: c.impact,
        }));
    }
    let total: ImpactVector = pivot.iter().map(|r| r.impact).sum();
    let group = |key: &dyn Fn(&PivotRow) -> bool| -> ImpactVector {
        pivot.iter().filter(|r| key(r)).map(|r| r.impact).sum()
    };
    let by_stage = Stage::ALL
        .iter()
        .map(|s| (*s, group(&|r| r.stage == *s)))
        .collect();
    let by_step = Step::ALL
        .iter()
        .map(|s| (*s, group(&|r| r.step == *s)))
        .collect();
    let by_component = Component::ALL
        .iter()
        .map(|c| (*c, group(&|r| r.component == *c)))
        .collect();
    let by_ai_type = AiType::ALL
        .iter()
        .map(|a| (*a, group(&|r| r.ai_type == *a)))
        .collect();
    let by_uc_type = UseCaseType::ALL
        .iter()
        .map(|u| (*u, per_type.get(u).map(|g| g.total()).unwrap_or_default()))
        .collect();
    AnnualFootprint {
        total,
        by_stage,
        by_step,
        by_component,
        by_ai_type,
        by_uc_type,
        pivot,
        use_cases,
        inferences,
    }
}

/// Extrapolation of one company to the Global 2000.
pub fn scale_to_global2000(footprint: &AnnualFootprint) -> ImpactVector {
    footprint.total * 2000.0
}
