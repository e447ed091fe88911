//! Per-inference and fine-tuning demand, energy and impacts.
//!
//! Everything is first expressed as a list of [`Demand`]s (capacity usage
//! plus the IT energy it draws); energy and impacts are derived from it so
//! that projections can rescale demand by class.

use serde::{Deserialize, Serialize};

use super::{vgpu_count, AiType, InferenceKind, TraditionalTask, UseCaseType};
use crate::error::{Error, Result};
use crate::impact::ImpactVector;
use crate::lca::{Component, EmissionFactorTable, ImpactGrid, OperationalFactors, Stage, Step};
use crate::model::Model;

/// How a demand reacts to projection levers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandClass {
    /// LLM generation (model size, output length, quantization, hardware).
    LlmCompute,
    /// Traditional task or tool call compute (hardware only).
    TaskCompute,
    Storage,
    Network,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    pub step: Step,
    pub component: Component,
    pub class: DemandClass,
    /// Usage in the capacity unit of `component` (h, GB.h or GB).
    pub quantity: f64,
    /// Energy drawn by the equipment, kWh; for the network this is final energy.
    pub it_energy: f64,
}

/// Multipliers applied to demand per class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandScaling {
    pub llm: f64,
    pub task: f64,
    pub storage: f64,
    pub network: f64,
}

impl DemandScaling {
    pub const IDENTITY: DemandScaling = DemandScaling {
        llm: 1.0,
        task: 1.0,
        storage: 1.0,
        network: 1.0,
    };

    pub fn factor(&self, class: DemandClass) -> f64 {
        match class {
            DemandClass::LlmCompute => self.llm,
            DemandClass::TaskCompute => self.task,
            DemandClass::Storage => self.storage,
            DemandClass::Network => self.network,
        }
    }
}

impl Default for DemandScaling {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Final energy split, kWh.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub compute: f64,
    pub storage: f64,
    pub network: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(compute: f64, storage: f64, network: f64) -> Self {
        Self {
            compute,
            storage,
            network,
            total: compute + storage + network,
        }
    }

    /// Final energy of a demand list under a given PUE.
    pub fn from_demands(demands: &[Demand], pue: f64) -> Self {
        let (mut c, mut s, mut n) = (0.0, 0.0, 0.0);
        for d in demands {
            match d.component {
                Component::ComputeVcpu | Component::ComputeVgpu => c += d.it_energy * pue,
                Component::Storage => s += d.it_energy * pue,
                Component::Network => n += d.it_energy,
            }
        }
        Self::new(c, s, n)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.compute * k, self.storage * k, self.network * k)
    }
}

fn kwh(hours: f64, watts: f64) -> f64 {
    hours * watts / 1000.0
}

/// Compute demand of `count` runs of a traditional task whose final energy
/// per run is `final_energy`, split across vCPU and vGPU.
fn task_compute(
    model: &Model,
    task: &TraditionalTask,
    step: Step,
    final_energy: f64,
) -> [Demand; 2] {
    let it = final_energy / model.datacenter.pue;
    let cpu_it = it * task.vcpu_share;
    let gpu_it = it * (1.0 - task.vcpu_share);
    let f = &model.factors;
    [
        Demand {
            step,
            component: Component::ComputeVcpu,
            class: DemandClass::TaskCompute,
            quantity: cpu_it * 1000.0 / f.vcpu.power,
            it_energy: cpu_it,
        },
        Demand {
            step,
            component: Component::ComputeVgpu,
            class: DemandClass::TaskCompute,
            quantity: gpu_it * 1000.0 / f.vgpu.power,
            it_energy: gpu_it,
        },
    ]
}

fn payload_demands(
    model: &Model,
    step: Step,
    gb: f64,
    storage_hours: f64,
    transfers: f64,
) -> [Demand; 2] {
    let gbh = gb * storage_hours;
    let net_gb = gb * transfers;
    [
        Demand {
            step,
            component: Component::Storage,
            class: DemandClass::Storage,
            quantity: gbh,
            it_energy: kwh(gbh, model.factors.storage.power),
        },
        Demand {
            step,
            component: Component::Network,
            class: DemandClass::Network,
            quantity: net_gb,
            it_energy: net_gb * model.factors.network.power,
        },
    ]
}

/// Demand of one inference.
pub fn inference_demands(model: &Model, kind: InferenceKind) -> Result<Vec<Demand>> {
    let cat = &model.catalog;
    let step = Step::Inference;
    let mut out = Vec::with_capacity(8);
    match kind.ai_type() {
        AiType::GenAi => {
            let size = kind.model_size.ok_or_else(|| {
                Error::UnsupportedUseCase(format!("{} needs a model size", kind.uc_type))
            })?;
            let w = cat.workload(kind.uc_type)?;
            let m = cat.model(size)?;
            let point = if w.long_prompt {
                &m.long_prompt
            } else {
                &m.short_prompt
            };
            let secs = point.ttft + w.output_tokens / point.throughput;
            let hours = w.llm_calls * secs / 3600.0 * vgpu_count(m) as f64;
            out.push(Demand {
                step,
                component: Component::ComputeVgpu,
                class: DemandClass::LlmCompute,
                quantity: hours,
                it_energy: kwh(hours, model.factors.vgpu.power),
            });
            if w.tool_calls > 0.0 {
                let tool = cat.task(cat.tool_task)?;
                out.extend(task_compute(
                    model,
                    tool,
                    step,
                    w.tool_calls * tool.compute_energy_kwh,
                ));
            }
            let gb = (w.input_tokens + w.output_tokens) * cat.bytes_per_token * 1e-9;
            out.extend(payload_demands(
                model,
                step,
                gb,
                cat.storage_retention_hours,
                1.0,
            ));
        }
        AiType::Traditional => {
            let t = cat.task(kind.uc_type)?;
            out.extend(task_compute(model, t, step, t.compute_energy_kwh));
            out.extend(payload_demands(
                model,
                step,
                t.payload_gb,
                cat.storage_retention_hours,
                1.0,
            ));
        }
    }
    Ok(out)
}

/// Lifetime fine-tuning demand of one use case (empty for GenAI).
pub fn finetuning_demands(model: &Model, uc: UseCaseType) -> Result<Vec<Demand>> {
    if uc.ai_type() == AiType::GenAi {
        return Ok(Vec::new());
    }
    let t = model.catalog.task(uc)?;
    let ft = &t.finetune;
    let compute_final = match &ft.compute {
        super::FineTuneCompute::Measured {
            total_energy_kwh, ..
        } => *total_energy_kwh,
        // each pass costs the IT energy of one inference
        c @ super::FineTuneCompute::Passes { .. } => {
            c.pass_count().unwrap_or(0.0) * t.compute_energy_kwh / model.datacenter.pue
        }
    };
    let step = Step::FineTuning;
    let mut out = task_compute(model, t, step, compute_final).to_vec();
    out.extend(payload_demands(
        model,
        step,
        ft.dataset_gb,
        ft.storage_hours,
        ft.downloads,
    ));
    Ok(out)
}

/// Operational and embodied impacts of a demand list.
pub fn demand_grid(
    model: &Model,
    demands: &[Demand],
    ops: &OperationalFactors,
    scaling: &DemandScaling,
) -> ImpactGrid {
    let mut grid = ImpactGrid::default();
    for d in demands {
        let k = scaling.factor(d.class);
        let final_energy = ops.final_energy(d.component, d.it_energy * k);
        grid.add(
            d.step,
            d.component,
            Stage::Operational,
            ops.apply(final_energy),
        );
        let compute = matches!(d.component, Component::ComputeVcpu | Component::ComputeVgpu);
        if compute || model.options.embodied_storage_network {
            let per_unit = model.factors.factor(d.component.capacity()).embodied;
            grid.add(
                d.step,
                d.component,
                Stage::Embodied,
                per_unit * (d.quantity * k),
            );
        }
    }
    grid
}

pub fn genai_inference_energy(
    model: &Model,
    uc: UseCaseType,
    size: super::ModelSize,
) -> Result<EnergyBreakdown> {
    if uc.ai_type() != AiType::GenAi {
        return Err(Error::UnsupportedUseCase(format!(
            "{uc} is not a GenAI use case"
        )));
    }
    let d = inference_demands(model, InferenceKind::genai(uc, size))?;
    Ok(EnergyBreakdown::from_demands(&d, model.datacenter.pue))
}

pub fn traditional_inference_energy(model: &Model, uc: UseCaseType) -> Result<EnergyBreakdown> {
    if uc.ai_type() != AiType::Traditional {
        return Err(Error::UnsupportedUseCase(format!(
            "{uc} is not a traditional use case"
        )));
    }
    let d = inference_demands(model, InferenceKind::traditional(uc))?;
    Ok(EnergyBreakdown::from_demands(&d, model.datacenter.pue))
}

/// Energy to keep `data_gb` on storage for the retention period, kWh.
pub fn storage_energy_per_inference(data_gb: f64, model: &Model) -> Result<f64> {
    if !(data_gb.is_finite() && data_gb >= 0.0) {
        return Err(Error::invalid("data_gb", "must be >= 0"));
    }
    Ok(kwh(
        data_gb * model.catalog.storage_retention_hours,
        model.factors.storage.power,
    ) * model.datacenter.pue)
}

/// Energy to move `data_gb` over the backbone network, kWh.
pub fn network_energy_per_inference(data_gb: f64, factors: &EmissionFactorTable) -> Result<f64> {
    if !(data_gb.is_finite() && data_gb >= 0.0) {
        return Err(Error::invalid("data_gb", "must be >= 0"));
    }
    Ok(data_gb * factors.network.power)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FineTuningEnergy {
    pub lifetime: EnergyBreakdown,
    pub annual: EnergyBreakdown,
}

pub fn finetuning_energy(model: &Model, uc: UseCaseType) -> Result<FineTuningEnergy> {
    let d = finetuning_demands(model, uc)?;
    let lifetime = EnergyBreakdown::from_demands(&d, model.datacenter.pue);
    let years = match uc.ai_type() {
        AiType::GenAi => 1.0,
        AiType::Traditional => model.catalog.task(uc)?.finetune.lifetime_years,
    };
    Ok(FineTuningEnergy {
        lifetime,
        annual: lifetime.scaled(1.0 / years),
    })
}

/// Energy and impacts of one inference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferenceImpact {
    pub kind: InferenceKind,
    pub energy: EnergyBreakdown,
    pub operational: ImpactVector,
    pub embodied: ImpactVector,
    pub grid: ImpactGrid,
}

pub fn inference_impact(model: &Model, kind: InferenceKind) -> Result<InferenceImpact> {
    let demands = inference_demands(model, kind)?;
    let ops = model.operational_factors()?;
    let grid = demand_grid(model, &demands, &ops, &DemandScaling::IDENTITY);
    Ok(InferenceImpact {
        kind,
        energy: EnergyBreakdown::from_demands(&demands, model.datacenter.pue),
        operational: grid.stage_total(Stage::Operational),
        embodied: grid.stage_total(Stage::Embodied),
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::usecase::ModelSize;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn m() -> Model {
        Model::default()
    }

    #[test]
    fn medium_chat_compute() {
        let e = genai_inference_energy(&m(), UseCaseType::Chat, ModelSize::Medium).unwrap();
        // hand: (0.36 + 208.45/43.4) s * 19 vGPU * 50.1 W * 1.15
        let hand = (0.36 + 208.45 / 43.4) / 3600.0 * 19.0 * 50.1 / 1000.0 * 1.15;
        assert_relative_eq!(e.compute, hand, max_relative = 1e-12);
        assert_relative_eq!(e.compute, 1.55e-3, max_relative = 0.05);
        assert_eq!(e.total, e.compute + e.storage + e.network);
    }

    #[test]
    fn rag_uses_long_prompt_and_one_tool_call() {
        let e = genai_inference_energy(&m(), UseCaseType::Rag, ModelSize::Medium).unwrap();
        let llm = (0.43 + 363.0 / 44.0) / 3600.0 * 19.0 * 50.1 / 1000.0 * 1.15;
        assert_relative_eq!(e.compute, llm + 3.6e-6, max_relative = 1e-12);
    }

    #[test]
    fn traditional_compute_is_the_constant() {
        let e = traditional_inference_energy(&m(), UseCaseType::Nlp).unwrap();
        assert_relative_eq!(e.compute, 3.6e-6, max_relative = 1e-14);
        let cv = traditional_inference_energy(&m(), UseCaseType::ComputerVision).unwrap();
        assert_relative_eq!(cv.network, 6.22e-3 * 3.42e-2, max_relative = 1e-14);
        assert!(traditional_inference_energy(&m(), UseCaseType::Chat).is_err());
        assert!(genai_inference_energy(&m(), UseCaseType::Nlp, ModelSize::Low).is_err());
    }

    #[test]
    fn storage_and_network_zero_payload() {
        assert_eq!(storage_energy_per_inference(0.0, &m()).unwrap(), 0.0);
        assert_eq!(
            network_energy_per_inference(0.0, &m().factors).unwrap(),
            0.0
        );
        assert!(storage_energy_per_inference(-1.0, &m()).is_err());
    }

    #[test]
    fn genai_has_no_finetuning() {
        let f = finetuning_energy(&m(), UseCaseType::Agents).unwrap();
        assert_eq!(f.lifetime, EnergyBreakdown::default());
    }

    #[test]
    fn finetuning_lifetime_values() {
        let tab = finetuning_energy(&m(), UseCaseType::Tabular).unwrap();
        assert_relative_eq!(tab.lifetime.compute, 2.0, max_relative = 1e-12);
        assert_relative_eq!(tab.annual.compute, 0.4, max_relative = 1e-12);
        let cv = finetuning_energy(&m(), UseCaseType::ComputerVision).unwrap();
        assert_relative_eq!(cv.lifetime.compute, 21.0, max_relative = 0.01);
        assert_relative_eq!(cv.lifetime.storage, 3.22e-3, max_relative = 0.01);
        assert_relative_eq!(cv.lifetime.network, 21.3, max_relative = 0.01);
        let nlp = finetuning_energy(&m(), UseCaseType::Nlp).unwrap();
        assert_relative_eq!(nlp.lifetime.compute, 0.881, max_relative = 0.01);
        assert_relative_eq!(nlp.lifetime.network, 3.59e-3, max_relative = 0.01);
    }

    #[test]
    fn embodied_storage_network_is_opt_in() {
        let mut model = m();
        let kind = InferenceKind::traditional(UseCaseType::ComputerVision);
        let base = inference_impact(&model, kind).unwrap();
        assert_eq!(
            base.grid
                .get(Step::Inference, Component::Network, Stage::Embodied),
            ImpactVector::ZERO
        );
        model.options.embodied_storage_network = true;
        let full = inference_impact(&model, kind).unwrap();
        assert!(full.embodied.gwp > base.embodied.gwp);
    }

    proptest! {
        #[test]
        fn payload_energy_is_linear(gb in 0.0f64..10.0, k in 0.0f64..100.0) {
            let model = m();
            let s = storage_energy_per_inference(gb * k, &model).unwrap();
            let s1 = storage_energy_per_inference(gb, &model).unwrap() * k;
            prop_assert!((s - s1).abs() <= 1e-12 * s.abs().max(1e-300));
            let n = network_energy_per_inference(gb * k, &model.factors).unwrap();
            let n1 = network_energy_per_inference(gb, &model.factors).unwrap() * k;
            prop_assert!((n - n1).abs() <= 1e-12 * n.abs().max(1e-300));
        }

        #[test]
        fn compute_affine_in_output_tokens(extra in 1.0f64..5000.0) {
            let mut model = m();
            let base = genai_inference_energy(&model, UseCaseType::Chat, ModelSize::Low).unwrap().compute;
            model.catalog.workloads[0].output_tokens += extra;
            let more = genai_inference_energy(&model, UseCaseType::Chat, ModelSize::Low).unwrap().compute;
            prop_assert!(more > base);
            model.catalog.workloads[0].output_tokens += extra;
            let most = genai_inference_energy(&model, UseCaseType::Chat, ModelSize::Low).unwrap().compute;
            prop_assert!(((most - more) - (more - base)).abs() <= 1e-9 * (more - base));
        }
    }
}
