//! Reference models, workload shapes and traditional-task constants.

use serde::{Deserialize, Serialize};

use super::{ModelSize, UseCaseType};
use crate::error::{Error, Result};

/// Measured latency for one prompt length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyPoint {
    pub prompt_tokens: u32,
    /// Time to first token, s.
    pub ttft: f64,
    /// Output tokens per second after the first token.
    pub throughput: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelProfile {
    pub size: ModelSize,
    pub name: String,
    /// Parameters, billions.
    pub params_b: f64,
    pub bytes_per_param: f64,
    pub memory_overhead: f64,
    /// Memory of one vGPU instance, GB.
    pub vgpu_memory_gb: f64,
    pub short_prompt: LatencyPoint,
    pub long_prompt: LatencyPoint,
}

/// Number of vGPU instances needed to hold the weights.
///
/// # Example
///
/// ```
/// use ai_footprint::usecase::{vgpu_count, Catalog};
/// use ai_footprint::usecase::ModelSize;
///
/// let cat = Catalog::default();
/// assert_eq!(vgpu_count(cat.model(ModelSize::Medium).unwrap()), 19);
/// ```
pub fn vgpu_count(p: &ModelProfile) -> u32 {
    let n = (p.params_b * p.bytes_per_param * p.memory_overhead / p.vgpu_memory_gb).ceil();
    (n as u32).max(1)
}

/// Token profile of a GenAI use-case type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Workload {
    pub uc_type: UseCaseType,
    pub input_tokens: f64,
    pub output_tokens: f64,
    /// LLM calls per inference, each paying a full TTFT.
    pub llm_calls: f64,
    /// Tool calls per inference, each modeled as one NLP inference.
    pub tool_calls: f64,
    /// Use the long-prompt latency row.
    pub long_prompt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FineTuneCompute {
    /// Measured energy summed over all training runs of the lifetime.
    Measured { runs: f64, total_energy_kwh: f64 },
    /// Forward+backward passes, each costing one inference.
    Passes {
        tests: f64,
        epochs: f64,
        samples: f64,
        batch_size: f64,
        passes_per_batch: f64,
    },
}

impl FineTuneCompute {
    pub fn pass_count(&self) -> Option<f64> {
        match self {
            FineTuneCompute::Passes {
                tests,
                epochs,
                samples,
                batch_size,
                passes_per_batch,
            } => Some(tests * epochs * (samples / batch_size) * passes_per_batch),
            FineTuneCompute::Measured { .. } => None,
        }
    }
}

/// Lifetime fine-tuning of one traditional model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FineTuneProfile {
    pub compute: FineTuneCompute,
    pub dataset_gb: f64,
    /// Hours the dataset stays on storage over the whole training.
    pub storage_hours: f64,
    /// Dataset transfers over the lifetime.
    pub downloads: f64,
    pub lifetime_years: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraditionalTask {
    pub uc_type: UseCaseType,
    /// Final compute energy of one inference, kWh.
    pub compute_energy_kwh: f64,
    /// Share of the IT energy drawn by vCPUs; the rest runs on vGPU.
    pub vcpu_share: f64,
    /// Data stored and transmitted per inference, GB.
    pub payload_gb: f64,
    pub finetune: FineTuneProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub models: Vec<ModelProfile>,
    pub workloads: Vec<Workload>,
    pub tasks: Vec<TraditionalTask>,
    pub bytes_per_token: f64,
    /// How long inference logs are kept, h.
    pub storage_retention_hours: f64,
    /// Task used for RAG retrieval and agent tool calls.
    pub tool_task: UseCaseType,
}

impl Catalog {
    pub fn model(&self, size: ModelSize) -> Result<&ModelProfile> {
        self.models
            .iter()
            .find(|m| m.size == size)
            .ok_or_else(|| Error::invalid("models", format!("no profile for size {size}")))
    }

    pub fn workload(&self, uc: UseCaseType) -> Result<&Workload> {
        self.workloads
            .iter()
            .find(|w| w.uc_type == uc)
            .ok_or_else(|| Error::UnsupportedUseCase(format!("no workload for {uc}")))
    }

    pub fn task(&self, uc: UseCaseType) -> Result<&TraditionalTask> {
        self.tasks
            .iter()
            .find(|t| t.uc_type == uc)
            .ok_or_else(|| Error::UnsupportedUseCase(format!("no traditional task for {uc}")))
    }

    pub fn validate(&self) -> Result<()> {
        for size in ModelSize::ALL {
            self.model(size)?;
        }
        for (i, m) in self.models.iter().enumerate() {
            let p = format!("models[{i}]");
            for (name, v) in [
                ("params_b", m.params_b),
                ("bytes_per_param", m.bytes_per_param),
                ("memory_overhead", m.memory_overhead),
                ("vgpu_memory_gb", m.vgpu_memory_gb),
                ("short_prompt.throughput", m.short_prompt.throughput),
                ("long_prompt.throughput", m.long_prompt.throughput),
            ] {
                positive(&format!("{p}.{name}"), v)?;
            }
            non_negative(&format!("{p}.short_prompt.ttft"), m.short_prompt.ttft)?;
            non_negative(&format!("{p}.long_prompt.ttft"), m.long_prompt.ttft)?;
        }
        for uc in [UseCaseType::Chat, UseCaseType::Rag, UseCaseType::Agents] {
            self.workload(uc)?;
        }
        for (i, w) in self.workloads.iter().enumerate() {
            let p = format!("workloads[{i}]");
            if w.uc_type.ai_type() != super::AiType::GenAi {
                return Err(Error::invalid(
                    format!("{p}.uc_type"),
                    "must be a GenAI type",
                ));
            }
            for (name, v) in [
                ("input_tokens", w.input_tokens),
                ("output_tokens", w.output_tokens),
                ("llm_calls", w.llm_calls),
                ("tool_calls", w.tool_calls),
            ] {
                non_negative(&format!("{p}.{name}"), v)?;
            }
        }
        for uc in [
            UseCaseType::Tabular,
            UseCaseType::ComputerVision,
            UseCaseType::Nlp,
        ] {
            self.task(uc)?;
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let p = format!("tasks[{i}]");
            if t.uc_type.ai_type() != super::AiType::Traditional {
                return Err(Error::invalid(
                    format!("{p}.uc_type"),
                    "must be a traditional type",
                ));
            }
            non_negative(&format!("{p}.compute_energy_kwh"), t.compute_energy_kwh)?;
            non_negative(&format!("{p}.payload_gb"), t.payload_gb)?;
            if !(0.0..=1.0).contains(&t.vcpu_share) {
                return Err(Error::invalid(
                    format!("{p}.vcpu_share"),
                    "must be in [0, 1]",
                ));
            }
            let f = &t.finetune;
            non_negative(&format!("{p}.finetune.dataset_gb"), f.dataset_gb)?;
            non_negative(&format!("{p}.finetune.storage_hours"), f.storage_hours)?;
            non_negative(&format!("{p}.finetune.downloads"), f.downloads)?;
            positive(&format!("{p}.finetune.lifetime_years"), f.lifetime_years)?;
            match &f.compute {
                FineTuneCompute::Measured {
                    runs,
                    total_energy_kwh,
                } => {
                    non_negative(&format!("{p}.finetune.compute.runs"), *runs)?;
                    non_negative(
                        &format!("{p}.finetune.compute.total_energy_kwh"),
                        *total_energy_kwh,
                    )?;
                }
                FineTuneCompute::Passes { batch_size, .. } => {
                    positive(&format!("{p}.finetune.compute.batch_size"), *batch_size)?;
                    let n = f.compute.pass_count().unwrap_or(0.0);
                    non_negative(&format!("{p}.finetune.compute"), n)?;
                }
            }
        }
        if self.task(self.tool_task)?.uc_type.ai_type() != super::AiType::Traditional {
            return Err(Error::invalid("tool_task", "must be a traditional type"));
        }
        positive("bytes_per_token", self.bytes_per_token)?;
        non_negative("storage_retention_hours", self.storage_retention_hours)
    }
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(path, "must be > 0"))
    }
}

fn non_negative(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(path, "must be >= 0"))
    }
}

fn llama(
    size: ModelSize,
    name: &str,
    params_b: f64,
    short: (f64, f64),
    long: (f64, f64),
) -> ModelProfile {
    ModelProfile {
        size,
        name: name.into(),
        params_b,
        bytes_per_param: 2.0,
        memory_overhead: 1.3,
        vgpu_memory_gb: 10.0,
        short_prompt: LatencyPoint {
            prompt_tokens: 100,
            ttft: short.0,
            throughput: short.1,
        },
        long_prompt: LatencyPoint {
            prompt_tokens: 1000,
            ttft: long.0,
            throughput: long.1,
        },
    }
}

impl Default for Catalog {
    fn default() -> Self {
        let five_years = |compute, dataset_gb, storage_hours| FineTuneProfile {
            compute,
            dataset_gb,
            storage_hours,
            downloads: 5.0,
            lifetime_years: 5.0,
        };
        Self {
            models: vec![
                llama(
                    ModelSize::Low,
                    "Llama 3.1 8B",
                    8.0,
                    (0.26, 127.0),
                    (0.29, 124.3),
                ),
                llama(
                    ModelSize::Medium,
                    "Llama 3.1 70B",
                    70.0,
                    (0.36, 43.4),
                    (0.43, 44.0),
                ),
                llama(
                    ModelSize::High,
                    "Llama 3.1 405B",
                    405.0,
                    (0.60, 21.9),
                    (0.91, 21.7),
                ),
            ],
            workloads: vec![
                Workload {
                    uc_type: UseCaseType::Chat,
                    input_tokens: 126.89,
                    output_tokens: 208.45,
                    llm_calls: 1.0,
                    tool_calls: 0.0,
                    long_prompt: false,
                },
                Workload {
                    uc_type: UseCaseType::Rag,
                    input_tokens: 5333.0,
                    output_tokens: 363.0,
                    llm_calls: 1.0,
                    tool_calls: 1.0,
                    long_prompt: true,
                },
                Workload {
                    uc_type: UseCaseType::Agents,
                    input_tokens: 405.65,
                    output_tokens: 390.93,
                    llm_calls: 3.03,
                    tool_calls: 3.03,
                    long_prompt: false,
                },
            ],
            tasks: vec![
                TraditionalTask {
                    uc_type: UseCaseType::Tabular,
                    compute_energy_kwh: 2.99e-8,
                    vcpu_share: 1.0,
                    payload_gb: 1e-7,
                    finetune: five_years(
                        FineTuneCompute::Measured {
                            runs: 1500.0,
                            total_energy_kwh: 2.0,
                        },
                        0.02,
                        35.83,
                    ),
                },
                TraditionalTask {
                    uc_type: UseCaseType::ComputerVision,
                    compute_energy_kwh: 2.58e-5,
                    vcpu_share: 0.0427,
                    payload_gb: 6.22e-3,
                    finetune: five_years(
                        FineTuneCompute::Passes {
                            tests: 15.0,
                            epochs: 50.0,
                            samples: 10_000.0,
                            batch_size: 16.0,
                            passes_per_batch: 2.0,
                        },
                        124.4,
                        18.01,
                    ),
                },
                TraditionalTask {
                    uc_type: UseCaseType::Nlp,
                    compute_energy_kwh: 3.6e-6,
                    vcpu_share: 0.0433,
                    payload_gb: 2e-6,
                    finetune: five_years(
                        FineTuneCompute::Passes {
                            tests: 20.0,
                            epochs: 30.0,
                            samples: 3750.0,
                            batch_size: 16.0,
                            passes_per_batch: 2.0,
                        },
                        0.021,
                        0.775,
                    ),
                },
            ],
            bytes_per_token: 4.0,
            storage_retention_hours: 8760.0,
            tool_task: UseCaseType::Nlp,
        }
    }
}
