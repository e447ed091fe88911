//! Use-case taxonomy and per-inference / fine-tuning energy.

pub mod catalog;
pub mod energy;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use catalog::{
    vgpu_count, Catalog, FineTuneCompute, FineTuneProfile, LatencyPoint, ModelProfile,
    TraditionalTask, Workload,
};
pub use energy::{
    finetuning_demands, finetuning_energy, genai_inference_energy, inference_demands,
    inference_impact, network_energy_per_inference, storage_energy_per_inference,
    traditional_inference_energy, Demand, DemandClass, EnergyBreakdown, InferenceImpact,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AiType {
    #[serde(rename = "GenAI")]
    GenAi,
    Traditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UseCaseType {
    Chat,
    #[serde(rename = "RAG")]
    Rag,
    Agents,
    Tabular,
    ComputerVision,
    #[serde(rename = "NLP")]
    Nlp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelSize {
    Low,
    Medium,
    High,
}

/// Daily users on a log scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UsersClass {
    Low,
    Medium,
    High,
    VeryHigh,
}

/// Requests per user per day; the magnitudes live in the portfolio spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FreqClass {
    Low,
    Medium,
    High,
    VeryHigh,
}

impl AiType {
    pub const ALL: [AiType; 2] = [AiType::GenAi, AiType::Traditional];

    pub fn use_case_types(self) -> [UseCaseType; 3] {
        match self {
            AiType::GenAi => [UseCaseType::Chat, UseCaseType::Rag, UseCaseType::Agents],
            AiType::Traditional => [
                UseCaseType::Tabular,
                UseCaseType::ComputerVision,
                UseCaseType::Nlp,
            ],
        }
    }
}

impl UseCaseType {
    pub const ALL: [UseCaseType; 6] = [
        UseCaseType::Chat,
        UseCaseType::Rag,
        UseCaseType::Agents,
        UseCaseType::Tabular,
        UseCaseType::ComputerVision,
        UseCaseType::Nlp,
    ];

    pub fn ai_type(self) -> AiType {
        match self {
            UseCaseType::Chat | UseCaseType::Rag | UseCaseType::Agents => AiType::GenAi,
            _ => AiType::Traditional,
        }
    }
}

impl ModelSize {
    pub const ALL: [ModelSize; 3] = [ModelSize::Low, ModelSize::Medium, ModelSize::High];
}

impl UsersClass {
    pub const ALL: [UsersClass; 4] = [
        UsersClass::Low,
        UsersClass::Medium,
        UsersClass::High,
        UsersClass::VeryHigh,
    ];

    pub fn users(self) -> f64 {
        match self {
            UsersClass::Low => 10.0,
            UsersClass::Medium => 100.0,
            UsersClass::High => 1000.0,
            UsersClass::VeryHigh => 10000.0,
        }
    }
}

impl FreqClass {
    pub const ALL: [FreqClass; 4] = [
        FreqClass::Low,
        FreqClass::Medium,
        FreqClass::High,
        FreqClass::VeryHigh,
    ];
}

impl fmt::Display for AiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AiType::GenAi => "GenAI",
            AiType::Traditional => "Traditional",
        })
    }
}

impl fmt::Display for UseCaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UseCaseType::Chat => "Chat",
            UseCaseType::Rag => "RAG",
            UseCaseType::Agents => "Agents",
            UseCaseType::Tabular => "Tabular",
            UseCaseType::ComputerVision => "ComputerVision",
            UseCaseType::Nlp => "NLP",
        })
    }
}

macro_rules! debug_display {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    )*};
}
debug_display!(ModelSize, UsersClass, FreqClass);

/// What runs for one inference: use-case type plus model size for GenAI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InferenceKind {
    pub uc_type: UseCaseType,
    pub model_size: Option<ModelSize>,
}

impl InferenceKind {
    pub fn genai(uc_type: UseCaseType, size: ModelSize) -> Self {
        Self {
            uc_type,
            model_size: Some(size),
        }
    }

    pub fn traditional(uc_type: UseCaseType) -> Self {
        Self {
            uc_type,
            model_size: None,
        }
    }

    pub fn ai_type(&self) -> AiType {
        self.uc_type.ai_type()
    }

    /// The twelve distinct inference profiles: GenAI type-major, then Traditional.
    pub fn all() -> Vec<InferenceKind> {
        let mut v = Vec::with_capacity(12);
        for uc in AiType::GenAi.use_case_types() {
            for size in ModelSize::ALL {
                v.push(Self::genai(uc, size));
            }
        }
        for uc in AiType::Traditional.use_case_types() {
            v.push(Self::traditional(uc));
        }
        v
    }
}

impl fmt::Display for InferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model_size {
            Some(s) => write!(f, "{} {}", s, self.uc_type),
            None => write!(f, "{}", self.uc_type),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UseCaseCluster {
    /// 1-based position in [`enumerate_clusters`].
    pub id: u16,
    pub ai_type: AiType,
    pub uc_type: UseCaseType,
    pub model_size: Option<ModelSize>,
    pub users: UsersClass,
    pub freq: FreqClass,
}

impl UseCaseCluster {
    pub fn kind(&self) -> InferenceKind {
        InferenceKind {
            uc_type: self.uc_type,
            model_size: self.model_size,
        }
    }
}

/// All 192 clusters in a fixed order (144 GenAI, then 48 Traditional).
pub fn enumerate_clusters() -> Vec<UseCaseCluster> {
    let mut out = Vec::with_capacity(192);
    for kind in InferenceKind::all() {
        for users in UsersClass::ALL {
            for freq in FreqClass::ALL {
                out.push(UseCaseCluster {
                    id: out.len() as u16 + 1,
                    ai_type: kind.ai_type(),
                    uc_type: kind.uc_type,
                    model_size: kind.model_size,
                    users,
                    freq,
                });
            }
        }
    }
    out
}
