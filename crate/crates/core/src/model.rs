use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lca::{DatacenterProfile, EmissionFactorTable, OperationalFactors};
use crate::usecase::Catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModelOptions {
    /// Also charge embodied impacts for storage GB-hours and network GB.
    /// Off by default: per-inference embodied impacts count compute only.
    #[serde(default)]
    pub embodied_storage_network: bool,
}

/// Everything needed to evaluate a use case: factors, hosting and catalog.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Model {
    pub factors: EmissionFactorTable,
    pub datacenter: DatacenterProfile,
    pub catalog: Catalog,
    #[serde(default)]
    pub options: ModelOptions,
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        self.factors.validate()?;
        self.datacenter.validate()?;
        self.catalog.validate()
    }

    pub fn operational_factors(&self) -> Result<OperationalFactors> {
        OperationalFactors::new(&self.datacenter, &self.factors)
    }
}
