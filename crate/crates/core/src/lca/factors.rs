use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impact::ImpactVector;

/// An IT capacity that carries power and embodied factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Capacity {
    /// One vGPU (MIG instance) for one hour.
    VgpuHour,
    /// One vCPU for one hour.
    VcpuHour,
    /// One GB stored for one hour.
    StorageGbHour,
    /// One GB transmitted on the backbone network.
    NetworkGb,
}

impl Capacity {
    pub const ALL: [Capacity; 4] = [
        Capacity::VgpuHour,
        Capacity::VcpuHour,
        Capacity::StorageGbHour,
        Capacity::NetworkGb,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Capacity::VgpuHour => "vgpu_hour",
            Capacity::VcpuHour => "vcpu_hour",
            Capacity::StorageGbHour => "storage_gb_hour",
            Capacity::NetworkGb => "network_gb",
        }
    }

    /// Unit of the usage quantity for this capacity.
    pub fn usage_unit(self) -> &'static str {
        match self {
            Capacity::VgpuHour | Capacity::VcpuHour => "h",
            Capacity::StorageGbHour => "GB.h",
            Capacity::NetworkGb => "GB",
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Capacity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' ', '.'], "_");
        match norm.as_str() {
            "vgpu_hour" | "vgpu_h" | "1h_vgpu" | "vgpu" => Ok(Capacity::VgpuHour),
            "vcpu_hour" | "vcpu_h" | "1h_vcpu" | "vcpu" => Ok(Capacity::VcpuHour),
            "storage_gb_hour" | "gb_hour_storage" | "storage" => Ok(Capacity::StorageGbHour),
            "network_gb" | "gb_network" | "network" => Ok(Capacity::NetworkGb),
            _ => Err(Error::UnknownCapacity(s.to_string())),
        }
    }
}

/// Electricity grid regions carried by the factor table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "US")]
    Us,
    #[serde(rename = "CN")]
    Cn,
    #[serde(rename = "EU-27")]
    Eu27,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::Us, Region::Cn, Region::Eu27];

    pub fn code(self) -> &'static str {
        match self {
            Region::Us => "US",
            Region::Cn => "CN",
            Region::Eu27 => "EU-27",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "US" | "USA" | "AMERICAS" => Ok(Region::Us),
            // APAC is proxied by the Chinese grid
            "CN" | "CHINA" | "APAC" => Ok(Region::Cn),
            "EU-27" | "EU27" | "EU" | "EUROPE" => Ok(Region::Eu27),
            _ => Err(Error::UnknownRegion(s.to_string())),
        }
    }
}

/// Power draw and embodied impact of one unit of a capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityFactor {
    /// W per vCPU/vGPU, W per GB for storage, kWh per GB for network.
    pub power: f64,
    /// Embodied impact per unit of usage (`final_energy` unused).
    pub embodied: ImpactVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionFactorTable {
    pub vgpu: CapacityFactor,
    pub vcpu: CapacityFactor,
    pub storage: CapacityFactor,
    pub network: CapacityFactor,
    /// Per final kWh.
    pub grid: BTreeMap<Region, ImpactVector>,
    /// Per litre of cooling water.
    pub cooling_water: ImpactVector,
}

impl EmissionFactorTable {
    pub fn factor(&self, capacity: Capacity) -> &CapacityFactor {
        match capacity {
            Capacity::VgpuHour => &self.vgpu,
            Capacity::VcpuHour => &self.vcpu,
            Capacity::StorageGbHour => &self.storage,
            Capacity::NetworkGb => &self.network,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for cap in Capacity::ALL {
            let f = self.factor(cap);
            let path = format!("capacities.{}", cap.key());
            if !(f.power.is_finite() && f.power > 0.0) {
                return Err(Error::invalid(format!("{path}.power"), "must be > 0"));
            }
            check_positive(&f.embodied, &format!("{path}.embodied"))?;
        }
        if self.vgpu.power <= self.vcpu.power {
            return Err(Error::invalid(
                "capacities.vgpu_hour.power",
                "vGPU power must exceed vCPU power",
            ));
        }
        for region in Region::ALL {
            let row = self
                .grid
                .get(&region)
                .ok_or_else(|| Error::MissingRegion(region.to_string()))?;
            check_positive(row, &format!("grid.{region}"))?;
        }
        check_positive(&self.cooling_water, "cooling_water")
    }
}

fn check_positive(v: &ImpactVector, path: &str) -> Result<()> {
    for c in crate::impact::Criterion::ALL.iter().skip(1) {
        let x = v.get(*c);
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::invalid(
                format!("{path}.{}", c.label()),
                "must be > 0",
            ));
        }
    }
    Ok(())
}

impl Default for EmissionFactorTable {
    fn default() -> Self {
        let grid = BTreeMap::from([
            (
                Region::Us,
                ImpactVector::criteria(0.547, 1.86e-2, 11.6, 2.21e-8),
            ),
            (
                Region::Cn,
                ImpactVector::criteria(0.871, 3.82e-2, 15.6, 1.12e-8),
            ),
            (
                Region::Eu27,
                ImpactVector::criteria(0.41, 1.36e-2, 12.5, 2.97e-8),
            ),
        ]);
        Self {
            vgpu: CapacityFactor {
                power: 50.1,
                embodied: ImpactVector::criteria(1.93e-3, 6.59e-4, 2.85e-2, 9.84e-9),
            },
            vcpu: CapacityFactor {
                power: 3.15,
                embodied: ImpactVector::criteria(1.67e-4, 5.34e-5, 2.49e-3, 3.85e-8),
            },
            storage: CapacityFactor {
                power: 1.25e-3,
                embodied: ImpactVector::criteria(1.11e-6, 4.81e-7, 4.95e-6, 1.31e-11),
            },
            network: CapacityFactor {
                power: 3.42e-2,
                embodied: ImpactVector::criteria(3.65e-4, 1.17e-4, 5.65e-3, 5.85e-8),
            },
            grid,
            cooling_water: ImpactVector::criteria(5.84e-4, 4.31e-2, 2.42e-3, 6.28e-10),
        }
    }
}

/// Hosting assumptions shared by every compute and storage capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatacenterProfile {
    pub pue: f64,
    /// Litres of cooling water per IT kWh.
    pub wue: f64,
    pub region_weights: BTreeMap<Region, f64>,
}

impl Default for DatacenterProfile {
    fn default() -> Self {
        Self {
            pue: 1.15,
            wue: 0.18,
            region_weights: BTreeMap::from([
                (Region::Us, 0.45),
                (Region::Eu27, 0.28),
                (Region::Cn, 0.27),
            ]),
        }
    }
}

impl DatacenterProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.pue.is_finite() && self.pue >= 1.0) {
            return Err(Error::invalid(
                "datacenter.pue",
                format!("{} < 1", self.pue),
            ));
        }
        if !(self.wue.is_finite() && self.wue >= 0.0) {
            return Err(Error::invalid("datacenter.wue", "must be >= 0"));
        }
        for (r, w) in &self.region_weights {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::invalid(
                    format!("datacenter.region_weights.{r}"),
                    "must be a fraction >= 0",
                ));
            }
        }
        let sum: f64 = self.region_weights.values().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Distribution {
                field: "datacenter.region_weights".into(),
                sum,
            });
        }
        Ok(())
    }

    /// Region-weighted grid factor per final kWh.
    pub fn blended_grid(&self, factors: &EmissionFactorTable) -> Result<ImpactVector> {
        self.validate()?;
        let mut acc = ImpactVector::ZERO;
        for (region, w) in &self.region_weights {
            let row = factors
                .grid
                .get(region)
                .ok_or_else(|| Error::MissingRegion(region.to_string()))?;
            acc += *row * *w;
        }
        Ok(acc)
    }
}
