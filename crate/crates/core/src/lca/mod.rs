//! Impact formulas: operational (electricity and cooling water) and embodied
//! (amortized hardware manufacturing) impacts over the step/component/stage grid.

pub mod factors;
pub mod server;
pub mod wafer;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impact::ImpactVector;

pub use factors::{Capacity, CapacityFactor, DatacenterProfile, EmissionFactorTable, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    FineTuning,
    Inference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    #[serde(rename = "ComputeVCPU")]
    ComputeVcpu,
    #[serde(rename = "ComputeVGPU")]
    ComputeVgpu,
    Storage,
    Network,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Embodied,
    Operational,
}

impl Step {
    pub const ALL: [Step; 2] = [Step::FineTuning, Step::Inference];
    fn idx(self) -> usize {
        self as usize
    }
}

impl Component {
    pub const ALL: [Component; 4] = [
        Component::ComputeVcpu,
        Component::ComputeVgpu,
        Component::Storage,
        Component::Network,
    ];
    fn idx(self) -> usize {
        self as usize
    }

    pub fn capacity(self) -> Capacity {
        match self {
            Component::ComputeVcpu => Capacity::VcpuHour,
            Component::ComputeVgpu => Capacity::VgpuHour,
            Component::Storage => Capacity::StorageGbHour,
            Component::Network => Capacity::NetworkGb,
        }
    }

    /// Datacenter-hosted components pay PUE; the backbone network does not.
    pub fn in_datacenter(self) -> bool {
        !matches!(self, Component::Network)
    }
}

impl Stage {
    pub const ALL: [Stage; 2] = [Stage::Embodied, Stage::Operational];
    fn idx(self) -> usize {
        self as usize
    }
}

macro_rules! display_via_serde_name {
    ($($t:ty => [$($v:path = $s:literal),*]),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($v => $s),* })
            }
        }
    )*};
}

display_via_serde_name! {
    Step => [Step::FineTuning = "FineTuning", Step::Inference = "Inference"],
    Component => [
        Component::ComputeVcpu = "ComputeVCPU",
        Component::ComputeVgpu = "ComputeVGPU",
        Component::Storage = "Storage",
        Component::Network = "Network"
    ],
    Stage => [Stage::Embodied = "Embodied", Stage::Operational = "Operational"]
}

/// One addressable cell of the impact grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub step: Step,
    pub component: Component,
    pub stage: Stage,
    pub impact: ImpactVector,
}

/// Impacts for every (step, component, stage) triple.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<GridCell>", try_from = "Vec<GridCell>")]
pub struct ImpactGrid {
    cells: [[[ImpactVector; 2]; 4]; 2],
}

impl ImpactGrid {
    pub fn get(&self, step: Step, component: Component, stage: Stage) -> ImpactVector {
        self.cells[step.idx()][component.idx()][stage.idx()]
    }

    pub fn add(&mut self, step: Step, component: Component, stage: Stage, v: ImpactVector) {
        self.cells[step.idx()][component.idx()][stage.idx()] += v;
    }

    /// All 16 cells in step, component, stage order.
    pub fn iter(&self) -> impl Iterator<Item = GridCell> + '_ {
        Step::ALL.into_iter().flat_map(move |step| {
            Component::ALL.into_iter().flat_map(move |component| {
                Stage::ALL.into_iter().map(move |stage| GridCell {
                    step,
                    component,
                    stage,
                    impact: self.get(step, component, stage),
                })
            })
        })
    }

    pub fn total(&self) -> ImpactVector {
        self.iter().map(|c| c.impact).sum()
    }

    pub fn stage_total(&self, stage: Stage) -> ImpactVector {
        self.iter()
            .filter(|c| c.stage == stage)
            .map(|c| c.impact)
            .sum()
    }

    pub fn step_total(&self, step: Step) -> ImpactVector {
        self.iter()
            .filter(|c| c.step == step)
            .map(|c| c.impact)
            .sum()
    }

    pub fn component_total(&self, component: Component) -> ImpactVector {
        self.iter()
            .filter(|c| c.component == component)
            .map(|c| c.impact)
            .sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut out = *self;
        for step in out.cells.iter_mut() {
            for comp in step.iter_mut() {
                for v in comp.iter_mut() {
                    *v = *v * k;
                }
            }
        }
        out
    }

    pub fn merge(&mut self, other: &ImpactGrid) {
        for cell in other.iter() {
            self.add(cell.step, cell.component, cell.stage, cell.impact);
        }
    }
}

impl From<ImpactGrid> for Vec<GridCell> {
    fn from(g: ImpactGrid) -> Self {
        g.iter().collect()
    }
}

impl TryFrom<Vec<GridCell>> for ImpactGrid {
    type Error = String;
    fn try_from(cells: Vec<GridCell>) -> std::result::Result<Self, String> {
        let mut g = ImpactGrid::default();
        for c in cells {
            g.add(c.step, c.component, c.stage, c.impact);
        }
        Ok(g)
    }
}

/// Pre-blended coefficients turning final energy into operational impacts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperationalFactors {
    pub pue: f64,
    /// Blended grid row per final kWh, already multiplied by the grid scale.
    pub grid: ImpactVector,
    /// Cooling-water impacts per final kWh.
    pub cooling: ImpactVector,
}

impl OperationalFactors {
    pub fn new(dc: &DatacenterProfile, factors: &EmissionFactorTable) -> Result<Self> {
        Self::with_overrides(dc, factors, dc.pue, 1.0)
    }

    /// Same blend, but a different PUE and a multiplier on every grid criterion.
    pub fn with_overrides(
        dc: &DatacenterProfile,
        factors: &EmissionFactorTable,
        pue: f64,
        grid_scale: f64,
    ) -> Result<Self> {
        if !(pue.is_finite() && pue >= 1.0) {
            return Err(Error::invalid("pue", format!("{pue} < 1")));
        }
        if !(grid_scale.is_finite() && grid_scale >= 0.0) {
            return Err(Error::invalid("grid_scale", "must be >= 0"));
        }
        let grid = dc.blended_grid(factors)? * grid_scale;
        let cooling = factors.cooling_water * (dc.wue / pue);
        Ok(Self { pue, grid, cooling })
    }

    /// Impacts of `final_energy` kWh delivered to the equipment.
    ///
    /// Cooling water is charged on `final_energy / pue`, which is the IT
    /// energy for datacenter components.
    pub fn apply(&self, final_energy: f64) -> ImpactVector {
        let mut v = self.grid * final_energy + self.cooling * final_energy;
        v.final_energy = final_energy;
        v
    }

    /// Final energy for an IT-side energy of a given component.
    pub fn final_energy(&self, component: Component, it_energy: f64) -> f64 {
        if component.in_datacenter() {
            it_energy * self.pue
        } else {
            it_energy
        }
    }
}

/// Operational impacts of `it_energy` kWh consumed inside the datacenter.
///
/// # Example
///
/// ```
/// use ai_footprint::lca::{operational_impact, DatacenterProfile, EmissionFactorTable};
///
/// let v = operational_impact(1.0, &DatacenterProfile::default(), &EmissionFactorTable::default()).unwrap();
/// assert!((v.final_energy - 1.15).abs() < 1e-12);
/// ```
pub fn operational_impact(
    it_energy: f64,
    dc: &DatacenterProfile,
    factors: &EmissionFactorTable,
) -> Result<ImpactVector> {
    if !(it_energy.is_finite() && it_energy >= 0.0) {
        return Err(Error::invalid("it_energy", "must be finite and >= 0"));
    }
    let f = OperationalFactors::new(dc, factors)?;
    Ok(f.apply(it_energy * dc.pue))
}

/// Operational impacts of backbone network energy (no datacenter overhead).
pub fn network_operational_impact(
    energy: f64,
    dc: &DatacenterProfile,
    factors: &EmissionFactorTable,
) -> Result<ImpactVector> {
    if !(energy.is_finite() && energy >= 0.0) {
        return Err(Error::invalid("energy", "must be finite and >= 0"));
    }
    Ok(OperationalFactors::new(dc, factors)?.apply(energy))
}

/// Sum of usage times per-unit embodied factors.
pub fn embodied_impact<I>(usage: I, factors: &EmissionFactorTable) -> Result<ImpactVector>
where
    I: IntoIterator<Item = (Capacity, f64)>,
{
    let mut acc = ImpactVector::ZERO;
    for (cap, q) in usage {
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::invalid(
                format!("usage.{}", cap.key()),
                "must be finite and >= 0",
            ));
        }
        acc += factors.factor(cap).embodied * q;
    }
    Ok(acc)
}

/// [`embodied_impact`] keyed by capacity names, e.g. `"vgpu_hour"`.
pub fn embodied_impact_named<'a, I>(usage: I, factors: &EmissionFactorTable) -> Result<ImpactVector>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let typed = usage
        .into_iter()
        .map(|(k, q)| Ok((k.parse::<Capacity>()?, q)))
        .collect::<Result<Vec<_>>>()?;
    embodied_impact(typed, factors)
}
