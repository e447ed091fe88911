//! Server power model used to derive per-vCPU and per-vGPU power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServerConfig {
    pub n_cpu: u32,
    pub load_cpu: f64,
    /// W
    pub max_p_cpu: f64,
    /// W
    pub min_p_cpu: f64,
    pub orchestrator_overhead: f64,
    pub n_gpu: u32,
    pub load_gpu: f64,
    pub max_p_gpu: f64,
    pub gpu_overhead: f64,
    pub n_disk: u32,
    pub p_disk: f64,
    pub load_disk: f64,
    pub replication: u32,
    pub disk_overhead: f64,
    pub n_ram: u32,
    pub load_ram: f64,
    pub p_ram: f64,
    pub ram_overhead: f64,
}

impl ServerConfig {
    /// GPU compute node. Disk terms use 8 drives without replication, the
    /// only reading consistent with the published 3110 W.
    pub fn compute_default() -> Self {
        Self {
            n_cpu: 2,
            load_cpu: 0.5,
            max_p_cpu: 240.0,
            min_p_cpu: 35.52,
            orchestrator_overhead: 0.05,
            n_gpu: 8,
            load_gpu: 0.8,
            max_p_gpu: 400.0,
            gpu_overhead: 0.05,
            n_disk: 8,
            p_disk: 18.0,
            load_disk: 0.8,
            replication: 1,
            disk_overhead: 0.05,
            n_ram: 4,
            load_ram: 0.5,
            p_ram: 8.5,
            ram_overhead: 0.05,
        }
    }

    /// Storage node: CPUs plus 24 drives replicated three times.
    pub fn storage_default() -> Self {
        Self {
            n_gpu: 0,
            n_ram: 0,
            n_disk: 24,
            replication: 3,
            ..Self::compute_default()
        }
    }

    pub fn empty() -> Self {
        Self {
            n_cpu: 0,
            n_gpu: 0,
            n_disk: 0,
            n_ram: 0,
            ..Self::compute_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let loads = [
            ("load_cpu", self.load_cpu),
            ("load_gpu", self.load_gpu),
            ("load_disk", self.load_disk),
            ("load_ram", self.load_ram),
        ];
        for (name, v) in loads {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, "load rate must be in [0, 1]"));
            }
        }
        let nonneg = [
            ("max_p_cpu", self.max_p_cpu),
            ("min_p_cpu", self.min_p_cpu),
            ("orchestrator_overhead", self.orchestrator_overhead),
            ("max_p_gpu", self.max_p_gpu),
            ("gpu_overhead", self.gpu_overhead),
            ("p_disk", self.p_disk),
            ("disk_overhead", self.disk_overhead),
            ("p_ram", self.p_ram),
            ("ram_overhead", self.ram_overhead),
        ];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, "must be finite and >= 0"));
            }
        }
        if self.min_p_cpu > self.max_p_cpu {
            return Err(Error::invalid("min_p_cpu", "exceeds max_p_cpu"));
        }
        Ok(())
    }
}

/// Electrical power of a server in W, without datacenter overhead.
///
/// # Example
///
/// ```
/// use ai_footprint::lca::server::{server_power, ServerConfig};
///
/// let p = server_power(&ServerConfig::storage_default()).unwrap();
/// assert!((p - 1377.936).abs() < 1e-9);
/// ```
pub fn server_power(c: &ServerConfig) -> Result<f64> {
    c.validate()?;
    let cpu = c.n_cpu as f64
        * (c.min_p_cpu + c.load_cpu * (c.max_p_cpu - c.min_p_cpu))
        * (1.0 + c.orchestrator_overhead);
    let disk =
        c.n_disk as f64 * c.p_disk * c.load_disk * c.replication as f64 * (1.0 + c.disk_overhead);
    let gpu = c.n_gpu as f64 * c.load_gpu * c.max_p_gpu * (1.0 + c.gpu_overhead);
    let ram = c.n_ram as f64 * c.load_ram * c.p_ram * (1.0 + c.ram_overhead);
    Ok(cpu + disk + gpu + ram)
}

/// Power left for each vGPU once the vCPUs have taken their share.
pub fn vgpu_power_share(total_power: f64, n_vcpu: u32, p_vcpu: f64, n_vgpu: u32) -> Result<f64> {
    if n_vgpu == 0 {
        return Err(Error::invalid("n_vgpu", "must be > 0"));
    }
    let residual = total_power - n_vcpu as f64 * p_vcpu;
    if residual.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonPositiveResidual { residual });
    }
    Ok(residual / n_vgpu as f64)
}
