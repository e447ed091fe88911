//! Compute and storage node power, and the per-vGPU share.

use ai_footprint::lca::server::{server_power, vgpu_power_share, ServerConfig};

fn main() -> ai_footprint::Result<()> {
    let compute = server_power(&ServerConfig::compute_default())?;
    let storage = server_power(&ServerConfig::storage_default())?;
    // 2 sockets x 48 vCPU, 8 GPUs x 7 MIG slices
    let vgpu = vgpu_power_share(compute, 96, 3.15, 56)?;
    println!("compute node {compute:.1} W");
    println!("storage node {storage:.1} W");
    println!("per vGPU     {vgpu:.2} W");
    Ok(())
}
