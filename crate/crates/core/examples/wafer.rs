//! Dies per wafer, yields and silicon area per chip for the A100 and a Xeon die.

use ai_footprint::lca::wafer::{
    calibrate_defect_density, defect_yield, dies_per_wafer, edge_kerf_yield, silicon_area_needed,
    WaferGeometry,
};

fn main() -> ai_footprint::Result<()> {
    for (name, geom, target) in [
        ("A100", WaferGeometry::a100(0.0), 4.83e-2),
        ("Xeon", WaferGeometry::xeon_platinum(0.0), 4.31e-3),
    ] {
        let d = calibrate_defect_density(&geom, target)?;
        let g = WaferGeometry {
            defect_density: d,
            ..geom
        };
        println!(
            "{name}: {:.1} dies, edge/kerf yield {:.3}, D = {d:.3e} /mm2, defect yield {:.3}, {:.3e} m2 per chip",
            dies_per_wafer(&g)?,
            edge_kerf_yield(&g)?,
            defect_yield(&g),
            silicon_area_needed(&g)?
        );
    }
    Ok(())
}
