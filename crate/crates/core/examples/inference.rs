//! Energy split and impacts of one inference for each of the twelve profiles.

use ai_footprint::usecase::{inference_impact, InferenceKind};
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let model = Model::default();
    println!(
        "{:<16} {:>10} {:>10} {:>10} {:>12}",
        "kind", "compute", "storage", "network", "gCO2e"
    );
    for kind in InferenceKind::all() {
        let imp = inference_impact(&model, kind)?;
        println!(
            "{:<16} {:>10.3e} {:>10.3e} {:>10.3e} {:>12.3e}",
            kind.to_string(),
            imp.energy.compute,
            imp.energy.storage,
            imp.energy.network,
            (imp.operational.gwp + imp.embodied.gwp) * 1e3
        );
    }
    Ok(())
}
