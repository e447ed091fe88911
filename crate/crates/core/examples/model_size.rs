//! Energy index response to +-10% on model size and output tokens.

use ai_footprint::portfolio::PortfolioSpec;
use ai_footprint::projection::{baseline, find_scenario, presets, project_on, SweepParam};
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let model = Model::default();
    let spec = PortfolioSpec::default();
    let base = baseline(&model, &spec)?;
    let all = presets();
    let inter = find_scenario(&all, "intermediate")?;
    let mid = project_on(&model, &spec, &base, inter)?.index.final_energy;
    for param in [SweepParam::ModelSizeFactor, SweepParam::OutputTokenFactor] {
        for k in [0.9, 1.1] {
            let mut s = inter.clone();
            param.set(&mut s, param.get(inter) * k);
            let e = project_on(&model, &spec, &base, &s)?.index.final_energy;
            println!(
                "{} x{k}: {e:.1} ({:+.2}%)",
                param.name(),
                (e / mid - 1.0) * 100.0
            );
        }
    }
    Ok(())
}
