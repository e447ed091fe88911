//! The five 2030 presets indexed on the 2024 portfolio.

use ai_footprint::portfolio::PortfolioSpec;
use ai_footprint::projection::{baseline, presets, project_on};
use ai_footprint::report::scenarios_table;
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let model = Model::default();
    let spec = PortfolioSpec::default();
    let base = baseline(&model, &spec)?;
    let results = presets()
        .iter()
        .map(|p| project_on(&model, &spec, &base, p))
        .collect::<ai_footprint::Result<Vec<_>>>()?;
    print!("{}", scenarios_table(&results));
    Ok(())
}
