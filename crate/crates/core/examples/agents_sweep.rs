//! Agents growth rate sweep on the intermediate scenario, with a quadratic fit.

use ai_footprint::portfolio::PortfolioSpec;
use ai_footprint::projection::{
    find_scenario, parse_range, presets, sensitivity_sweep, SweepParam,
};
use ai_footprint::report::sweep_table;
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let all = presets();
    let inter = find_scenario(&all, "intermediate")?;
    let values = parse_range("0.25:0.65:0.1")?;
    let sweep = sensitivity_sweep(
        &Model::default(),
        &PortfolioSpec::default(),
        inter,
        SweepParam::AgentsCagr,
        &values,
    )?;
    print!("{}", sweep_table(&sweep));
    Ok(())
}
