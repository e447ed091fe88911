//! Hardware efficiency needed for a 90% GHG cut by 2030.

use ai_footprint::portfolio::PortfolioSpec;
use ai_footprint::projection::{
    find_scenario, presets, solve_hardware_efficiency, DEFAULT_OFFSET_GRID_REDUCTION,
    DEFAULT_OFFSET_PUE,
};
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let model = Model::default();
    let spec = PortfolioSpec::default();
    let all = presets();
    for name in ["intermediate", "high_adoption"] {
        let r = solve_hardware_efficiency(
            &model,
            &spec,
            find_scenario(&all, name)?,
            0.9,
            DEFAULT_OFFSET_PUE,
            DEFAULT_OFFSET_GRID_REDUCTION,
        )?;
        println!(
            "{name}: x{:.1} hardware efficiency, GHG index {:.2}",
            r.factor, r.ghg_index
        );
    }
    Ok(())
}
