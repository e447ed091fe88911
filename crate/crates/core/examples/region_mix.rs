//! Portfolio GHG under single-region grids versus the default blend.

use std::collections::BTreeMap;

use ai_footprint::lca::Region;
use ai_footprint::portfolio::{aggregate_portfolio, PortfolioSpec};
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let model = Model::default();
    let blend = aggregate_portfolio(&model, &PortfolioSpec::default())?;
    println!("blend  {:.3e} kgCO2eq", blend.total.gwp);
    for region in Region::ALL {
        let spec = PortfolioSpec {
            region_weights: BTreeMap::from([(region, 1.0)]),
            ..Default::default()
        };
        let fp = aggregate_portfolio(&model, &spec)?;
        println!("{:<6} {:.3e} kgCO2eq", region.to_string(), fp.total.gwp);
    }
    Ok(())
}
