//! Annual footprint of the reference 100-use-case company.

use ai_footprint::portfolio::{aggregate_portfolio, scale_to_global2000, PortfolioSpec};
use ai_footprint::report::footprint_table;
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let fp = aggregate_portfolio(&Model::default(), &PortfolioSpec::default())?;
    print!("{}", footprint_table(&fp));
    let global = scale_to_global2000(&fp);
    println!(
        "Global 2000: {:.2} TWh, {:.2} MtCO2eq",
        global.final_energy / 1e9,
        global.gwp / 1e9
    );
    Ok(())
}
