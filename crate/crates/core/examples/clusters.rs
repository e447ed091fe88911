//! Per-inference energy for the 192 use-case clusters, as CSV.

use ai_footprint::portfolio::PortfolioSpec;
use ai_footprint::report::{cluster_matrix, clusters_csv};
use ai_footprint::Model;

fn main() -> ai_footprint::Result<()> {
    let rows = cluster_matrix(&Model::default(), &PortfolioSpec::default())?;
    print!("{}", clusters_csv(&rows)?);
    Ok(())
}
