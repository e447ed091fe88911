//! Load the data bundle from a directory (or the embedded copy) and check it.
//!
//! `cargo run --example load_data -- crates/core/data`

use std::path::PathBuf;

use ai_footprint::data::{DataBundle, RunConfig};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .or_else(RunConfig::data_dir_from_env);
    let bundle = match dir {
        Some(d) => DataBundle::load_dir(&d),
        None => DataBundle::embedded(),
    };
    match bundle {
        Ok(b) => println!(
            "ok: {} models, {} workloads, {} tasks, {} scenarios, PUE {}",
            b.model.catalog.models.len(),
            b.model.catalog.workloads.len(),
            b.model.catalog.tasks.len(),
            b.scenarios.len(),
            b.model.datacenter.pue
        ),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
