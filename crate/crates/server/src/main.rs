use anyhow::Context;
use clap::Parser;

use ai_footprint::report::write_output;
use ai_footprint_server::api;
use ai_footprint_server::cli::{plan, Action, Cli};

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match plan(&cli)? {
        Action::Print { text, out } => write_output(&text, out.as_deref())?,
        Action::Serve {
            bundle,
            addr,
            options,
        } => tokio::runtime::Runtime::new()
            .context("starting runtime")?
            .block_on(api::serve(*bundle, addr, options))
            .with_context(|| format!("serving on {addr}"))?,
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
