//! Command-line front end.

use std::fmt::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use ai_footprint::data::{parse_region_blend, DataBundle, RunConfig, DATA_DIR_ENV};
use ai_footprint::projection::ScenarioParams;
use ai_footprint::report::{to_json, Format};
use ai_footprint::{Error, Result};

use crate::api::ServeOptions;
use crate::ops::{
    self, default_target, Lookup, OffsetRequest, ProjectRequest, ScenarioRef, SweepRequest,
};

#[derive(Debug, Parser)]
#[command(
    name = "ai-footprint",
    version,
    about = "Environmental footprint of AI inference portfolios"
)]
pub struct Cli {
    #[command(flatten)]
    pub inputs: Inputs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Directory holding factors.json, models.json, portfolio.json, scenarios.json.
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    pub data_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub factors: Option<PathBuf>,
    #[arg(long, global = true)]
    pub models: Option<PathBuf>,
    #[arg(long, global = true)]
    pub portfolio: Option<PathBuf>,
    #[arg(long, global = true)]
    pub scenarios: Option<PathBuf>,
    /// Region blend, e.g. `US=0.5,EU-27=0.5`.
    #[arg(long, global = true)]
    pub region: Option<String>,
    /// table, json or csv.
    #[arg(long, global = true, default_value = "table")]
    pub format: String,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-inference impacts of the 192 use-case clusters.
    Clusters,
    /// Annual footprint of the portfolio.
    Portfolio,
    /// List scenario presets.
    Scenarios,
    /// Project the portfolio to the scenario horizon.
    Project {
        /// Preset name or scenario file; all presets when omitted.
        scenario: Option<String>,
        #[arg(long = "scenario", conflicts_with = "scenario")]
        scenario_flag: Option<String>,
    },
    /// Vary one scenario parameter.
    Sweep {
        /// genai_cagr, agents_cagr, model_size_factor, pue_2030, ...
        param: Option<String>,
        #[arg(long = "param", conflicts_with = "param")]
        param_flag: Option<String>,
        #[arg(long, default_value = "intermediate")]
        scenario: String,
        /// lo:hi:step
        #[arg(long)]
        range: Option<String>,
        /// Comma separated list; overrides --range.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Hardware efficiency gain needed to meet a GHG target.
    Offset {
        #[arg(long, default_value = "intermediate")]
        scenario: String,
        /// GHG cut as a fraction of today.
        #[arg(long, default_value_t = default_target())]
        target: f64,
        #[arg(long)]
        pue: Option<f64>,
        #[arg(long)]
        grid_reduction: Option<f64>,
    },
    /// Eco-score grade for an energy per inference.
    Score {
        /// kWh per inference.
        #[arg(allow_negative_numbers = true)]
        kwh: f64,
    },
    /// Serve the /v1 HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Allowed CORS origin; repeatable. Any origin when absent.
        #[arg(long = "allow-origin")]
        allow_origin: Vec<String>,
        /// Directory with the built web UI.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum Action {
    /// Rendered output and where it goes.
    Print { text: String, out: Option<PathBuf> },
    Serve {
        bundle: Box<DataBundle>,
        addr: SocketAddr,
        options: ServeOptions,
    },
}

impl Inputs {
    pub fn config(&self) -> Result<RunConfig> {
        Ok(RunConfig {
            data_dir: self.data_dir.clone(),
            factors: self.factors.clone(),
            models: self.models.clone(),
            portfolio: self.portfolio.clone(),
            scenarios: self.scenarios.clone(),
            format: self.format.parse()?,
            out: self.out.clone(),
            region_override: self.region.as_deref().map(parse_region_blend).transpose()?,
        })
    }
}

/// Load inputs and work out what to do, without touching stdout.
pub fn plan(cli: &Cli) -> Result<Action> {
    let config = cli.inputs.config()?;
    let bundle = config.load_and_validate()?;
    let lookup = Lookup::PresetsOrFiles;
    let report = match &cli.command {
        Command::Clusters => ops::clusters(&bundle)?,
        Command::Portfolio => ops::portfolio(&bundle, None)?,
        Command::Scenarios => {
            let text = match config.format {
                Format::Json => to_json(ops::scenarios(&bundle))?,
                _ => scenarios_list(ops::scenarios(&bundle), config.format),
            };
            return Ok(Action::Print {
                text,
                out: config.out,
            });
        }
        Command::Project {
            scenario,
            scenario_flag,
        } => {
            let req = ProjectRequest {
                scenario: scenario
                    .clone()
                    .or_else(|| scenario_flag.clone())
                    .map(ScenarioRef::Name),
                portfolio: None,
            };
            ops::project(&bundle, lookup, &req)?
        }
        Command::Sweep {
            param,
            param_flag,
            scenario,
            range,
            values,
        } => {
            let param = param
                .clone()
                .or_else(|| param_flag.clone())
                .ok_or_else(|| Error::InvalidInput {
                    field: "param".into(),
                    reason: "name the parameter to sweep".into(),
                })?;
            let req = SweepRequest {
                scenario: ScenarioRef::Name(scenario.clone()),
                param,
                range: range.clone(),
                values: values.clone(),
                portfolio: None,
            };
            ops::sweep(&bundle, lookup, &req)?
        }
        Command::Offset {
            scenario,
            target,
            pue,
            grid_reduction,
        } => {
            let req = OffsetRequest {
                scenario: ScenarioRef::Name(scenario.clone()),
                target: *target,
                pue: *pue,
                grid_reduction: *grid_reduction,
                portfolio: None,
            };
            ops::offset(&bundle, lookup, &req)?
        }
        Command::Score { kwh } => ops::score(*kwh)?,
        Command::Serve {
            host,
            port,
            allow_origin,
            static_dir,
        } => {
            return Ok(Action::Serve {
                bundle: Box::new(bundle),
                addr: SocketAddr::new(*host, *port),
                options: ServeOptions {
                    origins: allow_origin.clone(),
                    static_dir: static_dir.clone(),
                },
            })
        }
    };
    Ok(Action::Print {
        text: report.render(config.format)?,
        out: config.out,
    })
}

fn scenarios_list(presets: &[ScenarioParams], format: Format) -> String {
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str("name,genai_cagr,agents_cagr,model_size_factor,hardware_efficiency_factor,pue_2030,grid_reduction\n");
        for p in presets {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                p.name,
                p.genai_cagr,
                p.agents_cagr,
                p.model_size_factor,
                p.hardware_efficiency_factor,
                p.pue_2030,
                p.grid_reduction
            );
        }
        return s;
    }
    let _ = writeln!(
        s,
        "{:<18} {:>7} {:>7} {:>6} {:>6} {:>5} {:>5}",
        "name", "genai", "agents", "size", "hw", "pue", "grid"
    );
    for p in presets {
        let _ = writeln!(
            s,
            "{:<18} {:>7.2} {:>7.2} {:>6.2} {:>6.2} {:>5.2} {:>5.2}",
            p.name,
            p.genai_cagr,
            p.agents_cagr,
            p.model_size_factor,
            p.hardware_efficiency_factor,
            p.pue_2030,
            p.grid_reduction
        );
    }
    s
}
