//! Versioned JSON documents: factor table, model catalog, portfolio, scenarios.
//!
//! Numeric quantities are written `{"value": 50.1, "unit": "W"}`. Each field
//! accepts a closed list of units and converts to the unit used internally;
//! anything else is rejected with the file and field path.

mod units;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::impact::ImpactVector;
use crate::lca::{Capacity, CapacityFactor, DatacenterProfile, EmissionFactorTable, Region};
use crate::model::Model;
use crate::portfolio::PortfolioSpec;
use crate::projection::{find_scenario, ScenarioParams};
use crate::report::Format;
use crate::usecase::{
    Catalog, FineTuneCompute, FineTuneProfile, LatencyPoint, ModelProfile, ModelSize,
    TraditionalTask, UseCaseType, Workload,
};

use units::Unit;

pub const SCHEMA_VERSION: u64 = 1;

/// Environment variable naming the default data directory.
pub const DATA_DIR_ENV: &str = "AI_FOOTPRINT_DATA";

pub const FACTORS_FILE: &str = "factors.json";
pub const MODELS_FILE: &str = "models.json";
pub const PORTFOLIO_FILE: &str = "portfolio.json";
pub const SCENARIOS_FILE: &str = "scenarios.json";

pub const EMBEDDED_FACTORS: &str = include_str!("../../data/factors.json");
pub const EMBEDDED_MODELS: &str = include_str!("../../data/models.json");
pub const EMBEDDED_PORTFOLIO: &str = include_str!("../../data/portfolio.json");
pub const EMBEDDED_SCENARIOS: &str = include_str!("../../data/scenarios.json");

/// A JSON value with the file and path it came from, for error messages.
#[derive(Clone, Copy)]
struct Node<'a> {
    file: &'a str,
    v: &'a Value,
}

struct At<'a> {
    node: Node<'a>,
    path: String,
}

impl<'a> At<'a> {
    fn root(file: &'a str, v: &'a Value) -> Self {
        At {
            node: Node { file, v },
            path: String::new(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let path = if self.path.is_empty() {
            "$"
        } else {
            &self.path
        };
        Error::validation(self.node.file, path, message)
    }

    fn child_path(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else if key.starts_with('[') {
            format!("{}{key}", self.path)
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn object(&self) -> Result<&'a Map<String, Value>> {
        self.node
            .v
            .as_object()
            .ok_or_else(|| self.err("expected an object"))
    }

    fn opt(&self, key: &str) -> Result<Option<At<'a>>> {
        Ok(self.object()?.get(key).map(|v| At {
            node: Node {
                file: self.node.file,
                v,
            },
            path: self.child_path(key),
        }))
    }

    fn get(&self, key: &str) -> Result<At<'a>> {
        self.opt(key)?
            .ok_or_else(|| Error::validation(self.node.file, self.child_path(key), "missing field"))
    }

    fn entries(&self) -> Result<Vec<(&'a str, At<'a>)>> {
        let file = self.node.file;
        Ok(self
            .object()?
            .iter()
            .map(|(k, v)| {
                (
                    k.as_str(),
                    At {
                        node: Node { file, v },
                        path: self.child_path(k),
                    },
                )
            })
            .collect())
    }

    fn items(&self) -> Result<Vec<At<'a>>> {
        let arr = self
            .node
            .v
            .as_array()
            .ok_or_else(|| self.err("expected an array"))?;
        let file = self.node.file;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, v)| At {
                node: Node { file, v },
                path: self.child_path(&format!("[{i}]")),
            })
            .collect())
    }

    fn num(&self) -> Result<f64> {
        let x = self
            .node
            .v
            .as_f64()
            .ok_or_else(|| self.err("expected a number"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(self.err("not finite"))
        }
    }

    fn u32(&self) -> Result<u32> {
        self.node
            .v
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .ok_or_else(|| self.err("expected a non-negative integer"))
    }

    fn str(&self) -> Result<&'a str> {
        self.node
            .v
            .as_str()
            .ok_or_else(|| self.err("expected a string"))
    }

    fn enum_value<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(self.node.v.clone()).map_err(|e| self.err(e.to_string()))
    }

    /// `{value, unit}` converted with `unit`.
    fn quantity(&self, unit: &Unit) -> Result<f64> {
        let value = self.get("value")?.num()?;
        let u = self.get("unit")?;
        let s = u.str()?;
        let k = unit.factor(s).ok_or_else(|| {
            u.err(format!(
                "unit `{s}` not accepted here (expected {})",
                unit.expected()
            ))
        })?;
        Ok(value * k)
    }
}

fn parse_document<'a>(file: &'a str, text: &str, holder: &'a mut Value) -> Result<At<'a>> {
    *holder = serde_json::from_str(text)
        .map_err(|e| Error::validation(file, "$", format!("malformed JSON: {e}")))?;
    let root = At::root(file, holder);
    let version = root
        .get("version")?
        .node
        .v
        .as_u64()
        .ok_or_else(|| Error::validation(file, "version", "expected an integer"))?;
    if version != SCHEMA_VERSION {
        return Err(Error::validation(
            file,
            "version",
            format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
        ));
    }
    Ok(root)
}

/// Re-home a core validation error onto a file.
fn in_file(file: &str, e: Error) -> Error {
    match e {
        Error::InvalidInput { field, reason } => Error::validation(file, field, reason),
        Error::Distribution { field, sum } => Error::validation(
            file,
            field,
            format!("distribution sums to {sum}, expected 1"),
        ),
        Error::MissingRegion(r) => Error::validation(
            file,
            format!("grid.{r}"),
            format!("missing grid row for region {r}"),
        ),
        Error::UnsupportedUseCase(m) => Error::validation(file, "$", m),
        other => other,
    }
}

fn impact_row(at: &At, denom: &str) -> Result<ImpactVector> {
    Ok(ImpactVector::criteria(
        at.get("gwp")?.quantity(&Unit::gwp(denom))?,
        at.get("water")?.quantity(&Unit::water(denom))?,
        at.get("primary_energy")?
            .quantity(&Unit::primary_energy(denom))?,
        at.get("adp")?.quantity(&Unit::adp(denom))?,
    ))
}

fn region_weights(at: &At) -> Result<BTreeMap<Region, f64>> {
    let mut out = BTreeMap::new();
    for (k, v) in at.entries()? {
        let r: Region = k.parse().map_err(|e: Error| v.err(e.to_string()))?;
        out.insert(r, v.num()?);
    }
    Ok(out)
}

/// Factor table and datacenter profile from a factors document.
pub fn parse_factors(file: &str, text: &str) -> Result<(EmissionFactorTable, DatacenterProfile)> {
    let mut holder = Value::Null;
    let root = parse_document(file, text, &mut holder)?;
    let caps = root.get("capacities")?;
    let mut rows = BTreeMap::new();
    for cap in Capacity::ALL {
        let row = caps.get(cap.key())?;
        let (power_unit, denom) = match cap {
            Capacity::VgpuHour | Capacity::VcpuHour => (Unit::power(), "h"),
            Capacity::StorageGbHour => (Unit::power_per_gb(), "GB/h"),
            Capacity::NetworkGb => (Unit::energy_per_gb(), "GB"),
        };
        let power = row.get("power")?.quantity(&power_unit)?;
        let embodied = impact_row(&row.get("embodied")?, denom)?;
        rows.insert(cap, CapacityFactor { power, embodied });
    }
    for (k, v) in caps.entries()? {
        if k.parse::<Capacity>().is_err() {
            return Err(v.err(format!("unknown capacity `{k}`")));
        }
    }
    let mut grid = BTreeMap::new();
    for (k, v) in root.get("grid")?.entries()? {
        let r: Region = k.parse().map_err(|e: Error| v.err(e.to_string()))?;
        grid.insert(r, impact_row(&v, "kWh")?);
    }
    let cooling_water = impact_row(&root.get("cooling_water")?, "L")?;
    let table = EmissionFactorTable {
        vgpu: rows[&Capacity::VgpuHour],
        vcpu: rows[&Capacity::VcpuHour],
        storage: rows[&Capacity::StorageGbHour],
        network: rows[&Capacity::NetworkGb],
        grid,
        cooling_water,
    };
    table.validate().map_err(|e| in_file(file, e))?;

    let dc = root.get("datacenter")?;
    let profile = DatacenterProfile {
        pue: dc.get("pue")?.quantity(&Unit::dimensionless())?,
        wue: dc.get("wue")?.quantity(&Unit::water_usage())?,
        region_weights: region_weights(&dc.get("region_weights")?)?,
    };
    profile.validate().map_err(|e| in_file(file, e))?;
    for r in profile.region_weights.keys() {
        if !table.grid.contains_key(r) {
            return Err(Error::validation(
                file,
                format!("datacenter.region_weights.{r}"),
                format!("no grid row for region {r}"),
            ));
        }
    }
    Ok((table, profile))
}

fn latency(at: &At) -> Result<LatencyPoint> {
    Ok(LatencyPoint {
        prompt_tokens: at.get("prompt_tokens")?.u32()?,
        ttft: at.get("ttft")?.quantity(&Unit::time_s())?,
        throughput: at.get("throughput")?.quantity(&Unit::token_rate())?,
    })
}

fn finetune(at: &At) -> Result<FineTuneProfile> {
    let c = at.get("compute")?;
    let compute = match c.get("kind")?.str()? {
        "measured" => FineTuneCompute::Measured {
            runs: c.get("runs")?.num()?,
            total_energy_kwh: c.get("total_energy")?.quantity(&Unit::energy_kwh())?,
        },
        "passes" => FineTuneCompute::Passes {
            tests: c.get("tests")?.num()?,
            epochs: c.get("epochs")?.num()?,
            samples: c.get("samples")?.num()?,
            batch_size: c.get("batch_size")?.num()?,
            passes_per_batch: c.get("passes_per_batch")?.num()?,
        },
        other => {
            return Err(c.get("kind")?.err(format!(
                "unknown kind `{other}` (expected measured or passes)"
            )))
        }
    };
    Ok(FineTuneProfile {
        compute,
        dataset_gb: at.get("dataset")?.quantity(&Unit::data_gb())?,
        storage_hours: at.get("storage_time")?.quantity(&Unit::time_h())?,
        downloads: at.get("downloads")?.num()?,
        lifetime_years: at.get("lifetime")?.quantity(&Unit::time_yr())?,
    })
}

/// Model catalog from a models document.
pub fn parse_models(file: &str, text: &str) -> Result<Catalog> {
    let mut holder = Value::Null;
    let root = parse_document(file, text, &mut holder)?;
    let mut models = Vec::new();
    for m in root.get("llm")?.items()? {
        let lat = m.get("latency")?;
        models.push(ModelProfile {
            size: m.get("size")?.enum_value::<ModelSize>()?,
            name: m.get("name")?.str()?.to_string(),
            params_b: m.get("params")?.quantity(&Unit::params_b())?,
            bytes_per_param: m.get("bytes_per_param")?.quantity(&Unit::bytes())?,
            memory_overhead: m.get("memory_overhead")?.num()?,
            vgpu_memory_gb: m.get("vgpu_memory")?.quantity(&Unit::data_gb())?,
            short_prompt: latency(&lat.get("short")?)?,
            long_prompt: latency(&lat.get("long")?)?,
        });
    }
    let mut workloads = Vec::new();
    for w in root.get("workloads")?.items()? {
        let prompt = w.get("prompt")?;
        let long_prompt = match prompt.str()? {
            "short" => false,
            "long" => true,
            other => return Err(prompt.err(format!("`{other}` is not short or long"))),
        };
        workloads.push(Workload {
            uc_type: w.get("uc_type")?.enum_value::<UseCaseType>()?,
            input_tokens: w.get("input_tokens")?.num()?,
            output_tokens: w.get("output_tokens")?.num()?,
            llm_calls: w.get("llm_calls")?.num()?,
            tool_calls: w.get("tool_calls")?.num()?,
            long_prompt,
        });
    }
    let mut tasks = Vec::new();
    for t in root.get("traditional")?.items()? {
        tasks.push(TraditionalTask {
            uc_type: t.get("uc_type")?.enum_value::<UseCaseType>()?,
            compute_energy_kwh: t.get("compute_energy")?.quantity(&Unit::energy_kwh())?,
            vcpu_share: t.get("vcpu_share")?.num()?,
            payload_gb: t.get("payload")?.quantity(&Unit::data_gb())?,
            finetune: finetune(&t.get("finetune")?)?,
        });
    }
    let catalog = Catalog {
        models,
        workloads,
        tasks,
        bytes_per_token: root.get("bytes_per_token")?.quantity(&Unit::bytes())?,
        storage_retention_hours: root.get("storage_retention")?.quantity(&Unit::time_h())?,
        tool_task: root.get("tool_task")?.enum_value::<UseCaseType>()?,
    };
    catalog.validate().map_err(|e| in_file(file, e))?;
    Ok(catalog)
}

/// Portfolio spec; the document may hold the spec at top level or under `portfolio`.
pub fn parse_portfolio(file: &str, text: &str) -> Result<PortfolioSpec> {
    let mut holder = Value::Null;
    let root = parse_document(file, text, &mut holder)?;
    let body = match root.opt("portfolio")? {
        Some(inner) => inner.node.v.clone(),
        None => {
            let mut m = root.object()?.clone();
            m.remove("version");
            m.remove("schema");
            Value::Object(m)
        }
    };
    let spec: PortfolioSpec = serde_json::from_value(body)
        .map_err(|e| Error::validation(file, "portfolio", e.to_string()))?;
    spec.validate().map_err(|e| in_file(file, e))?;
    Ok(spec)
}

/// Scenario list; accepts `presets: [...]`, `scenario: {...}` or a bare scenario object.
pub fn parse_scenarios(file: &str, text: &str) -> Result<Vec<ScenarioParams>> {
    let mut holder = Value::Null;
    let root = parse_document(file, text, &mut holder)?;
    let items: Vec<At> = if let Some(list) = root.opt("presets")? {
        list.items()?
    } else if let Some(one) = root.opt("scenario")? {
        vec![one]
    } else {
        vec![root]
    };
    let mut out = Vec::with_capacity(items.len());
    for at in items {
        let mut body = at.object()?.clone();
        if at.path.is_empty() {
            body.remove("version");
            body.remove("schema");
        }
        let s: ScenarioParams =
            serde_json::from_value(Value::Object(body)).map_err(|e| at.err(e.to_string()))?;
        let prefix = if at.path.is_empty() {
            String::new()
        } else {
            format!("{}.", at.path)
        };
        s.validate().map_err(|e| match in_file(file, e) {
            Error::Validation {
                file,
                path,
                message,
            } => Error::Validation {
                file,
                path: format!("{prefix}{path}"),
                message,
            },
            other => other,
        })?;
        out.push(s);
    }
    if out.is_empty() {
        return Err(Error::validation(file, "presets", "no scenarios"));
    }
    Ok(out)
}

/// Model, portfolio and scenario presets.
#[derive(Debug, Clone, PartialEq)]
pub struct DataBundle {
    pub model: Model,
    pub portfolio: PortfolioSpec,
    pub scenarios: Vec<ScenarioParams>,
}

impl DataBundle {
    /// The bundle compiled into the library.
    pub fn embedded() -> Result<Self> {
        let (factors, datacenter) = parse_factors(FACTORS_FILE, EMBEDDED_FACTORS)?;
        let catalog = parse_models(MODELS_FILE, EMBEDDED_MODELS)?;
        Ok(Self {
            model: Model {
                factors,
                datacenter,
                catalog,
                options: Default::default(),
            },
            portfolio: parse_portfolio(PORTFOLIO_FILE, EMBEDDED_PORTFOLIO)?,
            scenarios: parse_scenarios(SCENARIOS_FILE, EMBEDDED_SCENARIOS)?,
        })
    }

    /// Read the four documents from `dir`; missing ones fall back to the embedded copy.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let cfg = RunConfig {
            data_dir: Some(dir.to_path_buf()),
            ..Default::default()
        };
        cfg.load_and_validate()
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Where inputs come from and how results are written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub data_dir: Option<PathBuf>,
    pub factors: Option<PathBuf>,
    pub models: Option<PathBuf>,
    pub portfolio: Option<PathBuf>,
    pub scenarios: Option<PathBuf>,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Replaces the region blend of both the datacenter and the portfolio.
    pub region_override: Option<BTreeMap<Region, f64>>,
}

impl RunConfig {
    /// Data directory from [`DATA_DIR_ENV`], if set.
    pub fn data_dir_from_env() -> Option<PathBuf> {
        std::env::var_os(DATA_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    }

    /// Explicit path, else `<data_dir>/<name>` if present, else embedded text.
    fn source(
        &self,
        explicit: &Option<PathBuf>,
        name: &str,
        embedded: &'static str,
    ) -> Result<(String, String)> {
        if let Some(p) = explicit {
            return Ok((p.display().to_string(), read(p)?));
        }
        if let Some(dir) = &self.data_dir {
            let p = dir.join(name);
            if p.exists() {
                return Ok((p.display().to_string(), read(&p)?));
            }
        }
        Ok((name.to_string(), embedded.to_string()))
    }

    /// Read and check every input before anything is computed.
    pub fn load_and_validate(&self) -> Result<DataBundle> {
        let (ff, ft) = self.source(&self.factors, FACTORS_FILE, EMBEDDED_FACTORS)?;
        let (mf, mt) = self.source(&self.models, MODELS_FILE, EMBEDDED_MODELS)?;
        let (pf, pt) = self.source(&self.portfolio, PORTFOLIO_FILE, EMBEDDED_PORTFOLIO)?;
        let (sf, st) = self.source(&self.scenarios, SCENARIOS_FILE, EMBEDDED_SCENARIOS)?;
        let (factors, mut datacenter) = parse_factors(&ff, &ft)?;
        let catalog = parse_models(&mf, &mt)?;
        let mut portfolio = parse_portfolio(&pf, &pt)?;
        let scenarios = parse_scenarios(&sf, &st)?;
        if let Some(w) = &self.region_override {
            datacenter.region_weights = w.clone();
            portfolio.region_weights = w.clone();
            datacenter.validate().map_err(|e| in_file("--region", e))?;
        }
        for r in portfolio.region_weights.keys() {
            if !factors.grid.contains_key(r) {
                return Err(Error::validation(
                    &pf,
                    format!("region_weights.{r}"),
                    format!("no grid row for region {r}"),
                ));
            }
        }
        let model = Model {
            factors,
            datacenter,
            catalog,
            options: Default::default(),
        };
        model.validate()?;
        Ok(DataBundle {
            model,
            portfolio,
            scenarios,
        })
    }
}

/// `US=0.5,EU-27=0.5` into a region blend.
pub fn parse_region_blend(s: &str) -> Result<BTreeMap<Region, f64>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::invalid("region", format!("`{part}` is not REGION=weight")))?;
        let region: Region = k.parse()?;
        let w: f64 = v.trim().parse().map_err(|_| {
            Error::invalid(format!("region.{region}"), format!("`{v}` is not a number"))
        })?;
        out.insert(region, w);
    }
    if out.is_empty() {
        return Err(Error::invalid("region", "empty blend"));
    }
    Ok(out)
}

/// A scenario given by preset name or by a path to a scenario document.
pub fn resolve_scenario(arg: &str, presets: &[ScenarioParams]) -> Result<ScenarioParams> {
    let path = Path::new(arg);
    if arg.ends_with(".json") || path.is_file() {
        let text = read(path)?;
        let mut list = parse_scenarios(arg, &text)?;
        return Ok(list.remove(0));
    }
    find_scenario(presets, arg).cloned()
}
