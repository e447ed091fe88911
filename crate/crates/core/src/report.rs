//! Rendering results as a text table, JSON or CSV.
//!
//! JSON keeps full double precision and re-loads bit for bit. CSV numbers use
//! scientific notation with three significant digits.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impact::{Criterion, ImpactVector};
use crate::model::Model;
use crate::portfolio::{annual_inferences, AnnualFootprint, PortfolioSpec};
use crate::projection::{eco_score, EcoScore, Grade, OffsetResult, ScenarioResult, Sweep};
use crate::usecase::{
    enumerate_clusters, inference_impact, EnergyBreakdown, InferenceKind, UseCaseCluster,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" | "text" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::invalid(
                "format",
                format!("`{s}` is not table, json or csv"),
            )),
        }
    }
}

/// Per-inference figures of one cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub cluster: UseCaseCluster,
    /// Inferences per year for one use case of this cluster.
    pub annual_inferences: f64,
    pub energy: EnergyBreakdown,
    pub operational: ImpactVector,
    pub embodied: ImpactVector,
    pub total: ImpactVector,
    pub grade: Grade,
}

/// The 192-row cluster matrix; impacts are per inference.
pub fn cluster_matrix(model: &Model, spec: &PortfolioSpec) -> Result<Vec<ClusterRow>> {
    model.validate()?;
    let mut cache: Vec<(InferenceKind, crate::usecase::InferenceImpact)> = Vec::with_capacity(12);
    for kind in InferenceKind::all() {
        cache.push((kind, inference_impact(model, kind)?));
    }
    enumerate_clusters()
        .into_iter()
        .map(|cluster| {
            let (_, imp) = cache
                .iter()
                .find(|(k, _)| *k == cluster.kind())
                .expect("every cluster kind is cached");
            let EcoScore { grade, .. } = eco_score(imp.energy.total)?;
            Ok(ClusterRow {
                cluster,
                annual_inferences: annual_inferences(&cluster, spec),
                energy: imp.energy,
                operational: imp.operational,
                embodied: imp.embodied,
                total: imp.operational + imp.embodied,
                grade,
            })
        })
        .collect()
}

/// Anything the CLI and the service can print.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Clusters(Vec<ClusterRow>),
    Footprint(Box<AnnualFootprint>),
    Scenarios(Vec<ScenarioResult>),
    Sweep(Sweep),
    Offset(OffsetResult),
    Score(EcoScore),
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => match self {
                Report::Clusters(v) => to_json(v),
                Report::Footprint(v) => to_json(v),
                Report::Scenarios(v) => to_json(v),
                Report::Sweep(v) => to_json(v),
                Report::Offset(v) => to_json(v),
                Report::Score(v) => to_json(v),
            },
            Format::Csv => match self {
                Report::Clusters(v) => clusters_csv(v),
                Report::Footprint(v) => footprint_csv(v),
                Report::Scenarios(v) => scenarios_csv(v),
                Report::Sweep(v) => sweep_csv(v),
                Report::Offset(v) => offset_csv(v),
                Report::Score(v) => score_csv(v),
            },
            Format::Table => Ok(match self {
                Report::Clusters(v) => clusters_table(v),
                Report::Footprint(v) => footprint_table(v),
                Report::Scenarios(v) => scenarios_table(v),
                Report::Sweep(v) => sweep_table(v),
                Report::Offset(v) => offset_table(v),
                Report::Score(v) => score_table(v),
            }),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::validation("<json>", "$", e.to_string()))
}

/// Write `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Io(e.to_string()))
        }
    }
}

/// Three significant digits, scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn criteria_cols(prefix: &str) -> Vec<String> {
    Criterion::ALL
        .iter()
        .map(|c| {
            if prefix.is_empty() {
                c.label().to_string()
            } else {
                format!("{prefix}_{}", c.label())
            }
        })
        .collect()
}

fn sci_all(v: &ImpactVector) -> impl Iterator<Item = String> {
    v.to_array().into_iter().map(sci)
}

pub fn clusters_csv(rows: &[ClusterRow]) -> Result<String> {
    let mut header: Vec<String> = [
        "id",
        "ai_type",
        "uc_type",
        "model_size",
        "users",
        "frequency",
        "annual_inferences",
        "energy_compute_kwh",
        "energy_storage_kwh",
        "energy_network_kwh",
        "energy_total_kwh",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(criteria_cols("operational").into_iter().skip(1));
    header.extend(criteria_cols("embodied").into_iter().skip(1));
    header.push("grade".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let body = rows
        .iter()
        .map(|r| {
            let c = &r.cluster;
            let mut row = vec![
                c.id.to_string(),
                c.ai_type.to_string(),
                c.uc_type.to_string(),
                c.model_size.map_or_else(String::new, |s| s.to_string()),
                c.users.to_string(),
                c.freq.to_string(),
                sci(r.annual_inferences),
                sci(r.energy.compute),
                sci(r.energy.storage),
                sci(r.energy.network),
                sci(r.energy.total),
            ];
            row.extend(sci_all(&r.operational).skip(1));
            row.extend(sci_all(&r.embodied).skip(1));
            row.push(r.grade.to_string());
            row
        })
        .collect();
    csv_string(&header, body)
}

/// The stage × step × component × AI-type pivot.
pub fn footprint_csv(fp: &AnnualFootprint) -> Result<String> {
    let mut header = vec![
        "ai_type".to_string(),
        "step".into(),
        "component".into(),
        "stage".into(),
    ];
    header.extend(criteria_cols(""));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let body = fp
        .pivot
        .iter()
        .map(|p| {
            let mut row = vec![
                p.ai_type.to_string(),
                p.step.to_string(),
                p.component.to_string(),
                p.stage.to_string(),
            ];
            row.extend(sci_all(&p.impact));
            row
        })
        .collect();
    csv_string(&header, body)
}

/// One row per scenario, indices per criterion (2024 = 100).
pub fn scenarios_csv(results: &[ScenarioResult]) -> Result<String> {
    let mut header = vec!["scenario".to_string()];
    header.extend(criteria_cols(""));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let body = results
        .iter()
        .map(|r| {
            let mut row = vec![r.scenario.clone()];
            row.extend(sci_all(&r.index));
            row
        })
        .collect();
    csv_string(&header, body)
}

/// Parameter value and the five indices per point.
pub fn sweep_csv(sweep: &Sweep) -> Result<String> {
    let mut header = vec![sweep.parameter.name().to_string()];
    header.extend(criteria_cols(""));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let body = sweep
        .points
        .iter()
        .map(|p| {
            let mut row = vec![sci(p.value)];
            row.extend(sci_all(&p.index));
            row
        })
        .collect();
    csv_string(&header, body)
}

pub fn offset_csv(r: &OffsetResult) -> Result<String> {
    csv_string(
        &[
            "scenario",
            "target_fraction",
            "target_index",
            "hardware_efficiency_factor",
            "ghg_index",
            "energy_index",
            "water_index",
            "pue",
            "grid_reduction",
        ],
        vec![vec![
            r.scenario.clone(),
            sci(r.target_fraction),
            sci(r.target_index),
            sci(r.factor),
            sci(r.ghg_index),
            sci(r.energy_index),
            sci(r.water_index),
            sci(r.pue),
            sci(r.grid_reduction),
        ]],
    )
}

pub fn score_csv(s: &EcoScore) -> Result<String> {
    csv_string(
        &["energy_kwh", "grade", "beyond_scale"],
        vec![vec![
            sci(s.energy_kwh),
            s.grade.to_string(),
            s.beyond_scale.to_string(),
        ]],
    )
}

fn impact_cells(v: &ImpactVector) -> String {
    v.to_array()
        .iter()
        .map(|x| format!("{:>11}", sci(*x)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn criteria_header() -> String {
    [
        "energy kWh",
        "gwp kgCO2e",
        "water m3eq",
        "pe MJ",
        "adp kgSbeq",
    ]
    .iter()
    .map(|h| format!("{h:>11}"))
    .collect::<Vec<_>>()
    .join(" ")
}

pub fn clusters_table(rows: &[ClusterRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3}  {:<11} {:<14} {:<6} {:<8} {:<8} {:>9} {:>10} {:>10} {:>10}  grade",
        "id",
        "ai_type",
        "uc_type",
        "size",
        "users",
        "freq",
        "inf/yr",
        "kWh/inf",
        "gCO2e/inf",
        "L/inf"
    );
    for r in rows {
        let c = &r.cluster;
        let _ = writeln!(
            s,
            "{:>3}  {:<11} {:<14} {:<6} {:<8} {:<8} {:>9} {:>10} {:>10} {:>10}  {}",
            c.id,
            c.ai_type.to_string(),
            c.uc_type.to_string(),
            c.model_size
                .map_or_else(|| "-".to_string(), |m| m.to_string()),
            c.users.to_string(),
            c.freq.to_string(),
            sci(r.annual_inferences),
            sci(r.energy.total),
            sci(r.total.gwp * 1e3),
            sci(r.total.water * 1e3),
            r.grade
        );
    }
    s
}

pub fn footprint_table(fp: &AnnualFootprint) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "use cases {:.1} ({} inferences/yr)",
        fp.use_case_count(),
        sci(fp.inferences)
    );
    let _ = writeln!(s, "{:<24} {}", "", criteria_header());
    let _ = writeln!(s, "{:<24} {}", "total", impact_cells(&fp.total));
    for (k, v) in &fp.by_stage {
        let _ = writeln!(s, "{:<24} {}", format!("stage {k}"), impact_cells(v));
    }
    for (k, v) in &fp.by_step {
        let _ = writeln!(s, "{:<24} {}", format!("step {k}"), impact_cells(v));
    }
    for (k, v) in &fp.by_component {
        let _ = writeln!(s, "{:<24} {}", format!("component {k}"), impact_cells(v));
    }
    for (k, v) in &fp.by_ai_type {
        let _ = writeln!(s, "{:<24} {}", format!("ai_type {k}"), impact_cells(v));
    }
    for (k, v) in &fp.by_uc_type {
        let _ = writeln!(s, "{:<24} {}", format!("uc_type {k}"), impact_cells(v));
    }
    let share = fp.embodied_share();
    let _ = writeln!(
        s,
        "embodied share: gwp {:.1}%, water {:.1}%, pe {:.1}%, adp {:.1}%",
        share.gwp * 100.0,
        share.water * 100.0,
        share.primary_energy * 100.0,
        share.adp * 100.0
    );
    s
}

pub fn scenarios_table(results: &[ScenarioResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<20} {:>8} {:>8} {:>8} {:>8} {:>8}  {:>9}",
        "scenario (2024=100)", "energy", "gwp", "water", "pe", "adp", "use cases"
    );
    for r in results {
        let i = &r.index;
        let _ = writeln!(
            s,
            "{:<20} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>8.1}  {:>9.0}",
            r.scenario, i.final_energy, i.gwp, i.water, i.primary_energy, i.adp, r.use_cases
        );
    }
    s
}

pub fn sweep_table(sweep: &Sweep) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} sweep on {}", sweep.parameter.name(), sweep.scenario);
    let _ = writeln!(
        s,
        "{:>10} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "value", "energy", "gwp", "water", "pe", "adp"
    );
    for p in &sweep.points {
        let i = &p.index;
        let _ = writeln!(
            s,
            "{:>10.3} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>8.1}",
            p.value, i.final_energy, i.gwp, i.water, i.primary_energy, i.adp
        );
    }
    if let Some(fit) = &sweep.fit {
        let terms: Vec<String> = fit
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| match k {
                0 => format!("{c:.3}"),
                1 => format!("{c:.3}x"),
                _ => format!("{c:.3}x^{k}"),
            })
            .collect();
        let _ = writeln!(
            s,
            "energy fit: {} (r2 {:.4})",
            terms.join(" + "),
            fit.r_squared
        );
    }
    s
}

pub fn offset_table(r: &OffsetResult) -> String {
    format!(
        "scenario {}\ntarget: -{:.0}% GHG (index {:.1})\npue {} grid reduction {:.0}%\nhardware efficiency factor {:.1}\nGHG index {:.2}, energy index {:.2}, water index {:.2}\n",
        r.scenario,
        r.target_fraction * 100.0,
        r.target_index,
        r.pue,
        r.grid_reduction * 100.0,
        r.factor,
        r.ghg_index,
        r.energy_index,
        r.water_index
    )
}

pub fn score_table(s: &EcoScore) -> String {
    let mut out = format!("{} kWh -> {}", sci(s.energy_kwh), s.grade);
    if s.beyond_scale {
        out.push_str(" (beyond scale)");
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portfolio::aggregate_portfolio;

    #[test]
    fn sci_has_three_significant_digits() {
        assert_eq!(sci(3.4567e-8), "3.46e-8");
        assert_eq!(sci(1234.0), "1.23e3");
        assert_eq!(sci(0.0), "0.00e0");
    }

    #[test]
    fn cluster_csv_has_192_rows() {
        let m = Model::default();
        let rows = cluster_matrix(&m, &PortfolioSpec::default()).unwrap();
        let csv = clusters_csv(&rows).unwrap();
        assert_eq!(csv.lines().count(), 193);
        let width = csv.lines().next().unwrap().split(',').count();
        assert!(csv.lines().all(|l| l.split(',').count() == width));
    }

    #[test]
    fn empty_results_give_header_only() {
        for csv in [clusters_csv(&[]).unwrap(), scenarios_csv(&[]).unwrap()] {
            assert_eq!(csv.lines().count(), 1);
        }
    }

    #[test]
    fn footprint_json_round_trips_bitwise() {
        let m = Model::default();
        let fp = aggregate_portfolio(&m, &PortfolioSpec::default()).unwrap();
        let text = to_json(&fp).unwrap();
        let back: AnnualFootprint = from_json(&text).unwrap();
        assert_eq!(
            back.total.to_array().map(f64::to_bits),
            fp.total.to_array().map(f64::to_bits)
        );
        assert_eq!(back, fp);
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
