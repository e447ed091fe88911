//! One pass/fail line per acceptance criterion. Exits non-zero if any fails.

use std::time::Instant;

use ai_footprint::impact::ImpactVector;
use ai_footprint::lca::server::{server_power, vgpu_power_share, ServerConfig};
use ai_footprint::lca::wafer::{
    calibrate_defect_density, defect_yield, dies_per_wafer, silicon_area_needed, WaferGeometry,
};
use ai_footprint::lca::{Component, Stage, Step};
use ai_footprint::portfolio::{aggregate_portfolio, scale_to_global2000, PortfolioSpec};
use ai_footprint::projection::{
    baseline, eco_score, find_scenario, presets, project, project_on, sensitivity_sweep,
    solve_hardware_efficiency, usage_scale, Grade, ScenarioParams, SweepParam,
    DEFAULT_OFFSET_GRID_REDUCTION, DEFAULT_OFFSET_PUE, THRESHOLDS,
};
use ai_footprint::usecase::{inference_impact, vgpu_count, InferenceKind, ModelSize, UseCaseType};
use ai_footprint::Model;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want) / want
}

/// Published per-inference energy: compute, storage, network, total (kWh).
const ENERGY: [(&str, [f64; 4]); 12] = [
    ("Low Chat", [9.30e-5, 1.68e-8, 4.59e-8, 9.31e-5]),
    ("Medium Chat", [1.55e-3, 1.68e-8, 4.59e-8, 1.55e-3]),
    ("High Chat", [1.73e-2, 1.68e-8, 4.59e-8, 1.73e-2]),
    ("Low RAG", [1.54e-4, 2.86e-7, 7.79e-7, 1.56e-4]),
    ("Medium RAG", [2.64e-3, 2.86e-7, 7.79e-7, 2.64e-3]),
    ("High RAG", [2.99e-2, 2.86e-7, 7.79e-7, 2.99e-2]),
    ("Low Agents", [4.97e-4, 7.99e-8, 2.18e-7, 4.97e-4]),
    ("Medium Agents", [8.54e-3, 7.99e-8, 2.18e-7, 8.54e-3]),
    ("High Agents", [9.58e-2, 7.99e-8, 2.18e-7, 9.58e-2]),
    ("Tabular", [2.99e-8, 1.26e-9, 3.42e-9, 3.46e-8]),
    ("ComputerVision", [2.58e-5, 7.81e-5, 2.13e-4, 3.17e-4]),
    ("NLP", [3.60e-6, 2.51e-8, 6.84e-8, 3.70e-6]),
];

/// Published per-inference impacts, operational then embodied for
/// gwp, water, primary energy and adp.
const IMPACTS: [[f64; 8]; 12] = [
    [
        5.55e-5, 3.11e-6, 2.72e-6, 1.06e-6, 1.20e-3, 4.61e-5, 1.99e-12, 1.59e-11,
    ],
    [
        9.26e-4, 5.19e-5, 4.54e-5, 1.77e-5, 2.01e-2, 7.68e-4, 3.32e-11, 2.65e-10,
    ],
    [
        1.03e-2, 5.79e-4, 5.06e-4, 1.98e-4, 2.24e-1, 8.57e-3, 3.70e-10, 2.96e-9,
    ],
    [
        9.28e-5, 5.17e-6, 4.55e-6, 1.77e-6, 2.01e-3, 7.65e-5, 3.32e-12, 2.80e-11,
    ],
    [
        1.58e-3, 8.82e-5, 7.72e-5, 3.02e-5, 3.41e-2, 1.31e-3, 5.64e-11, 4.52e-10,
    ],
    [
        1.79e-2, 1.00e-3, 8.75e-4, 3.42e-4, 3.87e-1, 1.48e-2, 6.40e-10, 5.11e-9,
    ],
    [
        2.96e-4, 1.66e-5, 1.45e-5, 5.67e-6, 6.42e-3, 2.46e-4, 1.06e-11, 8.96e-11,
    ],
    [
        5.09e-3, 2.85e-4, 2.49e-4, 9.75e-5, 1.10e-1, 4.23e-3, 1.82e-10, 1.46e-9,
    ],
    [
        5.72e-2, 3.20e-3, 2.80e-3, 1.09e-3, 1.24e0, 4.74e-2, 2.05e-9, 1.64e-8,
    ],
    [
        2.06e-8, 1.37e-9, 1.01e-9, 4.40e-10, 4.47e-7, 2.05e-8, 7.39e-16, 3.17e-13,
    ],
    [
        1.89e-4, 8.75e-7, 9.26e-6, 2.98e-7, 4.09e-3, 1.30e-5, 6.77e-12, 1.54e-11,
    ],
    [
        2.20e-6, 1.22e-7, 1.08e-7, 4.17e-8, 4.78e-5, 1.81e-6, 7.90e-14, 2.24e-12,
    ],
];

fn worst(devs: impl IntoIterator<Item = (String, f64)>) -> (String, f64) {
    devs.into_iter().fold((String::new(), 0.0), |acc, (n, d)| {
        if d.abs() > acc.1.abs() {
            (n, d)
        } else {
            acc
        }
    })
}

fn table1(r: &mut Report, model: &Model) {
    let t0 = Instant::now();
    let kinds = InferenceKind::all();
    let energies: Vec<_> = kinds
        .iter()
        .map(|k| inference_impact(model, *k).unwrap().energy)
        .collect();
    let elapsed = t0.elapsed();
    let (name, dev) = worst(
        ENERGY
            .iter()
            .zip(&energies)
            .map(|((n, want), got)| (n.to_string(), rel(got.total, want[3]))),
    );
    r.line(
        "per-inference energy, 12 totals within 5%",
        dev.abs() <= 0.05 && elapsed.as_secs_f64() < 1.0,
        format!(
            "worst {name} {:+.2}%, {:.1} ms",
            dev * 100.0,
            elapsed.as_secs_f64() * 1e3
        ),
    );
}

fn table33(r: &mut Report, model: &Model) {
    let labels = [
        "op gwp",
        "emb gwp",
        "op water",
        "emb water",
        "op pe",
        "emb pe",
        "op adp",
        "emb adp",
    ];
    let mut devs = Vec::new();
    for (i, kind) in InferenceKind::all().into_iter().enumerate() {
        let imp = inference_impact(model, kind).unwrap();
        let (o, e) = (imp.operational, imp.embodied);
        let got = [
            o.gwp,
            e.gwp,
            o.water,
            e.water,
            o.primary_energy,
            e.primary_energy,
            o.adp,
            e.adp,
        ];
        for j in 0..8 {
            devs.push((
                format!("{} {}", ENERGY[i].0, labels[j]),
                rel(got[j], IMPACTS[i][j]),
            ));
        }
    }
    let medium_chat = inference_impact(
        model,
        InferenceKind::genai(UseCaseType::Chat, ModelSize::Medium),
    )
    .unwrap()
    .operational
    .gwp;
    let (name, dev) = worst(devs);
    r.line(
        "per-inference impacts, 96 values within 5%",
        dev.abs() <= 0.05,
        format!(
            "worst {name} {:+.2}%, Medium Chat operational gwp {:.3e}",
            dev * 100.0,
            medium_chat
        ),
    );
}

fn power(r: &mut Report) {
    let compute = server_power(&ServerConfig::compute_default()).unwrap();
    let storage = server_power(&ServerConfig::storage_default()).unwrap();
    let vgpu = vgpu_power_share(compute, 96, 3.15, 56).unwrap();
    let ok = rel(compute, 3110.0).abs() <= 0.01
        && rel(storage, 1378.0).abs() <= 0.01
        && rel(vgpu, 50.1).abs() <= 0.01;
    r.line(
        "server power and vGPU share within 1%",
        ok,
        format!("compute {compute:.1} W, storage {storage:.1} W, vGPU {vgpu:.2} W"),
    );
}

fn vgpus(r: &mut Report, model: &Model) {
    let counts: Vec<u32> = ModelSize::ALL
        .iter()
        .map(|s| vgpu_count(model.catalog.model(*s).unwrap()))
        .collect();
    r.line(
        "vGPU counts exact",
        counts == [3, 19, 106],
        format!("{counts:?}"),
    );
}

/// Whole square dies inside the disc for one grid offset.
fn dies_on_grid(diameter: f64, side: f64, ox: f64, oy: f64) -> usize {
    let radius = diameter / 2.0;
    let n = (diameter / side).ceil() as i64 + 2;
    let mut count = 0;
    for i in -n..n {
        for j in -n..n {
            let (xa, ya) = (ox + i as f64 * side, oy + j as f64 * side);
            let corners = [
                (xa, ya),
                (xa + side, ya),
                (xa, ya + side),
                (xa + side, ya + side),
            ];
            if corners
                .iter()
                .all(|(x, y)| x * x + y * y <= radius * radius)
            {
                count += 1;
            }
        }
    }
    count
}

/// Expected die count for a grid laid at an arbitrary offset: the mean over
/// a 32 x 32 sweep of offsets within one die pitch.
fn grid_packing(diameter: f64, side: f64) -> f64 {
    let steps = 32;
    let mut total = 0;
    for ox in 0..steps {
        for oy in 0..steps {
            let f = |k: i32| side * k as f64 / steps as f64;
            total += dies_on_grid(diameter, side, f(ox), f(oy));
        }
    }
    total as f64 / (steps * steps) as f64
}

fn wafer(r: &mut Report) {
    let cpu_target = 4.31e-3;
    let gpu_target = 4.83e-2;
    let d_cpu = calibrate_defect_density(&WaferGeometry::xeon_platinum(0.0), cpu_target).unwrap();
    let d_gpu = calibrate_defect_density(&WaferGeometry::a100(0.0), gpu_target).unwrap();
    let cpu = WaferGeometry::xeon_platinum(d_cpu);
    let gpu = WaferGeometry::a100(d_gpu);
    let a_cpu = silicon_area_needed(&cpu).unwrap();
    let a_gpu = silicon_area_needed(&gpu).unwrap();
    let areas_ok = rel(a_cpu, cpu_target).abs() <= 0.15 && rel(a_gpu, gpu_target).abs() <= 0.15;

    let mut yield_err: f64 = 0.0;
    for g in [cpu, gpu] {
        let analytic = (-(g.defect_density * g.chip_area).sqrt()).exp();
        yield_err = yield_err.max((defect_yield(&g) - analytic).abs() / analytic);
    }
    let yield_ok = yield_err <= f64::EPSILON;

    let mut packing = Vec::new();
    for g in [cpu, gpu] {
        let formula = dies_per_wafer(&g).unwrap();
        let oracle = grid_packing(g.wafer_diameter, g.chip_area_with_kerf().sqrt());
        packing.push((formula, oracle, rel(formula, oracle)));
    }
    let packing_ok = packing.iter().all(|p| p.2.abs() <= 0.10);
    r.line(
        "wafer areas, defect yield and dies per wafer",
        areas_ok && yield_ok && packing_ok,
        format!(
            "areas {a_cpu:.3e}/{a_gpu:.3e} m2, yield err {yield_err:.1e}, dies {:.1} vs {:.1} and {:.1} vs {:.1}",
            packing[0].0, packing[0].1, packing[1].0, packing[1].1
        ),
    );
}

fn portfolio(r: &mut Report, model: &Model) {
    let fp = aggregate_portfolio(model, &PortfolioSpec::default()).unwrap();
    let gwh = fp.total.final_energy / 1e6;
    let ghg = fp.total.gwp;
    let genai = fp.genai_energy_share();
    let share = fp.embodied_share();
    let twh = scale_to_global2000(&fp).final_energy / 1e9;
    let ok = rel(gwh, 3.9).abs() <= 0.20
        && rel(ghg, 2.48e6).abs() <= 0.20
        && genai >= 0.99
        && (share.gwp - 0.05).abs() <= 0.05
        && (share.adp - 0.89).abs() <= 0.05
        && (share.water - 0.30).abs() <= 0.05
        && rel(twh, 7.8).abs() <= 0.20;
    r.line(
        "annual portfolio totals and shares",
        ok,
        format!(
            "{gwh:.3} GWh, {ghg:.3e} kgCO2eq, GenAI {:.2}%, embodied gwp {:.1}% water {:.1}% adp {:.1}%, x2000 {twh:.2} TWh",
            genai * 100.0,
            share.gwp * 100.0,
            share.water * 100.0,
            share.adp * 100.0
        ),
    );
}

fn usage(r: &mut Report) {
    let a = usage_scale(0.32, 6);
    let b = usage_scale(0.55, 6);
    r.line(
        "usage scaling to 3 significant figures",
        format!("{a:.2}") == "5.29" && format!("{b:.1}") == "13.9" && format!("{b:.2}") == "13.87",
        format!("1.32^6 = {a:.4}, 1.55^6 = {b:.4}"),
    );
}

fn scenarios(r: &mut Report, model: &Model, spec: &PortfolioSpec) {
    let expected = [552.0, 2440.0, 30.0, 402.0, 755.0];
    let base = baseline(model, spec).unwrap();
    let results: Vec<_> = presets()
        .iter()
        .map(|p| project_on(model, spec, &base, p).unwrap())
        .collect();
    let energy: Vec<f64> = results.iter().map(|x| x.index.final_energy).collect();
    let within = energy
        .iter()
        .zip(expected)
        .all(|(g, w)| rel(*g, w).abs() <= 0.20);
    r.line(
        "preset energy indices within 20%",
        within,
        energy
            .iter()
            .zip(expected)
            .map(|(g, w)| format!("{g:.1} ({:+.1}%)", rel(*g, w) * 100.0))
            .collect::<Vec<_>>()
            .join(", "),
    );

    let ratios: Vec<f64> = results
        .iter()
        .map(|x| x.index.gwp / (x.index.final_energy * (1.0 - x.params.grid_reduction)))
        .collect();
    r.line(
        "GHG index equals energy index times grid factor within 3%",
        ratios.iter().all(|q| (q - 1.0).abs() <= 0.03),
        format!(
            "ratios {}",
            results
                .iter()
                .zip(&ratios)
                .map(|(x, q)| format!("{} {q:.4}", x.scenario))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );

    let order = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|a, b| v[*a].partial_cmp(&v[*b]).unwrap());
        idx
    };
    r.line(
        "scenario ordering",
        order(&energy) == order(&expected),
        format!("{:?}", order(&energy)),
    );
}

fn sensitivity(r: &mut Report, model: &Model, spec: &PortfolioSpec) {
    let inter = find_scenario(&presets(), "intermediate").unwrap().clone();
    let base = baseline(model, spec).unwrap();
    let at = |f: f64| {
        let mut s = inter.clone();
        s.model_size_factor = inter.model_size_factor * f;
        project_on(model, spec, &base, &s)
            .unwrap()
            .index
            .final_energy
    };
    let mid = at(1.0);
    let up = (at(1.1) / mid - 1.0) * 100.0;
    let down = (at(0.9) / mid - 1.0) * 100.0;
    r.line(
        "model size +-10% moves energy by +-10.0%",
        format!("{up:.1}") == "10.0" && format!("{down:.1}") == "-10.0",
        format!("{up:+.3}% / {down:+.3}%"),
    );

    let values = [0.25, 0.35, 0.45, 0.55, 0.65];
    let expected = [512.0, 612.0, 755.0, 958.0, 1237.0];
    let sweep = sensitivity_sweep(model, spec, &inter, SweepParam::AgentsCagr, &values).unwrap();
    let got: Vec<f64> = sweep.points.iter().map(|p| p.index.final_energy).collect();
    r.line(
        "agents growth sweep within 3%",
        got.iter()
            .zip(expected)
            .all(|(g, w)| rel(*g, w).abs() <= 0.03),
        got.iter()
            .zip(expected)
            .map(|(g, w)| format!("{g:.0} ({:+.1}%)", rel(*g, w) * 100.0))
            .collect::<Vec<_>>()
            .join(", "),
    );

    // affine in (1+c)^6: the second differences of index against usage scale vanish
    let xs: Vec<f64> = values.iter().map(|c| usage_scale(*c, 6)).collect();
    let slope = |i: usize| (got[i + 1] - got[i]) / (xs[i + 1] - xs[i]);
    let affine = (0..3).all(|i| (slope(i + 1) / slope(i) - 1.0).abs() < 1e-9);
    let fit = sweep.fit.as_ref().unwrap();
    r.line(
        "sweep is affine in usage scale with convex quadratic fit",
        affine && fit.coefficients[2] > 0.0,
        format!(
            "slope {:.2} per unit scale, curvature {:.1}, r2 {:.5}",
            slope(0),
            fit.coefficients[2],
            fit.r_squared
        ),
    );
}

fn offset(r: &mut Report, model: &Model, spec: &PortfolioSpec) {
    let all = presets();
    let solve = |name: &str| {
        let s = find_scenario(&all, name).unwrap();
        solve_hardware_efficiency(
            model,
            spec,
            s,
            0.9,
            DEFAULT_OFFSET_PUE,
            DEFAULT_OFFSET_GRID_REDUCTION,
        )
        .unwrap()
    };
    let inter = solve("intermediate");
    let high = solve("high_adoption");
    let factors_ok =
        rel(inter.factor, 175.0).abs() <= 0.15 && rel(high.factor, 565.0).abs() <= 0.15;

    let energy = |name: &str| {
        project(model, spec, find_scenario(&all, name).unwrap())
            .unwrap()
            .index
            .final_energy
    };
    let ratio = high.factor / inter.factor;
    let energy_ratio = energy("high_adoption") / energy("intermediate");
    let ratio_ok = rel(ratio, energy_ratio).abs() <= 0.02;

    let hits = [&inter, &high].iter().all(|o| {
        let mut s = find_scenario(&all, &o.scenario).unwrap().clone();
        s.pue_2030 = o.pue;
        s.grid_reduction = o.grid_reduction;
        s.hardware_efficiency_factor = o.factor;
        let g = project(model, spec, &s).unwrap().index.gwp;
        rel(g, 10.0).abs() <= 0.001
    });
    r.line(
        "offset solver factors, ratio and target",
        factors_ok && ratio_ok && hits,
        format!(
            "intermediate {:.1}, high {:.1}, ratio {ratio:.3} vs energy ratio {energy_ratio:.3}",
            inter.factor, high.factor
        ),
    );
}

fn score(r: &mut Report, model: &Model) {
    let bounds: Vec<f64> = THRESHOLDS.iter().map(|t| t.1).collect();
    let thresholds_ok = bounds == [1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2];
    let grades = [
        Grade::A,
        Grade::B,
        Grade::C,
        Grade::D,
        Grade::E,
        Grade::F,
        Grade::G,
    ];
    let boundary_ok = THRESHOLDS.iter().enumerate().all(|(i, (g, t))| {
        let below = eco_score(t * (1.0 - 1e-12)).unwrap().grade == *g;
        let at = eco_score(*t).unwrap().grade == *grades.get(i + 1).unwrap_or(&Grade::G);
        below && at
    });
    let expect = |kwh: f64| {
        THRESHOLDS
            .iter()
            .find(|(_, t)| kwh < *t)
            .map_or(Grade::G, |(g, _)| *g)
    };
    let mut mapped = Vec::new();
    let mut lookup_ok = true;
    for (i, kind) in InferenceKind::all().into_iter().enumerate() {
        let e = inference_impact(model, kind).unwrap().energy.total;
        let g = eco_score(e).unwrap().grade;
        lookup_ok &= g == expect(ENERGY[i].1[3]);
        mapped.push(format!("{}={g}", ENERGY[i].0));
    }
    r.line(
        "eco-score thresholds, boundaries and published totals",
        thresholds_ok && boundary_ok && lookup_ok,
        mapped.join(" "),
    );
}

fn properties(r: &mut Report, model: &Model) {
    let mut runner = TestRunner::new(Config {
        cases: 64,
        failure_persistence: None,
        ..Config::default()
    });
    let vec = || {
        (
            0.0..1e3f64,
            0.0..1e3f64,
            0.0..1e3f64,
            0.0..1e3f64,
            0.0..1e3f64,
        )
            .prop_map(|(a, b, c, d, e)| ImpactVector::new(a, b, c, d, e))
    };

    let linear = runner
        .run(&(vec(), vec(), 0.0..100.0f64), |(a, b, k)| {
            let lhs = (a + b) * k;
            let rhs = a * k + b * k;
            for (x, y) in lhs.to_array().iter().zip(rhs.to_array()) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
            Ok(())
        })
        .is_ok();

    let fp = aggregate_portfolio(model, &PortfolioSpec::default()).unwrap();
    let close = |a: ImpactVector, b: ImpactVector| {
        a.to_array()
            .iter()
            .zip(b.to_array())
            .all(|(x, y)| (x - y).abs() <= 1e-12 * y.abs().max(1e-300))
    };
    let pivot_sum: ImpactVector = fp.pivot.iter().map(|p| p.impact).sum();
    let stages: ImpactVector = Stage::ALL.iter().map(|s| fp.by_stage[s]).sum();
    let steps: ImpactVector = Step::ALL.iter().map(|s| fp.by_step[s]).sum();
    let comps: ImpactVector = Component::ALL.iter().map(|c| fp.by_component[c]).sum();
    let partition = close(pivot_sum, fp.total)
        && close(stages, fp.total)
        && close(steps, fp.total)
        && close(comps, fp.total);

    let id = project(
        model,
        &PortfolioSpec::default(),
        &ScenarioParams::identity(model),
    )
    .unwrap()
    .index;
    let identity = id.to_array().iter().all(|x| *x == 100.0);

    let server_mono = runner
        .run(&(0usize..4, 1u32..4), |(field, extra)| {
            let base = ServerConfig::compute_default();
            let mut up = base.clone();
            match field {
                0 => up.n_cpu += extra,
                1 => up.n_gpu += extra,
                2 => up.n_disk += extra,
                _ => up.n_ram += extra,
            }
            prop_assert!(server_power(&up).unwrap() >= server_power(&base).unwrap());
            Ok(())
        })
        .is_ok();
    let yield_mono = runner
        .run(&(0.0..1.0f64, 0.0..1.0f64), |(d1, d2)| {
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(
                defect_yield(&WaferGeometry::a100(lo)) >= defect_yield(&WaferGeometry::a100(hi))
            );
            Ok(())
        })
        .is_ok();
    r.line(
        "property suite",
        linear && partition && identity && server_mono && yield_mono,
        format!(
            "linearity {linear}, partition {partition}, identity {identity}, server monotone {server_mono}, yield monotone {yield_mono}"
        ),
    );
}

fn main() {
    let model = Model::default();
    let spec = PortfolioSpec::default();
    let mut r = Report { failures: 0 };
    table1(&mut r, &model);
    table33(&mut r, &model);
    power(&mut r);
    vgpus(&mut r, &model);
    wafer(&mut r);
    portfolio(&mut r, &model);
    usage(&mut r);
    scenarios(&mut r, &model, &spec);
    sensitivity(&mut r, &model, &spec);
    offset(&mut r, &model, &spec);
    score(&mut r, &model);
    properties(&mut r, &model);
    println!("{} failing", r.failures);
    if r.failures > 0 {
        std::process::exit(1);
    }
}
