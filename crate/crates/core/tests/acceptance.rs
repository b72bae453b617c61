//! Acceptance gate: one PASS/FAIL line per criterion; nonzero exit if any
//! criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::time::{Duration, Instant};

use common::{crescent_residual, pure_fidelity};
use fockgauge::gauges::evaluate;
use fockgauge::moments::summarize;
use fockgauge::output::to_json;
use fockgauge::states::{
    cat, coherent, crescent, fock, photon_added, squeezed_coherent, CrescentMethod, Truncation,
};
use fockgauge::verify::{calibrate, figure_data, rel_gap_statistic, sweep, SweepConfig, SweepReport, Tolerances};
use fockgauge::{BoundConstants, QuantumState, C64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn trunc() -> Truncation {
    Truncation::default()
}

fn consts() -> BoundConstants {
    calibrate().expect("calibration").constants()
}

fn ensemble_config() -> SweepConfig {
    SweepConfig {
        n_pure: 10_000,
        n_mixed: 1_000,
        cutoff: 32,
        mixed_cutoff: Some(16),
        rank: 8,
        seed: 1,
        tolerances: Tolerances::default(),
    }
}

fn coherent_saturation() -> Outcome {
    let c = consts();
    let mut worst: f64 = 0.0;
    for alpha in [C64::new(0.5, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 3.0), C64::new(1.0, 2.0)] {
        let s = summarize(&coherent(alpha, &trunc()).unwrap().into()).unwrap();
        let r = evaluate(&s, &c).unwrap();
        worst = worst.max((s.var_n - r.tight.bound_scan).abs() / s.var_n.max(1.0));
    }
    outcome(worst <= 1e-8, format!("max |Var n - B_scan|/max(1, Var n) = {worst:.3e}"))
}

fn crescent_saturation() -> Outcome {
    let c = consts();
    let mut g1_dev: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for modulus in [0.3, 1.0, 2.0] {
        for phi in [0.0, FRAC_PI_3] {
            let alpha = C64::from_polar(modulus, phi);
            for m in 1..=3 {
                let psi = crescent(alpha, m, CrescentMethod::Operator, &trunc()).unwrap();
                residual = residual.max(crescent_residual(&psi, alpha, m));
                let s = summarize(&psi.into()).unwrap();
                let g1 = evaluate(&s, &c).unwrap().g1.unwrap();
                g1_dev = g1_dev.max((g1 - 1.0).abs());
            }
        }
    }
    outcome(
        g1_dev <= 1e-6 && residual <= 1e-8,
        format!("max |G1 - 1| = {g1_dev:.3e}, max residual = {residual:.3e}"),
    )
}

fn construction_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for modulus in [0.5, 1.0, 2.0] {
        for k in 0..4 {
            let alpha = C64::from_polar(modulus, k as f64 * FRAC_PI_2);
            for m in 0..=5 {
                let op = crescent(alpha, m, CrescentMethod::Operator, &trunc()).unwrap();
                let lag = crescent(alpha, m, CrescentMethod::Laguerre, &trunc()).unwrap();
                worst = worst.max(1.0 - pure_fidelity(&op, &lag));
            }
        }
    }
    outcome(worst <= 1e-10, format!("max infidelity = {worst:.3e}"))
}

const ENSEMBLE_INEQUALITIES: [&str; 9] = [
    "tight",
    "canonical_x",
    "canonical_p",
    "covariance_floor",
    "uncertainty_area",
    "fourth_order",
    "relaxed_lambda_plus",
    "relaxed_trace",
    "hierarchy",
];

fn ensemble_validity(report: &SweepReport) -> Outcome {
    let violations: usize = ENSEMBLE_INEQUALITIES
        .iter()
        .map(|name| report.inequalities[*name].violations)
        .sum();
    let checked = ENSEMBLE_INEQUALITIES.iter().all(|name| report.inequalities[*name].checked > 0);
    outcome(
        violations == 0 && checked && report.skipped_truncation == 0,
        format!(
            "{} states, {violations} violations, sweep wall time {:.2} s",
            report.states, report.wall_time
        ),
    )
}

fn closed_form_agreement(report: &SweepReport) -> Outcome {
    let t = &report.inequalities["closed_form"];
    outcome(
        t.violations == 0 && t.checked == report.states,
        format!(
            "{} checked, worst |closed - scan|/(1 + scan) = {:.3e}",
            t.checked,
            -t.worst_slack.unwrap_or(0.0)
        ),
    )
}

fn g2_saturation() -> Outcome {
    let c = consts();
    let g2 = |state: QuantumState| evaluate(&summarize(&state).unwrap(), &c).unwrap().g2;
    let mut cats: f64 = 0.0;
    for modulus in [0.5, 1.0, 2.0] {
        for beta in [0.0, PI] {
            let v = cat(C64::new(modulus, 0.0), beta, &trunc()).unwrap();
            cats = cats.max((g2(v.into()) - 1.0).abs());
        }
    }
    let fock_dev = (g2(fock(0).into()) - 1.0).abs().max((g2(fock(1).into()) - 1.0).abs());
    outcome(
        cats <= 1e-8 && fock_dev <= 1e-12,
        format!("cats max |g2 - 1| = {cats:.3e}, |0>,|1> max |g2 - 1| = {fock_dev:.3e}"),
    )
}

fn squeezed_saturation() -> Outcome {
    let c = consts();
    let mut worst: f64 = 0.0;
    let mut all_squeezed = true;
    for r in [0.2, 0.5, 1.0, 1.5] {
        let v = squeezed_coherent(C64::default(), r, 0.0, &trunc()).unwrap();
        let s = summarize(&v.into()).unwrap();
        worst = worst.max((s.var_a.norm_sqr() - (s.cov_ada * s.cov_ada - 0.25)).abs());
        let report = evaluate(&s, &c).unwrap();
        all_squeezed &= report.constraints.squeezing.squeezed && report.ellipse.lambda_minus_sq < 0.5;
    }
    outcome(
        worst <= 1e-10 && all_squeezed,
        format!("max ||V|^2 - (cov^2 - 1/4)| = {worst:.3e}, all squeezed: {all_squeezed}"),
    )
}

fn weak_field_limit() -> Outcome {
    let moduli = [0.2, 0.1, 0.05, 0.01];
    let mut threshold_ok = true;
    let mut monotone = true;
    let mut at_005 = Vec::new();
    for m in 1..=3 {
        let f: Vec<f64> = moduli
            .iter()
            .map(|&x| {
                let alpha = C64::new(x, 0.0);
                let cr = crescent(alpha, m, CrescentMethod::Operator, &trunc()).unwrap();
                let pa = photon_added(alpha, m, &trunc()).unwrap();
                pure_fidelity(&cr, &pa)
            })
            .collect();
        monotone &= f.windows(2).all(|w| w[1] > w[0]);
        threshold_ok &= f[2] >= 0.999;
        at_005.push(format!("M={m}: {:.6}", f[2]));
    }
    outcome(
        threshold_ok && monotone,
        format!(
            "fidelity at |alpha| = 0.05 ({}) vs threshold 0.999: {}; monotone: {monotone}",
            at_005.join(", "),
            if threshold_ok { "met" } else { "not met" }
        ),
    )
}

fn figure_reproduction(report: &SweepReport) -> Outcome {
    let c = consts();
    let fig3 = figure_data("fig3", 64, &c).unwrap();
    let vertex = fig3.rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0);
    let vertex_ok = vertex.is_some_and(|r| r[2] == 0.5 && r[3] == 0.5);
    let hyper = &report.inequalities["hyperboloid"];
    let above = hyper.violations == 0 && hyper.checked == report.states;
    let fig4 = figure_data("fig4", 64, &c).unwrap();
    let valid = fig4.rows.iter().all(|r| r[3] - r[4] >= 0.0);
    let gap = rel_gap_statistic(&fig4);
    outcome(
        vertex_ok && above && valid && gap.is_some(),
        format!(
            "vertex shared: {vertex_ok}; sweep states above hyperboloid: {above}; fig4 valid: {valid}; rel_gap {}",
            gap.map_or("missing".into(), |g| format!(
                "min {:.3e} mean {:.3e} max {:.3e} over {} points",
                g.min, g.mean, g.max, g.points
            ))
        ),
    )
}

fn calibration_audit() -> Outcome {
    let first = calibrate().unwrap();
    let second = calibrate().unwrap();
    let spread = |f: fn(&fockgauge::verify::AnchorRow) -> f64| {
        let v: Vec<f64> = first.anchors.iter().map(f).collect();
        v.iter().copied().fold(f64::MIN, f64::max) - v.iter().copied().fold(f64::MAX, f64::min)
    };
    let agree = spread(|a| a.c_tight) <= 1e-8 && spread(|a| a.c2) <= 1e-8;
    let tags: Vec<&str> = first.printed_vs_derived.iter().map(|r| r.tag).collect();
    let table = ["eq8", "eq11", "eq13"].iter().all(|t| tags.contains(t));

    let small = SweepConfig {
        n_pure: 200,
        n_mixed: 50,
        cutoff: 16,
        mixed_cutoff: None,
        rank: 4,
        seed: 11,
        tolerances: Tolerances::default(),
    };
    let c = first.constants();
    let deterministic = to_json(&first) == to_json(&second)
        && to_json(&sweep(&small, &c).unwrap()) == to_json(&sweep(&small, &c).unwrap())
        && figure_data("fig4", 16, &c).unwrap().to_csv() == figure_data("fig4", 16, &c).unwrap().to_csv();
    outcome(
        agree && table && deterministic,
        format!(
            "C_tight = {}, C1 = {}, C2 = {}; anchors agree: {agree}; table rows: {}; byte-identical reruns: {deterministic}",
            first.c_tight,
            first.c1,
            first.c2,
            tags.join("/")
        ),
    )
}

fn main() {
    let start = Instant::now();
    let report = sweep(&ensemble_config(), &consts()).expect("ensemble sweep");
    let sweep_time = start.elapsed();

    type Check<'a> = (u32, &'a str, Option<Duration>, Box<dyn Fn() -> Outcome + 'a>);
    let checks: Vec<Check> = vec![
        (1, "coherent saturation", Some(Duration::from_secs(1)), Box::new(coherent_saturation)),
        (2, "crescent saturation", Some(Duration::from_secs(5)), Box::new(crescent_saturation)),
        (3, "construction equivalence", Some(Duration::from_secs(5)), Box::new(construction_equivalence)),
        (4, "random-ensemble validity", None, Box::new(|| ensemble_validity(&report))),
        (5, "closed-form/scan agreement", None, Box::new(|| closed_form_agreement(&report))),
        (6, "G2 saturation", Some(Duration::from_secs(1)), Box::new(g2_saturation)),
        (7, "squeezed saturation", None, Box::new(squeezed_saturation)),
        (8, "weak-field limit", None, Box::new(weak_field_limit)),
        (9, "figure reproduction", None, Box::new(|| figure_reproduction(&report))),
        (10, "calibration audit", None, Box::new(calibration_audit)),
    ];

    let mut failed = 0;
    for (id, name, limit, check) in &checks {
        let start = Instant::now();
        let mut result = check();
        let mut elapsed = start.elapsed();
        let limit = if *id == 4 {
            elapsed = sweep_time;
            Some(Duration::from_secs(60))
        } else {
            *limit
        };
        if let Some(limit) = limit {
            if elapsed > limit {
                result.pass = false;
                result.detail.push_str(&format!("; runtime {elapsed:.2?} exceeds {limit:.0?}"));
            }
        }
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{name}]: {verdict} ({}; {:.2?})", result.detail, elapsed);
        if !result.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
