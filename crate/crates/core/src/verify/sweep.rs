use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::QuantumState;
use crate::gauges::{evaluate, BoundConstants, GaugeReport};
use crate::moments::summarize;
use crate::states::{random_state, RandomKind, MAX_RANDOM_CUTOFF};

/// Allowed negative slack per inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tight: f64,
    pub canonical_x: f64,
    pub canonical_p: f64,
    pub covariance_floor: f64,
    pub uncertainty_area: f64,
    pub fourth_order: f64,
    pub relaxed_lambda_plus: f64,
    pub relaxed_trace: f64,
    /// Relative to `1 + bound_scan`.
    pub closed_form: f64,
    /// Relative to `1 + bound_scan`.
    pub hierarchy: f64,
    pub hyperboloid: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tight: 1e-9,
            canonical_x: 1e-9,
            canonical_p: 1e-9,
            covariance_floor: 1e-9,
            uncertainty_area: 1e-9,
            fourth_order: 1e-9,
            relaxed_lambda_plus: 1e-9,
            relaxed_trace: 1e-9,
            closed_form: 1e-9,
            hierarchy: 1e-10,
            hyperboloid: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n_pure: usize,
    pub n_mixed: usize,
    pub cutoff: usize,
    /// Cutoff of the mixed ensemble; defaults to `cutoff`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_cutoff: Option<usize>,
    /// Largest rank of the mixed ensemble; state `i` has rank `1 + i % rank`.
    pub rank: usize,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl SweepConfig {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("sweep config: {e}")))
    }

    fn mixed_cutoff(&self) -> usize {
        self.mixed_cutoff.unwrap_or(self.cutoff)
    }

    fn validate(&self) -> Result<()> {
        for (name, c) in [("cutoff", self.cutoff), ("mixed_cutoff", self.mixed_cutoff())] {
            if c == 0 || c > MAX_RANDOM_CUTOFF {
                return Err(Error::param(name, format!("must be in 1..={MAX_RANDOM_CUTOFF}")));
            }
        }
        if self.n_mixed > 0 && self.rank == 0 {
            return Err(Error::param("rank", "must be at least 1"));
        }
        Ok(())
    }
}

/// Per-inequality counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: usize,
    pub violations: usize,
    pub worst_slack: Option<f64>,
    pub worst_seed_index: Option<usize>,
}

impl Tally {
    fn record(&mut self, slack: f64, tol: f64, index: usize) {
        self.merge(&Tally {
            checked: 1,
            violations: usize::from(slack.is_nan() || slack < -tol),
            worst_slack: Some(slack),
            worst_seed_index: Some(index),
        });
    }

    /// Associative merge; ties on the worst slack keep the lowest index.
    pub fn merge(&mut self, other: &Tally) {
        self.checked += other.checked;
        self.violations += other.violations;
        let replace = match (self.worst_slack, other.worst_slack) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b < a || (b == a && other.worst_seed_index < self.worst_seed_index),
        };
        if replace {
            self.worst_slack = other.worst_slack;
            self.worst_seed_index = other.worst_seed_index;
        }
    }
}

/// Empirical minima of `lhs / rhs` for the relaxed bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Observations {
    pub relaxed_lambda_plus_min_ratio: Option<f64>,
    pub relaxed_trace_min_ratio: Option<f64>,
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Observations {
    fn merge(&mut self, other: &Observations) {
        self.relaxed_lambda_plus_min_ratio =
            min_opt(self.relaxed_lambda_plus_min_ratio, other.relaxed_lambda_plus_min_ratio);
        self.relaxed_trace_min_ratio = min_opt(self.relaxed_trace_min_ratio, other.relaxed_trace_min_ratio);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub states: usize,
    pub skipped_truncation: usize,
    pub inequalities: BTreeMap<String, Tally>,
    pub observations: Observations,
    pub passed: bool,
    /// Not serialized, so reports stay byte-identical between runs.
    #[serde(skip)]
    pub wall_time: f64,
}

impl SweepReport {
    fn empty() -> Self {
        SweepReport {
            states: 0,
            skipped_truncation: 0,
            inequalities: INEQUALITIES.iter().map(|n| (n.to_string(), Tally::default())).collect(),
            observations: Observations::default(),
            passed: true,
            wall_time: 0.0,
        }
    }

    fn merge(&mut self, other: &SweepReport) {
        self.states += other.states;
        self.skipped_truncation += other.skipped_truncation;
        for (name, tally) in &other.inequalities {
            self.inequalities.entry(name.clone()).or_default().merge(tally);
        }
        self.observations.merge(&other.observations);
    }

    pub fn total_violations(&self) -> usize {
        self.inequalities.values().map(|t| t.violations).sum()
    }

    /// Names of inequalities with at least one violation.
    pub fn violated(&self) -> Vec<&str> {
        self.inequalities
            .iter()
            .filter(|(_, t)| t.violations > 0)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

/// Every tallied inequality, in report order.
pub const INEQUALITIES: [&str; 11] = [
    "tight",
    "canonical_x",
    "canonical_p",
    "covariance_floor",
    "uncertainty_area",
    "fourth_order",
    "relaxed_lambda_plus",
    "relaxed_trace",
    "closed_form",
    "hierarchy",
    "hyperboloid",
];

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce5_e9b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of ensemble member `index`.
pub fn state_seed(seed: u64, index: usize) -> u64 {
    splitmix64(splitmix64(seed) ^ index as u64)
}

fn ratio(rec: &crate::gauges::InequalityRecord) -> Option<f64> {
    (rec.rhs > 0.0).then(|| rec.lhs / rec.rhs)
}

fn tally_state(report: &GaugeReport, tol: &Tolerances, index: usize) -> SweepReport {
    let mut out = SweepReport::empty();
    out.states = 1;
    let mut rec = |name: &str, slack: f64, t: f64| {
        out.inequalities.get_mut(name).expect("known inequality").record(slack, t, index);
    };
    let c = &report.constraints;
    rec("canonical_x", report.canonical_pair.x.slack, tol.canonical_x);
    rec("canonical_p", report.canonical_pair.p.slack, tol.canonical_p);
    rec("covariance_floor", c.covariance_floor.slack, tol.covariance_floor);
    rec("uncertainty_area", c.uncertainty_area.slack, tol.uncertainty_area);
    rec("fourth_order", c.fourth_order.slack, tol.fourth_order);
    rec("relaxed_lambda_plus", report.relaxed_lambda_plus.slack, tol.relaxed_lambda_plus);
    rec("relaxed_trace", report.relaxed_trace.slack, tol.relaxed_trace);
    let cov = c.covariance_floor.lhs;
    let v_sq = c.uncertainty_area.rhs;
    rec("hyperboloid", cov - (0.25 + v_sq).sqrt(), tol.hyperboloid);

    let t = &report.tight;
    if t.applicable {
        let scale = 1.0 + t.bound_scan.abs();
        rec("tight", t.slack, tol.tight);
        rec("closed_form", -(t.bound_closed - t.bound_scan).abs() / scale, tol.closed_form);
        let b = &report.var_n_bounds;
        let h = (t.bound_scan - b.lambda_plus).min(b.lambda_plus).min(t.bound_scan - b.trace);
        rec("hierarchy", h / scale, tol.hierarchy);
    }
    out.observations = Observations {
        relaxed_lambda_plus_min_ratio: ratio(&report.relaxed_lambda_plus),
        relaxed_trace_min_ratio: ratio(&report.relaxed_trace),
    };
    out
}

fn member(config: &SweepConfig, index: usize) -> Result<QuantumState> {
    let seed = state_seed(config.seed, index);
    if index < config.n_pure {
        random_state(config.cutoff, RandomKind::Pure, 1, seed)
    } else {
        let j = index - config.n_pure;
        random_state(config.mixed_cutoff(), RandomKind::Mixed, 1 + j % config.rank, seed)
    }
}

fn evaluate_member(config: &SweepConfig, consts: &BoundConstants, index: usize) -> Result<SweepReport> {
    let state = member(config, index)?;
    let summary = summarize(&state)?;
    if summary.truncation_warning {
        let mut out = SweepReport::empty();
        out.skipped_truncation = 1;
        return Ok(out);
    }
    let report = evaluate(&summary, consts)?;
    Ok(tally_state(&report, &config.tolerances, index))
}

/// Seeded ensemble sweep: `n_pure` random pure states followed by `n_mixed`
/// random mixed states, every gauge inequality tallied per state.
///
/// Members are evaluated in parallel; the result does not depend on the
/// thread count.
pub fn sweep(config: &SweepConfig, consts: &BoundConstants) -> Result<SweepReport> {
    config.validate()?;
    let start = Instant::now();
    let total = config.n_pure + config.n_mixed;
    let parts: Vec<SweepReport> = (0..total)
        .into_par_iter()
        .map(|i| evaluate_member(config, consts, i))
        .collect::<Result<_>>()?;
    let mut report = SweepReport::empty();
    for part in &parts {
        report.merge(part);
    }
    report.passed = report.total_violations() == 0;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}
