//! Number-quadrature inequalities and the nonclassicality gauges G1, G2.
//!
//! The canonical tight bound is the θ-scan
//! `B_tight = max_θ |⟨p_θ⟩|² / (4 Var x_θ)` of the Robertson relation
//! `Var n · Var x_θ ≥ |⟨p_θ⟩|²/4`. Maximizing the rank-one Rayleigh
//! quotient in closed form gives
//!
//! ```text
//! B_tight = C_tight |⟨a⟩|² Λ² / (λ₊² λ₋²),   Λ² = λ₊² cos²χ + λ₋² sin²χ
//! ```
//!
//! with χ the angle between stick and major axis. The relaxed bounds follow
//! from `Λ² ≥ λ₋²` (constant `C₁`) and from summing the θ = 0 canonical pair
//! (constant `C₂`). All three constants are derived, not taken from print;
//! see [`crate::verify::calibrate`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::moments::{ellipse, quadrature_stats_from_summary, MomentSummary, NoiseEllipse};
use crate::optimize::maximize_periodic;

pub const SCAN_POINTS: usize = 1024;
pub const SCAN_TOL: f64 = 1e-10;
/// `|slack|` at or below this counts as saturated.
pub const SATURATION_TOL: f64 = 1e-8;
pub const HIERARCHY_TOL: f64 = 1e-10;
/// Mean amplitude above which G2 is flagged as outside its intended domain.
pub const G2_AMPLITUDE_WARNING: f64 = 1e-8;
/// `λ₋² - 1/2` below minus this classifies a state as squeezed.
pub const SQUEEZING_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c_tight: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BoundConstants {
    /// Values derived analytically under the pinned quadrature convention.
    pub const ANALYTIC: BoundConstants = BoundConstants {
        c_tight: 0.5,
        c1: 0.5,
        c2: 0.25,
    };
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self::ANALYTIC
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightBoundReport {
    pub bound_scan: f64,
    pub theta_star: f64,
    pub bound_closed: f64,
    pub var_n: f64,
    pub slack: f64,
    pub applicable: bool,
}

/// One inequality in `lhs ≥ rhs` orientation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub saturated: bool,
}

impl InequalityRecord {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        InequalityRecord {
            lhs,
            rhs,
            slack,
            saturated: slack.abs() <= SATURATION_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezingRecord {
    /// `cov_ada - 1/2`
    pub lhs: f64,
    /// `|var_a|`
    pub rhs: f64,
    /// `λ₋² - 1/2`
    pub slack: f64,
    pub saturated: bool,
    pub squeezed: bool,
}

/// `Var n Var x ≥ |⟨p⟩|²/4` and `Var n Var p ≥ |⟨x⟩|²/4` at θ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPair {
    pub x: InequalityRecord,
    pub p: InequalityRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxedBounds {
    /// `Var n · λ₊² ≥ C₁ |⟨a⟩|²`
    pub lambda_plus: InequalityRecord,
    /// `Var n · Cov(a†,a) ≥ C₂ |⟨a⟩|²`
    pub trace: InequalityRecord,
    pub canonical_pair: CanonicalPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentConstraints {
    /// `Cov(a†,a) ≥ 1/2`
    pub covariance_floor: InequalityRecord,
    /// `Cov(a†,a)² - 1/4 ≥ |Var a|²`
    pub uncertainty_area: InequalityRecord,
    pub squeezing: SqueezingRecord,
    /// `Cov(a†²,a²) ≥ 2⟨n⟩ + 1`
    pub fourth_order: InequalityRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2Report {
    pub g2: f64,
    pub g2_alt: Option<f64>,
    pub amplitude_warning: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeReport {
    pub g1: Option<f64>,
    pub g2: f64,
    /// Second printed form of G2; informational only.
    pub g2_alt: Option<f64>,
    pub g2_amplitude_warning: bool,
    pub tight: TightBoundReport,
    pub relaxed_lambda_plus: InequalityRecord,
    pub relaxed_trace: InequalityRecord,
    pub canonical_pair: CanonicalPair,
    pub constraints: MomentConstraints,
    pub var_n_bounds: VarNBounds,
    pub hierarchy_ok: bool,
    pub truncation_warning: bool,
    pub ellipse: NoiseEllipse,
    pub constants: BoundConstants,
}

/// `f(θ) = |⟨p_θ⟩|² / (4 Var x_θ)`.
pub fn tight_bound_objective(summary: &MomentSummary, theta: f64) -> f64 {
    let q = quadrature_stats_from_summary(summary, theta);
    q.mean_p * q.mean_p / (4.0 * q.var_x)
}

/// Grid-plus-golden-section maximum of [`tight_bound_objective`] over one
/// period; returns `(bound, θ*)` with θ* in `[0, π)`.
pub fn scan_tight_bound(summary: &MomentSummary) -> (f64, f64) {
    let (theta, value) = maximize_periodic(
        |t| tight_bound_objective(summary, t),
        std::f64::consts::PI,
        SCAN_POINTS,
        SCAN_TOL,
    );
    (value, theta)
}

/// Rank-one Rayleigh-quotient closed form of the tight bound.
pub fn closed_form_bound(summary: &MomentSummary, e: &NoiseEllipse, c_tight: f64) -> f64 {
    let chi = e.stick_angle - e.major_axis_angle;
    let (s, c) = chi.sin_cos();
    let big_lambda_sq = e.lambda_plus_sq * c * c + e.lambda_minus_sq * s * s;
    c_tight * summary.mean_a.norm_sqr() * big_lambda_sq / (e.lambda_plus_sq * e.lambda_minus_sq)
}

pub fn tight_bound(summary: &MomentSummary, e: &NoiseEllipse, consts: &BoundConstants) -> TightBoundReport {
    if e.zero_stick_flag {
        return TightBoundReport {
            bound_scan: 0.0,
            theta_star: 0.0,
            bound_closed: 0.0,
            var_n: summary.var_n,
            slack: summary.var_n,
            applicable: false,
        };
    }
    let (bound_scan, theta_star) = scan_tight_bound(summary);
    TightBoundReport {
        bound_scan,
        theta_star,
        bound_closed: closed_form_bound(summary, e, consts.c_tight),
        var_n: summary.var_n,
        slack: summary.var_n - bound_scan,
        applicable: true,
    }
}

pub fn relaxed_bounds(summary: &MomentSummary, e: &NoiseEllipse, consts: &BoundConstants) -> RelaxedBounds {
    let amp_sq = summary.mean_a.norm_sqr();
    let q0 = quadrature_stats_from_summary(summary, 0.0);
    // p_0 = -x_{π/2}
    let var_p = summary.cov_ada - summary.var_a.re;
    RelaxedBounds {
        lambda_plus: InequalityRecord::new(summary.var_n * e.lambda_plus_sq, consts.c1 * amp_sq),
        trace: InequalityRecord::new(summary.var_n * summary.cov_ada, consts.c2 * amp_sq),
        canonical_pair: CanonicalPair {
            x: InequalityRecord::new(summary.var_n * q0.var_x, q0.mean_p * q0.mean_p / 4.0),
            p: InequalityRecord::new(summary.var_n * var_p, q0.mean_x * q0.mean_x / 4.0),
        },
    }
}

pub fn moment_constraints(summary: &MomentSummary, e: &NoiseEllipse) -> MomentConstraints {
    let cov = summary.cov_ada;
    let v = summary.var_a.norm();
    let squeeze_slack = e.lambda_minus_sq - 0.5;
    MomentConstraints {
        covariance_floor: InequalityRecord::new(cov, 0.5),
        uncertainty_area: InequalityRecord::new(cov * cov - 0.25, v * v),
        squeezing: SqueezingRecord {
            lhs: cov - 0.5,
            rhs: v,
            slack: squeeze_slack,
            saturated: squeeze_slack.abs() <= SATURATION_TOL,
            squeezed: squeeze_slack < -SQUEEZING_TOL,
        },
        fourth_order: InequalityRecord::new(summary.cov_a2, 2.0 * summary.mean_n + 1.0),
    }
}

/// `G1 = Var n / B_tight`; `None` without mean amplitude.
pub fn gauge_g1(summary: &MomentSummary, e: &NoiseEllipse) -> Option<f64> {
    if e.zero_stick_flag {
        return None;
    }
    let (bound, _) = scan_tight_bound(summary);
    Some(summary.var_n / bound)
}

/// `G2 = Cov(a†², a²) / (2⟨n⟩ + 1)`, plus the alternative printed form
/// `[Var n + 4(λ₊² - 1/2)(λ₋² + 1/2)] / ⟨n⟩` for comparison.
pub fn gauge_g2(summary: &MomentSummary) -> G2Report {
    let g2 = summary.cov_a2 / (2.0 * summary.mean_n + 1.0);
    let v = summary.var_a.norm();
    let lp = summary.cov_ada + v;
    let lm = summary.cov_ada - v;
    let g2_alt = (summary.mean_n > 1e-15)
        .then(|| (summary.var_n + 4.0 * (lp - 0.5) * (lm + 0.5)) / summary.mean_n);
    G2Report {
        g2,
        g2_alt,
        amplitude_warning: summary.mean_a.norm() > G2_AMPLITUDE_WARNING,
    }
}

/// Lower bounds on `Var n` implied by the two relaxed inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarNBounds {
    /// `C₁ |⟨a⟩|² / λ₊²`
    pub lambda_plus: f64,
    /// `C₂ |⟨a⟩|² / Cov(a†,a)`
    pub trace: f64,
}

pub fn relaxed_var_n_bounds(summary: &MomentSummary, e: &NoiseEllipse, consts: &BoundConstants) -> VarNBounds {
    let amp_sq = summary.mean_a.norm_sqr();
    VarNBounds {
        lambda_plus: consts.c1 * amp_sq / e.lambda_plus_sq,
        trace: consts.c2 * amp_sq / summary.cov_ada,
    }
}

/// `B_tight ≥ C₁-bound ≥ 0` and `B_tight ≥ C₂-bound`, with tolerance
/// `1e-10 · (1 + B_tight)`.
pub fn hierarchy_check(report: &GaugeReport, tight: &TightBoundReport) -> bool {
    hierarchy_holds(
        tight.bound_scan,
        report.var_n_bounds.lambda_plus,
        report.var_n_bounds.trace,
    )
}

fn hierarchy_holds(bound: f64, r1: f64, r2: f64) -> bool {
    let tol = HIERARCHY_TOL * (1.0 + bound.abs());
    bound >= r1 - tol && r1 >= -tol && bound >= r2 - tol
}

/// Full gauge evaluation of a moment summary.
pub fn evaluate(summary: &MomentSummary, consts: &BoundConstants) -> Result<GaugeReport> {
    let e = ellipse(summary)?;
    let tight = tight_bound(summary, &e, consts);
    let relaxed = relaxed_bounds(summary, &e, consts);
    let constraints = moment_constraints(summary, &e);
    let g2 = gauge_g2(summary);
    let g1 = tight.applicable.then(|| summary.var_n / tight.bound_scan);
    let var_n_bounds = relaxed_var_n_bounds(summary, &e, consts);
    Ok(GaugeReport {
        g1,
        g2: g2.g2,
        g2_alt: g2.g2_alt,
        g2_amplitude_warning: g2.amplitude_warning,
        tight,
        relaxed_lambda_plus: relaxed.lambda_plus,
        relaxed_trace: relaxed.trace,
        canonical_pair: relaxed.canonical_pair,
        constraints,
        var_n_bounds,
        hierarchy_ok: hierarchy_holds(tight.bound_scan, var_n_bounds.lambda_plus, var_n_bounds.trace),
        truncation_warning: summary.truncation_warning,
        ellipse: e,
        constants: *consts,
    })
}
