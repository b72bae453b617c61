//! First- and second-order moment summaries and noise-ellipse geometry.
//!
//! Quadratures follow `x_θ = (a e^{iθ} + a† e^{-iθ})/√2`,
//! `p_θ = (a e^{iθ} - a† e^{-iθ})/(√2 i)`, so `[x, p] = i` and a coherent
//! state has `Var x_θ = 1/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{normally_ordered_moment, QuantumState, C64};
use crate::gauges;

/// Below this magnitude `var_a` is treated as zero (circular ellipse).
pub const CIRCLE_TOL: f64 = 1e-12;
/// Below this magnitude `⟨a⟩` is treated as zero (no stick).
pub const ZERO_STICK_TOL: f64 = 1e-12;
/// Smallest admissible `λ₋²`.
pub const MIN_LAMBDA_SQ: f64 = 1e-12;

mod c64_json {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::fock::C64;
    use crate::states::ComplexJson;

    pub fn serialize<S: Serializer>(c: &C64, s: S) -> Result<S::Ok, S::Error> {
        ComplexJson::from(*c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        ComplexJson::deserialize(d).map(C64::from)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSummary {
    #[serde(with = "c64_json")]
    pub mean_a: C64,
    #[serde(with = "c64_json")]
    pub mean_a2: C64,
    pub mean_n: f64,
    pub mean_n2: f64,
    /// `⟨a†² a²⟩`
    pub mean_a2da2: f64,
    pub var_n: f64,
    /// `⟨a²⟩ - ⟨a⟩²`
    #[serde(with = "c64_json")]
    pub var_a: C64,
    /// symmetrized `Cov(a†, a)`
    pub cov_ada: f64,
    /// symmetrized `Cov(a†², a²)`
    pub cov_a2: f64,
    #[serde(default)]
    pub truncation_warning: bool,
}

impl MomentSummary {
    /// Fills the derived fields from the raw normally ordered moments.
    pub fn from_raw(mean_a: C64, mean_a2: C64, mean_n: f64, mean_a2da2: f64) -> Self {
        let mean_n2 = mean_a2da2 + mean_n;
        MomentSummary {
            mean_a,
            mean_a2,
            mean_n,
            mean_n2,
            mean_a2da2,
            var_n: mean_n2 - mean_n * mean_n,
            var_a: mean_a2 - mean_a * mean_a,
            cov_ada: mean_n + 0.5 - mean_a.norm_sqr(),
            cov_a2: mean_a2da2 + 2.0 * mean_n + 1.0 - mean_a2.norm_sqr(),
            truncation_warning: false,
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("moment summary: {e}")))
    }

    pub fn is_finite(&self) -> bool {
        [
            self.mean_a.re,
            self.mean_a.im,
            self.mean_a2.re,
            self.mean_a2.im,
            self.mean_n,
            self.mean_n2,
            self.mean_a2da2,
            self.var_n,
            self.var_a.re,
            self.var_a.im,
            self.cov_ada,
            self.cov_a2,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Ball-and-stick geometry: extremal quadrature variances and the angles
/// of the ellipse major axis and of the mean amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseEllipse {
    pub lambda_plus_sq: f64,
    pub lambda_minus_sq: f64,
    pub major_axis_angle: f64,
    pub stick_angle: f64,
    pub circle_flag: bool,
    pub zero_stick_flag: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureStats {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
}

/// Reduces a state to its moment summary.
pub fn summarize(state: &QuantumState) -> Result<MomentSummary> {
    let mean_a = normally_ordered_moment(state, 0, 1)?;
    let mean_a2 = normally_ordered_moment(state, 0, 2)?;
    let mean_n = normally_ordered_moment(state, 1, 1)?.re;
    let mean_a2da2 = normally_ordered_moment(state, 2, 2)?.re;
    let mut s = MomentSummary::from_raw(mean_a, mean_a2, mean_n, mean_a2da2);
    s.truncation_warning = state.truncation_warning();
    Ok(s)
}

/// [`summarize`], cross-checked against dense matrix evaluation of the
/// symmetrized products.
pub fn summarize_verified(state: &QuantumState) -> Result<MomentSummary> {
    let s = summarize(state)?;
    let d = direct::moments(state);
    let scale = 1.0 + s.mean_n * s.mean_n;
    let checks = [
        ("mean_a", (s.mean_a - d.mean_a).norm()),
        ("var_a", (s.var_a - d.var_a).norm()),
        ("cov_ada", (s.cov_ada - d.cov_ada).abs()),
        ("cov_a2", (s.cov_a2 - d.cov_a2).abs()),
        ("var_n", (s.var_n - d.var_n).abs()),
    ];
    for (name, diff) in checks {
        if diff > 1e-10 * scale {
            return Err(Error::Verification(format!(
                "{name}: ladder and dense evaluations differ by {diff:e}"
            )));
        }
    }
    Ok(s)
}

fn arg_or_zero(z: C64, tol: f64) -> (f64, bool) {
    if z.norm() < tol {
        (0.0, true)
    } else {
        (z.arg(), false)
    }
}

/// Noise ellipse of a summary. Flagged angles are 0.
pub fn ellipse(summary: &MomentSummary) -> Result<NoiseEllipse> {
    if !summary.is_finite() {
        return Err(Error::NonphysicalMoments("non-finite moment".into()));
    }
    let v = summary.var_a.norm();
    let lambda_plus_sq = summary.cov_ada + v;
    let lambda_minus_sq = summary.cov_ada - v;
    if lambda_minus_sq <= MIN_LAMBDA_SQ {
        return Err(Error::NonphysicalMoments(format!(
            "λ₋² = {lambda_minus_sq:e} is not positive (cov_ada = {}, |var_a| = {v})",
            summary.cov_ada
        )));
    }
    let (delta, circle_flag) = arg_or_zero(summary.var_a, CIRCLE_TOL);
    let (stick_angle, zero_stick_flag) = arg_or_zero(summary.mean_a, ZERO_STICK_TOL);
    Ok(NoiseEllipse {
        lambda_plus_sq,
        lambda_minus_sq,
        major_axis_angle: delta / 2.0,
        stick_angle,
        circle_flag,
        zero_stick_flag,
    })
}

pub fn quadrature_stats_from_summary(summary: &MomentSummary, theta: f64) -> QuadratureStats {
    let rot = C64::from_polar(1.0, theta);
    let shifted = summary.mean_a * rot;
    QuadratureStats {
        mean_x: std::f64::consts::SQRT_2 * shifted.re,
        mean_p: std::f64::consts::SQRT_2 * shifted.im,
        var_x: summary.cov_ada + (summary.var_a * rot * rot).re,
    }
}

/// Mean of `x_θ` and `p_θ` and variance of `x_θ`.
pub fn quadrature_stats(state: &QuantumState, theta: f64) -> Result<QuadratureStats> {
    Ok(quadrature_stats_from_summary(&summarize(state)?, theta))
}

/// `λ²(φ) = λ₊² sin²φ + λ₋² cos²φ`.
pub fn lambda_sq(ellipse: &NoiseEllipse, angle: f64) -> f64 {
    let (s, c) = angle.sin_cos();
    ellipse.lambda_plus_sq * s * s + ellipse.lambda_minus_sq * c * c
}

/// Putative phase variance `1 / B_tight`, so that `Var n · Var φ ≥ 1`.
/// `None` when the state has no mean amplitude.
pub fn phase_variance(summary: &MomentSummary) -> Result<Option<f64>> {
    let e = ellipse(summary)?;
    if e.zero_stick_flag {
        return Ok(None);
    }
    let (bound, _) = gauges::scan_tight_bound(summary);
    Ok(Some(1.0 / bound))
}

/// Dense-matrix evaluation of the same moments, independent of the ladder
/// engine. Used as an oracle.
pub mod direct {
    use nalgebra::DMatrix;

    use crate::fock::{QuantumState, C64};

    #[derive(Clone, Copy, Debug)]
    pub struct DirectMoments {
        pub mean_a: C64,
        pub var_a: C64,
        pub var_n: f64,
        pub cov_ada: f64,
        pub cov_a2: f64,
    }

    fn annihilation(dim: usize) -> DMatrix<C64> {
        DMatrix::from_fn(dim, dim, |i, j| {
            if j == i + 1 {
                C64::new((j as f64).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    fn setup(state: &QuantumState) -> (DMatrix<C64>, DMatrix<C64>) {
        // two spare levels so a†² acts exactly on the support
        let rho = state.to_density().padded(state.cutoff() + 2);
        let a = annihilation(rho.nrows());
        (rho, a)
    }

    fn expect(rho: &DMatrix<C64>, op: &DMatrix<C64>) -> C64 {
        (rho * op).trace()
    }

    pub fn moments(state: &QuantumState) -> DirectMoments {
        let (rho, a) = setup(state);
        let ad = a.adjoint();
        let half = C64::new(0.5, 0.0);
        let a2 = &a * &a;
        let ad2 = &ad * &ad;
        let n = &ad * &a;
        let mean_a = expect(&rho, &a);
        let mean_a2 = expect(&rho, &a2);
        let sym1 = expect(&rho, &((&n + &a * &ad) * half)).re;
        let sym2 = expect(&rho, &((&ad2 * &a2 + &a2 * &ad2) * half)).re;
        let mean_n = expect(&rho, &n).re;
        let mean_n2 = expect(&rho, &(&n * &n)).re;
        DirectMoments {
            mean_a,
            var_a: mean_a2 - mean_a * mean_a,
            var_n: mean_n2 - mean_n * mean_n,
            cov_ada: sym1 - mean_a.norm_sqr(),
            cov_a2: sym2 - mean_a2.norm_sqr(),
        }
    }

    /// `⟨x_θ²⟩ - ⟨x_θ⟩²` from the dense quadrature matrix.
    pub fn quadrature_variance(state: &QuantumState, theta: f64) -> f64 {
        let (rho, a) = setup(state);
        let rot = C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta);
        let x = &a * rot + a.adjoint() * rot.conj();
        let m = expect(&rho, &x).re;
        expect(&rho, &(&x * &x)).re - m * m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockVector;
    use crate::states::{coherent, fock, squeezed_coherent, Truncation};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn summary_of(v: FockVector) -> MomentSummary {
        summarize_verified(&v.into()).unwrap()
    }

    fn t() -> Truncation {
        Truncation::default()
    }

    #[test]
    fn vacuum_summary() {
        let s = summary_of(FockVector::vacuum());
        assert_eq!(s.mean_a, c(0.0, 0.0));
        assert_eq!(s.var_n, 0.0);
        assert_eq!(s.cov_ada, 0.5);
        assert_eq!(s.cov_a2, 1.0);
    }

    #[test]
    fn one_photon_summary() {
        let s = summary_of(fock(1));
        assert!((s.cov_ada - 1.5).abs() < 1e-15);
        assert_eq!(s.var_a, c(0.0, 0.0));
        assert!((s.cov_a2 - 3.0).abs() < 1e-15);
        let d = direct::moments(&fock(1).into());
        assert!((d.cov_a2 - 3.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_summary() {
        let s = summary_of(coherent(c(2.0, 0.0), &t()).unwrap());
        assert!((s.var_n - 4.0).abs() < 1e-12);
        assert!((s.cov_ada - 0.5).abs() < 1e-12);
        assert!(s.var_a.norm() < 1e-12);
        assert!(!s.truncation_warning);
    }

    #[test]
    fn ellipse_examples() {
        for alpha in [c(0.3, 0.0), c(1.0, -2.0), c(0.0, 3.0)] {
            let e = ellipse(&summary_of(coherent(alpha, &t()).unwrap())).unwrap();
            assert!((e.lambda_plus_sq - 0.5).abs() < 1e-11);
            assert!((e.lambda_minus_sq - 0.5).abs() < 1e-11);
            assert!(e.circle_flag);
            assert_eq!(e.major_axis_angle, 0.0);
        }
        let e = ellipse(&summary_of(squeezed_coherent(c(0.0, 0.0), 0.5, 0.0, &t()).unwrap())).unwrap();
        assert!((e.lambda_plus_sq - 1f64.exp() / 2.0).abs() < 1e-12);
        assert!((e.lambda_minus_sq - (-1f64).exp() / 2.0).abs() < 1e-12);
        assert!((e.lambda_plus_sq - 1.35914).abs() < 1e-5);
        assert!((e.lambda_minus_sq - 0.18394).abs() < 1e-5);
        assert!(e.zero_stick_flag);

        let e = ellipse(&summary_of(fock(1))).unwrap();
        assert!((e.lambda_plus_sq - 1.5).abs() < 1e-15);
        assert!(e.circle_flag);
    }

    #[test]
    fn nonphysical_summary_is_rejected() {
        let mut s = summary_of(FockVector::vacuum());
        s.var_a = c(0.6, 0.0);
        assert!(matches!(ellipse(&s), Err(Error::NonphysicalMoments(_))));
    }

    #[test]
    fn quadrature_examples() {
        let vac: QuantumState = FockVector::vacuum().into();
        for theta in [0.0, 1.0, 2.5] {
            assert!((quadrature_stats(&vac, theta).unwrap().var_x - 0.5).abs() < 1e-15);
        }
        let k: QuantumState = coherent(c(0.0, 1.0), &t()).unwrap().into();
        let q = quadrature_stats(&k, 0.0).unwrap();
        assert!((q.mean_p - 2f64.sqrt()).abs() < 1e-12);
        let sq: QuantumState = squeezed_coherent(c(0.0, 0.0), 0.5, 0.0, &t()).unwrap().into();
        let q = quadrature_stats(&sq, 0.0).unwrap();
        assert!((q.var_x - 1f64.exp() / 2.0).abs() < 1e-12);
        assert!((q.var_x - direct::quadrature_variance(&sq, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn lambda_sq_examples() {
        let e = NoiseEllipse {
            lambda_plus_sq: 2.0,
            lambda_minus_sq: 0.25,
            major_axis_angle: 0.0,
            stick_angle: 0.0,
            circle_flag: false,
            zero_stick_flag: false,
        };
        assert_eq!(lambda_sq(&e, 0.0), 0.25);
        assert!((lambda_sq(&e, PI / 2.0) - 2.0).abs() < 1e-15);
        let circle = NoiseEllipse {
            lambda_plus_sq: 0.5,
            lambda_minus_sq: 0.5,
            ..e
        };
        assert!((lambda_sq(&circle, 0.7) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn phase_variance_examples() {
        let s = summary_of(coherent(c(2.0, 0.0), &t()).unwrap());
        assert!((phase_variance(&s).unwrap().unwrap() - 0.25).abs() < 1e-10);
        assert_eq!(phase_variance(&summary_of(fock(3))).unwrap(), None);
    }

    #[test]
    fn summary_json_round_trip() {
        let s = summary_of(squeezed_coherent(c(0.4, -0.2), 0.3, 0.9, &t()).unwrap());
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"mean_a\":{\"re\":"));
        let back: MomentSummary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
