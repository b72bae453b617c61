use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::C64;
use crate::gauges::BoundConstants;
use crate::moments::summarize;
use crate::output::Table;
use crate::states::{approx_strong_field, Truncation};

pub const MIN_RESOLUTION: usize = 16;
pub const MAX_RESOLUTION: usize = 2048;

/// Produces one figure's data table.
pub trait FigureEmitter: Send + Sync {
    fn name(&self) -> &'static str;
    fn header(&self) -> &'static [&'static str];
    fn emit(&self, resolution: usize, consts: &BoundConstants) -> Result<Table>;
}

/// Figure emitters keyed by name.
pub struct FigureRegistry {
    emitters: BTreeMap<&'static str, Box<dyn FigureEmitter>>,
}

impl FigureRegistry {
    pub fn empty() -> Self {
        FigureRegistry {
            emitters: BTreeMap::new(),
        }
    }

    pub fn with_builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(RelaxedSurfaces));
        r.register(Box::new(PhysicalBoundary));
        r.register(Box::new(StrongFieldPoints));
        r
    }

    pub fn register(&mut self, emitter: Box<dyn FigureEmitter>) {
        self.emitters.insert(emitter.name(), emitter);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.emitters.keys().copied().collect()
    }

    pub fn emit(&self, which: &str, resolution: usize, consts: &BoundConstants) -> Result<Table> {
        let emitter = self.emitters.get(which).ok_or_else(|| {
            Error::param("which", format!("unknown figure '{which}' (known: {})", self.names().join(", ")))
        })?;
        if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&resolution) {
            return Err(Error::param(
                "resolution",
                format!("must be in {MIN_RESOLUTION}..={MAX_RESOLUTION}"),
            ));
        }
        emitter.emit(resolution, consts)
    }
}

/// Built-in figure table.
pub fn figure_data(which: &str, resolution: usize, consts: &BoundConstants) -> Result<Table> {
    FigureRegistry::with_builtin().emit(which, resolution, consts)
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { b } else { a + step * i as f64 })
}

/// Relaxed lower bounds on `Var n` per unit `|⟨a⟩|²` over the physical
/// part of the `(|Var a|, Cov(a†,a))` plane.
struct RelaxedSurfaces;

impl FigureEmitter for RelaxedSurfaces {
    fn name(&self) -> &'static str {
        "fig2"
    }

    fn header(&self) -> &'static [&'static str] {
        &["var_a_abs", "cov_ada", "bound_eq11", "bound_eq13"]
    }

    fn emit(&self, resolution: usize, consts: &BoundConstants) -> Result<Table> {
        let mut t = Table::new(self.header());
        for v in linspace(0.0, 3.0, resolution) {
            for cov in linspace(0.5, 3.0, resolution) {
                if cov * cov - 0.25 < v * v {
                    continue;
                }
                t.push(vec![v, cov, consts.c1 / (cov + v), consts.c2 / cov]);
            }
        }
        Ok(t)
    }
}

/// Lower boundary of physical covariances (hyperboloid) and of
/// non-squeezed ones (cone) over the complex `Var a` plane.
struct PhysicalBoundary;

impl FigureEmitter for PhysicalBoundary {
    fn name(&self) -> &'static str {
        "fig3"
    }

    fn header(&self) -> &'static [&'static str] {
        &["re_var_a", "im_var_a", "hyperboloid", "cone"]
    }

    fn emit(&self, resolution: usize, _consts: &BoundConstants) -> Result<Table> {
        // odd point count so the grid contains the origin exactly
        let n = resolution | 1;
        let half = (n / 2) as f64;
        let mut t = Table::new(self.header());
        for i in 0..n {
            let re = 2.0 * (i as f64 - half) / half;
            for j in 0..n {
                let im = 2.0 * (j as f64 - half) / half;
                let v = re.hypot(im);
                t.push(vec![re, im, (0.25 + v * v).sqrt(), v + 0.5]);
            }
        }
        Ok(t)
    }
}

pub const FIG4_ALPHA: f64 = 3.0;
pub const FIG4_PHASES: [f64; 3] = [0.0, FRAC_PI_4, 2.0 * FRAC_PI_4];

/// Approximate strong-field intelligent states at α = 3 against the
/// covariance form of the relaxed bound.
struct StrongFieldPoints;

impl FigureEmitter for StrongFieldPoints {
    fn name(&self) -> &'static str {
        "fig4"
    }

    fn header(&self) -> &'static [&'static str] {
        &["gamma_re", "gamma_im", "cov_ada", "var_n", "bound", "rel_gap"]
    }

    fn emit(&self, resolution: usize, consts: &BoundConstants) -> Result<Table> {
        let alpha = C64::new(FIG4_ALPHA, 0.0);
        let trunc = Truncation::default();
        let mut t = Table::new(self.header());
        for (k, &phase) in FIG4_PHASES.iter().enumerate() {
            for (i, modulus) in linspace(0.0, 1.0, resolution).enumerate() {
                if i == 0 && k > 0 {
                    continue;
                }
                let gamma = C64::from_polar(modulus, phase);
                let s = summarize(&approx_strong_field(alpha, gamma, &trunc)?.into())?;
                let bound = consts.c2 * s.mean_a.norm_sqr() / s.cov_ada;
                t.push(vec![gamma.re, gamma.im, s.cov_ada, s.var_n, bound, (s.var_n - bound) / bound]);
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapStatistic {
    pub points: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// Summary of the `rel_gap` column; `None` if the table has none.
pub fn rel_gap_statistic(table: &Table) -> Option<GapStatistic> {
    let gaps = table.column("rel_gap")?;
    if gaps.is_empty() {
        return None;
    }
    Some(GapStatistic {
        points: gaps.len(),
        min: gaps.iter().copied().fold(f64::INFINITY, f64::min),
        mean: gaps.iter().sum::<f64>() / gaps.len() as f64,
        max: gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}
