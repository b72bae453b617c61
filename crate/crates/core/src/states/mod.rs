//! Factories for the state families: coherent, number, displaced squeezed,
//! crescent (two independent constructions), photon-added, the strong-field
//! superposition, cat states and seeded random ensembles.
//!
//! Infinite expansions are cut where the neglected amplitude norm falls
//! below `eps_tail`; see [`Truncation`].

mod registry;
mod spec;

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{raise, DensityMatrix, FockVector, QuantumState, C64};
use crate::laguerre::laguerre;

pub use registry::{BuildContext, BuiltState, Field, StateFamily, StateRegistry};
pub use spec::{ComplexJson, StateSpec};

pub const DEFAULT_EPS_TAIL: f64 = 1e-14;
pub const DEFAULT_MAX_CUTOFF: usize = 4096;
pub const MAX_PHOTON_ADDITION: u32 = 16;
pub const MAX_SQUEEZING: f64 = 3.0;
pub const MAX_RANDOM_CUTOFF: usize = 256;

/// Truncation policy for infinite Fock expansions.
///
/// The cutoff N is the smallest index at which the estimated norm of the
/// neglected amplitudes, including the four highest stored levels, is below
/// `eps_tail`. In mass terms that is `eps_tail²`, which keeps edge
/// amplitudes small enough for exact eigen-relations to hold to ~1e-12.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub eps_tail: f64,
    pub max_cutoff: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            eps_tail: DEFAULT_EPS_TAIL,
            max_cutoff: DEFAULT_MAX_CUTOFF,
        }
    }
}

impl Truncation {
    pub fn new(eps_tail: f64) -> Result<Self> {
        Truncation::default().with_eps(eps_tail)
    }

    pub fn with_eps(self, eps_tail: f64) -> Result<Self> {
        if !(eps_tail > 0.0 && eps_tail <= 1e-6) {
            return Err(Error::param("eps_tail", format!("{eps_tail:e} outside (0, 1e-6]")));
        }
        Ok(Truncation { eps_tail, ..self })
    }

    pub fn with_max_cutoff(self, max_cutoff: usize) -> Self {
        Truncation { max_cutoff, ..self }
    }

    /// Generates amplitudes `term(n, previous)` until the tail criterion holds.
    fn expand(&self, mut term: impl FnMut(usize, &[C64]) -> C64) -> Result<Vec<C64>> {
        let target = self.eps_tail * self.eps_tail;
        let mut amps: Vec<C64> = Vec::new();
        let mut total = 0.0;
        for n in 0..=self.max_cutoff {
            let c = term(n, &amps);
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::CutoffExplosion {
                    max: self.max_cutoff,
                });
            }
            amps.push(c);
            total += c.norm_sqr();
            if c.norm_sqr() > 1e200 {
                for a in &mut amps {
                    *a *= 1e-150;
                }
                total *= 1e-300;
            }
            if n < 7 || total == 0.0 {
                continue;
            }
            let p = |i: usize| amps[i].norm_sqr();
            let recent = p(n) + p(n - 1);
            let earlier = p(n - 2) + p(n - 3);
            if recent + earlier == 0.0 {
                trim_trailing_zeros(&mut amps);
                return Ok(amps);
            }
            if recent < earlier {
                // geometric estimate of the mass beyond n, ratio per two levels
                let q = recent / earlier;
                let beyond = recent * q / (1.0 - q);
                if recent + earlier + beyond <= target * total {
                    return Ok(amps);
                }
            }
        }
        Err(Error::CutoffExplosion {
            max: self.max_cutoff,
        })
    }
}

fn trim_trailing_zeros(amps: &mut Vec<C64>) {
    while amps.len() > 1 && amps.last().is_some_and(|c| c.norm_sqr() == 0.0) {
        amps.pop();
    }
}

fn coherent_amplitudes(alpha: C64, trunc: &Truncation) -> Result<Vec<C64>> {
    if alpha.norm() == 0.0 {
        return Ok(vec![C64::new(1.0, 0.0)]);
    }
    let (mag, phase) = alpha.to_polar();
    let ln_mag = mag.ln();
    let mut log_abs = -mag * mag / 2.0;
    trunc.expand(|n, _| {
        if n > 0 {
            log_abs += ln_mag - 0.5 * (n as f64).ln();
        }
        C64::from_polar(log_abs.exp(), phase * n as f64)
    })
}

/// Coherent state `|α⟩`.
pub fn coherent(alpha: C64, trunc: &Truncation) -> Result<FockVector> {
    let amps = coherent_amplitudes(alpha, trunc)?;
    if amps.len() == 1 {
        return Ok(FockVector::vacuum());
    }
    FockVector::truncated(amps)
}

/// Number state `|n⟩`.
pub fn fock(n: usize) -> FockVector {
    FockVector::basis(n)
}

/// Displaced squeezed vacuum `D(α) S(ξ) |0⟩`, `ξ = r e^{iφ_s}`.
///
/// Convention: `⟨a²⟩ - ⟨a⟩² = e^{iφ_s} sinh r cosh r`, so at `φ_s = 0` the
/// θ = 0 quadrature `x` carries the large variance `e^{2r}/2` and `p` the
/// small one. The state is annihilated by `a - τ a† - (α - τ α*)` with
/// `τ = e^{iφ_s} tanh r`, which gives the two-term recurrence
/// `√(n+1) c_{n+1} = (α - τ α*) c_n + τ √n c_{n-1}`.
pub fn squeezed_coherent(alpha: C64, r: f64, phi_s: f64, trunc: &Truncation) -> Result<FockVector> {
    if !r.is_finite() || r.abs() > MAX_SQUEEZING {
        return Err(Error::param("r", format!("|r| = {r} exceeds {MAX_SQUEEZING}")));
    }
    if !phi_s.is_finite() {
        return Err(Error::param("phi_s", "must be finite"));
    }
    let tau = C64::from_polar(r.tanh(), phi_s);
    let beta = alpha - tau * alpha.conj();
    let amps = trunc.expand(|n, prev| {
        if n == 0 {
            return C64::new(1.0, 0.0);
        }
        let m = n - 1;
        let mut next = beta * prev[m];
        if m >= 1 {
            next += tau * (m as f64).sqrt() * prev[m - 1];
        }
        next / (n as f64).sqrt()
    })?;
    if amps.len() == 1 {
        return Ok(FockVector::vacuum());
    }
    FockVector::truncated(amps)
}

/// How the crescent state is assembled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrescentMethod {
    /// `(a† + α*)^M` applied to a truncated `|α⟩`.
    #[default]
    Operator,
    /// Fock expansion through Laguerre polynomials.
    Laguerre,
}

fn check_photon_number(m: u32) -> Result<()> {
    if m > MAX_PHOTON_ADDITION {
        return Err(Error::param("M", format!("{m} exceeds {MAX_PHOTON_ADDITION}")));
    }
    Ok(())
}

/// Crescent (intelligent) state `N (a† + α*)^M |α⟩`.
pub fn crescent(alpha: C64, m: u32, method: CrescentMethod, trunc: &Truncation) -> Result<FockVector> {
    check_photon_number(m)?;
    match method {
        CrescentMethod::Operator => crescent_operator(alpha, m, trunc),
        CrescentMethod::Laguerre => crescent_laguerre(alpha, m, trunc),
    }
}

fn crescent_operator(alpha: C64, m: u32, trunc: &Truncation) -> Result<FockVector> {
    let mut v = coherent_amplitudes(alpha, trunc)?;
    let exact = v.len() == 1;
    let shift = alpha.conj();
    for _ in 0..m {
        let mut next = raise(&v);
        for (slot, c) in next.iter_mut().zip(&v) {
            *slot += shift * c;
        }
        v = next;
    }
    if exact {
        trim_trailing_zeros(&mut v);
        return FockVector::from_amplitudes(v);
    }
    FockVector::truncated(v)
}

fn crescent_laguerre(alpha: C64, m: u32, trunc: &Truncation) -> Result<FockVector> {
    let m = m as usize;
    if alpha.norm() == 0.0 {
        return Ok(FockVector::basis(m));
    }
    let cutoff = coherent_amplitudes(alpha, trunc)?.len() - 1 + m;
    let x = -alpha.norm_sqr();
    let (mag, phase) = alpha.conj().to_polar();
    let mut ln_fact = 0.0;
    let amps: Vec<C64> = (0..=cutoff)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            // √(n!) (α*)^{M-n} L_n^{M-n}(-|α|²), common factors dropped
            let l = laguerre(n, m as i64 - n as i64, x);
            if l == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let power = m as f64 - n as f64;
            let scale = (0.5 * ln_fact + power * mag.ln()).exp();
            C64::from_polar(l * scale, power * phase)
        })
        .collect();
    FockVector::truncated(amps)
}

/// M-photon-added coherent state `N a†^M |α⟩`.
pub fn photon_added(alpha: C64, m: u32, trunc: &Truncation) -> Result<FockVector> {
    check_photon_number(m)?;
    let base = coherent(alpha, trunc)?;
    let exact = base.is_exact();
    let mut v = base.amplitudes().to_vec();
    for _ in 0..m {
        v = raise(&v);
    }
    if exact {
        return FockVector::from_amplitudes(v);
    }
    FockVector::truncated(v)
}

/// `N⁻¹ = 1 + γ*α + γα* + |γ|²(1 + |α|²)` for [`approx_strong_field`].
pub fn strong_field_norm_inverse(alpha: C64, gamma: C64) -> f64 {
    1.0 + 2.0 * (gamma.conj() * alpha).re + gamma.norm_sqr() * (1.0 + alpha.norm_sqr())
}

/// Strong-field superposition `N (|α⟩ + γ a†|α⟩)`.
pub fn approx_strong_field(alpha: C64, gamma: C64, trunc: &Truncation) -> Result<FockVector> {
    let base = coherent_amplitudes(alpha, trunc)?;
    let mut v = raise(&base);
    for c in &mut v {
        *c *= gamma;
    }
    for (slot, c) in v.iter_mut().zip(&base) {
        *slot += c;
    }
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-13 {
        return Err(Error::ZeroNorm(format!(
            "|α⟩ + γ a†|α⟩ cancels for α = {alpha}, γ = {gamma}"
        )));
    }
    if base.len() == 1 {
        trim_trailing_zeros(&mut v);
        return FockVector::from_amplitudes(v);
    }
    FockVector::truncated(v)
}

/// Cat state `N (|α⟩ + e^{iβ} |-α⟩)`.
pub fn cat(alpha: C64, beta: f64, trunc: &Truncation) -> Result<FockVector> {
    if !beta.is_finite() {
        return Err(Error::param("beta", "must be finite"));
    }
    let base = coherent_amplitudes(alpha, trunc)?;
    let turns = beta / std::f64::consts::PI;
    let rel = if turns == turns.round() {
        // exact parity for even/odd cats
        C64::new(if turns.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 }, 0.0)
    } else {
        C64::from_polar(1.0, beta)
    };
    let mut v: Vec<C64> = base
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            c * (C64::new(1.0, 0.0) + rel * parity)
        })
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-13 {
        return Err(Error::ZeroNorm(format!(
            "|α⟩ + e^{{iβ}}|-α⟩ cancels for α = {alpha}, β = {beta}"
        )));
    }
    if base.len() == 1 {
        trim_trailing_zeros(&mut v);
        return FockVector::from_amplitudes(v);
    }
    FockVector::truncated(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    Pure,
    Mixed,
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * FRAC_1_SQRT_2
}

/// Seeded random state on levels `0..=cutoff`.
///
/// Pure states have i.i.d. complex Gaussian amplitudes (unitarily invariant
/// on the truncated sphere). Mixed states are `G G† / tr(G G†)` with `G` a
/// `(cutoff+1) × rank` complex Ginibre matrix. `rank` is ignored for pure.
pub fn random_state(cutoff: usize, kind: RandomKind, rank: usize, seed: u64) -> Result<QuantumState> {
    if cutoff > MAX_RANDOM_CUTOFF {
        return Err(Error::param("cutoff", format!("{cutoff} exceeds {MAX_RANDOM_CUTOFF}")));
    }
    let dim = cutoff + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        RandomKind::Pure => {
            let amps = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
            Ok(FockVector::from_amplitudes(amps)?.into())
        }
        RandomKind::Mixed => {
            if rank == 0 || rank > dim {
                return Err(Error::param("rank", format!("{rank} outside 1..={dim}")));
            }
            let g = DMatrix::from_fn(dim, rank, |_, _| complex_gaussian(&mut rng));
            let gg = &g * g.adjoint();
            let trace = gg.trace().re;
            let mut rho = gg.map(|z| z / trace);
            for i in 0..dim {
                rho[(i, i)].im = 0.0;
                for j in 0..i {
                    let avg = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
                    rho[(i, j)] = avg;
                    rho[(j, i)] = avg.conj();
                }
            }
            Ok(DensityMatrix::validated(rho, true)?.into())
        }
    }
}
