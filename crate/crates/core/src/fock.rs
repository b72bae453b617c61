//! Pure and mixed states on a truncated Fock space, and the primitive moment
//! engine everything else is built on.
//!
//! Ladder operators act directly on stored amplitudes. Raising grows the
//! cutoff by one, so moments of a finitely supported vector are exact: no
//! boundary level is ever dropped. Density matrices are only materialized for
//! mixed states.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Highest power of `a` or `a†` accepted by [`normally_ordered_moment`].
pub const MAX_MOMENT_ORDER: usize = 4;

/// Normalization tolerance for constructed states.
pub const NORM_TOL: f64 = 1e-12;

/// Tail mass near the cutoff above which moments of a truncated expansion
/// are flagged as boundary-sensitive.
pub const TRUNCATION_WARNING_MASS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

/// Pure state `Σ c_n |n⟩`, n = 0..=cutoff.
///
/// Vectors built by constructors are normalized. Results of
/// [`FockVector::apply_ladder`] are not, and say so through
/// [`FockVector::is_normalized`].
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<C64>,
    normalized: bool,
    // false when the amplitudes are a truncation of an infinite expansion
    exact: bool,
}

impl FockVector {
    /// Normalizes `amplitudes` into a state with finite support.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        Self::raw(amplitudes, true).normalize()
    }

    /// Normalizes amplitudes that approximate an infinite expansion.
    pub(crate) fn truncated(amplitudes: Vec<C64>) -> Result<Self> {
        Self::raw(amplitudes, false).normalize()
    }

    pub(crate) fn raw(mut amplitudes: Vec<C64>, exact: bool) -> Self {
        if amplitudes.is_empty() {
            amplitudes.push(C64::new(0.0, 0.0));
        }
        FockVector {
            amplitudes,
            normalized: false,
            exact,
        }
    }

    /// Number state `|n⟩`.
    pub fn basis(n: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); n + 1];
        amplitudes[n] = C64::new(1.0, 0.0);
        FockVector {
            amplitudes,
            normalized: true,
            exact: true,
        }
    }

    pub fn vacuum() -> Self {
        Self::basis(0)
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> C64 {
        self.amplitudes
            .get(n)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Zero-norm flag, set e.g. by `a|0⟩`.
    pub fn is_zero(&self) -> bool {
        self.norm_sqr() == 0.0
    }

    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm.is_nan() || norm <= 1e-150 || !norm.is_finite() {
            return Err(Error::ZeroNorm(format!("vector norm {norm:e}")));
        }
        for c in &mut self.amplitudes {
            *c /= norm;
        }
        self.normalized = true;
        Ok(self)
    }

    /// Applies `a` or `a†` without renormalizing.
    pub fn apply_ladder(&self, kind: Ladder) -> FockVector {
        let amplitudes = match kind {
            Ladder::Lower => lower(&self.amplitudes),
            Ladder::Raise => raise(&self.amplitudes),
        };
        FockVector {
            amplitudes,
            normalized: false,
            exact: self.exact,
        }
    }

    /// `⟨self|other⟩`, zero-extending the shorter vector.
    pub fn inner(&self, other: &FockVector) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Zero-extends to `cutoff` (never truncates).
    pub fn padded(&self, cutoff: usize) -> Vec<C64> {
        let mut v = self.amplitudes.clone();
        if v.len() < cutoff + 1 {
            v.resize(cutoff + 1, C64::new(0.0, 0.0));
        }
        v
    }
}

pub(crate) fn lower(c: &[C64]) -> Vec<C64> {
    if c.len() <= 1 {
        return vec![C64::new(0.0, 0.0)];
    }
    (1..c.len()).map(|n| c[n] * (n as f64).sqrt()).collect()
}

pub(crate) fn raise(c: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(c.len() + 1);
    out.push(C64::new(0.0, 0.0));
    out.extend(c.iter().enumerate().map(|(n, &cn)| cn * ((n + 1) as f64).sqrt()));
    out
}

pub(crate) fn lower_pow(c: &[C64], k: usize) -> Vec<C64> {
    (0..k).fold(c.to_vec(), |v, _| lower(&v))
}

pub(crate) fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Mixed state: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    rho: DMatrix<C64>,
    exact: bool,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(rho: DMatrix<C64>) -> Result<Self> {
        Self::validated(rho, true)
    }

    pub(crate) fn validated(rho: DMatrix<C64>, exact: bool) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(Error::param("rho", "density matrix must be square and non-empty"));
        }
        let dim = rho.nrows();
        for i in 0..dim {
            for j in 0..=i {
                if (rho[(i, j)] - rho[(j, i)].conj()).norm() > NORM_TOL {
                    return Err(Error::param("rho", format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::param("rho", format!("trace {trace} differs from 1")));
        }
        let dm = DensityMatrix { rho, exact };
        let min_eig = dm.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::param("rho", format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(dm)
    }

    pub fn from_pure(psi: &FockVector) -> Self {
        let c = psi.amplitudes();
        let dim = c.len();
        let rho = DMatrix::from_fn(dim, dim, |i, j| c[i] * c[j].conj());
        DensityMatrix {
            rho,
            exact: psi.is_exact(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.rho.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.rho.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    pub fn padded(&self, cutoff: usize) -> DMatrix<C64> {
        let dim = cutoff.max(self.cutoff()) + 1;
        let mut m = DMatrix::zeros(dim, dim);
        let n = self.rho.nrows();
        m.view_mut((0, 0), (n, n)).copy_from(&self.rho);
        m
    }
}

/// Either a pure or a mixed state.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(FockVector),
    Mixed(DensityMatrix),
}

impl From<FockVector> for QuantumState {
    fn from(v: FockVector) -> Self {
        QuantumState::Pure(v)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(m: DensityMatrix) -> Self {
        QuantumState::Mixed(m)
    }
}

impl QuantumState {
    pub fn cutoff(&self) -> usize {
        match self {
            QuantumState::Pure(v) => v.cutoff(),
            QuantumState::Mixed(m) => m.cutoff(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            QuantumState::Pure(v) => v.is_exact(),
            QuantumState::Mixed(m) => m.is_exact(),
        }
    }

    /// Occupation probabilities `p_n`.
    pub fn probabilities(&self) -> Vec<f64> {
        match self {
            QuantumState::Pure(v) => v.probabilities(),
            QuantumState::Mixed(m) => (0..=m.cutoff()).map(|n| m.rho[(n, n)].re).collect(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(v) => DensityMatrix::from_pure(v),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&FockVector> {
        match self {
            QuantumState::Pure(v) => Some(v),
            QuantumState::Mixed(_) => None,
        }
    }

    /// True when the state is a truncated expansion whose top levels carry
    /// enough weight to disturb fourth-order moments.
    pub fn truncation_warning(&self) -> bool {
        !self.is_exact()
            && tail_mass(self, self.cutoff().saturating_sub(3)) > TRUNCATION_WARNING_MASS
    }
}

/// `⟨a†^j a^k⟩`, exact on the stored support.
pub fn normally_ordered_moment(state: &QuantumState, j: usize, k: usize) -> Result<C64> {
    if j > MAX_MOMENT_ORDER || k > MAX_MOMENT_ORDER {
        return Err(Error::OrderTooHigh {
            j,
            k,
            max: MAX_MOMENT_ORDER,
        });
    }
    if j == k {
        // diagonal: Σ p_n n!/(n-k)! with integer falling factorials
        let falling = |n: usize| (0..k).map(|i| n.saturating_sub(i) as f64).product::<f64>();
        let value = state.probabilities().iter().enumerate().map(|(n, p)| p * falling(n)).sum();
        return Ok(C64::new(value, 0.0));
    }
    Ok(match state {
        QuantumState::Pure(v) => {
            // ⟨ψ|a†^j a^k|ψ⟩ = ⟨a^j ψ | a^k ψ⟩
            let left = lower_pow(v.amplitudes(), j);
            let right = lower_pow(v.amplitudes(), k);
            inner(&left, &right)
        }
        QuantumState::Mixed(m) => mixed_moment(&m.rho, j, k),
    })
}

fn falling_sqrt(n: usize, k: usize) -> f64 {
    // sqrt(n! / (n-k)!)
    (0..k).map(|i| ((n - i) as f64).sqrt()).product()
}

fn mixed_moment(rho: &DMatrix<C64>, j: usize, k: usize) -> C64 {
    // tr(ρ a†^j a^k) = Σ_n ρ[n, m] ⟨m|a†^j a^k|n⟩ with m = n - k + j
    let dim = rho.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for n in k..dim {
        let base = n - k;
        let m = base + j;
        if m >= dim {
            break;
        }
        let coef = falling_sqrt(n, k) * falling_sqrt(m, j);
        acc += rho[(n, m)] * coef;
    }
    acc
}

/// Fidelity between two states after zero-extension to a common cutoff.
/// Pure/pure is `|⟨ψ|φ⟩|²`; anything involving a mixed state uses the
/// Uhlmann form `(tr √(√ρ σ √ρ))²`.
pub fn fidelity(s1: &QuantumState, s2: &QuantumState) -> f64 {
    let f = match (s1, s2) {
        (QuantumState::Pure(a), QuantumState::Pure(b)) => a.inner(b).norm_sqr(),
        (QuantumState::Pure(v), QuantumState::Mixed(m))
        | (QuantumState::Mixed(m), QuantumState::Pure(v)) => {
            let cutoff = v.cutoff().max(m.cutoff());
            let psi = nalgebra::DVector::from_vec(v.padded(cutoff));
            let rho = m.padded(cutoff);
            (psi.adjoint() * rho * &psi)[(0, 0)].re
        }
        (QuantumState::Mixed(a), QuantumState::Mixed(b)) => {
            let cutoff = a.cutoff().max(b.cutoff());
            uhlmann(&a.padded(cutoff), &b.padded(cutoff))
        }
    };
    f.clamp(0.0, 1.0)
}

fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(m.clone());
    let sqrt_vals = eig
        .eigenvalues
        .map(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    let u = &eig.eigenvectors;
    u * DMatrix::from_diagonal(&sqrt_vals) * u.adjoint()
}

fn uhlmann(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    let s = hermitian_sqrt(rho);
    let mut inner = &s * sigma * &s;
    // symmetrize against rounding before the Hermitian eigensolve
    inner = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);
    let root_sum: f64 = SymmetricEigen::new(inner)
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    root_sum * root_sum
}

/// `Σ_{n ≥ m} p_n`.
pub fn tail_mass(state: &QuantumState, m: usize) -> f64 {
    state.probabilities().iter().skip(m).sum()
}
