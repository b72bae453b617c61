//! Truncated Fock-space numerics for the photon-number / rotated-quadrature
//! uncertainty relation.
//!
//! The crate builds the extremal state families (coherent, squeezed, crescent,
//! photon-added, cat, ...), reduces states to first- and second-order moment
//! summaries, evaluates the number-quadrature inequalities together with the
//! nonclassicality gauges G1 and G2, and checks all of it with brute-force
//! oracles (random-ensemble sweeps, calibration of the bound constants).
//!
//! Data flows one way:
//!
//! ```text
//! StateSpec --(states)--> QuantumState --(moments)--> MomentSummary --(gauges)--> GaugeReport
//! ```
//!
//! `MomentSummary` is the only interchange format between the state layer and
//! the gauge layer, so gauges can also be evaluated on moment tables that were
//! measured rather than computed.

pub mod cli;
pub mod error;
pub mod fock;
pub mod gauges;
pub mod laguerre;
pub mod moments;
pub mod optimize;
pub mod output;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, FockVector, Ladder, QuantumState, C64};
pub use gauges::{BoundConstants, GaugeReport, TightBoundReport};
pub use moments::{MomentSummary, NoiseEllipse};
pub use states::{StateRegistry, StateSpec, Truncation};
