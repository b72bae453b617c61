//! Brute-force oracles and dataset emitters: seeded ensemble sweeps over
//! every inequality, calibration of the bound constants, and the figure
//! data tables.

mod calibrate;
mod figures;
mod sweep;

pub use calibrate::{calibrate, AnchorRow, CalibrationReport, ConstantRow, ANCHOR_AGREEMENT, CALIBRATION_ANCHORS};
pub use figures::{
    figure_data, rel_gap_statistic, FigureEmitter, FigureRegistry, GapStatistic, FIG4_ALPHA, FIG4_PHASES,
    MAX_RESOLUTION, MIN_RESOLUTION,
};
pub use sweep::{state_seed, sweep, Observations, SweepConfig, SweepReport, Tally, Tolerances, INEQUALITIES};
