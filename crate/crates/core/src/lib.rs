//! Beamforming weight synthesis and hardware calibration for a
//! multi-port antenna driven by a multi-channel software-defined radio.
//!
//! The crate covers the full chain from measured element patterns to the
//! complex settings programmed into the radio:
//!
//! * [`farfield`] — per-port complex element patterns over an angular cut,
//!   coherent superposition, gain prediction, sector statistics, and the
//!   text file formats for patterns and cuts.
//! * [`optimizer`] — particle-swarm synthesis of precoding weights
//!   (omnidirectional ripple minimization or gain maximization at a target
//!   angle) and ranking-based selection of which ports to drive.
//! * [`calibration`] — measured wave-quantity ratios, feed-network phases,
//!   and radio calibration coefficients, inverted and multiplied into
//!   per-port correction settings.
//! * [`codebook`] — named weight vectors in a human-editable format.
//! * [`compare`] — predicted-versus-measured pattern agreement.
//!
//! Complex values are carried as [`ComplexCoefficient`] (polar form,
//! canonical phase in `(-180°, 180°]`). Weight vectors map antenna ports
//! to coefficients; all file formats are line-oriented text with `#`
//! metadata comments and shortest-exact float formatting, so every file
//! round-trips bit for bit.

// `!(x > 0.0)`-style guards are deliberate: unlike `x <= 0.0`, the negated
// form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod codebook;
pub mod coeff;
pub mod compare;
pub mod digest;
pub mod error;
pub mod farfield;
pub mod optimizer;
pub mod ports;
pub mod table;

pub use coeff::{parse_coefficient, parse_complex, wrap_phase_deg, ComplexCoefficient};
pub use error::{Error, Result};
pub use ports::{AntennaPort, SdrPort};

pub use calibration::{
    compose_all, invert_ratio, vna_offset_apply, ComposedSettings, FeedNetworkTable,
    LineRecordSet, MeasuredRatioTable, PortMap, SdrCalTable,
};
pub use codebook::{Codebook, CodebookEntry};
pub use compare::{compare, ComparisonReport};
pub use farfield::{
    angle_grid, evaluate_field, gain_db, predict_cut, predict_cut_raw, sector_stats,
    ElementPatternSet, PatternCut, SectorStats,
};
pub use optimizer::{optimize, select_ports, Objective, PsoConfig, SelectionReport};

/// A precoding weight vector: one complex coefficient per antenna port.
/// Ports absent from the map carry zero weight.
pub type WeightMap = std::collections::BTreeMap<AntennaPort, ComplexCoefficient>;
