//! Simulation and entanglement verification for photon pairs shared between
//! two spatial modes.
//!
//! Two spatial ports A and B carry photons in a truncated Fock basis. The
//! crate applies beamsplitters and phase shifters, computes photon-count
//! statistics, and evaluates entanglement criteria built from those counts:
//!
//! * [`verify`]: local filtering to `{|0⟩,|2⟩}⊗{|0⟩,|2⟩}`, number twirl,
//!   concurrence and negativity bounds, the count-based criteria and the
//!   phase scan.
//! * [`multimode`]: internal (color) modes, color-blind statistics, the
//!   conservative criterion and the pairwise dephasing split.
//! * [`states`]: named states and seeded separable-state generators.

pub mod cli;
pub mod error;
pub mod fock;
pub mod formats;
pub mod linalg;
pub mod multimode;
pub mod optics;
pub mod settings;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{DensityOperator, Port, PureState, TwoModeBasis};
pub use optics::{BeamSplitterParams, CountDistribution, PhaseConvention};
pub use states::State;
pub use verify::{CriterionKind, CriterionReport};
