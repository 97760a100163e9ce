//! Grover search on multipartite qudit systems, SLOCC orbit classification
//! of the generated states, and their geometric measure of entanglement.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod geometry;
pub mod gme;
pub mod grover;
pub mod invariants;
pub mod tensor;

pub use error::{Error, Result};
pub use grover::{GroverRun, MarkedSet, Regime};
pub use invariants::{Format, InvariantReport, OrbitLabel};
pub use tensor::{BasisIndex, PureState, QuditSystem, RationalState};
