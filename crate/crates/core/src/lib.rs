//! Exact counts of monotone lattice paths in a rectangular grid with a
//! Ferrers diagram removed from its upper-left corner, together with
//! verifiers for the log-concavity of their anti-diagonal sequences and the
//! order-2 total positivity facts that underlie it.

pub mod cli;
mod decimal;
pub mod partition;
pub mod pathgrid;
pub mod simion;
pub mod tp2;

pub use partition::{Partition, PartitionError};
pub use pathgrid::{
    binomial, count_dp, count_recursive, enumerate_paths, GridError, GridRegion, LatticePath,
    PathCount, Step,
};
pub use simion::{
    check_inequality, derive_chain, simion_sequence, sweep, verify_theorem, Inequality,
    SimionError, SimionSequence, SweepConfig, SweepMode, SweepReport, SweepScope,
};
pub use tp2::{MatrixNN, PositiveSequence, SequencePair, Tp2Error};
