//! Pairwise DNA alignment on a lockstep lane-group wavefront engine.

pub mod batch;
pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod io;
pub mod refdp;
pub mod result;
pub mod scoring;
pub mod selftest;
pub mod seq;
pub mod traceback;

pub use error::{Error, Result};
pub use result::{AlignmentResult, EditOp, EditRun};
pub use scoring::{AlignConfig, AlignType, GapModel, ResultMode, ScoringScheme};
pub use seq::Sequence;
