//! Compatibility and deadlock analysis for pairs of communicating I/O-transition
//! systems, under rendezvous and FIFO-queued composition.

pub mod analysis;
pub mod audit;
pub mod cli;
pub mod compat;
pub mod compose;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod graph;
pub mod model;
pub mod pipeline;
pub mod verdict;

pub use error::{Error, ParseError, Result};
pub use model::{ActionKind, ActionName, ActionSet, Alphabet, Iots, RawIots, SharedProfile, StateId};
pub use verdict::{Citation, Status, Verdict, Witness};
