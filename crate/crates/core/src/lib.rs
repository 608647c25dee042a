//! Simulation laboratory for online matching with delays and size-based
//! costs: requests arrive over continuous time, groups of any size may be
//! matched, and the cost of a match is a size-dependent penalty plus the
//! accumulated waiting of its members.
//!
//! The crate provides exact-rational and float numerics, penalty
//! classification, a deterministic event-driven engine, the online
//! algorithms and adaptive adversaries under study, an offline-optimal
//! solver, and the validation suite behind `omdsc validate`.

pub mod adversaries;
pub mod algorithms;
pub mod engine;
pub mod error;
pub mod numerics;
pub mod offline;
pub mod penalty;
pub mod validation;

pub use engine::{
    run, EngineConfig, Instance, InstanceBuilder, MatchDirective, OnlineAlgorithm, RequestSource,
    Transcript, WaitingProfile,
};
pub use error::{Error, Result};
pub use numerics::{competitive_ratio, solve_alpha, AlphaParam, Backend, Exact, Ratio, Scalar, F64};
pub use penalty::{CaseVariant, PenaltyClass, PenaltyFunction, RawPenaltyTable, TailRule};
