//! Deterministic continuous-time, event-driven simulation of one online
//! algorithm against one request source.

pub mod instance;
pub mod profile;
pub mod run;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::numerics::scalar::Scalar;

pub use instance::{ArrivalEvent, Instance, InstanceBuilder};
pub use profile::WaitingProfile;
pub use run::{run, CostLedger, EngineConfig, MatchRecord, Termination, Transcript};

/// A match order: the engine matches the `count` FIFO-oldest unmatched
/// requests and charges f(count). `tag` names the rule that produced the
/// directive for the per-line cost breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchDirective {
    pub count: u64,
    pub tag: &'static str,
}

impl MatchDirective {
    pub fn new(count: u64, tag: &'static str) -> Self {
        MatchDirective { count, tag }
    }
}

/// Pull-based online algorithm contract.
///
/// `next_wakeup` is only valid while no further arrivals intervene; the
/// engine re-queries it after every delivered event. Directives are executed
/// in emission order at the current instant and each may cause the source to
/// inject same-timestamp arrivals, which are delivered back to the algorithm
/// before anything later runs.
pub trait OnlineAlgorithm<S: Scalar> {
    fn name(&self) -> String;
    fn on_arrival(&mut self, now: &S, count: u64) -> Result<Vec<MatchDirective>>;
    fn next_wakeup(&mut self, now: &S) -> Result<Option<S>>;
    fn on_wakeup(&mut self, now: &S) -> Result<Vec<MatchDirective>>;
    fn diagnostics(&self) -> AlgorithmDiagnostics<S> {
        AlgorithmDiagnostics::default()
    }
}

/// A request source: fixed schedule or adaptive adversary.
///
/// Scheduled arrivals are exposed through `next_arrival`/`pop_due_arrival`;
/// adaptive behavior happens in `on_match` (synchronous injections at the
/// match timestamp) and `on_wakeup` (source-driven event times).
pub trait RequestSource<S: Scalar> {
    fn name(&self) -> String;
    /// Time of the earliest scheduled arrival not yet delivered.
    fn next_arrival(&self) -> Option<S>;
    /// Pop one scheduled arrival batch due exactly at `now`.
    fn pop_due_arrival(&mut self, now: &S) -> Option<u64>;
    fn next_wakeup(&mut self, now: &S) -> Result<Option<S>>;
    /// Returns arrival counts to deliver at the wake-up instant.
    fn on_wakeup(&mut self, now: &S) -> Result<Vec<u64>>;
    /// Notification of an executed match; returns same-timestamp injections.
    fn on_match(&mut self, now: &S, size: u64) -> Result<Vec<u64>>;
    fn finalized(&self) -> bool;
    fn diagnostics(&self) -> SourceDiagnostics<S> {
        SourceDiagnostics::default()
    }
}

/// Per-phase counters reported by the recurring algorithm.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct PhaseStats<S: Scalar> {
    pub phase: u64,
    pub recursion_calls: u64,
    pub exit_interval_size: u64,
    pub exit_level: u64,
    /// Algorithm-side cost mirror for the phase (waiting + size).
    pub cost: S,
    pub min_profile_at_end: S,
}

/// Per-round counters reported by the lower-bound adversary.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct RoundStats<S: Scalar> {
    pub round: u64,
    pub interval_size: u64,
    pub trigger: RoundTrigger,
    pub injected: u64,
    pub max_profile_in_interval: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundTrigger {
    Start,
    CostlyMatch,
    WaitingTick,
    Exhausted,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct AlgorithmDiagnostics<S: Scalar> {
    pub violations: Vec<String>,
    pub phases: Vec<PhaseStats<S>>,
    pub counters: BTreeMap<String, u64>,
}

impl<S: Scalar> Default for AlgorithmDiagnostics<S> {
    fn default() -> Self {
        AlgorithmDiagnostics {
            violations: Vec::new(),
            phases: Vec::new(),
            counters: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct SourceDiagnostics<S: Scalar> {
    pub violations: Vec<String>,
    pub rounds: Vec<RoundStats<S>>,
    /// Final round count n* for the lower-bound adversary.
    pub final_round: Option<u64>,
}

impl<S: Scalar> Default for SourceDiagnostics<S> {
    fn default() -> Self {
        SourceDiagnostics {
            violations: Vec::new(),
            rounds: Vec::new(),
            final_round: None,
        }
    }
}
