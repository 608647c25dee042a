//! The event loop: advances a single clock through arrivals, algorithm
//! wake-ups and source wake-ups, accruing waiting cost continuously and
//! executing match directives FIFO-oldest.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::engine::instance::{ArrivalEvent, Instance, InstanceBuilder};
use crate::engine::{
    AlgorithmDiagnostics, MatchDirective, OnlineAlgorithm, RequestSource, SourceDiagnostics,
};
use crate::error::{Error, Result};
use crate::numerics::scalar::{Backend, Scalar};
use crate::penalty::PenaltyFunction;

#[derive(Debug, Clone)]
pub struct EngineConfig<S: Scalar> {
    /// Stop at this time, force-matching whatever is left.
    pub horizon_time: Option<S>,
    /// Hard bound on delivered events (arrivals, matches, wake-ups).
    pub max_events: u64,
}

impl<S: Scalar> Default for EngineConfig<S> {
    fn default() -> Self {
        EngineConfig {
            horizon_time: None,
            max_events: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct MatchRecord<S: Scalar> {
    #[serde(rename = "t")]
    pub time: S,
    pub size: u64,
    pub size_cost: S,
    /// Arrival index of the oldest request in the match; the members are
    /// exactly first_member..first_member+size in arrival order.
    pub first_member: u64,
    pub tag: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct CostLedger<S: Scalar> {
    pub size_cost_total: S,
    pub waiting_cost_total: S,
    /// Size cost per directive tag.
    pub per_line: BTreeMap<String, S>,
}

impl<S: Scalar> CostLedger<S> {
    pub fn total(&self) -> S {
        self.size_cost_total.clone() + self.waiting_cost_total.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Normal,
    HorizonFlush,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct RunDiagnostics<S: Scalar> {
    pub events: u64,
    /// Waiting cost recomputed per match as sum of (match time - arrival);
    /// equals the ledger integral on normal termination.
    pub match_waiting_total: S,
    pub algorithm: AlgorithmDiagnostics<S>,
    pub source: SourceDiagnostics<S>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct Transcript<S: Scalar> {
    pub backend: Backend,
    pub algorithm: String,
    pub source: String,
    pub instance: Instance<S>,
    pub matches: Vec<MatchRecord<S>>,
    pub ledger: CostLedger<S>,
    pub termination: Termination,
    pub diagnostics: RunDiagnostics<S>,
}

impl<S: Scalar> Transcript<S> {
    pub fn total_cost(&self) -> S {
        self.ledger.total()
    }

    pub fn matched_requests(&self) -> u64 {
        self.matches.iter().map(|m| m.size).sum()
    }

    /// Matches strictly before the given time (e.g. the adversary horizon).
    pub fn matches_before(&self, t: &S) -> u64 {
        self.matches
            .iter()
            .filter(|m| m.time.cmp2(t) == Ordering::Less)
            .count() as u64
    }
}

struct PendingBatch<S> {
    time: S,
    count: u64,
    first_index: u64,
}

struct Engine<'a, S: Scalar> {
    algorithm: &'a mut dyn OnlineAlgorithm<S>,
    source: &'a mut dyn RequestSource<S>,
    penalty: &'a PenaltyFunction<S>,
    max_events: u64,
    clock: S,
    queue: VecDeque<PendingBatch<S>>,
    unmatched: u64,
    arrived: u64,
    directives: VecDeque<MatchDirective>,
    arrivals_log: Vec<ArrivalEvent<S>>,
    matches: Vec<MatchRecord<S>>,
    size_cost_total: S,
    waiting_cost_total: S,
    per_line: BTreeMap<String, S>,
    match_waiting_total: S,
    events: u64,
    budget_exhausted: bool,
    notes: Vec<String>,
}

/// Couple `algorithm` with `source` and simulate to completion.
pub fn run<S: Scalar>(
    algorithm: &mut dyn OnlineAlgorithm<S>,
    source: &mut dyn RequestSource<S>,
    penalty: &PenaltyFunction<S>,
    config: &EngineConfig<S>,
) -> Result<Transcript<S>> {
    let alg_name = algorithm.name();
    let source_name = source.name();
    let mut engine = Engine {
        algorithm,
        source,
        penalty,
        max_events: config.max_events,
        clock: S::zero(),
        queue: VecDeque::new(),
        unmatched: 0,
        arrived: 0,
        directives: VecDeque::new(),
        arrivals_log: Vec::new(),
        matches: Vec::new(),
        size_cost_total: S::zero(),
        waiting_cost_total: S::zero(),
        per_line: BTreeMap::new(),
        match_waiting_total: S::zero(),
        events: 0,
        budget_exhausted: false,
        notes: Vec::new(),
    };

    let termination = engine.drive(config.horizon_time.as_ref())?;

    let mut builder = InstanceBuilder::new(penalty.clone());
    for a in &engine.arrivals_log {
        builder.push(a.time.clone(), a.count)?;
    }
    let instance = builder.finalize();

    Ok(Transcript {
        backend: S::BACKEND,
        algorithm: alg_name,
        source: source_name,
        instance,
        matches: engine.matches,
        ledger: CostLedger {
            size_cost_total: engine.size_cost_total,
            waiting_cost_total: engine.waiting_cost_total,
            per_line: engine.per_line,
        },
        termination,
        diagnostics: RunDiagnostics {
            events: engine.events,
            match_waiting_total: engine.match_waiting_total,
            algorithm: engine.algorithm.diagnostics(),
            source: engine.source.diagnostics(),
            notes: engine.notes,
        },
    })
}

impl<'a, S: Scalar> Engine<'a, S> {
    fn drive(&mut self, horizon: Option<&S>) -> Result<Termination> {
        self.settle()?;
        loop {
            if self.budget_exhausted {
                self.notes
                    .push(format!("event budget {} exhausted", self.max_events));
                self.flush_remaining();
                return Ok(Termination::HorizonFlush);
            }

            let mut next: Option<S> = None;
            let mut consider = |t: Option<S>| {
                if let Some(t) = t {
                    next = Some(match next.take() {
                        None => t,
                        Some(cur) => cur.min2(t),
                    });
                }
            };
            consider(self.source.next_arrival());
            consider(self.algorithm.next_wakeup(&self.clock)?);
            consider(self.source.next_wakeup(&self.clock)?);
            let next = next;

            if let Some(h) = horizon {
                let past_horizon = match &next {
                    None => self.unmatched > 0 || !self.source.finalized(),
                    Some(t) => t.cmp2(h) == Ordering::Greater,
                };
                if past_horizon {
                    self.advance_to(h.clone())?;
                    self.flush_remaining();
                    return Ok(Termination::HorizonFlush);
                }
            }

            match next {
                None => {
                    if self.unmatched == 0 && self.source.finalized() {
                        return Ok(Termination::Normal);
                    }
                    return Err(Error::Stalled {
                        unmatched: self.unmatched,
                    });
                }
                Some(t) => {
                    if t.cmp2(&self.clock) == Ordering::Less {
                        return Err(Error::Protocol(format!(
                            "wake-up at {t} is in the past (clock {})",
                            self.clock
                        )));
                    }
                    self.advance_to(t)?;
                    self.settle()?;
                }
            }
        }
    }

    fn advance_to(&mut self, t: S) -> Result<()> {
        if t.cmp2(&self.clock) == Ordering::Less {
            return Err(Error::TimeRegression {
                from: self.clock.render(),
                to: t.render(),
            });
        }
        if self.unmatched > 0 {
            let dt = t.clone() - self.clock.clone();
            self.waiting_cost_total =
                self.waiting_cost_total.clone() + dt.mul_u64(self.unmatched);
        }
        self.clock = t;
        Ok(())
    }

    /// Run out all same-timestamp activity: due arrivals, queued directives
    /// (with synchronous injections), then due wake-ups. Algorithm wake-ups
    /// run before source wake-ups so a match event and a source timer at the
    /// same instant resolve in favor of the match.
    fn settle(&mut self) -> Result<()> {
        loop {
            if self.budget_exhausted {
                return Ok(());
            }
            let mut progressed = false;

            while let Some(count) = self.source.pop_due_arrival(&self.clock) {
                self.deliver_arrival(count)?;
                progressed = true;
                if self.budget_exhausted {
                    return Ok(());
                }
            }

            while let Some(d) = self.directives.pop_front() {
                self.execute_directive(d)?;
                progressed = true;
                if self.budget_exhausted {
                    return Ok(());
                }
            }

            if let Some(t) = self.algorithm.next_wakeup(&self.clock)? {
                if self.due_now(&t)? {
                    let ds = self.algorithm.on_wakeup(&self.clock)?;
                    self.directives.extend(ds);
                    self.bump_event();
                    continue;
                }
            }

            if let Some(t) = self.source.next_wakeup(&self.clock)? {
                if self.due_now(&t)? {
                    let arrivals = self.source.on_wakeup(&self.clock)?;
                    self.bump_event();
                    for count in arrivals {
                        self.deliver_arrival(count)?;
                    }
                    continue;
                }
            }

            if !progressed {
                return Ok(());
            }
        }
    }

    fn due_now(&self, t: &S) -> Result<bool> {
        match t.cmp2(&self.clock) {
            Ordering::Equal => Ok(true),
            Ordering::Greater => Ok(false),
            Ordering::Less => {
                if S::BACKEND == Backend::Exact {
                    Err(Error::Protocol(format!(
                        "wake-up at {t} is in the past (clock {})",
                        self.clock
                    )))
                } else {
                    // Float rounding can land a hair early; treat as due.
                    Ok(true)
                }
            }
        }
    }

    fn bump_event(&mut self) {
        self.events += 1;
        if self.events >= self.max_events {
            self.budget_exhausted = true;
        }
    }

    fn deliver_arrival(&mut self, count: u64) -> Result<()> {
        if count == 0 {
            return Err(Error::Protocol("zero-count arrival".into()));
        }
        self.bump_event();
        let seq = self.arrivals_log.len() as u64;
        self.arrivals_log.push(ArrivalEvent {
            time: self.clock.clone(),
            count,
            seq,
        });
        self.queue.push_back(PendingBatch {
            time: self.clock.clone(),
            count,
            first_index: self.arrived,
        });
        self.arrived += count;
        self.unmatched += count;
        let ds = self.algorithm.on_arrival(&self.clock, count)?;
        self.directives.extend(ds);
        Ok(())
    }

    fn execute_directive(&mut self, d: MatchDirective) -> Result<()> {
        self.bump_event();
        if d.count == 0 {
            return Err(Error::Protocol(format!(
                "zero-size match directive (tag {})",
                d.tag
            )));
        }
        if d.count > self.unmatched {
            return Err(Error::Protocol(format!(
                "directive for {} requests but only {} unmatched (tag {})",
                d.count, self.unmatched, d.tag
            )));
        }
        self.apply_match(d.count, d.tag);
        let injections = self.source.on_match(&self.clock, d.count)?;
        for count in injections {
            self.deliver_arrival(count)?;
        }
        Ok(())
    }

    fn apply_match(&mut self, count: u64, tag: &str) {
        let first_member = self
            .queue
            .front()
            .map(|b| b.first_index)
            .expect("match with empty queue");
        let mut remaining = count;
        let mut waited = S::zero();
        while remaining > 0 {
            let front = self.queue.front_mut().expect("queue underflow");
            let take = remaining.min(front.count);
            let age = self.clock.clone() - front.time.clone();
            if !age.is_zero() {
                waited = waited + age.mul_u64(take);
            }
            front.count -= take;
            front.first_index += take;
            remaining -= take;
            if front.count == 0 {
                self.queue.pop_front();
            }
        }
        self.unmatched -= count;
        self.match_waiting_total = self.match_waiting_total.clone() + waited;
        let cost = self.penalty.raw_cost(count);
        self.size_cost_total = self.size_cost_total.clone() + cost.clone();
        let slot = self
            .per_line
            .entry(tag.to_string())
            .or_insert_with(S::zero);
        *slot = slot.clone() + cost.clone();
        self.matches.push(MatchRecord {
            time: self.clock.clone(),
            size: count,
            size_cost: cost,
            first_member,
            tag: tag.to_string(),
        });
    }

    fn flush_remaining(&mut self) {
        if self.unmatched > 0 {
            let count = self.unmatched;
            self.apply_match(count, "horizon_flush");
        }
    }
}
