//! The phase-structured online algorithm for penalties that are free exactly
//! on multiples of k.
//!
//! Each phase drives every profile entry W_i to at least 1 while spending
//! O(alpha) itself, alpha^alpha = k. The recursive subroutine of the
//! construction is tail-call shaped, so it runs here as an iterative state
//! machine over program points; entry invariants are re-checked at runtime
//! on every (virtual) call.

use std::collections::BTreeMap;

use crate::engine::profile::WaitingProfile;
use crate::engine::{AlgorithmDiagnostics, MatchDirective, OnlineAlgorithm, PhaseStats};
use crate::error::{Error, Result};
use crate::numerics::alpha::{solve_alpha, AlphaParam, ALPHA_GRID_LOG2};
use crate::numerics::residue::{interval_contains_raw, interval_size_raw, wrap_add, wrap_sub};
use crate::numerics::scalar::Scalar;
use crate::penalty::{CaseVariant, PenaltyFunction};

/// Current virtual call: the active cyclic interval and refinement level.
#[derive(Debug, Clone, Copy)]
struct Frame {
    lo: u64,
    hi: u64,
    level: u64,
}

/// Program points between waits. `cut_lo`/`cut_hi` delimit the deficient
/// span found after the seed wait; anchors freeze the watched profile entry
/// at the start of the corresponding wait.
#[derive(Debug, Clone)]
enum State<S> {
    /// Wait until W at the matched-offset gains 2.
    SeedWait { anchor: S },
    /// Wait until the seen-offset enters ⟦cut_lo, lo-1⟧, or W_lo gains 1.
    AlignWait { cut_lo: u64, cut_hi: u64, lo_anchor: S },
    /// After re-aligning: wait until W at cut_lo gains 2.
    ConfirmWait { cut_lo: u64, cut_hi: u64, anchor: S },
    /// Wait until the seen-offset enters ⟦lo, cut_lo-1⟧, or W_cut_lo gains 1.
    ReturnWait { cut_lo: u64, cut_anchor: S },
    /// Phase wrap-up: wait for W at the matched-offset to reach 1 with a
    /// request outstanding, then match one; flush when the whole profile is
    /// at least 1.
    FinishSingle,
}

pub struct Recurring<S: Scalar> {
    k: u64,
    alpha: S,
    alpha_param: AlphaParam,
    penalty: PenaltyFunction<S>,
    profile: WaitingProfile<S>,
    /// Requests matched this phase.
    matched: u64,
    frame: Frame,
    state: State<S>,
    phase: u64,
    calls_this_phase: u64,
    total_calls: u64,
    exit_stats: Option<(u64, u64)>,
    phase_size_cost: S,
    phase_waiting: S,
    stats: Vec<PhaseStats<S>>,
    violations: Vec<String>,
}

impl<S: Scalar> Recurring<S> {
    pub fn new(penalty: PenaltyFunction<S>, alpha_override: Option<AlphaParam>) -> Result<Self> {
        let class = penalty.classification()?;
        let k = match class.variant {
            CaseVariant::II { k } => k,
            other => {
                return Err(Error::WrongPenaltyClass {
                    expected: "case (ii)".into(),
                    actual: format!("{other:?}"),
                })
            }
        };
        if k < 2 {
            return Err(Error::DegenerateParameters(
                "k >= 2 required; use the immediate rule for k = 1".into(),
            ));
        }
        let alpha_param = match alpha_override {
            Some(a) => a,
            None => solve_alpha(k)?,
        };
        let used = alpha_param.used_f64();
        if used < 4.0 - 1e-12 || used.powf(used) < k as f64 - 1e-9 {
            return Err(Error::DegenerateParameters(format!(
                "alpha = {used} violates alpha >= 4 or alpha^alpha >= k"
            )));
        }
        let mut alg = Recurring {
            k,
            alpha: alpha_param.used::<S>(),
            alpha_param,
            penalty,
            profile: WaitingProfile::new(k, S::zero()),
            matched: 0,
            frame: Frame {
                lo: 0,
                hi: k - 1,
                level: 0,
            },
            state: State::FinishSingle,
            phase: 0,
            calls_this_phase: 0,
            total_calls: 0,
            exit_stats: None,
            phase_size_cost: S::zero(),
            phase_waiting: S::zero(),
            stats: Vec::new(),
            violations: Vec::new(),
        };
        alg.enter_call(0, k - 1, 0);
        Ok(alg)
    }

    pub fn alpha_param(&self) -> AlphaParam {
        self.alpha_param
    }

    fn matched_offset(&self) -> u64 {
        self.matched % self.k
    }

    fn seen_offset(&self) -> u64 {
        self.profile.seen() % self.k
    }

    fn unmatched(&self) -> u64 {
        self.profile.seen() - self.matched
    }

    fn level_threshold(&self, level: u64) -> S {
        S::from_u64(level) / self.alpha.clone()
    }

    /// Advance the profile and the phase waiting mirror to `now`.
    fn sync(&mut self, now: &S) -> Result<()> {
        if now.cmp2(self.profile.last_update()) == std::cmp::Ordering::Greater {
            let dt = now.clone() - self.profile.last_update().clone();
            if self.unmatched() > 0 {
                self.phase_waiting = self.phase_waiting.clone() + dt.mul_u64(self.unmatched());
            }
        }
        self.profile.advance(now)
    }

    fn emit(&mut self, out: &mut Vec<MatchDirective>, count: u64, tag: &'static str) {
        debug_assert!(count > 0);
        out.push(MatchDirective::new(count, tag));
        self.matched += count;
        self.phase_size_cost = self.phase_size_cost.clone() + self.penalty.raw_cost(count);
    }

    /// Entry point of the virtual recursion: record the frame, assert the
    /// entry invariants, and either proceed to the seed wait or exit to the
    /// phase wrap-up.
    fn enter_call(&mut self, lo: u64, hi: u64, level: u64) {
        self.total_calls += 1;
        self.calls_this_phase += 1;
        self.check_entry(lo, hi, level);
        self.frame = Frame { lo, hi, level };
        let size = interval_size_raw(lo, hi, self.k);
        let small = self.alpha.reaches(&S::from_u64(size));
        let deep = S::from_u64(level).reaches(&self.alpha);
        if small || deep {
            if self.exit_stats.is_none() {
                self.exit_stats = Some((size, level));
            }
            self.state = State::FinishSingle;
        } else {
            self.state = State::SeedWait {
                anchor: self.profile.value(self.matched_offset()).clone(),
            };
        }
    }

    fn check_entry(&mut self, lo: u64, hi: u64, level: u64) {
        if self.matched_offset() != lo {
            self.violations.push(format!(
                "phase {}: call on ⟦{lo},{hi}⟧ level {level} with matched offset {}",
                self.phase,
                self.matched_offset()
            ));
        }
        let one = S::one();
        let need = self.level_threshold(level);
        for i in 0..self.k {
            let w = self.profile.value(i);
            if interval_contains_raw(lo, hi, i, self.k) {
                if !w.reaches(&need) {
                    self.violations.push(format!(
                        "phase {}: W_{i} = {w} below level {level} threshold {need} inside ⟦{lo},{hi}⟧",
                        self.phase
                    ));
                }
            } else if !w.reaches(&one) {
                self.violations.push(format!(
                    "phase {}: W_{i} = {w} below 1 outside ⟦{lo},{hi}⟧",
                    self.phase
                ));
            }
        }
    }

    fn all_reach(&self, lo: u64, hi: u64, need: &S) -> bool {
        let span = interval_size_raw(lo, hi, self.k);
        (0..span).all(|off| {
            self.profile
                .value(wrap_add(lo, off, self.k))
                .reaches(need)
        })
    }

    /// First and last deficient offsets (relative to the frame start) among
    /// ⟦lo,hi⟧; the deficient set is nonempty when this is called.
    fn deficient_span(&self, need: &S) -> (u64, u64) {
        let span = interval_size_raw(self.frame.lo, self.frame.hi, self.k);
        let mut first = None;
        let mut last = None;
        for off in 0..span {
            let i = wrap_add(self.frame.lo, off, self.k);
            if !self.profile.value(i).reaches(need) {
                if first.is_none() {
                    first = Some(i);
                }
                last = Some(i);
            }
        }
        (
            first.expect("deficient span must be nonempty"),
            last.expect("deficient span must be nonempty"),
        )
    }

    fn finish_phase(&mut self, now: &S) {
        let (exit_size, exit_level) = self.exit_stats.take().unwrap_or((0, 0));
        self.stats.push(PhaseStats {
            phase: self.phase,
            recursion_calls: self.calls_this_phase,
            exit_interval_size: exit_size,
            exit_level,
            cost: self.phase_waiting.clone() + self.phase_size_cost.clone(),
            min_profile_at_end: self.profile.min_value().clone(),
        });
        self.phase += 1;
        self.calls_this_phase = 0;
        self.phase_size_cost = S::zero();
        self.phase_waiting = S::zero();
        self.matched = 0;
        self.profile.reset(now.clone());
        self.enter_call(0, self.k - 1, 0);
    }

    /// Run the state machine until it blocks on an unmet wait.
    fn poll(&mut self, now: &S, out: &mut Vec<MatchDirective>) -> Result<()> {
        loop {
            while self.profile.seen() - self.matched >= self.k {
                let k = self.k;
                self.emit(out, k, "overflow");
            }

            match self.state.clone() {
                State::SeedWait { anchor } => {
                    let target = anchor + S::from_u64(2);
                    if !self.profile.value(self.matched_offset()).reaches(&target) {
                        return Ok(());
                    }
                    let need = self.level_threshold(self.frame.level + 1);
                    if self.all_reach(self.frame.lo, self.frame.hi, &need) {
                        let Frame { lo, hi, level } = self.frame;
                        self.enter_call(lo, hi, level + 1);
                        continue;
                    }
                    let (cut_lo, cut_hi) = self.deficient_span(&need);
                    if cut_lo == self.frame.lo {
                        return Err(Error::Protocol(format!(
                            "deficient span starts at the frame base {} (phase {})",
                            cut_lo, self.phase
                        )));
                    }
                    self.state = State::AlignWait {
                        cut_lo,
                        cut_hi,
                        lo_anchor: self.profile.value(self.frame.lo).clone(),
                    };
                }
                State::AlignWait {
                    cut_lo,
                    cut_hi,
                    lo_anchor,
                } => {
                    let target = lo_anchor.clone() + S::one();
                    if self.profile.value(self.frame.lo).reaches(&target) {
                        let Frame { lo, hi, level } = self.frame;
                        self.enter_call(lo, hi, level + 1);
                        continue;
                    }
                    let lo_minus_1 = wrap_sub(self.frame.lo, 1 % self.k, self.k);
                    if interval_contains_raw(cut_lo, lo_minus_1, self.seen_offset(), self.k) {
                        let count = wrap_sub(cut_lo, self.matched_offset(), self.k);
                        self.emit(out, count, "align_match");
                        self.state = State::ConfirmWait {
                            cut_lo,
                            cut_hi,
                            anchor: self.profile.value(cut_lo).clone(),
                        };
                        continue;
                    }
                    return Ok(());
                }
                State::ConfirmWait {
                    cut_lo,
                    cut_hi,
                    anchor,
                } => {
                    let target = anchor + S::from_u64(2);
                    if !self.profile.value(cut_lo).reaches(&target) {
                        return Ok(());
                    }
                    let need = self.level_threshold(self.frame.level + 1);
                    if self.all_reach(cut_lo, cut_hi, &need) {
                        self.state = State::ReturnWait {
                            cut_lo,
                            cut_anchor: self.profile.value(cut_lo).clone(),
                        };
                        continue;
                    }
                    // Shrink: keep the deficient start, cap the span at
                    // floor(2L/alpha) past it (or the old end if closer).
                    let span = interval_size_raw(self.frame.lo, self.frame.hi, self.k);
                    let step = 2 * span * (1u64 << ALPHA_GRID_LOG2) / self.alpha_param.used_num;
                    let cand = wrap_add(cut_lo, step, self.k);
                    let right = if wrap_sub(cand, cut_lo, self.k)
                        <= wrap_sub(self.frame.hi, cut_lo, self.k)
                    {
                        cand
                    } else {
                        self.frame.hi
                    };
                    let level = self.frame.level;
                    self.enter_call(cut_lo, right, level);
                }
                State::ReturnWait { cut_lo, cut_anchor } => {
                    let target = cut_anchor.clone() + S::one();
                    if self.profile.value(cut_lo).reaches(&target) {
                        let Frame { hi, level, .. } = self.frame;
                        self.enter_call(cut_lo, hi, level + 1);
                        continue;
                    }
                    let cut_minus_1 = wrap_sub(cut_lo, 1 % self.k, self.k);
                    if interval_contains_raw(self.frame.lo, cut_minus_1, self.seen_offset(), self.k)
                    {
                        let count = wrap_sub(self.frame.lo, self.matched_offset(), self.k);
                        self.emit(out, count, "return_match");
                        let Frame { lo, hi, level } = self.frame;
                        self.enter_call(lo, hi, level + 1);
                        continue;
                    }
                    return Ok(());
                }
                State::FinishSingle => {
                    let one = S::one();
                    if self.profile.seen() > self.matched
                        && self.profile.value(self.matched_offset()).reaches(&one)
                    {
                        self.emit(out, 1, "finish_single");
                        if self.profile.min_value().reaches(&one) {
                            let remaining = self.profile.seen() - self.matched;
                            if remaining > 0 {
                                self.emit(out, remaining, "finish_flush");
                            }
                            self.finish_phase(now);
                        }
                        continue;
                    }
                    return Ok(());
                }
            }
        }
    }
}

impl<S: Scalar> OnlineAlgorithm<S> for Recurring<S> {
    fn name(&self) -> String {
        format!("recurring:{}", self.k)
    }

    fn on_arrival(&mut self, now: &S, count: u64) -> Result<Vec<MatchDirective>> {
        self.sync(now)?;
        self.profile.on_requests(count);
        let mut out = Vec::new();
        self.poll(now, &mut out)?;
        Ok(out)
    }

    fn next_wakeup(&mut self, now: &S) -> Result<Option<S>> {
        self.sync(now)?;
        let wait = match &self.state {
            State::SeedWait { anchor } => {
                let target = anchor.clone() + S::from_u64(2);
                self.profile
                    .time_to_threshold(self.matched_offset(), &target)
            }
            State::AlignWait { lo_anchor, .. } => {
                let target = lo_anchor.clone() + S::one();
                self.profile.time_to_threshold(self.frame.lo, &target)
            }
            State::ConfirmWait { cut_lo, anchor, .. } => {
                let target = anchor.clone() + S::from_u64(2);
                self.profile.time_to_threshold(*cut_lo, &target)
            }
            State::ReturnWait { cut_lo, cut_anchor } => {
                let target = cut_anchor.clone() + S::one();
                self.profile.time_to_threshold(*cut_lo, &target)
            }
            State::FinishSingle => {
                if self.profile.seen() > self.matched {
                    self.profile
                        .time_to_threshold(self.matched_offset(), &S::one())
                } else {
                    None
                }
            }
        };
        // With requests outstanding the watched entry always grows.
        debug_assert!(self.unmatched() == 0 || wait.is_some());
        Ok(wait.map(|d| now.clone() + d))
    }

    fn on_wakeup(&mut self, now: &S) -> Result<Vec<MatchDirective>> {
        self.sync(now)?;
        let mut out = Vec::new();
        self.poll(now, &mut out)?;
        Ok(out)
    }

    fn diagnostics(&self) -> AlgorithmDiagnostics<S> {
        let mut counters = BTreeMap::new();
        counters.insert("recursion_calls".into(), self.total_calls);
        counters.insert("phases_completed".into(), self.phase);
        AlgorithmDiagnostics {
            violations: self.violations.clone(),
            phases: self.stats.clone(),
            counters,
        }
    }
}
