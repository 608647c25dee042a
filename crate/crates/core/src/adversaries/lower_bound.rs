//! The adaptive round-based adversary that forces cost Omega(alpha) on every
//! online algorithm while an offline player pays O(1).
//!
//! It tracks the same waiting profile as the algorithms (entry i is the
//! waiting cost of a greedy zero-size-cost player that matched i requests at
//! time 0) and keeps narrowing a cyclic interval of offsets whose profile
//! entries stay small. Rounds advance on two events: the algorithm matching
//! a group of size not a multiple of k, or the watched entry gaining 1 since
//! the previous event; the instance finalizes once the interval drops below
//! alpha^2 elements.

use std::collections::VecDeque;

use crate::engine::profile::WaitingProfile;
use crate::engine::{RequestSource, RoundStats, RoundTrigger, SourceDiagnostics};
use crate::error::{Error, Result};
use crate::numerics::alpha::{solve_alpha, AlphaParam, ALPHA_GRID_LOG2};
use crate::numerics::residue::{interval_contains_raw, interval_size_raw, wrap_add, wrap_sub};
use crate::numerics::scalar::Scalar;

pub struct LowerBoundAdversary<S: Scalar> {
    k: u64,
    alpha: S,
    alpha_param: AlphaParam,
    profile: WaitingProfile<S>,
    /// Requests matched by the algorithm so far.
    matched: u64,
    lo: u64,
    hi: u64,
    round: u64,
    n_star: Option<u64>,
    /// Watched profile value at the last event.
    anchor: S,
    pending: VecDeque<(S, u64)>,
    violations: Vec<String>,
    rounds: Vec<RoundStats<S>>,
}

impl<S: Scalar> LowerBoundAdversary<S> {
    pub fn new(k: u64, alpha_override: Option<AlphaParam>) -> Result<Self> {
        if k < 2 {
            return Err(Error::DegenerateParameters("k >= 2 required".into()));
        }
        let alpha_param = match alpha_override {
            Some(a) => a,
            None => solve_alpha(k)?,
        };
        let used = alpha_param.used_f64();
        if used * used > k as f64 {
            return Err(Error::DegenerateParameters(format!(
                "alpha^2 = {} exceeds k = {k}; the construction needs alpha^2 <= k",
                used * used
            )));
        }
        let mut pending = VecDeque::new();
        pending.push_back((S::zero(), k - 1));
        Ok(LowerBoundAdversary {
            k,
            alpha: alpha_param.used::<S>(),
            alpha_param,
            profile: WaitingProfile::new(k, S::zero()),
            matched: 0,
            lo: 0,
            hi: k - 1,
            round: 0,
            n_star: None,
            anchor: S::zero(),
            pending,
            violations: Vec::new(),
            rounds: Vec::new(),
        })
    }

    pub fn final_round(&self) -> Option<u64> {
        self.n_star
    }

    fn matched_offset(&self) -> u64 {
        self.matched % self.k
    }

    fn seen_offset(&self) -> u64 {
        self.profile.seen() % self.k
    }

    fn interval_size(&self) -> u64 {
        interval_size_raw(self.lo, self.hi, self.k)
    }

    fn active(&self) -> bool {
        self.n_star.is_none()
    }

    /// ceil(size / alpha^2) in integer arithmetic on the 2^-20 grid.
    fn shrink_step(&self, size: u64) -> u64 {
        let num = self.alpha_param.used_num as u128; // alpha * 2^20
        let denom = num * num; // alpha^2 * 2^40
        let scaled = (size as u128) << (2 * ALPHA_GRID_LOG2);
        scaled.div_ceil(denom) as u64
    }

    fn interval_exhausted(&self) -> bool {
        // |interval| < alpha^2, exactly: size * 2^40 < (alpha * 2^20)^2.
        let num = self.alpha_param.used_num as u128;
        ((self.interval_size() as u128) << (2 * ALPHA_GRID_LOG2)) < num * num
    }

    fn finalize_if_exhausted(&mut self) {
        if self.active() && self.interval_exhausted() {
            self.n_star = Some(self.round);
            self.rounds.push(RoundStats {
                round: self.round,
                interval_size: self.interval_size(),
                trigger: RoundTrigger::Exhausted,
                injected: 0,
                max_profile_in_interval: self.max_profile_in_interval(),
            });
        }
    }

    fn max_profile_in_interval(&self) -> S {
        let span = self.interval_size();
        let mut best = self.profile.value(self.lo).clone();
        for off in 1..span {
            let v = self.profile.value(wrap_add(self.lo, off, self.k));
            if *v > best {
                best = v.clone();
            }
        }
        best
    }

    /// Assert the three round-start conditions and log the round.
    fn open_round(&mut self, trigger: RoundTrigger, injected: u64) {
        let n = self.round;
        let size = self.interval_size();
        let k_s = S::from_u64(self.k);
        let size_s = S::from_u64(size);
        let lower = size_s.clone() * self.alpha.pow_u32(2 * n as u32);
        let upper = size_s * self.alpha.pow_u32(n as u32);
        if !lower.reaches(&k_s) {
            self.violations.push(format!(
                "round {n}: interval size {size} below k/alpha^(2n)"
            ));
        }
        if !k_s.reaches(&upper) {
            self.violations.push(format!(
                "round {n}: interval size {size} above k/alpha^n"
            ));
        }
        let bound = S::from_u64(2 * n) / self.alpha.clone();
        let max_w = self.max_profile_in_interval();
        if !bound.reaches(&max_w) {
            self.violations.push(format!(
                "round {n}: profile value {max_w} above 2n/alpha = {bound} inside interval"
            ));
        }
        let complement_lo = wrap_add(self.hi, 1, self.k);
        if !interval_contains_raw(complement_lo, self.lo, self.matched_offset(), self.k) {
            self.violations.push(format!(
                "round {n}: matched offset {} outside ⟦{complement_lo},{}⟧",
                self.matched_offset(),
                self.lo
            ));
        }
        if self.seen_offset() != self.hi {
            self.violations.push(format!(
                "round {n}: seen offset {} is not the interval end {}",
                self.seen_offset(),
                self.hi
            ));
        }
        self.rounds.push(RoundStats {
            round: n,
            interval_size: size,
            trigger,
            injected,
            max_profile_in_interval: max_w,
        });
    }
}

impl<S: Scalar> RequestSource<S> for LowerBoundAdversary<S> {
    fn name(&self) -> String {
        format!("lb:{}", self.k)
    }

    fn next_arrival(&self) -> Option<S> {
        self.pending.front().map(|(t, _)| t.clone())
    }

    fn pop_due_arrival(&mut self, now: &S) -> Option<u64> {
        let due = matches!(self.pending.front(), Some((t, _)) if t == now);
        if !due {
            return None;
        }
        let (_, count) = self.pending.pop_front().expect("checked nonempty");
        self.profile.advance(now).expect("engine clock is monotone");
        self.profile.on_requests(count);
        // Round 0 opens once the initial batch is on the board.
        self.open_round(RoundTrigger::Start, 0);
        self.finalize_if_exhausted();
        Some(count)
    }

    fn next_wakeup(&mut self, now: &S) -> Result<Option<S>> {
        if !self.active() || !self.pending.is_empty() {
            return Ok(None);
        }
        self.profile.advance(now)?;
        let target = self.anchor.clone() + S::one();
        Ok(self
            .profile
            .time_to_threshold(self.matched_offset(), &target)
            .map(|d| now.clone() + d))
    }

    fn on_wakeup(&mut self, now: &S) -> Result<Vec<u64>> {
        if !self.active() {
            return Ok(Vec::new());
        }
        self.profile.advance(now)?;
        let target = self.anchor.clone() + S::one();
        if !self.profile.value(self.matched_offset()).reaches(&target) {
            return Ok(Vec::new());
        }
        if self.interval_exhausted() {
            self.finalize_if_exhausted();
            return Ok(Vec::new());
        }
        // Waiting tick: shrink to the top h offsets of the interval.
        let h = self.shrink_step(self.interval_size());
        self.lo = wrap_sub(self.hi, h - 1, self.k);
        self.round += 1;
        self.anchor = self.profile.value(self.matched_offset()).clone();
        self.open_round(RoundTrigger::WaitingTick, 0);
        self.finalize_if_exhausted();
        Ok(Vec::new())
    }

    fn on_match(&mut self, now: &S, size: u64) -> Result<Vec<u64>> {
        self.profile.advance(now)?;
        self.matched += size;
        if !self.active() || size % self.k == 0 {
            return Ok(Vec::new());
        }
        if self.interval_exhausted() {
            self.finalize_if_exhausted();
            return Ok(Vec::new());
        }
        // Costly match: narrow to a band of h offsets avoiding the
        // algorithm's new matched offset, then top the seen counter up to
        // the new interval end.
        let old_hi = self.hi;
        let h = self.shrink_step(self.interval_size());
        let band_lo = wrap_sub(old_hi, h - 1, self.k);
        if !interval_contains_raw(band_lo, old_hi, self.matched_offset(), self.k) {
            self.lo = band_lo;
            self.hi = old_hi;
        } else {
            self.lo = wrap_sub(old_hi, 2 * h - 1, self.k);
            self.hi = wrap_sub(old_hi, h, self.k);
        }
        let injected = wrap_sub(self.hi, self.seen_offset(), self.k);
        if injected > 0 {
            self.profile.on_requests(injected);
        }
        self.round += 1;
        self.anchor = self.profile.value(self.matched_offset()).clone();
        self.open_round(RoundTrigger::CostlyMatch, injected);
        self.finalize_if_exhausted();
        if injected > 0 {
            Ok(vec![injected])
        } else {
            Ok(Vec::new())
        }
    }

    fn finalized(&self) -> bool {
        !self.active() && self.pending.is_empty()
    }

    fn diagnostics(&self) -> SourceDiagnostics<S> {
        SourceDiagnostics {
            violations: self.violations.clone(),
            rounds: self.rounds.clone(),
            final_round: self.n_star,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::Exact;

    #[test]
    fn first_shrink_step_at_k_256() {
        let adv = LowerBoundAdversary::<Exact>::new(256, None).unwrap();
        // alpha = 4: ceil(256 / 16) = 16.
        assert_eq!(adv.shrink_step(256), 16);
        assert_eq!(adv.shrink_step(16), 1);
    }

    #[test]
    fn degenerate_when_alpha_sq_exceeds_k() {
        // k = 8: alpha floors at 4, alpha^2 = 16 > 8.
        assert!(LowerBoundAdversary::<Exact>::new(8, None).is_err());
        assert!(LowerBoundAdversary::<Exact>::new(16, None).is_ok());
    }
}
