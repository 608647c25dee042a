//! The waiting profile: hypothetical accumulated waiting costs, one per
//! offset in Z_k, advanced lazily between events by closed-form rates.

use crate::error::{Error, Result};
use crate::numerics::residue::wrap_sub;
use crate::numerics::scalar::Scalar;

/// Vector (W_0, ..., W_{k-1}) driven by a request counter: between events,
/// entry i grows linearly at integer rate (seen - i) mod k, the unmatched
/// count of a greedy zero-size-cost player offset by i.
#[derive(Debug, Clone)]
pub struct WaitingProfile<S: Scalar> {
    k: u64,
    accrued: Vec<S>,
    /// Requests seen so far in the owning context (phase or whole run).
    seen: u64,
    last_update: S,
}

impl<S: Scalar> WaitingProfile<S> {
    pub fn new(k: u64, start: S) -> Self {
        assert!(k >= 1);
        WaitingProfile {
            k,
            accrued: vec![S::zero(); k as usize],
            seen: 0,
            last_update: start,
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn last_update(&self) -> &S {
        &self.last_update
    }

    pub fn value(&self, i: u64) -> &S {
        &self.accrued[(i % self.k) as usize]
    }

    pub fn values(&self) -> &[S] {
        &self.accrued
    }

    /// Growth rate of entry i under the current counter.
    pub fn rate(&self, i: u64) -> u64 {
        wrap_sub(self.seen % self.k, i % self.k, self.k)
    }

    /// Advance all entries to time `to`; the counter must have been constant
    /// since the last update.
    pub fn advance(&mut self, to: &S) -> Result<()> {
        if to < &self.last_update {
            return Err(Error::TimeRegression {
                from: self.last_update.render(),
                to: to.render(),
            });
        }
        if *to == self.last_update {
            return Ok(());
        }
        let dt = to.clone() - self.last_update.clone();
        let s_bar = self.seen % self.k;
        for i in 0..self.k {
            let rate = wrap_sub(s_bar, i, self.k);
            if rate > 0 {
                let inc = dt.mul_u64(rate);
                self.accrued[i as usize] = self.accrued[i as usize].clone() + inc;
            }
        }
        self.last_update = to.clone();
        Ok(())
    }

    /// Record `count` newly seen requests (call after advancing to now).
    pub fn on_requests(&mut self, count: u64) {
        self.seen += count;
    }

    /// Closed-form wake-up: how long until entry i reaches `target`.
    /// `Some(0)` if already met, `None` if the rate is zero and it never will.
    pub fn time_to_threshold(&self, i: u64, target: &S) -> Option<S> {
        let current = self.value(i);
        if current.reaches(target) {
            return Some(S::zero());
        }
        let rate = self.rate(i);
        if rate == 0 {
            return None;
        }
        let gap = target.clone() - current.clone();
        Some(gap / S::from_u64(rate))
    }

    pub fn min_value(&self) -> &S {
        let mut best = &self.accrued[0];
        for v in &self.accrued[1..] {
            if v < best {
                best = v;
            }
        }
        best
    }

    /// Reset for a new phase: all entries and the counter back to zero,
    /// clock anchored at `now`.
    pub fn reset(&mut self, now: S) {
        for v in &mut self.accrued {
            *v = S::zero();
        }
        self.seen = 0;
        self.last_update = now;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::Exact;

    #[test]
    fn advance_rates() {
        // k=3, seen=4: s mod k = 1, so rates for i=0,1,2 are (1,0,2).
        let mut p = WaitingProfile::<Exact>::new(3, Exact::zero());
        p.on_requests(4);
        p.advance(&Exact::from_u64(2)).unwrap();
        assert_eq!(*p.value(0), Exact::from_u64(2));
        assert_eq!(*p.value(1), Exact::zero());
        assert_eq!(*p.value(2), Exact::from_u64(4));

        // Zero-length advance changes nothing.
        let before = p.values().to_vec();
        p.advance(&Exact::from_u64(2)).unwrap();
        assert_eq!(p.values(), &before[..]);

        // One more arrival: rates become (2,1,0).
        p.on_requests(1);
        assert_eq!(p.rate(0), 2);
        assert_eq!(p.rate(1), 1);
        assert_eq!(p.rate(2), 0);

        assert!(p.advance(&Exact::one()).is_err());
    }

    #[test]
    fn threshold_examples() {
        let mut p = WaitingProfile::<Exact>::new(5, Exact::zero());
        p.on_requests(3); // rate of W_0 is 3
        assert_eq!(
            p.time_to_threshold(0, &Exact::from_u64(2)),
            Some(Exact::ratio(2, 3))
        );
        // Already met.
        p.advance(&Exact::one()).unwrap(); // W_0 = 3
        assert_eq!(p.time_to_threshold(0, &Exact::from_u64(2)), Some(Exact::zero()));
        // Rate 0, below target: never.
        assert_eq!(p.rate(3), 0);
        assert_eq!(p.time_to_threshold(3, &Exact::from_u64(2)), None);
    }

    #[test]
    fn split_advance_equals_single_advance() {
        let mut a = WaitingProfile::<Exact>::new(7, Exact::zero());
        let mut b = a.clone();
        a.on_requests(5);
        b.on_requests(5);
        a.advance(&Exact::ratio(1, 3)).unwrap();
        a.advance(&Exact::ratio(5, 3)).unwrap();
        b.advance(&Exact::ratio(5, 3)).unwrap();
        assert_eq!(a.values(), b.values());
    }
}
