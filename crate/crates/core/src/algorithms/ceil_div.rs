//! 2-competitive rule for f(n) = ceil(n/k): flush everything when the
//! waiting cost since the last match reaches 1, and peel off groups of k
//! whenever at least k requests are outstanding.

use crate::engine::{MatchDirective, OnlineAlgorithm};
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;

/// The waiting counter resets on every match, including the size-k peels.
/// With k = 1 this degenerates to immediate matching.
#[derive(Debug)]
pub struct CeilDiv<S: Scalar> {
    k: u64,
    unmatched: u64,
    since_match: S,
    last_sync: S,
}

impl<S: Scalar> CeilDiv<S> {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidModulus);
        }
        Ok(CeilDiv {
            k,
            unmatched: 0,
            since_match: S::zero(),
            last_sync: S::zero(),
        })
    }

    fn sync(&mut self, now: &S) {
        if *now != self.last_sync && self.unmatched > 0 {
            let dt = now.clone() - self.last_sync.clone();
            self.since_match = self.since_match.clone() + dt.mul_u64(self.unmatched);
        }
        self.last_sync = now.clone();
    }

    fn poll(&mut self) -> Vec<MatchDirective> {
        let mut out = Vec::new();
        while self.unmatched >= self.k {
            out.push(MatchDirective::new(self.k, "group_of_k"));
            self.unmatched -= self.k;
            self.since_match = S::zero();
        }
        if self.unmatched > 0 && self.since_match.reaches(&S::one()) {
            out.push(MatchDirective::new(self.unmatched, "flush_all"));
            self.unmatched = 0;
            self.since_match = S::zero();
        }
        out
    }
}

impl<S: Scalar> OnlineAlgorithm<S> for CeilDiv<S> {
    fn name(&self) -> String {
        format!("ceil_div:{}", self.k)
    }

    fn on_arrival(&mut self, now: &S, count: u64) -> Result<Vec<MatchDirective>> {
        self.sync(now);
        self.unmatched += count;
        Ok(self.poll())
    }

    fn next_wakeup(&mut self, now: &S) -> Result<Option<S>> {
        self.sync(now);
        if self.unmatched == 0 {
            return Ok(None);
        }
        let gap = S::one() - self.since_match.clone();
        Ok(Some(now.clone() + gap / S::from_u64(self.unmatched)))
    }

    fn on_wakeup(&mut self, now: &S) -> Result<Vec<MatchDirective>> {
        self.sync(now);
        Ok(self.poll())
    }
}
