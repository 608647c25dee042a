//! The classic rent-or-buy rule: match everything outstanding whenever the
//! waiting cost since the last match reaches 1.

use crate::engine::{MatchDirective, OnlineAlgorithm};
use crate::error::Result;
use crate::numerics::scalar::Scalar;

/// 2-competitive for the constant penalty (case (i)); also the canonical
/// match-all-remaining subject for the separation experiments.
#[derive(Debug)]
pub struct TcpAck<S: Scalar> {
    unmatched: u64,
    /// Waiting accrued since the last match.
    since_match: S,
    last_sync: S,
}

impl<S: Scalar> TcpAck<S> {
    pub fn new() -> Self {
        TcpAck {
            unmatched: 0,
            since_match: S::zero(),
            last_sync: S::zero(),
        }
    }

    fn sync(&mut self, now: &S) {
        if *now != self.last_sync && self.unmatched > 0 {
            let dt = now.clone() - self.last_sync.clone();
            self.since_match = self.since_match.clone() + dt.mul_u64(self.unmatched);
        }
        self.last_sync = now.clone();
    }

    fn poll(&mut self) -> Vec<MatchDirective> {
        if self.unmatched > 0 && self.since_match.reaches(&S::one()) {
            let count = self.unmatched;
            self.unmatched = 0;
            self.since_match = S::zero();
            vec![MatchDirective::new(count, "ack_all")]
        } else {
            Vec::new()
        }
    }
}

impl<S: Scalar> Default for TcpAck<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> OnlineAlgorithm<S> for TcpAck<S> {
    fn name(&self) -> String {
        "tcp_ack".into()
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
