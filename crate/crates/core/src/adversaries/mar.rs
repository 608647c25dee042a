//! Adversary against match-all-remaining algorithms: k-1 requests up front,
//! another k-1 injected right after every match before time 1.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::engine::RequestSource;
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;

pub struct MarAdversary<S: Scalar> {
    k: u64,
    pending: VecDeque<(S, u64)>,
    done: bool,
    matches_before_deadline: u64,
}

impl<S: Scalar> MarAdversary<S> {
    pub fn new(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::DegenerateParameters("k >= 2 required".into()));
        }
        let mut pending = VecDeque::new();
        pending.push_back((S::zero(), k - 1));
        Ok(MarAdversary {
            k,
            pending,
            done: false,
            matches_before_deadline: 0,
        })
    }

    pub fn matches_before_deadline(&self) -> u64 {
        self.matches_before_deadline
    }
}

impl<S: Scalar> RequestSource<S> for MarAdversary<S> {
    fn name(&self) -> String {
        format!("mar:{}", self.k)
    }

    fn next_arrival(&self) -> Option<S> {
        self.pending.front().map(|(t, _)| t.clone())
    }

    fn pop_due_arrival(&mut self, now: &S) -> Option<u64> {
        if let Some((t, _)) = self.pending.front() {
            if t == now {
                return self.pending.pop_front().map(|(_, c)| c);
            }
        }
        None
    }

    fn next_wakeup(&mut self, _now: &S) -> Result<Option<S>> {
        if self.done {
            Ok(None)
        } else {
            Ok(Some(S::one()))
        }
    }

    fn on_wakeup(&mut self, now: &S) -> Result<Vec<u64>> {
        if now.cmp2(&S::one()) != Ordering::Less {
            self.done = true;
        }
        Ok(Vec::new())
    }

    fn on_match(&mut self, now: &S, _size: u64) -> Result<Vec<u64>> {
        if !self.done && now.cmp2(&S::one()) == Ordering::Less {
            self.matches_before_deadline += 1;
            Ok(vec![self.k - 1])
        } else {
            Ok(Vec::new())
        }
    }

    fn finalized(&self) -> bool {
        self.done && self.pending.is_empty()
    }
}
