//! Matches every request individually the instant it arrives.

use crate::engine::{MatchDirective, OnlineAlgorithm};
use crate::error::Result;
use crate::numerics::scalar::Scalar;

/// Cost-free when f(1) = 0 (and 1-competitive for f(n) = n); usable as a
/// baseline subject against any penalty.
#[derive(Debug, Default)]
pub struct Immediate;

impl Immediate {
    pub fn new() -> Self {
        Immediate
    }
}

impl<S: Scalar> OnlineAlgorithm<S> for Immediate {
    fn name(&self) -> String {
        "immediate".into()
    }

    fn on_arrival(&mut self, _now: &S, count: u64) -> Result<Vec<MatchDirective>> {
        Ok((0..count)
            .map(|_| MatchDirective::new(1, "immediate"))
            .collect())
    }

    fn next_wakeup(&mut self, _now: &S) -> Result<Option<S>> {
        Ok(None)
    }

    fn on_wakeup(&mut self, _now: &S) -> Result<Vec<MatchDirective>> {
        Ok(Vec::new())
    }
}
