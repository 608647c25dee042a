//! Replay of a fixed arrival schedule.

use std::collections::VecDeque;

use crate::engine::instance::Instance;
use crate::engine::RequestSource;
use crate::error::Result;
use crate::numerics::scalar::Scalar;

pub struct FixedSource<S: Scalar> {
    pending: VecDeque<(S, u64)>,
    label: String,
}

impl<S: Scalar> FixedSource<S> {
    pub fn new(instance: &Instance<S>) -> Self {
        FixedSource {
            pending: instance
                .arrivals()
                .iter()
                .map(|a| (a.time.clone(), a.count))
                .collect(),
            label: "fixed".into(),
        }
    }

    pub fn with_label(instance: &Instance<S>, label: impl Into<String>) -> Self {
        let mut s = Self::new(instance);
        s.label = label.into();
        s
    }
}

impl<S: Scalar> RequestSource<S> for FixedSource<S> {
    fn name(&self) -> String {
        self.label.clone()
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
        Ok(None)
    }

    fn on_wakeup(&mut self, _now: &S) -> Result<Vec<u64>> {
        Ok(Vec::new())
    }

    fn on_match(&mut self, _now: &S, _size: u64) -> Result<Vec<u64>> {
        Ok(Vec::new())
    }

    fn finalized(&self) -> bool {
        self.pending.is_empty()
    }
}
