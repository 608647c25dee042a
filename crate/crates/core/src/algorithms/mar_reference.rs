//! The reference schedule used to upper-bound the optimum on instances
//! generated against match-all-remaining algorithms: peel groups of k, trim
//! a stock of k-1 down to floor(sqrt(k)), flush at time 1.

use std::cmp::Ordering;

use crate::engine::{MatchDirective, OnlineAlgorithm};
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    while x * x > n {
        x -= 1;
    }
    x
}

/// Three rules, checked in order at every event:
///   - at least k remaining: match k;
///   - exactly k-1 remaining: match k - 1 - floor(sqrt(k));
///   - at time 1: match all remaining (and keep flushing thereafter).
#[derive(Debug)]
pub struct MarReference<S: Scalar> {
    k: u64,
    sqrt_k: u64,
    unmatched: u64,
    flush_mode: bool,
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> MarReference<S> {
    pub fn new(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::DegenerateParameters(
                "reference schedule needs k >= 2".into(),
            ));
        }
        Ok(MarReference {
            k,
            sqrt_k: isqrt(k),
            unmatched: 0,
            flush_mode: false,
            _marker: std::marker::PhantomData,
        })
    }

    fn poll(&mut self) -> Vec<MatchDirective> {
        let mut out = Vec::new();
        loop {
            if self.unmatched >= self.k {
                out.push(MatchDirective::new(self.k, "group_of_k"));
                self.unmatched -= self.k;
            } else if self.unmatched == self.k - 1 {
                let trim = self.k - 1 - self.sqrt_k;
                if trim == 0 {
                    break;
                }
                out.push(MatchDirective::new(trim, "trim"));
                self.unmatched -= trim;
            } else if self.flush_mode && self.unmatched > 0 {
                out.push(MatchDirective::new(self.unmatched, "deadline_flush"));
                self.unmatched = 0;
            } else {
                break;
            }
        }
        out
    }
}

impl<S: Scalar> OnlineAlgorithm<S> for MarReference<S> {
    fn name(&self) -> String {
        format!("mar_ref:{}", self.k)
    }

    fn on_arrival(&mut self, now: &S, count: u64) -> Result<Vec<MatchDirective>> {
        if !self.flush_mode && now.cmp2(&S::one()) != Ordering::Less {
            self.flush_mode = true;
        }
        self.unmatched += count;
        Ok(self.poll())
    }

    fn next_wakeup(&mut self, _now: &S) -> Result<Option<S>> {
        if self.flush_mode {
            Ok(None)
        } else {
            Ok(Some(S::one()))
        }
    }

    fn on_wakeup(&mut self, now: &S) -> Result<Vec<MatchDirective>> {
        if now.cmp2(&S::one()) != Ordering::Less {
            self.flush_mode = true;
        }
        Ok(self.poll())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_values() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
        assert_eq!(isqrt(101), 10);
        assert_eq!(isqrt(400), 20);
    }
}
