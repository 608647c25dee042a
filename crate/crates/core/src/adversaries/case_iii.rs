//! Adaptive source showing that case-(iii) penalties admit no competitive
//! algorithm: a cheap batch up front, then a poison request at epsilon only
//! for players that committed early.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::engine::RequestSource;
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;
use crate::penalty::{zero_penalty_set, CaseVariant, PenaltyFunction};

pub struct CaseIiiAdversary<S: Scalar> {
    /// Smallest size matchable at zero cost.
    k_star: u64,
    /// Smallest zero-cost size that is not a multiple of k_star.
    ell: u64,
    eps: S,
    pending: VecDeque<(S, u64)>,
    matched_total: u64,
    all_matched_early: bool,
    done: bool,
}

impl<S: Scalar> CaseIiiAdversary<S> {
    pub fn new(penalty: &PenaltyFunction<S>, eps: S) -> Result<Self> {
        let class = penalty.classification()?;
        if class.variant != CaseVariant::III {
            return Err(Error::WrongPenaltyClass {
                expected: "case (iii)".into(),
                actual: class.describe(),
            });
        }
        if eps.cmp2(&S::zero()) != Ordering::Greater {
            return Err(Error::DegenerateParameters("eps must be positive".into()));
        }
        let max_zero = *class.zeros.iter().max().expect("case (iii) has zeros");
        // ell <= max zero, so this search limit always suffices.
        let limit = 4 * max_zero * max_zero;
        let reach = zero_penalty_set(penalty, limit)?;
        let k_star = (1..=limit)
            .find(|&n| reach[(n - 1) as usize])
            .expect("case (iii) zero set is nonempty");
        let ell = (1..=limit)
            .find(|&n| reach[(n - 1) as usize] && n % k_star != 0)
            .expect("case (iii) zero set is not the multiples of k_star");
        let mut pending = VecDeque::new();
        pending.push_back((S::zero(), k_star));
        Ok(CaseIiiAdversary {
            k_star,
            ell,
            eps,
            pending,
            matched_total: 0,
            all_matched_early: false,
            done: false,
        })
    }

    pub fn k_star(&self) -> u64 {
        self.k_star
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
}

impl<S: Scalar> RequestSource<S> for CaseIiiAdversary<S> {
    fn name(&self) -> String {
        format!("case3:{}", self.eps)
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
            Ok(Some(self.eps.clone()))
        }
    }

    fn on_wakeup(&mut self, now: &S) -> Result<Vec<u64>> {
        if self.done || now.cmp2(&self.eps) == Ordering::Less {
            return Ok(Vec::new());
        }
        self.done = true;
        if self.all_matched_early {
            Ok(vec![self.ell - self.k_star])
        } else {
            Ok(Vec::new())
        }
    }

    fn on_match(&mut self, now: &S, size: u64) -> Result<Vec<u64>> {
        self.matched_total += size;
        if !self.done
            && self.matched_total >= self.k_star
            && now.cmp2(&self.eps) == Ordering::Less
        {
            self.all_matched_early = true;
        }
        Ok(Vec::new())
    }

    fn finalized(&self) -> bool {
        self.done && self.pending.is_empty()
    }
}
