//! Offline-optimal cost: an interval DP over arrival order (groups are
//! consecutive, each matched at its last arrival), validated against an
//! exhaustive set-partition oracle for small instances.

use serde::Serialize;

use crate::engine::instance::Instance;
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;
use crate::penalty::{effective_penalty_table, PenaltyFunction};

const BRUTE_FORCE_LIMIT: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Dp,
    BruteForce,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct Group<S: Scalar> {
    /// First request index (in arrival order) of the group.
    pub from: u64,
    pub size: u64,
    #[serde(rename = "t")]
    pub match_time: S,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct OfflineSolution<S: Scalar> {
    pub cost: S,
    pub groups: Vec<Group<S>>,
    pub method: SolveMethod,
}

fn request_times<S: Scalar>(instance: &Instance<S>) -> Vec<S> {
    let mut times = Vec::with_capacity(instance.total_requests() as usize);
    for a in instance.arrivals() {
        for _ in 0..a.count {
            times.push(a.time.clone());
        }
    }
    times
}

/// O(m^2) interval DP: dp[i] = min over j < i of dp[j] + f_eff(i-j)
/// + sum of (t_i - t_l) for l in j+1..=i, using prefix sums.
///
/// Grouping consecutively and matching each group at its last arrival is
/// optimal because requests are interchangeable (an exchange argument) and
/// delaying a match past the group's last arrival only adds waiting; both
/// facts are validated against the brute-force oracle in the test suite.
pub fn optimal_cost_dp<S: Scalar>(
    instance: &Instance<S>,
    penalty: &PenaltyFunction<S>,
) -> Result<OfflineSolution<S>> {
    if !instance.is_finalized() {
        return Err(Error::UnfinalizedInstance);
    }
    let times = request_times(instance);
    let m = times.len();
    if m == 0 {
        return Ok(OfflineSolution {
            cost: S::zero(),
            groups: Vec::new(),
            method: SolveMethod::Dp,
        });
    }
    let eff = effective_penalty_table(penalty, m as u64);

    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(S::zero());
    for t in &times {
        let last = prefix.last().unwrap().clone();
        prefix.push(last + t.clone());
    }

    let mut dp: Vec<S> = Vec::with_capacity(m + 1);
    let mut choice: Vec<usize> = vec![0; m + 1];
    dp.push(S::zero());
    for i in 1..=m {
        let t_i = &times[i - 1];
        let mut best: Option<S> = None;
        for j in 0..i {
            let size = i - j;
            let waiting =
                t_i.mul_u64(size as u64) - (prefix[i].clone() - prefix[j].clone());
            let cand = dp[j].clone() + eff[size - 1].clone() + waiting;
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
                choice[i] = j;
            }
        }
        dp.push(best.expect("nonempty candidate set"));
    }

    let mut groups = Vec::new();
    let mut i = m;
    while i > 0 {
        let j = choice[i];
        groups.push(Group {
            from: j as u64,
            size: (i - j) as u64,
            match_time: times[i - 1].clone(),
        });
        i = j;
    }
    groups.reverse();

    Ok(OfflineSolution {
        cost: dp[m].clone(),
        groups,
        method: SolveMethod::Dp,
    })
}

/// Enumerate all set partitions of the m requests (m <= 10); each block is
/// matched at its latest arrival time.
pub fn brute_force_opt<S: Scalar>(
    instance: &Instance<S>,
    penalty: &PenaltyFunction<S>,
) -> Result<OfflineSolution<S>> {
    if !instance.is_finalized() {
        return Err(Error::UnfinalizedInstance);
    }
    let times = request_times(instance);
    let m = times.len() as u64;
    if m > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceTooLarge {
            m,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if m == 0 {
        return Ok(OfflineSolution {
            cost: S::zero(),
            groups: Vec::new(),
            method: SolveMethod::BruteForce,
        });
    }
    let eff = effective_penalty_table(penalty, m);

    struct Search<'a, S: Scalar> {
        times: &'a [S],
        eff: &'a [S],
        blocks: Vec<Vec<usize>>,
        best: Option<(S, Vec<Vec<usize>>)>,
    }

    impl<'a, S: Scalar> Search<'a, S> {
        fn block_cost(&self, block: &[usize]) -> S {
            let last = block
                .iter()
                .map(|&i| &self.times[i])
                .max_by(|a, b| a.cmp2(b))
                .expect("nonempty block");
            let mut cost = self.eff[block.len() - 1].clone();
            for &i in block {
                cost = cost + (last.clone() - self.times[i].clone());
            }
            cost
        }

        fn go(&mut self, next: usize) {
            if next == self.times.len() {
                let total = self
                    .blocks
                    .iter()
                    .fold(S::zero(), |acc, b| acc + self.block_cost(b));
                let improves = match &self.best {
                    None => true,
                    Some((best, _)) => total < *best,
                };
                if improves {
                    self.best = Some((total, self.blocks.clone()));
                }
                return;
            }
            for b in 0..self.blocks.len() {
                self.blocks[b].push(next);
                self.go(next + 1);
                self.blocks[b].pop();
            }
            self.blocks.push(vec![next]);
            self.go(next + 1);
            self.blocks.pop();
        }
    }

    let mut search = Search {
        times: &times,
        eff: &eff,
        blocks: Vec::new(),
        best: None,
    };
    search.go(0);
    let (cost, blocks) = search.best.expect("at least one partition");

    let groups = blocks
        .iter()
        .map(|b| {
            let last = b
                .iter()
                .map(|&i| &times[i])
                .max_by(|a, b| a.cmp2(b))
                .expect("nonempty block");
            Group {
                from: *b.iter().min().unwrap() as u64,
                size: b.len() as u64,
                match_time: last.clone(),
            }
        })
        .collect();

    Ok(OfflineSolution {
        cost,
        groups,
        method: SolveMethod::BruteForce,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::instance::InstanceBuilder;
    use crate::numerics::scalar::Exact;
    use crate::penalty::PenaltyFunction;

    fn instance(penalty: PenaltyFunction<Exact>, arrivals: &[(Exact, u64)]) -> Instance<Exact> {
        let mut b = InstanceBuilder::new(penalty);
        for (t, c) in arrivals {
            b.push(t.clone(), *c).unwrap();
        }
        b.finalize()
    }

    #[test]
    fn dp_examples() {
        // Case (i), two requests at time 0: one match of cost 1.
        let f = PenaltyFunction::<Exact>::always_one();
        let i = instance(f.clone(), &[(Exact::zero(), 2)]);
        let sol = optimal_cost_dp(&i, &f).unwrap();
        assert_eq!(sol.cost, Exact::one());

        // Case (ii) k=2, arrivals at 0 and 1: pair them at t=1, waiting 1.
        let f2 = PenaltyFunction::<Exact>::from_zeros(&[2], None).unwrap();
        let i = instance(
            f2.clone(),
            &[(Exact::zero(), 1), (Exact::one(), 1)],
        );
        let sol = optimal_cost_dp(&i, &f2).unwrap();
        assert_eq!(sol.cost, Exact::one());
        let brute = brute_force_opt(&i, &f2).unwrap();
        assert_eq!(brute.cost, Exact::one());

        // A single request under k=2 is forced to pay the size cost.
        let i = instance(f2.clone(), &[(Exact::zero(), 1)]);
        assert_eq!(optimal_cost_dp(&i, &f2).unwrap().cost, Exact::one());
    }

    #[test]
    fn brute_force_examples() {
        let f = PenaltyFunction::<Exact>::always_one();
        let empty = instance(f.clone(), &[]);
        assert_eq!(brute_force_opt(&empty, &f).unwrap().cost, Exact::zero());

        // Case (ii) k=3, arrivals at {0, 0, 10}: pair at 0 (cost 1) plus
        // singleton at 10 (cost 1).
        let f3 = PenaltyFunction::<Exact>::from_zeros(&[3], None).unwrap();
        let i = instance(
            f3.clone(),
            &[(Exact::zero(), 2), (Exact::from_u64(10), 1)],
        );
        let sol = brute_force_opt(&i, &f3).unwrap();
        assert_eq!(sol.cost, Exact::from_u64(2));
        assert_eq!(optimal_cost_dp(&i, &f3).unwrap().cost, Exact::from_u64(2));
    }

    #[test]
    fn brute_force_size_guard() {
        let f = PenaltyFunction::<Exact>::always_one();
        let i = instance(f.clone(), &[(Exact::zero(), 11)]);
        assert!(matches!(
            brute_force_opt(&i, &f),
            Err(Error::BruteForceTooLarge { m: 11, .. })
        ));
    }

    #[test]
    fn delaying_the_match_never_helps() {
        // Take DP groups on tiny instances and push each group's match time
        // onto a later grid; the cost must not decrease.
        let penalties = [
            PenaltyFunction::<Exact>::always_one(),
            PenaltyFunction::<Exact>::from_zeros(&[2], None).unwrap(),
            PenaltyFunction::<Exact>::from_zeros(&[2, 3], None).unwrap(),
        ];
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..20 {
            let f = penalties[trial % penalties.len()].clone();
            let m = rng.gen_range(1..=4u64);
            let mut b = InstanceBuilder::new(f.clone());
            let mut t = 0u64;
            for _ in 0..m {
                t += rng.gen_range(0..=3);
                b.push(Exact::from_u64(t), 1).unwrap();
            }
            let inst = b.finalize();
            let sol = optimal_cost_dp(&inst, &f).unwrap();
            let times = request_times(&inst);
            for delay_num in 1..=4u64 {
                let delay = Exact::ratio(delay_num as i64, 2);
                let mut delayed = Exact::zero();
                for g in &sol.groups {
                    let t_match = g.match_time.clone() + delay.clone();
                    delayed = delayed
                        + crate::penalty::effective_penalty(&f, g.size)
                        + (0..g.size)
                            .map(|off| {
                                t_match.clone() - times[(g.from + off) as usize].clone()
                            })
                            .fold(Exact::zero(), |a, b| a + b);
                }
                assert!(delayed >= sol.cost, "delay improved the schedule");
            }
        }
    }
}
