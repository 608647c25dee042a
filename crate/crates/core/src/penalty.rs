//! Penalty functions: finite tables with a tail rule, the zero-penalty set,
//! the three-way case classification, effective (post-subdivision) penalties,
//! and the scaling normalization for {0, mu}-valued tables.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::engine::instance::Instance;
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;

/// How the table extends beyond its last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    /// f(n) = 1 for n > N (the default for binary tables).
    ConstantOne,
    /// f(n) = ceil(n / k) everywhere.
    CeilDiv(u64),
    /// f(n) = n everywhere.
    Linear,
}

/// Raw serialized form of a penalty: values f(1..=N) plus the tail rule.
/// This is what penalty JSON files contain; building a [`PenaltyFunction`]
/// validates it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct RawPenaltyTable<S: Scalar> {
    pub table: Vec<S>,
    pub tail: TailRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyMode {
    /// Values in {0, 1}, constant-one tail.
    Binary,
    /// The ceil(n/k) and n families, given by formula.
    General,
}

/// A validated penalty function.
///
/// Binary mode requires every table value in {0, 1} and a constant-one tail;
/// general mode requires the table (if any) to agree with the tail formula.
/// For binary tables the zero set and classification are derived eagerly, so
/// all reads are lock-free.
#[derive(Debug, Clone)]
pub struct PenaltyFunction<S: Scalar> {
    table: Vec<S>,
    tail: TailRule,
    mode: PenaltyMode,
    /// Sizes n <= N with f(n) = 0, sorted (binary mode).
    zeros: Vec<u64>,
    class: Option<PenaltyClass>,
}

/// The three-way classification of binary penalties by their zero-penalty set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PenaltyClass {
    pub variant: CaseVariant,
    /// Sorted sizes with f(n) = 0.
    pub zeros: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum CaseVariant {
    /// No zero sizes: every match costs 1.
    I,
    /// Zero exactly on multiples of k.
    II { k: u64 },
    /// Zeros exist but are not the multiples of any single integer.
    III,
}

impl PenaltyClass {
    fn new(zeros: Vec<u64>) -> Result<Self> {
        debug_assert!(zeros.windows(2).all(|w| w[0] < w[1]));
        let variant = if zeros.is_empty() {
            CaseVariant::I
        } else {
            let k = zeros[0];
            if zeros.iter().all(|z| z % k == 0) {
                CaseVariant::II { k }
            } else {
                CaseVariant::III
            }
        };
        // Sanity-check the stated invariants.
        match variant {
            CaseVariant::I => debug_assert!(zeros.is_empty()),
            CaseVariant::II { k } => {
                debug_assert_eq!(k, zeros[0]);
                debug_assert!(zeros.iter().all(|z| z % k == 0));
            }
            CaseVariant::III => {
                debug_assert!(!zeros.is_empty());
                debug_assert!(zeros.iter().any(|z| z % zeros[0] != 0));
            }
        }
        Ok(PenaltyClass { variant, zeros })
    }

    pub fn describe(&self) -> String {
        match self.variant {
            CaseVariant::I => "case (i)".into(),
            CaseVariant::II { k } => format!("case (ii), k={k}"),
            CaseVariant::III => "case (iii)".into(),
        }
    }
}

impl<S: Scalar> PenaltyFunction<S> {
    /// Validate a raw table into a penalty function.
    pub fn new(raw: RawPenaltyTable<S>) -> Result<Self> {
        match raw.tail {
            TailRule::ConstantOne => {
                if raw.table.is_empty() {
                    return Err(Error::PenaltyMode("empty penalty table".into()));
                }
                let mut zeros = Vec::new();
                for (i, v) in raw.table.iter().enumerate() {
                    let n = (i + 1) as u64;
                    if v.is_zero() {
                        zeros.push(n);
                    } else if *v != S::one() {
                        return Err(Error::PenaltyMode(format!(
                            "binary table value f({n}) = {v} is not 0 or 1"
                        )));
                    }
                }
                let class = PenaltyClass::new(zeros.clone())?;
                Ok(PenaltyFunction {
                    table: raw.table,
                    tail: TailRule::ConstantOne,
                    mode: PenaltyMode::Binary,
                    zeros,
                    class: Some(class),
                })
            }
            TailRule::CeilDiv(k) => {
                if k == 0 {
                    return Err(Error::InvalidModulus);
                }
                for (i, v) in raw.table.iter().enumerate() {
                    let n = (i + 1) as u64;
                    if *v != S::from_u64(n.div_ceil(k)) {
                        return Err(Error::PenaltyMode(format!(
                            "table entry f({n}) = {v} disagrees with ceil({n}/{k})"
                        )));
                    }
                }
                Ok(PenaltyFunction {
                    table: raw.table,
                    tail: TailRule::CeilDiv(k),
                    mode: PenaltyMode::General,
                    zeros: Vec::new(),
                    class: None,
                })
            }
            TailRule::Linear => {
                for (i, v) in raw.table.iter().enumerate() {
                    let n = (i + 1) as u64;
                    if *v != S::from_u64(n) {
                        return Err(Error::PenaltyMode(format!(
                            "table entry f({n}) = {v} disagrees with f(n) = n"
                        )));
                    }
                }
                Ok(PenaltyFunction {
                    table: raw.table,
                    tail: TailRule::Linear,
                    mode: PenaltyMode::General,
                    zeros: Vec::new(),
                    class: None,
                })
            }
        }
    }

    /// Binary penalty with f(n) = 0 exactly on the given sizes (up to the
    /// largest zero, or table length N if larger).
    pub fn from_zeros(zeros: &[u64], table_len: Option<u64>) -> Result<Self> {
        let max_zero = zeros.iter().copied().max().unwrap_or(0);
        let n = table_len.unwrap_or(max_zero.max(1));
        if zeros.iter().any(|&z| z == 0 || z > n) {
            return Err(Error::PenaltyMode(
                "zero sizes must be in 1..=table length".into(),
            ));
        }
        let table = (1..=n)
            .map(|i| {
                if zeros.contains(&i) {
                    S::zero()
                } else {
                    S::one()
                }
            })
            .collect();
        Self::new(RawPenaltyTable {
            table,
            tail: TailRule::ConstantOne,
        })
    }

    /// f identically 1 (case (i)).
    pub fn always_one() -> Self {
        Self::from_zeros(&[], Some(1)).expect("constant-one table is valid")
    }

    /// f(n) = ceil(n / k).
    pub fn ceil_div(k: u64) -> Result<Self> {
        Self::new(RawPenaltyTable {
            table: Vec::new(),
            tail: TailRule::CeilDiv(k),
        })
    }

    /// f(n) = n.
    pub fn linear() -> Self {
        Self::new(RawPenaltyTable {
            table: Vec::new(),
            tail: TailRule::Linear,
        })
        .expect("linear table is valid")
    }

    pub fn mode(&self) -> PenaltyMode {
        self.mode
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn table_len(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn zeros(&self) -> &[u64] {
        &self.zeros
    }

    /// The raw size cost f(n) charged for one match of n requests.
    pub fn raw_cost(&self, n: u64) -> S {
        debug_assert!(n >= 1);
        match self.tail {
            TailRule::ConstantOne => {
                if n <= self.table.len() as u64 {
                    self.table[(n - 1) as usize].clone()
                } else {
                    S::one()
                }
            }
            TailRule::CeilDiv(k) => S::from_u64(n.div_ceil(k)),
            TailRule::Linear => S::from_u64(n),
        }
    }

    pub fn raw(&self) -> RawPenaltyTable<S> {
        RawPenaltyTable {
            table: self.table.clone(),
            tail: self.tail,
        }
    }

    pub fn classification(&self) -> Result<&PenaltyClass> {
        self.class.as_ref().ok_or_else(|| {
            Error::PenaltyMode("classification requires a binary penalty".into())
        })
    }
}

impl<S: Scalar> Serialize for PenaltyFunction<S> {
    fn serialize<Ser: serde::Serializer>(
        &self,
        serializer: Ser,
    ) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.raw().serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for PenaltyFunction<S> {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = RawPenaltyTable::<S>::deserialize(deserializer)?;
        PenaltyFunction::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Reachability table for the zero-penalty set: entry n-1 is true iff n is a
/// finite sum of zero sizes of `f`. Binary penalties only.
pub fn zero_penalty_set<S: Scalar>(f: &PenaltyFunction<S>, limit: u64) -> Result<Vec<bool>> {
    if f.mode != PenaltyMode::Binary {
        return Err(Error::PenaltyMode(
            "zero-penalty set requires a binary penalty".into(),
        ));
    }
    debug_assert!(limit >= 1);
    Ok(reachable_sums(&f.zeros, limit))
}

/// reach[0] = true; reach[n] = OR over zeros z <= n of reach[n - z].
/// Returned vector is indexed by n-1 for n in 1..=limit.
fn reachable_sums(zeros: &[u64], limit: u64) -> Vec<bool> {
    let limit = limit as usize;
    let mut reach = vec![false; limit + 1];
    reach[0] = true;
    for n in 1..=limit {
        for &z in zeros {
            let z = z as usize;
            if z <= n && reach[n - z] {
                reach[n] = true;
                break;
            }
        }
    }
    reach.remove(0);
    reach
}

/// Classify a binary penalty by its zero set: case (i) with no zeros, case
/// (ii) when every zero is a multiple of the smallest one (then the zero-
/// penalty set is exactly the multiples of that k), case (iii) otherwise.
///
/// The divisibility criterion decides membership for all of Z++ only because
/// the constant-one tail guarantees there are no zeros beyond the table.
pub fn classify<S: Scalar>(f: &PenaltyFunction<S>) -> Result<PenaltyClass> {
    f.classification().cloned()
}

/// Minimum total size cost to match n requests after optimally splitting
/// them into submatches at the same instant.
///
/// Matches the partition DP g(n) = min(f(n), min_j g(j) + g(n-j)):
/// for binary penalties the result is 0 iff n is in the zero-penalty set and
/// 1 otherwise, and the ceil(n/k) and n families are superadditive so
/// splitting never helps. Those closed forms are what this function
/// evaluates; the DP itself serves as the test oracle.
pub fn effective_penalty<S: Scalar>(f: &PenaltyFunction<S>, n: u64) -> S {
    debug_assert!(n >= 1);
    match f.mode {
        PenaltyMode::Binary => {
            let reach = reachable_sums(&f.zeros, n);
            if reach[(n - 1) as usize] {
                S::zero()
            } else {
                S::one()
            }
        }
        PenaltyMode::General => f.raw_cost(n),
    }
}

/// Bulk version used by the offline solvers: effective penalties for all
/// sizes 1..=max_n, one reachability pass.
pub fn effective_penalty_table<S: Scalar>(f: &PenaltyFunction<S>, max_n: u64) -> Vec<S> {
    match f.mode {
        PenaltyMode::Binary => reachable_sums(&f.zeros, max_n)
            .into_iter()
            .map(|ok| if ok { S::zero() } else { S::one() })
            .collect(),
        PenaltyMode::General => (1..=max_n).map(|n| f.raw_cost(n)).collect(),
    }
}

/// Normalize a {0, mu} table to a binary one by dividing penalties and
/// arrival times by mu: cost_original(schedule) = mu * cost_scaled(schedule
/// with times divided by mu).
pub fn scale_normalize<S: Scalar>(
    raw: &RawPenaltyTable<S>,
    instance: &Instance<S>,
    mu: &S,
) -> Result<(PenaltyFunction<S>, Instance<S>, S)> {
    if mu.cmp2(&S::zero()) != Ordering::Greater {
        return Err(Error::NotScalable("mu must be positive".into()));
    }
    if raw.tail != TailRule::ConstantOne {
        return Err(Error::NotScalable(
            "only constant-one tails can be rescaled".into(),
        ));
    }
    let mut table = Vec::with_capacity(raw.table.len());
    for (i, v) in raw.table.iter().enumerate() {
        if v.is_zero() {
            table.push(S::zero());
        } else if v == mu {
            table.push(S::one());
        } else {
            return Err(Error::NotScalable(format!(
                "value f({}) = {v} is neither 0 nor mu = {mu}",
                i + 1
            )));
        }
    }
    let penalty = PenaltyFunction::new(RawPenaltyTable {
        table,
        tail: TailRule::ConstantOne,
    })?;
    let scaled = instance.scale_times(&(S::one() / mu.clone()), penalty.clone())?;
    Ok((penalty, scaled, mu.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::instance::InstanceBuilder;
    use crate::numerics::scalar::Exact;

    fn zeros_penalty(zeros: &[u64]) -> PenaltyFunction<Exact> {
        PenaltyFunction::from_zeros(zeros, None).unwrap()
    }

    /// Independent oracle: enumerate all sums of zeros with repetition.
    fn sums_oracle(zeros: &[u64], limit: u64) -> Vec<bool> {
        let mut hit = vec![false; (limit + 1) as usize];
        fn go(zeros: &[u64], total: u64, limit: u64, hit: &mut Vec<bool>) {
            for &z in zeros {
                let next = total + z;
                if next <= limit && !hit[next as usize] {
                    hit[next as usize] = true;
                    go(zeros, next, limit, hit);
                }
            }
        }
        go(zeros, 0, limit, &mut hit);
        hit.remove(0);
        hit
    }

    #[test]
    fn zero_penalty_set_examples() {
        // f(1)=1, f(2)=f(3)=0, rest 1: reachable exactly on 2..=10.
        let f = zeros_penalty(&[2, 3]);
        let got = zero_penalty_set(&f, 10).unwrap();
        let expect: Vec<bool> = (1..=10).map(|n| n >= 2).collect();
        assert_eq!(got, expect);

        let f1 = PenaltyFunction::<Exact>::always_one();
        assert!(zero_penalty_set(&f1, 10).unwrap().iter().all(|&b| !b));

        let f36 = zeros_penalty(&[3, 6]);
        let got = zero_penalty_set(&f36, 20).unwrap();
        assert_eq!(got, sums_oracle(&[3, 6], 20));
        for (i, b) in got.iter().enumerate() {
            let n = (i + 1) as u64;
            assert_eq!(*b, n % 3 == 0, "n={n}");
        }

        let general = PenaltyFunction::<Exact>::ceil_div(3).unwrap();
        assert!(zero_penalty_set(&general, 5).is_err());
    }

    #[test]
    fn classify_examples() {
        let f1 = PenaltyFunction::<Exact>::always_one();
        assert_eq!(classify(&f1).unwrap().variant, CaseVariant::I);

        let f24 = zeros_penalty(&[2, 4]);
        assert_eq!(classify(&f24).unwrap().variant, CaseVariant::II { k: 2 });

        let f23 = zeros_penalty(&[2, 3]);
        assert_eq!(classify(&f23).unwrap().variant, CaseVariant::III);
    }

    #[test]
    fn effective_penalty_examples() {
        let f23 = zeros_penalty(&[2, 3]);
        // 7 = 2 + 2 + 3 can be matched free.
        assert_eq!(effective_penalty(&f23, 7), Exact::zero());
        assert_eq!(effective_penalty(&f23, 1), f23.raw_cost(1));

        let f3 = PenaltyFunction::<Exact>::ceil_div(3).unwrap();
        assert_eq!(effective_penalty(&f3, 7), Exact::from_u64(3));
    }

    /// The partition DP from the definition, as an oracle.
    fn partition_dp(f: &PenaltyFunction<Exact>, max_n: u64) -> Vec<Exact> {
        let mut g: Vec<Exact> = Vec::with_capacity(max_n as usize);
        for n in 1..=max_n {
            let mut best = f.raw_cost(n);
            for j in 1..n {
                let cand = g[(j - 1) as usize].clone() + g[(n - j - 1) as usize].clone();
                if cand < best {
                    best = cand;
                }
            }
            g.push(best);
        }
        g
    }

    #[test]
    fn effective_penalty_matches_partition_dp() {
        let penalties: Vec<PenaltyFunction<Exact>> = vec![
            PenaltyFunction::always_one(),
            zeros_penalty(&[2]),
            zeros_penalty(&[2, 3]),
            zeros_penalty(&[3, 6]),
            zeros_penalty(&[4, 6]),
            zeros_penalty(&[5]),
            PenaltyFunction::ceil_div(3).unwrap(),
            PenaltyFunction::ceil_div(1).unwrap(),
            PenaltyFunction::linear(),
        ];
        for f in &penalties {
            let oracle = partition_dp(f, 50);
            let table = effective_penalty_table(f, 50);
            assert_eq!(table, oracle, "penalty {:?}", f.tail());
            for n in 1..=50 {
                assert_eq!(effective_penalty(f, n), oracle[(n - 1) as usize]);
            }
        }
    }

    #[test]
    fn effective_penalty_subadditive() {
        for f in [
            zeros_penalty(&[2, 3]),
            zeros_penalty(&[4, 6]),
            PenaltyFunction::<Exact>::ceil_div(3).unwrap(),
        ] {
            let g = effective_penalty_table(&f, 100);
            for a in 1..=99u64 {
                for b in 1..=(100 - a) {
                    let sum = g[(a - 1) as usize].clone() + g[(b - 1) as usize].clone();
                    assert!(g[(a + b - 1) as usize] <= sum, "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn binary_effective_is_zero_iff_reachable() {
        let f = zeros_penalty(&[4, 6]);
        let reach = zero_penalty_set(&f, 60).unwrap();
        for n in 1..=60u64 {
            let e = effective_penalty(&f, n);
            assert!(e == Exact::zero() || e == Exact::one());
            assert_eq!(e.is_zero(), reach[(n - 1) as usize]);
        }
    }

    #[test]
    fn scale_normalize_examples() {
        // mu = 60: {0, 60} table, arrivals 0/30/90 become 0, 1/2, 3/2.
        let mu = Exact::from_u64(60);
        let raw = RawPenaltyTable {
            table: vec![mu.clone(), Exact::zero()],
            tail: TailRule::ConstantOne,
        };
        let mut b = InstanceBuilder::<Exact>::new(PenaltyFunction::always_one());
        for t in [0u64, 30, 90] {
            b.push(Exact::from_u64(t), 1).unwrap();
        }
        let instance = b.finalize();
        let (penalty, scaled, factor) = scale_normalize(&raw, &instance, &mu).unwrap();
        assert_eq!(factor, mu);
        assert_eq!(penalty.zeros(), &[2]);
        let times: Vec<Exact> = scaled.arrivals().iter().map(|a| a.time.clone()).collect();
        assert_eq!(
            times,
            vec![Exact::zero(), Exact::ratio(1, 2), Exact::ratio(3, 2)]
        );

        // mu = 1 is the identity transform.
        let raw1 = RawPenaltyTable {
            table: vec![Exact::one(), Exact::zero()],
            tail: TailRule::ConstantOne,
        };
        let (_, same, _) = scale_normalize(&raw1, &instance, &Exact::one()).unwrap();
        assert_eq!(
            same.arrivals()
                .iter()
                .map(|a| a.time.clone())
                .collect::<Vec<_>>(),
            instance
                .arrivals()
                .iter()
                .map(|a| a.time.clone())
                .collect::<Vec<_>>()
        );

        // Mixed nonzero values cannot be rescaled.
        let bad = RawPenaltyTable {
            table: vec![Exact::from_u64(60), Exact::from_u64(30)],
            tail: TailRule::ConstantOne,
        };
        assert!(scale_normalize(&bad, &instance, &mu).is_err());
    }

    #[test]
    fn zero_set_closed_under_addition() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let count = rng.gen_range(1..=4);
            let zeros: Vec<u64> = (0..count)
                .map(|_| rng.gen_range(2..=12u64))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let f = zeros_penalty(&zeros);
            let limit = 200u64;
            let reach = zero_penalty_set(&f, limit).unwrap();
            for a in 1..=limit {
                for b in a..=limit {
                    if a + b > limit {
                        break;
                    }
                    if reach[(a - 1) as usize] && reach[(b - 1) as usize] {
                        assert!(reach[(a + b - 1) as usize], "zeros={zeros:?} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn classify_consistent_with_zero_set() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..60 {
            let count = rng.gen_range(0..=3);
            let zeros: Vec<u64> = (0..count)
                .map(|_| rng.gen_range(2..=10u64))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let f = zeros_penalty(&zeros);
            let class = classify(&f).unwrap();
            let limit = 120u64;
            let reach = zero_penalty_set(&f, limit).unwrap();
            match class.variant {
                CaseVariant::I => assert!(reach.iter().all(|&b| !b)),
                CaseVariant::II { k } => {
                    for n in 1..=limit {
                        assert_eq!(reach[(n - 1) as usize], n % k == 0, "zeros={zeros:?} n={n}");
                    }
                }
                CaseVariant::III => {
                    assert!(reach.iter().any(|&b| b));
                    let matches_some_k = (1..=limit).any(|k| {
                        (1..=limit).all(|n| reach[(n - 1) as usize] == (n % k == 0))
                    });
                    assert!(!matches_some_k, "zeros={zeros:?}");
                }
            }
        }
    }
}
