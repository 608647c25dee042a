//! The acceptance checks behind `omdsc validate` and the `acceptance`
//! integration suite: one function per criterion, deterministic seeds,
//! exact backend unless a 1e-9 tolerance is stated.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adversaries::{
    poisson_instance, CaseIiiAdversary, FixedSource, LowerBoundAdversary, MarAdversary,
};
use crate::algorithms::{isqrt, CeilDiv, Immediate, MarReference, Recurring, TcpAck};
use crate::engine::instance::{Instance, InstanceBuilder};
use crate::engine::{run, EngineConfig, OnlineAlgorithm, Termination, Transcript};
use crate::error::Result;
use crate::numerics::alpha::solve_alpha;
use crate::numerics::residue::{interval_contains_raw, interval_size_raw, residue};
use crate::numerics::scalar::{competitive_ratio, Exact, Ratio, Scalar, F64};
use crate::offline::{brute_force_opt, optimal_cost_dp};
use crate::penalty::PenaltyFunction;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u32, name: &str, passed: bool, detail: String) -> Self {
        CriterionResult {
            id,
            name: name.into(),
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {:<28} {}  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub criteria: Vec<CriterionResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

fn case2_penalty(k: u64) -> PenaltyFunction<Exact> {
    PenaltyFunction::from_zeros(&[k], None).expect("valid zero table")
}

fn exact_run(
    alg: &mut dyn OnlineAlgorithm<Exact>,
    source: &mut dyn crate::engine::RequestSource<Exact>,
    penalty: &PenaltyFunction<Exact>,
) -> Result<Transcript<Exact>> {
    run(alg, source, penalty, &EngineConfig::default())
}

/// Shared fixture for the recurring-algorithm criteria: duels against the
/// round adversary plus random schedules, for k in {16, 81, 256, 625}.
pub struct RecurringStudy {
    pub transcripts: Vec<(String, u64, Transcript<Exact>)>,
}

pub fn build_recurring_study() -> Result<RecurringStudy> {
    let mut transcripts = Vec::new();
    for &k in &[16u64, 81, 256, 625] {
        let penalty = case2_penalty(k);
        let mut alg = Recurring::new(penalty.clone(), None)?;
        let mut source = LowerBoundAdversary::new(k, None)?;
        let t = exact_run(&mut alg, &mut source, &penalty)?;
        transcripts.push((format!("recurring:{k} vs lb:{k}"), k, t));

        for trial in 0..25u64 {
            let seed = 1000 * k + trial;
            let rate = (k as f64) / 8.0;
            let instance = poisson_instance(penalty.clone(), rate, 30, seed)?;
            let mut alg = Recurring::new(penalty.clone(), None)?;
            let mut source = FixedSource::new(&instance);
            let t = exact_run(&mut alg, &mut source, &penalty)?;
            transcripts.push((format!("recurring:{k} vs poisson seed {seed}"), k, t));
        }
    }
    Ok(RecurringStudy { transcripts })
}

// ---------------------------------------------------------------------------
// Criterion 1: DP optimum equals the brute-force oracle on random instances.

pub fn criterion_01() -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let penalties: Vec<PenaltyFunction<Exact>> = vec![
        PenaltyFunction::always_one(),
        case2_penalty(2),
        case2_penalty(3),
        PenaltyFunction::from_zeros(&[2, 4], None).unwrap(),
        PenaltyFunction::from_zeros(&[2, 3], None).unwrap(),
        PenaltyFunction::from_zeros(&[3, 5], None).unwrap(),
        PenaltyFunction::from_zeros(&[4, 6], None).unwrap(),
        PenaltyFunction::ceil_div(2).unwrap(),
        PenaltyFunction::ceil_div(3).unwrap(),
    ];
    let trials = 200;
    let mut checked = 0;
    for trial in 0..trials {
        let penalty = penalties[trial % penalties.len()].clone();
        let mut b = InstanceBuilder::new(penalty.clone());
        let mut total = 0u64;
        let mut quarters = 0i64;
        let target = rng.gen_range(0..=8u64);
        while total < target {
            quarters += rng.gen_range(0..=6);
            let count = rng.gen_range(1..=2u64).min(target - total);
            b.push(Exact::ratio(quarters, 4), count).unwrap();
            total += count;
        }
        let instance = b.finalize();
        let dp = optimal_cost_dp(&instance, &penalty)?;
        let brute = brute_force_opt(&instance, &penalty)?;
        if dp.cost != brute.cost {
            return Ok(CriterionResult::new(
                1,
                "oracle-equivalence",
                false,
                format!(
                    "trial {trial}: dp {} vs brute force {}",
                    dp.cost, brute.cost
                ),
            ));
        }
        checked += 1;
    }
    Ok(CriterionResult::new(
        1,
        "oracle-equivalence",
        true,
        format!("{checked}/{trials} instances match exactly"),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 2: the ack rule is 2-competitive on case (i).

pub fn criterion_02() -> Result<CriterionResult> {
    let penalty = PenaltyFunction::<Exact>::always_one();
    let two = Exact::from_u64(2);
    let mut worst = Exact::zero();
    for trial in 0..500u64 {
        let m = 1 + trial % 50;
        let rate = 0.5 + (trial % 7) as f64 * 0.5;
        let instance = poisson_instance(penalty.clone(), rate, m, 200 + trial)?;
        let mut alg = TcpAck::new();
        let mut source = FixedSource::new(&instance);
        let t = exact_run(&mut alg, &mut source, &penalty)?;
        let opt = optimal_cost_dp(&t.instance, &penalty)?;
        match competitive_ratio(&t.total_cost(), &opt.cost)? {
            Ratio::Finite(r) => {
                if r > two {
                    return Ok(CriterionResult::new(
                        2,
                        "ack-rule-2-competitive",
                        false,
                        format!("trial {trial}: ratio {r} > 2"),
                    ));
                }
                if r > worst {
                    worst = r;
                }
            }
            Ratio::Infinite => {
                return Ok(CriterionResult::new(
                    2,
                    "ack-rule-2-competitive",
                    false,
                    format!("trial {trial}: infinite ratio"),
                ));
            }
        }
    }

    // The single-request instance achieves the bound exactly.
    let mut b = InstanceBuilder::new(penalty.clone());
    b.push(Exact::zero(), 1).unwrap();
    let instance = b.finalize();
    let mut alg = TcpAck::new();
    let mut source = FixedSource::new(&instance);
    let t = exact_run(&mut alg, &mut source, &penalty)?;
    let opt = optimal_cost_dp(&t.instance, &penalty)?;
    let tight = competitive_ratio(&t.total_cost(), &opt.cost)? == Ratio::Finite(two);
    Ok(CriterionResult::new(
        2,
        "ack-rule-2-competitive",
        tight,
        format!(
            "500 instances, worst ratio {}; single-request ratio exactly 2: {tight}",
            worst
        ),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 3: the ceil(n/k) rule is 2-competitive; k = 1 is optimal.

pub fn criterion_03() -> Result<CriterionResult> {
    let two = Exact::from_u64(2);
    let one = Exact::one();
    let mut worst = Exact::zero();
    for &k in &[1u64, 2, 3, 5, 8] {
        let penalty = PenaltyFunction::<Exact>::ceil_div(k).unwrap();
        for trial in 0..200u64 {
            let m = 1 + trial % 30;
            let rate = 0.5 + (trial % 5) as f64;
            let instance = poisson_instance(penalty.clone(), rate, m, 300 + 17 * k + trial)?;
            let mut alg = CeilDiv::new(k)?;
            let mut source = FixedSource::new(&instance);
            let t = exact_run(&mut alg, &mut source, &penalty)?;
            let opt = optimal_cost_dp(&t.instance, &penalty)?;
            let ratio = match competitive_ratio(&t.total_cost(), &opt.cost)? {
                Ratio::Finite(r) => r,
                Ratio::Infinite => {
                    return Ok(CriterionResult::new(
                        3,
                        "ceil-div-2-competitive",
                        false,
                        format!("k={k} trial {trial}: infinite ratio"),
                    ))
                }
            };
            if ratio > two || (k == 1 && ratio != one) {
                return Ok(CriterionResult::new(
                    3,
                    "ceil-div-2-competitive",
                    false,
                    format!("k={k} trial {trial}: ratio {ratio}"),
                ));
            }
            if ratio > worst {
                worst = ratio.clone();
            }
        }
    }
    Ok(CriterionResult::new(
        3,
        "ceil-div-2-competitive",
        true,
        format!("k in {{1,2,3,5,8}} x 200 instances, worst ratio {worst}; k=1 exactly 1"),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 4: free singletons make the immediate rule optimal at cost 0.

pub fn criterion_04() -> Result<CriterionResult> {
    let penalty = PenaltyFunction::<Exact>::from_zeros(&[1], None).unwrap();
    for trial in 0..20u64 {
        let m = 1 + trial % 12;
        let instance = poisson_instance(penalty.clone(), 2.0, m, 400 + trial)?;
        let mut alg = Immediate::new();
        let mut source = FixedSource::new(&instance);
        let t = exact_run(&mut alg, &mut source, &penalty)?;
        let opt = optimal_cost_dp(&t.instance, &penalty)?;
        if !t.total_cost().is_zero() || !opt.cost.is_zero() {
            return Ok(CriterionResult::new(
                4,
                "free-singletons-optimal",
                false,
                format!(
                    "trial {trial}: alg {} opt {}",
                    t.total_cost(),
                    opt.cost
                ),
            ));
        }
    }
    Ok(CriterionResult::new(
        4,
        "free-singletons-optimal",
        true,
        "20 instances with f(1)=0: algorithm and optimum both cost 0".into(),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 5: zero violations of the recursion entry conditions.

pub fn criterion_05(study: &RecurringStudy) -> CriterionResult {
    let mut runs = 0;
    for (label, _, t) in &study.transcripts {
        runs += 1;
        if !t.diagnostics.algorithm.violations.is_empty() {
            return CriterionResult::new(
                5,
                "recursion-entry-invariants",
                false,
                format!(
                    "{label}: {}",
                    t.diagnostics.algorithm.violations.join("; ")
                ),
            );
        }
    }
    CriterionResult::new(
        5,
        "recursion-entry-invariants",
        true,
        format!("0 violations across {runs} runs (k in {{16,81,256,625}})"),
    )
}

// ---------------------------------------------------------------------------
// Criterion 6: per-phase cost bound.

pub fn criterion_06(study: &RecurringStudy) -> CriterionResult {
    let mut phases = 0u64;
    let mut worst_per_alpha = 0.0f64;
    for (label, k, t) in &study.transcripts {
        let alpha: Exact = solve_alpha(*k).expect("k >= 2").used();
        for phase in &t.diagnostics.algorithm.phases {
            phases += 1;
            let bound = Exact::from_u64(
                8 * phase.recursion_calls + 2 * phase.exit_interval_size + 1,
            );
            if phase.cost > bound {
                return CriterionResult::new(
                    6,
                    "per-phase-cost",
                    false,
                    format!(
                        "{label} phase {}: cost {} > 8*{} + 2*{} + 1",
                        phase.phase,
                        phase.cost,
                        phase.recursion_calls,
                        phase.exit_interval_size
                    ),
                );
            }
            let per_alpha = (phase.cost.clone() / alpha.clone()).to_f64();
            if per_alpha > worst_per_alpha {
                worst_per_alpha = per_alpha;
            }
            if per_alpha > 30.0 {
                return CriterionResult::new(
                    6,
                    "per-phase-cost",
                    false,
                    format!("{label} phase {}: cost/alpha = {per_alpha}", phase.phase),
                );
            }
        }
    }
    CriterionResult::new(
        6,
        "per-phase-cost",
        phases > 0,
        format!("{phases} completed phases; max phase cost / alpha = {worst_per_alpha:.3}"),
    )
}

// ---------------------------------------------------------------------------
// Criterion 7: every completed phase ends with the whole profile at least 1.

pub fn criterion_07(study: &RecurringStudy) -> CriterionResult {
    let one = Exact::one();
    let mut phases = 0u64;
    for (label, _, t) in &study.transcripts {
        for phase in &t.diagnostics.algorithm.phases {
            phases += 1;
            if phase.min_profile_at_end < one {
                return CriterionResult::new(
                    7,
                    "phase-end-profile",
                    false,
                    format!(
                        "{label} phase {}: min profile {}",
                        phase.phase, phase.min_profile_at_end
                    ),
                );
            }
        }
    }
    CriterionResult::new(
        7,
        "phase-end-profile",
        phases > 0,
        format!("min_i W_i >= 1 at the end of all {phases} completed phases"),
    )
}

// ---------------------------------------------------------------------------
// Criterion 8: the round adversary beats every algorithm at O(1) optimum.

pub fn criterion_08() -> Result<CriterionResult> {
    let mut lines = Vec::new();
    for &k in &[256u64, 625, 1296] {
        let penalty = case2_penalty(k);
        let alpha_param = solve_alpha(k)?;
        let alpha: Exact = alpha_param.used();
        let lower = alpha.clone() / Exact::from_u64(2) - Exact::one();
        let algorithms: Vec<Box<dyn OnlineAlgorithm<Exact>>> = vec![
            Box::new(Immediate::new()),
            Box::new(TcpAck::new()),
            Box::new(CeilDiv::new(k)?),
            Box::new(MarReference::new(k)?),
            Box::new(Recurring::new(penalty.clone(), None)?),
        ];
        for mut alg in algorithms {
            let name = alg.name();
            let mut source = LowerBoundAdversary::new(k, None)?;
            let t = exact_run(alg.as_mut(), &mut source, &penalty)?;
            let fail = |msg: String| {
                Ok(CriterionResult::new(
                    8,
                    "round-adversary-bounds",
                    false,
                    format!("k={k} {name}: {msg}"),
                ))
            };
            if t.termination != Termination::Normal {
                return fail("run did not terminate normally".into());
            }
            if !t.diagnostics.source.violations.is_empty() {
                return fail(format!(
                    "round conditions violated: {}",
                    t.diagnostics.source.violations.join("; ")
                ));
            }
            let n_star = match t.diagnostics.source.final_round {
                Some(n) => n,
                None => return fail("instance never finalized".into()),
            };
            let n_star_s = Exact::from_u64(n_star);
            if n_star_s < lower || n_star_s > alpha {
                return fail(format!(
                    "n* = {n_star} outside [alpha/2 - 1, alpha] = [{lower}, {alpha}]"
                ));
            }
            if t.total_cost() < n_star_s {
                return fail(format!(
                    "algorithm cost {} below n* = {n_star}",
                    t.total_cost()
                ));
            }
            // Offline optimum on the exported instance, float backend at
            // the stated 1e-9 tolerance.
            let float_instance: Instance<F64> = t.instance.convert()?;
            let float_penalty = float_instance.penalty().clone();
            let opt = optimal_cost_dp(&float_instance, &float_penalty)?;
            if opt.cost.to_f64() > 4.0 + 1e-9 {
                return fail(format!("offline optimum {} > 4", opt.cost));
            }
            lines.push(format!(
                "k={k} {name}: n*={n_star} opt={:.3} alg={:.3}",
                opt.cost.to_f64(),
                t.total_cost().to_f64()
            ));
        }
    }
    Ok(CriterionResult::new(
        8,
        "round-adversary-bounds",
        true,
        lines.join(" | "),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 9: separation against match-all-remaining algorithms.

pub fn criterion_09() -> Result<CriterionResult> {
    let mut lines = Vec::new();
    for &k in &[100u64, 400] {
        let penalty = case2_penalty(k);
        let root = isqrt(k);
        debug_assert_eq!(root * root, k);
        let mut alg = TcpAck::new();
        let mut source = MarAdversary::new(k)?;
        let t = exact_run(&mut alg, &mut source, &penalty)?;
        let a = t.matches_before(&Exact::one());
        let alg_cost = t.total_cost();
        let alg_floor = Exact::from_u64(a + k - 1);
        if alg_cost < alg_floor {
            return Ok(CriterionResult::new(
                9,
                "match-all-separation",
                false,
                format!("k={k}: subject cost {alg_cost} < a + k - 1 = {alg_floor}"),
            ));
        }

        // Reference schedule on the exported instance.
        let mut reference = MarReference::new(k)?;
        let mut replay = FixedSource::new(&t.instance);
        let r = exact_run(&mut reference, &mut replay, &penalty)?;
        let ref_cost = r.total_cost();
        let ref_ceiling = Exact::from_u64(2)
            + Exact::from_u64(a) / Exact::from_u64(root)
            + Exact::from_u64(root);
        if ref_cost > ref_ceiling {
            return Ok(CriterionResult::new(
                9,
                "match-all-separation",
                false,
                format!("k={k}: reference cost {ref_cost} > {ref_ceiling}"),
            ));
        }

        let ratio = alg_cost.clone() / ref_cost.clone();
        let bound = Exact::from_u64(root)
            * (Exact::one()
                - Exact::from_u64(1 + 2 * root) / Exact::from_u64(a + k + 2 * root));
        if ratio < bound {
            return Ok(CriterionResult::new(
                9,
                "match-all-separation",
                false,
                format!("k={k}: ratio {ratio} < bound {bound}"),
            ));
        }
        if k == 400 && ratio <= Exact::from_u64(10) {
            return Ok(CriterionResult::new(
                9,
                "match-all-separation",
                false,
                format!("k=400: ratio {ratio} <= 10"),
            ));
        }
        lines.push(format!(
            "k={k}: a={a} ratio={:.2} >= bound {:.2}",
            ratio.to_f64(),
            bound.to_f64()
        ));
    }
    Ok(CriterionResult::new(
        9,
        "match-all-separation",
        true,
        lines.join(" | "),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 10: case (iii) is unbounded as epsilon vanishes.

pub fn criterion_10() -> Result<CriterionResult> {
    let penalty = PenaltyFunction::<Exact>::from_zeros(&[2, 3], None).unwrap();
    let epsilons = [
        Exact::ratio(1, 100),
        Exact::ratio(1, 1000),
        Exact::ratio(1, 10_000),
    ];
    let mut lines = Vec::new();
    for alg_name in ["immediate", "tcp_ack"] {
        let mut ratios: Vec<Ratio<Exact>> = Vec::new();
        for eps in &epsilons {
            let mut alg: Box<dyn OnlineAlgorithm<Exact>> = match alg_name {
                "immediate" => Box::new(Immediate::new()),
                _ => Box::new(TcpAck::new()),
            };
            let mut source = CaseIiiAdversary::new(&penalty, eps.clone())?;
            let k_star = source.k_star();
            let t = exact_run(alg.as_mut(), &mut source, &penalty)?;
            let opt = optimal_cost_dp(&t.instance, &penalty)?;
            let ratio = competitive_ratio(&t.total_cost(), &opt.cost)?;
            let floor = Exact::one() / (Exact::from_u64(2 * k_star) * eps.clone());
            if let Ratio::Finite(r) = &ratio {
                if *r < floor {
                    return Ok(CriterionResult::new(
                        10,
                        "case-iii-unbounded",
                        false,
                        format!("{alg_name} eps={eps}: ratio {r} < 1/(2 k* eps) = {floor}"),
                    ));
                }
            }
            ratios.push(ratio);
        }
        let all_infinite = ratios.iter().all(|r| !r.is_finite());
        let strictly_increasing = ratios.windows(2).all(|w| match (&w[0], &w[1]) {
            (Ratio::Finite(a), Ratio::Finite(b)) => b > a,
            (Ratio::Finite(_), Ratio::Infinite) => true,
            (Ratio::Infinite, _) => false,
        });
        if !(all_infinite || strictly_increasing) {
            return Ok(CriterionResult::new(
                10,
                "case-iii-unbounded",
                false,
                format!("{alg_name}: ratios {ratios:?} not increasing as eps shrinks"),
            ));
        }
        lines.push(format!(
            "{alg_name}: ratios {}",
            ratios
                .iter()
                .map(|r| format!("{:.1}", r.to_f64()))
                .collect::<Vec<_>>()
                .join(" -> ")
        ));
    }
    Ok(CriterionResult::new(
        10,
        "case-iii-unbounded",
        true,
        lines.join(" | "),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 11: numeric primitives.

pub fn criterion_11() -> Result<CriterionResult> {
    for (k, expected) in [(27u64, 3.0f64), (256, 4.0), (3125, 5.0)] {
        let a = solve_alpha(k)?;
        if (a.alpha_exact - expected).abs() > 1e-12 {
            return Ok(CriterionResult::new(
                11,
                "numeric-primitives",
                false,
                format!("alpha({k}) = {} (expected {expected})", a.alpha_exact),
            ));
        }
    }
    for k in 1..=32u64 {
        for lo in 0..k {
            for hi in 0..k {
                let size = interval_size_raw(lo, hi, k);
                let formula = residue(hi as i64 - lo as i64, k)?.value + 1;
                if size != formula {
                    return Ok(CriterionResult::new(
                        11,
                        "numeric-primitives",
                        false,
                        format!("size(⟦{lo},{hi}⟧) mod {k}: {size} != {formula}"),
                    ));
                }
                for x in 0..k {
                    let by_cases = if lo <= hi {
                        lo <= x && x <= hi
                    } else {
                        x <= hi || lo <= x
                    };
                    if interval_contains_raw(lo, hi, x, k) != by_cases {
                        return Ok(CriterionResult::new(
                            11,
                            "numeric-primitives",
                            false,
                            format!("contains(⟦{lo},{hi}⟧, {x}) mod {k} disagrees"),
                        ));
                    }
                    if size < k {
                        let comp = interval_contains_raw((hi + 1) % k, (lo + k - 1) % k, x, k);
                        if !(by_cases ^ comp) {
                            return Ok(CriterionResult::new(
                                11,
                                "numeric-primitives",
                                false,
                                format!("complement overlap at ⟦{lo},{hi}⟧, {x} mod {k}"),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(CriterionResult::new(
        11,
        "numeric-primitives",
        true,
        "alpha(27)=3, alpha(256)=4, alpha(3125)=5 to 1e-12; interval identities exhaustive k<=32"
            .into(),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 12: determinism of the exact backend.

fn determinism_fixture() -> Result<Vec<String>> {
    let mut out = Vec::new();

    let k = 256u64;
    let penalty = case2_penalty(k);
    let mut alg = Recurring::new(penalty.clone(), None)?;
    let mut source = LowerBoundAdversary::new(k, None)?;
    out.push(serde_json::to_string(&exact_run(
        &mut alg,
        &mut source,
        &penalty,
    )?)?);

    let case1 = PenaltyFunction::<Exact>::always_one();
    let inst = poisson_instance(case1.clone(), 1.5, 40, 7)?;
    let mut alg = TcpAck::new();
    let mut source = FixedSource::new(&inst);
    out.push(serde_json::to_string(&exact_run(
        &mut alg,
        &mut source,
        &case1,
    )?)?);

    let ceil3 = PenaltyFunction::<Exact>::ceil_div(3).unwrap();
    let inst = poisson_instance(ceil3.clone(), 2.0, 30, 9)?;
    let mut alg = CeilDiv::new(3)?;
    let mut source = FixedSource::new(&inst);
    out.push(serde_json::to_string(&exact_run(
        &mut alg,
        &mut source,
        &ceil3,
    )?)?);

    let k = 100u64;
    let penalty = case2_penalty(k);
    let mut alg = TcpAck::new();
    let mut source = MarAdversary::new(k)?;
    out.push(serde_json::to_string(&exact_run(
        &mut alg,
        &mut source,
        &penalty,
    )?)?);

    let case3 = PenaltyFunction::<Exact>::from_zeros(&[2, 3], None).unwrap();
    let mut alg = Immediate::new();
    let mut source = CaseIiiAdversary::new(&case3, Exact::ratio(1, 1000))?;
    out.push(serde_json::to_string(&exact_run(
        &mut alg,
        &mut source,
        &case3,
    )?)?);

    Ok(out)
}

pub fn criterion_12() -> Result<CriterionResult> {
    let first = determinism_fixture()?;
    let second = determinism_fixture()?;
    let identical = first == second;
    Ok(CriterionResult::new(
        12,
        "determinism",
        identical,
        format!(
            "{} transcripts serialized twice: {}",
            first.len(),
            if identical {
                "bit-identical"
            } else {
                "MISMATCH"
            }
        ),
    ))
}

/// Run every acceptance criterion in order.
pub fn run_all() -> Result<ValidationReport> {
    let study = build_recurring_study()?;
    let criteria = vec![
        criterion_01()?,
        criterion_02()?,
        criterion_03()?,
        criterion_04()?,
        criterion_05(&study),
        criterion_06(&study),
        criterion_07(&study),
        criterion_08()?,
        criterion_09()?,
        criterion_10()?,
        criterion_11()?,
        criterion_12()?,
    ];
    Ok(ValidationReport { criteria })
}
