//! End-to-end engine behavior: cost accounting, termination, causality of
//! same-timestamp injections, and determinism.

use omdsc_core::adversaries::{poisson_instance, FixedSource, MarAdversary};
use omdsc_core::algorithms::{Immediate, TcpAck};
use omdsc_core::engine::{run, EngineConfig, InstanceBuilder};
use omdsc_core::numerics::scalar::{Exact, Scalar};
use omdsc_core::penalty::PenaltyFunction;
use omdsc_core::{competitive_ratio, offline, Ratio};

fn fixed_run(
    alg: &mut dyn omdsc_core::OnlineAlgorithm<Exact>,
    penalty: &PenaltyFunction<Exact>,
    arrivals: &[(Exact, u64)],
) -> omdsc_core::Transcript<Exact> {
    let mut b = InstanceBuilder::new(penalty.clone());
    for (t, c) in arrivals {
        b.push(t.clone(), *c).unwrap();
    }
    let instance = b.finalize();
    let mut source = FixedSource::new(&instance);
    run(alg, &mut source, penalty, &EngineConfig::default()).unwrap()
}

#[test]
fn immediate_on_linear_penalty() {
    let penalty = PenaltyFunction::<Exact>::linear();
    let mut alg = Immediate::new();
    let t = fixed_run(
        &mut alg,
        &penalty,
        &[(Exact::zero(), 1), (Exact::one(), 1)],
    );
    assert_eq!(t.matches.len(), 2);
    assert!(t.matches.iter().all(|m| m.size == 1));
    assert_eq!(t.ledger.waiting_cost_total, Exact::zero());
    assert_eq!(t.ledger.size_cost_total, Exact::from_u64(2));
    assert_eq!(t.termination, omdsc_core::engine::Termination::Normal);

    // Burst of three: size cost 3, no waiting.
    let mut alg = Immediate::new();
    let t = fixed_run(&mut alg, &penalty, &[(Exact::zero(), 3)]);
    assert_eq!(t.ledger.size_cost_total, Exact::from_u64(3));
    assert_eq!(t.ledger.waiting_cost_total, Exact::zero());
}

#[test]
fn immediate_free_when_singletons_are_free() {
    let penalty = PenaltyFunction::<Exact>::from_zeros(&[1], None).unwrap();
    let mut alg = Immediate::new();
    let t = fixed_run(
        &mut alg,
        &penalty,
        &[(Exact::zero(), 2), (Exact::ratio(3, 2), 1)],
    );
    assert_eq!(t.total_cost(), Exact::zero());
}

#[test]
fn empty_instance_is_empty_transcript() {
    let penalty = PenaltyFunction::<Exact>::always_one();
    let mut alg = Immediate::new();
    let t = fixed_run(&mut alg, &penalty, &[]);
    assert!(t.matches.is_empty());
    assert_eq!(t.total_cost(), Exact::zero());
    assert_eq!(t.termination, omdsc_core::engine::Termination::Normal);
    let r = competitive_ratio(&t.total_cost(), &Exact::zero()).unwrap();
    assert_eq!(r, Ratio::Finite(Exact::one()));
}

#[test]
fn ack_rule_single_request() {
    // One request at 0 under the constant penalty: matched at t=1, size 1
    // plus waiting 1; the offline optimum pays 1, so the ratio is exactly 2.
    let penalty = PenaltyFunction::<Exact>::always_one();
    let mut alg = TcpAck::new();
    let t = fixed_run(&mut alg, &penalty, &[(Exact::zero(), 1)]);
    assert_eq!(t.matches.len(), 1);
    assert_eq!(t.matches[0].time, Exact::one());
    assert_eq!(t.ledger.size_cost_total, Exact::one());
    assert_eq!(t.ledger.waiting_cost_total, Exact::one());
    let opt = offline::optimal_cost_dp(&t.instance, &penalty).unwrap();
    assert_eq!(opt.cost, Exact::one());
    let ratio = competitive_ratio(&t.total_cost(), &opt.cost).unwrap();
    assert_eq!(ratio, Ratio::Finite(Exact::from_u64(2)));
}

#[test]
fn ack_rule_two_simultaneous_requests() {
    // Two requests at 0: waiting rate 2, so the flush happens at t=1/2.
    let penalty = PenaltyFunction::<Exact>::always_one();
    let mut alg = TcpAck::new();
    let t = fixed_run(&mut alg, &penalty, &[(Exact::zero(), 2)]);
    assert_eq!(t.matches.len(), 1);
    assert_eq!(t.matches[0].time, Exact::ratio(1, 2));
    assert_eq!(t.total_cost(), Exact::from_u64(2));
}

#[test]
fn waiting_cost_conservation() {
    // The continuous integral and the per-match sums agree exactly.
    let penalty = PenaltyFunction::<Exact>::always_one();
    for seed in 0..10u64 {
        let instance = poisson_instance(penalty.clone(), 1.5, 30, seed).unwrap();
        let mut alg = TcpAck::new();
        let mut source = FixedSource::new(&instance);
        let t = run(&mut alg, &mut source, &penalty, &EngineConfig::default()).unwrap();
        assert_eq!(t.termination, omdsc_core::engine::Termination::Normal);
        assert_eq!(
            t.ledger.waiting_cost_total, t.diagnostics.match_waiting_total,
            "seed {seed}"
        );
        assert_eq!(t.matched_requests(), instance.total_requests());
    }
}

#[test]
fn injections_are_same_timestamp_later_seq() {
    let k = 5u64;
    let penalty = PenaltyFunction::<Exact>::from_zeros(&[k], None).unwrap();
    let mut alg = TcpAck::new();
    let mut source = MarAdversary::<Exact>::new(k).unwrap();
    let t = run(&mut alg, &mut source, &penalty, &EngineConfig::default()).unwrap();
    let arrivals = t.instance.arrivals();
    // Sequence numbers are strictly increasing and time-sorted.
    for w in arrivals.windows(2) {
        assert!(w[0].seq < w[1].seq);
        assert!(w[0].time <= w[1].time);
    }
    // Each injection shares its timestamp with the match that caused it.
    let mut injection_times: Vec<&Exact> = arrivals[1..].iter().map(|a| &a.time).collect();
    injection_times.sort_by(|a, b| a.cmp2(b));
    let match_times: Vec<&Exact> = t
        .matches
        .iter()
        .filter(|m| m.time < Exact::one())
        .map(|m| &m.time)
        .collect();
    assert_eq!(injection_times.len(), match_times.len());
    for (i, m) in injection_times.iter().zip(match_times.iter()) {
        assert_eq!(i, m);
    }
    // Total arrivals = (a + 1)(k - 1) with a = matches strictly before 1.
    let a = t.matches_before(&Exact::one());
    assert_eq!(t.instance.total_requests(), (a + 1) * (k - 1));
}

#[test]
fn horizon_flush_is_flagged() {
    let penalty = PenaltyFunction::<Exact>::always_one();
    let mut b = InstanceBuilder::new(penalty.clone());
    b.push(Exact::zero(), 3).unwrap();
    let instance = b.finalize();
    let mut alg = TcpAck::new();
    let mut source = FixedSource::new(&instance);
    let config = EngineConfig {
        horizon_time: Some(Exact::ratio(1, 10)),
        ..EngineConfig::default()
    };
    let t = run(&mut alg, &mut source, &penalty, &config).unwrap();
    assert_eq!(t.termination, omdsc_core::engine::Termination::HorizonFlush);
    assert_eq!(t.matches.len(), 1);
    assert_eq!(t.matches[0].tag, "horizon_flush");
    assert_eq!(t.matched_requests(), 3);
    // Waiting accrued up to the horizon: 3 requests for 1/10.
    assert_eq!(t.ledger.waiting_cost_total, Exact::ratio(3, 10));
}

#[test]
fn transcripts_are_bit_identical_across_runs() {
    let penalty = PenaltyFunction::<Exact>::from_zeros(&[4], None).unwrap();
    let render = || {
        let instance = poisson_instance(penalty.clone(), 2.0, 25, 42).unwrap();
        let mut alg = TcpAck::new();
        let mut source = FixedSource::new(&instance);
        let t = run(&mut alg, &mut source, &penalty, &EngineConfig::default()).unwrap();
        serde_json::to_string(&t).unwrap()
    };
    assert_eq!(render(), render());
}
