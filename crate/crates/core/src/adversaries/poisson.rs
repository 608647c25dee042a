//! Random benchmark instances: single arrivals at exponential gaps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::adversaries::fixed::FixedSource;
use crate::engine::instance::{Instance, InstanceBuilder};
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;
use crate::penalty::PenaltyFunction;

/// Times are rounded to the 2^-30 grid so exact runs stay rational and
/// float/exact runs see the same schedule for the same seed.
pub const TIME_GRID_LOG2: u32 = 30;

/// Deterministic-per-seed Poisson arrival schedule: `m` single requests.
pub fn poisson_instance<S: Scalar>(
    penalty: PenaltyFunction<S>,
    rate: f64,
    m: u64,
    seed: u64,
) -> Result<Instance<S>> {
    if !(rate > 0.0) {
        return Err(Error::DegenerateParameters("rate must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exp = Exp::new(rate).expect("positive rate");
    let mut builder = InstanceBuilder::new(penalty);
    let mut t = 0.0f64;
    for _ in 0..m {
        t += exp.sample(&mut rng);
        builder.push(S::from_f64_grid(t, TIME_GRID_LOG2), 1)?;
    }
    Ok(builder.finalize())
}

pub fn poisson_source<S: Scalar>(
    penalty: PenaltyFunction<S>,
    rate: f64,
    m: u64,
    seed: u64,
) -> Result<FixedSource<S>> {
    let instance = poisson_instance(penalty, rate, m, seed)?;
    Ok(FixedSource::with_label(
        &instance,
        format!("poisson:{rate},{m},{seed}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::Exact;

    #[test]
    fn deterministic_per_seed() {
        let p = PenaltyFunction::<Exact>::always_one();
        let a = poisson_instance(p.clone(), 2.0, 20, 7).unwrap();
        let b = poisson_instance(p.clone(), 2.0, 20, 7).unwrap();
        let c = poisson_instance(p, 2.0, 20, 8).unwrap();
        let times = |i: &Instance<Exact>| {
            i.arrivals()
                .iter()
                .map(|a| a.time.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(times(&a), times(&b));
        assert_ne!(times(&a), times(&c));
    }

    #[test]
    fn empty_schedule() {
        let p = PenaltyFunction::<Exact>::always_one();
        let i = poisson_instance(p, 1.0, 0, 0).unwrap();
        assert_eq!(i.total_requests(), 0);
    }

    #[test]
    fn mean_gap_close_to_inverse_rate() {
        let p = PenaltyFunction::<Exact>::always_one();
        let m = 10_000u64;
        let rate = 4.0;
        let i = poisson_instance(p, rate, m, 123).unwrap();
        let last = i.arrivals().last().unwrap().time.to_f64();
        let mean_gap = last / m as f64;
        let expected = 1.0 / rate;
        assert!(
            (mean_gap - expected).abs() <= 0.05 * expected,
            "mean gap {mean_gap} vs {expected}"
        );
    }
}
