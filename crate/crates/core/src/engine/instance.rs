//! Arrival schedules: the input (or adversary-generated) request sequence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;
use crate::penalty::PenaltyFunction;

/// One batch of simultaneous requests. `seq` orders events causally when
/// timestamps coincide (adversary injections get a later seq at the same
/// time).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct ArrivalEvent<S: Scalar> {
    #[serde(rename = "t")]
    pub time: S,
    pub count: u64,
    #[serde(default)]
    pub seq: u64,
}

/// A finalized arrival schedule plus the penalty it is played against.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct Instance<S: Scalar> {
    penalty: PenaltyFunction<S>,
    arrivals: Vec<ArrivalEvent<S>>,
    finalized: bool,
}

impl<S: Scalar> Instance<S> {
    pub fn arrivals(&self) -> &[ArrivalEvent<S>] {
        &self.arrivals
    }

    pub fn penalty(&self) -> &PenaltyFunction<S> {
        &self.penalty
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    /// Total request count m.
    pub fn total_requests(&self) -> u64 {
        self.arrivals.iter().map(|a| a.count).sum()
    }

    /// Multiply every arrival time by `factor`, swapping in a new penalty.
    pub fn scale_times(&self, factor: &S, penalty: PenaltyFunction<S>) -> Result<Instance<S>> {
        let arrivals = self
            .arrivals
            .iter()
            .map(|a| ArrivalEvent {
                time: a.time.clone() * factor.clone(),
                count: a.count,
                seq: a.seq,
            })
            .collect();
        Ok(Instance {
            penalty,
            arrivals,
            finalized: self.finalized,
        })
    }

    /// Convert to another backend through the serialized scalar form.
    pub fn convert<T: Scalar>(&self) -> Result<Instance<T>> {
        let penalty = PenaltyFunction::new(crate::penalty::RawPenaltyTable {
            table: self
                .penalty
                .raw()
                .table
                .iter()
                .map(|v| T::parse(&v.render()))
                .collect::<Result<_>>()?,
            tail: self.penalty.tail(),
        })?;
        let arrivals = self
            .arrivals
            .iter()
            .map(|a| {
                Ok(ArrivalEvent {
                    time: T::parse(&a.time.render())?,
                    count: a.count,
                    seq: a.seq,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Instance {
            penalty,
            arrivals,
            finalized: self.finalized,
        })
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Instance<S> {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound(deserialize = "S: Scalar"))]
        struct Raw<S: Scalar> {
            penalty: PenaltyFunction<S>,
            arrivals: Vec<ArrivalEvent<S>>,
        }
        let raw = Raw::<S>::deserialize(deserializer)?;
        let mut builder = InstanceBuilder::new(raw.penalty);
        for a in raw.arrivals {
            builder
                .push(a.time, a.count)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(builder.finalize())
    }
}

/// Builds an instance, enforcing nondecreasing times and positive counts.
pub struct InstanceBuilder<S: Scalar> {
    penalty: PenaltyFunction<S>,
    arrivals: Vec<ArrivalEvent<S>>,
}

impl<S: Scalar> InstanceBuilder<S> {
    pub fn new(penalty: PenaltyFunction<S>) -> Self {
        InstanceBuilder {
            penalty,
            arrivals: Vec::new(),
        }
    }

    pub fn push(&mut self, time: S, count: u64) -> Result<()> {
        if count == 0 {
            return Err(Error::Protocol("arrival count must be positive".into()));
        }
        if time < S::zero() {
            return Err(Error::NonMonotoneArrivals);
        }
        if let Some(last) = self.arrivals.last() {
            if time < last.time {
                return Err(Error::NonMonotoneArrivals);
            }
        }
        let seq = self.arrivals.len() as u64;
        self.arrivals.push(ArrivalEvent { time, count, seq });
        Ok(())
    }

    pub fn finalize(self) -> Instance<S> {
        Instance {
            penalty: self.penalty,
            arrivals: self.arrivals,
            finalized: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::Exact;
    use crate::penalty::PenaltyFunction;

    #[test]
    fn builder_rejects_non_monotone() {
        let mut b = InstanceBuilder::<Exact>::new(PenaltyFunction::always_one());
        b.push(Exact::from_u64(1), 1).unwrap();
        assert!(b.push(Exact::zero(), 1).is_err());
        assert!(b.push(Exact::from_u64(2), 0).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let mut b = InstanceBuilder::<Exact>::new(PenaltyFunction::from_zeros(&[2], None).unwrap());
        b.push(Exact::zero(), 2).unwrap();
        b.push(Exact::ratio(1, 2), 1).unwrap();
        let instance = b.finalize();
        let text = serde_json::to_string(&instance).unwrap();
        let back: Instance<Exact> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.total_requests(), 3);
        assert!(back.is_finalized());
        assert_eq!(back.arrivals()[1].time, Exact::ratio(1, 2));
    }
}
