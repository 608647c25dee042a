//! Request sources: fixed schedules, random generators, and the three
//! adaptive adversaries.

pub mod case_iii;
pub mod fixed;
pub mod lower_bound;
pub mod mar;
pub mod poisson;

use std::path::Path;

pub use case_iii::CaseIiiAdversary;
pub use fixed::FixedSource;
pub use lower_bound::LowerBoundAdversary;
pub use mar::MarAdversary;
pub use poisson::{poisson_instance, poisson_source};

use crate::engine::instance::Instance;
use crate::engine::RequestSource;
use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;
use crate::penalty::{CaseVariant, PenaltyFunction};

/// Build a source from a spec string:
/// `fixed:<file>`, `poisson:rate,m,seed`, `case3:eps`, `mar:k`, `lb:k`.
pub fn parse_source<S: Scalar>(
    spec: &str,
    penalty: &PenaltyFunction<S>,
) -> Result<Box<dyn RequestSource<S>>> {
    let (kind, args) = match spec.split_once(':') {
        Some((k, a)) => (k, a),
        None => (spec, ""),
    };
    match kind {
        "fixed" => {
            let text = std::fs::read_to_string(Path::new(args))?;
            let instance: Instance<S> = serde_json::from_str(&text)?;
            Ok(Box::new(FixedSource::with_label(
                &instance,
                format!("fixed:{args}"),
            )))
        }
        "poisson" => {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!(
                    "poisson source needs rate,m,seed (got {args:?})"
                )));
            }
            let rate: f64 = parts[0]
                .parse()
                .map_err(|e| Error::Parse(format!("bad rate: {e}")))?;
            let m: u64 = parts[1]
                .parse()
                .map_err(|e| Error::Parse(format!("bad count: {e}")))?;
            let seed: u64 = parts[2]
                .parse()
                .map_err(|e| Error::Parse(format!("bad seed: {e}")))?;
            Ok(Box::new(poisson_source(penalty.clone(), rate, m, seed)?))
        }
        "case3" => {
            let eps = S::parse(args)?;
            Ok(Box::new(CaseIiiAdversary::new(penalty, eps)?))
        }
        "mar" => {
            let k: u64 = args
                .parse()
                .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
            Ok(Box::new(MarAdversary::new(k)?))
        }
        "lb" => {
            let k: u64 = args
                .parse()
                .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
            let class = penalty.classification()?;
            if class.variant != (CaseVariant::II { k }) {
                return Err(Error::WrongPenaltyClass {
                    expected: format!("case (ii) with k = {k}"),
                    actual: class.describe(),
                });
            }
            Ok(Box::new(LowerBoundAdversary::new(k, None)?))
        }
        other => Err(Error::Parse(format!("unknown source kind {other:?}"))),
    }
}
