//! Penalty specs: short inline forms or a JSON file path.

use omdsc_core::numerics::scalar::Scalar;
use omdsc_core::penalty::{PenaltyFunction, RawPenaltyTable};
use omdsc_core::{Error, Result};

/// `case1` (constant 1), `case2:K` (free exactly on multiples of K),
/// `zeros:A,B,...` (free at the listed sizes), `ceil_div:K`, `linear`,
/// or a path to a penalty JSON file {"table": [...], "tail": ...}.
pub fn load_penalty<S: Scalar>(spec: &str) -> Result<PenaltyFunction<S>> {
    if spec == "case1" {
        return Ok(PenaltyFunction::always_one());
    }
    if spec == "linear" {
        return Ok(PenaltyFunction::linear());
    }
    if let Some(args) = spec.strip_prefix("case2:") {
        let k: u64 = args
            .parse()
            .map_err(|e| Error::Parse(format!("bad k in {spec:?}: {e}")))?;
        return PenaltyFunction::from_zeros(&[k], None);
    }
    if let Some(args) = spec.strip_prefix("zeros:") {
        let zeros: Vec<u64> = args
            .split(',')
            .map(|z| {
                z.parse()
                    .map_err(|e| Error::Parse(format!("bad zero size {z:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        return PenaltyFunction::from_zeros(&zeros, None);
    }
    if let Some(args) = spec.strip_prefix("ceil_div:") {
        let k: u64 = args
            .parse()
            .map_err(|e| Error::Parse(format!("bad k in {spec:?}: {e}")))?;
        return PenaltyFunction::ceil_div(k);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Parse(format!("penalty spec {spec:?} is not inline and not a readable file: {e}")))?;
    let raw: RawPenaltyTable<S> = serde_json::from_str(&text)?;
    PenaltyFunction::new(raw)
}
