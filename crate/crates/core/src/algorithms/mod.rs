//! Online algorithms under test.

pub mod ceil_div;
pub mod immediate;
pub mod mar_reference;
pub mod recurring;
pub mod tcp_ack;

pub use ceil_div::CeilDiv;
pub use immediate::Immediate;
pub use mar_reference::{isqrt, MarReference};
pub use recurring::Recurring;
pub use tcp_ack::TcpAck;

use crate::engine::OnlineAlgorithm;
use crate::error::{Error, Result};
use crate::numerics::alpha::{AlphaParam, ALPHA_GRID_LOG2};
use crate::numerics::scalar::Scalar;
use crate::penalty::PenaltyFunction;

/// Build an algorithm from a spec string:
/// `immediate`, `tcp_ack`, `ceil_div:k`, `mar_ref:k`, `recurring:k[,alpha=p/q]`.
pub fn parse_algorithm<S: Scalar>(
    spec: &str,
    penalty: &PenaltyFunction<S>,
) -> Result<Box<dyn OnlineAlgorithm<S>>> {
    let (kind, args) = match spec.split_once(':') {
        Some((k, a)) => (k, a),
        None => (spec, ""),
    };
    match kind {
        "immediate" => Ok(Box::new(Immediate::new())),
        "tcp_ack" => Ok(Box::new(TcpAck::<S>::new())),
        "ceil_div" => {
            let k: u64 = args
                .parse()
                .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
            Ok(Box::new(CeilDiv::<S>::new(k)?))
        }
        "mar_ref" => {
            let k: u64 = args
                .parse()
                .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
            Ok(Box::new(MarReference::<S>::new(k)?))
        }
        "recurring" => {
            let mut parts = args.split(',');
            let k: u64 = parts
                .next()
                .unwrap_or("")
                .parse()
                .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
            let mut alpha = None;
            for extra in parts {
                match extra.split_once('=') {
                    Some(("alpha", value)) => {
                        alpha = Some(parse_alpha_override(k, value)?);
                    }
                    _ => {
                        return Err(Error::Parse(format!(
                            "unknown recurring option {extra:?}"
                        )))
                    }
                }
            }
            let alg = Recurring::<S>::new(penalty.clone(), alpha)?;
            if alg.name() != format!("recurring:{k}") {
                return Err(Error::WrongPenaltyClass {
                    expected: format!("case (ii) with k = {k}"),
                    actual: alg.name(),
                });
            }
            Ok(Box::new(alg))
        }
        other => Err(Error::Parse(format!("unknown algorithm kind {other:?}"))),
    }
}

/// Parse an explicit alpha "p/q" onto the 2^-20 grid (rounded up).
fn parse_alpha_override(k: u64, value: &str) -> Result<AlphaParam> {
    let (p, q) = match value.split_once('/') {
        Some((p, q)) => (
            p.parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad alpha numerator: {e}")))?,
            q.parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad alpha denominator: {e}")))?,
        ),
        None => (
            value
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad alpha: {e}")))?,
            1,
        ),
    };
    if q == 0 {
        return Err(Error::Parse("alpha denominator is zero".into()));
    }
    let grid = 1u128 << ALPHA_GRID_LOG2;
    let used_num = ((p as u128 * grid).div_ceil(q as u128)) as u64;
    Ok(AlphaParam {
        k,
        alpha_exact: crate::numerics::alpha::solve_alpha(k)?.alpha_exact,
        used_num,
    })
}
