//! The threshold parameter alpha with alpha^alpha = k.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;

/// Denominator grid for the rationalized alpha: multiples of 2^-20.
pub const ALPHA_GRID_LOG2: u32 = 20;

/// Solution of alpha^alpha = k, plus the rationalized value the algorithms
/// actually use.
///
/// `alpha_used` is `max(alpha_exact, 4)` rounded up to a multiple of 2^-20,
/// so it is an exact rational with `alpha_used >= 4` and
/// `alpha_used^alpha_used >= k`. Using a slightly larger alpha only loosens
/// the O(alpha) cost bounds, while keeping every threshold `l/alpha` exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaParam {
    pub k: u64,
    pub alpha_exact: f64,
    /// Numerator of alpha_used over 2^20.
    pub used_num: u64,
}

impl AlphaParam {
    pub fn used<S: Scalar>(&self) -> S {
        S::ratio(self.used_num as i64, 1u64 << ALPHA_GRID_LOG2)
    }

    pub fn used_f64(&self) -> f64 {
        self.used_num as f64 / (1u64 << ALPHA_GRID_LOG2) as f64
    }
}

/// Solve alpha * ln(alpha) = ln(k) by bisection to |delta| <= 1e-12, then
/// rationalize upward with a floor at 4.
pub fn solve_alpha(k: u64) -> Result<AlphaParam> {
    if k < 2 {
        return Err(Error::AlphaDomain { k });
    }
    let ln_k = (k as f64).ln();
    let g = |a: f64| a * a.ln() - ln_k;
    let mut lo = 1.0f64;
    let mut hi = (k as f64).log2().max(4.0) + 1.0;
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha_exact = 0.5 * (lo + hi);

    let scale = (1u64 << ALPHA_GRID_LOG2) as f64;
    let floored = alpha_exact.max(4.0);
    // Subtract the bisection tolerance before rounding up so values that are
    // exactly representable (e.g. alpha = 4 for k = 256) stay exact.
    let mut used_num = ((floored - 1e-9) * scale).ceil() as u64;
    while {
        let a = used_num as f64 / scale;
        a.powf(a) < k as f64 - 1e-9
    } {
        used_num += 1;
    }
    let param = AlphaParam {
        k,
        alpha_exact,
        used_num,
    };
    debug_assert!(param.used_f64() >= 4.0);
    debug_assert!(param.used_f64() >= alpha_exact - 1e-9);
    Ok(param)
}
