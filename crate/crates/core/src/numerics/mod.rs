//! Scalar arithmetic, residues mod k, cyclic intervals, and the alpha solver.

pub mod alpha;
pub mod residue;
pub mod scalar;

pub use alpha::{solve_alpha, AlphaParam};
pub use residue::{
    interval_contains_raw, interval_size_raw, residue, wrap, wrap_add, wrap_sub, CyclicInterval,
    Residue,
};
pub use scalar::{competitive_ratio, Backend, Exact, Ratio, Scalar, F64};
