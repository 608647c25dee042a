//! Report types and the stdout/file sink.

use std::path::Path;

use omdsc_core::engine::Transcript;
use omdsc_core::numerics::scalar::{Backend, Ratio, Scalar};
use omdsc_core::Result;
use serde::Serialize;

#[derive(Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct DuelReport<S: Scalar> {
    pub algorithm: String,
    pub source: String,
    pub backend: Backend,
    pub requests: u64,
    pub alg_cost: S,
    pub opt_cost: Option<S>,
    pub ratio: Option<Ratio<S>>,
    pub final_round: Option<u64>,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub transcript: Transcript<S>,
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}
