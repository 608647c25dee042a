//! The k-sweep: recurring against the round adversary, the injection
//! adversary, and random schedules, with the ratio tracked against
//! log k / log log k.

use omdsc_core::adversaries::{poisson_source, LowerBoundAdversary, MarAdversary};
use omdsc_core::algorithms::{MarReference, Recurring};
use omdsc_core::engine::{run, EngineConfig, OnlineAlgorithm, RequestSource};
use omdsc_core::numerics::scalar::Scalar;
use omdsc_core::offline::optimal_cost_dp;
use omdsc_core::penalty::PenaltyFunction;
use omdsc_core::{solve_alpha, Error, Result};
use rayon::prelude::*;

use crate::output::emit;
use crate::Settings;

pub const SWEEP_COLUMNS: &str =
    "k,trial,algorithm,source,backend,requests,alg_cost,opt_cost,opt_method,ratio,alpha_used,ratio_norm";

struct Cell {
    k: u64,
    trial: u64,
    source_kind: &'static str,
}

struct Row {
    k: u64,
    trial: u64,
    algorithm: String,
    source: String,
    requests: u64,
    alg_cost: f64,
    opt_cost: f64,
    opt_method: &'static str,
    ratio: f64,
    alpha_used: f64,
    ratio_norm: f64,
}

fn log_norm(k: u64) -> f64 {
    let lk = (k as f64).ln();
    lk / lk.ln()
}

fn run_cell<S: Scalar>(cell: &Cell, seed: u64, opt_limit: u64) -> Result<Row> {
    let k = cell.k;
    let penalty: PenaltyFunction<S> = PenaltyFunction::from_zeros(&[k], None)?;
    let mut alg: Box<dyn OnlineAlgorithm<S>> = Box::new(Recurring::new(penalty.clone(), None)?);
    let mut source: Box<dyn RequestSource<S>> = match cell.source_kind {
        "lb" => Box::new(LowerBoundAdversary::new(k, None)?),
        "mar" => Box::new(MarAdversary::new(k)?),
        "poisson" => Box::new(poisson_source(
            penalty.clone(),
            k as f64 / 4.0,
            4 * k,
            seed + cell.trial,
        )?),
        other => return Err(Error::Parse(format!("unknown sweep source {other:?}"))),
    };
    let transcript = run(
        alg.as_mut(),
        source.as_mut(),
        &penalty,
        &EngineConfig::default(),
    )?;
    let requests = transcript.instance.total_requests();
    let alg_cost = transcript.total_cost().to_f64();

    let (opt_cost, opt_method) = if requests <= opt_limit {
        let sol = optimal_cost_dp(&transcript.instance, &penalty)?;
        (sol.cost.to_f64(), "dp")
    } else {
        // Replaying the trim-and-group reference schedule upper-bounds the
        // optimum when the full solve is too large.
        let mut reference = MarReference::<S>::new(k)?;
        let mut replay =
            omdsc_core::adversaries::FixedSource::new(&transcript.instance);
        let r = run(
            &mut reference,
            &mut replay,
            &penalty,
            &EngineConfig::default(),
        )?;
        (r.total_cost().to_f64(), "reference_bound")
    };

    let ratio = if opt_cost == 0.0 {
        if alg_cost == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        alg_cost / opt_cost
    };
    let alpha_used = solve_alpha(k)?.used_f64();
    Ok(Row {
        k,
        trial: cell.trial,
        algorithm: format!("recurring:{k}"),
        source: match cell.source_kind {
            "poisson" => format!("poisson:{}", seed + cell.trial),
            other => format!("{other}:{k}"),
        },
        requests,
        alg_cost,
        opt_cost,
        opt_method,
        ratio,
        alpha_used,
        ratio_norm: ratio / log_norm(k),
    })
}

pub fn cmd_sweep<S: Scalar>(
    ks: &[u64],
    trials: u64,
    opt_limit: u64,
    settings: &Settings,
) -> Result<u8> {
    let mut cells = Vec::new();
    for &k in ks {
        cells.push(Cell {
            k,
            trial: 0,
            source_kind: "lb",
        });
        cells.push(Cell {
            k,
            trial: 0,
            source_kind: "mar",
        });
        for trial in 0..trials {
            cells.push(Cell {
                k,
                trial,
                source_kind: "poisson",
            });
        }
    }
    let seed = settings.seed;
    let mut rows: Vec<Row> = cells
        .par_iter()
        .map(|cell| run_cell::<S>(cell, seed, opt_limit))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        (a.k, a.source.clone(), a.trial).cmp(&(b.k, b.source.clone(), b.trial))
    });

    let mut text = String::from(SWEEP_COLUMNS);
    text.push('\n');
    for r in &rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{:.6},{},{:.6},{:.6},{:.6}\n",
            r.k,
            r.trial,
            r.algorithm,
            r.source,
            S::BACKEND,
            r.requests,
            r.alg_cost,
            r.opt_cost,
            r.opt_method,
            r.ratio,
            r.alpha_used,
            r.ratio_norm
        ));
    }
    emit(settings.out.as_deref(), text.trim_end())?;
    Ok(0)
}
