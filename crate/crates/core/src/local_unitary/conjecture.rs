//! Random-ensemble comparison of the optimized Γ against the concurrence.

use rayon::prelude::*;
use serde::Serialize;

use super::optimize::{maximize_gamma, OptimizerOptions};
use crate::measures::{concurrence_general, i_concurrence, MeasureConfig};
use crate::rng::derive_seed;
use crate::states::random_pure;
use crate::tensor::BipartiteDims;

/// Margin above the Schmidt benchmark that counts as an optimizer overshoot.
pub const OVERSHOOT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureRow {
    pub dims: String,
    pub trial: usize,
    pub state_seed: u64,
    pub i_concurrence: f64,
    /// `concurrence_general(ψ, n2)`: the concurrence on the same scale as Γ.
    /// Equals `i_concurrence` when `n2 = 4`.
    pub concurrence: f64,
    pub gamma_schmidt: f64,
    pub gamma_sup: f64,
    /// `|gamma_sup − concurrence|`
    pub deviation: f64,
    pub overshoot: bool,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureSummary {
    pub dims: String,
    pub trials: usize,
    pub max_deviation: f64,
    pub overshoots: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub rows: Vec<ConjectureRow>,
    pub summaries: Vec<ConjectureSummary>,
}

impl ConjectureReport {
    pub fn max_deviation(&self) -> f64 {
        self.summaries.iter().map(|s| s.max_deviation).fold(0.0, f64::max)
    }

    pub fn overshoots(&self) -> usize {
        self.summaries.iter().map(|s| s.overshoots).sum()
    }
}

/// For each dims and trial, draws a random pure state and compares the
/// optimized Γ with the concurrence at the same normalization.
///
/// State seeds are `derive_seed(seed, [dims_index, trial])`; the optimizer
/// seed for each trial is derived from the state seed.
pub fn conjecture_sweep(
    dims_list: &[BipartiteDims],
    trials: usize,
    seed: u64,
    cfg: &MeasureConfig,
    opts: &OptimizerOptions,
) -> ConjectureReport {
    let jobs: Vec<(usize, BipartiteDims, usize)> = dims_list
        .iter()
        .enumerate()
        .flat_map(|(di, &d)| (0..trials).map(move |t| (di, d, t)))
        .collect();

    let rows: Vec<ConjectureRow> = jobs
        .par_iter()
        .map(|&(di, dims, trial)| {
            let state_seed = derive_seed(seed, &[di as u64, trial as u64]);
            let psi = random_pure(dims, state_seed);
            let trial_opts = OptimizerOptions {
                seed: derive_seed(state_seed, &[u64::MAX]),
                parallel: false,
                ..opts.clone()
            };
            let rep = maximize_gamma(&psi, cfg, &trial_opts);
            let concurrence = concurrence_general(&psi, cfg.n2);
            let gamma_schmidt = rep.schmidt_gamma.expect("pure input");
            ConjectureRow {
                dims: dims.to_string(),
                trial,
                state_seed,
                i_concurrence: i_concurrence(&psi),
                concurrence,
                gamma_schmidt,
                gamma_sup: rep.best_gamma,
                deviation: (rep.best_gamma - concurrence).abs(),
                overshoot: rep.best_gamma > gamma_schmidt + OVERSHOOT_MARGIN,
                converged: rep.converged,
            }
        })
        .collect();

    let summaries = dims_list
        .iter()
        .map(|d| {
            let name = d.to_string();
            let mine: Vec<&ConjectureRow> = rows.iter().filter(|r| r.dims == name).collect();
            ConjectureSummary {
                trials: mine.len(),
                max_deviation: mine.iter().map(|r| r.deviation).fold(0.0, f64::max),
                overshoots: mine.iter().filter(|r| r.overshoot).count(),
                dims: name,
            }
        })
        .collect();

    ConjectureReport { rows, summaries }
}
