use alloc::vec::Vec;

use super::{e_step, init_params_for_restart, m_step, FitConfig, HmtParams, Posteriors};
use crate::dwt::WaveletTree;
use crate::error::Result;

/// Outcome of [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: HmtParams,
    /// Posteriors of `params` on the fitted tree.
    pub posteriors: Posteriors,
    /// Log-likelihood of the initial parameters followed by that of every
    /// M-step's output, for the winning restart.
    pub trace: Vec<f64>,
    /// Index of the winning restart.
    pub restart: usize,
}

impl FitResult {
    pub fn log_likelihood(&self) -> f64 {
        self.posteriors.log_likelihood()
    }

    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }
}

/// Runs EM from `cfg.restarts` starting points and keeps the most likely fit.
///
/// Each run alternates M- and E-steps until the relative change of the
/// log-likelihood falls below `rel_tol` or `max_iter` M-steps have been taken.
/// Ties go to the earliest restart. States are finally reordered by their
/// variance at the finest scale, so the last state is always the large one.
pub fn fit(tree: &WaveletTree, cfg: &FitConfig) -> Result<FitResult> {
    cfg.validate()?;
    let mut best: Option<FitResult> = None;
    for restart in 0..cfg.restarts {
        let run = fit_once(tree, cfg, restart)?;
        if best.as_ref().map_or(true, |b| run.log_likelihood() > b.log_likelihood()) {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one restart");

    let finest = best.params.variances(best.params.levels() - 1);
    let mut order: Vec<usize> = (0..finest.len()).collect();
    order.sort_by(|&a, &b| finest[a].total_cmp(&finest[b]));
    if order.iter().enumerate().any(|(rank, &s)| rank != s) {
        let mut perm = alloc::vec![0; order.len()];
        for (rank, &s) in order.iter().enumerate() {
            perm[s] = rank;
        }
        best.params = best.params.permuted(&perm);
        best.posteriors = best.posteriors.permuted(&perm);
    }
    Ok(best)
}

fn fit_once(tree: &WaveletTree, cfg: &FitConfig, restart: usize) -> Result<FitResult> {
    let mut params = init_params_for_restart(tree, cfg, restart)?;
    let mut posteriors = e_step(tree, &params)?;
    let mut trace = alloc::vec![posteriors.log_likelihood()];
    for _ in 0..cfg.max_iter {
        params = m_step(tree, &posteriors, cfg)?;
        posteriors = e_step(tree, &params)?;
        let (prev, cur) = (trace[trace.len() - 1], posteriors.log_likelihood());
        trace.push(cur);
        let scale = prev.abs().max(f64::MIN_POSITIVE);
        if (cur - prev).abs() / scale < cfg.rel_tol {
            break;
        }
    }
    Ok(FitResult { params, posteriors, trace, restart })
}
