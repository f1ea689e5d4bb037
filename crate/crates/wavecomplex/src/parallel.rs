//! Row-parallel selection and sweep drivers. Rows share nothing, and results
//! are collected in input order, so output does not depend on thread count.

use rayon::prelude::*;
use rayon::ThreadPool;
use wavecomplex_core::dwt::Wavelet;
use wavecomplex_core::orchestrate::{
    evaluate_candidate, rank_selection, sweep_grid, sweep_point, Selection, SelectionConfig, SweepConfig, SweepRow,
};
use wavecomplex_core::{Error, Signal};

use crate::error::CliError;

pub const THREADS_ENV: &str = "WAVECOMPLEX_THREADS";

/// Pool sized by `WAVECOMPLEX_THREADS` (all cores when unset).
pub fn thread_pool() -> Result<ThreadPool, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

pub fn select(
    pool: &ThreadPool,
    signal: &Signal,
    candidates: &[Wavelet],
    cfg: &SelectionConfig,
    clean: Option<&Signal>,
) -> Result<Selection, Error> {
    if candidates.is_empty() {
        return Err(Error::InvalidConfig("no candidate wavelets"));
    }
    signal.dyadic_levels()?;
    if let Some(clean) = clean {
        if clean.len() != signal.len() {
            return Err(Error::LengthMismatch { left: signal.len(), right: clean.len() });
        }
    }
    let rows = pool.install(|| candidates.par_iter().map(|&w| evaluate_candidate(signal, w, cfg, clean)).collect());
    Ok(rank_selection(rows))
}

pub fn sweep(pool: &ThreadPool, r_min: f64, r_max: f64, step: f64, cfg: &SweepConfig) -> Result<Vec<SweepRow>, Error> {
    let grid = sweep_grid(r_min, r_max, step)?;
    Ok(pool.install(|| grid.par_iter().map(|&r| sweep_point(r, cfg)).collect()))
}
