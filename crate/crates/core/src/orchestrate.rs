//! Experiment drivers: optimal-wavelet selection and logistic-map sweeps.
//!
//! Rows are computed independently of one another, so callers may evaluate
//! them in any order (or concurrently) and assemble the result with
//! [`rank_selection`] / by sorting on `r`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::complexity::ComplexityReport;
use crate::denoise::{residual_energy_density, shrink_tree};
use crate::dwt::{forward, inverse, Wavelet};
use crate::error::{Error, Result};
use crate::hmt::{fit, FitConfig, HmtParams};
use crate::signalgen::{logistic_series, Signal};

/// SplitMix64 finalizer over `seed ^ key`, used to derive independent seeds.
pub fn mix_seed(seed: u64, key: u64) -> u64 {
    let mut z = seed ^ key.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "error")]
pub enum RowStatus {
    Ok,
    Failed(String),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RowStatus::Ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub fit: FitConfig,
    /// Noise power assumed by the shrinkage step (used only with a clean reference).
    pub noise_variance: f64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig { fit: FitConfig::default(), noise_variance: 1.0 }
    }
}

/// One candidate wavelet's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRow {
    pub wavelet: Wavelet,
    /// `NaN` when the row failed.
    pub global_c_norm: f64,
    /// Only with a clean reference.
    pub residual_energy_density: Option<f64>,
    pub report: Option<ComplexityReport>,
    pub model: Option<HmtParams>,
    pub log_likelihood: f64,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Rows sorted by decreasing `global_c_norm`, failed rows last; ties keep
    /// candidate order.
    pub rows: Vec<SelectionRow>,
    pub winner: Option<Wavelet>,
}

/// Fits the tree model for one wavelet and scores it; with a clean reference
/// the same fit also drives the denoiser.
pub fn evaluate_candidate(
    signal: &Signal,
    wavelet: Wavelet,
    cfg: &SelectionConfig,
    clean: Option<&Signal>,
) -> SelectionRow {
    let attempt = || -> Result<SelectionRow> {
        let bank = wavelet.bank();
        let tree = forward(signal, &bank)?;
        let fitted = fit(&tree, &cfg.fit)?;
        let report = ComplexityReport::from_params(&fitted.params);
        let residual = match clean {
            Some(clean) => {
                let shrunk = shrink_tree(&tree, &fitted.params, &fitted.posteriors, cfg.noise_variance)?;
                Some(residual_energy_density(&inverse(&shrunk, &bank)?, clean)?)
            }
            None => None,
        };
        Ok(SelectionRow {
            wavelet,
            global_c_norm: report.global_c_norm,
            residual_energy_density: residual,
            log_likelihood: fitted.log_likelihood(),
            report: Some(report),
            model: Some(fitted.params),
            status: RowStatus::Ok,
        })
    };
    attempt().unwrap_or_else(|e| SelectionRow {
        wavelet,
        global_c_norm: f64::NAN,
        residual_energy_density: None,
        report: None,
        model: None,
        log_likelihood: f64::NAN,
        status: RowStatus::Failed(e.to_string()),
    })
}

/// Orders evaluated rows (given in candidate order) and picks the winner.
pub fn rank_selection(mut rows: Vec<SelectionRow>) -> Selection {
    rows.sort_by(|a, b| match (a.status.is_ok(), b.status.is_ok()) {
        (true, true) => b.global_c_norm.total_cmp(&a.global_c_norm),
        (true, false) => core::cmp::Ordering::Less,
        (false, true) => core::cmp::Ordering::Greater,
        (false, false) => core::cmp::Ordering::Equal,
    });
    let winner = rows.first().filter(|r| r.status.is_ok()).map(|r| r.wavelet);
    Selection { rows, winner }
}

/// Picks the candidate whose fitted tree has the largest normalized global
/// complexity.
pub fn select_wavelet(
    signal: &Signal,
    candidates: &[Wavelet],
    cfg: &SelectionConfig,
    clean: Option<&Signal>,
) -> Result<Selection> {
    if candidates.is_empty() {
        return Err(Error::InvalidConfig("no candidate wavelets"));
    }
    signal.dyadic_levels()?;
    if let Some(clean) = clean {
        if clean.len() != signal.len() {
            return Err(Error::LengthMismatch { left: signal.len(), right: clean.len() });
        }
    }
    let rows = candidates.iter().map(|&w| evaluate_candidate(signal, w, cfg, clean)).collect();
    Ok(rank_selection(rows))
}

/// Logistic-map sweep settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub wavelet: Wavelet,
    /// Series length is `2^levels`.
    pub levels: usize,
    pub burn_in: usize,
    pub x0: f64,
    /// `fit.seed` is the master seed; each row derives its own from it and `r`.
    pub fit: FitConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            wavelet: Wavelet::Bior1_3,
            levels: 12,
            burn_in: 1000,
            x0: 0.4,
            fit: FitConfig { restarts: 1, max_iter: 200, rel_tol: 1e-6, ..FitConfig::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    pub global_c_norm: f64,
    pub entropy_rate_norm: f64,
    pub monotone_run: usize,
    pub status: RowStatus,
}

/// Evenly spaced parameters `r_min, r_min + step, …` not exceeding `r_max`
/// (rounded to 10 decimals so the grid prints cleanly).
pub fn sweep_grid(r_min: f64, r_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..=4.0).contains(&r_min) || !(r_min < r_max && r_max <= 4.0) {
        return Err(Error::Domain { what: "sweep range", value: r_max });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain { what: "sweep step", value: step });
    }
    let count = libm::floor((r_max - r_min) / step + 1e-9) as usize + 1;
    Ok((0..count)
        .map(|i| libm::round((r_min + i as f64 * step) * 1e10) / 1e10)
        .filter(|&r| r <= r_max)
        .collect())
}

/// Complexity and entropy rate of the logistic orbit at one `r`.
pub fn sweep_point(r: f64, cfg: &SweepConfig) -> SweepRow {
    let attempt = || -> Result<ComplexityReport> {
        let n = 1usize
            .checked_shl(cfg.levels as u32)
            .filter(|_| cfg.levels >= 2 && cfg.levels < 31)
            .ok_or(Error::InvalidConfig("levels must be in 2..31"))?;
        let series = logistic_series(r, cfg.x0, n, cfg.burn_in)?;
        let tree = forward(&series, &cfg.wavelet.bank())?;
        let fit_cfg = FitConfig { seed: mix_seed(cfg.fit.seed, r.to_bits()), ..cfg.fit.clone() };
        let fitted = fit(&tree, &fit_cfg)?;
        Ok(ComplexityReport::from_params(&fitted.params))
    };
    match attempt() {
        Ok(rep) => SweepRow {
            r,
            global_c_norm: rep.global_c_norm,
            entropy_rate_norm: rep.entropy_rate_norm,
            monotone_run: rep.monotone_run,
            status: RowStatus::Ok,
        },
        Err(e) => SweepRow {
            r,
            global_c_norm: f64::NAN,
            entropy_rate_norm: f64::NAN,
            monotone_run: 0,
            status: RowStatus::Failed(e.to_string()),
        },
    }
}

/// Sequential sweep over `[r_min, r_max]`.
pub fn sweep_logistic(r_min: f64, r_max: f64, step: f64, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    Ok(sweep_grid(r_min, r_max, step)?.into_iter().map(|r| sweep_point(r, cfg)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signalgen::{add_wgn, lorenz_series, LorenzComponent, LorenzConfig};

    #[test]
    fn grid_shape() {
        let g = sweep_grid(3.4, 3.7, 0.001).unwrap();
        assert_eq!(g.len(), 301);
        assert_eq!(g[0], 3.4);
        assert_eq!(g[300], 3.7);
        assert_eq!(g[1], 3.401);
        assert!(sweep_grid(3.7, 3.4, 0.1).is_err());
        assert!(sweep_grid(3.0, 4.5, 0.1).is_err());
        assert!(sweep_grid(3.0, 3.5, 0.0).is_err());
    }

    #[test]
    fn seeds_differ_per_key() {
        assert_ne!(mix_seed(1, 2), mix_seed(1, 3));
        assert_ne!(mix_seed(1, 2), mix_seed(2, 2));
        assert_eq!(mix_seed(7, 7), mix_seed(7, 7));
    }

    #[test]
    fn single_candidate_wins() {
        let clean = lorenz_series(&LorenzConfig { n: 512, ..Default::default() }, LorenzComponent::Y).unwrap();
        let noisy = add_wgn(&clean, 1.0, 1).unwrap();
        let sel = select_wavelet(&noisy, &[Wavelet::Sym3], &SelectionConfig::default(), Some(&clean)).unwrap();
        assert_eq!(sel.winner, Some(Wavelet::Sym3));
        assert_eq!(sel.rows.len(), 1);
        assert!(sel.rows[0].residual_energy_density.is_some());
    }

    #[test]
    fn selection_is_deterministic_and_ranked() {
        let clean = lorenz_series(&LorenzConfig { n: 512, ..Default::default() }, LorenzComponent::Y).unwrap();
        let noisy = add_wgn(&clean, 1.0, 2).unwrap();
        let cfg = SelectionConfig::default();
        let a = select_wavelet(&noisy, &Wavelet::ALL, &cfg, None).unwrap();
        let b = select_wavelet(&noisy, &Wavelet::ALL, &cfg, None).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.windows(2).all(|w| w[0].global_c_norm >= w[1].global_c_norm));
        assert_eq!(a.winner, Some(a.rows[0].wavelet));
        assert!(select_wavelet(&noisy, &[], &cfg, None).is_err());
    }

    #[test]
    fn failed_rows_rank_last() {
        let ok = |w, c| SelectionRow {
            wavelet: w,
            global_c_norm: c,
            residual_energy_density: None,
            report: None,
            model: None,
            log_likelihood: 0.0,
            status: RowStatus::Ok,
        };
        let mut bad = ok(Wavelet::Haar, f64::NAN);
        bad.status = RowStatus::Failed("boom".into());
        let sel = rank_selection(alloc::vec![bad, ok(Wavelet::Db2, 0.5), ok(Wavelet::Sym3, 0.5), ok(Wavelet::Dmey, 0.7)]);
        let order: Vec<_> = sel.rows.iter().map(|r| r.wavelet).collect();
        assert_eq!(order, [Wavelet::Dmey, Wavelet::Db2, Wavelet::Sym3, Wavelet::Haar]);
        assert_eq!(sel.winner, Some(Wavelet::Dmey));
    }

    #[test]
    fn sweep_rows_are_order_independent() {
        let cfg = SweepConfig { levels: 8, ..Default::default() };
        let forward_rows = sweep_logistic(3.5, 3.6, 0.05, &cfg).unwrap();
        let mut backward: Vec<SweepRow> = sweep_grid(3.5, 3.6, 0.05).unwrap().into_iter().rev().map(|r| sweep_point(r, &cfg)).collect();
        backward.sort_by(|a, b| a.r.total_cmp(&b.r));
        assert_eq!(forward_rows, backward);
    }

    #[test]
    fn bad_rows_are_reported_not_fatal() {
        let cfg = SweepConfig { levels: 1, ..Default::default() };
        let row = sweep_point(3.5, &cfg);
        assert!(!row.status.is_ok());
        assert!(row.global_c_norm.is_nan());
    }
}
