use alloc::vec;
use alloc::vec::Vec;

use super::{FitConfig, HmtParams};
use crate::dwt::WaveletTree;
use crate::error::{Error, Result};
use crate::hmt::mstep::variance_floors;
use crate::orchestrate::mix_seed;
use crate::signalgen::GaussianStream;

const BASE_PERCENTILE: f64 = 75.0;
const RESTART_SPREAD: f64 = 15.0;
const PSEUDO_COUNT: f64 = 0.5;

/// Initial parameters for the first EM start.
pub fn init_params(tree: &WaveletTree, cfg: &FitConfig) -> Result<HmtParams> {
    init_params_for_restart(tree, cfg, 0)
}

/// Hard-labels each scale by coefficient magnitude and reads parameters off
/// the labels.
///
/// Coefficients whose magnitude exceeds the scale's 75th percentile are
/// labelled as the largest state, the rest as state 0 (intermediate states,
/// for `M > 2`, split the magnitude range evenly between). Restart `k > 0`
/// moves the percentile by up to ±15 points, drawn from the seed. A scale whose
/// magnitudes are all equal has no ordering to exploit; it is split by
/// position instead (every fourth node large).
pub fn init_params_for_restart(tree: &WaveletTree, cfg: &FitConfig, restart: usize) -> Result<HmtParams> {
    cfg.validate()?;
    let levels = tree.levels();
    if levels < 2 {
        return Err(Error::MalformedTree("at least two scales are needed"));
    }
    let m = cfg.states;
    let percentile = if restart == 0 {
        BASE_PERCENTILE
    } else {
        let mut g = GaussianStream::new(mix_seed(cfg.seed, restart as u64));
        BASE_PERCENTILE + RESTART_SPREAD * (2.0 * g.uniform_open0() - 1.0)
    };

    let mut labels = vec![0usize; tree.node_count() + 1];
    for j in 0..levels {
        let d = tree.scale(j);
        let offset = 1usize << j;
        let mut mags: Vec<f64> = d.iter().map(|x| x.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let degenerate = d.len() > 1 && mags[0] == mags[mags.len() - 1];
        if degenerate {
            for k in 0..d.len() {
                labels[offset + k] = if k % 4 == 0 { m - 1 } else { 0 };
            }
            continue;
        }
        // Thresholds for states 1..M-1, spread between the median-ish and the percentile.
        let thresholds: Vec<f64> = (1..m)
            .map(|s| {
                let q = if m == 2 { percentile } else { percentile * s as f64 / (m - 1) as f64 };
                quantile(&mags, q / 100.0)
            })
            .collect();
        for (k, x) in d.iter().enumerate() {
            labels[offset + k] = thresholds.iter().filter(|&&t| x.abs() > t).count();
        }
    }

    let floors = variance_floors(tree, cfg.variance_floor);
    let mut root_counts = vec![PSEUDO_COUNT; m];
    root_counts[labels[1]] += 1.0;
    let root_pmf = normalized(root_counts);

    let trans = (1..levels)
        .map(|j| {
            let mut counts = vec![vec![PSEUDO_COUNT; m]; m];
            for i in 1 << j..2 << j {
                counts[labels[i / 2]][labels[i]] += 1.0;
            }
            counts.into_iter().map(normalized).collect()
        })
        .collect();

    let mut means = Vec::with_capacity(levels);
    let mut variances = Vec::with_capacity(levels);
    for (j, &floor) in floors.iter().enumerate() {
        let d = tree.scale(j);
        let offset = 1usize << j;
        let all_mean = if cfg.zero_mean { 0.0 } else { d.iter().sum::<f64>() / d.len() as f64 };
        let all_var = d.iter().map(|x| (x - all_mean) * (x - all_mean)).sum::<f64>() / d.len() as f64;
        let mut mu = vec![all_mean; m];
        let mut var = vec![all_var.max(floor); m];
        for s in 0..m {
            let group: Vec<f64> =
                d.iter().enumerate().filter(|(k, _)| labels[offset + k] == s).map(|(_, &x)| x).collect();
            if group.is_empty() {
                continue;
            }
            let n = group.len() as f64;
            mu[s] = if cfg.zero_mean { 0.0 } else { group.iter().sum::<f64>() / n };
            var[s] = (group.iter().map(|x| (x - mu[s]) * (x - mu[s])).sum::<f64>() / n).max(floor);
        }
        means.push(mu);
        variances.push(var);
    }

    HmtParams::new(root_pmf, trans, means, variances)
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Linear-interpolation quantile of sorted data, `q` in `[0, 1]`.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}
