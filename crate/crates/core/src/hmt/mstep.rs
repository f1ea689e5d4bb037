use alloc::vec;
use alloc::vec::Vec;

use super::{FitConfig, HmtParams, Posteriors};
use crate::dwt::WaveletTree;
use crate::error::{Error, Result};

const ABSOLUTE_FLOOR: f64 = 1e-12;

/// Per-scale variance floors: `max(rel · mean(d²), 1e-12)`.
pub fn variance_floors(tree: &WaveletTree, relative: f64) -> Vec<f64> {
    (0..tree.levels())
        .map(|j| {
            let d = tree.scale(j);
            let power = d.iter().map(|x| x * x).sum::<f64>() / d.len() as f64;
            (relative * power).max(ABSOLUTE_FLOOR)
        })
        .collect()
}

/// Tied maximization step.
///
/// All nodes of a scale pool their posterior counts: transition rows are
/// normalized pairwise counts, means and variances are posterior-weighted
/// sample moments clamped to the scale's variance floor.
pub fn m_step(tree: &WaveletTree, post: &Posteriors, cfg: &FitConfig) -> Result<HmtParams> {
    let m = post.states();
    if post.node_count() != tree.node_count() {
        return Err(Error::ShapeMismatch("posteriors computed for a different tree"));
    }
    let levels = tree.levels();
    let floors = variance_floors(tree, cfg.variance_floor);

    let mut root_pmf = post.marginal(1).to_vec();
    let total: f64 = root_pmf.iter().sum();
    root_pmf.iter_mut().for_each(|p| *p /= total);

    let mut trans = Vec::with_capacity(levels.saturating_sub(1));
    for j in 1..levels {
        let mut counts = vec![vec![0.0; m]; m];
        for i in 1 << j..2 << j {
            let xi = post.pairwise(i);
            for (a, row) in counts.iter_mut().enumerate() {
                for (b, c) in row.iter_mut().enumerate() {
                    *c += xi[a * m + b];
                }
            }
        }
        for row in counts.iter_mut() {
            let denom: f64 = row.iter().sum();
            if denom > 0.0 {
                row.iter_mut().for_each(|c| *c /= denom);
            } else {
                row.iter_mut().for_each(|c| *c = 1.0 / m as f64);
            }
        }
        trans.push(counts);
    }

    let mut means = Vec::with_capacity(levels);
    let mut variances = Vec::with_capacity(levels);
    for (j, &floor) in floors.iter().enumerate() {
        let d = tree.scale(j);
        let offset = 1usize << j;
        let mut mu = vec![0.0; m];
        let mut var = vec![0.0; m];
        for s in 0..m {
            let mut weight = 0.0;
            let mut first = 0.0;
            for (k, &x) in d.iter().enumerate() {
                let g = post.marginal(offset + k)[s];
                weight += g;
                first += g * x;
            }
            if weight <= 0.0 {
                let n = d.len() as f64;
                mu[s] = if cfg.zero_mean { 0.0 } else { d.iter().sum::<f64>() / n };
                var[s] = (d.iter().map(|x| (x - mu[s]) * (x - mu[s])).sum::<f64>() / n).max(floor);
                continue;
            }
            mu[s] = if cfg.zero_mean { 0.0 } else { first / weight };
            let second: f64 = d
                .iter()
                .enumerate()
                .map(|(k, &x)| post.marginal(offset + k)[s] * (x - mu[s]) * (x - mu[s]))
                .sum();
            var[s] = (second / weight).max(floor);
        }
        means.push(mu);
        variances.push(var);
    }

    HmtParams::new(root_pmf, trans, means, variances)
}
