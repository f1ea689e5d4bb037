//! State-dependent shrinkage of wavelet details with known noise power.
//!
//! A node in state `m` at scale `j` is modelled as clean signal plus white
//! noise, so its clean variance is `(σ_{j,m}² − σ_n²)_+`. Each state shrinks
//! the coefficient towards its mean by the Wiener gain
//! `(σ_{j,m}² − σ_n²)_+ / σ_{j,m}²`, and the results are mixed by the
//! posterior state probabilities. States whose variance is at or below the
//! noise floor collapse to their mean.

use serde::{Deserialize, Serialize};

use crate::dwt::{forward, inverse, scale_of, WaveletFilterBank, WaveletTree};
use crate::error::{Error, Result};
use crate::hmt::{fit, FitConfig, FitResult, HmtParams, Posteriors};
use crate::signalgen::Signal;

/// Denoiser settings. `noise_variance` is in squared signal units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseConfig {
    pub noise_variance: f64,
    pub fit: FitConfig,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        DenoiseConfig { noise_variance: 1.0, fit: FitConfig::default() }
    }
}

/// Name recorded in output metadata for the estimator used here.
pub const ESTIMATOR: &str = "posterior-weighted-wiener";

#[inline]
fn gain(variance: f64, noise_variance: f64) -> f64 {
    (variance - noise_variance).max(0.0) / variance
}

/// Shrinks every detail of `tree`; `u0` is left alone.
pub fn shrink_tree(
    tree: &WaveletTree,
    params: &HmtParams,
    post: &Posteriors,
    noise_variance: f64,
) -> Result<WaveletTree> {
    if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
        return Err(Error::Domain { what: "noise variance", value: noise_variance });
    }
    if params.levels() != tree.levels() || post.node_count() != tree.node_count() {
        return Err(Error::ShapeMismatch("model/posteriors do not match the tree"));
    }
    if params.states() != post.states() {
        return Err(Error::ShapeMismatch("model and posteriors disagree on M"));
    }
    if noise_variance == 0.0 {
        return Ok(tree.clone());
    }
    let mut out = tree.clone();
    let flat = out.as_flat_mut();
    for (i, coeff) in flat.iter_mut().enumerate().skip(1) {
        let j = scale_of(i);
        let (means, vars) = (params.means(j), params.variances(j));
        let d = *coeff;
        *coeff = post
            .marginal(i)
            .iter()
            .zip(means.iter().zip(vars))
            .map(|(&g, (&mu, &var))| g * (mu + gain(var, noise_variance) * (d - mu)))
            .sum();
    }
    Ok(out)
}

/// Output of [`denoise_signal`]: the estimate plus the model behind it.
#[derive(Debug, Clone)]
pub struct Denoised {
    pub signal: Signal,
    pub fit: FitResult,
}

/// Decompose, fit, shrink, reconstruct.
pub fn denoise_signal(signal: &Signal, bank: &WaveletFilterBank, cfg: &DenoiseConfig) -> Result<Denoised> {
    let tree = forward(signal, bank)?;
    let fitted = fit(&tree, &cfg.fit)?;
    let shrunk = shrink_tree(&tree, &fitted.params, &fitted.posteriors, cfg.noise_variance)?;
    Ok(Denoised { signal: inverse(&shrunk, bank)?, fit: fitted })
}

/// Mean squared difference between an estimate and the clean reference.
pub fn residual_energy_density(denoised: &Signal, clean: &Signal) -> Result<f64> {
    if denoised.len() != clean.len() {
        return Err(Error::LengthMismatch { left: denoised.len(), right: clean.len() });
    }
    if clean.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = denoised.samples().iter().zip(clean.samples()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / clean.len() as f64)
}
