//! Hidden Markov tree over wavelet detail coefficients.
//!
//! Every detail node carries a hidden state (state 0 = small "yin",
//! state 1 = large "yang" for `M = 2`); the coefficient given its state is
//! Gaussian, and a child's state depends only on its parent's. All parameters
//! are tied within a scale. Likelihoods are in nats.

mod estep;
mod fit;
mod init;
mod mstep;
mod sample;

pub use estep::e_step;
pub use fit::{fit, FitResult};
pub use init::{init_params, init_params_for_restart};
pub use mstep::{m_step, variance_floors};
pub use sample::sample_tree;

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const STOCHASTIC_TOL: f64 = 1e-9;

/// Tied HMT parameters for a tree with `J` scales and `M` states.
///
/// `trans[j - 1][m][n]` is `P(child at scale j in state n | parent in state m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct HmtParams {
    levels: usize,
    states: usize,
    root_pmf: Vec<f64>,
    trans: Vec<Vec<Vec<f64>>>,
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    #[serde(rename = "J")]
    levels: usize,
    #[serde(rename = "M")]
    states: usize,
    root_pmf: Vec<f64>,
    trans: Vec<Vec<Vec<f64>>>,
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
}

impl From<HmtParams> for ParamsRepr {
    fn from(p: HmtParams) -> Self {
        ParamsRepr {
            levels: p.levels,
            states: p.states,
            root_pmf: p.root_pmf,
            trans: p.trans,
            means: p.means,
            variances: p.variances,
        }
    }
}

impl TryFrom<ParamsRepr> for HmtParams {
    type Error = Error;

    fn try_from(r: ParamsRepr) -> Result<Self> {
        let p = HmtParams::new(r.root_pmf, r.trans, r.means, r.variances)?;
        if p.levels != r.levels || p.states != r.states {
            return Err(Error::ShapeMismatch("J/M disagree with parameter arrays"));
        }
        Ok(p)
    }
}

fn is_pmf(p: &[f64]) -> bool {
    p.iter().all(|&x| (0.0..=1.0).contains(&x)) && (p.iter().sum::<f64>() - 1.0).abs() <= STOCHASTIC_TOL
}

impl HmtParams {
    /// Validating constructor. `trans` holds `J - 1` matrices (scales `1..J`);
    /// `means` and `variances` hold `J` rows of `M` values.
    pub fn new(
        root_pmf: Vec<f64>,
        trans: Vec<Vec<Vec<f64>>>,
        means: Vec<Vec<f64>>,
        variances: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let states = root_pmf.len();
        let levels = means.len();
        if states == 0 {
            return Err(Error::ShapeMismatch("at least one hidden state required"));
        }
        if levels == 0 || variances.len() != levels || trans.len() + 1 != levels {
            return Err(Error::ShapeMismatch("need J mean/variance rows and J-1 transition matrices"));
        }
        if means.iter().chain(&variances).any(|row| row.len() != states) {
            return Err(Error::ShapeMismatch("mean/variance rows must have M entries"));
        }
        if trans.iter().any(|t| t.len() != states || t.iter().any(|row| row.len() != states)) {
            return Err(Error::ShapeMismatch("transition matrices must be M x M"));
        }
        if !is_pmf(&root_pmf) {
            return Err(Error::InvalidConfig("root pmf must be a probability vector"));
        }
        if !trans.iter().flatten().all(|row| is_pmf(row)) {
            return Err(Error::InvalidConfig("transition rows must be probability vectors"));
        }
        if !means.iter().flatten().all(|m| m.is_finite()) {
            return Err(Error::InvalidConfig("means must be finite"));
        }
        if !variances.iter().flatten().all(|v| *v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidConfig("variances must be positive and finite"));
        }
        Ok(HmtParams { levels, states, root_pmf, trans, means, variances })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn root_pmf(&self) -> &[f64] {
        &self.root_pmf
    }

    /// Transition matrix into scale `j` (`1 <= j < J`).
    pub fn transition(&self, j: usize) -> &[Vec<f64>] {
        &self.trans[j - 1]
    }

    pub fn transitions(&self) -> &[Vec<Vec<f64>>] {
        &self.trans
    }

    pub fn means(&self, j: usize) -> &[f64] {
        &self.means[j]
    }

    pub fn variances(&self, j: usize) -> &[f64] {
        &self.variances[j]
    }

    pub fn all_means(&self) -> &[Vec<f64>] {
        &self.means
    }

    pub fn all_variances(&self) -> &[Vec<f64>] {
        &self.variances
    }

    /// Returns a copy with emission parameters replaced (hidden layer kept).
    pub fn with_emissions(&self, means: Vec<Vec<f64>>, variances: Vec<Vec<f64>>) -> Result<Self> {
        HmtParams::new(self.root_pmf.clone(), self.trans.clone(), means, variances)
    }

    /// Prior state distribution at every scale: `p̄_0 = root_pmf`,
    /// `p̄_j = p̄_{j-1} ε_j`.
    pub fn scale_marginals(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.levels);
        out.push(self.root_pmf.clone());
        for t in &self.trans {
            let prev = out.last().unwrap();
            let mut next = vec![0.0; self.states];
            for (pm, row) in prev.iter().zip(t) {
                for (acc, e) in next.iter_mut().zip(row) {
                    *acc += pm * e;
                }
            }
            out.push(next);
        }
        out
    }

    /// Renames state `m` to `perm[m]` everywhere.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let m = self.states;
        assert_eq!(perm.len(), m);
        let mut root_pmf = vec![0.0; m];
        for (s, &p) in self.root_pmf.iter().enumerate() {
            root_pmf[perm[s]] = p;
        }
        let trans = self
            .trans
            .iter()
            .map(|t| {
                let mut out = vec![vec![0.0; m]; m];
                for (a, row) in t.iter().enumerate() {
                    for (b, &e) in row.iter().enumerate() {
                        out[perm[a]][perm[b]] = e;
                    }
                }
                out
            })
            .collect();
        let permute_rows = |rows: &[Vec<f64>]| -> Vec<Vec<f64>> {
            rows.iter()
                .map(|row| {
                    let mut out = vec![0.0; m];
                    for (s, &v) in row.iter().enumerate() {
                        out[perm[s]] = v;
                    }
                    out
                })
                .collect()
        };
        HmtParams {
            levels: self.levels,
            states: m,
            root_pmf,
            trans,
            means: permute_rows(&self.means),
            variances: permute_rows(&self.variances),
        }
    }
}

/// EM settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Hidden states per node.
    pub states: usize,
    pub max_iter: usize,
    /// Stop once the relative log-likelihood change drops below this.
    pub rel_tol: f64,
    pub restarts: usize,
    /// Variance floor relative to each scale's mean squared coefficient
    /// (never below 1e-12 in absolute terms).
    pub variance_floor: f64,
    pub zero_mean: bool,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            states: 2,
            max_iter: 200,
            rel_tol: 1e-6,
            restarts: 1,
            variance_floor: 1e-6,
            zero_mean: false,
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.states < 1 {
            return Err(Error::InvalidConfig("M must be at least 1"));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be at least 1"));
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(Error::InvalidConfig("rel_tol must be positive"));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        if !(self.variance_floor >= 0.0 && self.variance_floor.is_finite()) {
            return Err(Error::InvalidConfig("variance_floor must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Posterior state probabilities of every detail node given the data.
///
/// Node indices follow the heap layout of [`WaveletTree`](crate::dwt::WaveletTree).
#[derive(Debug, Clone, PartialEq)]
pub struct Posteriors {
    pub(crate) states: usize,
    pub(crate) nodes: usize,
    /// `(nodes + 1) * M`, row `i` = `γ_i`; row 0 unused.
    pub(crate) marginal: Vec<f64>,
    /// `(nodes + 1) * M * M`, block `i` = `ξ_i(m, n)` row-major; blocks 0 and 1 unused.
    pub(crate) pairwise: Vec<f64>,
    pub(crate) log_likelihood: f64,
}

impl Posteriors {
    pub fn states(&self) -> usize {
        self.states
    }

    /// Number of detail nodes `2^J - 1`.
    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// `γ_i(·)` for node `i >= 1`.
    pub fn marginal(&self, i: usize) -> &[f64] {
        &self.marginal[i * self.states..(i + 1) * self.states]
    }

    /// `ξ_i(m, n) = P(S_ρ(i) = m, S_i = n | d)`, row-major, for node `i >= 2`.
    pub fn pairwise(&self, i: usize) -> &[f64] {
        let mm = self.states * self.states;
        &self.pairwise[i * mm..(i + 1) * mm]
    }

    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    /// Renames state `m` to `perm[m]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let m = self.states;
        let mut out = self.clone();
        for i in 1..=self.nodes {
            for (s, &to) in perm.iter().enumerate() {
                out.marginal[i * m + to] = self.marginal[i * m + s];
            }
        }
        for i in 2..=self.nodes {
            let base = i * m * m;
            for a in 0..m {
                for b in 0..m {
                    out.pairwise[base + perm[a] * m + perm[b]] = self.pairwise[base + a * m + b];
                }
            }
        }
        out
    }
}

#[inline]
pub(crate) fn gaussian_log_density(d: f64, mean: f64, variance: f64) -> f64 {
    let z = d - mean;
    -0.5 * (libm::log(2.0 * core::f64::consts::PI * variance) + z * z / variance)
}
