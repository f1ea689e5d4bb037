//! Entropy functionals of a fitted tree model, all reported in bits.
//!
//! The hidden layer of the tree yields the global complexity `H(S)`, the
//! per-scale local complexities `H(S_j)`; the emission layer adds the
//! conditional differential entropy `H(D|S)`, which can be negative.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmt::HmtParams;

const LN_2: f64 = core::f64::consts::LN_2;

/// `-p log2 p` with `0 log 0 = 0`.
#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * libm::log2(p)
    } else {
        0.0
    }
}

/// Shannon entropy (bits) of a pmf.
pub fn entropy_bits(pmf: &[f64]) -> f64 {
    pmf.iter().map(|&p| plogp(p)).sum()
}

/// Prior state pmf of every scale.
pub fn scale_marginals(params: &HmtParams) -> Vec<Vec<f64>> {
    params.scale_marginals()
}

/// Joint entropy of all hidden states, evaluated by the nested recursion
///
/// `C = -Σ_m p_0^m (log p_0^m + Σ_n 2 ε_1^{mn} (log ε_1^{mn} + Σ_r 2 ε_2^{nr} (log ε_2^{nr} + …)))`
///
/// from the finest scale upwards. Terms with a zero probability vanish.
pub fn global_complexity(params: &HmtParams) -> f64 {
    let m = params.states();
    // inner[n]: bracketed sum hanging below a node in state n.
    let mut inner = alloc::vec![0.0; m];
    for eps in params.transitions().iter().rev() {
        inner = eps
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&inner)
                    .map(|(&e, &below)| if e > 0.0 { 2.0 * e * (libm::log2(e) + below) } else { 0.0 })
                    .sum()
            })
            .collect();
    }
    -params
        .root_pmf()
        .iter()
        .zip(&inner)
        .map(|(&p, &below)| if p > 0.0 { p * (libm::log2(p) + below) } else { 0.0 })
        .sum::<f64>()
}

/// `H(S)` by the chain rule: `H(p̄_0) + Σ_j 2^j Σ_m p̄_{j-1}^m H(ε_j^{m·})`.
pub fn global_complexity_chain_rule(params: &HmtParams) -> f64 {
    let bars = params.scale_marginals();
    let mut total = entropy_bits(&bars[0]);
    for (idx, eps) in params.transitions().iter().enumerate() {
        let j = idx + 1;
        let per_node: f64 = bars[j - 1].iter().zip(eps).map(|(&p, row)| p * entropy_bits(row)).sum();
        total += (1u64 << j) as f64 * per_node;
    }
    total
}

/// `C_j = H(S_j)` for every scale.
pub fn local_complexity(params: &HmtParams) -> Vec<f64> {
    params.scale_marginals().iter().map(|p| entropy_bits(p)).collect()
}

/// `H(D|S) = Σ_j 2^j Σ_m p̄_j^m · ½ log2(2πe σ_{j,m}²)`.
pub fn entropy_rate(params: &HmtParams) -> f64 {
    let two_pi_e = 2.0 * core::f64::consts::PI * core::f64::consts::E;
    params
        .scale_marginals()
        .iter()
        .enumerate()
        .map(|(j, bar)| {
            let per_node: f64 = bar
                .iter()
                .zip(params.variances(j))
                .map(|(&p, &v)| p * 0.5 * libm::log(two_pi_e * v) / LN_2)
                .sum();
            (1u64 << j) as f64 * per_node
        })
        .sum()
}

/// Length of the longest run of strictly increasing values (at least 1 for
/// non-empty input).
pub fn monotone_run(values: &[f64]) -> usize {
    if values.is_empty() {
        return 0;
    }
    let (mut best, mut run) = (1, 1);
    for w in values.windows(2) {
        run = if w[1] > w[0] { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}

const ENUMERATION_LIMIT: u128 = 1 << 20;

/// `H(S)` by summing `-P(s) log2 P(s)` over every joint state configuration.
/// Refuses trees with more than 2^20 configurations.
pub fn brute_force_tree_entropy(params: &HmtParams) -> Result<f64> {
    let m = params.states();
    let nodes = (1usize << params.levels()) - 1;
    let configurations = (m as u128).checked_pow(nodes as u32).unwrap_or(u128::MAX);
    if configurations > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { configurations });
    }
    let mut states = alloc::vec![0usize; nodes + 1];
    let mut total = 0.0;
    for code in 0..configurations as u64 {
        let mut c = code;
        for s in states.iter_mut().skip(1) {
            *s = (c % m as u64) as usize;
            c /= m as u64;
        }
        let mut prob = params.root_pmf()[states[1]];
        for i in 2..=nodes {
            let j = crate::dwt::scale_of(i);
            prob *= params.transition(j)[states[i / 2]][states[i]];
        }
        total += plogp(prob);
    }
    Ok(total)
}

/// Complexity summary of one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    #[serde(rename = "J")]
    pub levels: usize,
    #[serde(rename = "M")]
    pub states: usize,
    /// `H(S)` in bits.
    pub global_c: f64,
    /// `H(S) / ((2^J - 1) log2 M)`.
    pub global_c_norm: f64,
    /// `H(S_j)` per scale, bits.
    pub local_c: Vec<f64>,
    /// `H(D|S)` in bits.
    pub entropy_rate: f64,
    /// `H(D|S) / (2^J - 1)`.
    pub entropy_rate_norm: f64,
    pub monotone_run: usize,
}

impl ComplexityReport {
    pub fn from_params(params: &HmtParams) -> Self {
        let levels = params.levels();
        let states = params.states();
        let nodes = ((1u64 << levels) - 1) as f64;
        let global_c = global_complexity(params);
        let capacity = nodes * libm::log2(states as f64);
        let local_c = local_complexity(params);
        let h = entropy_rate(params);
        ComplexityReport {
            levels,
            states,
            global_c,
            global_c_norm: if capacity > 0.0 { (global_c / capacity).clamp(0.0, 1.0) } else { 0.0 },
            monotone_run: monotone_run(&local_c),
            local_c,
            entropy_rate: h,
            entropy_rate_norm: h / nodes,
        }
    }
}
