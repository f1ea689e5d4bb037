//! Independent reference computations used by the acceptance suite.

use wavecomplex_core::dwt::{scale_of, WaveletTree};
use wavecomplex_core::hmt::HmtParams;
use wavecomplex_core::signalgen::GaussianStream;
use wavecomplex_core::Signal;

pub fn random_pmf(g: &mut GaussianStream, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| g.uniform_open0()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Random model: uniform-ish pmfs, N(0,1) means, variances in (0.1, 3.1).
pub fn random_params(g: &mut GaussianStream, levels: usize, m: usize) -> HmtParams {
    HmtParams::new(
        random_pmf(g, m),
        (1..levels).map(|_| (0..m).map(|_| random_pmf(g, m)).collect()).collect(),
        (0..levels).map(|_| (0..m).map(|_| g.standard_normal()).collect()).collect(),
        (0..levels).map(|_| (0..m).map(|_| 0.1 + 3.0 * g.uniform_open0()).collect()).collect(),
    )
    .expect("valid random model")
}

pub fn random_signal(g: &mut GaussianStream, n: usize) -> Signal {
    Signal::new((0..n).map(|_| g.standard_normal()).collect()).expect("finite samples")
}

/// Posteriors of a two-state tree by summing the joint density over all
/// `2^nodes` state configurations.
pub struct Enumerated {
    /// `gamma[i][m] = P(S_i = m | d)`, slot 0 unused.
    pub gamma: Vec<[f64; 2]>,
    /// `xi[i][2a + b] = P(S_parent = a, S_i = b | d)`.
    pub xi: Vec<[f64; 4]>,
    /// Natural log of the evidence.
    pub log_likelihood: f64,
}

pub fn enumerate_posteriors(tree: &WaveletTree, p: &HmtParams) -> Enumerated {
    assert_eq!(p.states(), 2, "two-state models only");
    let nodes = tree.node_count();
    assert!(nodes <= 20, "enumeration too large");
    let mut gamma = vec![[0.0; 2]; nodes + 1];
    let mut xi = vec![[0.0; 4]; nodes + 1];
    let mut evidence = 0.0;
    for code in 0u32..1 << nodes {
        let state = |i: usize| ((code >> (i - 1)) & 1) as usize;
        let mut prob = p.root_pmf()[state(1)];
        for i in 1..=nodes {
            let j = scale_of(i);
            if i > 1 {
                prob *= p.transition(j)[state(i / 2)][state(i)];
            }
            let (mu, var) = (p.means(j)[state(i)], p.variances(j)[state(i)]);
            let z = tree.node(i) - mu;
            prob *= (-z * z / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt();
        }
        evidence += prob;
        for i in 1..=nodes {
            gamma[i][state(i)] += prob;
            if i > 1 {
                xi[i][2 * state(i / 2) + state(i)] += prob;
            }
        }
    }
    gamma.iter_mut().flatten().for_each(|v| *v /= evidence);
    xi.iter_mut().flatten().for_each(|v| *v /= evidence);
    Enumerated { gamma, xi, log_likelihood: evidence.ln() }
}
