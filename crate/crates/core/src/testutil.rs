use alloc::vec::Vec;

use crate::dwt::WaveletTree;
use crate::hmt::HmtParams;
use crate::signalgen::GaussianStream;

pub fn random_pmf(g: &mut GaussianStream, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| g.uniform_open0()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

pub fn random_params(g: &mut GaussianStream, levels: usize, m: usize) -> HmtParams {
    HmtParams::new(
        random_pmf(g, m),
        (1..levels).map(|_| (0..m).map(|_| random_pmf(g, m)).collect()).collect(),
        (0..levels).map(|_| (0..m).map(|_| g.standard_normal()).collect()).collect(),
        (0..levels).map(|_| (0..m).map(|_| 0.1 + 3.0 * g.uniform_open0()).collect()).collect(),
    )
    .unwrap()
}

pub fn random_tree(g: &mut GaussianStream, levels: usize) -> WaveletTree {
    WaveletTree::from_flat((0..1 << levels).map(|_| 2.0 * g.standard_normal()).collect()).unwrap()
}
