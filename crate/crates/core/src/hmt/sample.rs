use alloc::vec::Vec;

use super::HmtParams;
use crate::dwt::WaveletTree;
use crate::signalgen::GaussianStream;

/// Draws hidden states and coefficients from the model, root first.
///
/// Returns the tree (with `u0 = 0`) and the state of every node in heap
/// order; slot 0 of the state vector is unused and set to 0.
pub fn sample_tree(params: &HmtParams, seed: u64) -> (WaveletTree, Vec<usize>) {
    let levels = params.levels();
    let mut g = GaussianStream::new(seed);
    let mut states = alloc::vec![0usize; 1 << levels];
    let mut tree = WaveletTree::zeros(levels);
    for j in 0..levels {
        let (means, vars) = (params.means(j), params.variances(j));
        for i in (1 << j)..(2 << j) {
            let pmf = if j == 0 { params.root_pmf() } else { &params.transition(j)[states[i / 2]][..] };
            let s = draw(pmf, g.uniform_open0());
            states[i] = s;
            tree.as_flat_mut()[i] = means[s] + libm::sqrt(vars[s]) * g.standard_normal();
        }
    }
    (tree, states)
}

fn draw(pmf: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (m, p) in pmf.iter().enumerate() {
        acc += p;
        if u <= acc {
            return m;
        }
    }
    pmf.len() - 1
}
