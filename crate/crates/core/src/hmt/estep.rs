use alloc::vec;

use super::{gaussian_log_density, HmtParams, Posteriors};
use crate::dwt::{scale_of, WaveletTree};
use crate::error::{Error, Result};

/// Exact posteriors by a normalized upward-downward pass over the tree.
///
/// Upward, each node stores `β̃_i(m) = P(T_i | S_i = m) / P(T_i)` (the subtree
/// likelihood ratio) and `β_{i,ρ(i)}(m) = Σ_n ε(m,n) β̃_i(n)`; the per-node
/// normalizers multiply to `P(d)`. Node terms are combined in the log domain
/// and rescaled by their maximum, so no density underflows to zero. Downward,
/// `ξ_i(m,n) = γ_ρ(i)(m) ε(m,n) β̃_i(n) / β_{i,ρ(i)}(m)` and `γ_i = Σ_m ξ_i`.
pub fn e_step(tree: &WaveletTree, params: &HmtParams) -> Result<Posteriors> {
    let levels = tree.levels();
    if params.levels() != levels {
        return Err(Error::ShapeMismatch("parameters fitted for a different J"));
    }
    let m = params.states();
    let nodes = tree.node_count();
    let first_leaf = 1usize << (levels - 1);
    let priors = params.scale_marginals();

    let mut ratio = vec![0.0; (nodes + 1) * m]; // β̃
    let mut to_parent = vec![0.0; (nodes + 1) * m]; // β_{i,ρ(i)}
    let mut log_likelihood = 0.0;
    let mut term = vec![0.0; m];

    for i in (1..=nodes).rev() {
        let j = scale_of(i);
        let d = tree.node(i);
        let (means, vars) = (params.means(j), params.variances(j));
        for s in 0..m {
            term[s] = gaussian_log_density(d, means[s], vars[s]);
        }
        let prior = &priors[j];
        let mut peak = f64::NEG_INFINITY;
        for s in 0..m {
            if i < first_leaf {
                term[s] += libm::log(to_parent[2 * i * m + s]) + libm::log(to_parent[(2 * i + 1) * m + s]);
            }
            term[s] += libm::log(prior[s]);
            peak = peak.max(term[s]);
        }
        if !peak.is_finite() {
            return Err(Error::Underflow { node: i });
        }
        for v in term.iter_mut() {
            *v = libm::exp(*v - peak);
        }
        let norm: f64 = term.iter().sum();
        let row = &mut ratio[i * m..(i + 1) * m];
        for s in 0..m {
            // States the prior rules out never receive posterior mass.
            row[s] = if prior[s] > 0.0 { term[s] / (norm * prior[s]) } else { 0.0 };
        }
        log_likelihood += libm::log(norm) + peak;

        if i > 1 {
            let eps = params.transition(j);
            for a in 0..m {
                to_parent[i * m + a] = eps[a].iter().zip(&ratio[i * m..(i + 1) * m]).map(|(e, r)| e * r).sum();
            }
        }
    }

    let mut marginal = vec![0.0; (nodes + 1) * m];
    let mut pairwise = vec![0.0; (nodes + 1) * m * m];
    for s in 0..m {
        marginal[m + s] = priors[0][s] * ratio[m + s];
    }
    for i in 2..=nodes {
        let eps = params.transition(scale_of(i));
        let parent = i / 2;
        let block = &mut pairwise[i * m * m..(i + 1) * m * m];
        for a in 0..m {
            let denom = to_parent[i * m + a];
            let weight = if denom > 0.0 { marginal[parent * m + a] / denom } else { 0.0 };
            for b in 0..m {
                block[a * m + b] = weight * eps[a][b] * ratio[i * m + b];
            }
        }
        for b in 0..m {
            marginal[i * m + b] = (0..m).map(|a| block[a * m + b]).sum();
        }
    }

    Ok(Posteriors { states: m, nodes, marginal, pairwise, log_likelihood })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signalgen::GaussianStream;
    use crate::testutil::{random_params, random_tree};
    use alloc::vec::Vec;

    /// Posteriors by summing the joint over every state configuration.
    fn brute_force(tree: &WaveletTree, p: &HmtParams) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, f64) {
        let nodes = tree.node_count();
        let m = p.states();
        let total = m.pow(nodes as u32);
        let mut gamma = vec![vec![0.0; m]; nodes + 1];
        let mut xi = vec![vec![0.0; m * m]; nodes + 1];
        let mut evidence = 0.0;
        let mut s = vec![0usize; nodes + 1];
        for code in 0..total {
            let mut c = code;
            for node in s.iter_mut().skip(1) {
                *node = c % m;
                c /= m;
            }
            let mut prob = p.root_pmf()[s[1]];
            for i in 1..=nodes {
                let j = scale_of(i);
                if i > 1 {
                    prob *= p.transition(j)[s[i / 2]][s[i]];
                }
                let (mu, var) = (p.means(j)[s[i]], p.variances(j)[s[i]]);
                let z = tree.node(i) - mu;
                prob *= libm::exp(-z * z / (2.0 * var)) / libm::sqrt(2.0 * core::f64::consts::PI * var);
            }
            evidence += prob;
            for i in 1..=nodes {
                gamma[i][s[i]] += prob;
                if i > 1 {
                    xi[i][s[i / 2] * m + s[i]] += prob;
                }
            }
        }
        for row in gamma.iter_mut().chain(xi.iter_mut()) {
            row.iter_mut().for_each(|v| *v /= evidence);
        }
        (gamma, xi, libm::log(evidence))
    }

    #[test]
    fn matches_enumeration() {
        let mut g = GaussianStream::new(2024);
        for _ in 0..50 {
            for levels in 2..=3 {
                let p = random_params(&mut g, levels, 2);
                let t = random_tree(&mut g, levels);
                let post = e_step(&t, &p).unwrap();
                let (gamma, xi, ll) = brute_force(&t, &p);
                assert!((post.log_likelihood() - ll).abs() < 1e-10);
                for i in 1..=t.node_count() {
                    for (a, b) in post.marginal(i).iter().zip(&gamma[i]) {
                        assert!((a - b).abs() < 1e-10);
                    }
                    if i > 1 {
                        for (a, b) in post.pairwise(i).iter().zip(&xi[i]) {
                            assert!((a - b).abs() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn three_states_match_enumeration() {
        let mut g = GaussianStream::new(99);
        let p = random_params(&mut g, 3, 3);
        let t = random_tree(&mut g, 3);
        let post = e_step(&t, &p).unwrap();
        let (gamma, _, ll) = brute_force(&t, &p);
        assert!((post.log_likelihood() - ll).abs() < 1e-10);
        for (i, g) in gamma.iter().enumerate().skip(1) {
            for (a, b) in post.marginal(i).iter().zip(g) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn deterministic_chain_pins_state() {
        let levels = 4;
        let p = HmtParams::new(
            vec![1.0, 0.0],
            vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]; levels - 1],
            vec![vec![0.0, 0.0]; levels],
            vec![vec![0.01, 100.0]; levels],
        )
        .unwrap();
        let mut g = GaussianStream::new(1);
        let t = random_tree(&mut g, levels);
        let post = e_step(&t, &p).unwrap();
        for i in 1..=t.node_count() {
            assert_eq!(post.marginal(i), &[1.0, 0.0]);
        }
    }

    #[test]
    fn identical_components_return_prior() {
        let levels = 4;
        let mut g = GaussianStream::new(5);
        let base = random_params(&mut g, levels, 2);
        let p = base.with_emissions(vec![vec![0.3, 0.3]; levels], vec![vec![2.0, 2.0]; levels]).unwrap();
        let t = random_tree(&mut g, levels);
        let post = e_step(&t, &p).unwrap();
        let bars = p.scale_marginals();
        for i in 1..=t.node_count() {
            for (a, b) in post.marginal(i).iter().zip(&bars[scale_of(i)]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn posteriors_are_consistent() {
        let mut g = GaussianStream::new(77);
        let p = random_params(&mut g, 8, 2);
        let t = random_tree(&mut g, 8);
        let post = e_step(&t, &p).unwrap();
        for i in 1..=t.node_count() {
            assert!((post.marginal(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            if i > 1 {
                let xi = post.pairwise(i);
                assert!((xi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                for n in 0..2 {
                    assert!((xi[n] + xi[2 + n] - post.marginal(i)[n]).abs() < 1e-12);
                }
                for a in 0..2 {
                    assert!((xi[2 * a] + xi[2 * a + 1] - post.marginal(i / 2)[a]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn extreme_coefficients_do_not_underflow() {
        let levels = 3;
        let p = HmtParams::new(
            vec![0.5, 0.5],
            vec![vec![vec![0.5, 0.5]; 2]; levels - 1],
            vec![vec![0.0, 0.0]; levels],
            vec![vec![1e-12, 1e-10]; levels],
        )
        .unwrap();
        let t = WaveletTree::from_flat(vec![0.0, 1e3, -1e3, 5.0, 1e-3, 0.0, 7.0, -2.0]).unwrap();
        let post = e_step(&t, &p).unwrap();
        assert!(post.log_likelihood().is_finite());
        assert!(post.marginal(2)[1] > 0.999);
    }

    #[test]
    fn wrong_depth_is_rejected() {
        let mut g = GaussianStream::new(3);
        let p = random_params(&mut g, 3, 2);
        let t = random_tree(&mut g, 4);
        assert!(matches!(e_step(&t, &p), Err(Error::ShapeMismatch(_))));
    }
}
