use proptest::prelude::*;
use wavecomplex_core::complexity::{brute_force_tree_entropy, global_complexity, global_complexity_chain_rule, local_complexity};
use wavecomplex_core::dwt::{children, forward, inverse, node_index, parent, scale_of, Wavelet};
use wavecomplex_core::hmt::{e_step, HmtParams};
use wavecomplex_core::Signal;

fn wavelet() -> impl Strategy<Value = Wavelet> {
    prop::sample::select(Wavelet::ALL.to_vec())
}

fn signal(levels: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    levels.prop_flat_map(|j| prop::collection::vec(-1e3f64..1e3, 1usize << j))
}

fn pmf(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, m).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

fn params(levels: usize, m: usize) -> impl Strategy<Value = HmtParams> {
    (
        pmf(m),
        prop::collection::vec(prop::collection::vec(pmf(m), m), levels - 1),
        prop::collection::vec(prop::collection::vec(-3f64..3.0, m), levels),
        prop::collection::vec(prop::collection::vec(0.05f64..5.0, m), levels),
    )
        .prop_map(|(root, trans, means, vars)| HmtParams::new(root, trans, means, vars).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_is_perfect(xs in signal(2..10), w in wavelet()) {
        let bank = w.bank();
        let s = Signal::new(xs.clone()).unwrap();
        let back = inverse(&forward(&s, &bank).unwrap(), &bank).unwrap();
        for (a, b) in xs.iter().zip(back.samples()) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn orthogonal_banks_preserve_energy(xs in signal(2..10), w in wavelet()) {
        prop_assume!(w.is_orthogonal());
        let e: f64 = xs.iter().map(|x| x * x).sum();
        let t = forward(&Signal::new(xs).unwrap(), &w.bank()).unwrap();
        prop_assert!((t.energy() - e).abs() <= 1e-9 * (1.0 + e));
    }

    #[test]
    fn heap_indexing_is_a_bijection(j in 0usize..20, k_frac in 0.0f64..1.0) {
        let k = ((1u64 << j) as f64 * k_frac) as usize;
        let i = node_index(j, k).unwrap();
        prop_assert_eq!(scale_of(i), j);
        prop_assert_eq!(i - (1 << j), k);
        if j > 0 {
            prop_assert!(children(parent(i).unwrap()).contains(&i));
        }
        prop_assert!(node_index(j, 1 << j).is_err());
    }

    #[test]
    fn posteriors_are_distributions(p in params(4, 2), xs in signal(4..5)) {
        let t = forward(&Signal::new(xs).unwrap(), &Wavelet::Haar.bank()).unwrap();
        let post = e_step(&t, &p).unwrap();
        prop_assert!(post.log_likelihood().is_finite());
        for i in 1..t.node_count() {
            let g = post.marginal(i);
            prop_assert!(g.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)), "node {} {:?}", i, g);
            prop_assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn complexity_forms_agree(p in params(3, 2)) {
        let c = global_complexity(&p);
        prop_assert!((c - global_complexity_chain_rule(&p)).abs() < 1e-12);
        prop_assert!((c - brute_force_tree_entropy(&p).unwrap()).abs() < 1e-9);
        prop_assert!((0.0..=7.0 + 1e-12).contains(&c));
    }

    #[test]
    fn local_complexity_is_bounded(p in params(5, 3)) {
        let cap = 3f64.log2();
        prop_assert!(local_complexity(&p).iter().all(|&h| (0.0..=cap + 1e-12).contains(&h)));
    }
}
