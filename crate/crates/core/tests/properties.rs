use num_bigint::BigInt;
use proptest::prelude::*;
use severi_core::counting::{p_poly, s_poly};
use severi_core::enumerate::{templates_of_cogenus, TemplateCache};
use severi_core::graphs::{Tau, TauGraph};
use severi_core::phi::{linear_form, phi_value};
use severi_core::severi::{node_polynomial, severi_direct};

fn tau_strategy() -> impl Strategy<Value = (Tau, Vec<u64>)> {
    let edge = (0u32..3, 1u32..=3, 1u32..=3).prop_filter_map("edge", |(a, len, r)| {
        let b = a + len;
        (b <= 3 && !(len == 1 && r == 1)).then_some((a, b, r))
    });
    prop::collection::vec((edge, 0u64..=2), 1..=3).prop_filter_map("distinct types", |items| {
        let (edges, n): (Vec<_>, Vec<_>) = items.into_iter().unzip();
        Tau::long_edge(&edges).ok().map(|t| (t, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reciprocity((tau, n) in tau_strategy()) {
        let ell = tau.maxv();
        let p = p_poly(&tau, &n, ell).unwrap();
        let s = s_poly(&tau, &n, ell).unwrap();
        let total: u64 = n.iter().sum();
        let sign = if total.is_multiple_of(2) { 1 } else { -1 };
        let vars: Vec<i64> = vec![0; ell as usize];
        for probe in 0..4i64 {
            let beta: Vec<i64> = vars.iter().enumerate().map(|(j, _)| probe + j as i64).collect();
            let neg: Vec<i64> = beta.iter().map(|b| -b - 1).collect();
            prop_assert_eq!(p.eval_int(&beta).unwrap(), s.eval_int(&neg).unwrap() * BigInt::from(sign));
        }
    }

    #[test]
    fn phi_is_affine_above_lambda_bar(idx in 0usize..26, offs in prop::collection::vec(0u64..6, 4)) {
        let ts = templates_of_cogenus(3);
        prop_assert!(ts.iter().all(|t| t.len() <= 4));
        let t = &ts[idx % ts.len()];
        let beta: Vec<u64> = t.lambda_bar_vec(t.len()).iter().zip(&offs).map(|(a, b)| a + b).collect();
        prop_assert_eq!(phi_value(t, &beta).unwrap(), linear_form(t).unwrap().eval(&beta));
    }
}

#[test]
fn node_polynomial_matches_direct_counts() {
    for delta in 1..=3u64 {
        let np = node_polynomial(delta).unwrap();
        for d in np.threshold.max(1)..=6 {
            let direct = severi_direct(d, delta).unwrap();
            assert_eq!(np.eval(d as i64), direct.into(), "N_{delta}({d})");
        }
    }
}

#[test]
fn template_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TemplateCache::new(dir.path());
    for delta in 1..=3 {
        let fresh = cache.templates(delta, false).unwrap();
        assert_eq!(cache.load(delta).unwrap().unwrap(), *fresh);
        assert_eq!(*cache.templates(delta, true).unwrap(), *fresh);
    }
    std::fs::write(cache.path(2), "{}").unwrap();
    assert!(cache.load(2).is_err());
    assert_eq!(*cache.templates(2, false).unwrap(), *templates_of_cogenus(2));
}

#[test]
fn graphs_survive_record_round_trip() {
    for t in templates_of_cogenus(3).iter() {
        let g = TauGraph::from_records(&t.records()).unwrap();
        assert_eq!(g.canonical(), t.canonical());
    }
}
