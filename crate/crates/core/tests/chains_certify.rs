use std::collections::BTreeSet;

use proptest::prelude::*;
use rbw_core::certify::{self, Certifier, Verdict};
use rbw_core::chains::{bar_d, bar_to_homog, homog_to_bar, tensor_d, tensor_dx, BarChain, Sl2, TensorChain};
use rbw_core::xcomplex::ProjectiveLine;
use rbw_core::{Mat2, Ring};

fn gf4() -> Ring {
    Ring::parse("gf(2,2)").unwrap()
}

fn sl2_gf4() -> Vec<Mat2> {
    gf4().enumerate_sl2(1000).unwrap()
}

/// Up to six terms: (coefficient, tuple of indices into SL2(GF(4)), three distinct lines of P¹(GF(4))).
fn terms(len: usize) -> impl Strategy<Value = Vec<(i64, Vec<usize>, Vec<u32>)>> {
    let line_triples = Just((0u32..5).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| v[..3].to_vec());
    proptest::collection::vec((-3i64..=3, proptest::collection::vec(0usize..60, len), line_triples), 1..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bar_differential_squares_to_zero(ts in terms(3)) {
        let r = gf4();
        let g = Sl2(&r);
        let els = sl2_gf4();
        let c = BarChain::bar_from(&g, 3, ts.iter().map(|(k, t, _)| (t.iter().map(|&i| els[i]).collect(), *k)));
        prop_assert!(bar_d(&g, &bar_d(&g, &c)).is_zero());
        prop_assert_eq!(homog_to_bar(&g, &bar_to_homog(&g, &c)), c);
    }

    #[test]
    fn tensor_differentials_square_to_zero_and_commute(ts in terms(2)) {
        let r = gf4();
        let p1 = ProjectiveLine::new(&r).unwrap();
        let els = sl2_gf4();
        let mut c = TensorChain::zero(2, 2);
        for (k, t, x) in &ts {
            c.add_term(&r, t.iter().map(|&i| els[i]).collect(), x.clone(), *k);
        }
        prop_assert_eq!(tensor_d(&r, &p1, &tensor_d(&r, &p1, &c)).len(), 0);
        prop_assert_eq!(tensor_dx(&r, &tensor_dx(&r, &c)).len(), 0);
        let a = tensor_d(&r, &p1, &tensor_dx(&r, &c));
        let b = tensor_dx(&r, &tensor_d(&r, &p1, &c));
        prop_assert_eq!(a.records(), b.records());
    }

    #[test]
    fn sampled_triples_are_distinct_units(n in 0usize..400, seed in any::<u64>()) {
        let r = Ring::parse("gf(2,3)").unwrap();
        let s = certify::sample_triples(&r, n, seed);
        prop_assert_eq!(s.len(), n.min(343));
        prop_assert_eq!(s.iter().collect::<BTreeSet<_>>().len(), s.len());
        prop_assert!(s.iter().all(|&(a, b, c)| r.is_unit(a) && r.is_unit(b) && r.is_unit(c)));
        prop_assert_eq!(certify::sample_triples(&r, n, seed), s);
    }

    #[test]
    fn d1_22_holds_for_random_pairs_over_gf32(i in 0usize..31, j in 0usize..31) {
        let r = Ring::parse("gf(2,5)").unwrap();
        let units = r.units().units.clone();
        let c = Certifier::with_default_budget(&r).unwrap();
        let cert = c.d1_22_certificate(units[i], units[j]).unwrap();
        prop_assert!(cert.passed(), "{:?}", cert.stages);
    }
}

#[test]
fn every_gf4_certificate_passes() {
    let r = gf4();
    let c = Certifier::with_default_budget(&r).unwrap();
    let d1 = c.d1_22_all().unwrap();
    let theta = c.theta_all().unwrap();
    let d2 = c.d2_22_all().unwrap();
    assert_eq!((d1.len(), theta.len(), d2.len()), (9, 3, 27));
    for cert in d1.iter().chain(&theta).chain(&d2) {
        assert!(cert.passed(), "{} {:?}", cert.identity, cert.params);
        assert!(!cert.budget_exhausted);
    }
}

#[test]
fn low_degree_checks_on_local_rings() {
    for spec in ["z/9", "gf(2,1)[t]/t^3", "gf(3,2)"] {
        let r = Ring::parse(spec).unwrap();
        let c = Certifier::with_default_budget(&r).unwrap();
        assert_eq!(c.d1_10_check().verdict, Verdict::ExactMatch, "{spec}");
        assert!(c.d1_12_check().passed(), "{spec}");
        assert!(c.d1_11_kernel_check().passed(), "{spec}");
    }
}

#[test]
fn tiny_boundary_budget_is_reported() {
    let r = Ring::parse("z/9").unwrap();
    let c = Certifier::new(&r, 1).unwrap();
    let cert = c.d1_12_check();
    assert!(!cert.passed());
    assert!(cert.budget_exhausted);
}
