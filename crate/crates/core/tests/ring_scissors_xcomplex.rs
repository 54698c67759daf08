use num_bigint::BigInt;
use proptest::prelude::*;
use rbw_core::scissors;
use rbw_core::xcomplex::{self, ProjectiveLine};
use rbw_core::{Ring, RingElem};

const SPECS: [&str; 7] = ["gf(2,3)", "gf(3,2)", "gf(5,1)", "z/9", "z/25", "gf(2,1)[t]/t^3", "gf(2,2)[t]/t^2"];

fn ring_and_elems() -> impl Strategy<Value = (usize, u32, u32, u32)> {
    (0..SPECS.len(), any::<u32>(), any::<u32>(), any::<u32>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((i, x, y, z) in ring_and_elems()) {
        let r = Ring::parse(SPECS[i]).unwrap();
        let n = r.size();
        let (a, b, c) = (RingElem(x % n), RingElem(y % n), RingElem(z % n));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        match r.inv(a) {
            Some(u) => prop_assert_eq!(r.mul(a, u), r.one()),
            None => prop_assert!(!r.is_unit(a)),
        }
    }

    #[test]
    fn matrices_stay_in_sl2((i, x, y, _) in ring_and_elems()) {
        let r = Ring::parse(SPECS[i]).unwrap();
        let n = r.size();
        let (a, b) = (RingElem(x % n), RingElem(y % n));
        let mut g = r.mat_mul(&r.mat_w(), &r.mat_unipotent(b));
        if let Ok(d) = r.mat_diag(a) {
            g = r.mat_mul(&d, &g);
        }
        prop_assert!(r.is_sl2(&g));
        prop_assert_eq!(r.mat_mul(&g, &r.mat_inv(&g).unwrap()), r.mat_identity());
    }
}

/// |P¹(A)| = |A| + |A|/|𝔪| for a local ring with maximal ideal 𝔪.
#[test]
fn projective_line_sizes() {
    for (spec, expected) in [("gf(2,3)", 9), ("gf(3,2)", 10), ("z/9", 12), ("z/25", 30), ("gf(2,1)[t]/t^3", 12), ("gf(2,2)[t]/t^2", 20)] {
        let r = Ring::parse(spec).unwrap();
        assert_eq!(ProjectiveLine::new(&r).unwrap().len(), expected, "{spec}");
    }
}

/// For q even, B(F_q) ≅ Z/(q+1); with every unit a square, RB = RP₁ = B.
#[test]
fn bloch_groups_of_small_binary_fields() {
    for k in 2..=5u32 {
        let r = Ring::parse(&format!("gf(2,{k})")).unwrap();
        let res = scissors::bloch_groups(&r).unwrap();
        let rep = res.report(&r);
        let q = 1u64 << k;
        assert_eq!(rep.b.order(), Some(BigInt::from(q + 1)), "k = {k}");
        assert_eq!(rep.rb, rep.b);
        assert_eq!(rep.rp1, rep.b);
        assert!(res.chain_checks() && res.rb_two_ways() && res.coinvariants_check());
    }
}

#[test]
fn exactness_below_residue_field_size() {
    for (spec, below) in [("gf(3,1)", 3), ("z/9", 3), ("gf(2,2)[t]/t^2", 4)] {
        let r = Ring::parse(spec).unwrap();
        let rep = xcomplex::exactness_audit(&r, below - 1, xcomplex::DEFAULT_X_BUDGET).unwrap();
        assert!(rep.truncated.is_none(), "{spec}");
        assert!(rep.exact_below(below), "{spec}: {:?}", rep.dims.iter().map(|d| d.homology.to_string()).collect::<Vec<_>>());
    }
}

#[test]
fn x_budget_truncates_instead_of_failing() {
    let r = Ring::parse("gf(2,3)").unwrap();
    let rep = xcomplex::exactness_audit(&r, 3, 100).unwrap();
    assert!(rep.truncated.is_some());
    assert!(rep.dims.len() < 4);
}
