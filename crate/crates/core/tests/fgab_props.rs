use num_bigint::BigInt;
use proptest::prelude::*;
use rbw_core::fgab::bar::{bar_homology_invariants, FiniteAbelian, DEFAULT_BAR_BUDGET};
use rbw_core::fgab::snf::{dense_invariant_factors, smith_normal_form};
use rbw_core::fgab::{tor1, wedge3, AbPresentation, Echelon, IntMatrix};

fn sparse_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec((0..c, -50i64..=50), 0..=4), r).prop_map(move |rows| {
            let mut m = IntMatrix::empty(c);
            for row in rows {
                m.push_terms(row);
            }
            m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_transforms_are_exact(m in sparse_matrix(40)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d_matrix());
        for w in s.diagonal.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        prop_assert_eq!(Echelon::new(&m, false).invariant_factors(), s.diagonal);
    }

    #[test]
    fn invariant_factors_ignore_permutations(m in sparse_matrix(30), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<usize> = (0..m.nrows()).collect();
        rows.shuffle(&mut rng);
        let mut cols: Vec<usize> = (0..m.ncols()).collect();
        cols.shuffle(&mut rng);
        let dense = m.to_dense();
        let permuted: Vec<Vec<BigInt>> = rows.iter().map(|&i| cols.iter().map(|&j| dense[i][j].clone()).collect()).collect();
        let p = IntMatrix::from_dense(m.ncols(), &permuted);
        prop_assert_eq!(dense_invariant_factors(&p), dense_invariant_factors(&m));
    }

    #[test]
    fn invariant_factors_ignore_unimodular_multiplication(m in sparse_matrix(25), ops in proptest::collection::vec((0usize..25, 0usize..25, -3i64..=3), 0..30)) {
        // Elementary row operations row_i += k·row_j (i ≠ j) on the left, column operations on the right.
        let (r, c) = (m.nrows(), m.ncols());
        let mut left: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        let mut right: Vec<Vec<i64>> = (0..c).map(|i| (0..c).map(|j| (i == j) as i64).collect()).collect();
        for (a, b, k) in ops {
            let (i, j) = (a % r, b % r);
            if i != j {
                for t in 0..r { left[i][t] += k * left[j][t]; }
            }
            let (i, j) = (a % c, b % c);
            if i != j {
                for t in 0..c { right[t][i] += k * right[t][j]; }
            }
        }
        let u = IntMatrix::from_dense_i64(r, &left);
        let v = IntMatrix::from_dense_i64(c, &right);
        let big = u.mul(&m).mul(&v);
        prop_assert_eq!(dense_invariant_factors(&big), dense_invariant_factors(&m));
        prop_assert_eq!(Echelon::new(&big, false).invariant_factors(), dense_invariant_factors(&m));
    }
}

#[test]
fn smith_on_large_random_sparse_matrices() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (r, c) in [(200, 200), (60, 200), (200, 60)] {
        let mut m = IntMatrix::empty(c);
        for _ in 0..r {
            m.push_terms((0..3).map(|_| (rng.gen_range(0..c), rng.gen_range(-50..=50))));
        }
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d_matrix());
    }
}

#[test]
fn third_homology_order_splits_into_wedge_and_tor_fixed_points() {
    for orders in [vec![2u64], vec![3], vec![4], vec![2, 2], vec![2, 4], vec![15]] {
        let b = AbPresentation::cyclic(&orders);
        let h3 = bar_homology_invariants(&FiniteAbelian::new(&orders), 3, DEFAULT_BAR_BUDGET).unwrap();
        let w3 = wedge3(&b).group.invariants().order().unwrap();
        let fixed = tor1(&b).fixed().group.invariants().order().unwrap();
        assert_eq!(h3.order().unwrap(), w3 * fixed, "B = {orders:?}");
    }
}
