use std::collections::BTreeMap;

use proptest::prelude::*;

use permutadkit::barkoszul::{dual_bar, dual_quotient, koszulity_check};
use permutadkit::combinat::{all_surjections, substitute, surjection_count, Surjection};
use permutadkit::linalg::dense::bareiss_rank;
use permutadkit::linalg::{rank, SparseMatrix};
use permutadkit::percat::morphisms_from;
use permutadkit::permutad::{terminal_presentation, Quotient};
use permutadkit::peroperads::{
    koszulity_check_peroperad, minimal_model_complex, quadratic_dual_peroperad, BinaryPresentation, BinaryTerm,
    PerGenerator,
};
use permutadkit::Rational;

fn surjection() -> impl Strategy<Value = Surjection> {
    (1usize..=6)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, k)| {
            let all = all_surjections(n, k).unwrap();
            let len = all.len();
            (Just(all), 0..len)
        })
        .prop_map(|(all, i)| all[i].clone())
}

fn small_matrix() -> impl Strategy<Value = SparseMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-2i64..=2, r * c).prop_map(move |v| {
            let entries = v.iter().enumerate().map(|(i, &x)| (i / c, i % c, Rational::from_integer(x))).collect();
            SparseMatrix::from_triplets(r, c, entries).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn partition_round_trip(r in surjection()) {
        let p = r.to_partition();
        prop_assert_eq!(p.to_surjection(), r.clone());
        prop_assert_eq!(p.to_shuffle().sign(), r.shuffle_sign());
        prop_assert_eq!(r.block_sizes().iter().sum::<usize>(), r.domain_size());
    }

    #[test]
    fn fibers_substitute_back(alpha in surjection()) {
        for f in morphisms_from(&alpha) {
            prop_assert_eq!(&substitute(f.target(), &f.fibers()).unwrap(), f.source());
        }
    }

    #[test]
    fn terminal_fibers_are_right_units(r in surjection(), seed in any::<u64>()) {
        let pick = |m: usize, salt: u64| {
            let all = all_surjections(m, 1 + (salt as usize) % m).unwrap();
            all[(salt as usize / 7) % all.len()].clone()
        };
        let inner: Vec<Surjection> = r.block_sizes().iter().enumerate().map(|(j, &m)| pick(m, seed.rotate_left(j as u32 * 9))).collect();
        let once = substitute(&r, &inner).unwrap();
        let deeper: Vec<Surjection> = once.block_sizes().iter().map(|&m| Surjection::terminal(m)).collect();
        prop_assert_eq!(substitute(&once, &deeper).unwrap(), once);
    }

    #[test]
    fn sparse_rank_matches_bareiss(m in small_matrix()) {
        prop_assert_eq!(rank(&m), bareiss_rank(&m));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn minimal_model_squares_to_zero(alpha in surjection()) {
        let m = minimal_model_complex(&alpha).unwrap();
        prop_assert!(m.is_complex().unwrap());
        prop_assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn koszulness_is_symmetric_under_duality(a in -2i64..=2, b in -2i64..=2, degree in 0i64..=1) {
        prop_assume!(a != 0 || b != 0);
        let term = |slot, c| BinaryTerm { slot, outer: 0, inner: 0, coeff: Rational::from_integer(c) };
        let relation: Vec<BinaryTerm> = [(1, a), (2, b)].into_iter().filter(|t| t.1 != 0).map(|(s, c)| term(s, c)).collect();
        let p = BinaryPresentation::new(vec![PerGenerator { label: "m".into(), degree }], vec![relation]).unwrap();
        let dual = quadratic_dual_peroperad(&p).unwrap();
        prop_assert_eq!(
            koszulity_check_peroperad(&p, 4).unwrap().koszul,
            koszulity_check_peroperad(&dual, 4).unwrap().koszul
        );
    }
}

#[test]
fn dual_bar_squares_to_zero_and_counts_surjections() {
    let dual = dual_quotient(&terminal_presentation(5), 5).unwrap();
    for n in 1..=5 {
        let complex = dual_bar(&dual, n).unwrap().complex;
        assert!(complex.is_complex().unwrap());
        let by_degree: BTreeMap<i64, usize> =
            (1..=n).map(|k| ((n - k) as i64, surjection_count(n, k) as usize)).collect();
        assert_eq!(complex.dims(), by_degree);
    }
}

#[test]
fn terminal_permutad_is_one_dimensional() {
    let q = Quotient::new(terminal_presentation(6)).unwrap();
    for n in 1..=6 {
        assert_eq!(q.dims_by_degree(n).unwrap(), BTreeMap::from([(0, 1)]));
    }
    assert!(koszulity_check(&terminal_presentation(5), 5).unwrap().koszul);
}
