//! Frozen values, each recomputed here by an independent brute-force route first.

use std::collections::BTreeMap;

use permutadkit::barkoszul::{free_permutad_series, generating_series, koszulity_check};
use permutadkit::combinat::{all_surjections, fubini, surjection_count, Surjection};
use permutadkit::permutad::Quotient;
use permutadkit::permutad::{PresentationJson, QuadraticPresentation};
use permutadkit::peroperads::{anti_associative_presentation, des_pushforward, minimal_model_complex, PerQuotient};
use permutadkit::Rational;

/// Surjections `n̲ ↠ k̲` by listing all maps and keeping the onto ones.
fn brute_surjections(n: usize, k: usize) -> u128 {
    let mut count = 0;
    let mut word = vec![0usize; n];
    loop {
        let mut hit = vec![false; k];
        word.iter().for_each(|&x| hit[x] = true);
        count += u128::from(hit.iter().all(|&h| h));
        let Some(j) = word.iter().rposition(|&x| x + 1 < k) else { break };
        word[j] += 1;
        word[j + 1..].iter_mut().for_each(|x| *x = 0);
    }
    count
}

/// Planar trees with `leaves` leaves and `vertices` internal vertices of arity ≥ 2.
fn planar_trees(leaves: usize, vertices: usize) -> u128 {
    if leaves == 1 {
        return u128::from(vertices == 0);
    }
    if vertices == 0 {
        return 0;
    }
    (2..=leaves).map(|j| forests(j, leaves, vertices - 1)).sum()
}

/// Ordered sequences of `count` planar trees with `leaves` leaves and `vertices` vertices in total.
fn forests(count: usize, leaves: usize, vertices: usize) -> u128 {
    if count == 0 {
        return u128::from(leaves == 0 && vertices == 0);
    }
    let mut total = 0;
    for l in 1..=leaves {
        for v in 0..=vertices {
            let first = planar_trees(l, v);
            if first > 0 {
                total += first * forests(count - 1, leaves - l, vertices - v);
            }
        }
    }
    total
}

#[test]
fn surjection_counts_and_fubini() {
    for n in 1..=6 {
        for k in 1..=n {
            assert_eq!(surjection_count(n, k), brute_surjections(n, k));
            assert_eq!(all_surjections(n, k).unwrap().len() as u128, surjection_count(n, k));
        }
        assert_eq!(fubini(n), (1..=n).map(|k| brute_surjections(n, k)).sum::<u128>());
    }
    assert_eq!([1, 3, 13, 75, 541, 4683].map(|n: u128| n), [1, 2, 3, 4, 5, 6].map(fubini));
}

#[test]
fn minimal_model_cells_are_planar_trees() {
    for k in 2..=7 {
        let oracle: BTreeMap<i64, usize> =
            (1..k).map(|v| ((k - 1 - v) as i64, planar_trees(k, v) as usize)).collect();
        assert_eq!(minimal_model_complex(&Surjection::identity(k)).unwrap().dims(), oracle, "k = {k}");
    }
    assert_eq!(
        minimal_model_complex(&Surjection::identity(5)).unwrap().dims(),
        BTreeMap::from([(0, 14), (1, 21), (2, 9), (3, 1)])
    );
}

#[test]
fn free_permutad_series_counts_monomials() {
    // One generator in arity 2: a monomial is the generator times a shuffle with a smaller
    // monomial, so f_n = m_n + Σ_a binom(n, a)·m_a·f_{n−a}.
    let m = [0u128, 0, 1, 0, 0, 0, 0];
    let binom = |n: u128, k: u128| (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1));
    let mut f = vec![0u128; 7];
    for n in 1..=6 {
        f[n] = m[n] + (1..n).map(|a| binom(n as u128, a as u128) * m[a] * f[n - a]).sum::<u128>();
    }
    assert_eq!(f, [0, 0, 1, 0, 6, 0, 90]);
    let series = free_permutad_series(&[0, 0, 1], 6);
    let factorial = |n: usize| (1..=n as i64).product::<i64>();
    for n in 1..=6 {
        let expected = Rational::new(f[n] as i64, factorial(n));
        assert_eq!(series.coeff(n), expected, "n = {n}");
    }
}

#[test]
fn anti_associative_objects() {
    let anti = PerQuotient::new(anti_associative_presentation());
    let dims: Vec<usize> = (1..=4).map(|k| anti.object(&Surjection::identity(k)).unwrap().dim()).collect();
    assert_eq!(dims, [1, 1, 1, 0]);
}

#[test]
fn pushforward_total() {
    // One generator on each object of cardinality 2, so one factor per surjection n̲ ↠ 2̲.
    let oracle: u128 = (2..=4).map(|n| brute_surjections(n, 2)).sum();
    let pres = anti_associative_presentation();
    assert_eq!(des_pushforward(&pres.collection(), 2, 4).unwrap().total_dim as u128, oracle);
    assert_eq!(oracle, 22);
}

#[test]
fn two_generator_permutad_is_not_koszul_at_four() {
    let json: PresentationJson = serde_json::from_str(include_str!("../../cli/tests/fixtures/not_koszul.json")).unwrap();
    let pres = QuadraticPresentation::from_json(&json).unwrap();
    let report = koszulity_check(&pres, 4).unwrap();
    assert_eq!(report.first_failure(), Some(4));
    assert_eq!(report.per_arity[3].betti, BTreeMap::from([(0, 137), (1, 1)]));
    let q = Quotient::new(pres).unwrap();
    let dims: Vec<usize> = (1..=4).map(|n| q.dims_by_degree(n).unwrap().values().sum()).collect();
    assert_eq!(dims, [2, 6, 25, 137]);
    let by_arity: BTreeMap<(usize, i64), usize> =
        (1..=4).flat_map(|n| q.dims_by_degree(n).unwrap().into_iter().map(move |(d, v)| ((n, d), v))).collect();
    assert_eq!(generating_series(&by_arity, 4).coeff(2), Rational::new(6, 2));
}
