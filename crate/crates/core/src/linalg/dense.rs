use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::SparseMatrix;

/// Integer matrix obtained by clearing the denominators of each column.
pub fn integral_dense(m: &SparseMatrix) -> Vec<Vec<BigInt>> {
    let mut dense = vec![vec![BigInt::zero(); m.cols()]; m.rows()];
    for c in 0..m.cols() {
        let lcm = m.column(c).iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(&v.denom()));
        for (r, v) in m.column(c) {
            dense[*r][c] = v.numer() * (&lcm / v.denom());
        }
    }
    dense
}

/// Rank by fraction-free Bareiss elimination with first-nonzero pivoting.
pub fn bareiss_rank(m: &SparseMatrix) -> usize {
    let mut a = integral_dense(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    #[test]
    fn bareiss_matches_hand_computation() {
        let q = Rational::from_integer;
        let m = SparseMatrix::from_triplets(
            3,
            3,
            vec![(0, 0, q(2)), (1, 0, q(4)), (0, 1, Rational::new(1, 2)), (1, 1, q(1)), (2, 2, q(7))],
        )
        .unwrap();
        assert_eq!(bareiss_rank(&m), 2);
        assert_eq!(bareiss_rank(&SparseMatrix::identity(4)), 4);
        assert_eq!(bareiss_rank(&SparseMatrix::zeros(2, 5)), 0);
    }
}
