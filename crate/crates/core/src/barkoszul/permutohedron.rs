use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::combinat::{all_surjections, OrderedPartition};
use crate::error::Result;
use crate::linalg::{canonicalize, ChainComplex, Rational, SparseMatrix};
use crate::permutad::terminal_presentation;

use super::{dual_bar, dual_quotient};

fn parity(x: i64) -> i32 {
    if x.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Cellular chains of the permutohedron, cells indexed by ordered partitions of `n̲`
/// in degree `n − #blocks`.
///
/// A cell is the free-permutad monomial on generators `c_{m−1}` of degree `m−1`, and
/// `∂c_{m−1} = −Σ_ρ (−1)^{ρ₁−1} ε(ρ) c_{ρ₁−1} ◊_ρ c_{ρ₂−1}`.
pub fn permutohedron_complex(n: usize) -> Result<ChainComplex<OrderedPartition>> {
    let mut basis = BTreeMap::new();
    for k in 1..=n {
        let cells: Vec<OrderedPartition> = all_surjections(n, k)?.iter().map(|r| r.to_partition()).collect();
        basis.insert((n - k) as i64, cells);
    }
    let index: HashMap<OrderedPartition, usize> =
        basis.values().flat_map(|cells| cells.iter().cloned().enumerate().map(|(i, c)| (c, i))).collect();
    let mut boundaries = Vec::new();
    for d in 1..n as i64 {
        let columns = basis[&d]
            .iter()
            .map(|cell: &OrderedPartition| {
                let mut column = Vec::new();
                let mut prefix = 0i64;
                for (j, block) in cell.blocks().iter().enumerate() {
                    let m = block.len();
                    if m >= 2 {
                        for rho in all_surjections(m, 2).expect("m >= 2") {
                            let first: Vec<usize> = rho.fiber(1).iter().map(|&p| block[p - 1]).collect();
                            let second: Vec<usize> = rho.fiber(2).iter().map(|&p| block[p - 1]).collect();
                            let mut blocks = cell.blocks().to_vec();
                            blocks.splice(j..=j, [first, second]);
                            let target = OrderedPartition::new(blocks).expect("refinement of a partition");
                            let sign = -parity(prefix) * parity(rho.block_sizes()[0] as i64 - 1) * rho.shuffle_sign();
                            column.push((index[&target], Rational::sign(sign)));
                        }
                    }
                    prefix += m as i64 - 1;
                }
                canonicalize(column)
            })
            .collect();
        boundaries.push((d, SparseMatrix::from_columns(basis[&(d - 1)].len(), columns)?));
    }
    let mut complex = ChainComplex::new(basis);
    for (d, m) in boundaries {
        complex.set_boundary(d, m)?;
    }
    Ok(complex)
}

/// Partitions obtained from `p` by splitting one block into two nonempty ordered parts.
pub fn refinement_covers(p: &OrderedPartition) -> BTreeSet<OrderedPartition> {
    let mut out = BTreeSet::new();
    for (j, block) in p.blocks().iter().enumerate() {
        let m = block.len();
        for mask in 1..(1u64 << m) - 1 {
            let first: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| block[i]).collect();
            let second: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| block[i]).collect();
            let mut blocks = p.blocks().to_vec();
            blocks.splice(j..=j, [first, second]);
            out.insert(OrderedPartition::new(blocks).expect("refinement of a partition"));
        }
    }
    out
}

/// Whether `ξ(e_m) = −c_{m−1}` intertwines `D(perAs^!)(n̲)` with the permutohedron complex.
pub fn xi_check(n: usize) -> Result<bool> {
    xi_check_with(n, |blocks| if blocks % 2 == 0 { 1 } else { -1 })
}

/// As [`xi_check`] with `ξ` acting on a `k`-block cell by `xi_sign(k)`.
pub fn xi_check_with(n: usize, xi_sign: impl Fn(usize) -> i32) -> Result<bool> {
    let dual = dual_quotient(&terminal_presentation(n.max(2)), n.max(2))?;
    let bar = dual_bar(&dual, n)?.complex;
    let perm = permutohedron_complex(n)?;
    for d in 1..n as i64 {
        let bar_m = bar.boundary(d);
        let perm_m = perm.boundary(d);
        let row_of: HashMap<OrderedPartition, usize> =
            perm.basis(d - 1).iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let col_of: HashMap<&OrderedPartition, usize> = perm.basis(d).iter().enumerate().map(|(i, c)| (c, i)).collect();
        for (col, cell) in bar.basis(d).iter().enumerate() {
            let source = cell.shape.to_partition();
            let Some(&pcol) = col_of.get(&source) else {
                return Ok(false);
            };
            let k = cell.shape.codomain_size();
            // ∂ξ(x) = ξ∂(x): entries of ∂_perm equal ξ(target)·ξ(source)·entries of ∂_bar.
            let transported = canonicalize(
                bar_m
                    .column(col)
                    .iter()
                    .map(|(row, c)| {
                        let target = &bar.basis(d - 1)[*row];
                        let s = xi_sign(target.shape.codomain_size()) * xi_sign(k);
                        (row_of[&target.shape.to_partition()], c * &Rational::sign(s))
                    })
                    .collect(),
            );
            if transported.as_slice() != perm_m.column(pcol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon() {
        let c = permutohedron_complex(3).unwrap();
        assert_eq!(c.dims(), BTreeMap::from([(0, 6), (1, 6), (2, 1)]));
        assert_eq!(c.euler_characteristic(), 1);
        assert_eq!(c.betti().unwrap(), BTreeMap::from([(0, 1)]));
        assert_eq!(permutohedron_complex(1).unwrap().dims(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn xi_and_its_mutation() {
        assert!(xi_check(2).unwrap());
        assert!(xi_check(4).unwrap());
        assert!(!xi_check_with(2, |_| 1).unwrap());
    }

    #[test]
    fn covers_of_a_block() {
        let p: OrderedPartition = "[1,2,3]".parse().unwrap();
        assert_eq!(refinement_covers(&p).len(), 6);
    }
}
