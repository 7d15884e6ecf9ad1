//! Exact rational linear algebra and chain-complex homology.

mod complex;
pub mod dense;
mod rational;
mod sparse;

pub use complex::ChainComplex;
pub use rational::Rational;
pub use sparse::{axpy, canonicalize, rank, Echelon, SparseMatrix, SparseVec};

/// Dense nullspace basis of the row space spanned by `rows` over `width` coordinates.
pub fn nullspace(rows: &[SparseVec], width: usize) -> Vec<SparseVec> {
    // Reduced row echelon form with pivots at the smallest free index.
    let mut reduced: Vec<Vec<Rational>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for row in rows {
        let mut v = vec![Rational::zero(); width];
        for (i, x) in row {
            v[*i] = x.clone();
        }
        for (r, &pc) in reduced.iter().zip(&pivot_cols) {
            if !v[pc].is_zero() {
                let c = v[pc].clone();
                for j in 0..width {
                    v[j] = &v[j] - &(&c * &r[j]);
                }
            }
        }
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let inv = v[pc].recip();
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        for r in reduced.iter_mut() {
            if !r[pc].is_zero() {
                let c = r[pc].clone();
                for j in 0..width {
                    r[j] = &r[j] - &(&c * &v[j]);
                }
            }
        }
        reduced.push(v);
        pivot_cols.push(pc);
    }
    (0..width)
        .filter(|j| !pivot_cols.contains(j))
        .map(|free| {
            let mut v = vec![(free, Rational::one())];
            for (r, &pc) in reduced.iter().zip(&pivot_cols) {
                if !r[free].is_zero() {
                    v.push((pc, -&r[free]));
                }
            }
            canonicalize(v)
        })
        .collect()
}
