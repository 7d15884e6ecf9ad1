use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};

use super::{rank, SparseMatrix};

/// A finite chain complex with labeled bases and differentials of degree −1.
///
/// `boundary(d)` maps the degree-`d` basis to the degree-`(d−1)` basis; rows
/// index the target and columns the source.
#[derive(Clone, Debug)]
pub struct ChainComplex<L> {
    basis: BTreeMap<i64, Vec<L>>,
    boundary: BTreeMap<i64, SparseMatrix>,
}

impl<L> ChainComplex<L> {
    pub fn new(basis: BTreeMap<i64, Vec<L>>) -> Self {
        ChainComplex { basis, boundary: BTreeMap::new() }
    }

    pub fn set_boundary(&mut self, degree: i64, m: SparseMatrix) -> Result<()> {
        if m.cols() != self.dim(degree) || m.rows() != self.dim(degree - 1) {
            return domain(format!(
                "boundary in degree {degree} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                self.dim(degree - 1),
                self.dim(degree)
            ));
        }
        self.boundary.insert(degree, m);
        Ok(())
    }

    pub fn basis(&self, degree: i64) -> &[L] {
        self.basis.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn bases(&self) -> &BTreeMap<i64, Vec<L>> {
        &self.basis
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis.get(&degree).map_or(0, Vec::len)
    }

    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.basis.iter().filter(|(_, b)| !b.is_empty()).map(|(d, b)| (*d, b.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(Vec::len).sum()
    }

    pub fn boundary(&self, degree: i64) -> SparseMatrix {
        self.boundary
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(degree - 1), self.dim(degree)))
    }

    pub fn boundary_ref(&self, degree: i64) -> Option<&SparseMatrix> {
        self.boundary.get(&degree)
    }

    pub fn boundary_mut(&mut self, degree: i64) -> Option<&mut SparseMatrix> {
        self.boundary.get_mut(&degree)
    }

    fn degrees(&self) -> Vec<i64> {
        self.basis.keys().copied().collect()
    }

    fn check_shapes(&self) -> Result<()> {
        for (d, m) in &self.boundary {
            if m.cols() != self.dim(*d) || m.rows() != self.dim(d - 1) {
                return domain(format!("boundary in degree {d} has the wrong shape"));
            }
        }
        Ok(())
    }

    /// Whether every composite `∂_{d−1} ∂_d` vanishes.
    pub fn is_complex(&self) -> Result<bool> {
        self.check_shapes()?;
        for (d, m) in &self.boundary {
            if let Some(next) = self.boundary.get(&(d - 1)) {
                if !next.mul(m)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Ranks of all boundary maps, computed concurrently per degree.
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        let mats: Vec<(&i64, &SparseMatrix)> = self.boundary.iter().collect();
        mats.par_iter().map(|(d, m)| (**d, rank(m))).collect()
    }

    /// `dim H_d = dim C_d − rank ∂_d − rank ∂_{d+1}`; only nonzero entries are kept,
    /// except that an acyclic complex reports nothing.
    pub fn betti(&self) -> Result<BTreeMap<i64, usize>> {
        if !self.is_complex()? {
            return Err(Error::Contract("boundary does not square to zero".into()));
        }
        Ok(self.betti_from_ranks(&self.ranks()))
    }

    pub fn betti_from_ranks(&self, ranks: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
        let r = |d: i64| ranks.get(&d).copied().unwrap_or(0);
        self.degrees()
            .into_iter()
            .map(|d| (d, self.dim(d) - r(d) - r(d + 1)))
            .filter(|(_, h)| *h > 0)
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.basis
            .iter()
            .map(|(d, b)| if d.rem_euclid(2) == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    #[test]
    fn point_and_interval() {
        let point = ChainComplex::new(BTreeMap::from([(0, vec!["p"])]));
        assert_eq!(point.betti().unwrap(), BTreeMap::from([(0, 1)]));

        let mut interval = ChainComplex::new(BTreeMap::from([(0, vec!["a", "b"]), (1, vec!["e"])]));
        let d = SparseMatrix::from_triplets(2, 1, vec![(0, 0, Rational::one()), (1, 0, -Rational::one())]).unwrap();
        interval.set_boundary(1, d).unwrap();
        assert_eq!(interval.betti().unwrap(), BTreeMap::from([(0, 1)]));
        assert_eq!(interval.euler_characteristic(), 1);
        assert!(interval.set_boundary(1, SparseMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn non_complex_is_rejected() {
        let mut c = ChainComplex::new(BTreeMap::from([(0, vec![0]), (1, vec![1]), (2, vec![2])]));
        c.set_boundary(1, SparseMatrix::identity(1)).unwrap();
        c.set_boundary(2, SparseMatrix::identity(1)).unwrap();
        assert!(!c.is_complex().unwrap());
        assert!(matches!(c.betti(), Err(Error::Contract(_))));
    }
}
