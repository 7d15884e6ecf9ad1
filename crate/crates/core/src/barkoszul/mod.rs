//! Dual bar constructions of permutads, Koszulity checks, the permutohedron
//! complex and the generating-series test.

mod permutohedron;
mod series;
mod zeta;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{all_surjections, substitute, Surjection};
use crate::error::{domain, Result};
use crate::linalg::{canonicalize, ChainComplex, Rational, SparseMatrix};
use crate::permutad::{quadratic_dual, PermutadStructure, QuadraticPresentation, Quotient};

pub use permutohedron::{permutohedron_complex, refinement_covers, xi_check, xi_check_with};
pub use series::{free_permutad_series, generating_series, gk_functional_check, PowerSeries};
pub use zeta::{zeta_check, zeta_check_with, ZetaReport, ZetaWitness};

/// A basis element of a free permutad on `↓(A^!)*`: a shape and one basis index per block.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BarCell {
    pub shape: Surjection,
    pub factors: Vec<usize>,
}

impl fmt::Display for BarCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape.to_partition())?;
        if self.factors.iter().any(|&x| x != 0) {
            let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
            write!(f, "#{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// `D(A)(n̲)` for the permutad `A` described by `structure`.
#[derive(Clone, Debug)]
pub struct DualBarComplex {
    pub arity: usize,
    pub complex: ChainComplex<BarCell>,
}

/// Terms `(ρ, y, z, coefficient)` of `∂(↓x*)` for each basis element `x` of arity `m`,
/// coefficient already carrying `(−1)^{|y|−1}`.
type Splittings = HashMap<usize, Vec<(Surjection, usize, usize, Rational)>>;

fn splittings(structure: &dyn PermutadStructure, m: usize, flip: Option<&Surjection>) -> Result<Splittings> {
    let mut out: Splittings = HashMap::new();
    if m < 2 {
        return Ok(out);
    }
    for rho in all_surjections(m, 2)? {
        let sizes = rho.block_sizes();
        for y in 0..structure.dim(sizes[0]) {
            let shift = if (structure.degree(sizes[0], y) - 1).rem_euclid(2) == 0 { 1 } else { -1 };
            let flipped = if flip == Some(&rho) { -shift } else { shift };
            for z in 0..structure.dim(sizes[1]) {
                for (x, c) in structure.diamond(&rho, y, z)? {
                    out.entry(x).or_default().push((rho.clone(), y, z, &c * &Rational::sign(flipped)));
                }
            }
        }
    }
    Ok(out)
}

/// The dual bar construction in arity `n`.
pub fn dual_bar(structure: &dyn PermutadStructure, n: usize) -> Result<DualBarComplex> {
    dual_bar_with(structure, n, None)
}

/// As [`dual_bar`], negating every generator-level term indexed by `flip`.
pub fn dual_bar_with(structure: &dyn PermutadStructure, n: usize, flip: Option<&Surjection>) -> Result<DualBarComplex> {
    if n == 0 || n > structure.max_arity() {
        return domain(format!("structure data stops at arity {}", structure.max_arity()));
    }
    let desuspended = |m: usize, x: usize| structure.degree(m, x) - 1;
    let mut basis: BTreeMap<i64, Vec<BarCell>> = BTreeMap::new();
    for k in (1..=n).rev() {
        for shape in all_surjections(n, k)? {
            let sizes = shape.block_sizes();
            let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
            for &m in &sizes {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        (0..structure.dim(m)).map(move |x| {
                            let mut next = t.clone();
                            next.push(x);
                            next
                        })
                    })
                    .collect();
            }
            for factors in tuples {
                let degree: i64 = sizes.iter().zip(&factors).map(|(&m, &x)| desuspended(m, x)).sum();
                basis.entry(degree).or_default().push(BarCell { shape: shape.clone(), factors });
            }
        }
    }
    let index: HashMap<&BarCell, usize> =
        basis.values().flat_map(|cells| cells.iter().enumerate().map(|(i, c)| (c, i))).collect();
    let split: Vec<Splittings> = (0..=n).map(|m| splittings(structure, m, flip)).collect::<Result<_>>()?;

    let mut boundaries = Vec::new();
    for (&d, cells) in &basis {
        if !basis.contains_key(&(d - 1)) {
            continue;
        }
        let rows = basis[&(d - 1)].len();
        let columns: Vec<Vec<(usize, Rational)>> = cells
            .par_iter()
            .map(|cell| {
                let sizes = cell.shape.block_sizes();
                let mut column = Vec::new();
                let mut prefix = 0i64;
                for (j, (&m, &x)) in sizes.iter().zip(&cell.factors).enumerate() {
                    let sign = Rational::sign(if prefix.rem_euclid(2) == 0 { 1 } else { -1 });
                    for (rho, y, z, c) in split[m].get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                        let inner: Vec<Surjection> = sizes
                            .iter()
                            .enumerate()
                            .map(|(l, &s)| if l == j { rho.clone() } else { Surjection::terminal(s) })
                            .collect();
                        let shape = substitute(&cell.shape, &inner).expect("block sizes match");
                        let factors = [&cell.factors[..j], &[*y, *z], &cell.factors[j + 1..]].concat();
                        let target = BarCell { shape, factors };
                        column.push((index[&target], &sign * c));
                    }
                    prefix += desuspended(m, x);
                }
                canonicalize(column)
            })
            .collect();
        boundaries.push((d, SparseMatrix::from_columns(rows, columns)?));
    }
    let mut complex = ChainComplex::new(basis);
    for (d, m) in boundaries {
        complex.set_boundary(d, m)?;
    }
    Ok(DualBarComplex { arity: n, complex })
}

/// The Koszul dual quotient `A^!` of a presentation, truncated at `nmax`.
pub fn dual_quotient(pres: &QuadraticPresentation, nmax: usize) -> Result<Quotient> {
    Quotient::new(quadratic_dual(&pres.with_truncation(nmax.max(2))?)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ArityReport {
    pub n: usize,
    pub dims: BTreeMap<i64, usize>,
    pub betti: BTreeMap<i64, usize>,
    /// Dimensions of `A(n̲)`, keyed by the homological degree `−d` of a class of degree `d`.
    pub expected: BTreeMap<i64, usize>,
    pub d_squared_zero: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub nmax: usize,
    pub per_arity: Vec<ArityReport>,
    pub koszul: bool,
}

impl KoszulReport {
    /// First arity at which the homology disagrees with `A`.
    pub fn first_failure(&self) -> Option<usize> {
        self.per_arity.iter().find(|a| !a.matches).map(|a| a.n)
    }
}

/// Compares the homology of `D(A^!)(n̲)` with `A(n̲)` for every `n ≤ nmax`.
pub fn koszulity_check(pres: &QuadraticPresentation, nmax: usize) -> Result<KoszulReport> {
    if nmax == 0 {
        return domain("nmax must be positive");
    }
    let pres = pres.with_truncation(nmax.max(2))?;
    let a = Quotient::new(pres.clone())?;
    let dual = dual_quotient(&pres, nmax)?;
    let per_arity = (1..=nmax)
        .map(|n| {
            let d = dual_bar(&dual, n)?;
            let d_squared_zero = d.complex.is_complex()?;
            let betti = if d_squared_zero { d.complex.betti_from_ranks(&d.complex.ranks()) } else { BTreeMap::new() };
            // ↓x* sits in degree |x| − 1, so a class of A in degree d appears in degree −d.
            let expected: BTreeMap<i64, usize> =
                a.dims_by_degree(n)?.into_iter().filter(|(_, v)| *v > 0).map(|(d, v)| (-d, v)).collect();
            let matches = d_squared_zero && betti == expected;
            Ok(ArityReport { n, dims: d.complex.dims(), betti, expected, d_squared_zero, matches })
        })
        .collect::<Result<Vec<_>>>()?;
    let koszul = per_arity.iter().all(|a| a.matches);
    Ok(KoszulReport { nmax, per_arity, koszul })
}
