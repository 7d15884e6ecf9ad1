use std::collections::HashMap;
use std::sync::OnceLock;

use crate::combinat::{all_surjections, pi_project, substitute, Projection, Surjection};
use crate::error::{domain, Result};
use crate::linalg::{canonicalize, Echelon, Rational, SparseVec};

use super::{free_basis_weight, free_compose, suspension_sign, FreeBasisElt, QuadraticPresentation};

/// A finite-dimensional graded permutad given by bases and structure constants.
pub trait PermutadStructure: Sync {
    /// Largest arity for which data is available.
    fn max_arity(&self) -> usize;
    fn dim(&self, n: usize) -> usize;
    fn degree(&self, n: usize, idx: usize) -> i64;
    fn label(&self, n: usize, idx: usize) -> String;
    /// `basis_left ◊_r basis_right` expanded in the basis of arity `|r|`.
    fn diamond(&self, r: &Surjection, left: usize, right: usize) -> Result<SparseVec>;
}

/// One arity of a quotient `P(B)/(S)`.
#[derive(Debug)]
pub struct ArityQuotient {
    ambient: Vec<FreeBasisElt>,
    index: HashMap<FreeBasisElt, usize>,
    echelon: Echelon,
    standard: Vec<usize>,
    position: HashMap<usize, usize>,
    degrees: Vec<i64>,
}

impl ArityQuotient {
    pub fn ambient(&self) -> &[FreeBasisElt] {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Monomials chosen as basis representatives: those that are never leading terms.
    pub fn representatives(&self) -> impl Iterator<Item = &FreeBasisElt> {
        self.standard.iter().map(|&i| &self.ambient[i])
    }

    pub fn representative(&self, idx: usize) -> &FreeBasisElt {
        &self.ambient[self.standard[idx]]
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.degrees[idx]
    }

    pub fn ideal_rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Class of a monomial in the basis of representatives.
    pub fn normal_form(&self, monomial: &FreeBasisElt) -> Result<SparseVec> {
        let &i = self
            .index
            .get(monomial)
            .ok_or_else(|| crate::Error::Domain("monomial outside this arity".into()))?;
        Ok(self
            .echelon
            .normal_form(&[(i, Rational::one())])
            .into_iter()
            .map(|(j, c)| (self.position[&j], c))
            .collect())
    }
}

/// Spanning set of the degree-`n` part of the ideal `(S)` inside the weight-`n`
/// monomials of `P(B)(n̲)`, given as vectors over `free_basis_weight(B, n, n)`.
pub fn ideal_spanning_set(pres: &QuadraticPresentation, n: usize) -> Result<Vec<SparseVec>> {
    if !pres.is_binary() {
        return domain("quotients are computed for binary presentations");
    }
    let b = pres.generators();
    let ambient = free_basis_weight(b, n, n)?;
    let index: HashMap<&FreeBasisElt, usize> = ambient.iter().enumerate().map(|(i, e)| (e, i)).collect();
    spanning_vectors(pres, n, &|e| index.get(e).copied())
}

fn spanning_vectors(
    pres: &QuadraticPresentation,
    n: usize,
    lookup: &dyn Fn(&FreeBasisElt) -> Option<usize>,
) -> Result<Vec<SparseVec>> {
    if n < 2 || pres.relations().is_empty() {
        return Ok(Vec::new());
    }
    let unary = pres.generators().in_arity(1);
    let mut out = Vec::new();
    for rho in all_surjections(n, n - 1)? {
        let sizes = rho.block_sizes();
        let slot = sizes.iter().position(|&s| s == 2).expect("one block of size 2");
        let mut fillers: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n - 2 {
            fillers = fillers
                .into_iter()
                .flat_map(|f| {
                    unary.iter().map(move |&g| {
                        let mut next = f.clone();
                        next.push(g);
                        next
                    })
                })
                .collect();
        }
        for filler in &fillers {
            for rel in pres.relations() {
                let mut entries = Vec::with_capacity(rel.len());
                for term in rel {
                    let inner: Vec<Surjection> = (0..n - 1)
                        .map(|j| if j == slot { term.shape.clone() } else { Surjection::identity(1) })
                        .collect();
                    let shape = substitute(&rho, &inner)?;
                    let gens = [&filler[..slot], &term.gens[..], &filler[slot..]].concat();
                    let key = FreeBasisElt { shape, gens };
                    let i = lookup(&key).ok_or_else(|| crate::Error::Domain("placement outside ambient".into()))?;
                    entries.push((i, term.coeff.clone()));
                }
                out.push(canonicalize(entries));
            }
        }
    }
    Ok(out)
}

/// The quotient permutad `P(B)/(S)`, computed lazily per arity.
#[derive(Debug)]
pub struct Quotient {
    pres: QuadraticPresentation,
    arities: Vec<OnceLock<ArityQuotient>>,
}

impl Quotient {
    pub fn new(pres: QuadraticPresentation) -> Result<Self> {
        if !pres.is_binary() {
            return domain("quotients are computed for binary presentations");
        }
        let arities = (0..=pres.truncation()).map(|_| OnceLock::new()).collect();
        Ok(Quotient { pres, arities })
    }

    pub fn presentation(&self) -> &QuadraticPresentation {
        &self.pres
    }

    pub fn arity(&self, n: usize) -> Result<&ArityQuotient> {
        if n == 0 || n > self.pres.truncation() {
            return domain(format!("arity {n} outside 1..={}", self.pres.truncation()));
        }
        Ok(self.arities[n].get_or_init(|| self.build(n)))
    }

    fn build(&self, n: usize) -> ArityQuotient {
        let b = self.pres.generators();
        let ambient = free_basis_weight(b, n, n).expect("arity in range");
        let index: HashMap<FreeBasisElt, usize> = ambient.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut echelon = Echelon::new();
        for v in spanning_vectors(&self.pres, n, &|e| index.get(e).copied()).expect("placements are monomials") {
            echelon.insert(v);
        }
        let standard: Vec<usize> = (0..ambient.len()).filter(|&i| !echelon.is_pivot(i)).collect();
        let position = standard.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let degrees = standard.iter().map(|&i| ambient[i].degree(b)).collect();
        ArityQuotient { ambient, index, echelon, standard, position, degrees }
    }

    /// Dimensions by degree in arity `n`.
    pub fn dims_by_degree(&self, n: usize) -> Result<std::collections::BTreeMap<i64, usize>> {
        let a = self.arity(n)?;
        let mut out = std::collections::BTreeMap::new();
        for &d in &a.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        Ok(out)
    }
}

impl PermutadStructure for Quotient {
    fn max_arity(&self) -> usize {
        self.pres.truncation()
    }

    fn dim(&self, n: usize) -> usize {
        self.arity(n).map_or(0, ArityQuotient::dim)
    }

    fn degree(&self, n: usize, idx: usize) -> i64 {
        self.arity(n).expect("arity in range").degree(idx)
    }

    fn label(&self, n: usize, idx: usize) -> String {
        let a = self.arity(n).expect("arity in range");
        a.representative(idx).display(self.pres.generators()).to_string()
    }

    fn diamond(&self, r: &Surjection, left: usize, right: usize) -> Result<SparseVec> {
        let sizes = r.block_sizes();
        if sizes.len() != 2 {
            return domain("◊_r needs r onto 2");
        }
        let x = self.arity(sizes[0])?;
        let y = self.arity(sizes[1])?;
        if left >= x.dim() || right >= y.dim() {
            return domain("basis index out of range");
        }
        let target = self.arity(r.domain_size())?;
        target.normal_form(&free_compose(r, x.representative(left), y.representative(right))?)
    }
}

/// Explicit structure tables; used for suspensions and deliberate mutations.
#[derive(Clone, Debug)]
pub struct TablePermutad {
    degrees: Vec<Vec<i64>>,
    labels: Vec<Vec<String>>,
    constants: HashMap<(Surjection, usize, usize), SparseVec>,
}

impl TablePermutad {
    pub fn from_structure(s: &dyn PermutadStructure, nmax: usize) -> Result<Self> {
        let nmax = nmax.min(s.max_arity());
        let mut degrees = vec![Vec::new(); nmax + 1];
        let mut labels = vec![Vec::new(); nmax + 1];
        for n in 1..=nmax {
            degrees[n] = (0..s.dim(n)).map(|i| s.degree(n, i)).collect();
            labels[n] = (0..s.dim(n)).map(|i| s.label(n, i)).collect();
        }
        let mut constants = HashMap::new();
        for n in 2..=nmax {
            for r in all_surjections(n, 2)? {
                let sizes = r.block_sizes();
                for x in 0..degrees[sizes[0]].len() {
                    for y in 0..degrees[sizes[1]].len() {
                        constants.insert((r.clone(), x, y), s.diamond(&r, x, y)?);
                    }
                }
            }
        }
        Ok(TablePermutad { degrees, labels, constants })
    }

    /// Overwrites one structure constant.
    pub fn set_constant(&mut self, r: &Surjection, left: usize, right: usize, value: SparseVec) {
        self.constants.insert((r.clone(), left, right), canonicalize(value));
    }
}

impl PermutadStructure for TablePermutad {
    fn max_arity(&self) -> usize {
        self.degrees.len() - 1
    }

    fn dim(&self, n: usize) -> usize {
        self.degrees.get(n).map_or(0, Vec::len)
    }

    fn degree(&self, n: usize, idx: usize) -> i64 {
        self.degrees[n][idx]
    }

    fn label(&self, n: usize, idx: usize) -> String {
        self.labels[n][idx].clone()
    }

    fn diamond(&self, r: &Surjection, left: usize, right: usize) -> Result<SparseVec> {
        self.constants
            .get(&(r.clone(), left, right))
            .cloned()
            .ok_or_else(|| crate::Error::Domain(format!("no structure constant for ◊_{}", r.bracketed())))
    }
}

/// The permutadic suspension `𝔰A` with `𝔰A(n̲) = ↑ⁿA(n̲)`.
pub fn suspend(s: &dyn PermutadStructure, nmax: usize) -> Result<TablePermutad> {
    let mut table = TablePermutad::from_structure(s, nmax)?;
    for (n, degs) in table.degrees.iter_mut().enumerate() {
        for d in degs.iter_mut() {
            *d += n as i64;
        }
    }
    for ((r, left, _), v) in table.constants.iter_mut() {
        let sign = suspension_sign(r, s.degree(r.block_sizes()[0], *left));
        for (_, c) in v.iter_mut() {
            *c = &*c * &sign;
        }
    }
    for (n, labels) in table.labels.iter_mut().enumerate() {
        for l in labels.iter_mut() {
            *l = format!("↑{n}{l}");
        }
    }
    Ok(table)
}

fn apply(s: &dyn PermutadStructure, r: &Surjection, left: &SparseVec, right: &SparseVec) -> Result<SparseVec> {
    let mut acc = Vec::new();
    for (x, a) in left {
        for (y, b) in right {
            let ab = a * b;
            acc.extend(s.diamond(r, *x, *y)?.into_iter().map(|(i, c)| (i, &c * &ab)));
        }
    }
    Ok(canonicalize(acc))
}

/// Checks `◊_u(◊_v ⊗ 1) = ◊_t(1 ⊗ ◊_s)` on all basis triples in arity `n`.
pub fn check_associativity(s: &dyn PermutadStructure, n: usize) -> Result<bool> {
    if n < 3 {
        return Ok(true);
    }
    let unit = |i: usize| vec![(i, Rational::one())];
    for rho in all_surjections(n, 3)? {
        let p = rho.to_partition();
        let u = pi_project(&p, Projection::HeadLast)?.to_surjection();
        let v = pi_project(&p, Projection::FirstSecond)?.to_surjection();
        let t = pi_project(&p, Projection::FirstRest)?.to_surjection();
        let w = pi_project(&p, Projection::SecondThird)?.to_surjection();
        let sizes = rho.block_sizes();
        for a in 0..s.dim(sizes[0]) {
            for b in 0..s.dim(sizes[1]) {
                for c in 0..s.dim(sizes[2]) {
                    let lhs = apply(s, &u, &apply(s, &v, &unit(a), &unit(b))?, &unit(c))?;
                    let rhs = apply(s, &t, &unit(a), &apply(s, &w, &unit(b), &unit(c))?)?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutad::{quadratic_dual, terminal_presentation, twisted_presentation};

    #[test]
    fn terminal_quotient_is_one_dimensional() {
        let q = Quotient::new(terminal_presentation(5)).unwrap();
        for n in 1..=5 {
            assert_eq!(q.dims_by_degree(n).unwrap(), [(0, 1)].into());
        }
        assert_eq!(q.arity(3).unwrap().ideal_rank(), 5);
        assert_eq!(ideal_spanning_set(q.presentation(), 2).unwrap().len(), 1);
    }

    #[test]
    fn dual_acts_by_shuffle_sign() {
        let q = Quotient::new(quadratic_dual(&terminal_presentation(5)).unwrap()).unwrap();
        for n in 2..=5 {
            assert_eq!(q.dims_by_degree(n).unwrap(), [(n as i64, 1)].into());
            for r in all_surjections(n, 2).unwrap() {
                let c = q.diamond(&r, 0, 0).unwrap();
                assert_eq!(c, vec![(0, Rational::sign(r.shuffle_sign()))]);
            }
        }
        let t = Quotient::new(quadratic_dual(&twisted_presentation(4)).unwrap()).unwrap();
        for r in all_surjections(4, 2).unwrap() {
            assert_eq!(t.diamond(&r, 0, 0).unwrap(), vec![(0, Rational::one())]);
        }
    }

    #[test]
    fn suspensions_stay_associative() {
        let q = Quotient::new(terminal_presentation(4)).unwrap();
        let s1 = suspend(&q, 4).unwrap();
        let s2 = suspend(&s1, 4).unwrap();
        for n in 3..=4 {
            assert!(check_associativity(&q, n).unwrap());
            assert!(check_associativity(&s1, n).unwrap());
            assert!(check_associativity(&s2, n).unwrap());
        }
        assert_eq!(s1.degree(3, 0), 3);
    }

    #[test]
    fn a_flipped_constant_breaks_associativity() {
        let q = Quotient::new(terminal_presentation(3)).unwrap();
        let mut t = TablePermutad::from_structure(&q, 3).unwrap();
        t.set_constant(&Surjection::identity(2), 0, 0, vec![(0, -Rational::one())]);
        assert!(!check_associativity(&t, 3).unwrap());
    }
}
