//! Collections, free permutads, quadratic presentations and their quotients.

mod presentation;
mod quotient;

use std::collections::BTreeMap;
use std::fmt;

use crate::combinat::{all_surjections, substitute, Surjection};
use crate::error::{domain, Result};

pub use presentation::{
    quadratic_dual, suspension_sign, terminal_presentation, twisted_presentation, PresentationJson,
    QuadraticPresentation, Relation, RelationTerm,
};
pub use quotient::{
    check_associativity, ideal_spanning_set, suspend, ArityQuotient, PermutadStructure, Quotient, TablePermutad,
};

/// Default truncation arity.
pub const DEFAULT_TRUNCATION: usize = 7;

#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub struct Generator {
    pub arity: usize,
    pub degree: i64,
    pub label: String,
}

/// A graded collection given by a finite list of generators, truncated at an arity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Collection {
    generators: Vec<Generator>,
    truncation: usize,
}

impl Collection {
    pub fn new(generators: Vec<Generator>, truncation: usize) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.arity == 0 || g.arity > truncation {
                return domain(format!("generator {} has arity {} outside 1..={truncation}", g.label, g.arity));
            }
            if generators[..i].iter().any(|h| h.label == g.label) {
                return domain(format!("duplicate generator label {}", g.label));
            }
        }
        Ok(Collection { generators, truncation })
    }

    /// One degree-`n−1` generator `c_{n−1}` in each arity `n ≤ truncation`.
    pub fn one_per_arity(truncation: usize, shifted: bool) -> Self {
        let generators = (1..=truncation)
            .map(|n| Generator {
                arity: n,
                degree: if shifted { n as i64 - 1 } else { 0 },
                label: format!("c{}", n - 1),
            })
            .collect();
        Collection { generators, truncation }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, id: usize) -> &Generator {
        &self.generators[id]
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// Generator ids of the given arity, in declaration order.
    pub fn in_arity(&self, n: usize) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].arity == n).collect()
    }

    /// The components `(arity, degree) → labels`.
    pub fn components(&self) -> BTreeMap<(usize, i64), Vec<String>> {
        let mut out: BTreeMap<(usize, i64), Vec<String>> = BTreeMap::new();
        for g in &self.generators {
            out.entry((g.arity, g.degree)).or_default().push(g.label.clone());
        }
        out
    }
}

/// A basis monomial of a free permutad: a shape and one generator per block.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FreeBasisElt {
    pub shape: Surjection,
    pub gens: Vec<usize>,
}

impl FreeBasisElt {
    pub fn weight(&self) -> usize {
        self.gens.len()
    }

    pub fn arity(&self) -> usize {
        self.shape.domain_size()
    }

    pub fn degree(&self, b: &Collection) -> i64 {
        self.gens.iter().map(|&g| b.generator(g).degree).sum()
    }

    pub fn display<'a>(&'a self, b: &'a Collection) -> impl fmt::Display + 'a {
        DisplayElt { elt: self, b }
    }
}

struct DisplayElt<'a> {
    elt: &'a FreeBasisElt,
    b: &'a Collection,
}

impl fmt::Display for DisplayElt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.elt.gens.iter().map(|&g| self.b.generator(g).label.as_str()).collect();
        write!(f, "{}({})", self.elt.shape.bracketed(), labels.join(","))
    }
}

fn generator_tuples(b: &Collection, sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut tuples = vec![Vec::new()];
    for &size in sizes {
        let choices = b.in_arity(size);
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                choices.iter().map(move |&g| {
                    let mut next = t.clone();
                    next.push(g);
                    next
                })
            })
            .collect();
    }
    tuples
}

/// Weight-`k` monomials of `P(B)(n̲)`, ordered by shape then generators.
pub fn free_basis_weight(b: &Collection, n: usize, k: usize) -> Result<Vec<FreeBasisElt>> {
    if n == 0 || n > b.truncation() {
        return domain(format!("arity {n} outside 1..={}", b.truncation()));
    }
    let mut out = Vec::new();
    for shape in all_surjections(n, k)? {
        for gens in generator_tuples(b, &shape.block_sizes()) {
            out.push(FreeBasisElt { shape: shape.clone(), gens });
        }
    }
    Ok(out)
}

/// All monomials of `P(B)(n̲)`, grouped by weight.
pub fn free_basis(b: &Collection, n: usize) -> Result<Vec<FreeBasisElt>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(free_basis_weight(b, n, k)?);
    }
    Ok(out)
}

/// The free composite `x ◊_r y`; no sign at the basis level.
pub fn free_compose(r: &Surjection, x: &FreeBasisElt, y: &FreeBasisElt) -> Result<FreeBasisElt> {
    if r.codomain_size() != 2 {
        return domain("◊_r needs r onto 2");
    }
    let sizes = r.block_sizes();
    if x.arity() != sizes[0] || y.arity() != sizes[1] {
        return domain("factor arities do not match the blocks of r");
    }
    let shape = substitute(r, &[x.shape.clone(), y.shape.clone()])?;
    let gens = [x.gens.as_slice(), y.gens.as_slice()].concat();
    Ok(FreeBasisElt { shape, gens })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu() -> Collection {
        Collection::new(vec![Generator { arity: 1, degree: 0, label: "mu".into() }], 7).unwrap()
    }

    #[test]
    fn free_dimensions() {
        for n in 1..=5 {
            let fact: usize = (1..=n).product();
            assert_eq!(free_basis(&mu(), n).unwrap().len(), fact);
        }
        let c = Collection::one_per_arity(4, true);
        assert_eq!(free_basis(&c, 4).unwrap().len(), 75);
        let empty = Collection::new(Vec::new(), 4).unwrap();
        assert!(free_basis(&empty, 3).unwrap().is_empty());
        assert!(free_basis(&mu(), 8).is_err());
    }

    #[test]
    fn composition_concatenates() {
        let b = mu();
        let x = FreeBasisElt { shape: Surjection::identity(1), gens: vec![0] };
        let r: Surjection = "2 1".parse().unwrap();
        let z = free_compose(&r, &x, &x).unwrap();
        assert_eq!(z.shape, r);
        assert_eq!(z.gens, vec![0, 0]);
        assert_eq!(z.display(&b).to_string(), "⟨2,1⟩(mu,mu)");
        let bad: Surjection = "1 1 2".parse().unwrap();
        assert!(free_compose(&bad, &x, &x).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let g = Generator { arity: 1, degree: 0, label: "x".into() };
        assert!(Collection::new(vec![g.clone(), g], 3).is_err());
    }
}
