use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::combinat::{all_surjections, Surjection};
use crate::error::{domain, Error, Result};
use crate::linalg::{nullspace, Rational, SparseVec};
use crate::percat::elementary_morphisms;

use super::{PerCollection, PerGenerator};

/// `coeff · g_outer ∘_slot g_inner` in weight 2 over an object of cardinality 3.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BinaryTerm {
    pub slot: usize,
    pub outer: usize,
    pub inner: usize,
    pub coeff: Rational,
}

/// A binary quadratic presentation pulled back along `des`: generators live on
/// every object of cardinality 2 and relations on every object of cardinality 3.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BinaryPresentation {
    generators: Vec<PerGenerator>,
    relations: Vec<Vec<BinaryTerm>>,
}

impl BinaryPresentation {
    pub fn new(generators: Vec<PerGenerator>, relations: Vec<Vec<BinaryTerm>>) -> Result<Self> {
        let g = generators.len();
        for t in relations.iter().flatten() {
            if !(1..=2).contains(&t.slot) || t.outer >= g || t.inner >= g {
                return domain(format!("bad relation term {t:?}"));
            }
        }
        Ok(BinaryPresentation { generators, relations })
    }

    pub fn generators(&self) -> &[PerGenerator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Vec<BinaryTerm>] {
        &self.relations
    }

    pub fn collection(&self) -> PerCollection {
        PerCollection::Pulled(BTreeMap::from([(2, self.generators.clone())]))
    }

    /// Index of `(slot, outer, inner)` in the weight-2 basis.
    pub fn weight_two_index(&self, slot: usize, outer: usize, inner: usize) -> usize {
        let g = self.generators.len();
        (slot - 1) * g * g + outer * g + inner
    }

    pub fn weight_two_basis(&self) -> Vec<(usize, usize, usize)> {
        let g = self.generators.len();
        (1..=2).flat_map(|s| (0..g).flat_map(move |o| (0..g).map(move |i| (s, o, i)))).collect()
    }

    pub(crate) fn relation_rows(&self) -> Vec<SparseVec> {
        self.relations
            .iter()
            .map(|r| {
                crate::linalg::canonicalize(
                    r.iter().map(|t| (self.weight_two_index(t.slot, t.outer, t.inner), t.coeff.clone())).collect(),
                )
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BinaryPresentation = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.generators, raw.relations)
    }
}

fn single(sign: i64) -> BinaryPresentation {
    let term = |slot, c| BinaryTerm { slot, outer: 0, inner: 0, coeff: Rational::from_integer(c) };
    BinaryPresentation::new(
        vec![PerGenerator { label: "xi".into(), degree: 0 }],
        vec![vec![term(1, 1), term(2, sign)]],
    )
    .expect("valid relation")
}

/// `1_Per = F(E₀)/(ξ_u∘₁ξ_v − ξ_t∘₂ξ_s)`.
pub fn one_per_presentation() -> BinaryPresentation {
    single(-1)
}

/// The anti-associative relation `ξ_u∘₁ξ_v + ξ_t∘₂ξ_s`.
pub fn anti_associative_presentation() -> BinaryPresentation {
    single(1)
}

fn dual_label(label: &str) -> String {
    match label.strip_suffix('↑') {
        Some(base) => base.to_string(),
        None => format!("{label}↑"),
    }
}

/// `R^⊥` on one object of cardinality 3, with `F²(E)(α)` split over the
/// elementary morphisms out of `α`.
pub fn dual_relations_at(pres: &BinaryPresentation, alpha: &Surjection) -> Result<Vec<Vec<BinaryTerm>>> {
    if alpha.codomain_size() != 3 {
        return domain("relations live on objects of cardinality 3");
    }
    let g = pres.generators.len();
    let mut basis = Vec::new();
    for f in elementary_morphisms(alpha, 2) {
        for outer in 0..g {
            for inner in 0..g {
                basis.push((f.index(), outer, inner));
            }
        }
    }
    let position = |slot: usize, outer: usize, inner: usize| {
        basis.iter().position(|&b| b == (slot, outer, inner)).expect("term in the weight-2 basis")
    };
    let rows: Vec<SparseVec> = pres
        .relations
        .iter()
        .map(|r| {
            crate::linalg::canonicalize(r.iter().map(|t| (position(t.slot, t.outer, t.inner), t.coeff.clone())).collect())
        })
        .collect();
    Ok(nullspace(&rows, basis.len())
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|(i, coeff)| BinaryTerm { slot: basis[i].0, outer: basis[i].1, inner: basis[i].2, coeff })
                .collect()
        })
        .collect())
}

/// `P^! = F(↑E*)/(R^⊥)` under the basis-diagonal pairing.
pub fn quadratic_dual_peroperad(pres: &BinaryPresentation) -> Result<BinaryPresentation> {
    let objects: Vec<Surjection> = (3..=4).map(|n| all_surjections(n, 3)).collect::<Result<Vec<_>>>()?.concat();
    let relations = dual_relations_at(pres, &objects[0])?;
    for alpha in &objects[1..] {
        if dual_relations_at(pres, alpha)? != relations {
            return Err(Error::Contract(format!("annihilator differs at {}", alpha.bracketed())));
        }
    }
    let generators = pres
        .generators
        .iter()
        .map(|g| PerGenerator { label: dual_label(&g.label), degree: 1 - g.degree })
        .collect();
    BinaryPresentation::new(generators, relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(p: &BinaryPresentation) -> Vec<Vec<(usize, i64)>> {
        p.relations()
            .iter()
            .map(|r| r.iter().map(|t| (t.slot, t.coeff.numer().try_into().unwrap())).collect())
            .collect()
    }

    #[test]
    fn one_per_dual_is_anti_associative() {
        let d = quadratic_dual_peroperad(&one_per_presentation()).unwrap();
        assert_eq!(coeffs(&d), vec![vec![(1, 1), (2, 1)]]);
        assert_eq!(d.generators()[0], PerGenerator { label: "xi↑".into(), degree: 1 });
        let dd = quadratic_dual_peroperad(&d).unwrap();
        assert_eq!(coeffs(&dd), vec![vec![(1, -1), (2, 1)]]);
        assert_eq!(dd.generators(), one_per_presentation().generators());
    }

    #[test]
    fn empty_relations_dualize_to_everything() {
        let free = BinaryPresentation::new(one_per_presentation().generators().to_vec(), Vec::new()).unwrap();
        assert_eq!(quadratic_dual_peroperad(&free).unwrap().relations().len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let p = anti_associative_presentation();
        assert_eq!(BinaryPresentation::from_json(&p.to_json()).unwrap(), p);
        assert!(BinaryPresentation::from_json(r#"{"generators":[],"relations":[[{"slot":3,"outer":0,"inner":0,"coeff":"1"}]]}"#).is_err());
    }
}
