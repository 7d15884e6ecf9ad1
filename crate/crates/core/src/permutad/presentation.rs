use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::combinat::Surjection;
use crate::error::{domain, Error, Result};
use crate::linalg::{nullspace, Rational, SparseVec};

use super::{free_basis_weight, Collection, FreeBasisElt, Generator, DEFAULT_TRUNCATION};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationTerm {
    pub shape: Surjection,
    pub gens: Vec<usize>,
    pub coeff: Rational,
}

pub type Relation = Vec<RelationTerm>;

/// `P(B)/(S)` with `S` spanned by weight-2 relations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticPresentation {
    generators: Collection,
    relations: Vec<Relation>,
}

impl QuadraticPresentation {
    pub fn new(generators: Collection, relations: Vec<Relation>) -> Result<Self> {
        let mut arity = None;
        for term in relations.iter().flatten() {
            if term.shape.codomain_size() != 2 || term.gens.len() != 2 {
                return domain("relation terms must have weight 2");
            }
            let sizes = term.shape.block_sizes();
            for (g, size) in term.gens.iter().zip(sizes) {
                if *g >= generators.generators().len() || generators.generator(*g).arity != size {
                    return domain("relation generator does not fit its block");
                }
            }
            let n = term.shape.domain_size();
            if *arity.get_or_insert(n) != n {
                return domain("all relation terms must share one arity");
            }
        }
        Ok(QuadraticPresentation { generators, relations })
    }

    pub fn generators(&self) -> &Collection {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn truncation(&self) -> usize {
        self.generators.truncation()
    }

    /// Binary: all generators in arity 1.
    pub fn is_binary(&self) -> bool {
        self.generators.generators().iter().all(|g| g.arity == 1)
    }

    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        let generators = Collection::new(self.generators.generators().to_vec(), truncation)?;
        Ok(QuadraticPresentation { generators, relations: self.relations.clone() })
    }

    /// The relation `term` as a vector over the weight-2 basis of arity 2.
    pub(crate) fn relation_vectors(&self) -> Result<(Vec<FreeBasisElt>, Vec<SparseVec>)> {
        let basis = free_basis_weight(&self.generators, 2, 2)?;
        let index: HashMap<&FreeBasisElt, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let rows = self
            .relations
            .iter()
            .map(|rel| {
                let entries = rel
                    .iter()
                    .map(|t| {
                        let key = FreeBasisElt { shape: t.shape.clone(), gens: t.gens.clone() };
                        index
                            .get(&key)
                            .map(|&i| (i, t.coeff.clone()))
                            .ok_or_else(|| Error::Domain("relation term outside arity 2".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(crate::linalg::canonicalize(entries))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((basis, rows))
    }

    pub fn to_json(&self) -> PresentationJson {
        let label = |g: usize| self.generators.generator(g).label.clone();
        PresentationJson {
            generators: self.generators.generators().to_vec(),
            relations: self
                .relations
                .iter()
                .map(|rel| {
                    rel.iter()
                        .map(|t| TermJson {
                            shape: t.shape.images().to_vec(),
                            gens: t.gens.iter().map(|&g| label(g)).collect(),
                            coeff: t.coeff.clone(),
                        })
                        .collect()
                })
                .collect(),
            truncation: Some(self.truncation()),
        }
    }

    pub fn from_json(json: &PresentationJson) -> Result<Self> {
        let truncation = json.truncation.unwrap_or(DEFAULT_TRUNCATION);
        let generators = Collection::new(json.generators.clone(), truncation)?;
        let relations = json
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|t| {
                        let gens = t
                            .gens
                            .iter()
                            .map(|l| generators.find(l).ok_or_else(|| Error::Parse(format!("unknown generator {l}"))))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(RelationTerm { shape: Surjection::new(t.shape.clone())?, gens, coeff: t.coeff.clone() })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        QuadraticPresentation::new(generators, relations)
    }
}

/// Serialized form `{generators: [{arity, degree, label}], relations: [[{shape, gens, coeff}]]}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<Generator>,
    pub relations: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub shape: Vec<usize>,
    pub gens: Vec<String>,
    pub coeff: Rational,
}

fn single_generator_presentation(sign: i64, truncation: usize) -> QuadraticPresentation {
    let generators = Collection::new(vec![Generator { arity: 1, degree: 0, label: "mu".into() }], truncation)
        .expect("valid generator");
    let term = |images: Vec<usize>, c: i64| RelationTerm {
        shape: Surjection::new(images).expect("bijection"),
        gens: vec![0, 0],
        coeff: Rational::from_integer(c),
    };
    QuadraticPresentation::new(generators, vec![vec![term(vec![1, 2], 1), term(vec![2, 1], sign)]])
        .expect("valid relation")
}

/// The terminal permutad: `◊_⟨1,2⟩(μ,μ) − ◊_⟨2,1⟩(μ,μ)`.
pub fn terminal_presentation(truncation: usize) -> QuadraticPresentation {
    single_generator_presentation(-1, truncation)
}

/// The twisted variant: `◊_⟨1,2⟩(μ,μ) + ◊_⟨2,1⟩(μ,μ)`.
pub fn twisted_presentation(truncation: usize) -> QuadraticPresentation {
    single_generator_presentation(1, truncation)
}

fn dual_label(label: &str) -> String {
    match label.strip_suffix('↑') {
        Some(base) => base.to_string(),
        None => format!("{label}↑"),
    }
}

/// `A^! = P(↑B*)/(S^⊥)` under the basis-diagonal pairing.
pub fn quadratic_dual(pres: &QuadraticPresentation) -> Result<QuadraticPresentation> {
    if !pres.is_binary() {
        return domain("quadratic duals are defined for binary presentations");
    }
    let generators = Collection::new(
        pres.generators()
            .generators()
            .iter()
            .map(|g| Generator { arity: g.arity, degree: 1 - g.degree, label: dual_label(&g.label) })
            .collect(),
        pres.truncation(),
    )?;
    let (basis, rows) = pres.relation_vectors()?;
    let relations = nullspace(&rows, basis.len())
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|(i, coeff)| RelationTerm { shape: basis[i].shape.clone(), gens: basis[i].gens.clone(), coeff })
                .collect()
        })
        .collect();
    QuadraticPresentation::new(generators, relations)
}

/// `ε(r)·(−1)^{r₂(r₁ + deg a₁)}`.
pub fn suspension_sign(r: &Surjection, deg_a1: i64) -> Rational {
    let sizes = r.block_sizes();
    let exponent = sizes[1] as i64 * (sizes[0] as i64 + deg_a1);
    let sign = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
    Rational::sign(sign * r.shuffle_sign())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(p: &QuadraticPresentation) -> Vec<Vec<(String, Rational)>> {
        p.relations()
            .iter()
            .map(|r| r.iter().map(|t| (t.shape.to_string(), t.coeff.clone())).collect())
            .collect()
    }

    #[test]
    fn duals_of_flagships() {
        let one = Rational::one();
        let d = quadratic_dual(&terminal_presentation(7)).unwrap();
        assert_eq!(coeffs(&d), vec![vec![("1 2".to_string(), one.clone()), ("2 1".to_string(), one.clone())]]);
        assert_eq!(d.generators().generator(0).degree, 1);
        assert_eq!(d.generators().generator(0).label, "mu↑");
        let t = quadratic_dual(&twisted_presentation(7)).unwrap();
        assert_eq!(coeffs(&t), vec![vec![("1 2".to_string(), -&one), ("2 1".to_string(), one.clone())]]);
        let dd = quadratic_dual(&d).unwrap();
        assert_eq!(dd.generators().generator(0).label, "mu");
        assert_eq!(dd.generators().generator(0).degree, 0);
    }

    #[test]
    fn empty_relations_dualize_to_everything() {
        let free = QuadraticPresentation::new(terminal_presentation(4).generators().clone(), Vec::new()).unwrap();
        assert_eq!(quadratic_dual(&free).unwrap().relations().len(), 2);
    }

    #[test]
    fn suspension_signs() {
        assert_eq!(suspension_sign(&"1 2".parse().unwrap(), 0), Rational::from_integer(-1));
        assert_eq!(suspension_sign(&"2 1".parse().unwrap(), 1), Rational::from_integer(-1));
    }

    #[test]
    fn json_round_trip() {
        let p = twisted_presentation(5);
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back: PresentationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(QuadraticPresentation::from_json(&back).unwrap(), p);
    }
}
