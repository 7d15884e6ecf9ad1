//! The axioms of strongly homotopy permutads, emitted symbolically, and their
//! evaluation on strict degree-0 permutads.

use serde::{Deserialize, Serialize};

use crate::combinat::Surjection;
use crate::error::{domain, Error, Result};
use crate::linalg::{canonicalize, Rational, SparseVec};
use crate::percat::elementary_morphisms;
use crate::permutad::PermutadStructure;

/// `sign · π_β ∘_i π_F`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShTerm {
    pub sign: i32,
    pub beta: Surjection,
    pub i: usize,
    pub fiber: Surjection,
}

/// `∂π_α = Σ terms` when unprimed, `0 = Σ terms` when primed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShRelation {
    pub alpha: Surjection,
    pub primed: bool,
    pub terms: Vec<ShTerm>,
    pub includes_lhs_differential: bool,
}

fn term_sign(fiber_card: usize, i: usize) -> i32 {
    if ((fiber_card + 1) * (i + 1) + fiber_card).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The relation `(P_α)`, or `(P′_α)` with trivial `F` or `β` admitted.
pub fn generate_relation(alpha: &Surjection, primed: bool) -> Result<ShRelation> {
    let min_card = if primed { 1 } else { 2 };
    if alpha.codomain_size() < min_card {
        return domain(format!("(P_α) needs |α| ≥ {min_card}"));
    }
    let terms = elementary_morphisms(alpha, min_card)
        .into_iter()
        .map(|f| ShTerm {
            sign: term_sign(f.fiber().codomain_size(), f.index()),
            beta: f.quotient().clone(),
            i: f.index(),
            fiber: f.fiber().clone(),
        })
        .collect();
    Ok(ShRelation { alpha: alpha.clone(), primed, terms, includes_lhs_differential: !primed })
}

/// Every term has degree `|α| − 3`, the degree of `∂π_α`.
pub fn degree_audit(rel: &ShRelation) -> bool {
    let target = rel.alpha.codomain_size() as i64 - 3;
    rel.terms
        .iter()
        .all(|t| (t.beta.codomain_size() as i64 - 2) + (t.fiber.codomain_size() as i64 - 2) == target)
}

fn scaled(v: SparseVec, c: &Rational) -> impl Iterator<Item = (usize, Rational)> + '_ {
    v.into_iter().map(move |(i, x)| (i, &x * c))
}

/// Whether `π_r = ◊_r` for `|r| = 2` and `π = 0` otherwise satisfies `(P_α)`.
///
/// Only `|α| = 3` constrains a strict structure; for other cardinalities every
/// term contains a vanishing `π`.
pub fn check_strict_instance(alpha: &Surjection, structure: &dyn PermutadStructure) -> Result<bool> {
    if alpha.codomain_size() != 3 {
        return Ok(true);
    }
    if alpha.domain_size() > structure.max_arity() {
        return domain(format!("structure data stops at arity {}", structure.max_arity()));
    }
    if (1..=structure.max_arity()).any(|n| (0..structure.dim(n)).any(|x| structure.degree(n, x) != 0)) {
        return Err(Error::Contract("strict instances must be concentrated in degree 0".into()));
    }
    let sizes = alpha.block_sizes();
    let rel = generate_relation(alpha, false)?;
    for a in 0..structure.dim(sizes[0]) {
        for b in 0..structure.dim(sizes[1]) {
            for c in 0..structure.dim(sizes[2]) {
                let mut total = Vec::new();
                for t in &rel.terms {
                    let sign = Rational::sign(t.sign);
                    let value: Vec<(usize, Rational)> = if t.i == 1 {
                        let mut acc = Vec::new();
                        for (x, coeff) in structure.diamond(&t.fiber, a, b)? {
                            acc.extend(scaled(structure.diamond(&t.beta, x, c)?, &coeff));
                        }
                        acc
                    } else {
                        let mut acc = Vec::new();
                        for (x, coeff) in structure.diamond(&t.fiber, b, c)? {
                            acc.extend(scaled(structure.diamond(&t.beta, a, x)?, &coeff));
                        }
                        acc
                    };
                    total.extend(scaled(canonicalize(value), &sign));
                }
                if !canonicalize(total).is_empty() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    sign: i32,
    beta: String,
    i: usize,
    fiber: String,
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    alpha: String,
    primed: bool,
    terms: Vec<TermJson>,
}

impl ShRelation {
    pub fn to_json(&self) -> serde_json::Value {
        let json = RelationJson {
            alpha: self.alpha.bracketed(),
            primed: self.primed,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson { sign: t.sign, beta: t.beta.bracketed(), i: t.i, fiber: t.fiber.bracketed() })
                .collect(),
        };
        serde_json::to_value(json).expect("relation serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let json: RelationJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let terms = json
            .terms
            .into_iter()
            .map(|t| Ok(ShTerm { sign: t.sign, beta: t.beta.parse()?, i: t.i, fiber: t.fiber.parse()? }))
            .collect::<Result<_>>()?;
        Ok(ShRelation { alpha: json.alpha.parse()?, primed: json.primed, terms, includes_lhs_differential: !json.primed })
    }

    /// `∂π_α = π_u∘₁π_v − …` in plain text.
    pub fn render(&self) -> String {
        let rhs: Vec<String> = self
            .terms
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let op = match (j, t.sign) {
                    (0, 1) => "",
                    (0, _) => "−",
                    (_, 1) => " + ",
                    _ => " − ",
                };
                format!("{op}π{}∘{}π{}", t.beta.bracketed(), t.i, t.fiber.bracketed())
            })
            .collect();
        let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.concat() };
        if self.primed {
            format!("0 = {rhs}")
        } else {
            format!("∂π{} = {rhs}", self.alpha.bracketed())
        }
    }
}
