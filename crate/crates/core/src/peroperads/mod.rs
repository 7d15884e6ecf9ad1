//! Operads in the operadic category `Per`: planar-tree bases, partial
//! compositions, binary quadratic presentations and their duals, cobar
//! complexes, the minimal model of the terminal operad, and the comparison
//! with classical non-Σ operads along `des`.

mod classical;
mod cobar;
mod free;
mod presentation;
mod quotient;
mod tree;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::combinat::Surjection;
use crate::error::{domain, Result};

pub use classical::{
    classical_dual_dg, classical_quadratic_dual, des_pushforward, des_restrict, des_restrict_dual_dg, CTree,
    ClassicalQuotient, Pushforward,
};
pub use cobar::{
    dual_dg_peroperad, koszulity_check_peroperad, match_by_signs, minimal_model_complex, minimal_model_with,
    per_cobar, ObjectReport, PerCell, PerKoszulReport, SignFlip,
};
pub use free::{free_peroperad_basis, partial_composition, DecoratedTree};
pub use presentation::{
    anti_associative_presentation, dual_relations_at, one_per_presentation, quadratic_dual_peroperad,
    BinaryPresentation, BinaryTerm,
};
pub use quotient::{ObjectQuotient, PerOperadStructure, PerQuotient};
pub use tree::{alpha_v, Origin, PlanarTree};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PerGenerator {
    pub label: String,
    pub degree: i64,
}

/// A 1-connected `Per`-collection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PerCollection {
    /// `E(α)` depends only on `|α|`.
    Pulled(BTreeMap<usize, Vec<PerGenerator>>),
    Explicit(BTreeMap<Surjection, Vec<PerGenerator>>),
}

impl PerCollection {
    pub fn pulled(by_card: BTreeMap<usize, Vec<PerGenerator>>) -> Result<Self> {
        if by_card.get(&1).is_some_and(|g| !g.is_empty()) || by_card.contains_key(&0) {
            return domain("generators must vanish on objects of cardinality 1");
        }
        Ok(PerCollection::Pulled(by_card))
    }

    pub fn explicit(components: BTreeMap<Surjection, Vec<PerGenerator>>) -> Result<Self> {
        if components.iter().any(|(a, g)| a.codomain_size() == 1 && !g.is_empty()) {
            return domain("generators must vanish on objects of cardinality 1");
        }
        Ok(PerCollection::Explicit(components))
    }

    /// One generator `ξ` per cardinality `2..=max_card`, in degree `card − 2`.
    pub fn minimal_model_generators(max_card: usize) -> Self {
        PerCollection::Pulled(
            (2..=max_card)
                .map(|k| (k, vec![PerGenerator { label: format!("xi{}", k - 2), degree: k as i64 - 2 }]))
                .collect(),
        )
    }

    pub fn is_pulled(&self) -> bool {
        matches!(self, PerCollection::Pulled(_))
    }

    pub fn generators(&self, alpha: &Surjection) -> &[PerGenerator] {
        let found = match self {
            PerCollection::Pulled(m) => m.get(&alpha.codomain_size()),
            PerCollection::Explicit(m) => m.get(alpha),
        };
        found.map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, alpha: &Surjection) -> usize {
        self.generators(alpha).len()
    }
}
