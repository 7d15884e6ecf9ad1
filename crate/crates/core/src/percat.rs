//! The operadic category `Per` of surjections and its functor `des` to `Δ_semi`.

use std::fmt;
use std::str::FromStr;

use crate::combinat::{all_surjections, Surjection};
use crate::error::{domain, Error, Result};

/// Cardinality `|α| = k` of an object `α : n̲ ↠ k̲`.
pub fn cardinality(alpha: &Surjection) -> usize {
    alpha.codomain_size()
}

/// A morphism `α′ → α″` of `Per`: an order-preserving collapse `γ` of the codomain.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PerMorphism {
    source: Surjection,
    target: Surjection,
    gamma: Surjection,
}

impl PerMorphism {
    pub fn new(source: Surjection, gamma: Surjection) -> Result<Self> {
        if gamma.domain_size() != source.codomain_size() {
            return domain("gamma must be defined on the codomain of the source");
        }
        if !gamma.is_monotone() {
            return domain("gamma must be order-preserving");
        }
        let target = gamma.after(&source)?;
        Ok(PerMorphism { source, target, gamma })
    }

    pub fn identity(alpha: &Surjection) -> Self {
        PerMorphism {
            source: alpha.clone(),
            target: alpha.clone(),
            gamma: Surjection::identity(alpha.codomain_size()),
        }
    }

    pub fn source(&self) -> &Surjection {
        &self.source
    }

    pub fn target(&self) -> &Surjection {
        &self.target
    }

    /// The underlying map `des(f)` of `Δ_semi`.
    pub fn gamma(&self) -> &Surjection {
        &self.gamma
    }

    /// The standardized fibers `(γα′)⁻¹(i) ↠ γ⁻¹(i)`, one per element of the target codomain.
    pub fn fibers(&self) -> Vec<Surjection> {
        (1..=self.target.codomain_size())
            .map(|i| {
                let values = self.gamma.fiber(i);
                let first = values[0];
                let images = self
                    .source
                    .images()
                    .iter()
                    .filter(|&&v| self.gamma.at(v) == i)
                    .map(|&v| v - first + 1)
                    .collect();
                Surjection::from_parts_unchecked(images, values.len())
            })
            .collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PerMorphism) -> Result<PerMorphism> {
        if self.target != other.source {
            return domain("morphisms are not composable");
        }
        let gamma = other.gamma.after(&self.gamma)?;
        Ok(PerMorphism { source: self.source.clone(), target: other.target.clone(), gamma })
    }
}

impl fmt::Display for PerMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.source, self.gamma)
    }
}

impl FromStr for PerMorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (src, gamma) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse("morphism must read \"alpha_src | gamma\"".into()))?;
        PerMorphism::new(src.parse()?, gamma.parse()?).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `g ∘ f`.
pub fn compose(f: &PerMorphism, g: &PerMorphism) -> Result<PerMorphism> {
    f.then(g)
}

/// The unique morphism out of `alpha` lying over `gamma`.
pub fn opfib_lift(alpha: &Surjection, gamma: &Surjection) -> Result<PerMorphism> {
    PerMorphism::new(alpha.clone(), gamma.clone())
}

/// All order-preserving surjections `k̲ ↠ l̲`.
pub fn monotone_surjections(k: usize, l: usize) -> Vec<Surjection> {
    if l == 0 || l > k {
        return Vec::new();
    }
    all_surjections(k, l)
        .expect("bounds checked")
        .into_iter()
        .filter(Surjection::is_monotone)
        .collect()
}

/// All morphisms out of `alpha`.
pub fn morphisms_from(alpha: &Surjection) -> Vec<PerMorphism> {
    let k = alpha.codomain_size();
    (1..=k)
        .flat_map(|l| monotone_surjections(k, l))
        .map(|gamma| opfib_lift(alpha, &gamma).expect("monotone gamma lifts"))
        .collect()
}

/// The map `γ^{a,b}_i : k̲ ↠ (a+2)̲` shrinking `[i, i+b+1]` to `i`, where `k = a+b+3`.
pub fn gamma_abi(k: usize, a: usize, b: usize, i: usize) -> Result<Surjection> {
    if k != a + b + 3 {
        return domain(format!("k = {k} must equal a+b+3 = {}", a + b + 3));
    }
    if i == 0 || i > a + 2 {
        return domain(format!("index {i} outside 1..={}", a + 2));
    }
    Ok(collapse_interval(k, i, b + 2))
}

fn collapse_interval(k: usize, start: usize, len: usize) -> Surjection {
    let images = (1..=k)
        .map(|j| {
            if j < start {
                j
            } else if j < start + len {
                start
            } else {
                j + 1 - len
            }
        })
        .collect();
    Surjection::from_parts_unchecked(images, k + 1 - len)
}

/// A morphism `F ◁_i α → β` all of whose fibers except the `i`-th are trivial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ElementaryMorphism {
    morphism: PerMorphism,
    index: usize,
    fiber: Surjection,
    quotient: Surjection,
}

impl ElementaryMorphism {
    /// Collapses the codomain interval `[start, start+len−1]` of `alpha` to a point.
    pub fn collapsing(alpha: &Surjection, start: usize, len: usize) -> Result<Self> {
        let k = alpha.codomain_size();
        if len == 0 || start == 0 || start + len - 1 > k {
            return domain("interval outside the codomain");
        }
        let morphism = opfib_lift(alpha, &collapse_interval(k, start, len))?;
        let fiber = morphism.fibers().swap_remove(start - 1);
        let quotient = morphism.target().clone();
        Ok(ElementaryMorphism { morphism, index: start, fiber, quotient })
    }

    pub fn morphism(&self) -> &PerMorphism {
        &self.morphism
    }

    pub fn source(&self) -> &Surjection {
        self.morphism.source()
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn fiber(&self) -> &Surjection {
        &self.fiber
    }

    pub fn quotient(&self) -> &Surjection {
        &self.quotient
    }
}

/// Elementary morphisms out of `alpha` whose fiber and quotient both have
/// cardinality at least `min_card`.
///
/// With `min_card = 2` these are the lifts of the `γ^{a,b}_i`; with
/// `min_card = 1` the identity-type collapses and the collapse onto `U_n` are
/// included as well.
pub fn elementary_morphisms(alpha: &Surjection, min_card: usize) -> Vec<ElementaryMorphism> {
    let k = alpha.codomain_size();
    let mut out = Vec::new();
    for len in min_card.max(1)..=k {
        if k + 1 - len < min_card {
            continue;
        }
        for start in 1..=k + 1 - len {
            out.push(ElementaryMorphism::collapsing(alpha, start, len).expect("interval in range"));
        }
    }
    out
}

/// `|Surj(n,k)|` for `n = k..=nmax`.
pub fn grothendieck_fiber_count(k: usize, nmax: usize) -> Result<Vec<u128>> {
    if k == 0 || nmax < k {
        return domain("need 1 <= k <= nmax");
    }
    Ok((k..=nmax).map(|n| crate::combinat::surjection_count(n, k)).collect())
}
