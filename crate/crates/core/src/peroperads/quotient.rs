use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::combinat::Surjection;
use crate::error::{domain, Result};
use crate::linalg::{Echelon, Rational, SparseVec};
use crate::percat::ElementaryMorphism;

use super::free::{partial_composition, rebuild, replacement_sign, DecoratedTree};
use super::presentation::BinaryPresentation;
use super::tree::PlanarTree;
use super::PerCollection;

/// A `Per`-operad given by bases and structure constants of its partial compositions.
pub trait PerOperadStructure: Sync {
    fn dim(&self, alpha: &Surjection) -> Result<usize>;
    fn degree(&self, alpha: &Surjection, x: usize) -> Result<i64>;
    /// `y ∘_f z` in the basis of the source of `f`.
    fn compose(&self, f: &ElementaryMorphism, y: usize, z: usize) -> Result<SparseVec>;
}

/// `F(E)(α)/(R)(α)` for one object.
#[derive(Clone, Debug)]
pub struct ObjectQuotient {
    alpha: Surjection,
    ambient: Vec<DecoratedTree>,
    index: HashMap<(PlanarTree, Vec<usize>), usize>,
    echelon: Echelon,
    standard: Vec<usize>,
    position: HashMap<usize, usize>,
    degrees: Vec<i64>,
}

impl ObjectQuotient {
    fn build(pres: &BinaryPresentation, e: &PerCollection, alpha: &Surjection) -> Result<Self> {
        let k = alpha.codomain_size();
        let ambient = super::free_peroperad_basis(e, alpha, k - 1)?;
        let index: HashMap<(PlanarTree, Vec<usize>), usize> =
            ambient.iter().enumerate().map(|(i, t)| ((t.tree().clone(), t.labels().to_vec()), i)).collect();
        let degree_of = |l: usize| pres.generators()[l].degree;
        let g = pres.generators().len();
        let mut echelon = Echelon::new();
        if k >= 3 {
            for tree in PlanarTree::with_vertices(k, k - 2) {
                let ternary = tree.arities().iter().position(|&a| a == 3).expect("one ternary vertex");
                let free_slots = k - 3;
                let mut labelings: Vec<Vec<usize>> = vec![Vec::new()];
                for _ in 0..free_slots {
                    labelings = labelings.into_iter().flat_map(|l| (0..g).map(move |x| [l.as_slice(), &[x]].concat())).collect();
                }
                for labeling in labelings {
                    let mut labels = labeling;
                    labels.insert(ternary, usize::MAX);
                    let outer: Vec<i64> =
                        labels.iter().map(|&l| if l == usize::MAX { 0 } else { degree_of(l) }).collect();
                    for relation in pres.relations() {
                        let mut v: Vec<(usize, Rational)> = Vec::new();
                        for t in relation {
                            let (inner_tree, _) = PlanarTree::corolla(2).graft(t.slot, &PlanarTree::corolla(2))?;
                            let (new_tree, origins) = tree.replace_vertex(ternary, &inner_tree)?;
                            let inner_labels = [t.outer, t.inner];
                            let sign = replacement_sign(&origins, ternary, &outer, &inner_labels.map(degree_of));
                            let new_labels = rebuild(&origins, &labels, &inner_labels);
                            let Some(&i) = index.get(&(new_tree, new_labels)) else {
                                return domain("relation term outside the ambient basis");
                            };
                            v.push((i, &t.coeff * &Rational::sign(sign)));
                        }
                        echelon.insert(crate::linalg::canonicalize(v));
                    }
                }
            }
        }
        let standard: Vec<usize> = (0..ambient.len()).filter(|&i| !echelon.is_pivot(i)).collect();
        let position = standard.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let degrees = standard.iter().map(|&i| ambient[i].degree(e)).collect::<Result<_>>()?;
        Ok(ObjectQuotient { alpha: alpha.clone(), ambient, index, echelon, standard, position, degrees })
    }

    fn unit(alpha: &Surjection) -> Self {
        let t = DecoratedTree::trivial(alpha.domain_size());
        let index = HashMap::from([((t.tree().clone(), Vec::new()), 0)]);
        ObjectQuotient {
            alpha: alpha.clone(),
            ambient: vec![t],
            index,
            echelon: Echelon::new(),
            standard: vec![0],
            position: HashMap::from([(0, 0)]),
            degrees: vec![0],
        }
    }

    pub fn alpha(&self) -> &Surjection {
        &self.alpha
    }

    pub fn ambient(&self) -> &[DecoratedTree] {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    pub fn ideal_rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn representative(&self, idx: usize) -> &DecoratedTree {
        &self.ambient[self.standard[idx]]
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.degrees[idx]
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    pub fn normal_form(&self, monomial: &DecoratedTree) -> Result<SparseVec> {
        let Some(&i) = self.index.get(&(monomial.tree().clone(), monomial.labels().to_vec())) else {
            return domain(format!("{monomial} is not in the ambient basis"));
        };
        Ok(self
            .echelon
            .normal_form(&[(i, Rational::one())])
            .into_iter()
            .map(|(j, c)| (self.position[&j], c))
            .collect())
    }
}

/// The quotient `F(E)/(R)` of a pulled binary presentation, built object by object.
#[derive(Debug)]
pub struct PerQuotient {
    pres: BinaryPresentation,
    generators: PerCollection,
    cache: Mutex<HashMap<Surjection, Arc<ObjectQuotient>>>,
}

impl PerQuotient {
    pub fn new(pres: BinaryPresentation) -> Self {
        let generators = pres.collection();
        PerQuotient { pres, generators, cache: Mutex::new(HashMap::new()) }
    }

    pub fn presentation(&self) -> &BinaryPresentation {
        &self.pres
    }

    pub fn object(&self, alpha: &Surjection) -> Result<Arc<ObjectQuotient>> {
        if let Some(hit) = self.cache.lock().expect("quotient cache").get(alpha) {
            return Ok(hit.clone());
        }
        let built = if alpha.codomain_size() == 1 {
            ObjectQuotient::unit(alpha)
        } else {
            ObjectQuotient::build(&self.pres, &self.generators, alpha)?
        };
        let built = Arc::new(built);
        self.cache.lock().expect("quotient cache").insert(alpha.clone(), built.clone());
        Ok(built)
    }

    pub fn dims_by_degree(&self, alpha: &Surjection) -> Result<BTreeMap<i64, usize>> {
        Ok(self.object(alpha)?.dims_by_degree())
    }
}

impl PerOperadStructure for PerQuotient {
    fn dim(&self, alpha: &Surjection) -> Result<usize> {
        Ok(self.object(alpha)?.dim())
    }

    fn degree(&self, alpha: &Surjection, x: usize) -> Result<i64> {
        Ok(self.object(alpha)?.degree(x))
    }

    fn compose(&self, f: &ElementaryMorphism, y: usize, z: usize) -> Result<SparseVec> {
        let outer = self.object(f.quotient())?;
        let inner = self.object(f.fiber())?;
        let target = self.object(f.source())?;
        let (sign, tree) =
            partial_composition(&self.generators, f, outer.representative(y), inner.representative(z))?;
        Ok(target.normal_form(&tree)?.into_iter().map(|(i, c)| (i, &c * &Rational::sign(sign))).collect())
    }
}
