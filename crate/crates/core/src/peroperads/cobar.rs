use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::Surjection;
use crate::error::{domain, Result};
use crate::linalg::{canonicalize, ChainComplex, Rational, SparseMatrix};
use crate::percat::elementary_morphisms;

use super::free::{rebuild, replacement_sign};
use super::presentation::{quadratic_dual_peroperad, BinaryPresentation};
use super::quotient::{PerOperadStructure, PerQuotient};
use super::tree::{alpha_v, PlanarTree};

/// A tree over `α` with one basis index per vertex, in preorder.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PerCell {
    pub tree: PlanarTree,
    pub factors: Vec<usize>,
}

impl fmt::Display for PerCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pos = 0;
        let mut vertex = 0;
        self.write_node(f, &mut pos, &mut vertex)
    }
}

impl PerCell {
    fn write_node(&self, f: &mut fmt::Formatter<'_>, pos: &mut usize, vertex: &mut usize) -> fmt::Result {
        let arity = self.tree.word()[*pos];
        *pos += 1;
        if arity == 0 {
            return write!(f, "·");
        }
        let label = self.factors[*vertex];
        *vertex += 1;
        write!(f, "(")?;
        if label != 0 {
            write!(f, "#{label} ")?;
        }
        for c in 0..arity {
            if c > 0 {
                write!(f, " ")?;
            }
            self.write_node(f, pos, vertex)?;
        }
        write!(f, ")")
    }
}

/// Negates the term of `∂ξ` indexed by `(|α|, |F|, i)` in [`minimal_model_with`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SignFlip {
    pub card: usize,
    pub fiber_card: usize,
    pub index: usize,
}

#[derive(Clone, Debug)]
struct Split {
    index: usize,
    outer_card: usize,
    inner_card: usize,
    y: usize,
    z: usize,
    y_degree: i64,
    z_degree: i64,
    coeff: Rational,
}

/// Per-object data of a quadratic coalgebra: cell degrees and the splittings of each basis element.
#[derive(Clone, Debug, Default)]
struct VertexData {
    degrees: Vec<i64>,
    splits: Vec<Vec<Split>>,
}

fn parity(x: i64) -> i32 {
    if x.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn build(alpha: &Surjection, data: impl Fn(&Surjection) -> Result<VertexData> + Sync) -> Result<ChainComplex<PerCell>> {
    let k = alpha.codomain_size();
    if k == 1 {
        let cell = PerCell { tree: PlanarTree::leaf(), factors: Vec::new() };
        return Ok(ChainComplex::new(BTreeMap::from([(0, vec![cell])])));
    }
    let trees = PlanarTree::all_with_leaves(k);
    let objects: Vec<Vec<Surjection>> = trees
        .iter()
        .map(|t| (0..t.vertex_count()).map(|v| alpha_v(alpha, t, v)).collect())
        .collect::<Result<_>>()?;
    let mut distinct: Vec<&Surjection> = objects.iter().flatten().collect();
    distinct.sort();
    distinct.dedup();
    let table: HashMap<&Surjection, VertexData> = distinct
        .par_iter()
        .map(|&o| Ok((o, data(o)?)))
        .collect::<Result<_>>()?;

    let mut basis: BTreeMap<i64, Vec<PerCell>> = BTreeMap::new();
    for (tree, objs) in trees.iter().zip(&objects) {
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for o in objs {
            let dim = table[o].degrees.len();
            tuples = tuples.into_iter().flat_map(|t| (0..dim).map(move |x| [t.as_slice(), &[x]].concat())).collect();
        }
        for factors in tuples {
            let degree = objs.iter().zip(&factors).map(|(o, &x)| table[o].degrees[x]).sum();
            basis.entry(degree).or_default().push(PerCell { tree: tree.clone(), factors });
        }
    }
    let tree_objects: HashMap<&PlanarTree, &Vec<Surjection>> = trees.iter().zip(&objects).collect();
    let index: HashMap<&PerCell, usize> =
        basis.values().flat_map(|cells| cells.iter().enumerate().map(|(i, c)| (c, i))).collect();

    let mut boundaries = Vec::new();
    for (&d, cells) in &basis {
        let Some(targets) = basis.get(&(d - 1)) else {
            continue;
        };
        let columns: Vec<Vec<(usize, Rational)>> = cells
            .par_iter()
            .map(|cell| {
                let objs = tree_objects[&cell.tree];
                let degrees: Vec<i64> = objs.iter().zip(&cell.factors).map(|(o, &x)| table[o].degrees[x]).collect();
                let mut column = Vec::new();
                let mut prefix = 0i64;
                for (p, (o, &x)) in objs.iter().zip(&cell.factors).enumerate() {
                    let outer_sign = parity(prefix);
                    for s in &table[o].splits[x] {
                        let (inner, _) = PlanarTree::corolla(s.outer_card)
                            .graft(s.index, &PlanarTree::corolla(s.inner_card))
                            .expect("leaf in range");
                        let (tree, origins) = cell.tree.replace_vertex(p, &inner).expect("arity matches");
                        let factors = rebuild(&origins, &cell.factors, &[s.y, s.z]);
                        let sign = outer_sign * replacement_sign(&origins, p, &degrees, &[s.y_degree, s.z_degree]);
                        let target = PerCell { tree, factors };
                        column.push((index[&target], &s.coeff * &Rational::sign(sign)));
                    }
                    prefix += degrees[p];
                }
                canonicalize(column)
            })
            .collect();
        boundaries.push((d, SparseMatrix::from_columns(targets.len(), columns)?));
    }
    let mut complex = ChainComplex::new(basis);
    for (d, m) in boundaries {
        complex.set_boundary(d, m)?;
    }
    Ok(complex)
}

/// `𝔐(α)`: the free `Per`-operad on `ξ_α` of degree `|α| − 2`.
pub fn minimal_model_complex(alpha: &Surjection) -> Result<ChainComplex<PerCell>> {
    minimal_model_with(alpha, None)
}

/// As [`minimal_model_complex`], optionally negating one family of terms of `∂ξ`.
pub fn minimal_model_with(alpha: &Surjection, flip: Option<SignFlip>) -> Result<ChainComplex<PerCell>> {
    minimal_model_signed(alpha, |card, fiber_card, i| {
        // ξ_β ∘_i ξ_F in the convention of the formula is (−1)^{|ξ_β||ξ_F|} times the preorder monomial.
        let outer_card = card + 1 - fiber_card;
        let convention = (outer_card * fiber_card) as i64;
        let sign = parity(((fiber_card + 1) * (i + 1) + fiber_card) as i64 + convention);
        if flip == Some(SignFlip { card, fiber_card, index: i }) {
            -sign
        } else {
            sign
        }
    })
}

pub(crate) fn minimal_model_signed(
    alpha: &Surjection,
    term_sign: impl Fn(usize, usize, usize) -> i32 + Sync,
) -> Result<ChainComplex<PerCell>> {
    build(alpha, |o| {
        let card = o.codomain_size();
        let splits = elementary_morphisms(o, 2)
            .into_iter()
            .map(|f| {
                let fiber_card = f.fiber().codomain_size();
                let i = f.index();
                let sign = term_sign(card, fiber_card, i);
                let outer_card = f.quotient().codomain_size();
                Split {
                    index: i,
                    outer_card,
                    inner_card: fiber_card,
                    y: 0,
                    z: 0,
                    y_degree: outer_card as i64 - 2,
                    z_degree: fiber_card as i64 - 2,
                    coeff: Rational::sign(sign),
                }
            })
            .collect();
        Ok(VertexData { degrees: vec![card as i64 - 2], splits: vec![splits] })
    })
}

/// The cobar complex `Ω(P*)(α)` of a finite-type `Per`-operad, i.e. `D(P)(α)`.
pub fn per_cobar(structure: &dyn PerOperadStructure, alpha: &Surjection) -> Result<ChainComplex<PerCell>> {
    build(alpha, |o| {
        let dim = structure.dim(o)?;
        let degrees = (0..dim).map(|x| Ok(structure.degree(o, x)? - 1)).collect::<Result<Vec<_>>>()?;
        let mut splits = vec![Vec::new(); dim];
        for f in elementary_morphisms(o, 2) {
            let (beta, fiber) = (f.quotient(), f.fiber());
            for y in 0..structure.dim(beta)? {
                let y_degree = structure.degree(beta, y)? - 1;
                for z in 0..structure.dim(fiber)? {
                    let z_degree = structure.degree(fiber, z)? - 1;
                    for (x, c) in structure.compose(&f, y, z)? {
                        splits[x].push(Split {
                            index: f.index(),
                            outer_card: beta.codomain_size(),
                            inner_card: fiber.codomain_size(),
                            y,
                            z,
                            y_degree,
                            z_degree,
                            coeff: &c * &Rational::sign(parity(y_degree)),
                        });
                    }
                }
            }
        }
        Ok(VertexData { degrees, splits })
    })
}

/// `D(P)(α)` for the quotient operad of a presentation.
pub fn dual_dg_peroperad(pres: &BinaryPresentation, alpha: &Surjection) -> Result<ChainComplex<PerCell>> {
    per_cobar(&PerQuotient::new(pres.clone()), alpha)
}

/// A diagonal `±1` change of basis carrying `from` onto `to`, if one exists.
pub fn match_by_signs<L: Clone + Eq + Hash>(
    from: &ChainComplex<L>,
    to: &ChainComplex<L>,
) -> Option<HashMap<L, i32>> {
    if from.bases() != to.bases() {
        return None;
    }
    // Vertices are (degree, index); an entry a at (r, c) must equal s_r·b·s_c.
    let mut edges: HashMap<(i64, usize), Vec<((i64, usize), i32)>> = HashMap::new();
    for &d in from.bases().keys() {
        let (a, b) = (from.boundary(d), to.boundary(d));
        if a.rows() == 0 || a.cols() == 0 {
            continue;
        }
        for c in 0..a.cols() {
            let (ca, cb) = (a.column(c), b.column(c));
            if ca.len() != cb.len() {
                return None;
            }
            for ((ra, xa), (rb, xb)) in ca.iter().zip(cb) {
                if ra != rb {
                    return None;
                }
                let ratio = if xa == xb {
                    1
                } else if *xa == -xb {
                    -1
                } else {
                    return None;
                };
                edges.entry((d, c)).or_default().push(((d - 1, *ra), ratio));
                edges.entry((d - 1, *ra)).or_default().push(((d, c), ratio));
            }
        }
    }
    let mut signs: HashMap<(i64, usize), i32> = HashMap::new();
    for (&d, cells) in from.bases() {
        for i in 0..cells.len() {
            if signs.contains_key(&(d, i)) {
                continue;
            }
            signs.insert((d, i), 1);
            let mut queue = VecDeque::from([(d, i)]);
            while let Some(v) = queue.pop_front() {
                for &(w, ratio) in edges.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                    let want = signs[&v] * ratio;
                    match signs.get(&w) {
                        Some(&s) if s != want => return None,
                        Some(_) => {}
                        None => {
                            signs.insert(w, want);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
    }
    Some(signs.into_iter().map(|((d, i), s)| (from.basis(d)[i].clone(), s)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectReport {
    pub alpha: String,
    pub card: usize,
    pub dims: BTreeMap<i64, usize>,
    pub betti: BTreeMap<i64, usize>,
    /// Dimensions of `P(α)`, keyed by the homological degree `−d` of a class of degree `d`.
    pub expected: BTreeMap<i64, usize>,
    pub d_squared_zero: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerKoszulReport {
    pub max_card: usize,
    pub per_object: Vec<ObjectReport>,
    pub koszul: bool,
}

impl PerKoszulReport {
    pub fn first_failure(&self) -> Option<&ObjectReport> {
        self.per_object.iter().find(|o| !o.matches)
    }
}

/// Compares `H(D(P^!)(α))` with `P(α)` on the objects `⟨1..k⟩` and `⟨1..k,1⟩`, `k ≤ max_card`.
pub fn koszulity_check_peroperad(pres: &BinaryPresentation, max_card: usize) -> Result<PerKoszulReport> {
    if max_card == 0 {
        return domain("max_card must be positive");
    }
    let p = PerQuotient::new(pres.clone());
    let dual = PerQuotient::new(quadratic_dual_peroperad(pres)?);
    let mut per_object = Vec::new();
    for k in 1..=max_card {
        let looped = Surjection::new((1..=k).chain([1]).collect())?;
        for alpha in [Surjection::identity(k), looped] {
            let complex = per_cobar(&dual, &alpha)?;
            let d_squared_zero = complex.is_complex()?;
            let betti = if d_squared_zero { complex.betti()? } else { BTreeMap::new() };
            let expected: BTreeMap<i64, usize> =
                p.dims_by_degree(&alpha)?.into_iter().filter(|(_, v)| *v > 0).map(|(d, v)| (-d, v)).collect();
            let matches = d_squared_zero && betti == expected;
            per_object.push(ObjectReport {
                alpha: alpha.bracketed(),
                card: k,
                dims: complex.dims(),
                betti,
                expected,
                d_squared_zero,
                matches,
            });
        }
    }
    let koszul = per_object.iter().all(|o| o.matches);
    Ok(PerKoszulReport { max_card, per_object, koszul })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::all_surjections;
    use crate::peroperads::{anti_associative_presentation, one_per_presentation};

    #[test]
    fn minimal_model_is_acyclic() {
        for n in 1..=5 {
            for k in 1..=n {
                for alpha in all_surjections(n, k).unwrap().into_iter().step_by(5) {
                    let m = minimal_model_complex(&alpha).unwrap();
                    assert!(m.is_complex().unwrap(), "{alpha}");
                    assert_eq!(m.betti().unwrap(), BTreeMap::from([(0, 1)]), "{alpha}");
                }
            }
        }
        let m = minimal_model_complex(&Surjection::identity(4)).unwrap();
        assert_eq!(m.dims(), BTreeMap::from([(0, 5), (1, 5), (2, 1)]));
    }

    #[test]
    fn binary_signs_at_three() {
        let m = minimal_model_complex(&Surjection::identity(3)).unwrap();
        let top = m.boundary(1);
        let coeff = |word: &[usize]| {
            let i = m.basis(0).iter().position(|c| c.tree.word() == word).unwrap();
            top.get(i, 0)
        };
        assert_eq!(coeff(&[2, 2, 0, 0, 0]), Rational::one());
        assert_eq!(coeff(&[2, 0, 2, 0, 0]), -Rational::one());
    }

    #[test]
    fn formula_without_the_convention_twist_fails_at_five() {
        let bare = |_: usize, fiber_card: usize, i: usize| parity(((fiber_card + 1) * (i + 1) + fiber_card) as i64);
        assert!(minimal_model_signed(&Surjection::identity(4), bare).unwrap().is_complex().unwrap());
        assert!(!minimal_model_signed(&Surjection::identity(5), bare).unwrap().is_complex().unwrap());
    }

    #[test]
    fn flipped_sign_breaks_the_differential() {
        let alpha = Surjection::identity(4);
        let flip = SignFlip { card: 3, fiber_card: 2, index: 1 };
        assert!(!minimal_model_with(&alpha, Some(flip)).unwrap().is_complex().unwrap());
    }

    #[test]
    fn dual_dg_of_the_dual_matches_the_minimal_model() {
        let dual = quadratic_dual_peroperad(&one_per_presentation()).unwrap();
        for alpha in ["1 2 3 4", "2 1 3 1", "1 2 1 3 2"] {
            let alpha: Surjection = alpha.parse().unwrap();
            let d = dual_dg_peroperad(&dual, &alpha).unwrap();
            let m = minimal_model_complex(&alpha).unwrap();
            assert!(d.is_complex().unwrap());
            assert!(match_by_signs(&d, &m).is_some(), "{alpha}");
        }
    }

    #[test]
    fn terminal_operad_is_koszul_and_anti_associative_is_not() {
        assert!(koszulity_check_peroperad(&one_per_presentation(), 4).unwrap().koszul);
        let anti = koszulity_check_peroperad(&anti_associative_presentation(), 5).unwrap();
        let failure = anti.first_failure().unwrap();
        assert_eq!(failure.card, 5);
        assert_eq!(failure.betti, BTreeMap::from([(1, 4)]));
    }
}
