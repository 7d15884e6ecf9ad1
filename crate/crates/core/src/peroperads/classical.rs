use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::combinat::{all_surjections, Surjection};
use crate::error::{domain, Result};
use crate::linalg::{canonicalize, nullspace, ChainComplex, Echelon, Rational, SparseMatrix, SparseVec};

use super::presentation::{BinaryPresentation, BinaryTerm};
use super::PerCollection;

/// A planar tree of a classical non-Σ operad with labelled vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CTree {
    Leaf,
    Node { label: usize, children: Vec<CTree> },
}

impl CTree {
    pub fn corolla(label: usize, arity: usize) -> Self {
        CTree::Node { label, children: vec![CTree::Leaf; arity] }
    }

    pub fn leaves(&self) -> usize {
        match self {
            CTree::Leaf => 1,
            CTree::Node { children, .. } => children.iter().map(CTree::leaves).sum(),
        }
    }

    /// Vertex labels in preorder.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut |label, _| out.push(label));
        out
    }

    /// Vertex arities in preorder.
    pub fn arities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut |_, arity| out.push(arity));
        out
    }

    fn collect(&self, visit: &mut impl FnMut(usize, usize)) {
        if let CTree::Node { label, children } = self {
            visit(*label, children.len());
            for c in children {
                c.collect(visit);
            }
        }
    }

    fn relabel(&self, f: &mut impl FnMut(usize) -> usize) -> CTree {
        match self {
            CTree::Leaf => CTree::Leaf,
            CTree::Node { label, children } => {
                let label = f(*label);
                CTree::Node { label, children: children.iter().map(|c| c.relabel(f)).collect() }
            }
        }
    }

    /// Replaces the `leaf`-th leaf (from 1) by `other`.
    pub fn graft(&self, leaf: usize, other: &CTree) -> CTree {
        fn go(t: &CTree, remaining: &mut usize, other: &CTree) -> CTree {
            match t {
                CTree::Leaf => {
                    *remaining = remaining.wrapping_sub(1);
                    if *remaining == 0 {
                        other.clone()
                    } else {
                        CTree::Leaf
                    }
                }
                CTree::Node { label, children } => {
                    CTree::Node { label: *label, children: children.iter().map(|c| go(c, remaining, other)).collect() }
                }
            }
        }
        let mut remaining = leaf;
        go(self, &mut remaining, other)
    }

    fn replace_node(&self, target: usize, with: &impl Fn(&[CTree]) -> CTree) -> CTree {
        match self {
            CTree::Leaf => CTree::Leaf,
            CTree::Node { label, children } if *label == target => with(children),
            CTree::Node { label, children } => CTree::Node {
                label: *label,
                children: children.iter().map(|c| c.replace_node(target, with)).collect(),
            },
        }
    }
}

impl fmt::Display for CTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CTree::Leaf => write!(f, "·"),
            CTree::Node { label, children } => {
                write!(f, "(#{label}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn parity(x: i64) -> i32 {
    if x.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign of reordering graded symbols from `before` to `after`.
fn koszul_sign(before: &[usize], after: &[usize], degree: &impl Fn(usize) -> i64) -> i32 {
    let rank: HashMap<usize, usize> = after.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut exponent = 0;
    for (i, &a) in before.iter().enumerate() {
        for &b in &before[i + 1..] {
            if rank[&a] > rank[&b] {
                exponent += degree(a) * degree(b);
            }
        }
    }
    parity(exponent)
}

/// Preorder-numbered copy of `t`, so that ids track vertices through regrafting.
fn with_ids(t: &CTree, start: usize) -> CTree {
    let mut next = start;
    t.relabel(&mut |_| {
        next += 1;
        next - 1
    })
}

/// `x ∘_i y` on monomials, with vertex degrees given by the label.
fn compose_monomials(x: &CTree, i: usize, y: &CTree, degree: &impl Fn(usize) -> i64) -> (i32, CTree) {
    let (lx, ly) = (x.labels(), y.labels());
    let ids_x = with_ids(x, 0);
    let ids_y = with_ids(y, lx.len());
    let grafted = ids_x.graft(i, &ids_y);
    let before: Vec<usize> = (0..lx.len() + ly.len()).collect();
    let all: Vec<usize> = [lx, ly].concat();
    let sign = koszul_sign(&before, &grafted.labels(), &|id| degree(all[id]));
    (sign, grafted.relabel(&mut |id| all[id]))
}

fn binary_monomials(arity: usize, generators: usize) -> Vec<CTree> {
    if arity == 1 {
        return vec![CTree::Leaf];
    }
    let mut out = Vec::new();
    for left in 1..arity {
        let (ls, rs) = (binary_monomials(left, generators), binary_monomials(arity - left, generators));
        for label in 0..generators {
            for l in &ls {
                for r in &rs {
                    out.push(CTree::Node { label, children: vec![l.clone(), r.clone()] });
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug)]
struct ArityQuotient {
    monomials: Vec<CTree>,
    index: HashMap<CTree, usize>,
    ideal: Echelon,
    standard: Vec<usize>,
    position: HashMap<usize, usize>,
    degrees: Vec<i64>,
}

/// A classical binary quadratic non-Σ operad, truncated at `max_arity`.
#[derive(Clone, Debug)]
pub struct ClassicalQuotient {
    generator_degrees: Vec<i64>,
    arities: Vec<ArityQuotient>,
}

impl ClassicalQuotient {
    pub fn new(pres: &BinaryPresentation, max_arity: usize) -> Result<Self> {
        let generator_degrees: Vec<i64> = pres.generators().iter().map(|g| g.degree).collect();
        let g = generator_degrees.len();
        let degree = |l: usize| generator_degrees[l];
        let mut arities = Vec::new();
        let mut previous: Vec<SparseVec> = Vec::new();
        for k in 0..=max_arity.max(1) {
            let monomials = if k == 0 { Vec::new() } else { binary_monomials(k, g) };
            let index: HashMap<CTree, usize> = monomials.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            let mut ideal = Echelon::new();
            let monomial_index = |t: &CTree| index[t];
            if k == 3 {
                for relation in pres.relations() {
                    let v = relation
                        .iter()
                        .map(|t: &BinaryTerm| {
                            let (s, m) = compose_monomials(&CTree::corolla(t.outer, 2), t.slot, &CTree::corolla(t.inner, 2), &degree);
                            (monomial_index(&m), &t.coeff * &Rational::sign(s))
                        })
                        .collect();
                    ideal.insert(canonicalize(v));
                }
            } else if k > 3 {
                let lower = &arities[k - 1];
                let lower: &ArityQuotient = lower;
                for w in &previous {
                    for a in 0..g {
                        let mu = CTree::corolla(a, 2);
                        let mut images: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); k + 1];
                        for (m, c) in w {
                            let m = &lower.monomials[*m];
                            for i in 1..k {
                                let (s, t) = compose_monomials(m, i, &mu, &degree);
                                images[i - 1].push((monomial_index(&t), c * &Rational::sign(s)));
                            }
                            for j in 1..=2 {
                                let (s, t) = compose_monomials(&mu, j, m, &degree);
                                images[k - 2 + j].push((monomial_index(&t), c * &Rational::sign(s)));
                            }
                        }
                        for v in images {
                            ideal.insert(canonicalize(v));
                        }
                    }
                }
            }
            previous = ideal.rows().cloned().collect();
            previous.sort();
            let standard: Vec<usize> = (0..monomials.len()).filter(|&i| !ideal.is_pivot(i)).collect();
            let position = standard.iter().enumerate().map(|(p, &i)| (i, p)).collect();
            let degrees = standard.iter().map(|&i| monomials[i].labels().iter().map(|&l| degree(l)).sum()).collect();
            arities.push(ArityQuotient { monomials, index, ideal, standard, position, degrees });
        }
        Ok(ClassicalQuotient { generator_degrees, arities })
    }

    pub fn max_arity(&self) -> usize {
        self.arities.len() - 1
    }

    fn arity(&self, k: usize) -> Result<&ArityQuotient> {
        match self.arities.get(k) {
            Some(a) if k > 0 => Ok(a),
            _ => domain(format!("classical data stops at arity {}", self.max_arity())),
        }
    }

    pub fn dim(&self, k: usize) -> Result<usize> {
        Ok(self.arity(k)?.standard.len())
    }

    pub fn degree(&self, k: usize, x: usize) -> Result<i64> {
        Ok(self.arity(k)?.degrees[x])
    }

    pub fn dims_by_degree(&self, k: usize) -> Result<BTreeMap<i64, usize>> {
        let mut out = BTreeMap::new();
        for &d in &self.arity(k)?.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn representative(&self, k: usize, x: usize) -> Result<&CTree> {
        let a = self.arity(k)?;
        Ok(&a.monomials[a.standard[x]])
    }

    /// `y ∘_i z` for basis elements `y ∈ P(p)`, `z ∈ P(q)`.
    pub fn compose(&self, p: usize, i: usize, y: usize, q: usize, z: usize) -> Result<SparseVec> {
        let target = self.arity(p + q - 1)?;
        let degree = |l: usize| self.generator_degrees[l];
        let (s, m) = compose_monomials(self.representative(p, y)?, i, self.representative(q, z)?, &degree);
        Ok(target
            .ideal
            .normal_form(&[(target.index[&m], Rational::sign(s))])
            .into_iter()
            .map(|(j, c)| (target.position[&j], c))
            .collect())
    }
}

/// The quadratic dual of a classical binary presentation under the basis-diagonal pairing.
pub fn classical_quadratic_dual(pres: &BinaryPresentation) -> Result<BinaryPresentation> {
    let basis = pres.weight_two_basis();
    let relations = nullspace(&pres.relation_rows(), basis.len())
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|(i, coeff)| BinaryTerm { slot: basis[i].0, outer: basis[i].1, inner: basis[i].2, coeff })
                .collect()
        })
        .collect();
    let generators = pres
        .generators()
        .iter()
        .map(|g| super::PerGenerator { label: format!("{}*", g.label), degree: 1 - g.degree })
        .collect();
    BinaryPresentation::new(generators, relations)
}

fn cells(p: &ClassicalQuotient, k: usize) -> Result<Vec<CTree>> {
    if k == 1 {
        return Ok(vec![CTree::Leaf]);
    }
    let mut out = Vec::new();
    for m in 2..=k {
        for parts in compositions(k, m) {
            let mut forests: Vec<Vec<CTree>> = vec![Vec::new()];
            for &part in &parts {
                let subs = cells(p, part)?;
                forests = forests
                    .into_iter()
                    .flat_map(|f| subs.iter().map(move |s| [f.as_slice(), std::slice::from_ref(s)].concat()))
                    .collect();
            }
            for label in 0..p.dim(m)? {
                for children in &forests {
                    out.push(CTree::Node { label, children: children.clone() });
                }
            }
        }
    }
    Ok(out)
}

fn compositions(k: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![vec![k]];
    }
    (1..=k + 1 - m)
        .flat_map(|first| compositions(k - first, m - 1).into_iter().map(move |rest| [vec![first], rest].concat()))
        .collect()
}

/// `D(P)(k)`: the cobar complex on the desuspended dual of `P`.
pub fn classical_dual_dg(p: &ClassicalQuotient, k: usize) -> Result<ChainComplex<CTree>> {
    if k == 0 || k > p.max_arity() {
        return domain(format!("classical data stops at arity {}", p.max_arity()));
    }
    let shifted = |arity: usize, x: usize| p.degree(arity, x).map(|d| d - 1);
    // splits[m][x]: (i, p, y, q, z, coefficient) with ↓x* ↦ ±↓y* ∘_i ↓z*.
    let mut splits: Vec<Vec<Vec<(usize, usize, usize, usize, usize, Rational)>>> = vec![Vec::new(); k + 1];
    for m in 2..=k {
        splits[m] = vec![Vec::new(); p.dim(m)?];
        for a in 2..m {
            let b = m + 1 - a;
            for i in 1..=a {
                for y in 0..p.dim(a)? {
                    let sign = Rational::sign(parity(shifted(a, y)?));
                    for z in 0..p.dim(b)? {
                        for (x, c) in p.compose(a, i, y, b, z)? {
                            splits[m][x].push((i, a, y, b, z, &c * &sign));
                        }
                    }
                }
            }
        }
    }
    let mut basis: BTreeMap<i64, Vec<CTree>> = BTreeMap::new();
    for cell in cells(p, k)? {
        let degree = cell.arities().iter().zip(cell.labels()).map(|(&a, x)| shifted(a, x)).sum::<Result<i64>>()?;
        basis.entry(degree).or_default().push(cell);
    }
    for cells in basis.values_mut() {
        cells.sort();
    }
    let index: HashMap<&CTree, usize> =
        basis.values().flat_map(|cells| cells.iter().enumerate().map(|(i, c)| (c, i))).collect();
    let mut boundaries = Vec::new();
    for (&d, cells) in &basis {
        let Some(targets) = basis.get(&(d - 1)) else {
            continue;
        };
        let mut columns = Vec::new();
        for cell in cells {
            let labels = cell.labels();
            let arities = cell.arities();
            let s = labels.len();
            let ids = with_ids(cell, 0);
            let mut vertex_degrees: Vec<i64> =
                arities.iter().zip(&labels).map(|(&a, &x)| shifted(a, x)).collect::<Result<_>>()?;
            vertex_degrees.extend([0, 0]);
            let mut column = Vec::new();
            for v in 0..s {
                let prefix: i64 = vertex_degrees[..v].iter().sum();
                for (i, a, y, b, z, c) in &splits[arities[v]][labels[v]] {
                    let (i, b) = (*i, *b);
                    let replaced = ids.replace_node(v, &|children: &[CTree]| {
                        let inner = CTree::Node { label: s + 1, children: children[i - 1..i - 1 + b].to_vec() };
                        let outer_children =
                            [&children[..i - 1], std::slice::from_ref(&inner), &children[i - 1 + b..]].concat();
                        CTree::Node { label: s, children: outer_children }
                    });
                    let mut degrees = vertex_degrees.clone();
                    degrees[s] = shifted(*a, *y)?;
                    degrees[s + 1] = shifted(b, *z)?;
                    let before: Vec<usize> = (0..v).chain([s, s + 1]).chain(v + 1..s).collect();
                    let sign = parity(prefix) * koszul_sign(&before, &replaced.labels(), &|id| degrees[id]);
                    let target = replaced.relabel(&mut |id| match id {
                        id if id == s => *y,
                        id if id == s + 1 => *z,
                        id => labels[id],
                    });
                    column.push((index[&target], c * &Rational::sign(sign)));
                }
            }
            columns.push(canonicalize(column));
        }
        boundaries.push((d, SparseMatrix::from_columns(targets.len(), columns)?));
    }
    let mut complex = ChainComplex::new(basis);
    for (d, m) in boundaries {
        complex.set_boundary(d, m)?;
    }
    Ok(complex)
}

/// `des*(P)(α) = P(|α|)`, as dimensions by degree.
pub fn des_restrict(p: &ClassicalQuotient, alpha: &Surjection) -> Result<BTreeMap<i64, usize>> {
    p.dims_by_degree(alpha.codomain_size())
}

/// `des*(D(P))(α) = D(P)(|α|)`.
pub fn des_restrict_dual_dg(p: &ClassicalQuotient, alpha: &Surjection) -> Result<ChainComplex<CTree>> {
    classical_dual_dg(p, alpha.codomain_size())
}

/// `des_*(E)(k) = ∏_{α : n̲↠k̲} E(α)`, truncated at `n ≤ nmax`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Pushforward {
    pub k: usize,
    pub nmax: usize,
    /// `(α, dim E(α))` for every object in the truncation.
    pub factors: Vec<(String, usize)>,
    pub total_dim: usize,
}

pub fn des_pushforward(e: &PerCollection, k: usize, nmax: usize) -> Result<Pushforward> {
    if k == 0 {
        return domain("k must be positive");
    }
    let mut factors = Vec::new();
    for n in k..=nmax {
        for alpha in all_surjections(n, k)? {
            factors.push((alpha.bracketed(), e.dim(&alpha)));
        }
    }
    let total_dim = factors.iter().map(|f| f.1).sum();
    Ok(Pushforward { k, nmax, factors, total_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peroperads::{anti_associative_presentation, one_per_presentation, PerGenerator};

    #[test]
    fn associative_operad_and_its_dual() {
        let ass = ClassicalQuotient::new(&one_per_presentation(), 6).unwrap();
        let dual = ClassicalQuotient::new(&classical_quadratic_dual(&one_per_presentation()).unwrap(), 6).unwrap();
        for k in 1..=6 {
            assert_eq!(ass.dims_by_degree(k).unwrap(), BTreeMap::from([(0, 1)]));
            let top = if k == 1 { 0 } else { k as i64 - 1 };
            assert_eq!(dual.dims_by_degree(k).unwrap(), BTreeMap::from([(top, 1)]));
        }
    }

    #[test]
    fn associative_is_koszul() {
        let dual = ClassicalQuotient::new(&classical_quadratic_dual(&one_per_presentation()).unwrap(), 6).unwrap();
        for k in 1..=6 {
            let d = classical_dual_dg(&dual, k).unwrap();
            assert!(d.is_complex().unwrap());
            assert_eq!(d.betti().unwrap(), BTreeMap::from([(0, 1)]), "{k}");
        }
    }

    #[test]
    fn anti_associative_fails_first_in_arity_five() {
        let anti = anti_associative_presentation();
        let p = ClassicalQuotient::new(&anti, 5).unwrap();
        assert_eq!(p.dim(4).unwrap(), 0);
        let dual = ClassicalQuotient::new(&classical_quadratic_dual(&anti).unwrap(), 5).unwrap();
        assert_eq!(dual.dim(4).unwrap(), 0);
        assert_eq!(classical_dual_dg(&dual, 4).unwrap().betti().unwrap(), BTreeMap::new());
        assert_eq!(classical_dual_dg(&dual, 5).unwrap().betti().unwrap(), BTreeMap::from([(1, 4)]));
    }

    #[test]
    fn grafting_signs() {
        let odd = |_: usize| 1;
        let (s, t) = compose_monomials(&CTree::corolla(0, 2), 1, &CTree::corolla(1, 2), &odd);
        assert_eq!((s, t.labels()), (1, vec![0, 1]));
        let x = CTree::corolla(0, 2).graft(2, &CTree::corolla(1, 2));
        let (s, t) = compose_monomials(&x, 1, &CTree::corolla(2, 2), &odd);
        assert_eq!((s, t.labels()), (-1, vec![0, 2, 1]));
        assert_eq!(t.to_string(), "(#0 (#2 · ·) (#1 · ·))");
    }

    #[test]
    fn pushforward_dimensions() {
        let e = PerCollection::pulled(BTreeMap::from([(2, vec![PerGenerator { label: "xi".into(), degree: 0 }])]))
            .unwrap();
        let push = des_pushforward(&e, 2, 4).unwrap();
        assert_eq!(push.factors.len(), 2 + 6 + 14);
        assert_eq!(push.total_dim, 22);
        assert_eq!(des_pushforward(&e, 3, 4).unwrap().total_dim, 0);
    }
}
