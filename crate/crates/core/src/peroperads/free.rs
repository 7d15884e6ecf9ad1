use std::fmt;
use std::str::FromStr;

use crate::combinat::{substitute, Surjection};
use crate::error::{domain, Error, Result};
use crate::percat::ElementaryMorphism;

use super::tree::{alpha_v, Origin, PlanarTree};
use super::PerCollection;

/// A basis element of a free `Per`-operad: a planar tree over `α` whose vertex
/// `v` carries the object `α_v` and a generator index into `E(α_v)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DecoratedTree {
    alpha: Surjection,
    tree: PlanarTree,
    labels: Vec<usize>,
    objects: Vec<Surjection>,
}

impl DecoratedTree {
    pub fn new(alpha: Surjection, tree: PlanarTree, labels: Vec<usize>) -> Result<Self> {
        if tree.leaves() != alpha.codomain_size() {
            return domain("tree leaves must match the cardinality of the ambient object");
        }
        if labels.len() != tree.vertex_count() {
            return domain("one label per vertex is required");
        }
        let objects = (0..tree.vertex_count()).map(|v| alpha_v(&alpha, &tree, v)).collect::<Result<_>>()?;
        Ok(DecoratedTree { alpha, tree, labels, objects })
    }

    /// The vertex-free tree over `U_n`.
    pub fn trivial(n: usize) -> Self {
        DecoratedTree {
            alpha: Surjection::terminal(n),
            tree: PlanarTree::leaf(),
            labels: Vec::new(),
            objects: Vec::new(),
        }
    }

    pub fn alpha(&self) -> &Surjection {
        &self.alpha
    }

    pub fn tree(&self) -> &PlanarTree {
        &self.tree
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn objects(&self) -> &[Surjection] {
        &self.objects
    }

    pub fn decorations(&self) -> impl Iterator<Item = (&Surjection, usize)> {
        self.objects.iter().zip(self.labels.iter().copied())
    }

    /// Vertex degrees, in preorder.
    pub fn vertex_degrees(&self, e: &PerCollection) -> Result<Vec<i64>> {
        self.decorations()
            .map(|(obj, l)| match e.generators(obj).get(l) {
                Some(g) => Ok(g.degree),
                None => domain(format!("no generator {l} on {}", obj.bracketed())),
            })
            .collect()
    }

    pub fn degree(&self, e: &PerCollection) -> Result<i64> {
        Ok(self.vertex_degrees(e)?.iter().sum())
    }

    fn write_node(&self, f: &mut fmt::Formatter<'_>, pos: &mut usize, vertex: &mut usize) -> fmt::Result {
        let arity = self.tree.word()[*pos];
        *pos += 1;
        if arity == 0 {
            return write!(f, "·");
        }
        let v = *vertex;
        *vertex += 1;
        write!(f, "(a={}", self.objects[v].bracketed())?;
        if self.labels[v] != 0 {
            write!(f, "#{}", self.labels[v])?;
        }
        for _ in 0..arity {
            write!(f, " ")?;
            self.write_node(f, pos, vertex)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tree.vertex_count() == 0 {
            return write!(f, "{}", self.alpha.bracketed());
        }
        self.write_node(f, &mut 0, &mut 0)
    }
}

struct Parsed {
    word: Vec<usize>,
    labels: Vec<usize>,
    objects: Vec<Surjection>,
}

fn parse_node(chars: &[char], at: &mut usize, out: &mut Parsed) -> Result<()> {
    let err = |msg: &str| Error::Parse(format!("{msg} in tree text"));
    while chars.get(*at).is_some_and(|c| c.is_whitespace()) {
        *at += 1;
    }
    match chars.get(*at) {
        Some('·') => {
            *at += 1;
            out.word.push(0);
            Ok(())
        }
        Some('(') => {
            *at += 1;
            if chars.get(*at..*at + 2) != Some(&['a', '=']) {
                return Err(err("expected a="));
            }
            *at += 2;
            let close = chars[*at..].iter().position(|&c| c == '⟩').ok_or_else(|| err("unclosed ⟨"))? + *at;
            let object: Surjection = chars[*at..=close].iter().collect::<String>().parse()?;
            *at = close + 1;
            let mut label = 0;
            if chars.get(*at) == Some(&'#') {
                *at += 1;
                let start = *at;
                while chars.get(*at).is_some_and(|c| c.is_ascii_digit()) {
                    *at += 1;
                }
                label = chars[start..*at].iter().collect::<String>().parse().map_err(|_| err("bad label"))?;
            }
            out.word.push(object.codomain_size());
            out.labels.push(label);
            out.objects.push(object.clone());
            for _ in 0..object.codomain_size() {
                parse_node(chars, at, out)?;
            }
            while chars.get(*at).is_some_and(|c| c.is_whitespace()) {
                *at += 1;
            }
            if chars.get(*at) != Some(&')') {
                return Err(err("expected )"));
            }
            *at += 1;
            Ok(())
        }
        _ => Err(err("expected ( or ·")),
    }
}

/// Rebuilds the ambient object from the vertex decorations.
fn ambient(word: &[usize], objects: &[Surjection], pos: &mut usize, vertex: &mut usize, size: usize) -> Result<Surjection> {
    let arity = word[*pos];
    *pos += 1;
    if arity == 0 {
        return Ok(Surjection::terminal(size));
    }
    let object = objects[*vertex].clone();
    *vertex += 1;
    if object.domain_size() != size {
        return Err(Error::Parse(format!("{} does not fit a fiber of size {size}", object.bracketed())));
    }
    let inner = object
        .block_sizes()
        .into_iter()
        .map(|m| ambient(word, objects, pos, vertex, m))
        .collect::<Result<Vec<_>>>()?;
    substitute(&object, &inner)
}

impl FromStr for DecoratedTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('⟨') {
            let alpha: Surjection = s.parse()?;
            if alpha.codomain_size() != 1 {
                return Err(Error::Parse("a bare object must be some U_n".into()));
            }
            return Ok(DecoratedTree::trivial(alpha.domain_size()));
        }
        let chars: Vec<char> = s.chars().collect();
        let mut parsed = Parsed { word: Vec::new(), labels: Vec::new(), objects: Vec::new() };
        let mut at = 0;
        parse_node(&chars, &mut at, &mut parsed)?;
        if at != chars.len() {
            return Err(Error::Parse("trailing input".into()));
        }
        let root_size = parsed.objects.first().map(Surjection::domain_size).unwrap_or(1);
        let alpha = ambient(&parsed.word, &parsed.objects, &mut 0, &mut 0, root_size)?;
        let tree = PlanarTree::from_word(parsed.word)?;
        let built = DecoratedTree::new(alpha, tree, parsed.labels)?;
        if built.objects != parsed.objects {
            return Err(Error::Parse("decorations are inconsistent with the ambient object".into()));
        }
        Ok(built)
    }
}

/// Basis of `F^s(E)(α)`: trees with `s` vertices and one generator per vertex.
pub fn free_peroperad_basis(e: &PerCollection, alpha: &Surjection, s: usize) -> Result<Vec<DecoratedTree>> {
    let k = alpha.codomain_size();
    if s == 0 {
        return Ok(if k == 1 { vec![DecoratedTree::trivial(alpha.domain_size())] } else { Vec::new() });
    }
    let mut out = Vec::new();
    for tree in PlanarTree::with_vertices(k, s) {
        let shell = DecoratedTree::new(alpha.clone(), tree, vec![0; s])?;
        let dims: Vec<usize> = shell.objects.iter().map(|o| e.dim(o)).collect();
        let mut labels: Vec<Vec<usize>> = vec![Vec::new()];
        for &d in &dims {
            labels = labels.into_iter().flat_map(|l| (0..d).map(move |x| [l.as_slice(), &[x]].concat())).collect();
        }
        for l in labels {
            out.push(DecoratedTree { labels: l, ..shell.clone() });
        }
    }
    Ok(out)
}

/// `(−1)^{|inner|·Σ|outer vertices after the graft|}`.
pub(crate) fn graft_sign(outer_degrees: &[i64], before: usize, inner_degree: i64) -> i32 {
    let after: i64 = outer_degrees[before..].iter().sum();
    if (after * inner_degree).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign of moving the inner vertices of a replaced vertex past the
/// child subtrees that now precede them.
pub(crate) fn replacement_sign(origins: &[Origin], replaced: usize, outer: &[i64], inner: &[i64]) -> i32 {
    let mut passed = 0i64;
    let mut exponent = 0i64;
    for o in origins {
        match *o {
            Origin::Outer(w) if w > replaced => passed += outer[w],
            Origin::Outer(_) => {}
            Origin::Inner(u) => exponent += inner[u] * passed,
        }
    }
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Relabels a rebuilt tree's vertices from their origins.
pub(crate) fn rebuild<T: Clone>(origins: &[Origin], outer: &[T], inner: &[T]) -> Vec<T> {
    origins
        .iter()
        .map(|o| match *o {
            Origin::Outer(w) => outer[w].clone(),
            Origin::Inner(u) => inner[u].clone(),
        })
        .collect()
}

/// `x ∘_f y` for `F ◁_i α → β`, with `x` over `β` and `y` over `F`.
pub fn partial_composition(
    e: &PerCollection,
    f: &ElementaryMorphism,
    x: &DecoratedTree,
    y: &DecoratedTree,
) -> Result<(i32, DecoratedTree)> {
    if x.alpha() != f.quotient() || y.alpha() != f.fiber() {
        return domain("decorations do not match the elementary morphism");
    }
    let (tree, before) = x.tree.graft(f.index(), &y.tree)?;
    let labels = [&x.labels[..before], &y.labels[..], &x.labels[before..]].concat();
    let composed = DecoratedTree::new(f.source().clone(), tree, labels)?;
    let expected: Vec<&Surjection> =
        x.objects[..before].iter().chain(&y.objects).chain(&x.objects[before..]).collect();
    if composed.objects.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Contract("vertex decorations changed under grafting".into()));
    }
    let sign = graft_sign(&x.vertex_degrees(e)?, before, y.degree(e)?);
    Ok((sign, composed))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::percat::elementary_morphisms;
    use crate::peroperads::PerGenerator;

    fn s(images: &[usize]) -> Surjection {
        Surjection::new(images.to_vec()).unwrap()
    }

    fn binary(label: &str, degree: i64) -> PerCollection {
        PerCollection::pulled(BTreeMap::from([(2, vec![PerGenerator { label: label.into(), degree }])])).unwrap()
    }

    #[test]
    fn low_weights() {
        let e = PerCollection::minimal_model_generators(6);
        let alpha = s(&[1, 2, 3, 1]);
        assert_eq!(free_peroperad_basis(&e, &alpha, 0).unwrap().len(), 0);
        assert_eq!(free_peroperad_basis(&e, &s(&[1, 1]), 0).unwrap().len(), 1);
        assert_eq!(free_peroperad_basis(&e, &alpha, 1).unwrap().len(), 1);
        let two = free_peroperad_basis(&e, &alpha, 2).unwrap();
        assert_eq!(two.len(), elementary_morphisms(&alpha, 2).len());
        let k4 = s(&[1, 2, 3, 4]);
        let total: usize = (1..=3).map(|w| free_peroperad_basis(&e, &k4, w).unwrap().len()).sum();
        assert_eq!(total, 11);
    }

    #[test]
    fn serialization_round_trip() {
        let e = PerCollection::minimal_model_generators(6);
        let alpha = s(&[2, 1, 3, 3, 4, 1]);
        for w in 1..=3 {
            for t in free_peroperad_basis(&e, &alpha, w).unwrap() {
                let text = t.to_string();
                assert_eq!(text.parse::<DecoratedTree>().unwrap(), t, "{text}");
            }
        }
        let trivial = DecoratedTree::trivial(3);
        assert_eq!(trivial.to_string().parse::<DecoratedTree>().unwrap(), trivial);
        assert!("(a=⟨1,2⟩ · (a=⟨1,1⟩ · ·))".parse::<DecoratedTree>().is_err());
    }

    #[test]
    fn grafting_corollas() {
        let e = binary("mu", 0);
        let alpha = s(&[1, 2, 3]);
        let f = elementary_morphisms(&alpha, 2).into_iter().find(|f| f.index() == 1).unwrap();
        let x = free_peroperad_basis(&e, f.quotient(), 1).unwrap().remove(0);
        let y = free_peroperad_basis(&e, f.fiber(), 1).unwrap().remove(0);
        let (sign, t) = partial_composition(&e, &f, &x, &y).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(t.tree().word(), &[2, 2, 0, 0, 0]);
    }

    #[test]
    fn unit_fibers_act_trivially() {
        let e = binary("mu", 1);
        let alpha = s(&[1, 2, 1, 3]);
        for f in elementary_morphisms(&alpha, 1).into_iter().filter(|f| f.fiber().codomain_size() == 1) {
            for x in free_peroperad_basis(&e, &alpha, 2).unwrap() {
                let unit = DecoratedTree::trivial(f.fiber().domain_size());
                assert_eq!(partial_composition(&e, &f, &x, &unit).unwrap(), (1, x.clone()));
            }
        }
    }

    #[test]
    fn odd_grafts_pick_up_signs() {
        let e = binary("m", 1);
        let alpha = s(&[1, 2, 3]);
        let f = elementary_morphisms(&alpha, 2).into_iter().find(|f| f.index() == 1).unwrap();
        let x = free_peroperad_basis(&e, f.quotient(), 1).unwrap().remove(0);
        let y = free_peroperad_basis(&e, f.fiber(), 1).unwrap().remove(0);
        // y lands after the root, which is the only vertex: nothing to pass.
        assert_eq!(partial_composition(&e, &f, &x, &y).unwrap().0, 1);
        let alpha4 = s(&[1, 2, 3, 4]);
        let f = elementary_morphisms(&alpha4, 2).into_iter().find(|f| f.index() == 1 && f.fiber().codomain_size() == 2).unwrap();
        let x = free_peroperad_basis(&e, f.quotient(), 2).unwrap().into_iter().find(|t| t.tree().word() == [2, 0, 2, 0, 0]).unwrap();
        let y = free_peroperad_basis(&e, f.fiber(), 1).unwrap().remove(0);
        // y jumps over the right vertex of x.
        assert_eq!(partial_composition(&e, &f, &x, &y).unwrap().0, -1);
    }
}
