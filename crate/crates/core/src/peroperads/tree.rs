use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::combinat::Surjection;
use crate::error::{domain, Result};

/// A planar rooted tree stored as its preorder arity word; `0` is a leaf.
///
/// Internal vertices have arity at least 2 and are numbered in preorder.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PlanarTree {
    word: Vec<usize>,
}

/// Where a vertex of a rebuilt tree came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Origin {
    Outer(usize),
    Inner(usize),
}

impl PlanarTree {
    pub fn from_word(word: Vec<usize>) -> Result<Self> {
        let mut open = 1usize;
        for (pos, &a) in word.iter().enumerate() {
            if open == 0 {
                return domain(format!("trailing symbols after position {pos}"));
            }
            if a == 1 {
                return domain("unary vertices are not allowed");
            }
            open = open - 1 + a;
        }
        if open != 0 || word.is_empty() {
            return domain("incomplete tree word");
        }
        Ok(PlanarTree { word })
    }

    pub fn leaf() -> Self {
        PlanarTree { word: vec![0] }
    }

    /// The one-vertex tree with `k` leaves; a bare leaf when `k = 1`.
    pub fn corolla(k: usize) -> Self {
        if k <= 1 {
            return Self::leaf();
        }
        let mut word = vec![k];
        word.extend(std::iter::repeat_n(0, k));
        PlanarTree { word }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn leaves(&self) -> usize {
        self.word.iter().filter(|&&a| a == 0).count()
    }

    pub fn vertex_count(&self) -> usize {
        self.word.len() - self.leaves()
    }

    /// Word positions of the internal vertices, in preorder.
    pub fn vertex_positions(&self) -> Vec<usize> {
        (0..self.word.len()).filter(|&p| self.word[p] > 0).collect()
    }

    /// Arities of the internal vertices, in preorder.
    pub fn arities(&self) -> Vec<usize> {
        self.word.iter().copied().filter(|&a| a > 0).collect()
    }

    fn subtree_end(&self, pos: usize) -> usize {
        let mut open = 1usize;
        let mut p = pos;
        while open > 0 {
            open = open - 1 + self.word[p];
            p += 1;
        }
        p
    }

    fn children(&self, pos: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.word[pos]);
        let mut p = pos + 1;
        for _ in 0..self.word[pos] {
            out.push(p);
            p = self.subtree_end(p);
        }
        out
    }

    fn leaves_before(&self, pos: usize) -> usize {
        self.word[..pos].iter().filter(|&&a| a == 0).count()
    }

    fn vertices_before(&self, pos: usize) -> usize {
        self.word[..pos].iter().filter(|&&a| a > 0).count()
    }

    fn leaf_position(&self, leaf: usize) -> Option<usize> {
        self.word.iter().enumerate().filter(|(_, &a)| a == 0).nth(leaf.checked_sub(1)?).map(|(p, _)| p)
    }

    /// The 1-based leaves above vertex `v`, as a closed interval.
    pub fn leaf_interval(&self, v: usize) -> (usize, usize) {
        let pos = self.vertex_positions()[v];
        let first = self.leaves_before(pos) + 1;
        let count = self.word[pos..self.subtree_end(pos)].iter().filter(|&&a| a == 0).count();
        (first, first + count - 1)
    }

    /// Leaf intervals of the children of vertex `v`, left to right.
    pub fn child_intervals(&self, v: usize) -> Vec<(usize, usize)> {
        let pos = self.vertex_positions()[v];
        self.children(pos)
            .into_iter()
            .map(|c| {
                let first = self.leaves_before(c) + 1;
                let count = self.word[c..self.subtree_end(c)].iter().filter(|&&a| a == 0).count();
                (first, first + count - 1)
            })
            .collect()
    }

    /// Vertex sets of the child subtrees of vertex `v`.
    pub fn child_vertex_ranges(&self, v: usize) -> Vec<std::ops::Range<usize>> {
        let pos = self.vertex_positions()[v];
        self.children(pos)
            .into_iter()
            .map(|c| {
                let end = self.subtree_end(c);
                self.vertices_before(c)..self.vertices_before(end)
            })
            .collect()
    }

    /// Replaces leaf `leaf` by `inner`; also returns how many vertices of `self`
    /// precede the inserted ones.
    pub fn graft(&self, leaf: usize, inner: &PlanarTree) -> Result<(PlanarTree, usize)> {
        let Some(pos) = self.leaf_position(leaf) else {
            return domain(format!("tree has no leaf {leaf}"));
        };
        let word = [&self.word[..pos], &inner.word[..], &self.word[pos + 1..]].concat();
        Ok((PlanarTree { word }, self.vertices_before(pos)))
    }

    /// Substitutes `inner` (with as many leaves as `v` has inputs) for vertex `v`,
    /// plugging the children of `v` into the leaves of `inner`.
    pub fn replace_vertex(&self, v: usize, inner: &PlanarTree) -> Result<(PlanarTree, Vec<Origin>)> {
        let positions = self.vertex_positions();
        let Some(&pos) = positions.get(v) else {
            return domain(format!("tree has no vertex {v}"));
        };
        if inner.leaves() != self.word[pos] {
            return domain("inner tree does not match the vertex arity");
        }
        let children = self.children(pos);
        let end = self.subtree_end(pos);
        let mut word = self.word[..pos].to_vec();
        let mut origins: Vec<Origin> = (0..v).map(Origin::Outer).collect();
        let mut inner_vertex = 0;
        let mut next_child = 0;
        for &a in &inner.word {
            if a > 0 {
                word.push(a);
                origins.push(Origin::Inner(inner_vertex));
                inner_vertex += 1;
            } else {
                let c = children[next_child];
                next_child += 1;
                let c_end = self.subtree_end(c);
                word.extend_from_slice(&self.word[c..c_end]);
                origins.extend((self.vertices_before(c)..self.vertices_before(c_end)).map(Origin::Outer));
            }
        }
        word.extend_from_slice(&self.word[end..]);
        origins.extend((self.vertices_before(end)..positions.len()).map(Origin::Outer));
        Ok((PlanarTree { word }, origins))
    }

    /// All trees with `k` leaves, sorted by word.
    pub fn all_with_leaves(k: usize) -> Vec<PlanarTree> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Vec<PlanarTree>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("tree cache").get(&k) {
            return hit.clone();
        }
        let mut out: Vec<PlanarTree> = words(k).into_iter().map(|word| PlanarTree { word }).collect();
        out.sort();
        cache.lock().expect("tree cache").insert(k, out.clone());
        out
    }

    /// Trees with `k` leaves and `s` internal vertices.
    pub fn with_vertices(k: usize, s: usize) -> Vec<PlanarTree> {
        Self::all_with_leaves(k).into_iter().filter(|t| t.vertex_count() == s).collect()
    }
}

fn words(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return Vec::new();
    }
    let mut out = if k == 1 { vec![vec![0]] } else { Vec::new() };
    for m in 2..=k {
        for split in compositions(k, m) {
            let mut partial: Vec<Vec<usize>> = vec![vec![m]];
            for part in split {
                let subs = words(part);
                partial = partial
                    .iter()
                    .flat_map(|w| subs.iter().map(move |s| [w.as_slice(), s.as_slice()].concat()))
                    .collect();
            }
            out.extend(partial);
        }
    }
    out
}

/// Ordered ways of writing `k` as `m` positive parts.
fn compositions(k: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![vec![k]];
    }
    (1..=k + 1 - m)
        .flat_map(|first| {
            compositions(k - first, m - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// The object `α_v : n̲_v ↠ In(v)` decorating vertex `v` of a tree over `alpha`.
pub fn alpha_v(alpha: &Surjection, tree: &PlanarTree, v: usize) -> Result<Surjection> {
    if tree.leaves() != alpha.codomain_size() {
        return domain(format!("tree has {} leaves but |α| = {}", tree.leaves(), alpha.codomain_size()));
    }
    if v >= tree.vertex_count() {
        return domain(format!("tree has no vertex {v}"));
    }
    let (lo, hi) = tree.leaf_interval(v);
    let children = tree.child_intervals(v);
    let images: Vec<usize> = alpha
        .images()
        .iter()
        .filter(|&&leaf| lo <= leaf && leaf <= hi)
        .map(|&leaf| 1 + children.iter().position(|&(a, b)| a <= leaf && leaf <= b).expect("leaf under v"))
        .collect();
    Surjection::with_codomain(images, children.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(word: &[usize]) -> PlanarTree {
        PlanarTree::from_word(word.to_vec()).unwrap()
    }

    #[test]
    fn counts_are_super_catalan() {
        let counts: Vec<usize> = (1..=7).map(|k| PlanarTree::all_with_leaves(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 11, 45, 197, 903]);
        assert_eq!(PlanarTree::with_vertices(4, 2).len(), 5);
        assert_eq!(PlanarTree::with_vertices(4, 3).len(), 5);
    }

    #[test]
    fn words_are_validated() {
        assert!(PlanarTree::from_word(vec![2, 0]).is_err());
        assert!(PlanarTree::from_word(vec![1, 0]).is_err());
        assert!(PlanarTree::from_word(vec![0, 0]).is_err());
        assert_eq!(t(&[2, 0, 2, 0, 0]).leaves(), 3);
    }

    #[test]
    fn figure_one() {
        let alpha = Surjection::new(vec![9, 3, 7, 5, 1, 2, 6, 4, 6, 3, 7, 8, 2, 5, 9]).unwrap();
        let tree = t(&[4, 0, 3, 0, 0, 0, 2, 2, 0, 0, 2, 0, 0, 0]);
        assert_eq!(tree.vertex_count(), 5);
        assert_eq!(alpha_v(&alpha, &tree, 2).unwrap().images(), &[2, 1, 1, 1, 2, 2, 1]);
        let root = alpha_v(&alpha, &tree, 0).unwrap();
        assert_eq!(root.domain_size(), 15);
        assert_eq!(root.codomain_size(), 4);
    }

    #[test]
    fn corolla_decoration_is_alpha() {
        let alpha = Surjection::new(vec![2, 1, 3, 1]).unwrap();
        assert_eq!(alpha_v(&alpha, &PlanarTree::corolla(3), 0).unwrap(), alpha);
    }

    #[test]
    fn grafting_and_replacement() {
        let (g, before) = PlanarTree::corolla(2).graft(2, &PlanarTree::corolla(2)).unwrap();
        assert_eq!((g.word(), before), (&[2, 0, 2, 0, 0][..], 1));
        let left = t(&[2, 2, 0, 0, 0]);
        let (r, origins) = t(&[3, 0, 2, 0, 0, 0]).replace_vertex(0, &left).unwrap();
        assert_eq!(r.word(), &[2, 2, 0, 2, 0, 0, 0]);
        assert_eq!(origins, vec![Origin::Inner(0), Origin::Inner(1), Origin::Outer(1)]);
        let (r, origins) = t(&[3, 2, 0, 0, 0, 0]).replace_vertex(0, &t(&[2, 0, 2, 0, 0])).unwrap();
        assert_eq!(r.word(), &[2, 2, 0, 0, 2, 0, 0]);
        assert_eq!(origins, vec![Origin::Inner(0), Origin::Outer(1), Origin::Inner(1)]);
    }
}
