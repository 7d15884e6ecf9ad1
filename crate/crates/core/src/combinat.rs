//! Surjections, shuffles and ordered set partitions.
//!
//! All positions and values are 1-based, as in the usual `n̲ = {1,…,n}`
//! notation; internally a surjection is its image sequence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// A surjection `n̲ ↠ k̲`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Surjection {
    images: Vec<usize>,
    codomain: usize,
}

impl Surjection {
    /// Builds a surjection whose codomain is the maximum image.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.iter().copied().max().unwrap_or(0);
        Self::with_codomain(images, k)
    }

    pub fn with_codomain(images: Vec<usize>, codomain: usize) -> Result<Self> {
        if images.is_empty() {
            return domain("a surjection needs a nonempty domain");
        }
        if codomain == 0 || codomain > images.len() {
            return domain(format!("codomain {codomain} out of range for domain {}", images.len()));
        }
        let mut hit = vec![false; codomain];
        for &v in &images {
            if v == 0 || v > codomain {
                return domain(format!("image {v} outside 1..={codomain}"));
            }
            hit[v - 1] = true;
        }
        if let Some(miss) = hit.iter().position(|h| !h) {
            return domain(format!("value {} is not hit", miss + 1));
        }
        Ok(Surjection { images, codomain })
    }

    pub(crate) fn from_parts_unchecked(images: Vec<usize>, codomain: usize) -> Self {
        debug_assert!(Self::with_codomain(images.clone(), codomain).is_ok());
        Surjection { images, codomain }
    }

    /// The identity `n̲ → n̲`.
    pub fn identity(n: usize) -> Self {
        Surjection::from_parts_unchecked((1..=n).collect(), n)
    }

    /// The constant surjection `U_n : n̲ ↠ 1̲`.
    pub fn terminal(n: usize) -> Self {
        Surjection::from_parts_unchecked(vec![1; n], 1)
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain
    }

    /// Value at the 1-based position `j`.
    pub fn at(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    pub fn is_bijection(&self) -> bool {
        self.codomain == self.images.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    /// Sorted preimage of `i`.
    pub fn fiber(&self, i: usize) -> Vec<usize> {
        (1..=self.images.len()).filter(|&j| self.images[j - 1] == i).collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.codomain];
        for &v in &self.images {
            sizes[v - 1] += 1;
        }
        sizes
    }

    /// `ε(r)`: sign of the permutation obtained by concatenating the blocks.
    pub fn shuffle_sign(&self) -> i32 {
        permutation_sign(&self.to_partition().concatenation())
    }

    pub fn to_partition(&self) -> OrderedPartition {
        let mut blocks = vec![Vec::new(); self.codomain];
        for (j, &v) in self.images.iter().enumerate() {
            blocks[v - 1].push(j + 1);
        }
        OrderedPartition { blocks }
    }

    /// Pointwise composite `self ∘ inner`, defined when `inner` lands in the domain of `self`.
    pub fn after(&self, inner: &Surjection) -> Result<Surjection> {
        if inner.codomain != self.images.len() {
            return domain("composite of incompatible surjections");
        }
        let images = inner.images.iter().map(|&v| self.images[v - 1]).collect();
        Ok(Surjection::from_parts_unchecked(images, self.codomain))
    }

    /// Angle-bracket rendering `⟨2,1,2⟩`.
    pub fn bracketed(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        format!("⟨{}⟩", parts.join(","))
    }
}

impl fmt::Display for Surjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, v) in self.images.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Surjection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('⟨').trim_end_matches('⟩');
        let images = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad image {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Surjection::new(images).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// An ordered partition `[I_1|…|I_k]` of `n̲` into nonempty sorted blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return domain("empty block");
            }
            if block.windows(2).any(|w| w[0] >= w[1]) {
                return domain("blocks must be strictly increasing");
            }
            for &x in block {
                if x == 0 || x > n || seen[x - 1] {
                    return domain(format!("element {x} repeated or out of range"));
                }
                seen[x - 1] = true;
            }
        }
        if blocks.is_empty() {
            return domain("a partition needs at least one block");
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn concatenation(&self) -> Vec<usize> {
        self.blocks.concat()
    }

    pub fn to_surjection(&self) -> Surjection {
        let mut images = vec![0; self.ground_size()];
        for (i, block) in self.blocks.iter().enumerate() {
            for &x in block {
                images[x - 1] = i + 1;
            }
        }
        Surjection::from_parts_unchecked(images, self.blocks.len())
    }

    pub fn to_shuffle(&self) -> Shuffle {
        Shuffle {
            permutation: self.concatenation(),
            block_sizes: self.blocks.iter().map(Vec::len).collect(),
        }
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", parts.join("|"))
    }
}

impl FromStr for OrderedPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition must be bracketed: {s:?}")))?;
        let blocks = inner
            .split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|t| t.trim())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad element {t:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        OrderedPartition::new(blocks).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A permutation increasing on consecutive blocks of the given sizes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Shuffle {
    permutation: Vec<usize>,
    block_sizes: Vec<usize>,
}

impl Shuffle {
    pub fn new(permutation: Vec<usize>, block_sizes: Vec<usize>) -> Result<Self> {
        let n = permutation.len();
        if block_sizes.iter().sum::<usize>() != n || block_sizes.contains(&0) {
            return domain("block sizes must be positive and sum to n");
        }
        let mut sorted = permutation.clone();
        sorted.sort_unstable();
        if sorted != (1..=n).collect::<Vec<_>>() {
            return domain("not a permutation");
        }
        let mut start = 0;
        for &size in &block_sizes {
            if permutation[start..start + size].windows(2).any(|w| w[0] > w[1]) {
                return domain("not increasing on a block");
            }
            start += size;
        }
        Ok(Shuffle { permutation, block_sizes })
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn to_partition(&self) -> OrderedPartition {
        let mut blocks = Vec::with_capacity(self.block_sizes.len());
        let mut start = 0;
        for &size in &self.block_sizes {
            blocks.push(self.permutation[start..start + size].to_vec());
            start += size;
        }
        OrderedPartition { blocks }
    }

    pub fn sign(&self) -> i32 {
        permutation_sign(&self.permutation)
    }
}

/// Sign of a permutation of `1..=n` given in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All surjections `n̲ ↠ k̲` in lexicographic order of image sequences.
pub fn all_surjections(n: usize, k: usize) -> Result<Vec<Surjection>> {
    if k == 0 || k > n {
        return domain(format!("no surjections {n} -> {k}"));
    }
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(n);
    let mut counts = vec![0usize; k];
    fill_surjections(n, k, &mut images, &mut counts, 0, &mut out);
    Ok(out)
}

fn fill_surjections(
    n: usize,
    k: usize,
    images: &mut Vec<usize>,
    counts: &mut [usize],
    hit: usize,
    out: &mut Vec<Surjection>,
) {
    if images.len() == n {
        if hit == k {
            out.push(Surjection::from_parts_unchecked(images.clone(), k));
        }
        return;
    }
    let remaining = n - images.len();
    for v in 1..=k {
        let fresh = counts[v - 1] == 0;
        let new_hit = hit + usize::from(fresh);
        if k - new_hit > remaining - 1 {
            continue;
        }
        counts[v - 1] += 1;
        images.push(v);
        fill_surjections(n, k, images, counts, new_hit, out);
        images.pop();
        counts[v - 1] -= 1;
    }
}

/// `k!·S(n,k)` computed by the inclusion-exclusion formula.
pub fn surjection_count(n: usize, k: usize) -> u128 {
    if k == 0 || k > n {
        return 0;
    }
    let mut total: i128 = 0;
    for j in 0..=k {
        let term = binomial(k, j) as i128 * (j as i128).pow(n as u32);
        if (k - j).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total as u128
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Ordered Bell number: total count of ordered set partitions of `n̲`.
pub fn fubini(n: usize) -> u128 {
    (1..=n).map(|k| surjection_count(n, k)).sum()
}

/// The order-preserving relabelling of a strictly increasing set onto `1..=m`.
pub fn standardize(subset: &[usize]) -> Result<BTreeMap<usize, usize>> {
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return domain("standardize expects a strictly increasing sequence");
    }
    Ok(subset.iter().enumerate().map(|(i, &x)| (x, i + 1)).collect())
}

/// The four maps out of three-block partitions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Projection {
    /// `(1, 2+3)`: merge the last two blocks.
    FirstRest,
    /// `(1+2, 3)`: merge the first two blocks.
    HeadLast,
    /// `(1, 2)`: keep the first two blocks, standardized.
    FirstSecond,
    /// `(2, 3)`: keep the last two blocks, standardized.
    SecondThird,
}

pub fn pi_project(part: &OrderedPartition, which: Projection) -> Result<OrderedPartition> {
    let b = part.blocks();
    if b.len() != 3 {
        return domain(format!("projection needs 3 blocks, got {}", b.len()));
    }
    let merged = |x: &[usize], y: &[usize]| {
        let mut m = [x, y].concat();
        m.sort_unstable();
        m
    };
    let restricted = |x: &[usize], y: &[usize]| {
        let st = standardize(&merged(x, y)).expect("merged blocks are increasing");
        vec![
            x.iter().map(|e| st[e]).collect::<Vec<_>>(),
            y.iter().map(|e| st[e]).collect(),
        ]
    };
    let blocks = match which {
        Projection::FirstRest => vec![b[0].clone(), merged(&b[1], &b[2])],
        Projection::HeadLast => vec![merged(&b[0], &b[1]), b[2].clone()],
        Projection::FirstSecond => restricted(&b[0], &b[1]),
        Projection::SecondThird => restricted(&b[1], &b[2]),
    };
    Ok(OrderedPartition { blocks })
}

/// The composite `t(1×s)` with `s` defined on `t⁻¹(2)`.
pub fn compose_left(t: &Surjection, s: &Surjection) -> Result<Surjection> {
    if t.codomain_size() != 2 || s.codomain_size() != 2 {
        return domain("compose_left expects surjections onto 2");
    }
    if s.domain_size() != t.block_sizes()[1] {
        return domain("s must be defined on the second block of t");
    }
    let mut rank = 0;
    let images = t
        .images()
        .iter()
        .map(|&v| {
            if v == 1 {
                1
            } else {
                rank += 1;
                s.at(rank) + 1
            }
        })
        .collect();
    Ok(Surjection::from_parts_unchecked(images, 3))
}

/// The composite `u(v×1)` with `v` defined on `u⁻¹(1)`.
pub fn compose_right(u: &Surjection, v: &Surjection) -> Result<Surjection> {
    if u.codomain_size() != 2 || v.codomain_size() != 2 {
        return domain("compose_right expects surjections onto 2");
    }
    if v.domain_size() != u.block_sizes()[0] {
        return domain("v must be defined on the first block of u");
    }
    let mut rank = 0;
    let images = u
        .images()
        .iter()
        .map(|&x| {
            if x == 1 {
                rank += 1;
                v.at(rank)
            } else {
                3
            }
        })
        .collect();
    Ok(Surjection::from_parts_unchecked(images, 3))
}

/// Substitution `(outer; inner_1,…,inner_k)`.
pub fn substitute(outer: &Surjection, inner: &[Surjection]) -> Result<Surjection> {
    let sizes = outer.block_sizes();
    if inner.len() != sizes.len() {
        return domain("one inner surjection per block is required");
    }
    let mut offsets = Vec::with_capacity(inner.len());
    let mut total = 0;
    for (f, &size) in inner.iter().zip(&sizes) {
        if f.domain_size() != size {
            return domain(format!("inner domain {} does not match block size {size}", f.domain_size()));
        }
        offsets.push(total);
        total += f.codomain_size();
    }
    let mut ranks = vec![0usize; inner.len()];
    let images = outer
        .images()
        .iter()
        .map(|&i| {
            ranks[i - 1] += 1;
            offsets[i - 1] + inner[i - 1].at(ranks[i - 1])
        })
        .collect();
    Ok(Surjection::from_parts_unchecked(images, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Surjection {
        Surjection::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(all_surjections(2, 2).unwrap(), vec![s(&[1, 2]), s(&[2, 1])]);
        assert_eq!(all_surjections(3, 2).unwrap().len(), 6);
        assert_eq!(all_surjections(4, 2).unwrap().len(), 14);
        assert!(all_surjections(2, 3).is_err());
        assert!(all_surjections(2, 0).is_err());
    }

    #[test]
    fn partitions_and_signs() {
        let r = s(&[2, 1, 2]);
        assert_eq!(r.to_partition().to_string(), "[2|1,3]");
        let p: OrderedPartition = "[2,4|1,3,6|5,7,8]".parse().unwrap();
        assert_eq!(p.to_surjection(), s(&[2, 1, 2, 1, 3, 2, 3, 3]));
        assert_eq!(p.to_surjection().block_sizes(), vec![2, 3, 3]);
        assert_eq!(s(&[1, 2]).shuffle_sign(), 1);
        assert_eq!(s(&[2, 1]).shuffle_sign(), -1);
        assert_eq!(s(&[1, 2, 1]).block_sizes(), vec![2, 1]);
    }

    #[test]
    fn projections_of_the_worked_partition() {
        let p: OrderedPartition = "[2,4|1,3,6|5,7,8]".parse().unwrap();
        let show = |w| pi_project(&p, w).unwrap().to_string();
        assert_eq!(show(Projection::FirstRest), "[2,4|1,3,5,6,7,8]");
        assert_eq!(show(Projection::HeadLast), "[1,2,3,4,6|5,7,8]");
        assert_eq!(show(Projection::FirstSecond), "[2,4|1,3,5]");
        assert_eq!(show(Projection::SecondThird), "[1,2,4|3,5,6]");
        let two: OrderedPartition = "[1|2]".parse().unwrap();
        assert!(pi_project(&two, Projection::FirstRest).is_err());
    }

    #[test]
    fn composites() {
        assert_eq!(compose_left(&s(&[1, 2, 2]), &s(&[1, 2])).unwrap(), s(&[1, 2, 3]));
        assert_eq!(compose_left(&s(&[2, 1, 2]), &s(&[2, 1])).unwrap(), s(&[3, 1, 2]));
        assert!(compose_left(&s(&[1, 2]), &s(&[1])).is_err());
        assert_eq!(compose_right(&s(&[1, 1, 2]), &s(&[1, 2])).unwrap(), s(&[1, 2, 3]));
        assert_eq!(compose_right(&s(&[1, 2, 1]), &s(&[2, 1])).unwrap(), s(&[2, 3, 1]));
    }

    #[test]
    fn substitution_examples() {
        let out = substitute(&s(&[1, 2, 1]), &[s(&[1, 2]), s(&[1])]).unwrap();
        assert_eq!(out, s(&[1, 3, 2]));
        let r = s(&[2, 1, 3, 1]);
        let ids: Vec<_> = r.block_sizes().iter().map(|&m| Surjection::terminal(m)).collect();
        assert_eq!(substitute(&r, &ids).unwrap(), r);
        assert_eq!(substitute(&Surjection::terminal(4), std::slice::from_ref(&r)).unwrap(), r);
        assert!(substitute(&r, &[s(&[1])]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r: Surjection = "2 1 2".parse().unwrap();
        assert_eq!(r.to_string(), "2 1 2");
        assert!("2 2".parse::<Surjection>().is_err());
        assert_eq!(standardize(&[2, 4, 7]).unwrap()[&7], 3);
        assert!(standardize(&[3, 1]).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(surjection_count(4, 3), 36);
        assert_eq!(fubini(4), 75);
    }
}
