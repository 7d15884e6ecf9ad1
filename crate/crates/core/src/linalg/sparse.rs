use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{domain, Result};

use super::Rational;

/// A sparse vector: entries sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Sorts, merges duplicates and drops zeros.
pub fn canonicalize(mut entries: Vec<(usize, Rational)>) -> SparseVec {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += &v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `x + c·y` for sorted sparse vectors.
pub fn axpy(x: &[(usize, Rational)], c: &Rational, y: &[(usize, Rational)]) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + &(c * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental echelon form keyed by the largest index of each vector.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The stored rows, each normalized at its leading index.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.values()
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.pivots.contains_key(&index)
    }

    /// Reduces `v` until its leading index is not a pivot; returns the remainder.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, c)) = v.last().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, &-c, p),
                None => break,
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        match v.last() {
            None => false,
            Some((lead, c)) => {
                let lead = *lead;
                let inv = c.recip();
                let normalized = v.into_iter().map(|(i, x)| (i, &x * &inv)).collect();
                self.pivots.insert(lead, normalized);
                true
            }
        }
    }

    /// Fully reduced remainder of `v`, supported on non-pivot indices.
    pub fn normal_form(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((lead, c)) = acc.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.pivots.get(&lead) {
                Some(p) => {
                    for (i, x) in &p[..p.len() - 1] {
                        let e = acc.entry(*i).or_insert_with(Rational::zero);
                        *e -= &(&c * x);
                    }
                }
                None => out.push((lead, c)),
            }
        }
        out.reverse();
        out
    }
}

/// A sparse matrix stored by columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        SparseMatrix { rows: n, cols: n, columns }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Result<Self> {
        let cols = columns.len();
        let columns: Vec<SparseVec> = columns.into_iter().map(canonicalize).collect();
        if columns.iter().flatten().any(|(r, _)| *r >= rows) {
            return domain("row index out of range");
        }
        Ok(SparseMatrix { rows, cols, columns })
    }

    pub fn from_triplets(rows: usize, cols: usize, entries: Vec<(usize, usize, Rational)>) -> Result<Self> {
        let mut columns = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if c >= cols {
                return domain("column index out of range");
            }
            columns[c].push((r, v));
        }
        let mut m = Self::from_columns(rows, columns)?;
        m.cols = cols;
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, Rational)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        let column = &self.columns[col];
        match column.binary_search_by_key(&row, |e| e.0) {
            Ok(i) => column[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let column = &mut self.columns[col];
        match column.binary_search_by_key(&row, |e| e.0) {
            Ok(i) if value.is_zero() => {
                column.remove(i);
            }
            Ok(i) => column[i].1 = value,
            Err(_) if value.is_zero() => {}
            Err(i) => column.insert(i, (row, value)),
        }
    }

    /// Entries as `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            columns[r].push((c, v.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns }
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return domain(format!("shape mismatch {}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, Rational)> = Vec::new();
                for (k, x) in col {
                    acc.extend(self.columns[*k].iter().map(|(i, y)| (*i, x * y)));
                }
                canonicalize(acc)
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, columns })
    }

    pub fn scale_rows_and_cols(&self, row_scale: &[Rational], col_scale: &[Rational]) -> SparseMatrix {
        let columns = self
            .columns
            .iter()
            .enumerate()
            .map(|(c, col)| {
                col.iter()
                    .map(|(r, v)| (*r, &(&row_scale[*r] * v) * &col_scale[c]))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    /// Coordinate-list export: one `row col num/den` line per entry, 1-indexed, row-major.
    pub fn to_coordinate_text(&self) -> String {
        let mut entries: Vec<_> = self.entries().collect();
        entries.sort_by_key(|e| (e.0, e.1));
        let mut out = String::new();
        for (r, c, v) in entries {
            let _ = writeln!(out, "{} {} {}/{}", r + 1, c + 1, v.numer(), v.denom());
        }
        out
    }

    pub fn from_coordinate_text(rows: usize, cols: usize, text: &str) -> Result<SparseMatrix> {
        let mut entries = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(crate::Error::Parse(format!("bad matrix line {line:?}")));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| crate::Error::Parse(format!("bad index {t:?}")))
            };
            entries.push((parse(parts[0])? - 1, parse(parts[1])? - 1, parts[2].parse()?));
        }
        Self::from_triplets(rows, cols, entries)
    }
}

/// Exact rank by column elimination, pivoting on the largest row index.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut ech = Echelon::new();
    let mut order: Vec<usize> = (0..m.cols()).collect();
    order.sort_by_key(|&c| (m.column(c).len(), m.column(c).last().map(|e| e.0)));
    for c in order {
        ech.insert(m.column(c).to_vec());
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn ranks_of_small_matrices() {
        assert_eq!(rank(&SparseMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&SparseMatrix::identity(5)), 5);
        let m = SparseMatrix::from_triplets(
            2,
            3,
            vec![(0, 0, q(1)), (1, 0, q(2)), (0, 1, q(2)), (1, 1, q(4)), (0, 2, q(1))],
        )
        .unwrap();
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&m.transpose()), 2);
    }

    #[test]
    fn normal_forms() {
        let mut ech = Echelon::new();
        ech.insert(vec![(0, q(1)), (2, q(-1))]);
        ech.insert(vec![(1, q(1)), (2, q(1))]);
        assert!(!ech.insert(vec![(0, q(2)), (1, q(1)), (2, q(-1))]));
        // e2 ≡ e0 and e1 ≡ -e2 ≡ -e0; pivots sit at the largest index.
        assert_eq!(ech.normal_form(&[(2, q(1))]), vec![(0, q(1))]);
        assert!(ech.insert(vec![(3, q(5))]));
        let v = ech.reduce(vec![(0, q(1)), (2, q(-1)), (3, q(1))]);
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn coordinate_round_trip() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 1, Rational::new(-1, 2)), (1, 0, q(3))]).unwrap();
        let text = m.to_coordinate_text();
        assert_eq!(text, "1 2 -1/2\n2 1 3/1\n");
        assert_eq!(SparseMatrix::from_coordinate_text(2, 2, &text).unwrap(), m);
    }

    #[test]
    fn products_and_edits() {
        let mut a = SparseMatrix::identity(2);
        a.set(0, 1, q(2));
        let b = a.mul(&a).unwrap();
        assert_eq!(b.get(0, 1), q(4));
        a.set(0, 1, q(0));
        assert_eq!(a, SparseMatrix::identity(2));
        assert!(a.mul(&SparseMatrix::zeros(3, 1)).is_err());
    }
}
