//! Row reduction over small finite fields.
//!
//! Vectors are slices of element indices (see [`crate::finfield`]). The
//! reduced row echelon form is canonical: pivots strictly increase, each
//! pivot entry is one, and every pivot column is zero outside its row.

use crate::finfield::FiniteField;

/// An incrementally maintained reduced row echelon basis.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FiniteField,
    ncols: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: FiniteField, ncols: usize) -> Self {
        Self { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `row` in place against the current basis.
    pub fn reduce(&self, row: &mut [u8]) {
        debug_assert_eq!(row.len(), self.ncols);
        let f = &self.field;
        for (basis_row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = row[piv];
            if c != 0 {
                let nc = f.neg_idx(c);
                axpy(f, row, nc, basis_row, piv);
            }
        }
    }

    /// Whether `row` lies in the span.
    pub fn contains(&self, row: &[u8]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r);
        r.iter().all(|&x| x == 0)
    }

    /// Add `row` to the span. Returns `false` when it was already dependent.
    pub fn insert(&mut self, row: &[u8]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field.clone();
        let inv = f.inv_idx(r[piv]);
        for x in r.iter_mut().skip(piv) {
            *x = f.mul_idx(*x, inv);
        }
        for basis_row in &mut self.rows {
            let c = basis_row[piv];
            if c != 0 {
                let nc = f.neg_idx(c);
                axpy(&f, basis_row, nc, &r, piv);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < piv);
        self.rows.insert(pos, r);
        self.pivots.insert(pos, piv);
        true
    }

    /// Basis of `{x : row . x = 0 for every row}`, one vector per free column,
    /// returned in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let f = &self.field;
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.ncols];
            v[free] = 1;
            for (row, &piv) in self.rows.iter().zip(&self.pivots) {
                v[piv] = f.neg_idx(row[free]);
            }
            out.push(v);
        }
        rref(f, self.ncols, out)
    }
}

/// `row[j] += c * other[j]` for `j >= start`.
#[inline]
fn axpy(f: &FiniteField, row: &mut [u8], c: u8, other: &[u8], start: usize) {
    for (x, &y) in row[start..].iter_mut().zip(&other[start..]) {
        if y != 0 {
            *x = f.add_idx(*x, f.mul_idx(c, y));
        }
    }
}

/// Canonical reduced echelon basis of the span of `vectors`.
pub fn rref(field: &FiniteField, ncols: usize, vectors: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    let mut ech = Echelon::new(field.clone(), ncols);
    for v in &vectors {
        ech.insert(v);
    }
    ech.rows
}

/// Rank of a list of vectors.
pub fn rank(field: &FiniteField, ncols: usize, vectors: &[Vec<u8>]) -> usize {
    let mut ech = Echelon::new(field.clone(), ncols);
    vectors.iter().filter(|v| ech.insert(v)).count()
}
