//! Dense matrices and row echelon machinery over a [`FieldSpec`].

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::usage("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: &FieldSpec) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = f.add(out.get(i, j), f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem], f: &FieldSpec) -> Vec<Elem> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix, f: &FieldSpec) -> Matrix {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix, f: &FieldSpec) -> Matrix {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self - I`.
    pub fn minus_identity(&self, f: &FieldSpec) -> Matrix {
        self.sub(&Matrix::identity(self.rows), f)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| self.get(r, c) == if r == c { Elem::ONE } else { Elem::ZERO })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self, f: &FieldSpec) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of `{v : self * v = 0}`, in canonical form (one vector per free column).
    pub fn kernel(&self, f: &FieldSpec) -> Vec<Vec<Elem>> {
        let (m, pivots) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Elem::ZERO; self.cols];
            v[free] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self, f: &FieldSpec) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::usage("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, Elem::ONE);
        }
        let (red, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::usage("matrix is singular"));
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self, f: &FieldSpec) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }
}

/// An incrementally built echelon basis of a subspace of `F^cols`.
///
/// Pivots are first nonzero positions, so listing columns from the largest
/// monomial down makes every stored row's pivot its leading monomial.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    /// `pivot_row[c]` is the row whose pivot is column `c`.
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    /// Reduce `v` at every pivot column; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [Elem], f: &FieldSpec) {
        for c in 0..self.cols {
            if v[c].is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let factor = v[c];
                for (j, &x) in self.rows[r].iter().enumerate().skip(c) {
                    if !x.is_zero() {
                        v[j] = f.sub(v[j], f.mul(factor, x));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[Elem], f: &FieldSpec) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w, f);
        w.iter().all(|e| e.is_zero())
    }

    /// Insert `v`; returns the pivot of the new row, or `None` if `v` was dependent.
    /// Stored rows are monic but only reduced against earlier rows.
    pub fn insert(&mut self, v: &[Elem], f: &FieldSpec) -> Option<usize> {
        let mut w = v.to_vec();
        self.reduce(&mut w, f);
        let pivot = w.iter().position(|e| !e.is_zero())?;
        let inv = f.inv(w[pivot]).expect("nonzero");
        for x in w.iter_mut().skip(pivot) {
            *x = f.mul(*x, inv);
        }
        // Keep earlier rows free of the new pivot so `reduce` stays a single pass.
        for r in 0..self.rows.len() {
            let factor = self.rows[r][pivot];
            if factor.is_zero() {
                continue;
            }
            for (j, &wj) in w.iter().enumerate().skip(pivot) {
                if !wj.is_zero() {
                    self.rows[r][j] = f.sub(self.rows[r][j], f.mul(factor, wj));
                }
            }
        }
        self.pivot_row[pivot] = Some(self.rows.len());
        self.rows.push(w);
        self.pivots.push(pivot);
        Some(pivot)
    }

    /// Rows ordered by pivot, fully reduced.
    pub fn reduced_rows(&self) -> Vec<Vec<Elem>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        order.into_iter().map(|r| self.rows[r].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn m(f: &FieldSpec, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_kernel_inverse() {
        let f = FieldSpec::prime(3).unwrap();
        let a = m(&f, &[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]]);
        assert_eq!(a.rank(&f), 2);
        let ker = a.kernel(&f);
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0], &f).iter().all(|e| e.is_zero()));
        assert!(a.inverse(&f).is_err());
        let b = m(&f, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let inv = b.inverse(&f).unwrap();
        assert!(b.mul(&inv, &f).is_identity());
    }

    #[test]
    fn echelon_basis_membership() {
        let f = FieldSpec::prime(5).unwrap();
        let mut eb = EchelonBasis::new(3);
        let v1 = vec![f.from_int(0), f.from_int(2), f.from_int(1)];
        let v2 = vec![f.from_int(1), f.from_int(0), f.from_int(3)];
        assert_eq!(eb.insert(&v1, &f), Some(1));
        assert_eq!(eb.insert(&v2, &f), Some(0));
        let sum: Vec<Elem> = v1.iter().zip(&v2).map(|(&a, &b)| f.add(a, f.mul(f.from_int(3), b))).collect();
        assert!(eb.contains(&sum, &f));
        assert_eq!(eb.insert(&sum, &f), None);
        assert!(!eb.contains(&[Elem::ZERO, Elem::ZERO, Elem::ONE], &f));
        assert_eq!(eb.dim(), 2);
    }
}
