//! Dense row-major matrices with exact Gauss-Jordan elimination.

use super::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from row-major data; panics if the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// The matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column has wrong length");
            for (r, v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v.clone();
            }
        }
        m
    }

    pub fn diagonal(field: &FieldSpec, entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, field: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if field.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * out.cols + c;
                    out.data[idx] = field.mul_add(&out.data[idx], a, other.get(k, c));
                }
            }
        }
        out
    }

    pub fn apply(&self, field: &FieldSpec, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![field.zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                *o = field.mul_add(o, self.get(r, k), x);
            }
        }
        out
    }

    pub fn add(&self, field: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| field.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, field: &FieldSpec, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| field.mul(a, c)).collect(),
        }
    }

    pub fn is_zero(&self, field: &FieldSpec) -> bool {
        self.data.iter().all(|a| field.is_zero(a))
    }

    pub fn is_identity(&self, field: &FieldSpec) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c { field.is_one(v) } else { field.is_zero(v) }
                })
            })
    }

    /// Reduced row echelon form together with the pivot column of each nonzero row.
    pub fn rref(&self, field: &FieldSpec) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !field.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = field.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || field.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
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

    pub fn rank(&self, field: &FieldSpec) -> usize {
        self.rref(field).1.len()
    }

    pub fn inverse(&self, field: &FieldSpec) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let augmented = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                field.one()
            } else {
                field.zero()
            }
        });
        let (reduced, pivots) = augmented.rref(field);
        // the left block has full rank iff its pivots are exactly 0..n
        if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| reduced.get(r, n + c).clone()))
    }

    /// Some solution `x` of `self * x = b`, if one exists.
    pub fn solve(&self, field: &FieldSpec, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let augmented = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols { self.get(r, c).clone() } else { b[r].clone() }
        });
        let (reduced, pivots) = augmented.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(r, self.cols).clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(field: &FieldSpec, rows: usize, cols: usize, vals: &[i64]) -> Matrix {
        Matrix::from_row_major(rows, cols, vals.iter().map(|&v| field.from_i64(v)).collect())
    }

    #[test]
    fn inverse_of_two_by_two() {
        let q = FieldSpec::Rationals;
        let m = mat(&q, 2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse(&q).unwrap();
        assert_eq!(inv, mat(&q, 2, 2, &[1, -1, -1, 2]));
        assert!(m.mul(&q, &inv).is_identity(&q));
    }

    #[test]
    fn singular_and_rectangular_have_no_inverse() {
        let f = FieldSpec::Prime(5);
        assert!(mat(&f, 2, 2, &[1, 2, 2, 4]).inverse(&f).is_none());
        assert!(mat(&f, 1, 2, &[1, 0]).inverse(&f).is_none());
        assert!(Matrix::zeros(&f, 0, 1).inverse(&f).is_none());
        assert!(Matrix::zeros(&f, 0, 0).inverse(&f).unwrap().is_identity(&f));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let q = FieldSpec::Rationals;
        let m = mat(&q, 2, 2, &[1, 1, 2, 2]);
        assert!(m.solve(&q, &[q.one(), q.zero()]).is_none());
        let x = m.solve(&q, &[q.one(), q.from_i64(2)]).unwrap();
        assert_eq!(m.apply(&q, &x), vec![q.one(), q.from_i64(2)]);
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(vals in proptest::collection::vec(-3i64..4, 9)) {
            let f = FieldSpec::Prime(7);
            let m = mat(&f, 3, 3, &vals);
            match m.inverse(&f) {
                Some(inv) => {
                    prop_assert!(m.mul(&f, &inv).is_identity(&f));
                    prop_assert!(inv.mul(&f, &m).is_identity(&f));
                    prop_assert_eq!(m.rank(&f), 3);
                }
                None => prop_assert!(m.rank(&f) < 3),
            }
        }
    }
}
