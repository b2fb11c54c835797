//! Dense matrices over F_q with exact Gaussian elimination.

use rand::Rng;

use crate::algebra::field::{Elt, Field};
use crate::error::{Error, Result};

/// Row-major dense matrix over a shared [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elt>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{} [", self.rows, self.cols, self.field.q())?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Output of [`Matrix::rref`]: `transform * input = reduced`.
pub struct Rref {
    pub reduced: Matrix,
    pub transform: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Elt>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &x in row {
                if x >= field.q() {
                    return Err(Error::BadData(format!("entry {x} not canonical in F_{}", field.q())));
                }
                data.push(x);
            }
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elt) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let data = (0..rows * cols).map(|_| field.sample(rng)).collect();
        Matrix { field, rows, cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elt {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elt) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: Elt) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other.get(l, j));
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, t));
                }
            }
        }
        Ok(out)
    }

    /// Columns of `self` selected by `idx`, in sorted index order.
    pub fn submatrix_columns(&self, idx: &[usize]) -> Result<Matrix> {
        let mut sorted: Vec<usize> = idx.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SizeMismatch("duplicate column index".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&j| j >= self.cols) {
            return Err(Error::IndexOutOfRange(format!("column {bad} of {}", self.cols)));
        }
        Ok(Matrix::from_fn(self.field.clone(), self.rows, sorted.len(), |i, j| {
            self.get(i, sorted[j])
        }))
    }

    /// Reduced row echelon form together with the row transform that produces
    /// it: `transform * self = reduced`.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut red = self.clone();
        let mut tr = Matrix::identity(f.clone(), self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pivot_row) = (r..self.rows).find(|&i| red.get(i, col) != 0) else {
                continue;
            };
            red.swap_rows(r, pivot_row);
            tr.swap_rows(r, pivot_row);
            let inv = f.inv(red.get(r, col));
            red.scale_row(r, inv);
            tr.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let c = red.get(i, col);
                    if c != 0 {
                        let neg = f.neg(c);
                        red.add_scaled_row(i, r, neg);
                        tr.add_scaled_row(i, r, neg);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref { reduced: red, transform: tr, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn invert(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let r = self.rref();
        (r.pivots.len() == self.rows).then_some(r.transform)
    }

    /// Solves `x * self = b` for a row vector x of length `self.rows`.
    /// Free variables are set to zero; `None` when no solution exists.
    pub fn solve_left(&self, b: &[Elt]) -> Result<Option<Vec<Elt>>> {
        if b.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "solve_left: rhs length {} vs {} columns",
                b.len(),
                self.cols
            )));
        }
        // x * self = b  <=>  self^T * x^T = b^T; eliminate on [self^T | b^T].
        let f = &self.field;
        let mut aug = Matrix::zeros(f.clone(), self.cols, self.rows + 1);
        for i in 0..self.cols {
            for j in 0..self.rows {
                aug.set(i, j, self.get(j, i));
            }
            aug.set(i, self.rows, b[i]);
        }
        let r = aug.rref();
        let mut x = vec![0; self.rows];
        for (row, &col) in r.pivots.iter().enumerate() {
            if col == self.rows {
                return Ok(None);
            }
            x[col] = r.reduced.get(row, self.rows);
        }
        Ok(Some(x))
    }

    /// Whether the size-K column set `idx` indexes an invertible submatrix.
    pub fn is_information_set(&self, idx: &[usize]) -> Result<bool> {
        if idx.len() != self.rows {
            return Err(Error::SizeMismatch(format!(
                "information set needs {} columns, got {}",
                self.rows,
                idx.len()
            )));
        }
        let sub = self.submatrix_columns(idx)?;
        Ok(sub.rank() == self.rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: Elt) {
        if c == 1 {
            return;
        }
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, f.mul(v, c));
        }
    }

    /// row_i += c * row_src
    fn add_scaled_row(&mut self, i: usize, src: usize, c: Elt) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = f.add(self.get(i, j), f.mul(c, self.get(src, j)));
            self.set(i, j, v);
        }
    }
}

/// Hamming weight of a vector.
pub fn weight(v: &[Elt]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// row vector times matrix.
pub fn vec_mat_mul(field: &Field, v: &[Elt], m: &Matrix) -> Result<Vec<Elt>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} vs {} rows",
            v.len(),
            m.rows()
        )));
    }
    let mut out = vec![0; m.cols()];
    for (i, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for j in 0..m.cols() {
            out[j] = field.add(out[j], field.mul(a, m.get(i, j)));
        }
    }
    Ok(out)
}

/// Componentwise a - b.
pub fn vec_sub(field: &Field, a: &[Elt], b: &[Elt]) -> Vec<Elt> {
    a.iter().zip(b).map(|(&x, &y)| field.sub(x, y)).collect()
}

/// Componentwise a + b.
pub fn vec_add(field: &Field, a: &[Elt], b: &[Elt]) -> Vec<Elt> {
    a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
}
