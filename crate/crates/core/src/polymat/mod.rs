//! Polynomial-matrix algebra over F_q[z]: row Hermite form under unimodular
//! column operations, left-primeness, parity-check computation, and the
//! supercode factorization used for catastrophic generator matrices.

mod poly;

pub use poly::Poly;

use crate::algebra::{Elt, Field, Matrix};
use crate::error::{Error, Result};

/// Matrix over F_q[z], stored as a sequence of coefficient matrices
/// (coefficient of z^0, z^1, ...). Trailing zero coefficient matrices are
/// trimmed; the zero matrix has an empty sequence and degree `None`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix>,
}

impl std::fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over F_{} [", self.rows, self.cols, self.field.q())?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.entry(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of [`PolyMatrix::row_hermite_form`]: `g * u = h` with `u`
/// unimodular and `u_inv = u^{-1}` tracked alongside.
pub struct HermiteForm {
    pub h: PolyMatrix,
    pub u: PolyMatrix,
    pub u_inv: PolyMatrix,
}

impl PolyMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { field, rows, cols, coeffs: Vec::new() }
    }

    pub fn identity(field: Field, n: usize) -> PolyMatrix {
        PolyMatrix { field: field.clone(), rows: n, cols: n, coeffs: vec![Matrix::identity(field, n)] }
    }

    pub fn from_coeff_matrices(field: Field, rows: usize, cols: usize, coeffs: Vec<Matrix>) -> Result<PolyMatrix> {
        for c in &coeffs {
            if c.rows() != rows || c.cols() != cols {
                return Err(Error::DimensionMismatch("coefficient matrices must share dimensions".into()));
            }
            if c.field() != &field {
                return Err(Error::DimensionMismatch("coefficient matrices must share the field".into()));
            }
        }
        let mut m = PolyMatrix { field, rows, cols, coeffs };
        m.trim();
        Ok(m)
    }

    pub fn from_entries(field: Field, entries: &[Vec<Poly>]) -> Result<PolyMatrix> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let deg = entries
            .iter()
            .flatten()
            .filter_map(Poly::degree)
            .max();
        let mut coeffs = Vec::new();
        if let Some(deg) = deg {
            for d in 0..=deg {
                coeffs.push(Matrix::from_fn(field.clone(), rows, cols, |i, j| entries[i][j].coeff(d)));
            }
        }
        PolyMatrix::from_coeff_matrices(field, rows, cols, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Matrix::is_zero) {
            self.coeffs.pop();
        }
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

    /// Degree of the matrix polynomial; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient matrix of z^i (a zero matrix beyond the degree).
    pub fn coeff_matrix(&self, i: usize) -> Matrix {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.field.clone(), self.rows, self.cols))
    }

    pub fn coeff_matrices(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// Scalar coefficient of z^d in entry (i, j).
    pub fn coeff_at(&self, i: usize, j: usize, d: usize) -> Elt {
        self.coeffs.get(d).map_or(0, |m| m.get(i, j))
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly {
        let coeffs = self.coeffs.iter().map(|m| m.get(i, j)).collect();
        Poly::new(self.field.clone(), coeffs)
    }

    pub fn entries(&self) -> Vec<Vec<Poly>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Evaluation at a scalar: sum of coeff_i * x^i.
    pub fn eval(&self, x: Elt) -> Matrix {
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, self.cols);
        let mut xp = 1;
        for c in &self.coeffs {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let v = f.add(out.get(i, j), f.mul(c.get(i, j), xp));
                    out.set(i, j, v);
                }
            }
            xp = f.mul(xp, x);
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("polynomial matrix add".into()));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff_matrix(i).add(&other.coeff_matrix(i)))
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_coeff_matrices(self.field.clone(), self.rows, self.cols, coeffs)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        let neg = other.scale(self.field.neg(1));
        self.add(&neg)
    }

    pub fn scale(&self, c: Elt) -> PolyMatrix {
        let coeffs = self.coeffs.iter().map(|m| m.scale(c)).collect();
        let mut m = PolyMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, coeffs };
        m.trim();
        m
    }

    /// Product of polynomial matrices (convolution of coefficient matrices).
    pub fn poly_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "poly_mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(PolyMatrix::zero(self.field.clone(), self.rows, other.cols));
        }
        let da = self.coeffs.len() - 1;
        let db = other.coeffs.len() - 1;
        let mut coeffs = Vec::with_capacity(da + db + 1);
        for d in 0..=da + db {
            let mut acc = Matrix::zeros(self.field.clone(), self.rows, other.cols);
            for i in d.saturating_sub(db)..=d.min(da) {
                acc = acc.add(&self.coeffs[i].mul(&other.coeffs[d - i])?)?;
            }
            coeffs.push(acc);
        }
        PolyMatrix::from_coeff_matrices(self.field.clone(), self.rows, other.cols, coeffs)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let coeffs = self.coeffs.iter().map(Matrix::transpose).collect();
        PolyMatrix { field: self.field.clone(), rows: self.cols, cols: self.rows, coeffs }
    }

    /// First `k` rows as a new matrix.
    pub fn top_rows(&self, k: usize) -> PolyMatrix {
        let entries: Vec<Vec<Poly>> = self.entries().into_iter().take(k).collect();
        let mut m = PolyMatrix::from_entries(self.field.clone(), &entries).expect("rectangular");
        m.rows = k;
        m.cols = self.cols;
        m
    }

    /// Rank over the rational function field F_q(z).
    pub fn rank(&self) -> usize {
        hermite_engine(self, false).pivots
    }

    /// Row Hermite form reached by unimodular column operations: `g * u = h`,
    /// `h` lower-left triangular with monic diagonal entries whose degrees
    /// strictly dominate the off-diagonal entries to their left.
    pub fn row_hermite_form(&self) -> Result<HermiteForm> {
        let eng = hermite_engine(self, true);
        if eng.pivots < self.rows {
            return Err(Error::RankDeficient);
        }
        Ok(HermiteForm { h: eng.h, u: eng.u, u_inv: eng.u_inv })
    }

    /// Whether a square matrix has a polynomial inverse (determinant a
    /// nonzero constant). Decided through the Hermite form.
    pub fn is_unimodular(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        if self.rows == 0 {
            return Ok(true);
        }
        match self.row_hermite_form() {
            Ok(form) => Ok(form.h == PolyMatrix::identity(self.field.clone(), self.rows)),
            Err(Error::RankDeficient) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Left primeness: the row Hermite form equals (I_k | 0).
    pub fn is_left_prime(&self) -> Result<bool> {
        if self.rows > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "left primeness needs k <= n, got {}x{}",
                self.rows, self.cols
            )));
        }
        let form = self.row_hermite_form()?;
        Ok(is_identity_padded(&form.h))
    }

    /// Parity-check matrix of the code generated by a left-prime `self`:
    /// with g * v = (I_k | 0), the last n-k rows of v^T annihilate g.
    pub fn parity_check(&self) -> Result<PolyMatrix> {
        let form = self.row_hermite_form()?;
        if !is_identity_padded(&form.h) {
            return Err(Error::NotLeftPrime);
        }
        let k = self.rows;
        let n = self.cols;
        let vt = form.u.transpose();
        let entries: Vec<Vec<Poly>> = vt.entries().into_iter().skip(k).collect();
        let mut h = PolyMatrix::from_entries(self.field.clone(), &entries)?;
        h.rows = n - k;
        h.cols = n;
        // A parity check built from a unimodular completion is left prime, so
        // H(0) is automatically full rank; the sliding constructions rely on it.
        if h.rows > 0 && h.eval(0).rank() != h.rows {
            return Err(Error::BadData("parity check with singular constant term".into()));
        }
        debug_assert!(h.poly_mul(&self.transpose()).unwrap().is_zero());
        Ok(h)
    }

    /// Factors `self = l * u1` with `u1` left prime: `l` is the left k x k
    /// block of the Hermite form and `u1` the first k rows of u^{-1}. For a
    /// left-prime input this returns (I_k, self).
    pub fn supercode_factorization(&self) -> Result<(PolyMatrix, PolyMatrix)> {
        let form = self.row_hermite_form()?;
        let k = self.rows;
        let l_entries: Vec<Vec<Poly>> = form
            .h
            .entries()
            .into_iter()
            .map(|row| row.into_iter().take(k).collect())
            .collect();
        let mut l = PolyMatrix::from_entries(self.field.clone(), &l_entries)?;
        l.rows = k;
        l.cols = k;
        let u1 = form.u_inv.top_rows(k);
        debug_assert_eq!(l.poly_mul(&u1).unwrap(), *self);
        Ok((l, u1))
    }

    /// Determinant by cofactor expansion; intended for small matrices.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        if self.rows > 8 {
            return Err(Error::TooLarge(format!("determinant of a {}x{} polynomial matrix", self.rows, self.cols)));
        }
        Ok(det_rec(&self.entries(), &self.field))
    }
}

fn det_rec(entries: &[Vec<Poly>], field: &Field) -> Poly {
    let n = entries.len();
    if n == 0 {
        return Poly::one(field.clone());
    }
    if n == 1 {
        return entries[0][0].clone();
    }
    let mut acc = Poly::zero(field.clone());
    for j in 0..n {
        if entries[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = entries[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = entries[0][j].mul(&det_rec(&minor, field));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn is_identity_padded(h: &PolyMatrix) -> bool {
    let k = h.rows();
    for i in 0..k {
        for j in 0..h.cols() {
            let e = h.entry(i, j);
            if i == j {
                if !e.is_one() {
                    return false;
                }
            } else if !e.is_zero() {
                return false;
            }
        }
    }
    true
}

struct HermiteEngine {
    h: PolyMatrix,
    u: PolyMatrix,
    u_inv: PolyMatrix,
    pivots: usize,
}

/// Working state: entries by [row][col], with the accumulated unimodular
/// column transform and its inverse.
struct ColOps {
    w: Vec<Vec<Poly>>,
    u: Vec<Vec<Poly>>,
    uinv: Vec<Vec<Poly>>,
    rows: usize,
}

impl ColOps {
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.w.iter_mut().chain(self.u.iter_mut()) {
            row.swap(a, b);
        }
        self.uinv.swap(a, b);
    }

    /// col_a *= c (c a nonzero constant); inverse scales row_a of uinv.
    fn scale_col(&mut self, a: usize, c: Elt, field: &Field) {
        let cinv = field.inv(c);
        for row in self.w.iter_mut().chain(self.u.iter_mut()) {
            row[a] = row[a].scale(c);
        }
        for e in self.uinv[a].iter_mut() {
            *e = e.scale(cinv);
        }
    }

    /// col_dst += f * col_src; inverse subtracts f * row_dst from row_src.
    fn add_scaled_col(&mut self, dst: usize, src: usize, f: &Poly) {
        if f.is_zero() {
            return;
        }
        for row in self.w.iter_mut().chain(self.u.iter_mut()) {
            let t = row[src].mul(f);
            row[dst] = row[dst].add(&t);
        }
        let scaled: Vec<Poly> = self.uinv[dst].iter().map(|e| e.mul(f)).collect();
        for (e, t) in self.uinv[src].iter_mut().zip(scaled) {
            *e = e.sub(&t);
        }
    }
}

fn hermite_engine(g: &PolyMatrix, normalize: bool) -> HermiteEngine {
    let field = g.field().clone();
    let n = g.cols();
    let one = Poly::one(field.clone());
    let zero = Poly::zero(field.clone());
    let mut ops = ColOps {
        w: g.entries(),
        u: (0..n)
            .map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
            .collect(),
        uinv: (0..n)
            .map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
            .collect(),
        rows: g.rows(),
    };

    let mut pivots = 0;
    for row in 0..ops.rows {
        if pivots == n {
            break;
        }
        // Euclidean reduction across columns pivots..n until only one
        // nonzero entry remains in this row.
        let found = loop {
            let mut best: Option<(usize, usize)> = None; // (degree, col)
            for j in pivots..n {
                if let Some(d) = ops.w[row][j].degree() {
                    if best.map_or(true, |(bd, _)| d < bd) {
                        best = Some((d, j));
                    }
                }
            }
            let Some((_, jmin)) = best else { break false };
            ops.swap_cols(pivots, jmin);
            let mut clean = true;
            for j in pivots + 1..n {
                if !ops.w[row][j].is_zero() {
                    let (q, r) = ops.w[row][j].divrem(&ops.w[row][pivots]);
                    let neg_q = q.neg();
                    ops.add_scaled_col(j, pivots, &neg_q);
                    debug_assert_eq!(ops.w[row][j], r);
                    if !r.is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break true;
            }
        };
        if found {
            pivots += 1;
        }
    }

    if normalize && pivots == ops.rows {
        for i in 0..ops.rows {
            let lead = ops.w[i][i].leading_coeff();
            if lead != 1 {
                ops.scale_col(i, field.inv(lead), &field);
            }
            for j in 0..i {
                if ops.w[i][j].degree() >= ops.w[i][i].degree() && !ops.w[i][j].is_zero() {
                    let (q, _) = ops.w[i][j].divrem(&ops.w[i][i]);
                    let neg_q = q.neg();
                    ops.add_scaled_col(j, i, &neg_q);
                }
            }
        }
    }

    let h = PolyMatrix::from_entries(field.clone(), &ops.w).expect("rectangular");
    let u = PolyMatrix::from_entries(field.clone(), &ops.u).expect("rectangular");
    let u_inv = PolyMatrix::from_entries(field, &ops.uinv).expect("rectangular");
    HermiteEngine {
        h: with_dims(h, g.rows(), n),
        u: with_dims(u, n, n),
        u_inv: with_dims(u_inv, n, n),
        pivots,
    }
}

fn with_dims(mut m: PolyMatrix, rows: usize, cols: usize) -> PolyMatrix {
    m.rows = rows;
    m.cols = cols;
    m
}
