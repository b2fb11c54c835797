//! Convolutional-code model: parameters, encoding, sliding block matrices,
//! column distances, and low-weight codeword enumeration on the windowed
//! block code.

use serde::{Deserialize, Serialize};

use crate::algebra::{vec_mat_mul, weight, Elt, Field, Matrix};
use crate::combinat::{weighted_count, Combinations};
use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;

/// Default cap on support-set enumeration (low-weight search, brute force).
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// A polynomial vector over F_q^width, stored as coefficient rows
/// (coefficient of z^0 first). Trailing zero rows are kept as stored, so a
/// padded vector serializes exactly as built.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVector {
    field: Field,
    width: usize,
    coeffs: Vec<Vec<Elt>>,
}

impl PolyVector {
    pub fn new(field: Field, width: usize, coeffs: Vec<Vec<Elt>>) -> Result<PolyVector> {
        for row in &coeffs {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient row of length {} in a width-{} vector",
                    row.len(),
                    width
                )));
            }
            if row.iter().any(|&x| x >= field.q()) {
                return Err(Error::BadData("non-canonical field element".into()));
            }
        }
        Ok(PolyVector { field, width, coeffs })
    }

    pub fn zero(field: Field, width: usize, len: usize) -> PolyVector {
        PolyVector { field, width, coeffs: vec![vec![0; width]; len] }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of stored coefficient rows (>= degree + 1).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Vec<Elt>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Vec<Elt> {
        self.coeffs.get(i).cloned().unwrap_or_else(|| vec![0; self.width])
    }

    /// Degree: index of the last nonzero coefficient row, `None` if zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|row| row.iter().any(|&x| x != 0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Total Hamming weight: sum of the weights of the coefficient rows.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().map(|row| weight(row)).sum()
    }

    /// Canonical copy without trailing zero rows.
    pub fn trimmed(&self) -> PolyVector {
        let len = self.degree().map_or(0, |d| d + 1);
        PolyVector {
            field: self.field.clone(),
            width: self.width,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Copy padded (or kept) to at least `len` coefficient rows.
    pub fn padded_to(&self, len: usize) -> PolyVector {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() < len {
            coeffs.push(vec![0; self.width]);
        }
        PolyVector { field: self.field.clone(), width: self.width, coeffs }
    }

    /// Multiply by z^k.
    pub fn shifted(&self, k: usize) -> PolyVector {
        let mut coeffs = vec![vec![0; self.width]; k];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyVector { field: self.field.clone(), width: self.width, coeffs }
    }

    pub fn add(&self, other: &PolyVector) -> Result<PolyVector> {
        if self.width != other.width {
            return Err(Error::DimensionMismatch("vector widths differ".into()));
        }
        let len = self.len().max(other.len());
        let f = &self.field;
        let coeffs = (0..len)
            .map(|i| {
                let (a, b) = (self.coeff(i), other.coeff(i));
                a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect()
            })
            .collect();
        Ok(PolyVector { field: f.clone(), width: self.width, coeffs })
    }

    pub fn sub(&self, other: &PolyVector) -> Result<PolyVector> {
        let f = &self.field;
        let neg = PolyVector {
            field: f.clone(),
            width: other.width,
            coeffs: other
                .coeffs
                .iter()
                .map(|row| row.iter().map(|&x| f.neg(x)).collect())
                .collect(),
        };
        self.add(&neg)
    }

    /// Flat view (coefficient rows concatenated).
    pub fn flatten(&self) -> Vec<Elt> {
        self.coeffs.iter().flatten().copied().collect()
    }

    pub fn from_flat(field: Field, width: usize, flat: &[Elt]) -> Result<PolyVector> {
        if width == 0 || flat.len() % width != 0 {
            return Err(Error::DimensionMismatch("flat length not a multiple of width".into()));
        }
        let coeffs = flat.chunks(width).map(<[Elt]>::to_vec).collect();
        PolyVector::new(field, width, coeffs)
    }

    /// Split into `s` flat blocks of `block_coeffs` coefficient rows each,
    /// zero-padding at the tail; `s` is derived from the stored length.
    pub fn blocks(&self, block_coeffs: usize) -> Vec<Vec<Elt>> {
        let s = self.len().div_ceil(block_coeffs).max(1);
        self.blocks_padded(block_coeffs, s)
    }

    /// Split into exactly `s` flat blocks of `block_coeffs` rows each.
    pub fn blocks_padded(&self, block_coeffs: usize, s: usize) -> Vec<Vec<Elt>> {
        (0..s)
            .map(|b| {
                let mut flat = Vec::with_capacity(self.width * block_coeffs);
                for i in 0..block_coeffs {
                    flat.extend(self.coeff(b * block_coeffs + i));
                }
                flat
            })
            .collect()
    }

    /// Rebuild from flat blocks produced by [`Self::blocks_padded`].
    pub fn from_blocks(field: Field, width: usize, blocks: &[Vec<Elt>]) -> Result<PolyVector> {
        let flat: Vec<Elt> = blocks.iter().flatten().copied().collect();
        PolyVector::from_flat(field, width, &flat)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.coeffs)
    }

    pub fn from_json(field: Field, width: usize, v: &serde_json::Value) -> Result<PolyVector> {
        let coeffs: Vec<Vec<Elt>> = serde_json::from_value(v.clone())?;
        PolyVector::new(field, width, coeffs)
    }
}

/// An (n, k) convolutional code given by a full-row-rank generator matrix.
/// The parity-check matrix is attached when the generator is left prime.
#[derive(Clone, Debug)]
pub struct ConvCode {
    field: Field,
    n: usize,
    k: usize,
    generator: PolyMatrix,
    memory: usize,
    delay_free: bool,
    parity: Option<PolyMatrix>,
}

impl ConvCode {
    pub fn new(generator: PolyMatrix) -> Result<ConvCode> {
        let k = generator.rows();
        let n = generator.cols();
        if k > n || k == 0 {
            return Err(Error::DimensionMismatch(format!("generator is {k}x{n}")));
        }
        if generator.rank() < k {
            return Err(Error::RankDeficient);
        }
        let memory = generator.degree().unwrap_or(0);
        let delay_free = generator.eval(0).rank() == k;
        let parity = if generator.is_left_prime()? {
            Some(generator.parity_check()?)
        } else {
            None
        };
        Ok(ConvCode {
            field: generator.field().clone(),
            n,
            k,
            generator,
            memory,
            delay_free,
            parity,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn generator(&self) -> &PolyMatrix {
        &self.generator
    }

    pub fn is_delay_free(&self) -> bool {
        self.delay_free
    }

    pub fn is_non_catastrophic(&self) -> bool {
        self.parity.is_some()
    }

    pub fn parity(&self) -> Option<&PolyMatrix> {
        self.parity.as_ref()
    }

    /// Degree delta of the code: maximal degree of the k x k minors.
    pub fn compute_degree(&self, budget: u64) -> Result<usize> {
        let count = crate::combinat::binomial_u64(self.n as u64, self.k as u64)
            .ok_or_else(|| Error::TooLarge("minor count".into()))?;
        if count > budget || self.k > 8 {
            return Err(Error::TooLarge(format!("{count} minors of size {}", self.k)));
        }
        let mut best: Option<usize> = None;
        for cols in Combinations::new(self.n, self.k) {
            let entries: Vec<Vec<crate::polymat::Poly>> = (0..self.k)
                .map(|i| cols.iter().map(|&j| self.generator.entry(i, j)).collect())
                .collect();
            let sub = PolyMatrix::from_entries(self.field.clone(), &entries)?;
            if let Some(d) = sub.det()?.degree() {
                best = Some(best.map_or(d, |b: usize| b.max(d)));
            }
        }
        best.ok_or(Error::RankDeficient)
    }

    /// c(z) = m(z) G(z).
    pub fn encode(&self, message: &PolyVector) -> Result<PolyVector> {
        if message.width() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message width {} vs k = {}",
                message.width(),
                self.k
            )));
        }
        if message.field() != &self.field {
            return Err(Error::DimensionMismatch("message field differs".into()));
        }
        let deg_m = match message.degree() {
            Some(d) => d,
            None => return Ok(PolyVector::zero(self.field.clone(), self.n, 0)),
        };
        let f = &self.field;
        let mut coeffs = vec![vec![0; self.n]; deg_m + self.memory + 1];
        for i in 0..=deg_m {
            let m_i = message.coeff(i);
            if m_i.iter().all(|&x| x == 0) {
                continue;
            }
            for d in 0..=self.memory {
                let g_d = self.generator.coeff_matrix(d);
                let term = vec_mat_mul(f, &m_i, &g_d)?;
                for (slot, t) in coeffs[i + d].iter_mut().zip(term) {
                    *slot = f.add(*slot, t);
                }
            }
        }
        PolyVector::new(f.clone(), self.n, coeffs)
    }

    /// Sliding generator block G~^gamma_i of size k(gamma+1) x n(gamma+1).
    /// For i = 0 this is the upper-triangular window (G_0 ... G_gamma); for
    /// i >= 1 the (r, c) block is G_{i(gamma+1) + c - r}.
    pub fn sliding_generator(&self, gamma: usize, i: usize) -> Matrix {
        let w = gamma + 1;
        let mut out = Matrix::zeros(self.field.clone(), self.k * w, self.n * w);
        for r in 0..w {
            for c in 0..w {
                let idx = if i == 0 {
                    if c < r {
                        continue;
                    }
                    c - r
                } else {
                    i * w + c - r
                };
                if idx > self.memory {
                    continue;
                }
                let blk = self.generator.coeff_matrix(idx);
                for bi in 0..self.k {
                    for bj in 0..self.n {
                        out.set(r * self.k + bi, c * self.n + bj, blk.get(bi, bj));
                    }
                }
            }
        }
        out
    }

    /// Sliding parity-check block H~^gamma_0 (lower block triangular with
    /// H_0 on the diagonal). Requires a parity-check matrix.
    pub fn sliding_parity(&self, gamma: usize) -> Result<Matrix> {
        let parity = self.parity.as_ref().ok_or(Error::NoParityCheck)?;
        let w = gamma + 1;
        let rows = self.n - self.k;
        let mut out = Matrix::zeros(self.field.clone(), rows * w, self.n * w);
        let pdeg = parity.degree().unwrap_or(0);
        for r in 0..w {
            for c in 0..=r {
                let idx = r - c;
                if idx > pdeg {
                    continue;
                }
                let blk = parity.coeff_matrix(idx);
                for bi in 0..rows {
                    for bj in 0..self.n {
                        out.set(r * rows + bi, c * self.n + bj, blk.get(bi, bj));
                    }
                }
            }
        }
        Ok(out)
    }

    /// gamma-th column distance, by brute force over messages with a nonzero
    /// first coefficient block.
    pub fn column_distance(&self, gamma: usize, budget: u64) -> Result<usize> {
        if !self.delay_free {
            return Err(Error::NotDelayFree);
        }
        let dim = self.k * (gamma + 1);
        let total = (self.field.q() as f64).powi(dim as i32);
        if total > budget as f64 {
            return Err(Error::TooLarge(format!("q^{dim} messages")));
        }
        let g0 = self.sliding_generator(gamma, 0);
        let q = self.field.q() as u64;
        let mut best: Option<usize> = None;
        let mut msg = vec![0 as Elt; dim];
        let count = (q as u128).pow(dim as u32);
        for idx in 1..count {
            let mut v = idx;
            for slot in msg.iter_mut() {
                *slot = (v % q as u128) as Elt;
                v /= q as u128;
            }
            if msg[..self.k].iter().all(|&x| x == 0) {
                continue;
            }
            let cw = vec_mat_mul(&self.field, &msg, &g0)?;
            let w = weight(&cw);
            best = Some(best.map_or(w, |b: usize| b.min(w)));
        }
        best.ok_or_else(|| Error::TooLarge("no admissible message".into()))
    }

    /// The [N, K] block-code view for window parameter gamma, with the
    /// residual matrices used by sequential decoding. Requires a delay-free
    /// generator so that the window matrix has full rank.
    pub fn block_code(&self, gamma: usize) -> Result<SlidingBlockCode> {
        if !self.delay_free {
            return Err(Error::NotDelayFree);
        }
        let g0 = self.sliding_generator(gamma, 0);
        let residual_count = (self.memory + 1).div_ceil(gamma + 1);
        let residuals = (1..=residual_count)
            .map(|i| self.sliding_generator(gamma, i))
            .collect();
        let h0 = if self.parity.is_some() {
            Some(self.sliding_parity(gamma)?)
        } else {
            None
        };
        Ok(SlidingBlockCode {
            field: self.field.clone(),
            n: self.n,
            k: self.k,
            gamma,
            g0,
            residuals,
            h0,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dto = ConvCodeJson {
            q: self.field.q() as u64,
            n: self.n,
            k: self.k,
            coeffs: (0..=self.memory)
                .map(|d| {
                    let m = self.generator.coeff_matrix(d);
                    (0..self.k).map(|i| m.row(i).to_vec()).collect()
                })
                .collect(),
        };
        serde_json::to_value(dto).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ConvCode> {
        let dto: ConvCodeJson = serde_json::from_value(v.clone())?;
        let field = Field::new(dto.q)?;
        let mut coeffs = Vec::with_capacity(dto.coeffs.len());
        for cm in &dto.coeffs {
            if cm.len() != dto.k {
                return Err(Error::BadData("coefficient matrix with wrong row count".into()));
            }
            coeffs.push(Matrix::from_rows(field.clone(), cm.clone())?);
        }
        let generator = PolyMatrix::from_coeff_matrices(field, dto.k, dto.n, coeffs)?;
        ConvCode::new(generator)
    }
}

#[derive(Serialize, Deserialize)]
struct ConvCodeJson {
    q: u64,
    n: usize,
    k: usize,
    coeffs: Vec<Vec<Vec<Elt>>>,
}

/// Windowed [N, K] block-code view of a convolutional code: the window
/// matrix G~^gamma_0, the residual matrices G~^gamma_i for i >= 1, and the
/// sliding parity check when one exists.
#[derive(Clone, Debug)]
pub struct SlidingBlockCode {
    field: Field,
    n: usize,
    k: usize,
    gamma: usize,
    g0: Matrix,
    residuals: Vec<Matrix>,
    h0: Option<Matrix>,
}

impl SlidingBlockCode {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// Block length N = n(gamma+1).
    pub fn block_len(&self) -> usize {
        self.n * (self.gamma + 1)
    }

    /// Block dimension K = k(gamma+1).
    pub fn block_dim(&self) -> usize {
        self.k * (self.gamma + 1)
    }

    /// Coefficient rows per block (gamma + 1).
    pub fn coeffs_per_block(&self) -> usize {
        self.gamma + 1
    }

    pub fn g0(&self) -> &Matrix {
        &self.g0
    }

    pub fn h0(&self) -> Option<&Matrix> {
        self.h0.as_ref()
    }

    /// G~^gamma_i for any i >= 0 (zero once past the stored residuals).
    pub fn residual_matrix(&self, i: usize) -> Matrix {
        if i == 0 {
            return self.g0.clone();
        }
        self.residuals
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.field.clone(), self.block_dim(), self.block_len()))
    }

    pub fn stored_residuals(&self) -> &[Matrix] {
        &self.residuals
    }
}

/// All nonzero codewords of the block code with weight <= w_max, paired with
/// their unique messages, sorted by (weight, lexicographic codeword).
/// Membership is decided by the sliding parity check when available and by
/// solving against the window matrix otherwise.
pub fn low_weight_codewords(
    block: &SlidingBlockCode,
    w_max: usize,
    budget: u64,
) -> Result<Vec<(Vec<Elt>, Vec<Elt>)>> {
    let n = block.block_len();
    let field = block.field().clone();
    let q = field.q() as u64;
    let mut total = num_bigint::BigUint::ZERO;
    for w in 1..=w_max {
        total += weighted_count(n as u64, w as u64, q);
    }
    if total > num_bigint::BigUint::from(budget) {
        return Err(Error::TooLarge(format!("{total} support/value pairs")));
    }

    let mut found: Vec<(Vec<Elt>, Vec<Elt>)> = Vec::new();
    for w in 1..=w_max {
        for support in Combinations::new(n, w) {
            // Odometer over the (q-1)^w nonzero value assignments.
            let mut values = vec![1 as Elt; w];
            loop {
                let mut cand = vec![0 as Elt; n];
                for (pos, &val) in support.iter().zip(&values) {
                    cand[*pos] = val;
                }
                let is_member = match block.h0() {
                    Some(h0) => syndrome(&field, h0, &cand).iter().all(|&x| x == 0),
                    None => block.g0().solve_left(&cand)?.is_some(),
                };
                if is_member {
                    let msg = block
                        .g0()
                        .solve_left(&cand)?
                        .expect("member of the row span");
                    found.push((cand, msg));
                }
                // Advance the odometer.
                let mut i = 0;
                loop {
                    if i == w {
                        break;
                    }
                    if (values[i] as u64) < q - 1 {
                        values[i] += 1;
                        break;
                    }
                    values[i] = 1;
                    i += 1;
                }
                if i == w {
                    break;
                }
            }
        }
    }
    found.sort_by(|a, b| (weight(&a.0), &a.0).cmp(&(weight(&b.0), &b.0)));
    Ok(found)
}

/// h * c^T for a flat vector c.
pub fn syndrome(field: &Field, h: &Matrix, c: &[Elt]) -> Vec<Elt> {
    let mut out = vec![0; h.rows()];
    for (j, &cj) in c.iter().enumerate() {
        if cj == 0 {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = field.add(*slot, field.mul(h.get(i, j), cj));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymat::Poly;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    /// G(z) = [1 + z + z^2, 1 + z^2], the classic d_free = 5 code.
    fn toy_code() -> ConvCode {
        let f = f2();
        let g = PolyMatrix::from_entries(
            f.clone(),
            &[vec![Poly::new(f.clone(), vec![1, 1, 1]), Poly::new(f, vec![1, 0, 1])]],
        )
        .unwrap();
        ConvCode::new(g).unwrap()
    }

    fn pv(code: &ConvCode, coeffs: Vec<Vec<Elt>>) -> PolyVector {
        PolyVector::new(code.field().clone(), coeffs.first().map_or(code.k(), Vec::len), coeffs).unwrap()
    }

    #[test]
    fn encode_zero_message() {
        let code = toy_code();
        let c = code.encode(&PolyVector::zero(code.field().clone(), 1, 3)).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn encode_unit_message_gives_generator_row() {
        let code = toy_code();
        let c = code.encode(&pv(&code, vec![vec![1]])).unwrap();
        assert_eq!(c.coeffs(), &[vec![1, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(c.weight(), 5);
    }

    #[test]
    fn encode_shift_equivariance() {
        let code = toy_code();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let m = pv(&code, (0..4).map(|_| vec![rng.random_range(0..2)]).collect());
            let shifted = code.encode(&m.shifted(3)).unwrap();
            let direct = code.encode(&m).unwrap().shifted(3);
            assert_eq!(shifted.trimmed(), direct.trimmed());
        }
    }

    #[test]
    fn sliding_generator_gamma_zero_is_coefficient() {
        let code = toy_code();
        for i in 0..=3 {
            assert_eq!(code.sliding_generator(0, i), code.generator().coeff_matrix(i));
        }
    }

    #[test]
    fn sliding_generator_gamma2_window() {
        let code = toy_code();
        let g0 = code.sliding_generator(2, 0);
        let expect = Matrix::from_rows(
            f2(),
            vec![
                vec![1, 1, 1, 0, 1, 1],
                vec![0, 0, 1, 1, 1, 0],
                vec![0, 0, 0, 0, 1, 1],
            ],
        )
        .unwrap();
        assert_eq!(g0, expect);
    }

    #[test]
    fn sliding_generator_residual_block_layout() {
        // gamma = 1, i = 1: [[G_2, G_3], [G_1, G_2]] with G_3 = 0.
        let code = toy_code();
        let g1 = code.sliding_generator(1, 1);
        let expect = Matrix::from_rows(
            f2(),
            vec![vec![1, 1, 0, 0], vec![1, 0, 1, 1]],
        )
        .unwrap();
        assert_eq!(g1, expect);
    }

    #[test]
    fn sliding_parity_cases() {
        let f = f2();
        // G = [1, z] has parity H = [z, 1]: H_0 = (0,1), H_1 = (1,0).
        let g = PolyMatrix::from_entries(
            f.clone(),
            &[vec![Poly::one(f.clone()), Poly::monomial(f.clone(), 1, 1)]],
        )
        .unwrap();
        let code = ConvCode::new(g).unwrap();
        assert_eq!(code.sliding_parity(0).unwrap(), code.parity().unwrap().coeff_matrix(0));
        let h1 = code.sliding_parity(1).unwrap();
        let expect = Matrix::from_rows(f, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 1]]).unwrap();
        assert_eq!(h1, expect);
    }

    #[test]
    fn sliding_parity_times_generator_vanishes() {
        let code = toy_code();
        for gamma in 0..4 {
            let h = code.sliding_parity(gamma).unwrap();
            let g = code.sliding_generator(gamma, 0);
            assert!(h.mul(&g.transpose()).unwrap().is_zero(), "gamma = {gamma}");
        }
    }

    #[test]
    fn column_distances_of_toy_code() {
        let code = toy_code();
        assert_eq!(code.column_distance(0, 1 << 20).unwrap(), 2);
        assert_eq!(code.column_distance(1, 1 << 20).unwrap(), 3);
    }

    fn random_delay_free_code<R: Rng>(f: &Field, n: usize, k: usize, memory: usize, rng: &mut R) -> ConvCode {
        loop {
            let coeffs: Vec<Matrix> = (0..=memory)
                .map(|_| Matrix::random(f.clone(), k, n, rng))
                .collect();
            if coeffs[0].rank() < k {
                continue;
            }
            let g = PolyMatrix::from_coeff_matrices(f.clone(), k, n, coeffs).unwrap();
            if let Ok(code) = ConvCode::new(g) {
                return code;
            }
        }
    }

    #[test]
    fn column_distance_monotonicity() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let code = random_delay_free_code(&f, 3, 1, 2, &mut rng);
            let d: Vec<usize> = (0..3).map(|g| code.column_distance(g, 1 << 20).unwrap()).collect();
            assert!(d[0] <= d[1] && d[1] <= d[2], "non-monotone: {d:?}");
        }
    }

    #[test]
    fn window_min_distance_equals_g0_min_distance() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..5 {
            let code = random_delay_free_code(&f, 4, 2, 2, &mut rng);
            let d_g0 = min_distance(&code.generator().coeff_matrix(0));
            for gamma in 0..3 {
                let d_win = min_distance(&code.sliding_generator(gamma, 0));
                assert_eq!(d_win, d_g0, "gamma = {gamma}");
            }
        }
    }

    /// Exhaustive minimum distance of the row span of a binary matrix.
    fn min_distance(g: &Matrix) -> usize {
        let k = g.rows();
        let f = g.field().clone();
        let mut best = usize::MAX;
        for mask in 1u32..1 << k {
            let msg: Vec<Elt> = (0..k).map(|i| (mask >> i) & 1).collect();
            let cw = vec_mat_mul(&f, &msg, g).unwrap();
            let w = weight(&cw);
            if w > 0 {
                best = best.min(w);
            }
        }
        best
    }

    #[test]
    fn window_codewords_start_with_g0_codeword() {
        let code = toy_code();
        let gamma = 2;
        let g0_block = code.sliding_generator(gamma, 0);
        let f = code.field().clone();
        let g0 = code.generator().coeff_matrix(0);
        for mask in 1u32..1 << g0_block.rows() {
            let msg: Vec<Elt> = (0..g0_block.rows()).map(|i| (mask >> i) & 1).collect();
            let cw = vec_mat_mul(&f, &msg, &g0_block).unwrap();
            // First nonzero n-chunk must lie in the row span of G_0.
            let first = cw.chunks(code.n()).find(|c| c.iter().any(|&x| x != 0)).unwrap();
            assert!(g0.solve_left(first).unwrap().is_some());
        }
    }

    #[test]
    fn encode_matches_sliding_recursion() {
        let code = toy_code();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for gamma in 0..3usize {
            let block = code.block_code(gamma).unwrap();
            let m = pv(&code, (0..7).map(|_| vec![rng.random_range(0..2)]).collect());
            let c = code.encode(&m).unwrap();
            let w = gamma + 1;
            let s = (c.len().max(m.len())).div_ceil(w);
            let r_blocks = c.blocks_padded(w, s);
            let m_blocks = m.blocks_padded(w, s);
            for j in 0..s {
                let mut acc = vec![0; block.block_len()];
                for i in 0..=j {
                    let gm = block.residual_matrix(j - i);
                    let term = vec_mat_mul(code.field(), &m_blocks[i], &gm).unwrap();
                    acc = crate::algebra::vec_add(code.field(), &acc, &term);
                }
                assert_eq!(acc, r_blocks[j], "block {j} of gamma {gamma}");
            }
        }
    }

    #[test]
    fn low_weight_codewords_cases() {
        let code = toy_code();
        let block = code.block_code(2).unwrap();
        let lows = low_weight_codewords(&block, 2, DEFAULT_ENUM_BUDGET).unwrap();
        // Exhaustive oracle over all 2^3 messages.
        let f = code.field().clone();
        let mut expected: Vec<Vec<Elt>> = Vec::new();
        for mask in 1u32..8 {
            let msg: Vec<Elt> = (0..3).map(|i| (mask >> i) & 1).collect();
            let cw = vec_mat_mul(&f, &msg, block.g0()).unwrap();
            if weight(&cw) <= 2 {
                expected.push(cw);
            }
        }
        expected.sort_by(|a, b| (weight(a), a.clone()).cmp(&(weight(b), b.clone())));
        let got: Vec<Vec<Elt>> = lows.iter().map(|(c, _)| c.clone()).collect();
        assert_eq!(got, expected);
        // The last generator row (0,0,0,0,1,1) is a weight-2 codeword.
        assert!(got.contains(&vec![0, 0, 0, 0, 1, 1]));
        for (c, m) in &lows {
            assert_eq!(&vec_mat_mul(&f, m, block.g0()).unwrap(), c);
        }
    }

    #[test]
    fn low_weight_codewords_empty_below_min_distance() {
        // G = [I_2 | A] with distance 3: no codewords of weight <= 2.
        let f = f2();
        let g = PolyMatrix::from_coeff_matrices(
            f.clone(),
            2,
            5,
            vec![Matrix::from_rows(
                f.clone(),
                vec![vec![1, 0, 1, 1, 0], vec![0, 1, 1, 0, 1]],
            )
            .unwrap()],
        )
        .unwrap();
        let code = ConvCode::new(g).unwrap();
        let block = code.block_code(0).unwrap();
        assert!(low_weight_codewords(&block, 2, DEFAULT_ENUM_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn compute_degree_cases() {
        let f = f2();
        let id = ConvCode::new(PolyMatrix::identity(f.clone(), 3)).unwrap();
        assert_eq!(id.compute_degree(1000).unwrap(), 0);
        assert_eq!(toy_code().compute_degree(1000).unwrap(), 2);
    }

    #[test]
    fn compute_degree_matches_cofactor_oracle() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..5 {
            let code = random_delay_free_code(&f, 3, 2, 2, &mut rng);
            let delta = code.compute_degree(1000).unwrap();
            // Oracle: expand each 2x2 minor by hand.
            let g = code.generator();
            let mut best = None;
            for cols in [[0, 1], [0, 2], [1, 2]] {
                let det = g
                    .entry(0, cols[0])
                    .mul(&g.entry(1, cols[1]))
                    .sub(&g.entry(0, cols[1]).mul(&g.entry(1, cols[0])));
                if let Some(d) = det.degree() {
                    best = Some(best.map_or(d, |b: usize| b.max(d)));
                }
            }
            assert_eq!(delta, best.unwrap());
        }
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for q in [2u64, 3, 64] {
            let f = Field::new(q).unwrap();
            for _ in 0..5 {
                let code = random_delay_free_code(&f, 3, 2, 2, &mut rng);
                let json = code.to_json();
                let text = serde_json::to_string(&json).unwrap();
                let back = ConvCode::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
                assert_eq!(back.generator(), code.generator());
                assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
            }
        }
    }

    #[test]
    fn poly_vector_blocks_and_flatten() {
        let f = f2();
        let v = PolyVector::new(f.clone(), 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(v.weight(), 4);
        assert_eq!(v.degree(), Some(2));
        assert_eq!(v.flatten(), vec![1, 0, 0, 1, 1, 1]);
        let blocks = v.blocks_padded(2, 2);
        assert_eq!(blocks, vec![vec![1, 0, 0, 1], vec![1, 1, 0, 0]]);
        let back = PolyVector::from_blocks(f, 2, &blocks).unwrap();
        assert_eq!(back.trimmed(), v.trimmed());
    }
}
