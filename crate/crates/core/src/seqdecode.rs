//! Depth-first sequential ISD: block-wise residual computation, depth-first
//! search with backtracking over per-block candidate lists, weight-budget
//! pruning, final verification against the original code, and message
//! recovery. Runs on the code itself when it is delay-free and on its
//! left-prime supercode otherwise.

use std::collections::VecDeque;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{vec_mat_mul, vec_sub, weight, Elt, Matrix};
use crate::convcode::{low_weight_codewords, ConvCode, PolyVector, SlidingBlockCode};
use crate::error::{Error, Result};
use crate::isd::{augment_low_weight, prange_collect, IsdConfig, Solution, SolutionList};

/// Attack configuration. `t + epsilon` bounds the weight accepted per block;
/// `total_weight` (t_e) drives the branch-weight prune and is `None` only
/// when the instance does not publish it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttackParams {
    pub gamma: usize,
    /// Expected per-block weight t (usually ceil(t_e / s)).
    pub t: usize,
    pub epsilon: usize,
    /// Fixed Prange iteration count W per ISD call.
    pub isd_iterations: u64,
    /// Total error weight t_e; `None` disables the budget prune.
    pub total_weight: Option<usize>,
    /// Low-weight codeword search bound (0 disables augmentation).
    pub w_low: usize,
    pub seed: u64,
    /// Benchmark mode: walk the correct branch and record ISD positions.
    pub cheat: bool,
    /// Search-node budget for the depth-first traversal.
    pub max_nodes: u64,
    /// Enumerate all information-set candidates instead of sampling.
    pub exhaustive_isd: bool,
    /// Number of blocks s; derived from the received word when `None`.
    pub num_blocks: Option<usize>,
    /// Enumeration cap for low-weight search and exhaustive ISD.
    pub enum_budget: u64,
}

impl AttackParams {
    pub fn new(gamma: usize, t: usize, epsilon: usize, isd_iterations: u64, total_weight: usize, seed: u64) -> AttackParams {
        AttackParams {
            gamma,
            t,
            epsilon,
            isd_iterations,
            total_weight: Some(total_weight),
            w_low: 2,
            seed,
            cheat: false,
            max_nodes: 1_000_000,
            exhaustive_isd: false,
            num_blocks: None,
            enum_budget: crate::convcode::DEFAULT_ENUM_BUDGET,
        }
    }

    /// Per-block weight bound t + epsilon.
    pub fn w_max(&self) -> usize {
        self.t + self.epsilon
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AttackOutcome {
    Found { error: PolyVector, message: PolyVector },
    NotFound,
    BudgetExceeded,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DepthStats {
    pub isd_calls: u64,
    pub total_candidates: u64,
    pub max_list_len: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackTrace {
    pub nodes: u64,
    pub blocks: usize,
    pub supercode_used: bool,
    pub per_depth: Vec<DepthStats>,
}

pub struct AttackOutput {
    pub outcome: AttackOutcome,
    pub trace: AttackTrace,
}

/// Residual for block j: r~_j - sum_{i=0}^{j-1} m~_i G~^gamma_{j-i}.
/// For j = 0 this is r~_0 unchanged.
pub fn residual(
    block: &SlidingBlockCode,
    r_blocks: &[Vec<Elt>],
    accepted_messages: &[Vec<Elt>],
    j: usize,
) -> Result<Vec<Elt>> {
    if j >= r_blocks.len() {
        return Err(Error::IndexOutOfRange(format!(
            "block {j} of {}",
            r_blocks.len()
        )));
    }
    if accepted_messages.len() < j {
        return Err(Error::IndexOutOfRange(format!(
            "residual at depth {j} needs {j} accepted messages, got {}",
            accepted_messages.len()
        )));
    }
    let field = block.field().clone();
    let mut out = r_blocks[j].clone();
    let max_i = block.stored_residuals().len();
    for i in 0..j {
        let d = j - i;
        if d > max_i {
            continue;
        }
        let term = vec_mat_mul(&field, &accepted_messages[i], &block.residual_matrix(d))?;
        out = vec_sub(&field, &out, &term);
    }
    Ok(out)
}

/// Whether received - error lies in the code: by the polynomial syndrome
/// when a parity-check matrix exists, by solving the encoding system
/// otherwise.
pub fn verify(code: &ConvCode, received: &PolyVector, error: &PolyVector) -> Result<bool> {
    if received.width() != code.n() || error.width() != code.n() {
        return Err(Error::DimensionMismatch("verify: width mismatch".into()));
    }
    let candidate = received.sub(error)?;
    match code.parity() {
        Some(parity) => {
            let c_col = poly_vector_as_column(&candidate);
            Ok(parity.poly_mul(&c_col)?.is_zero())
        }
        None => Ok(recover_message(code, &candidate).is_ok()),
    }
}

/// The unique m(z) with m(z) G(z) = c(z), through the flattened
/// block-Toeplitz encoding system. `NotInCode` when the system is
/// inconsistent.
pub fn recover_message(code: &ConvCode, codeword: &PolyVector) -> Result<PolyVector> {
    if codeword.width() != code.n() {
        return Err(Error::DimensionMismatch("recover_message: width mismatch".into()));
    }
    let field = code.field().clone();
    let Some(deg_c) = codeword.degree() else {
        return Ok(PolyVector::zero(field, code.k(), 0));
    };
    // Degree bound from Cramer's rule: deg m <= deg c + (k - 1) mu.
    let m_len = deg_c + (code.k() - 1) * code.memory() + 1;
    let out_len = m_len + code.memory();
    let k = code.k();
    let n = code.n();
    let mut system = Matrix::zeros(field.clone(), k * m_len, n * out_len);
    for i in 0..m_len {
        for d in 0..=code.memory() {
            let g_d = code.generator().coeff_matrix(d);
            for bi in 0..k {
                for bj in 0..n {
                    system.set(i * k + bi, (i + d) * n + bj, g_d.get(bi, bj));
                }
            }
        }
    }
    let mut rhs = codeword.flatten();
    rhs.resize(n * out_len, 0);
    let flat = system.solve_left(&rhs)?.ok_or(Error::NotInCode)?;
    Ok(PolyVector::from_flat(field, k, &flat)?.trimmed())
}

fn poly_vector_as_column(v: &PolyVector) -> crate::polymat::PolyMatrix {
    let field = v.field().clone();
    let coeffs: Vec<Matrix> = (0..v.len())
        .map(|i| {
            let row = v.coeff(i);
            Matrix::from_fn(field.clone(), v.width(), 1, |r, _| row[r])
        })
        .collect();
    crate::polymat::PolyMatrix::from_coeff_matrices(field, v.width(), 1, coeffs).expect("column")
}

/// Deterministic per-call ISD seed: a function of the master seed, the
/// depth, and the residual itself, so identical residuals see identical
/// candidate lists regardless of the path that produced them.
fn derive_seed(master: u64, depth: usize, residual: &[Elt]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ master.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mix = |h: &mut u64, x: u64| {
        *h ^= x;
        *h = h.wrapping_mul(0x1000_0000_01b3);
    };
    mix(&mut h, depth as u64 + 1);
    for &e in residual {
        mix(&mut h, e as u64 + 1);
    }
    h
}

/// The working view of an attack: the block machinery of the code itself
/// when delay-free, of its left-prime supercode otherwise.
struct Working {
    block: SlidingBlockCode,
    lows: Vec<(Vec<Elt>, Vec<Elt>)>,
    supercode_used: bool,
}

fn working_view(code: &ConvCode, params: &AttackParams) -> Result<Working> {
    let (view, supercode_used) = if code.is_delay_free() {
        (code.clone(), false)
    } else {
        let (_, u1) = code.generator().supercode_factorization()?;
        (ConvCode::new(u1)?, true)
    };
    let block = view.block_code(params.gamma)?;
    let lows = if params.w_low == 0 {
        Vec::new()
    } else {
        low_weight_codewords(&block, params.w_low.min(params.w_max()), params.enum_budget)?
    };
    Ok(Working { block, lows, supercode_used })
}

fn isd_list(
    working: &Working,
    residual_word: &[Elt],
    depth: usize,
    params: &AttackParams,
    stats: &mut DepthStats,
) -> Result<SolutionList> {
    let cfg = IsdConfig {
        w_max: params.w_max(),
        iterations: params.isd_iterations,
        seed: derive_seed(params.seed, depth, residual_word),
        dedup: true,
        exhaustive: params.exhaustive_isd,
        enum_budget: params.enum_budget,
    };
    let plain = prange_collect(working.block.g0(), residual_word, &cfg)?;
    let list = augment_low_weight(working.block.field(), &plain, &working.lows, params.w_max());
    stats.isd_calls += 1;
    stats.total_candidates += list.len() as u64;
    stats.max_list_len = stats.max_list_len.max(list.len());
    Ok(list)
}

struct Frame {
    candidates: VecDeque<Solution>,
    chosen: Option<Solution>,
}

/// Algorithm: at each depth pop the head candidate; prune when the
/// accumulated weight budget would be exceeded; otherwise accept it, compute
/// the next residual and its (augmented) ISD list, and descend when the list
/// is nonempty. A candidate is consumed on acceptance and the block is
/// zeroed again on backtrack. At the last depth a candidate survives only if
/// the assembled word verifies against the original code. Returns the first
/// verified pair in depth-first order.
pub fn attack(code: &ConvCode, received: &PolyVector, params: &AttackParams) -> Result<AttackOutput> {
    let working = working_view(code, params)?;
    let block = &working.block;
    let per_block = block.coeffs_per_block();
    let s = params
        .num_blocks
        .unwrap_or_else(|| received.len().div_ceil(per_block).max(1));
    let r_blocks = received.blocks_padded(per_block, s);
    let budget = params.total_weight.unwrap_or(usize::MAX);

    let mut per_depth = vec![DepthStats::default(); s];
    let mut trace = AttackTrace {
        nodes: 0,
        blocks: s,
        supercode_used: working.supercode_used,
        per_depth: Vec::new(),
    };

    let root = isd_list(&working, &r_blocks[0], 0, params, &mut per_depth[0])?;
    let mut stack = vec![Frame { candidates: root.entries().iter().cloned().collect(), chosen: None }];
    let mut acc_weight = 0usize;

    let outcome = loop {
        let Some(frame) = stack.last_mut() else {
            break AttackOutcome::NotFound;
        };
        // Returning to this frame un-accepts its current candidate.
        if let Some(prev) = frame.chosen.take() {
            acc_weight -= weight(&prev.error);
        }
        let Some(cand) = frame.candidates.pop_front() else {
            stack.pop();
            continue;
        };
        trace.nodes += 1;
        if trace.nodes > params.max_nodes {
            break AttackOutcome::BudgetExceeded;
        }
        let w = weight(&cand.error);
        if acc_weight + w > budget {
            continue;
        }
        let depth = stack.len() - 1;
        acc_weight += w;
        stack.last_mut().expect("nonempty").chosen = Some(cand);

        if depth == s - 1 {
            let (error, message) = assemble(code, received, &stack)?;
            if let Some(pair) = message {
                break AttackOutcome::Found { error, message: pair };
            }
            continue;
        }

        let prefix: Vec<Vec<Elt>> = stack
            .iter()
            .map(|f| f.chosen.as_ref().expect("accepted prefix").message.clone())
            .collect();
        let next = residual(block, &r_blocks, &prefix, depth + 1)?;
        let list = isd_list(&working, &next, depth + 1, params, &mut per_depth[depth + 1])?;
        if list.is_empty() {
            continue;
        }
        stack.push(Frame { candidates: list.entries().iter().cloned().collect(), chosen: None });
    };

    trace.per_depth = per_depth;
    Ok(AttackOutput { outcome, trace })
}

/// Assemble the error from the accepted branch and validate the full word
/// against the original code; returns the recovered message when it passes.
fn assemble(
    code: &ConvCode,
    received: &PolyVector,
    stack: &[Frame],
) -> Result<(PolyVector, Option<PolyVector>)> {
    let blocks: Vec<Vec<Elt>> = stack
        .iter()
        .map(|f| f.chosen.as_ref().expect("accepted prefix").error.clone())
        .collect();
    let error = PolyVector::from_blocks(code.field().clone(), code.n(), &blocks)?.trimmed();
    if !verify(code, received, &error)? {
        return Ok((error, None));
    }
    let message = recover_message(code, &received.sub(&error)?)?;
    Ok((error, Some(message)))
}

/// Per-block position of the planted error in the ISD output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "position")]
pub enum BlockPosition {
    Found(usize),
    Missing,
}

#[derive(Clone, Debug, Serialize)]
pub struct WorkEstimate {
    pub positions: Vec<BlockPosition>,
    /// Sum of the 1-based positions over the found blocks: the node-count
    /// estimate for the full depth-first run.
    pub total_positions: u64,
    pub found_all: bool,
    /// Wall time spent inside the s ISD calls of the walk.
    pub isd_seconds: f64,
    /// total_positions * (average ISD call time): the running-time estimate.
    pub estimated_seconds: f64,
    pub per_depth_list_sizes: Vec<usize>,
    pub supercode_used: bool,
}

/// Benchmark mode: walk the correct branch using the planted error and
/// record, at each depth, the 1-based position of the correct block error
/// in the (augmented) candidate list; `Missing` marks depths where the
/// attack would fail. The position sum estimates the nodes a real run
/// traverses.
pub fn estimate_work(
    code: &ConvCode,
    received: &PolyVector,
    planted_error: &PolyVector,
    params: &AttackParams,
) -> Result<WorkEstimate> {
    let working = working_view(code, params)?;
    let block = &working.block;
    let per_block = block.coeffs_per_block();
    let s = params
        .num_blocks
        .unwrap_or_else(|| received.len().div_ceil(per_block).max(1));
    let r_blocks = received.blocks_padded(per_block, s);
    let e_blocks = planted_error.blocks_padded(per_block, s);

    let mut positions = Vec::with_capacity(s);
    let mut list_sizes = Vec::with_capacity(s);
    let mut prefix: Vec<Vec<Elt>> = Vec::with_capacity(s);
    let mut total = 0u64;
    let mut stats = DepthStats::default();
    let started = Instant::now();
    for j in 0..s {
        let res = residual(block, &r_blocks, &prefix, j)?;
        let coded = vec_sub(block.field(), &res, &e_blocks[j]);
        let msg = block
            .g0()
            .solve_left(&coded)?
            .ok_or_else(|| Error::InconsistentSpec("planted error does not match the instance".into()))?;
        let list = isd_list(&working, &res, j, params, &mut stats)?;
        list_sizes.push(list.len());
        match list.position_of(&e_blocks[j]) {
            Some(pos) => {
                total += pos as u64;
                positions.push(BlockPosition::Found(pos));
            }
            None => positions.push(BlockPosition::Missing),
        }
        prefix.push(msg);
    }
    let isd_seconds = started.elapsed().as_secs_f64();
    let found_all = positions.iter().all(|p| matches!(p, BlockPosition::Found(_)));
    let estimated_seconds = isd_seconds / s as f64 * total as f64;
    Ok(WorkEstimate {
        positions,
        total_positions: total,
        found_all,
        isd_seconds,
        estimated_seconds,
        per_depth_list_sizes: list_sizes,
        supercode_used: working.supercode_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{vec_add, Field};
    use crate::polymat::{Poly, PolyMatrix};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    fn toy_code() -> ConvCode {
        let f = f2();
        let g = PolyMatrix::from_entries(
            f.clone(),
            &[vec![Poly::new(f.clone(), vec![1, 1, 1]), Poly::new(f, vec![1, 0, 1])]],
        )
        .unwrap();
        ConvCode::new(g).unwrap()
    }

    fn random_message(code: &ConvCode, len: usize, rng: &mut ChaCha8Rng) -> PolyVector {
        let coeffs = (0..len)
            .map(|_| (0..code.k()).map(|_| code.field().sample(rng)).collect())
            .collect();
        PolyVector::new(code.field().clone(), code.k(), coeffs).unwrap()
    }

    /// Spread `positions` error symbols with per-block weight <= cap.
    fn planted_error(
        code: &ConvCode,
        per_block: usize,
        s: usize,
        cap: usize,
        total: usize,
        rng: &mut ChaCha8Rng,
    ) -> PolyVector {
        let n = code.n();
        let block_positions = per_block * n;
        loop {
            let mut flat = vec![0 as Elt; s * block_positions];
            let support = crate::isd::sample_k_subset(flat.len(), total, rng);
            for &pos in &support {
                flat[pos] = code.field().sample_nonzero(rng);
            }
            let ok = (0..s).all(|b| {
                weight(&flat[b * block_positions..(b + 1) * block_positions]) <= cap
            });
            if ok {
                return PolyVector::from_flat(code.field().clone(), n, &flat).unwrap();
            }
        }
    }

    #[test]
    fn residual_block_zero_is_received() {
        let code = toy_code();
        let block = code.block_code(2).unwrap();
        let r_blocks = vec![vec![1, 0, 1, 1, 0, 0], vec![0; 6]];
        let r0 = residual(&block, &r_blocks, &[], 0).unwrap();
        assert_eq!(r0, r_blocks[0]);
        assert!(matches!(
            residual(&block, &r_blocks, &[], 5),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn residual_with_correct_prefix_reencodes() {
        let code = toy_code();
        let gamma = 2;
        let block = code.block_code(gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let m = random_message(&code, 7, &mut rng);
        let c = code.encode(&m).unwrap();
        let s = c.len().div_ceil(gamma + 1);
        let e = planted_error(&code, gamma + 1, s, 2, 2, &mut rng);
        let r = c.add(&e).unwrap();
        let r_blocks = r.blocks_padded(gamma + 1, s);
        let m_blocks = m.blocks_padded(gamma + 1, s);
        let e_blocks = e.blocks_padded(gamma + 1, s);
        for j in 0..s {
            let res = residual(&block, &r_blocks, &m_blocks[..j], j).unwrap();
            // residual = m~_j G~_0 + e~_j
            let enc = vec_mat_mul(code.field(), &m_blocks[j], block.g0()).unwrap();
            assert_eq!(res, vec_add(code.field(), &enc, &e_blocks[j]));
            // With a zero error the residual lies in the window row span.
            if e_blocks[j].iter().all(|&x| x == 0) {
                assert!(block.g0().solve_left(&res).unwrap().is_some());
            }
        }
    }

    #[test]
    fn attack_on_exact_codeword() {
        let code = toy_code();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_message(&code, 6, &mut rng);
        let r = code.encode(&m).unwrap();
        let mut params = AttackParams::new(2, 0, 0, 0, 0, 7);
        params.exhaustive_isd = true;
        params.w_low = 0;
        let out = attack(&code, &r, &params).unwrap();
        match out.outcome {
            AttackOutcome::Found { error, message } => {
                assert!(error.is_zero());
                assert_eq!(message.trimmed(), m.trimmed());
            }
            other => panic!("expected recovery, got {other:?}"),
        }
    }

    #[test]
    fn attack_recovers_planted_error_exhaustive() {
        let code = toy_code();
        let gamma = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..10 {
            let m = random_message(&code, 9, &mut rng);
            let c = code.encode(&m).unwrap();
            let s = c.len().div_ceil(gamma + 1);
            // Total weight within the unique decoding radius of d_free = 5.
            let e = planted_error(&code, gamma + 1, s, 2, 2, &mut rng);
            let r = c.add(&e).unwrap();
            let mut params = AttackParams::new(gamma, 1, 1, 0, 2, trial);
            params.exhaustive_isd = true;
            params.num_blocks = Some(s);
            let out = attack(&code, &r, &params).unwrap();
            match out.outcome {
                AttackOutcome::Found { error, message } => {
                    assert_eq!(error.trimmed(), e.trimmed(), "trial {trial}");
                    assert_eq!(message.trimmed(), m.trimmed(), "trial {trial}");
                }
                other => panic!("trial {trial}: {other:?}"),
            }
        }
    }

    #[test]
    fn attack_deterministic_and_budgeted() {
        let code = toy_code();
        let gamma = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let m = random_message(&code, 9, &mut rng);
        let c = code.encode(&m).unwrap();
        let s = c.len().div_ceil(gamma + 1);
        let e = planted_error(&code, gamma + 1, s, 2, 2, &mut rng);
        let r = c.add(&e).unwrap();
        let mut params = AttackParams::new(gamma, 1, 1, 40, 2, 99);
        params.num_blocks = Some(s);
        let a = attack(&code, &r, &params).unwrap();
        let b = attack(&code, &r, &params).unwrap();
        assert_eq!(a.trace.nodes, b.trace.nodes);
        match (&a.outcome, &b.outcome) {
            (AttackOutcome::Found { error: ea, .. }, AttackOutcome::Found { error: eb, .. }) => {
                assert_eq!(ea, eb)
            }
            (x, y) => assert_eq!(format!("{x:?}"), format!("{y:?}")),
        }

        let mut tight = params.clone();
        tight.max_nodes = 1;
        let out = attack(&code, &r, &tight).unwrap();
        assert!(
            matches!(out.outcome, AttackOutcome::BudgetExceeded)
                || matches!(out.outcome, AttackOutcome::Found { .. }),
            "a 1-node budget either finds immediately or reports the budget"
        );
    }

    #[test]
    fn attack_not_found_when_no_candidates() {
        let code = toy_code();
        // Received word off the code with a zero-weight budget.
        let r = PolyVector::new(f2(), 2, vec![vec![1, 0], vec![0, 0], vec![1, 1]]).unwrap();
        let mut params = AttackParams::new(2, 0, 0, 0, 0, 0);
        params.exhaustive_isd = true;
        params.w_low = 0;
        let out = attack(&code, &r, &params).unwrap();
        assert!(matches!(out.outcome, AttackOutcome::NotFound));
    }

    #[test]
    fn verify_cases() {
        let code = toy_code();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = random_message(&code, 5, &mut rng);
        let c = code.encode(&m).unwrap();
        let zero = PolyVector::zero(f2(), 2, c.len());
        assert!(verify(&code, &c, &zero).unwrap());
        let e = planted_error(&code, 1, c.len(), 1, 2, &mut rng);
        let r = c.add(&e).unwrap();
        assert!(verify(&code, &r, &e).unwrap());
        // Perturbing the error off the coset fails.
        let mut bad = e.coeffs().to_vec();
        bad[0][0] ^= 1;
        let bad = PolyVector::new(f2(), 2, bad).unwrap();
        assert!(!verify(&code, &r, &bad).unwrap());
    }

    #[test]
    fn recover_message_roundtrip() {
        let code = toy_code();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let m = random_message(&code, rng.random_range(1..8), &mut rng);
            let c = code.encode(&m).unwrap();
            let back = recover_message(&code, &c).unwrap();
            assert_eq!(back, m.trimmed());
        }
        // Zero codeword.
        let z = recover_message(&code, &PolyVector::zero(f2(), 2, 4)).unwrap();
        assert!(z.is_zero());
        // A short nonzero word is either consistently decoded or rejected.
        let w = PolyVector::new(f2(), 2, vec![vec![1, 0]]).unwrap();
        match recover_message(&code, &w) {
            Ok(m) => assert_eq!(code.encode(&m).unwrap().trimmed(), w.trimmed()),
            Err(Error::NotInCode) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn attack_through_supercode_on_catastrophic_key() {
        // G = z * [1, 1+z]: catastrophic and not delay-free; the attack must
        // decode in the supercode generated by [1, 1+z].
        let f = f2();
        let g = PolyMatrix::from_entries(
            f.clone(),
            &[vec![Poly::new(f.clone(), vec![0, 1]), Poly::new(f.clone(), vec![0, 1, 1])]],
        )
        .unwrap();
        let code = ConvCode::new(g).unwrap();
        assert!(!code.is_non_catastrophic());
        assert!(!code.is_delay_free());
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for trial in 0..10u64 {
            let m = random_message(&code, 6, &mut rng);
            let c = code.encode(&m).unwrap();
            let s = c.len().div_ceil(2);
            let e = planted_error(&code, 2, s, 1, 1, &mut rng);
            let r = c.add(&e).unwrap();
            let mut params = AttackParams::new(1, 1, 0, 0, 1, trial);
            params.exhaustive_isd = true;
            params.num_blocks = Some(s);
            let out = attack(&code, &r, &params).unwrap();
            match out.outcome {
                AttackOutcome::Found { error, message } => {
                    assert!(out.trace.supercode_used);
                    assert_eq!(error.trimmed(), e.trimmed(), "trial {trial}");
                    assert_eq!(code.encode(&message).unwrap().trimmed(), c.trimmed());
                }
                other => panic!("trial {trial}: {other:?}"),
            }
        }
    }

    #[test]
    fn estimate_work_best_case_positions() {
        let code = toy_code();
        let gamma = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let m = random_message(&code, 9, &mut rng);
        let c = code.encode(&m).unwrap();
        let s = c.len().div_ceil(gamma + 1);
        let e = planted_error(&code, gamma + 1, s, 2, 2, &mut rng);
        let r = c.add(&e).unwrap();
        let mut params = AttackParams::new(gamma, 1, 1, 0, 2, 1);
        params.exhaustive_isd = true;
        params.num_blocks = Some(s);
        let est = estimate_work(&code, &r, &e, &params).unwrap();
        assert!(est.found_all);
        assert_eq!(est.positions.len(), s);
        // The planted error's block is somewhere in each list; a clean toy
        // instance also lets the full attack run match the estimate bound.
        let out = attack(&code, &r, &params).unwrap();
        assert!(matches!(out.outcome, AttackOutcome::Found { .. }));
        assert!(
            est.total_positions + s as u64 >= out.trace.nodes,
            "positions {} vs nodes {}",
            est.total_positions,
            out.trace.nodes
        );
    }

    #[test]
    fn estimate_work_reports_missing_blocks() {
        // Plant an undetectable block error (its support contains a window
        // codeword) and disable the augmentation: the walk must flag it.
        let code = toy_code();
        let gamma = 2;
        let block = code.block_code(gamma).unwrap();
        let lows = low_weight_codewords(&block, 2, 1 << 20).unwrap();
        let (cw, _) = lows.iter().find(|(c, _)| weight(c) == 2).unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let m = random_message(&code, 9, &mut rng);
        let c = code.encode(&m).unwrap();
        let s = c.len().div_ceil(gamma + 1);
        // Error block 0 equals the window codeword.
        let mut flat = vec![0 as Elt; s * 6];
        flat[..6].copy_from_slice(&cw);
        let e = PolyVector::from_flat(f2(), 2, &flat).unwrap();
        let r = c.add(&e).unwrap();
        let mut params = AttackParams::new(gamma, 1, 1, 0, 2, 5);
        params.exhaustive_isd = true;
        params.w_low = 0;
        params.num_blocks = Some(s);
        let est = estimate_work(&code, &r, &e, &params).unwrap();
        assert_eq!(est.positions[0], BlockPosition::Missing);
        assert!(!est.found_all);
        // With augmentation enabled the same block is found.
        params.w_low = 2;
        let est2 = estimate_work(&code, &r, &e, &params).unwrap();
        assert!(matches!(est2.positions[0], BlockPosition::Found(_)));
    }
}
