//! Closed-form attack analytics: exceedance probabilities for per-block
//! error weights, hypergeometric tail bounds, Prange workfactors, iteration
//! budgeting, expected solution counts, the getting-lost probability, and
//! the running-time-to-bit-security translation.
//!
//! Every combinatorial formula is evaluated in exact big-integer rationals;
//! floating point enters only for exp/log-based bounds and final rendering.
//! The exceedance values alone span dozens of orders of magnitude.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::combinat::binomial;
use crate::error::{Error, Result};

pub type Rational = Ratio<BigInt>;

/// Parameters of the windowed block decoding problem.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BlockProfile {
    pub q: u64,
    /// Block length N = n(gamma + 1).
    pub block_len: usize,
    /// Block dimension K = k(gamma + 1).
    pub block_dim: usize,
    /// Number of blocks s.
    pub blocks: usize,
    /// Total error weight t_e.
    pub total_weight: usize,
    pub epsilon: usize,
}

impl BlockProfile {
    /// Expected per-block weight, rounded up: t = ceil(t_e / s).
    pub fn t(&self) -> usize {
        self.total_weight.div_ceil(self.blocks)
    }

    /// Per-block weight bound t + epsilon.
    pub fn w_max(&self) -> usize {
        self.t() + self.epsilon
    }
}

fn ratio(num: BigUint, den: BigUint) -> Rational {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// Probability that a uniform weight-t_e error on s blocks of length N has
/// weight at most t + epsilon in every block: the t_e-th coefficient of
/// p(z)^s with p(z) = sum_{w=0}^{t+eps} (q-1)^w C(N,w) z^w, divided by
/// (q-1)^{t_e} C(sN, t_e).
pub fn block_weight_probability(profile: &BlockProfile) -> Rational {
    let n = profile.block_len as u64;
    let s = profile.blocks;
    let t_e = profile.total_weight;
    let w_max = profile.w_max();
    let qm1 = BigUint::from(profile.q - 1);

    let base: Vec<BigUint> = (0..=w_max.min(t_e))
        .map(|w| binomial(n, w as u64) * qm1.pow(w as u32))
        .collect();
    let numerator = poly_pow_coeff(&base, s, t_e);
    let denominator = qm1.pow(t_e as u32) * binomial(n * s as u64, t_e as u64);
    ratio(numerator, denominator)
}

/// Coefficient of z^target in base(z)^s, computed with truncated products.
fn poly_pow_coeff(base: &[BigUint], s: usize, target: usize) -> BigUint {
    let mut acc = vec![BigUint::one()];
    let mut pow = base.to_vec();
    let mut e = s;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_trunc(&acc, &pow, target);
        }
        e >>= 1;
        if e > 0 {
            pow = poly_mul_trunc(&pow, &pow, target);
        }
    }
    acc.get(target).cloned().unwrap_or_else(BigUint::zero)
}

fn poly_mul_trunc(a: &[BigUint], b: &[BigUint], max_deg: usize) -> Vec<BigUint> {
    let len = (a.len() + b.len() - 1).min(max_deg + 1);
    let mut out = vec![BigUint::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() || i > max_deg {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > max_deg {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Union-bound estimate of P[max block weight > t + eps], from the
/// exponential tail of the hypergeometric distribution:
/// s * e^{-2 alpha (eps+1)} with alpha = (eps+1) / (s t), clamped to 1.
pub fn tail_bound(block_len: usize, blocks: usize, t: usize, epsilon: usize) -> f64 {
    debug_assert!(t + epsilon <= block_len);
    let s = blocks as f64;
    let alpha = (epsilon as f64 + 1.0) / (s * t as f64);
    (s * (-2.0 * alpha * (epsilon as f64 + 1.0)).exp()).min(1.0)
}

/// Prange workfactor WF_w = C(N, w) / C(N-K, w).
pub fn workfactor(block_len: usize, block_dim: usize, w: usize) -> Result<Rational> {
    if w + block_dim > block_len {
        return Err(Error::WeightTooLarge { w, max: block_len - block_dim });
    }
    let num = binomial(block_len as u64, w as u64);
    let den = binomial((block_len - block_dim) as u64, w as u64);
    Ok(ratio(num, den))
}

/// WF_{t+eps} / WF_t.
pub fn workfactor_ratio(block_len: usize, block_dim: usize, t: usize, epsilon: usize) -> Result<Rational> {
    Ok(workfactor(block_len, block_dim, t + epsilon)? / workfactor(block_len, block_dim, t)?)
}

/// Per-iteration probability of hitting an information set that avoids a
/// fixed weight-w error: C(N-K, w) / C(N, w).
pub fn per_iteration_hit(block_len: usize, block_dim: usize, w: usize) -> Result<Rational> {
    Ok(workfactor(block_len, block_dim, w)?.recip())
}

/// Lower bound on the probability that a fixed detectable weight-w block
/// error is found at all s steps with W iterations each:
/// (1 - (1 - C(N-K,w)/C(N,w))^W)^s.
pub fn success_probability(
    block_len: usize,
    block_dim: usize,
    w: usize,
    iterations: u64,
    blocks: usize,
) -> Result<f64> {
    let p = rational_to_f64(&per_iteration_hit(block_len, block_dim, w)?);
    let miss = (iterations as f64 * (1.0 - p).ln()).exp();
    Ok(((1.0 - miss).max(0.0)).powi(blocks as i32))
}

/// Minimal W with success_probability(..., W, s) >= target.
pub fn iterations_for_target(
    block_len: usize,
    block_dim: usize,
    w: usize,
    blocks: usize,
    target: f64,
) -> Result<u64> {
    if target <= 0.0 {
        return Err(Error::NonPositiveInput(format!("target = {target}")));
    }
    if target >= 1.0 {
        return Err(Error::BadData(format!("target = {target} is not achievable")));
    }
    let p = rational_to_f64(&per_iteration_hit(block_len, block_dim, w)?);
    // Per-step requirement: 1 - (1-p)^W >= target^(1/s).
    let per_step = target.powf(1.0 / blocks as f64);
    let mut est = ((1.0 - per_step).ln() / (1.0 - p).ln()).ceil().max(1.0) as u64;
    while est > 1 && success_probability(block_len, block_dim, w, est - 1, blocks)? >= target {
        est -= 1;
    }
    while success_probability(block_len, block_dim, w, est, blocks)? < target {
        est += 1;
    }
    Ok(est)
}

/// 1 + expected number of solutions of weight at most t + eps to a random
/// syndrome equation: 1 + sum_{w=0}^{t+eps} (q-1)^w C(N,w) / q^{N-K}.
pub fn expected_solutions(q: u64, block_len: usize, block_dim: usize, t: usize, epsilon: usize) -> f64 {
    let qm1 = BigUint::from(q - 1);
    let mut num = BigUint::zero();
    for w in 0..=(t + epsilon).min(block_len) {
        num += binomial(block_len as u64, w as u64) * qm1.pow(w as u32);
    }
    let den = BigUint::from(q).pow((block_len - block_dim) as u32);
    1.0 + rational_to_f64(&ratio(num, den))
}

/// P(E_{t_e, t_c}): probability that adding a uniform weight-t_c vector to a
/// fixed weight-t_e vector preserves the weight, summed over the number z of
/// cancellations:
/// sum_z C(t_e,z) C(N-t_e,z) C(t_e-z, t_c-2z) (q-2)^{t_c-2z}
///       / (C(N,t_c) (q-1)^{t_c-z}).
pub fn lost_probability(q: u64, block_len: usize, t_e: usize, t_c: usize) -> Rational {
    let n = block_len as u64;
    let mut acc: Rational = Ratio::zero();
    for z in 0..=t_c / 2 {
        let picks = t_c - 2 * z;
        // Impossible-argument binomials contribute zero.
        if z > t_e || picks > t_e - z {
            continue;
        }
        let mut num = binomial(t_e as u64, z as u64)
            * binomial(n - t_e as u64, z as u64)
            * binomial((t_e - z) as u64, picks as u64);
        if picks > 0 {
            if q == 2 {
                continue; // (q-2)^{picks} = 0
            }
            num *= BigUint::from(q - 2).pow(picks as u32);
        }
        let den = binomial(n, t_c as u64) * BigUint::from(q - 1).pow((t_c - z) as u32);
        acc += ratio(num, den);
    }
    acc
}

/// Upper bound on bits of security for a measured running time:
/// log2(clock * 10^9 Hz * seconds * 8 integer ops * 64 bit ops).
pub fn time_to_bits(seconds: f64, clock_ghz: f64) -> Result<f64> {
    if seconds <= 0.0 || clock_ghz <= 0.0 {
        return Err(Error::NonPositiveInput(format!(
            "seconds = {seconds}, clock_ghz = {clock_ghz}"
        )));
    }
    Ok((clock_ghz * 1e9 * seconds * 8.0 * 64.0).log2())
}

// ---------------------------------------------------------------------------
// Exact-to-decimal rendering.

/// Decimal string with the given number of significant digits (round half
/// up). Plain notation in a human range, scientific otherwise.
pub fn format_rational(r: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".into();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.numer().abs().to_biguint().expect("abs");
    let b = r.denom().abs().to_biguint().expect("abs");

    let dig_a = a.to_string().len() as i64;
    let dig_b = b.to_string().len() as i64;
    // Scale so the integer quotient carries sig + 2 guard digits.
    let shift = (sig as i64 + 2 + dig_b - dig_a).max(0) as u32;
    let scaled = (&a * BigUint::from(10u32).pow(shift)) / &b;
    let digits = scaled.to_string();
    let exp10 = digits.len() as i64 - 1 - shift as i64;

    // Round to sig digits.
    let mut mant: Vec<u8> = digits.bytes().take(sig).map(|b| b - b'0').collect();
    let round_up = digits.as_bytes().get(sig).is_some_and(|&d| d >= b'5');
    let mut exp10 = exp10;
    if round_up {
        let mut i = mant.len();
        loop {
            if i == 0 {
                mant.insert(0, 1);
                mant.pop();
                exp10 += 1;
                break;
            }
            i -= 1;
            if mant[i] == 9 {
                mant[i] = 0;
            } else {
                mant[i] += 1;
                break;
            }
        }
    }
    let mant_str: String = mant.iter().map(|d| (d + b'0') as char).collect();

    let body = if (-4..15).contains(&exp10) {
        if exp10 >= 0 {
            let e = exp10 as usize;
            if e + 1 >= mant_str.len() {
                format!("{}{}", mant_str, "0".repeat(e + 1 - mant_str.len()))
            } else {
                trim_zeros(format!("{}.{}", &mant_str[..=e], &mant_str[e + 1..]))
            }
        } else {
            trim_zeros(format!("0.{}{}", "0".repeat((-exp10 - 1) as usize), mant_str))
        }
    } else {
        let frac = trim_zeros(format!("{}.{}", &mant_str[..1], &mant_str[1..]));
        format!("{frac}e{exp10}")
    };
    format!("{sign}{body}")
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Accurate f64 value of an exact rational (through a 17-digit decimal).
pub fn rational_to_f64(r: &Rational) -> f64 {
    format_rational(r, 17).parse().expect("valid decimal")
}

// ---------------------------------------------------------------------------
// CSV emitters.

/// (epsilon, probability) sweep of the exact block-weight probability.
pub fn probability_table(
    q: u64,
    block_len: usize,
    blocks: usize,
    total_weight: usize,
    eps_range: impl IntoIterator<Item = usize>,
) -> String {
    let mut out = String::from("epsilon,probability\n");
    for eps in eps_range {
        let profile = BlockProfile {
            q,
            block_len,
            block_dim: 0,
            blocks,
            total_weight,
            epsilon: eps,
        };
        let p = block_weight_probability(&profile);
        out.push_str(&format!("{eps},{}\n", format_rational(&p, 15)));
    }
    out
}

/// (epsilon, WF_{t+eps}/WF_t) sweep.
pub fn wf_ratio_table(
    block_len: usize,
    block_dim: usize,
    t: usize,
    eps_range: impl IntoIterator<Item = usize>,
) -> Result<String> {
    let mut out = String::from("epsilon,wf_ratio\n");
    for eps in eps_range {
        let r = workfactor_ratio(block_len, block_dim, t, eps)?;
        out.push_str(&format!("{eps},{}\n", format_rational(&r, 15)));
    }
    Ok(out)
}

/// (t_e, t_c, P(E_{t_e,t_c})) grid.
pub fn lost_probability_table(
    q: u64,
    block_len: usize,
    te_range: impl IntoIterator<Item = usize> + Clone,
    tc_range: impl IntoIterator<Item = usize>,
) -> String {
    let mut out = String::from("te,tc,prob\n");
    for tc in tc_range {
        for te in te_range.clone() {
            let p = lost_probability(q, block_len, te, tc);
            out.push_str(&format!("{te},{tc},{}\n", format_rational(&p, 15)));
        }
    }
    out
}
