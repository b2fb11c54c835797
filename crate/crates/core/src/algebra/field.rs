//! Arithmetic in F_q for prime powers q = p^m up to 2^16.
//!
//! Elements are canonical integers in `0..q`. For prime q the integer is the
//! residue; for extension fields it is the base-p encoding of the coordinate
//! vector in the polynomial basis {1, x, ..., x^{m-1}} modulo a fixed
//! irreducible polynomial. Multiplication and inversion go through log/exp
//! tables built from a generator of the multiplicative group, so every
//! operation is exact.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// A canonical field element, an integer in `0..q`.
pub type Elt = u32;

/// Conway polynomials for the small (p, m) pairs exercised by the toolkit,
/// as little-endian coefficient vectors (index i = coefficient of x^i).
/// Anything missing falls back to the lexicographically smallest monic
/// irreducible, which is equally deterministic.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
];

#[derive(Debug)]
struct FieldInner {
    q: u32,
    p: u32,
    m: u32,
    /// Irreducible modulus for m >= 2 (little-endian, monic, length m + 1).
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..q-1.
    exp: Vec<Elt>,
    /// log[a] for a in 1..q; log[0] is a sentinel.
    log: Vec<u32>,
    generator: Elt,
}

/// The finite field F_q. Cheap to clone (shared immutable tables).
#[derive(Clone, Debug)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.q == other.inner.q && self.inner.modulus == other.inner.modulus
    }
}
impl Eq for Field {}

impl Field {
    /// Builds F_q. Fails unless q is a prime power with 2 <= q <= 2^16.
    pub fn new(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        if q > 1 << 16 {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u32;
        let (p, m) = factor_prime_power(q).ok_or(Error::NotPrimePower(q as u64))?;

        let modulus = if m == 1 {
            Vec::new()
        } else {
            match CONWAY.iter().find(|&&(cp, cm, _)| cp == p && cm == m) {
                Some(&(_, _, coeffs)) => {
                    debug_assert!(is_irreducible(coeffs, p));
                    coeffs.to_vec()
                }
                None => smallest_irreducible(p, m),
            }
        };

        let raw = RawOps { p, m, modulus: &modulus };
        let (generator, exp, log) = build_tables(q, &raw)?;

        Ok(Field {
            inner: Arc::new(FieldInner { q, p, m, modulus, exp, log, generator }),
        })
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.inner.m
    }

    /// Little-endian coefficients of the irreducible modulus; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn generator(&self) -> Elt {
        self.inner.generator
    }

    pub fn zero(&self) -> Elt {
        0
    }

    pub fn one(&self) -> Elt {
        1
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        let f = &*self.inner;
        debug_assert!(a < f.q && b < f.q);
        if f.p == 2 {
            return a ^ b;
        }
        if f.m == 1 {
            return (a + b) % f.p;
        }
        digitwise(f.p, f.m, a, b, |x, y, p| (x + y) % p)
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        let f = &*self.inner;
        debug_assert!(a < f.q);
        if f.p == 2 {
            return a;
        }
        if f.m == 1 {
            return if a == 0 { 0 } else { f.p - a };
        }
        digitwise(f.p, f.m, a, 0, |x, _, p| (p - x) % p)
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        let f = &*self.inner;
        debug_assert!(a < f.q && b < f.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let n = f.q - 1;
        f.exp[((f.log[a as usize] + f.log[b as usize]) % n) as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        let f = &*self.inner;
        assert!(a != 0, "inverse of zero");
        debug_assert!(a < f.q);
        let n = f.q - 1;
        f.exp[((n - f.log[a as usize]) % n) as usize]
    }

    #[inline]
    pub fn div(&self, a: Elt, b: Elt) -> Elt {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.inner;
        let n = (f.q - 1) as u64;
        f.exp[((f.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.inner.q
    }

    /// Uniform element.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Elt {
        rng.random_range(0..self.inner.q)
    }

    /// Uniform nonzero element.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elt {
        rng.random_range(1..self.inner.q)
    }
}

#[inline]
fn digitwise(p: u32, m: u32, a: Elt, b: Elt, op: fn(u32, u32, u32) -> u32) -> Elt {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..m {
        out += op(a % p, b % p, p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = 0;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            return if rest == 1 { Some((p, m)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Raw polynomial-basis arithmetic used only while building the tables.
struct RawOps<'a> {
    p: u32,
    m: u32,
    modulus: &'a [u32],
}

impl RawOps<'_> {
    fn to_digits(&self, a: Elt) -> Vec<u32> {
        let mut a = a;
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, d: &[u32]) -> Elt {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn mul(&self, a: Elt, b: Elt) -> Elt {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as Elt;
        }
        let (da, db) = (self.to_digits(a), self.to_digits(b));
        let mut prod = vec![0u64; (2 * self.m - 1) as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] += x as u64 * y as u64;
            }
        }
        // Reduce modulo the monic irreducible.
        let p = self.p as u64;
        for i in (self.m as usize..prod.len()).rev() {
            let c = prod[i] % p;
            if c != 0 {
                let shift = i - self.m as usize;
                for (j, &mc) in self.modulus.iter().enumerate().take(self.m as usize) {
                    // Subtract c * mc * x^{shift+j}; work mod p throughout.
                    let sub = (c * mc as u64) % p;
                    prod[shift + j] = (prod[shift + j] % p + p - sub) % p;
                }
            }
            prod[i] = 0;
        }
        let digits: Vec<u32> = prod[..self.m as usize].iter().map(|&x| (x % p) as u32).collect();
        self.from_digits(&digits)
    }

    fn pow(&self, a: Elt, mut e: u64) -> Elt {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build_tables(q: u32, raw: &RawOps) -> Result<(Elt, Vec<Elt>, Vec<u32>)> {
    let order = q - 1;
    let factors = prime_factors(order);
    let generator = (2..q)
        .find(|&g| factors.iter().all(|&f| raw.pow(g, (order / f) as u64) != 1))
        .or(if q == 2 { Some(1) } else { None })
        .ok_or_else(|| Error::BadData(format!("no generator found for q = {q}")))?;

    let mut exp = vec![0 as Elt; order as usize];
    let mut log = vec![0u32; q as usize];
    let mut acc = 1 as Elt;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = acc;
        log[acc as usize] = i as u32;
        acc = raw.mul(acc, generator);
        if acc == 0 {
            return Err(Error::BadData(format!("modulus for q = {q} is not irreducible")));
        }
    }
    if acc != 1 {
        return Err(Error::BadData(format!("generator order mismatch for q = {q}")));
    }
    Ok((generator, exp, log))
}

/// Divisibility test of a by b over F_p, both little-endian, b nonzero.
fn poly_divides(b: &[u32], a: &[u32], p: u32) -> bool {
    let mut rem: Vec<u32> = a.to_vec();
    while rem.last() == Some(&0) {
        rem.pop();
    }
    let lead_inv = mod_inv(*b.last().unwrap(), p);
    while rem.len() >= b.len() {
        let c = (*rem.last().unwrap() * lead_inv) % p;
        let shift = rem.len() - b.len();
        for (j, &bc) in b.iter().enumerate() {
            rem[shift + j] = (rem[shift + j] + p - (c * bc) % p) % p;
        }
        while rem.last() == Some(&0) {
            rem.pop();
        }
    }
    rem.is_empty()
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // Fermat; p prime and small.
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m == 0 || *f.last().unwrap() == 0 {
        return false;
    }
    // Trial division by every monic polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_divides(&g, f, p) {
                return false;
            }
        }
    }
    true
}

/// Deterministic fallback: the monic irreducible of degree m over F_p whose
/// coefficient vector is smallest as a base-p integer.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for idx in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut v = idx;
        for _ in 0..m {
            f.push((v % p as u64) as u32);
            v /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}
