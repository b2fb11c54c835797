//! Scalar polynomials over F_q, canonical (no trailing zero coefficients).
//! The zero polynomial has an empty coefficient vector and degree `None`.

use crate::algebra::{Elt, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elt>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 if c == 1 => "z".into(),
                1 => format!("{c}*z"),
                _ if c == 1 => format!("z^{i}"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Elt>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: Field, c: Elt) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field, 1)
    }

    /// c * z^k
    pub fn monomial(field: Field, c: Elt, k: usize) -> Poly {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elt {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Elt {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut coeffs = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Poly::new(f.clone(), coeffs)
    }

    pub fn scale(&self, c: Elt) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Euclidean division: self = q * divisor + r with deg r < deg divisor.
    /// Panics on a zero divisor.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let f = &self.field;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(f.clone()), self.clone());
        }
        let lead_inv = f.inv(divisor.leading_coeff());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dd];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            if lead != 0 {
                let c = f.mul(lead, lead_inv);
                let shift = rem.len() - 1 - dd;
                quot[shift] = c;
                for (j, &bc) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = f.sub(rem[shift + j], f.mul(c, bc));
                }
            }
            rem.pop();
        }
        (Poly::new(f.clone(), quot), Poly::new(f.clone(), rem))
    }

    pub fn eval(&self, x: Elt) -> Elt {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading_coeff()))
    }
}
