//! Exact arithmetic over F_q and dense linear algebra.

mod field;
mod matrix;

pub use field::{Elt, Field};
pub use matrix::{vec_add, vec_mat_mul, vec_sub, weight, Matrix, Rref};
