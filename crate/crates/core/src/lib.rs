//! Generic sequential decoding of delay-free convolutional codes, built
//! around information-set decoding, together with the exact combinatorial
//! planner used to pick attack parameters and a toy McEliece-style
//! instance generator for end-to-end experiments.

pub mod algebra;
pub mod combinat;
pub mod convcode;
pub mod cryptolab;
pub mod error;
pub mod isd;
pub mod planner;
pub mod polymat;
pub mod seqdecode;

pub use error::{Error, Result};
