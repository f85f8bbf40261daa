// Negated float comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyticity;
pub mod cli;
pub mod convergence;
pub mod error;
pub mod he_solver;
pub mod io;
pub mod linalg;
pub mod local_model;
pub mod parabolic;
pub mod special;
pub mod weighted_norms;

pub use error::{Error, Result};
