//! Exact arithmetic for Picard curves over ℚ: discriminants, minimal models, reduction
//! tests, invariants and twists, and the special curves with good reduction outside {2, 3}.

pub mod arith;
pub mod error;
pub mod invariants;
pub mod binary_forms;
pub mod db;
pub mod models;
pub mod mpoly;
pub mod parse;
pub mod poly;
pub mod reduction;
pub mod special_class;
pub mod ternary_forms;

pub use error::{PicardError, Result};
pub use poly::QPoly;
