//! Exact and numerical laboratory for sharp lower bounds on dyadic square
//! functions of indicator functions.

pub mod dyadic;
pub mod error;
pub mod extremal;
pub mod gaussian;
pub mod inequality;
pub mod numeric;
pub mod staircase;

pub use error::{LabError, Result};
pub use numeric::Number;
