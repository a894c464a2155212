//! Finite fields, cyclotomic arithmetic, Gauss and Jacobi sums, Greene and
//! McCarthy hypergeometric functions, and point counts on Dwork hypersurfaces.

pub mod arith;
pub mod char_sums;
pub mod complex;
pub mod cyclotomic;
pub mod dwork;
pub mod error;
pub mod finite_field;
pub mod padic;
pub mod report;

pub use error::{Error, Result};
pub use finite_field::{build_field, CharacterIndex, FieldContext, FieldElement};
pub use report::{Status, VerificationReport};
