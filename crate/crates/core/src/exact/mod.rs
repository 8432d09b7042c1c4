//! Exact arithmetic substrate: big integers and rationals, prime fields,
//! integer matrices with Smith normal form, and generic field linear algebra.

pub mod field;
pub mod linalg;
pub mod matrix;

pub use field::{Field, FieldTag, PrimeField, RationalField};
pub use matrix::{
    determinant, smith_decomposition, smith_normal_form, solve_integer_linear, IntMatrix,
    SmithDecomposition, SolveFailure,
};
