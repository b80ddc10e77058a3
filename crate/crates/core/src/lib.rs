//! Exact border-rank lower-bound certificates for 3-way tensors.

pub mod certificates;
pub mod error;
pub mod exponent;
pub mod field;
pub mod io;
pub mod koszul;
pub mod linalg;
pub mod random;
pub mod tensor;
pub mod zoo;

pub use error::{Error, Result};
pub use field::{Field, FieldTag, PrimeField, Rationals};
pub use linalg::{LinMap, Subspace};
pub use tensor::{Factor, Tensor3};
