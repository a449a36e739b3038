//! Finite fields, polynomials and the Cartier operator in characteristic p.

pub mod cartier;
pub mod field;
pub mod linalg;
pub mod mpoly;
pub mod upoly;

pub use field::{Embedding, Fe, Field, FieldError, FieldSpec};
pub use linalg::Mat;
pub use mpoly::{FqPoly, PolyError, PolyJson};
pub use upoly::{embed_field, UPoly};
