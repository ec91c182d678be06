//! Exact symbolic computation in Leavitt rings `L_r`, their tensor powers
//! `L_r^{⊗t}`, matrix rings over them, and the Brin-Higman-Thompson groups
//! `tV_{r,m}` realized as positive unitary matrices.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod isomorphisms;
pub mod matrices;
pub mod text;
pub mod thompson;

pub use algebra::{ColorWord, Factor, Letter, LetterKind, Monomial, RawTerm, RingElement, Shape};
pub use error::{Error, Result};
