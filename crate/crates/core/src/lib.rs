//! Exact algebra over finite fields for deciding and building symmetric
//! determinantal (Bessmertnyĭ) realizations of rational matrix functions.
//!
//! The layers build on one another: [`field`] arithmetic, sparse
//! multivariate [`poly`]nomials, normalized rational functions in [`ratio`],
//! fields of constants in [`constants`], linear matrix [`pencil`]s with Schur
//! complements, and the realization engine in [`realize`]. [`expr`] and
//! [`json`] provide the textual and JSON formats shared by the CLI.

pub mod constants;
pub mod error;
pub mod expr;
pub mod field;
pub mod json;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod ratio;
pub mod realize;
pub mod sample;

pub use error::{Error, Result};
pub use field::{FieldElem, FieldSpec};
pub use poly::{ExpVec, Homogeneity, MultiPoly};
