//! Formal Frobenius manifolds from finite-dimensional differential
//! Batalin-Vilkovisky algebras satisfying the ∂∂̄-lemma.
//!
//! The pipeline: validate the algebra ([`algebra`], [`bv`]), decompose it
//! ([`hodge`]), solve the Maurer-Cartan equation in flat coordinates
//! ([`mc`]), extract structure constants, metric and potential
//! ([`frobenius`]), and check the Frobenius axioms ([`axioms`]). All
//! arithmetic is exact.

pub mod algebra;
pub mod axioms;
pub mod bv;
pub mod error;
pub mod fixtures;
pub mod frobenius;
pub mod hodge;
pub mod linalg;
pub mod mc;
pub mod pivot;
pub mod report;
pub mod scalar;
pub mod series;

pub use algebra::{AlgebraData, Element, ProductTerm};
pub use bv::{DgbvData, OperatorEntry};
pub use error::{Error, Result};
pub use hodge::{DgbvContext, HodgeDecomposition};
pub use report::{ValidationReport, Violation};
pub use scalar::Scalar;
