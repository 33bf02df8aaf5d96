//! Numerical tensor calculus for manifolds carrying an `(α, ε)`-structure:
//! an endomorphism `J` with `J² = α·Id` and a metric `g` with
//! `g(J·,J·) = ε·g`, `α, ε ∈ {-1, 1}`.
//!
//! The four sign choices are the almost Hermitian `(-1, 1)`, almost product
//! Riemannian `(1, 1)`, almost Norden `(-1, -1)` and almost para-Hermitian
//! `(1, -1)` geometries. Given a coordinate chart the crate computes the
//! Levi-Civita connection, `∇J`, the first canonical connection and its
//! torsion, and the Nijenhuis tensor; evaluates the class predicates
//! (Kähler type, integrable, nearly Kähler type, Kähler-Codazzi type);
//! and checks the implications between them both on concrete manifolds
//! and on the model spaces of 3-tensors sharing the symmetries of
//! `g((∇_x J)y, z)`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// Negated comparisons keep NaN on the failing side; index loops mirror tensor notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod algebra;
pub mod classify;
pub mod connection;
pub mod dual;
pub mod error;
pub mod linalg;
pub mod manifold;
pub mod octonion;
pub mod tensor;

pub use error::{Error, Result};
pub use manifold::catalog::catalog;
pub use manifold::{AEStructureKind, ChartedManifold, Domain, SamplePlan};
