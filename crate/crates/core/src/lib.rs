//! Chern-Finsler geometry of holomorphic Lie algebroids.
//!
//! A model is a holomorphic Lie algebroid given in one chart: an anchor
//! matrix `rho[alpha][k]`, structure functions `C^gamma_{alpha beta}` and a
//! Finsler function `F(z, u)`, each written in a small expression language.
//! From these the crate computes, at any point `(z, u)` with `u != 0`:
//!
//! * the Hermitian metric `h_{a b̄} = ∂̇_a ∂̇_b̄ F` and its inverse,
//! * the Chern-Finsler nonlinear connection `N`, and the linear connection
//!   coefficients `L` and `C`,
//! * Lie brackets of the adapted frame `{X_a, V_a, X_ā, V_ā}` of the
//!   complexified prolongation, torsion and curvature tables,
//! * the Kähler-Finsler residual and the metric-compatibility residual,
//!
//! together with independent oracles (finite differences, commutators of
//! vector fields, the operator definition of curvature) that turn every
//! identity into a numeric residual.
//!
//! All derivatives are exact symbolic Wirtinger partials; `z`, `z̄`, `u`, `ū`
//! are treated as independent slots. The crate is `no_std` and only needs
//! `alloc`; transcendental functions come from `libm`, so results are
//! bit-reproducible across platforms.

#![no_std]

extern crate alloc;

pub mod algebroid;
pub mod calculus;
pub mod chernfinsler;
pub mod exprlang;
pub mod finsler;
pub mod linalg;
pub mod prolongation;
pub mod verify;

mod error;
mod fmath;

pub use error::GeometryError;

pub use num_complex::Complex64;

pub use algebroid::{AlgebroidModel, ModelError, ModelSource, Section, StructureEntry};
pub use calculus::{Domain, Point, SlotLayout};
pub use exprlang::{Expr, SlotContext, SlotKind, VarSlot};
