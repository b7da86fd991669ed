//! Expression language for model functions.
//!
//! Expressions are complex-valued trees over the variable slots `z_k`,
//! `z̄_k`, `u_a`, `ū_a`. Parsing normalizes conjugation down to the leaves,
//! so a parsed tree never contains a [`Node::Conj`]; differentiation is
//! exact and treats all four slot families as independent variables.

mod ast;
mod diff;
mod eval;
mod parse;
mod slot;

pub use ast::{Expr, Node};
pub use eval::EvalError;
pub use parse::{parse, ParseError};
pub use slot::{SlotContext, SlotKind, VarSlot};
