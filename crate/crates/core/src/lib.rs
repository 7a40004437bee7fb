//! Higher-order Datalog: syntax, typing, extensional semantics, three
//! evaluators, and a compiler from Turing machines to Datalog programs.

pub mod ast;
pub mod codegen;
pub mod diag;
pub mod encode;
pub mod engines;
pub mod error;
pub mod semantics;
pub mod stats;
pub mod syntax;
pub mod tm;
pub mod types;
pub mod typing;

pub use ast::{Clause, Expr, Formal, Program, Span};
pub use error::{Error, Result};
pub use types::Type;
pub use typing::{check, TypedProgram};
