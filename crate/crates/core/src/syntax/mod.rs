//! Concrete syntax: lexer, parser, desugarer and printer.
//!
//! ```text
//! program   := { directive | clause }
//! directive := "#pred" IDENT ":" type "."
//! type      := "i" | "o" | type "->" type
//! clause    := appterm [ ":-" body ] "."
//! body      := bexpr { "," bexpr }
//! bexpr     := appterm | "(" appterm "=" appterm ")"
//! appterm   := primary { primary }
//! primary   := IDENT | NUMERAL | VAR | "(" appterm ")"
//! ```

mod desugar;
mod lexer;
mod parser;
mod print;

pub use desugar::{desugar, known_predicates, to_expr};
pub use parser::{parse_program, parse_term, BodyItem, Directive, SourceProgram, SurfaceClause, Term};
pub use print::{expr_arg, expr_flat, print_clause, print_program};

use crate::ast::Program;
use crate::error::Result;

/// Parses and desugars in one step.
pub fn parse_and_desugar(text: &str) -> Result<Program> {
    Ok(desugar(&parse_program(text)?))
}
