//! Program generators: tuple arithmetic, big-number libraries and the
//! Turing-machine simulators built on them.
//!
//! Generators emit program text clause by clause. The text is what users
//! see and what golden tests pin; the returned [`Program`] is that text
//! parsed back, so the two never drift apart.

mod arith;
mod bignum;
mod machine;

use std::collections::BTreeMap;
use std::fmt::Write;

pub use arith::{base_arith_lines, gen_base_arith};
pub use bignum::{bignum_lines, gen_bignum, number_type};
pub use machine::{compile_tm_first_order, compile_tm_higher_order, short_string_rules};

use crate::ast::{Clause, Program};
use crate::error::{Error, Result};
use crate::syntax::parse_and_desugar;
use crate::types::Type;

pub const GENERATOR_VERSION: &str = "hodl-codegen 1";

/// A generated program with its source text.
#[derive(Debug, Clone)]
pub struct Generated {
    pub text: String,
    pub program: Program,
}

/// `X1 X2 ... Xd` for prefix `X`.
pub(crate) fn tuple(prefix: &str, d: usize) -> String {
    (1..=d).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join(" ")
}

/// Parses generated clause lines, which are well-formed by construction.
pub(crate) fn parse_lines(lines: &[String]) -> Vec<Clause> {
    parse_and_desugar(&lines.join("\n"))
        .unwrap_or_else(|e| panic!("generated text does not parse: {e}"))
        .clauses
}

/// Assembles header, directives and clauses into text and a program.
pub(crate) fn assemble(
    header: &[(&str, String)],
    signatures: &BTreeMap<String, Type>,
    sections: &[(&str, Vec<String>)],
) -> Result<Generated> {
    let mut text = String::new();
    for (k, v) in header {
        let _ = writeln!(text, "% {k}: {v}");
    }
    let _ = writeln!(text, "% generator: {GENERATOR_VERSION}");
    text.push('\n');
    for (name, ty) in signatures {
        let _ = writeln!(text, "#pred {name} : {ty}.");
    }
    for (title, lines) in sections {
        if lines.is_empty() {
            continue;
        }
        let _ = writeln!(text, "\n% {title}");
        for l in lines {
            text.push_str(l);
            text.push('\n');
        }
    }
    let program = parse_and_desugar(&text)
        .map_err(|e| Error::Generation(format!("emitted text does not parse: {e}")))?;
    Ok(Generated { text, program })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_expansion() {
        assert_eq!(tuple("X", 3), "X1 X2 X3");
        assert_eq!(tuple("Tp", 1), "Tp1");
    }
}
