//! Diagnostics with stable codes.

use std::fmt;

use crate::ast::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Syntax error.
    E001,
    /// Type clash.
    E101,
    /// Duplicate formal parameter.
    E201,
    /// Non-variable argument of predicate type in a clause head.
    E202,
    /// Body variable that is neither a formal nor an individual variable.
    E203,
    /// Semantic domain too large to enumerate.
    E301,
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub message: String,
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>, span: Option<Span>) -> Diagnostic {
        Diagnostic {
            code,
            message: message.into(),
            span,
        }
    }

    /// `file:line:col: CODE message`; the position defaults to `1:1` when
    /// the diagnostic is not tied to a location.
    pub fn render(&self, file: &str) -> String {
        let span = self.span.unwrap_or(Span { line: 1, col: 1 });
        format!("{}:{}:{}: {} {}", file, span.line, span.col, self.code, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{}: {} {}", s, self.code, self.message),
            None => write!(f, "{} {}", self.code, self.message),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_with_file_prefix() {
        let d = Diagnostic::new(Code::E202, "bad head", Some(Span { line: 2, col: 5 }));
        assert_eq!(d.render("x.hodl"), "x.hodl:2:5: E202 bad head");
    }
}
