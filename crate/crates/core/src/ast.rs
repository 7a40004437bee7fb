//! Definitional-fragment AST produced by desugaring.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::types::Type;

/// Name given to the Herbrand universe's only element when a program
/// mentions no individual constant.
pub const DESIGNATED_CONSTANT: &str = "u0";

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(String),
    /// Individual constant (including numerals).
    Const(String),
    /// Predicate constant.
    Pred(String),
    App(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn cnst(name: impl Into<String>) -> Expr {
        Expr::Const(name.into())
    }

    pub fn pred(name: impl Into<String>) -> Expr {
        Expr::Pred(name.into())
    }

    pub fn app(fun: Expr, arg: Expr) -> Expr {
        Expr::App(Box::new(fun), Box::new(arg))
    }

    pub fn eq(left: Expr, right: Expr) -> Expr {
        Expr::Eq(Box::new(left), Box::new(right))
    }

    /// Curried application of `head` to `args`.
    pub fn apply<I: IntoIterator<Item = Expr>>(head: Expr, args: I) -> Expr {
        args.into_iter().fold(head, Expr::app)
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Expr::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::App(a, b) | Expr::Eq(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Var(v) = e {
                out.push(v.as_str());
            }
        });
        out
    }

    pub fn is_ground(&self) -> bool {
        self.vars().is_empty()
    }

    /// Renames every occurrence of a constant symbol, used when typing
    /// decides whether a lowercase name is an individual or a predicate.
    pub fn map_symbols(&self, f: &impl Fn(&str, bool) -> Expr) -> Expr {
        match self {
            Expr::Var(_) => self.clone(),
            Expr::Const(c) => f(c, false),
            Expr::Pred(p) => f(p, true),
            Expr::App(a, b) => Expr::app(a.map_symbols(f), b.map_symbols(f)),
            Expr::Eq(a, b) => Expr::eq(a.map_symbols(f), b.map_symbols(f)),
        }
    }
}

/// A formal parameter of a clause head.
///
/// `head_term` is set when the surface head had a non-variable argument of
/// predicate type at this position (a predicate constant or a compound
/// term). Such a clause is not definitional; the term is kept so the
/// validator can report it and the printer can reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formal {
    pub name: String,
    pub head_term: Option<Expr>,
}

impl Formal {
    pub fn var(name: impl Into<String>) -> Formal {
        Formal {
            name: name.into(),
            head_term: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Clause {
    pub head: String,
    pub formals: Vec<Formal>,
    pub body: Vec<Expr>,
    pub span: Option<Span>,
}

// Spans are diagnostics-only and do not take part in structural equality.
impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.formals == other.formals && self.body == other.body
    }
}

impl Eq for Clause {}

impl Clause {
    pub fn new<F, B>(head: impl Into<String>, formals: F, body: B) -> Clause
    where
        F: IntoIterator,
        F::Item: Into<String>,
        B: IntoIterator<Item = Expr>,
    {
        Clause {
            head: head.into(),
            formals: formals.into_iter().map(Formal::var).collect(),
            body: body.into_iter().collect(),
            span: None,
        }
    }

    pub fn formal_names(&self) -> impl Iterator<Item = &str> {
        self.formals.iter().map(|f| f.name.as_str())
    }

    /// Variables of the body that are not formals, in first-occurrence order.
    pub fn local_vars(&self) -> Vec<&str> {
        let formals: HashSet<&str> = self.formal_names().collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for atom in &self.body {
            for v in atom.vars() {
                if !formals.contains(v) && seen.insert(v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Number of atoms, head included.
    pub fn len_atoms(&self) -> usize {
        self.body.len() + 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    /// Declared signatures (from `#pred` directives or generators).
    pub signatures: BTreeMap<String, Type>,
    pub clauses: Vec<Clause>,
    /// Individual constants occurring syntactically in the clauses, in
    /// first-occurrence order.
    pub constants: Vec<String>,
}

impl Program {
    pub fn new(signatures: BTreeMap<String, Type>, clauses: Vec<Clause>) -> Program {
        let mut p = Program {
            signatures,
            clauses,
            constants: Vec::new(),
        };
        p.refresh_constants();
        p
    }

    pub fn refresh_constants(&mut self) {
        self.constants = collect_constants(&self.clauses);
    }

    /// The Herbrand universe: constants of the clauses, or the designated
    /// constant when there are none.
    pub fn universe(&self) -> Vec<String> {
        if self.constants.is_empty() {
            vec![DESIGNATED_CONSTANT.to_string()]
        } else {
            self.constants.clone()
        }
    }

    pub fn clauses_for<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| c.head == pred)
    }

    /// Every predicate name that is declared or defined.
    pub fn predicate_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.signatures.keys().cloned().collect();
        let mut seen: HashSet<String> = names.iter().cloned().collect();
        for c in &self.clauses {
            if seen.insert(c.head.clone()) {
                names.push(c.head.clone());
            }
        }
        names
    }
}

pub(crate) fn collect_constants(clauses: &[Clause]) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut add = |e: &Expr| {
        e.visit(&mut |x| {
            if let Expr::Const(c) = x {
                if seen.insert(c.clone()) {
                    out.push(c.clone());
                }
            }
        })
    };
    for c in clauses {
        for f in &c.formals {
            if let Some(t) = &f.head_term {
                add(t);
            }
        }
        for b in &c.body {
            add(b);
        }
    }
    out
}

/// True for identifiers lexed as numerals.
pub fn is_numeral(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spine_round_trip() {
        let e = Expr::apply(Expr::pred("p"), [Expr::var("X"), Expr::cnst("a")]);
        let (h, args) = e.spine();
        assert_eq!(h, &Expr::pred("p"));
        assert_eq!(args, vec![&Expr::var("X"), &Expr::cnst("a")]);
    }

    #[test]
    fn universe_defaults_to_designated_constant() {
        let p = Program::default();
        assert_eq!(p.universe(), vec!["u0".to_string()]);
    }

    #[test]
    fn clause_equality_ignores_span() {
        let mut a = Clause::new("p", ["X"], [Expr::eq(Expr::var("X"), Expr::cnst("a"))]);
        let b = a.clone();
        a.span = Some(Span { line: 3, col: 1 });
        assert_eq!(a, b);
    }
}
