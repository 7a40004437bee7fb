//! Ground goals: a predicate (or closure) applied to closed arguments.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{parse_term, Term};
use crate::typing::TypedProgram;

/// An extensional relation over individuals, usable wherever a predicate
/// argument of the same arity is expected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtRel {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<String>>,
}

impl ExtRel {
    pub fn new<I, T, S>(arity: usize, tuples: I) -> ExtRel
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tuples: BTreeSet<Vec<String>> = tuples
            .into_iter()
            .map(|t| t.into_iter().map(Into::into).collect::<Vec<_>>())
            .collect();
        assert!(tuples.iter().all(|t| t.len() == arity), "tuple arity mismatch");
        ExtRel { arity, tuples }
    }
}

impl fmt::Display for ExtRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tuples
            .iter()
            .map(|t| if t.len() == 1 { t[0].clone() } else { format!("({})", t.join(",")) })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A closed term: an individual, or a predicate-typed closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundTerm {
    Const(String),
    Pred(String),
    Ext(ExtRel),
    /// Head applied to arguments; the head is never itself an `App`.
    App(Box<GroundTerm>, Vec<GroundTerm>),
}

impl GroundTerm {
    pub fn cnst(name: impl Into<String>) -> GroundTerm {
        GroundTerm::Const(name.into())
    }

    pub fn pred(name: impl Into<String>) -> GroundTerm {
        GroundTerm::Pred(name.into())
    }

    /// Applies `self` to more arguments, keeping the spine flat.
    pub fn apply(self, args: impl IntoIterator<Item = GroundTerm>) -> GroundTerm {
        let args: Vec<GroundTerm> = args.into_iter().collect();
        if args.is_empty() {
            return self;
        }
        match self {
            GroundTerm::App(h, mut a) => {
                a.extend(args);
                GroundTerm::App(h, a)
            }
            other => GroundTerm::App(Box::new(other), args),
        }
    }

    /// Parses text such as `(equal_1 (succ_1 zero_1) last_1)`. Lowercase
    /// names with a signature in `tp` are predicates, the rest individuals.
    pub fn parse(text: &str, tp: &TypedProgram) -> Result<GroundTerm> {
        from_surface(&parse_term(text)?, tp)
    }
}

fn from_surface(t: &Term, tp: &TypedProgram) -> Result<GroundTerm> {
    match t {
        Term::Ident(n) if tp.program.signatures.contains_key(n) => Ok(GroundTerm::Pred(n.clone())),
        Term::Ident(n) | Term::Numeral(n) => Ok(GroundTerm::Const(n.clone())),
        Term::Var(v) => Err(Error::Precondition(format!("goal contains variable `{v}`"))),
        Term::App(..) => {
            let (h, args) = t.spine();
            let head = from_surface(h, tp)?;
            let args = args.iter().map(|a| from_surface(a, tp)).collect::<Result<Vec<_>>>()?;
            Ok(head.apply(args))
        }
    }
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundTerm::Const(n) | GroundTerm::Pred(n) => f.write_str(n),
            GroundTerm::Ext(e) => write!(f, "{e}"),
            GroundTerm::App(h, args) => {
                write!(f, "({h}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A goal of type `o`.
pub type Goal = GroundTerm;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_and_desugar;
    use crate::typing::check;

    #[test]
    fn parses_nested_closures() {
        let tp = check(&parse_and_desugar("q R :- (R b).\np a.").unwrap()).unwrap();
        let g = GroundTerm::parse("(q p)", &tp).unwrap();
        assert_eq!(g, GroundTerm::pred("q").apply([GroundTerm::pred("p")]));
        assert_eq!(g.to_string(), "(q p)");
        let g = GroundTerm::parse("p b", &tp).unwrap();
        assert_eq!(g, GroundTerm::pred("p").apply([GroundTerm::cnst("b")]));
        assert!(GroundTerm::parse("p X", &tp).is_err());
    }

    #[test]
    fn apply_keeps_spine_flat() {
        let t = GroundTerm::pred("f").apply([GroundTerm::cnst("a")]).apply([GroundTerm::cnst("b")]);
        match t {
            GroundTerm::App(_, args) => assert_eq!(args.len(), 2),
            _ => unreachable!(),
        }
    }

    #[test]
    fn ext_display() {
        let e = ExtRel::new(1, [["a"], ["b"]]);
        assert_eq!(e.to_string(), "{a,b}");
    }
}
