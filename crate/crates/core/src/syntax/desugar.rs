//! Surface form to definitional core.
//!
//! Head constants and repeated head variables become fresh formals
//! `_H1, _H2, ...` equated in the body. The counter restarts for every
//! clause and skips names the clause already uses.

use std::collections::{BTreeMap, HashSet};

use super::parser::{BodyItem, SourceProgram, SurfaceClause, Term};
use crate::ast::{Clause, Expr, Formal, Program};

pub fn desugar(src: &SourceProgram) -> Program {
    let known = known_predicates(src);
    let signatures: BTreeMap<_, _> = src
        .directives
        .iter()
        .map(|d| (d.name.clone(), d.ty.clone()))
        .collect();
    let clauses = src
        .clauses
        .iter()
        .map(|c| desugar_clause(c, &known))
        .collect();
    Program::new(signatures, clauses)
}

/// Lowercase names that are certainly predicates: declared, defined, or
/// applied to something somewhere in the program.
pub fn known_predicates(src: &SourceProgram) -> HashSet<String> {
    let mut known: HashSet<String> = src.directives.iter().map(|d| d.name.clone()).collect();
    for c in &src.clauses {
        if let Term::Ident(h) = c.head.spine().0 {
            known.insert(h.clone());
        }
        collect_functors(&c.head, &mut known);
        for item in &c.body {
            match item {
                BodyItem::Atom(t) => {
                    if let Term::Ident(h) = t.spine().0 {
                        known.insert(h.clone());
                    }
                    collect_functors(t, &mut known);
                }
                BodyItem::Eq(a, b) => {
                    collect_functors(a, &mut known);
                    collect_functors(b, &mut known);
                }
            }
        }
    }
    known
}

fn collect_functors(t: &Term, out: &mut HashSet<String>) {
    if let Term::App(f, a) = t {
        if let Term::Ident(n) = t.spine().0 {
            out.insert(n.clone());
        }
        collect_functors(f, out);
        collect_functors(a, out);
    }
}

fn term_vars<'a>(t: &'a Term, out: &mut HashSet<&'a str>) {
    match t {
        Term::Var(v) => {
            out.insert(v);
        }
        Term::App(f, a) => {
            term_vars(f, out);
            term_vars(a, out);
        }
        _ => {}
    }
}

/// Variables applied to arguments somewhere in the body.
fn applied_vars(items: &[BodyItem]) -> HashSet<&str> {
    fn walk<'a>(t: &'a Term, out: &mut HashSet<&'a str>) {
        if let Term::App(f, a) = t {
            if let Term::Var(v) = t.spine().0 {
                out.insert(v);
            }
            walk(f, out);
            walk(a, out);
        }
    }
    let mut out = HashSet::new();
    for item in items {
        match item {
            BodyItem::Atom(t) => walk(t, &mut out),
            BodyItem::Eq(a, b) => {
                walk(a, &mut out);
                walk(b, &mut out);
            }
        }
    }
    out
}

pub fn to_expr(t: &Term, known: &HashSet<String>) -> Expr {
    match t {
        Term::Ident(n) if known.contains(n) => Expr::Pred(n.clone()),
        Term::Ident(n) | Term::Numeral(n) => Expr::Const(n.clone()),
        Term::Var(v) => Expr::Var(v.clone()),
        Term::App(f, a) => Expr::app(to_expr(f, known), to_expr(a, known)),
    }
}

pub(crate) fn desugar_clause(c: &SurfaceClause, known: &HashSet<String>) -> Clause {
    let (head, args) = c.head.spine();
    let head = match head {
        Term::Ident(h) => h.clone(),
        // The parser only accepts identifier-headed clauses.
        _ => unreachable!("clause head is not an identifier"),
    };

    let mut used = HashSet::new();
    term_vars(&c.head, &mut used);
    for item in &c.body {
        match item {
            BodyItem::Atom(t) => term_vars(t, &mut used),
            BodyItem::Eq(a, b) => {
                term_vars(a, &mut used);
                term_vars(b, &mut used);
            }
        }
    }
    let applied = applied_vars(&c.body);

    let mut counter = 0usize;
    let mut fresh = || loop {
        counter += 1;
        let name = format!("_H{counter}");
        if !used.contains(name.as_str()) {
            return name;
        }
    };

    let mut formals: Vec<Formal> = Vec::new();
    let mut eqs = Vec::new();
    for arg in args {
        match arg {
            Term::Var(v) => {
                let repeated = formals.iter().any(|f| f.name == *v);
                if repeated && !applied.contains(v.as_str()) {
                    let f = fresh();
                    eqs.push(Expr::eq(Expr::var(v.clone()), Expr::var(f.clone())));
                    formals.push(Formal::var(f));
                } else {
                    formals.push(Formal::var(v.clone()));
                }
            }
            Term::Ident(n) if known.contains(n) => {
                formals.push(Formal {
                    name: fresh(),
                    head_term: Some(Expr::Pred(n.clone())),
                });
            }
            Term::Ident(n) | Term::Numeral(n) => {
                let f = fresh();
                eqs.push(Expr::eq(Expr::var(f.clone()), Expr::cnst(n.clone())));
                formals.push(Formal::var(f));
            }
            Term::App(..) => {
                formals.push(Formal {
                    name: fresh(),
                    head_term: Some(to_expr(arg, known)),
                });
            }
        }
    }

    let mut body = eqs;
    for item in &c.body {
        body.push(match item {
            BodyItem::Atom(t) => to_expr(t, known),
            BodyItem::Eq(a, b) => Expr::eq(to_expr(a, known), to_expr(b, known)),
        });
    }

    Clause {
        head,
        formals,
        body,
        span: Some(c.span),
    }
}
