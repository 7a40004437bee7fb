//! Canonical pretty-printer. Output re-parses and desugars to the same AST.

use std::collections::HashSet;
use std::fmt::Write;

use super::desugar::desugar_clause;
use super::parser::{BodyItem, SurfaceClause, Term};
use crate::ast::{Clause, Expr, Program, Span};

pub fn print_program(prog: &Program) -> String {
    let known = printer_known(prog);
    let mut out = String::new();
    for (name, ty) in &prog.signatures {
        let _ = writeln!(out, "#pred {name} : {ty}.");
    }
    for c in &prog.clauses {
        out.push_str(&print_clause_with(c, &known));
        out.push('\n');
    }
    out
}

pub fn print_clause(c: &Clause) -> String {
    let mut known: HashSet<String> = HashSet::new();
    known.insert(c.head.clone());
    for b in &c.body {
        b.visit(&mut |e| {
            if let Expr::Pred(p) = e {
                known.insert(p.clone());
            }
        });
    }
    print_clause_with(c, &known)
}

fn printer_known(prog: &Program) -> HashSet<String> {
    let mut known: HashSet<String> = prog.signatures.keys().cloned().collect();
    for c in &prog.clauses {
        known.insert(c.head.clone());
        let mut add = |e: &Expr| {
            e.visit(&mut |x| {
                if let Expr::Pred(p) = x {
                    known.insert(p.clone());
                }
            })
        };
        for f in &c.formals {
            if let Some(t) = &f.head_term {
                add(t);
            }
        }
        for b in &c.body {
            add(b);
        }
    }
    known
}

fn print_clause_with(c: &Clause, known: &HashSet<String>) -> String {
    if let Some(s) = resugar(c, known) {
        return render_surface(&s);
    }
    let mut out = c.head.clone();
    for f in &c.formals {
        out.push(' ');
        match &f.head_term {
            Some(t) => out.push_str(&expr_arg(t)),
            None => out.push_str(&f.name),
        }
    }
    finish(out, c.body.iter().map(atom))
}

fn finish(mut head: String, body: impl Iterator<Item = String>) -> String {
    let body: Vec<String> = body.collect();
    if !body.is_empty() {
        head.push_str(" :- ");
        head.push_str(&body.join(", "));
    }
    head.push('.');
    head
}

/// Undo the head desugaring when the result desugars back to `c` exactly.
fn resugar(c: &Clause, known: &HashSet<String>) -> Option<SurfaceClause> {
    let mut head = Term::Ident(c.head.clone());
    let mut consumed = 0usize;
    for f in &c.formals {
        let arg = if let Some(t) = &f.head_term {
            expr_to_term(t)
        } else if f.name.starts_with("_H") {
            match c.body.get(consumed) {
                Some(Expr::Eq(l, r)) => match (l.as_ref(), r.as_ref()) {
                    (Expr::Var(v), Expr::Const(k)) if *v == f.name => {
                        consumed += 1;
                        if is_numeral_name(k) {
                            Term::Numeral(k.clone())
                        } else {
                            Term::Ident(k.clone())
                        }
                    }
                    (Expr::Var(y), Expr::Var(v)) if *v == f.name => {
                        consumed += 1;
                        Term::Var(y.clone())
                    }
                    _ => Term::Var(f.name.clone()),
                },
                _ => Term::Var(f.name.clone()),
            }
        } else {
            Term::Var(f.name.clone())
        };
        head = Term::App(Box::new(head), Box::new(arg));
    }
    let body = c.body[consumed..]
        .iter()
        .map(|e| match e {
            Expr::Eq(a, b) => BodyItem::Eq(expr_to_term(a), expr_to_term(b)),
            other => BodyItem::Atom(expr_to_term(other)),
        })
        .collect();
    let surface = SurfaceClause {
        head,
        body,
        span: Span::default(),
    };
    (desugar_clause(&surface, known) == *c).then_some(surface)
}

fn is_numeral_name(s: &str) -> bool {
    crate::ast::is_numeral(s)
}

fn expr_to_term(e: &Expr) -> Term {
    match e {
        Expr::Var(v) => Term::Var(v.clone()),
        Expr::Const(c) if is_numeral_name(c) => Term::Numeral(c.clone()),
        Expr::Const(c) | Expr::Pred(c) => Term::Ident(c.clone()),
        Expr::App(f, a) => Term::App(Box::new(expr_to_term(f)), Box::new(expr_to_term(a))),
        // Equality never nests inside terms.
        Expr::Eq(a, _) => expr_to_term(a),
    }
}

fn render_surface(c: &SurfaceClause) -> String {
    let (h, args) = c.head.spine();
    let mut out = term_arg(h);
    for a in args {
        out.push(' ');
        out.push_str(&term_arg(a));
    }
    finish(
        out,
        c.body.iter().map(|b| match b {
            BodyItem::Atom(t) => term_atom(t),
            BodyItem::Eq(l, r) => format!("({} = {})", term_flat(l), term_flat(r)),
        }),
    )
}

fn term_flat(t: &Term) -> String {
    match t {
        Term::Ident(n) | Term::Numeral(n) | Term::Var(n) => n.clone(),
        Term::App(..) => {
            let (h, args) = t.spine();
            let mut s = term_arg(h);
            for a in args {
                s.push(' ');
                s.push_str(&term_arg(a));
            }
            s
        }
    }
}

fn term_arg(t: &Term) -> String {
    match t {
        Term::App(..) => format!("({})", term_flat(t)),
        _ => term_flat(t),
    }
}

fn term_atom(t: &Term) -> String {
    term_arg(t)
}

/// A body atom as text: applications in parentheses, bare names bare.
fn atom(e: &Expr) -> String {
    match e {
        Expr::Eq(a, b) => format!("({} = {})", expr_flat(a), expr_flat(b)),
        other => expr_arg(other),
    }
}

pub fn expr_flat(e: &Expr) -> String {
    match e {
        Expr::Var(n) | Expr::Const(n) | Expr::Pred(n) => n.clone(),
        Expr::App(..) => {
            let (h, args) = e.spine();
            let mut s = expr_arg(h);
            for a in args {
                s.push(' ');
                s.push_str(&expr_arg(a));
            }
            s
        }
        Expr::Eq(a, b) => format!("{} = {}", expr_flat(a), expr_flat(b)),
    }
}

pub fn expr_arg(e: &Expr) -> String {
    match e {
        Expr::App(..) | Expr::Eq(..) => format!("({})", expr_flat(e)),
        _ => expr_flat(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{desugar, parse_program};

    fn round_trip(text: &str) -> (Program, String, Program) {
        let p = desugar(&parse_program(text).unwrap());
        let printed = print_program(&p);
        let q = desugar(&parse_program(&printed).unwrap());
        (p, printed, q)
    }

    #[test]
    fn fact_prints_sugared_and_round_trips() {
        let (p, printed, q) = round_trip("p a.");
        assert_eq!(printed, "p a.\n");
        assert_eq!(p, q);
    }

    #[test]
    fn repeated_variable_round_trips() {
        let (p, printed, q) = round_trip("q X X.");
        assert_eq!(printed, "q X X.\n");
        assert_eq!(p, q);
    }

    #[test]
    fn empty_program_prints_only_directives() {
        let mut p = Program::default();
        assert_eq!(print_program(&p), "");
        p.signatures.insert("p".into(), crate::types::Type::relation(1));
        assert_eq!(print_program(&p), "#pred p : i -> o.\n");
    }

    #[test]
    fn higher_order_clauses_round_trip() {
        let text = "#pred cursor : (i -> i -> o) -> i -> i -> o.\n\
                    c T I V :- (X = a), ((succ_1 (cursor T)) I V), (zero_1 I low).\n\
                    r P Q b :- (P b), (Q Y).\n\
                    q a.\nr2 q.\np Q Q :- (Q a).";
        let (p, printed, q) = round_trip(text);
        assert_eq!(p, q, "printed:\n{printed}");
    }

    #[test]
    fn user_fresh_name_clash_round_trips() {
        let (p, _, q) = round_trip("p _H1 a :- (_H1 = b).");
        assert_eq!(p, q);
    }
}
