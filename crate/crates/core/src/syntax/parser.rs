//! Recursive-descent parser for the `.hodl` surface syntax.

use std::collections::HashSet;

use super::lexer::{tokenize, Tok};
use crate::ast::Span;
use crate::error::{Error, Result};
use crate::types::Type;

/// Surface term: application by juxtaposition, no desugaring applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Ident(String),
    Numeral(String),
    Var(String),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BodyItem {
    Atom(Term),
    Eq(Term, Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceClause {
    pub head: Term,
    pub body: Vec<BodyItem>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub name: String,
    pub ty: Type,
    pub span: Span,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceProgram {
    pub directives: Vec<Directive>,
    pub clauses: Vec<SurfaceClause>,
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

pub fn parse_program(text: &str) -> Result<SourceProgram> {
    let toks = tokenize(text)?;
    let end = end_span(text);
    let mut p = Parser { toks, pos: 0, end };
    let mut prog = SourceProgram::default();
    let mut declared = HashSet::new();
    while !p.at_end() {
        if let Some(Tok::Directive(_)) = p.peek() {
            let d = p.directive()?;
            if !declared.insert(d.name.clone()) {
                return Err(Error::DuplicateDirective(d.name));
            }
            prog.directives.push(d);
        } else {
            prog.clauses.push(p.clause()?);
        }
    }
    Ok(prog)
}

/// Parses a single term, e.g. a goal such as `(equal_1 (succ_1 zero_1) last_1)`.
pub fn parse_term(text: &str) -> Result<Term> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: end_span(text),
    };
    let t = p.appterm()?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}

fn end_span(text: &str) -> Span {
    let line = text.lines().count().max(1);
    let col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Span { line, col }
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |(_, s)| *s)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let s = self.span();
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_string(), Tok::describe);
        Error::Syntax {
            line: s.line,
            col: s.col,
            message: format!("expected {wanted}, found {found}"),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn directive(&mut self) -> Result<Directive> {
        let span = self.span();
        match self.bump() {
            Some(Tok::Directive(d)) if d == "pred" => {}
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`#pred`"));
            }
        }
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.unexpected("predicate name")),
        };
        self.pos += 1;
        self.expect(Tok::Colon)?;
        let ty_span = self.span();
        let ty = self.ty()?;
        if ty.is_iota() {
            return Err(Error::Syntax {
                line: ty_span.line,
                col: ty_span.col,
                message: format!("`{name}` must have a predicate type"),
            });
        }
        self.expect(Tok::Dot)?;
        Ok(Directive { name, ty, span })
    }

    fn ty(&mut self) -> Result<Type> {
        let start = self.span();
        let arg = self.ty_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let result = self.ty()?;
            let t = Type::arrow(arg, result);
            if !t.is_well_formed() {
                return Err(Error::Syntax {
                    line: start.line,
                    col: start.col,
                    message: format!("ill-formed type {t}"),
                });
            }
            Ok(t)
        } else {
            Ok(arg)
        }
    }

    fn ty_atom(&mut self) -> Result<Type> {
        match self.peek() {
            Some(Tok::Ident(n)) if n == "i" => {
                self.pos += 1;
                Ok(Type::Iota)
            }
            Some(Tok::Ident(n)) if n == "o" => {
                self.pos += 1;
                Ok(Type::Omicron)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("type")),
        }
    }

    fn clause(&mut self) -> Result<SurfaceClause> {
        let span = self.span();
        let head = self.appterm()?;
        if !matches!(head.spine().0, Term::Ident(_)) {
            return Err(Error::Syntax {
                line: span.line,
                col: span.col,
                message: "clause head must start with a predicate name".into(),
            });
        }
        let mut body = Vec::new();
        if self.peek() == Some(&Tok::Neck) {
            self.pos += 1;
            body.push(self.bexpr()?);
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                body.push(self.bexpr()?);
            }
        }
        self.expect(Tok::Dot)?;
        Ok(SurfaceClause { head, body, span })
    }

    fn bexpr(&mut self) -> Result<BodyItem> {
        if self.peek() == Some(&Tok::LParen) {
            // Either `(a = b)` or a parenthesised term that may be applied further.
            self.pos += 1;
            let inner = self.appterm()?;
            if self.peek() == Some(&Tok::Equals) {
                self.pos += 1;
                let right = self.appterm()?;
                self.expect(Tok::RParen)?;
                return Ok(BodyItem::Eq(inner, right));
            }
            self.expect(Tok::RParen)?;
            let mut t = inner;
            while let Some(arg) = self.try_primary()? {
                t = Term::App(Box::new(t), Box::new(arg));
            }
            Ok(BodyItem::Atom(t))
        } else {
            Ok(BodyItem::Atom(self.appterm()?))
        }
    }

    fn appterm(&mut self) -> Result<Term> {
        let mut t = match self.try_primary()? {
            Some(t) => t,
            None => return Err(self.unexpected("term")),
        };
        while let Some(arg) = self.try_primary()? {
            t = Term::App(Box::new(t), Box::new(arg));
        }
        Ok(t)
    }

    fn try_primary(&mut self) -> Result<Option<Term>> {
        let t = match self.peek() {
            Some(Tok::Ident(n)) => Term::Ident(n.clone()),
            Some(Tok::Numeral(n)) => Term::Numeral(n.clone()),
            Some(Tok::Var(n)) => Term::Var(n.clone()),
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.appterm()?;
                self.expect(Tok::RParen)?;
                return Ok(Some(t));
            }
            _ => return Ok(None),
        };
        self.pos += 1;
        Ok(Some(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(s: &str) -> Term {
        Term::Ident(s.into())
    }

    fn var(s: &str) -> Term {
        Term::Var(s.into())
    }

    fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    #[test]
    fn parses_fact() {
        let p = parse_program("p a.").unwrap();
        assert_eq!(p.clauses.len(), 1);
        assert_eq!(p.clauses[0].head, app(ident("p"), ident("a")));
        assert!(p.clauses[0].body.is_empty());
    }

    #[test]
    fn parses_empty_input() {
        assert_eq!(parse_program("").unwrap(), SourceProgram::default());
        assert_eq!(parse_program("% only a comment\n").unwrap(), SourceProgram::default());
    }

    #[test]
    fn parses_higher_order_clause() {
        let p = parse_program("r P Q b :- (P b), (Q Y).").unwrap();
        let c = &p.clauses[0];
        let (h, args) = c.head.spine();
        assert_eq!(h, &ident("r"));
        assert_eq!(args, vec![&var("P"), &var("Q"), &ident("b")]);
        assert_eq!(
            c.body,
            vec![
                BodyItem::Atom(app(var("P"), ident("b"))),
                BodyItem::Atom(app(var("Q"), var("Y"))),
            ]
        );
    }

    #[test]
    fn parses_equality_and_nested_application() {
        let p = parse_program("c T I V :- (X = a), ((succ_1 (cursor T)) I V).").unwrap();
        let c = &p.clauses[0];
        assert_eq!(c.body[0], BodyItem::Eq(var("X"), ident("a")));
        let inner = app(ident("succ_1"), app(ident("cursor"), var("T")));
        assert_eq!(
            c.body[1],
            BodyItem::Atom(app(app(inner, var("I")), var("V")))
        );
    }

    #[test]
    fn parses_directives() {
        let p = parse_program("#pred union : (i -> o) -> (i -> o) -> i -> o.").unwrap();
        let t = &p.directives[0].ty;
        assert_eq!(t.order(), 2);
        assert_eq!(t.arity(), 3);
    }

    #[test]
    fn reports_position_of_syntax_error() {
        match parse_program("p a.\nq X :- (p X.") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_directive() {
        let text = "#pred p : i -> o.\n#pred p : o.";
        assert!(matches!(parse_program(text), Err(Error::DuplicateDirective(n)) if n == "p"));
    }

    #[test]
    fn rejects_ill_formed_types() {
        assert!(parse_program("#pred p : o -> o.").is_err());
        assert!(parse_program("#pred p : i -> i.").is_err());
    }
}
