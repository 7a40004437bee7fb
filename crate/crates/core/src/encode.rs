//! Input strings as an ordered `input` relation.
//!
//! `abba` becomes `input 0 a 1. input 1 b 2. input 2 b 3. input 3 a end.`
//! and the empty string becomes `input 0 empty end.`

use crate::ast::{Clause, Expr, Program};
use crate::error::{Error, Result};
use crate::types::Type;

pub const INPUT: &str = "input";
pub const END: &str = "end";
pub const EMPTY: &str = "empty";

pub fn input_type() -> Type {
    Type::relation(3)
}

/// One ground `input` fact in desugared form.
pub fn input_fact(pos: &str, sym: &str, next: &str) -> Clause {
    let formals = ["_H1", "_H2", "_H3"];
    let body = formals
        .iter()
        .zip([pos, sym, next])
        .map(|(f, v)| Expr::eq(Expr::var(*f), Expr::cnst(v)))
        .collect::<Vec<_>>();
    Clause::new(INPUT, formals, body)
}

pub fn encode_input(w: &str) -> Result<Vec<Clause>> {
    let syms: Vec<char> = w.chars().collect();
    if let Some(bad) = syms.iter().find(|c| !matches!(c, 'a' | 'b')) {
        return Err(Error::BadInput(*bad));
    }
    if syms.is_empty() {
        return Ok(vec![input_fact("0", EMPTY, END)]);
    }
    let n = syms.len();
    Ok(syms
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let next = if i + 1 == n { END.to_string() } else { (i + 1).to_string() };
            input_fact(&i.to_string(), &c.to_string(), &next)
        })
        .collect())
}

/// Adds the facts to the program and declares `input : i -> i -> i -> o`.
pub fn merge(prog: &Program, facts: &[Clause]) -> Result<Program> {
    let mut out = prog.clone();
    match out.signatures.get(INPUT) {
        Some(ty) if *ty != input_type() => return Err(Error::InputSignature(ty.clone())),
        Some(_) => {}
        None => {
            out.signatures.insert(INPUT.to_string(), input_type());
        }
    }
    out.clauses.extend(facts.iter().cloned());
    out.refresh_constants();
    Ok(out)
}

/// Reads the string back from `input` facts by following the chain from `0`.
pub fn decode_input(facts: &[Clause]) -> Option<String> {
    let mut edges = std::collections::HashMap::new();
    for c in facts.iter().filter(|c| c.head == INPUT) {
        let vals: Vec<String> = c
            .body
            .iter()
            .filter_map(|e| match e {
                Expr::Eq(_, r) => match r.as_ref() {
                    Expr::Const(v) => Some(v.clone()),
                    _ => None,
                },
                _ => None,
            })
            .collect();
        if vals.len() != 3 {
            return None;
        }
        edges.insert(vals[0].clone(), (vals[1].clone(), vals[2].clone()));
    }
    let mut out = String::new();
    let mut cur = "0".to_string();
    for _ in 0..=edges.len() {
        let (sym, next) = edges.get(&cur)?;
        if sym != EMPTY {
            out.push_str(sym);
        }
        if next == END {
            return Some(out);
        }
        cur = next.clone();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_and_desugar, print_program};

    #[test]
    fn encodes_abba() {
        let facts = encode_input("abba").unwrap();
        let prog = Program::new(Default::default(), facts);
        assert_eq!(
            print_program(&prog),
            "input 0 a 1.\ninput 1 b 2.\ninput 2 b 3.\ninput 3 a end.\n"
        );
    }

    #[test]
    fn encodes_empty_and_single() {
        let e = Program::new(Default::default(), encode_input("").unwrap());
        assert_eq!(print_program(&e), "input 0 empty end.\n");
        let a = Program::new(Default::default(), encode_input("a").unwrap());
        assert_eq!(print_program(&a), "input 0 a end.\n");
    }

    #[test]
    fn facts_match_parsed_text() {
        let parsed = parse_and_desugar("input 0 a 1.").unwrap();
        assert_eq!(parsed.clauses[0], input_fact("0", "a", "1"));
    }

    #[test]
    fn rejects_other_symbols() {
        assert!(matches!(encode_input("abc"), Err(Error::BadInput('c'))));
    }

    #[test]
    fn merge_extends_universe_and_signatures() {
        let merged = merge(&Program::default(), &encode_input("ab").unwrap()).unwrap();
        for c in ["0", "1", "end", "a", "b"] {
            assert!(merged.universe().contains(&c.to_string()));
        }
        assert_eq!(merged.signatures[INPUT], input_type());
        let single = merge(&Program::default(), &encode_input("").unwrap()).unwrap();
        assert_eq!(single.clauses.len(), 1);
    }

    #[test]
    fn merge_rejects_conflicting_declaration() {
        let prog = parse_and_desugar("#pred input : i -> o.").unwrap();
        assert!(matches!(
            merge(&prog, &encode_input("a").unwrap()),
            Err(Error::InputSignature(_))
        ));
    }

    #[test]
    fn decode_inverts_encode() {
        for w in ["", "a", "b", "ab", "abba", "bbbab"] {
            assert_eq!(decode_input(&encode_input(w).unwrap()).as_deref(), Some(w));
        }
    }
}
