//! Counting over input positions and over d-tuples of positions.

use std::collections::BTreeMap;

use super::{parse_lines, tuple};
use crate::ast::Clause;
use crate::types::Type;

pub fn base_arith_lines(d: usize) -> Vec<String> {
    assert!(d >= 1, "tuple width must be positive");
    let x = tuple("X", d);
    let y = tuple("Y", d);
    let z = tuple("Z", d);
    let atoms = |pred: &str, prefix: &str, range: std::ops::RangeInclusive<usize>| -> Vec<String> {
        range.map(|i| format!("({pred} {prefix}{i})")).collect()
    };
    let mut out = vec![
        "base_zero 0.".to_string(),
        "base_last I :- (input I X end).".to_string(),
        "base_succ I J :- (input I X J), (input J A K).".to_string(),
        "base_pred I J :- (base_succ J I).".to_string(),
        format!("tuple_zero {x} :- {}.", atoms("base_zero", "X", 1..=d).join(", ")),
        format!("tuple_last {x} :- {}.", atoms("base_last", "X", 1..=d).join(", ")),
    ];
    let mut base_last = atoms("base_zero", "X", 1..=d - 1);
    base_last.push(format!("(base_last X{d})"));
    out.push(format!("tuple_base_last {x} :- {}.", base_last.join(", ")));
    // One clause per carry length, lowest position first.
    for j in (1..=d).rev() {
        let mut body: Vec<String> = (1..j).map(|i| format!("(X{i} = Y{i})")).collect();
        body.push(format!("(base_succ X{j} Y{j})"));
        body.extend(atoms("base_last", "X", j + 1..=d));
        body.extend(atoms("base_zero", "Y", j + 1..=d));
        out.push(format!("tuple_succ {x} {y} :- {}.", body.join(", ")));
    }
    out.push(format!("tuple_pred {x} {y} :- (tuple_succ {y} {x})."));
    out.push(format!("less_than {x} {y} :- (tuple_succ {x} {y})."));
    out.push(format!("less_than {x} {y} :- (tuple_succ {x} {z}), (less_than {z} {y})."));
    out.push(format!("tuple_non_zero {x} :- (tuple_zero {z}), (less_than {z} {x})."));
    out
}

pub(crate) fn base_arith_signatures(d: usize, sigs: &mut BTreeMap<String, Type>) {
    sigs.insert("input".into(), Type::relation(3));
    for p in ["base_zero", "base_last"] {
        sigs.insert(p.into(), Type::relation(1));
    }
    for p in ["base_succ", "base_pred"] {
        sigs.insert(p.into(), Type::relation(2));
    }
    for p in ["tuple_zero", "tuple_last", "tuple_base_last", "tuple_non_zero"] {
        sigs.insert(p.into(), Type::relation(d));
    }
    for p in ["tuple_succ", "tuple_pred", "less_than"] {
        sigs.insert(p.into(), Type::relation(2 * d));
    }
}

pub fn gen_base_arith(d: usize) -> Vec<Clause> {
    parse_lines(&base_arith_lines(d))
}
