//! Big numbers as predicates from lower-level numbers to `low`/`high`.
//!
//! A level-1 number maps a d-tuple of positions to a bit; a level-(j+1)
//! number maps level-j numbers to bits. Position 0 is the least
//! significant bit.

use std::collections::BTreeMap;

use super::arith::{base_arith_lines, base_arith_signatures};
use super::{parse_lines, tuple};
use crate::ast::Clause;
use crate::types::Type;

/// Type of numbers at `level` (at least 1) over d-tuples of positions.
pub fn number_type(level: usize, d: usize) -> Type {
    assert!(level >= 1 && d >= 1);
    let mut ty = Type::relation(d + 1);
    for _ in 1..level {
        ty = Type::predicate([ty, Type::Iota]);
    }
    ty
}

fn level_one_lines(d: usize) -> Vec<String> {
    let x = tuple("X", d);
    let y = tuple("Y", d);
    [
        format!("zero_1 {x} low."),
        format!("last_1 {x} high."),
        format!("is_zero_1 N :- (tuple_last {x}), (all_to_right_1 low N {x})."),
        format!("all_to_right_1 V N {x} :- (tuple_zero {x}), (N {x} V)."),
        format!("all_to_right_1 V N {x} :- (tuple_pred {x} {y}), (N {x} V), (all_to_right_1 V N {y})."),
        format!("non_zero_1 N :- (tuple_last {x}), (exists_to_right_1 high N {x})."),
        format!("exists_to_right_1 V N {x} :- (N {x} V)."),
        format!("exists_to_right_1 V N {x} :- (tuple_pred {x} {y}), (exists_to_right_1 V N {y})."),
        format!("is_last_1 N :- (tuple_last {x}), (all_to_right_1 high N {x})."),
        format!("non_last_1 N :- (tuple_last {x}), (exists_to_right_1 low N {x})."),
        format!("pred_1 N {x} V :- (tuple_zero {x}), (non_zero_1 N), (N {x} V1), (invert V1 V)."),
        format!("pred_1 N {x} V :- (non_zero_1 N), (tuple_pred {x} {y}), (exists_to_right_1 high N {y}), (N {x} V)."),
        format!("pred_1 N {x} V :- (non_zero_1 N), (tuple_pred {x} {y}), (all_to_right_1 low N {y}), (N {x} V1), (invert V1 V)."),
        "invert low high.".to_string(),
        "invert high low.".to_string(),
        format!("succ_1 N {x} V :- (tuple_zero {x}), (non_last_1 N), (N {x} V1), (invert V1 V)."),
        format!("succ_1 N {x} V :- (non_last_1 N), (tuple_pred {x} {y}), (exists_to_right_1 low N {y}), (N {x} V)."),
        format!("succ_1 N {x} V :- (non_last_1 N), (tuple_pred {x} {y}), (all_to_right_1 high N {y}), (N {x} V1), (invert V1 V)."),
        format!("equal_1 N M :- (tuple_last {x}), (equal_test_1 N M {x})."),
        format!("equal_test_1 N M {x} :- (tuple_zero {x}), (N {x} V), (M {x} V)."),
        format!("equal_test_1 N M {x} :- (tuple_pred {x} {y}), (N {x} V), (M {x} V), (equal_test_1 N M {y})."),
        "less_than_1 N M :- (is_zero_1 N), (non_zero_1 M).".to_string(),
        "less_than_1 N M :- (non_zero_1 N), (non_zero_1 M), (less_than_1 (pred_1 N) (pred_1 M)).".to_string(),
    ]
    .into()
}

fn higher_level_lines(j: usize) -> Vec<String> {
    let h = j + 1;
    [
        format!("zero_{h} X low."),
        format!("last_{h} X high."),
        format!("is_zero_{h} N :- (all_to_right_{h} low N last_{j})."),
        format!("all_to_right_{h} V N X :- (is_zero_{j} X), (N X V)."),
        format!("all_to_right_{h} V N X :- (non_zero_{j} X), (N X V), (all_to_right_{h} V N (pred_{j} X))."),
        format!("non_zero_{h} N :- (exists_to_right_{h} high N last_{j})."),
        format!("exists_to_right_{h} V N X :- (N X V)."),
        format!("exists_to_right_{h} V N X :- (non_zero_{j} X), (exists_to_right_{h} V N (pred_{j} X))."),
        format!("is_last_{h} N :- (all_to_right_{h} high N last_{j})."),
        format!("non_last_{h} N :- (exists_to_right_{h} low N last_{j})."),
        format!("pred_{h} N X V :- (is_zero_{j} X), (non_zero_{h} N), (N X V1), (invert V1 V)."),
        format!("pred_{h} N X V :- (non_zero_{j} X), (exists_to_right_{h} high N (pred_{j} X)), (N X V)."),
        format!("pred_{h} N X V :- (non_zero_{j} X), (non_zero_{h} N), (all_to_right_{h} low N (pred_{j} X)), (N X V1), (invert V1 V)."),
        format!("succ_{h} N X V :- (is_zero_{j} X), (non_last_{h} N), (N X V1), (invert V1 V)."),
        format!("succ_{h} N X V :- (non_zero_{j} X), (exists_to_right_{h} low N (pred_{j} X)), (N X V)."),
        format!("succ_{h} N X V :- (non_zero_{j} X), (non_zero_{h} N), (all_to_right_{h} high N (pred_{j} X)), (N X V1), (invert V1 V)."),
        format!("equal_{h} N M :- (equal_test_{h} N M last_{j})."),
        format!("equal_test_{h} N M X :- (is_zero_{j} X), (N X V), (M X V)."),
        format!("equal_test_{h} N M X :- (non_zero_{j} X), (N X V), (M X V), (equal_test_{h} N M (pred_{j} X))."),
        format!("less_than_{h} N M :- (is_zero_{h} N), (non_zero_{h} M)."),
        format!("less_than_{h} N M :- (non_zero_{h} N), (non_zero_{h} M), (less_than_{h} (pred_{h} N) (pred_{h} M))."),
    ]
    .into()
}

/// Text of the tuple substrate and number levels `1..=levels`.
pub fn bignum_lines(levels: usize, d: usize) -> Vec<String> {
    assert!(levels >= 1, "at least one number level");
    let mut out = base_arith_lines(d);
    out.extend(level_one_lines(d));
    for j in 1..levels {
        out.extend(higher_level_lines(j));
    }
    out
}

pub(crate) fn bignum_signatures(levels: usize, d: usize, sigs: &mut BTreeMap<String, Type>) {
    base_arith_signatures(d, sigs);
    sigs.insert("invert".into(), Type::relation(2));
    for h in 1..=levels {
        let num = number_type(h, d);
        // Arguments that index a bit of a level-h number.
        let position: Vec<Type> = if h == 1 {
            vec![Type::Iota; d]
        } else {
            vec![number_type(h - 1, d)]
        };
        let with = |pre: Vec<Type>, post: Vec<Type>| {
            Type::predicate(pre.into_iter().chain(post))
        };
        sigs.insert(format!("zero_{h}"), num.clone());
        sigs.insert(format!("last_{h}"), num.clone());
        for p in ["is_zero", "non_zero", "is_last", "non_last"] {
            sigs.insert(format!("{p}_{h}"), Type::predicate([num.clone()]));
        }
        for p in ["all_to_right", "exists_to_right"] {
            sigs.insert(format!("{p}_{h}"), with(vec![Type::Iota, num.clone()], position.clone()));
        }
        for p in ["pred", "succ"] {
            let mut post = position.clone();
            post.push(Type::Iota);
            sigs.insert(format!("{p}_{h}"), with(vec![num.clone()], post));
        }
        for p in ["equal", "less_than"] {
            sigs.insert(format!("{p}_{h}"), Type::predicate([num.clone(), num.clone()]));
        }
        sigs.insert(format!("equal_test_{h}"), with(vec![num.clone(), num.clone()], position.clone()));
    }
}

/// Number libraries for a program of order `k` (levels `1..k`).
pub fn gen_bignum(k: usize, d: usize) -> Vec<Clause> {
    assert!(k >= 2, "big numbers need order at least 2");
    parse_lines(&bignum_lines(k - 1, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_types() {
        assert_eq!(number_type(1, 1).to_string(), "i -> i -> o");
        assert_eq!(number_type(2, 1).to_string(), "(i -> i -> o) -> i -> o");
        assert_eq!(number_type(2, 1).order(), 2);
    }

    #[test]
    fn level_counts() {
        assert_eq!(gen_bignum(2, 1).len(), 12 + 23);
        assert_eq!(gen_bignum(3, 1).len(), 12 + 23 + 21);
    }
}
