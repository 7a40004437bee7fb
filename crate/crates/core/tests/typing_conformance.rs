//! Legal and illegal programs from the definitional fragment.

use hodl_core::diag::Code;
use hodl_core::syntax::parse_and_desugar;
use hodl_core::{check, Error, Type};

fn codes(text: &str) -> Vec<Code> {
    match check(&parse_and_desugar(text).unwrap()) {
        Ok(_) => Vec::new(),
        Err(Error::Invalid(ds)) => ds.iter().map(|d| d.code).collect(),
        Err(e) => panic!("unexpected error {e}"),
    }
}

fn ty(text: &str) -> Type {
    parse_and_desugar(&format!("#pred t : {text}.")).unwrap().signatures["t"].clone()
}

#[test]
fn predicate_constant_in_head_argument() {
    assert_eq!(codes("q a.\nr q."), vec![Code::E202]);
}

#[test]
fn repeated_predicate_formal() {
    assert_eq!(codes("p Q Q :- (Q a)."), vec![Code::E201]);
}

#[test]
fn free_predicate_variable_in_body() {
    assert_eq!(codes("p X :- (Q X)."), vec![Code::E203]);
}

#[test]
fn union_checks_at_order_two() {
    let tp = check(&parse_and_desugar("union P Q X :- (P X).\nunion P Q X :- (Q X).").unwrap()).unwrap();
    assert_eq!(tp.signature("union"), Some(&ty("(i -> o) -> (i -> o) -> i -> o")));
    assert_eq!(tp.order, 2);
}

#[test]
fn strict_and_relaxed_forms_agree() {
    let strict = "p X :- (X = a).\nq X Y :- (X = Y).\nr P Q X :- (X = b), (P X), (Q Y).";
    let relaxed = "p a.\nq X X.\nr P Q b :- (P b), (Q Y).";
    for text in [strict, relaxed] {
        let tp = check(&parse_and_desugar(text).unwrap()).unwrap();
        assert_eq!(tp.signature("p"), Some(&ty("i -> o")));
        assert_eq!(tp.signature("q"), Some(&ty("i -> i -> o")));
        assert_eq!(tp.signature("r"), Some(&ty("(i -> o) -> (i -> o) -> i -> o")));
        assert_eq!(tp.order, 2);
    }
}

#[test]
fn type_clash_is_reported() {
    assert_eq!(codes("p X :- (X a), (X = b)."), vec![Code::E101]);
}

#[test]
fn empty_program_is_first_order() {
    let tp = check(&parse_and_desugar("").unwrap()).unwrap();
    assert_eq!(tp.order, 1);
}
