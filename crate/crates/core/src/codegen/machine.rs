//! Turing-machine simulators.
//!
//! Time steps and tape cells are numbers: d-tuples of positions for the
//! first-order simulator, big numbers of level `k - 1` for order `k`.
//! Every transition contributes one rule each for the symbol, state and
//! cursor at the next step; untouched cells are copied forward.

use std::collections::BTreeMap;

use super::arith::{base_arith_lines, base_arith_signatures};
use super::bignum::{bignum_lines, bignum_signatures, number_type};
use super::{assemble, tuple, Generated};
use crate::encode::EMPTY;
use crate::error::{Error, Result};
use crate::tm::{tm_run, Action, Symbol, TuringMachine, Verdict, ACCEPT_STATE, DEFAULT_HORIZON};
use crate::types::Type;

fn symbol_pred(s: Symbol) -> String {
    format!("symbol_{}", s.pred_suffix())
}

fn state_pred(s: &str) -> String {
    format!("state_{s}")
}

/// Direct `accept` rules for the strings of length 0 and 1 the machine
/// accepts.
pub fn short_string_rules(m: &TuringMachine) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (w, sym) in [("", EMPTY), ("a", "a"), ("b", "b")] {
        let r = tm_run(m, w, DEFAULT_HORIZON)?;
        match r.verdict {
            Verdict::Accepted => out.push(format!("accept :- (input 0 {sym} end).")),
            Verdict::OutOfSteps => {
                return Err(Error::Generation(format!(
                    "machine `{}` does not halt on {w:?} within {DEFAULT_HORIZON} steps",
                    m.name
                )))
            }
            Verdict::Rejected | Verdict::LeftEdgeViolation => {}
        }
    }
    Ok(out)
}

/// `time` lists the argument types of one time step (or one cell).
fn machine_signatures(m: &TuringMachine, time: &[Type], cursor: Type, sigs: &mut BTreeMap<String, Type>) {
    for s in Symbol::ALL {
        sigs.insert(symbol_pred(s), Type::predicate(time.iter().chain(time).cloned()));
    }
    for s in &m.states {
        sigs.insert(state_pred(s), Type::predicate(time.iter().cloned()));
    }
    sigs.insert("cursor".into(), cursor);
    sigs.insert("accept".into(), Type::Omicron);
}

fn header(m: &TuringMachine, k: usize, d: usize) -> Vec<(&'static str, String)> {
    vec![("machine", m.name.clone()), ("order", k.to_string()), ("tuple width", d.to_string())]
}

/// First-order simulation of `n^d - 1` steps.
pub fn compile_tm_first_order(m: &TuringMachine, d: usize) -> Result<Generated> {
    if d == 0 {
        return Err(Error::Generation("tuple width must be positive".into()));
    }
    let t = tuple("T", d);
    let tp = tuple("Tp", d);
    let x = tuple("X", d);
    let xp = tuple("Xp", d);
    let y = tuple("Y", d);

    let mut init = Vec::new();
    let leading_zeros: Vec<String> = (1..d).map(|i| format!("(base_zero X{i})")).collect();
    for s in Symbol::ALL {
        let Some(c) = s.input_constant() else { continue };
        let mut body = vec![format!("(tuple_zero {t})")];
        body.extend(leading_zeros.iter().cloned());
        body.push(format!("(input X{d} {c} W)"));
        init.push(format!("{} {t} {x} :- {}.", symbol_pred(s), body.join(", ")));
    }
    init.push(format!(
        "{} {t} {x} :- (tuple_zero {t}), (tuple_base_last {y}), (less_than {y} {x}).",
        symbol_pred(Symbol::Blank)
    ));
    init.push(format!("{} {t} :- (tuple_zero {t}).", state_pred(&m.start)));
    init.push(format!("cursor {t} {x} :- (tuple_zero {t}), (tuple_zero {x})."));

    let mut trans = Vec::new();
    for ((from, sym), action) in &m.transitions {
        let guard = format!(
            "(tuple_succ {t} {tp}), ({} {t}), (cursor {t} {x}), ({} {t} {x})",
            state_pred(from),
            symbol_pred(*sym)
        );
        let next = state_pred(action.next_state());
        let (written, cursor) = match action {
            Action::Write(_, s2) => (*s2, format!("cursor {tp} {x} :- {guard}.")),
            Action::MoveRight(_) => (*sym, format!("cursor {tp} {xp} :- {guard}, (tuple_succ {x} {xp}).")),
            Action::MoveLeft(_) => (*sym, format!("cursor {tp} {xp} :- {guard}, (tuple_pred {x} {xp}).")),
        };
        trans.push(format!("{} {tp} {x} :- {guard}.", symbol_pred(written)));
        trans.push(format!("{next} {tp} :- {guard}."));
        trans.push(cursor);
    }

    let mut inertia = Vec::new();
    for s in Symbol::ALL {
        let p = symbol_pred(s);
        inertia.push(format!(
            "{p} {tp} {xp} :- (tuple_succ {t} {tp}), (cursor {t} {x}), (less_than {x} {xp}), ({p} {t} {xp})."
        ));
        inertia.push(format!(
            "{p} {tp} {xp} :- (tuple_succ {t} {tp}), (cursor {t} {x}), (less_than {xp} {x}), ({p} {t} {xp})."
        ));
    }
    let mut accept = vec![format!("accept :- (tuple_last {t}), ({} {t}).", state_pred(ACCEPT_STATE))];
    accept.extend(short_string_rules(m)?);

    let mut sigs = BTreeMap::new();
    base_arith_signatures(d, &mut sigs);
    machine_signatures(m, &vec![Type::Iota; d], Type::relation(2 * d), &mut sigs);
    assemble(
        &header(m, 1, d),
        &sigs,
        &[
            ("tuple arithmetic", base_arith_lines(d)),
            ("initial configuration", init),
            ("transitions", trans),
            ("inertia", inertia),
            ("acceptance", accept),
        ],
    )
}

/// Order-`k` simulation of `exp_{k-1}(n^d) - 1` steps using level-`k-1`
/// numbers for time steps and tape cells.
pub fn compile_tm_higher_order(m: &TuringMachine, k: usize, d: usize) -> Result<Generated> {
    if k < 2 {
        return Err(Error::Generation("higher-order simulation needs k >= 2".into()));
    }
    if d == 0 {
        return Err(Error::Generation("tuple width must be positive".into()));
    }
    let l = k - 1;
    // Bit positions of a level-l number: a d-tuple at level 1, else one
    // level-(l-1) number.
    let pos = if l == 1 { tuple("X", d) } else { "X".to_string() };
    let ipos = if l == 1 { tuple("I", d) } else { "I".to_string() };

    let mut conv = vec![
        format!("base_to_higher 0 {pos} low."),
        format!("base_to_higher M {pos} V :- (input J A M), (succ_{l} (base_to_higher J) {pos} V)."),
    ];
    let mut init = Vec::new();
    for s in Symbol::ALL {
        let Some(c) = s.input_constant() else { continue };
        init.push(format!(
            "{} T X :- (is_zero_{l} T), (input Y {c} W), (equal_{l} (base_to_higher Y) X).",
            symbol_pred(s)
        ));
    }
    init.push(format!(
        "{} T X :- (is_zero_{l} T), (base_last Y), (less_than_{l} (base_to_higher Y) X).",
        symbol_pred(Symbol::Blank)
    ));
    init.push(format!("{} T :- (is_zero_{l} T).", state_pred(&m.start)));
    init.push(format!("cursor T {ipos} low :- (is_zero_{l} T)."));

    let here = format!("(cursor (pred_{l} T))");
    let mut trans = Vec::new();
    for ((from, sym), action) in &m.transitions {
        let fired = format!(
            "({} (pred_{l} T)), ({} (pred_{l} T) {here})",
            state_pred(from),
            symbol_pred(*sym)
        );
        let (written, moved) = match action {
            Action::Write(_, s2) => (*s2, format!("(cursor (pred_{l} T) {ipos} V)")),
            Action::MoveRight(_) => (*sym, format!("(succ_{l} {here} {ipos} V)")),
            Action::MoveLeft(_) => (*sym, format!("(pred_{l} {here} {ipos} V)")),
        };
        trans.push(format!(
            "{} T X :- (non_zero_{l} T), (equal_{l} X {here}), {fired}.",
            symbol_pred(written)
        ));
        trans.push(format!("{} T :- (non_zero_{l} T), {fired}.", state_pred(action.next_state())));
        trans.push(format!("cursor T {ipos} V :- (non_zero_{l} T), {fired}, {moved}."));
    }
    let mut inertia = Vec::new();
    for s in Symbol::ALL {
        let p = symbol_pred(s);
        inertia.push(format!("{p} T X :- (less_than_{l} X {here}), ({p} (pred_{l} T) X)."));
        inertia.push(format!("{p} T X :- (less_than_{l} {here} X), ({p} (pred_{l} T) X)."));
    }
    let mut accept = vec![format!("accept :- ({} last_{l}).", state_pred(ACCEPT_STATE))];
    accept.extend(short_string_rules(m)?);

    let mut sigs = BTreeMap::new();
    bignum_signatures(l, d, &mut sigs);
    let num = number_type(l, d);
    let cursor = Type::predicate(std::iter::once(num.clone()).chain(num.args()));
    machine_signatures(m, std::slice::from_ref(&num), cursor, &mut sigs);
    sigs.insert("base_to_higher".into(), Type::predicate(std::iter::once(Type::Iota).chain(num.args())));

    let mut sections = vec![("number arithmetic", bignum_lines(l, d))];
    sections.push(("input positions as numbers", std::mem::take(&mut conv)));
    sections.extend([
        ("initial configuration", init),
        ("transitions", trans),
        ("inertia", inertia),
        ("acceptance", accept),
    ]);
    assemble(&header(m, k, d), &sigs, &sections)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::samples;
    use crate::typing::check;

    #[test]
    fn parity_short_rules() {
        let rules = short_string_rules(&samples::even_parity()).unwrap();
        assert_eq!(rules, vec!["accept :- (input 0 empty end).", "accept :- (input 0 b end)."]);
        assert!(short_string_rules(&samples::reject_all()).unwrap().is_empty());
        assert_eq!(short_string_rules(&samples::accept_all()).unwrap().len(), 3);
    }

    #[test]
    fn first_order_program_checks() {
        for d in 1..=3 {
            let g = compile_tm_first_order(&samples::even_parity(), d).unwrap();
            let tp = check(&g.program).unwrap();
            assert_eq!(tp.order, 1);
            assert!(g.text.starts_with("% machine: even_parity\n"));
        }
    }

    #[test]
    fn higher_order_program_checks() {
        for (k, d) in [(2, 1), (2, 2), (3, 1)] {
            let g = compile_tm_higher_order(&samples::even_parity(), k, d).unwrap();
            let tp = check(&g.program).unwrap_or_else(|e| panic!("k={k} d={d}: {e:?}"));
            assert_eq!(tp.order, k);
        }
    }

    #[test]
    fn start_rule_text() {
        let g = compile_tm_higher_order(&samples::accept_all(), 2, 1).unwrap();
        assert!(g.text.contains("state_s0 T :- (is_zero_1 T).\n"));
        assert!(g.text.contains("accept :- (state_yes last_1).\n"));
    }
}
