//! Deterministic single-tape Turing machines over `{a, b, _}`.
//!
//! Text format, one directive per line, `#` comments:
//!
//! ```text
//! states: s0 s1 yes
//! start: s0
//! trans: s0 a -> s1 write a
//! trans: s0 b -> s0 right
//! trans: s1 _ -> yes write _
//! ```
//!
//! Every action is exactly one of write, move right, move left. The `yes`
//! state is made absorbing automatically.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub const ACCEPT_STATE: &str = "yes";
pub const DEFAULT_HORIZON: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    A,
    B,
    Blank,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::A, Symbol::B, Symbol::Blank];

    fn parse(s: &str) -> Option<Symbol> {
        match s {
            "a" => Some(Symbol::A),
            "b" => Some(Symbol::B),
            "_" => Some(Symbol::Blank),
            _ => None,
        }
    }

    /// Suffix used for `symbol_*` predicates.
    pub fn pred_suffix(self) -> &'static str {
        match self {
            Symbol::A => "a",
            Symbol::B => "b",
            Symbol::Blank => "blank",
        }
    }

    /// The individual constant for input symbols.
    pub fn input_constant(self) -> Option<&'static str> {
        match self {
            Symbol::A => Some("a"),
            Symbol::B => Some("b"),
            Symbol::Blank => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::A => "a",
            Symbol::B => "b",
            Symbol::Blank => "_",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Write(String, Symbol),
    MoveRight(String),
    MoveLeft(String),
}

impl Action {
    pub fn next_state(&self) -> &str {
        match self {
            Action::Write(s, _) | Action::MoveRight(s) | Action::MoveLeft(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    pub name: String,
    pub states: Vec<String>,
    pub start: String,
    pub transitions: BTreeMap<(String, Symbol), Action>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected,
    OutOfSteps,
    LeftEdgeViolation,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
            Verdict::OutOfSteps => "out_of_steps",
            Verdict::LeftEdgeViolation => "left_edge_violation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub verdict: Verdict,
    pub steps_used: u64,
    pub final_state: String,
}

fn valid_state_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_tm(text: &str) -> Result<TuringMachine> {
    parse_named_tm("machine", text)
}

pub fn parse_named_tm(name: &str, text: &str) -> Result<TuringMachine> {
    let mut states: Option<Vec<String>> = None;
    let mut start: Option<String> = None;
    let mut pending = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Machine { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| err(format!("expected `key: value`, found `{line}`")))?;
        let words: Vec<&str> = rest.split_whitespace().collect();
        match key.trim() {
            "states" => {
                if states.is_some() {
                    return Err(err("duplicate `states` line".into()));
                }
                if let Some(bad) = words.iter().find(|w| !valid_state_name(w)) {
                    return Err(err(format!("invalid state name `{bad}`")));
                }
                let mut list: Vec<String> = Vec::new();
                for w in words {
                    if list.iter().any(|s| s == w) {
                        return Err(err(format!("state `{w}` listed twice")));
                    }
                    list.push(w.to_string());
                }
                states = Some(list);
            }
            "start" => {
                if start.is_some() {
                    return Err(err("duplicate `start` line".into()));
                }
                match words.as_slice() {
                    [s] => start = Some(s.to_string()),
                    _ => return Err(err("`start` takes exactly one state".into())),
                }
            }
            "trans" => pending.push((line_no, parse_transition(&words).map_err(err)?)),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }

    let states = states.ok_or(Error::Machine { line: 0, message: "missing `states` line".into() })?;
    let start = start.ok_or(Error::Machine { line: 0, message: "missing `start` line".into() })?;
    let known = |s: &str| states.iter().any(|x| x == s);
    if !known(&start) {
        return Err(Error::Machine { line: 0, message: format!("unknown start state `{start}`") });
    }
    if !known(ACCEPT_STATE) {
        return Err(Error::Machine { line: 0, message: "state `yes` must be listed".into() });
    }

    let mut transitions = BTreeMap::new();
    for (line, (from, sym, action)) in pending {
        for s in [from.as_str(), action.next_state()] {
            if !known(s) {
                return Err(Error::Machine { line, message: format!("unknown state `{s}`") });
            }
        }
        if from == ACCEPT_STATE {
            return Err(Error::Machine {
                line,
                message: "transitions out of `yes` are implicit".into(),
            });
        }
        if transitions.insert((from.clone(), sym), action).is_some() {
            return Err(Error::Machine {
                line,
                message: format!("duplicate transition for ({from}, {sym})"),
            });
        }
    }
    for sym in Symbol::ALL {
        transitions.insert(
            (ACCEPT_STATE.to_string(), sym),
            Action::Write(ACCEPT_STATE.to_string(), sym),
        );
    }
    Ok(TuringMachine { name: name.to_string(), states, start, transitions })
}

fn parse_transition(words: &[&str]) -> std::result::Result<(String, Symbol, Action), String> {
    let (from, sym, to, rest) = match words {
        [from, sym, "->", to, rest @ ..] => (from, sym, to, rest),
        _ => return Err("expected `trans: STATE SYMBOL -> STATE ACTION`".into()),
    };
    let sym = Symbol::parse(sym).ok_or_else(|| format!("unknown symbol `{sym}`"))?;
    let to = to.to_string();
    let action = match rest {
        ["write", s] => {
            Action::Write(to, Symbol::parse(s).ok_or_else(|| format!("unknown symbol `{s}`"))?)
        }
        ["right"] => Action::MoveRight(to),
        ["left"] => Action::MoveLeft(to),
        _ => return Err("action must be `write SYMBOL`, `right` or `left`".into()),
    };
    Ok((from.to_string(), sym, action))
}

impl TuringMachine {
    /// Transitions given in the source, without the implicit `yes` loops.
    pub fn user_transitions(&self) -> impl Iterator<Item = (&(String, Symbol), &Action)> {
        self.transitions.iter().filter(|((s, _), _)| s != ACCEPT_STATE)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("states: {}\nstart: {}\n", self.states.join(" "), self.start);
        for ((from, sym), action) in self.user_transitions() {
            let act = match action {
                Action::Write(to, s) => format!("{to} write {s}"),
                Action::MoveRight(to) => format!("{to} right"),
                Action::MoveLeft(to) => format!("{to} left"),
            };
            out.push_str(&format!("trans: {from} {sym} -> {act}\n"));
        }
        out
    }
}

fn tape_of(w: &str) -> Result<Vec<Symbol>> {
    w.chars()
        .map(|c| match c {
            'a' => Ok(Symbol::A),
            'b' => Ok(Symbol::B),
            other => Err(Error::BadInput(other)),
        })
        .collect()
}

/// Runs `m` on `w` for at most `max_steps` transitions.
pub fn tm_run(m: &TuringMachine, w: &str, max_steps: u64) -> Result<RunResult> {
    let mut tape = tape_of(w)?;
    let mut head = 0usize;
    let mut state = m.start.clone();
    let mut steps = 0u64;
    loop {
        if state == ACCEPT_STATE {
            return Ok(RunResult { verdict: Verdict::Accepted, steps_used: steps, final_state: state });
        }
        if steps >= max_steps {
            return Ok(RunResult { verdict: Verdict::OutOfSteps, steps_used: steps, final_state: state });
        }
        if head >= tape.len() {
            tape.resize(head + 1, Symbol::Blank);
        }
        let Some(action) = m.transitions.get(&(state.clone(), tape[head])) else {
            return Ok(RunResult { verdict: Verdict::Rejected, steps_used: steps, final_state: state });
        };
        match action {
            Action::Write(next, s) => {
                tape[head] = *s;
                state = next.clone();
            }
            Action::MoveRight(next) => {
                head += 1;
                state = next.clone();
            }
            Action::MoveLeft(next) => {
                if head == 0 {
                    return Ok(RunResult {
                        verdict: Verdict::LeftEdgeViolation,
                        steps_used: steps,
                        final_state: state,
                    });
                }
                head -= 1;
                state = next.clone();
            }
        }
        steps += 1;
    }
}

/// Steps until the machine first enters `yes`, within the default horizon.
pub fn step_count(m: &TuringMachine, w: &str) -> Result<Option<u64>> {
    let r = tm_run(m, w, DEFAULT_HORIZON)?;
    Ok((r.verdict == Verdict::Accepted).then_some(r.steps_used))
}

/// Machines used by tests and documentation.
pub mod samples {
    use super::{parse_named_tm, TuringMachine};

    pub const ACCEPT_ALL: &str = "\
# Accepts every string in one step.
states: s0 yes
start: s0
trans: s0 a -> yes write a
trans: s0 b -> yes write b
trans: s0 _ -> yes write _
";

    pub const EVEN_PARITY: &str = "\
# Accepts strings with an even number of a's.
states: s0 s1 yes
start: s0
trans: s0 a -> s1 right
trans: s0 b -> s0 right
trans: s1 a -> s0 right
trans: s1 b -> s1 right
trans: s0 _ -> yes write _
";

    pub const REJECT_ALL: &str = "\
# Scans the input and halts without accepting.
states: s0 yes
start: s0
trans: s0 a -> s0 right
trans: s0 b -> s0 right
";

    pub const LEFT_EDGE: &str = "\
# Moves off the left end of the tape on `a`.
states: s0 yes
start: s0
trans: s0 a -> s0 left
trans: s0 b -> yes write b
trans: s0 _ -> yes write _
";

    fn load(name: &str, text: &str) -> TuringMachine {
        parse_named_tm(name, text).expect("sample machine parses")
    }

    pub fn accept_all() -> TuringMachine {
        load("accept_all", ACCEPT_ALL)
    }

    pub fn even_parity() -> TuringMachine {
        load("even_parity", EVEN_PARITY)
    }

    pub fn reject_all() -> TuringMachine {
        load("reject_all", REJECT_ALL)
    }

    pub fn left_edge() -> TuringMachine {
        load("left_edge", LEFT_EDGE)
    }
}

/// All strings over `{a, b}` of length at most `max_len`, shortest first.
pub fn strings_up_to(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| [format!("{w}a"), format!("{w}b")])
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn accept_all_parses_with_three_user_transitions() {
        let m = accept_all();
        assert_eq!(m.user_transitions().count(), 3);
        assert_eq!(m.transitions.len(), 6);
    }

    #[test]
    fn parity_machine_states() {
        assert_eq!(even_parity().states, vec!["s0", "s1", "yes"]);
    }

    #[test]
    fn duplicate_transition_is_rejected() {
        let text = "states: s0 yes\nstart: s0\ntrans: s0 a -> yes write a\ntrans: s0 a -> s0 right\n";
        assert!(matches!(parse_tm(text), Err(Error::Machine { line: 4, .. })));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse_tm("states: s0 yes\n").is_err());
        assert!(parse_tm("states: s0 yes\nstart: s9\n").is_err());
        assert!(parse_tm("states: s0\nstart: s0\n").is_err());
        assert!(parse_tm("states: s0 yes\nstart: s0\ntrans: s0 c -> yes right\n").is_err());
        assert!(parse_tm("states: s0 yes\nstart: s0\ntape: a\n").is_err());
    }

    #[test]
    fn accept_all_takes_one_step() {
        let r = tm_run(&accept_all(), "ab", 10).unwrap();
        assert_eq!(r.verdict, Verdict::Accepted);
        assert_eq!(r.steps_used, 1);
        assert_eq!(step_count(&accept_all(), "abba").unwrap(), Some(1));
    }

    #[test]
    fn parity_truth_table() {
        let m = even_parity();
        for w in strings_up_to(4) {
            let even = w.chars().filter(|c| *c == 'a').count() % 2 == 0;
            let r = tm_run(&m, &w, DEFAULT_HORIZON).unwrap();
            assert_eq!(r.verdict == Verdict::Accepted, even, "{w:?}");
            if even {
                assert_eq!(r.steps_used, w.len() as u64 + 1);
            }
        }
    }

    #[test]
    fn zero_step_budget() {
        let r = tm_run(&accept_all(), "ab", 0).unwrap();
        assert_eq!(r.verdict, Verdict::OutOfSteps);
    }

    #[test]
    fn reject_all_never_accepts() {
        for w in strings_up_to(3) {
            assert_eq!(step_count(&reject_all(), &w).unwrap(), None);
            assert_eq!(tm_run(&reject_all(), &w, 100).unwrap().verdict, Verdict::Rejected);
        }
    }

    #[test]
    fn left_edge_is_a_verdict() {
        let r = tm_run(&left_edge(), "ab", 100).unwrap();
        assert_eq!(r.verdict, Verdict::LeftEdgeViolation);
    }

    #[test]
    fn text_round_trip() {
        let m = even_parity();
        let again = parse_named_tm("even_parity", &m.to_text()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn string_enumeration_counts() {
        assert_eq!(strings_up_to(4).len(), 31);
        assert_eq!(strings_up_to(0), vec![String::new()]);
    }
}
