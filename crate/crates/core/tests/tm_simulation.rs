//! Generated simulators decide the same strings as the machines.

use std::time::Instant;

use hodl_core::codegen::{compile_tm_first_order, compile_tm_higher_order};
use hodl_core::engines::{decide, EngineConfig, EngineKind};
use hodl_core::tm::{samples, strings_up_to, tm_run, Verdict, DEFAULT_HORIZON};

fn oracle(m: &hodl_core::tm::TuringMachine, w: &str) -> bool {
    tm_run(m, w, DEFAULT_HORIZON).unwrap().verdict == Verdict::Accepted
}

#[test]
fn first_order_parity_pairs() {
    let m = samples::even_parity();
    let g = compile_tm_first_order(&m, 2).unwrap();
    let cfg = EngineConfig::with_engine(EngineKind::Seminaive);
    let t = Instant::now();
    for w in strings_up_to(4) {
        assert_eq!(decide(&g.program, &w, &cfg).unwrap().accept, oracle(&m, &w), "{w:?}");
    }
    eprintln!("first order parity: {:?}", t.elapsed());
}

#[test]
fn second_order_parity() {
    let m = samples::even_parity();
    let g = compile_tm_higher_order(&m, 2, 1).unwrap();
    let cfg = EngineConfig::with_engine(EngineKind::Demand);
    for w in strings_up_to(3) {
        let t = Instant::now();
        let d = decide(&g.program, &w, &cfg).unwrap();
        eprintln!("{w:?}: {} steps {:?}", d.steps, t.elapsed());
        assert_eq!(d.accept, oracle(&m, &w), "{w:?}");
    }
}
