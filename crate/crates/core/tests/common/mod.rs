//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use hodl_core::codegen::gen_bignum;
use hodl_core::encode::{encode_input, merge};
use hodl_core::engines::{DemandEngine, ExtRel, GroundTerm};
use hodl_core::syntax::parse_and_desugar;
use hodl_core::tm::{tm_run, TuringMachine, Verdict, DEFAULT_HORIZON};
use hodl_core::{check, Program, TypedProgram};

pub fn typed(text: &str) -> TypedProgram {
    check(&parse_and_desugar(text).expect("parses")).expect("checks")
}

pub fn oracle_accepts(m: &TuringMachine, w: &str) -> bool {
    tm_run(m, w, DEFAULT_HORIZON).unwrap().verdict == Verdict::Accepted
}

/// Number library for order `k` over an input of length `n`.
pub fn number_program(k: usize, d: usize, n: usize) -> TypedProgram {
    let lib = Program::new(Default::default(), gen_bignum(k, d));
    let merged = merge(&lib, &encode_input(&"a".repeat(n)).unwrap()).unwrap();
    check(&merged).expect("number library checks")
}

pub fn low() -> GroundTerm {
    GroundTerm::cnst("low")
}

pub fn high() -> GroundTerm {
    GroundTerm::cnst("high")
}

/// The level-1 number `m` over positions `0..n` (d = 1) as an explicit
/// relation from positions to bits.
pub fn level1(m: u64, n: usize) -> GroundTerm {
    GroundTerm::Ext(ExtRel::new(
        2,
        (0..n).map(|x| {
            vec![x.to_string(), if m >> x & 1 == 1 { "high".to_string() } else { "low".to_string() }]
        }),
    ))
}

/// Reads a level-1 number bit by bit; `None` when some bit is undefined
/// or ambiguous.
pub fn decode1(eng: &mut DemandEngine, num: &GroundTerm, n: usize) -> Option<u64> {
    let mut value = 0;
    for x in 0..n {
        let bits = eng.answers(num, &[Some(GroundTerm::cnst(x.to_string())), None]).unwrap();
        match bits.as_slice() {
            [b] if b[0] == high() => value |= 1 << x,
            [b] if b[0] == low() => {}
            _ => return None,
        }
    }
    Some(value)
}

/// Reads a level-2 number by querying it at every level-1 position.
pub fn decode2(eng: &mut DemandEngine, num: &GroundTerm, n: usize) -> Option<u64> {
    let width = 1u64 << n;
    let mut value = 0;
    for x in 0..width {
        let bits = eng.answers(num, &[Some(level1(x, n)), None]).unwrap();
        match bits.as_slice() {
            [b] if b[0] == high() => value |= 1 << x,
            [b] if b[0] == low() => {}
            _ => return None,
        }
    }
    Some(value)
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

/// `(name, text)` for every corpus program, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "hodl"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

use hodl_core::semantics::{product, value_leq, DomainCache, Interpretation, Rel, SemValue};
use rand::Rng;

/// A random monotone value for every predicate: the upward closure of a
/// random set of argument tuples.
pub fn random_interpretation(tp: &TypedProgram, rng: &mut impl Rng) -> Interpretation {
    let mut cache = DomainCache::new(tp.universe.len(), 1 << 16);
    let mut out = Interpretation::new();
    for (p, ty) in &tp.program.signatures {
        let args = ty.args();
        if args.is_empty() {
            out.insert(p.clone(), SemValue::Bool(rng.gen_bool(0.5)));
            continue;
        }
        let doms: Vec<_> = args.iter().map(|a| cache.get(a).expect("small domain")).collect();
        let points = product(&doms);
        let density = rng.gen_range(0.0..0.4);
        let seeds: Vec<_> = points.iter().filter(|_| rng.gen_bool(density)).cloned().collect();
        let closed = points
            .iter()
            .filter(|t| seeds.iter().any(|s| s.iter().zip(t.iter()).all(|(x, y)| value_leq(x, y).unwrap())))
            .cloned();
        out.insert(p.clone(), SemValue::Rel(Rel::from_tuples(args.len(), closed)));
    }
    out
}

/// Pointwise join of two interpretations over the same predicates.
pub fn join(a: &Interpretation, b: &Interpretation) -> Interpretation {
    a.iter()
        .map(|(p, x)| {
            let v = match (x, &b[p]) {
                (SemValue::Bool(u), SemValue::Bool(v)) => SemValue::Bool(*u || *v),
                (SemValue::Rel(u), SemValue::Rel(v)) => SemValue::Rel(Rel::from_tuples(
                    u.arity(),
                    u.tuples().iter().chain(v.tuples().iter()).cloned(),
                )),
                other => panic!("mismatched values {other:?}"),
            };
            (p.clone(), v)
        })
        .collect()
}
