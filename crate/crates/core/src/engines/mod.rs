//! Evaluation engines and the decision procedure built on them.

pub mod demand;
pub mod goal;
pub mod seminaive;

use std::fmt;
use std::str::FromStr;

pub use demand::{solve_demand, with_large_stack, DemandEngine, DEFAULT_STEP_BUDGET};
pub use goal::{ExtRel, Goal, GroundTerm};
pub use seminaive::{least_model_seminaive, Seminaive, SeminaiveModel};

use crate::encode::{encode_input, merge};
use crate::error::{Error, Result};
use crate::semantics::{
    least_model_naive, least_model_naive_traced, DomainCache, Interpretation, SemValue,
    DEFAULT_DOMAIN_CAP,
};
use crate::types::Type;
use crate::typing::{check, TypedProgram};
use crate::Program;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Naive,
    Seminaive,
    Demand,
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(EngineKind::Naive),
            "seminaive" => Ok(EngineKind::Seminaive),
            "demand" => Ok(EngineKind::Demand),
            other => Err(format!("unknown engine `{other}` (naive, seminaive, demand)")),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Naive => "naive",
            EngineKind::Seminaive => "seminaive",
            EngineKind::Demand => "demand",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub engine: EngineKind,
    pub step_budget: u64,
    pub domain_cap: u64,
    pub trace: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            engine: EngineKind::Demand,
            step_budget: DEFAULT_STEP_BUDGET,
            domain_cap: DEFAULT_DOMAIN_CAP,
            trace: false,
        }
    }
}

impl EngineConfig {
    pub fn with_engine(engine: EngineKind) -> Self {
        EngineConfig { engine, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub accept: bool,
    /// Iterations, rounds or resolution steps, depending on the engine.
    pub steps: u64,
}

/// Truth of the propositional `accept` under the chosen engine.
pub fn accepts(
    tp: &TypedProgram,
    cfg: &EngineConfig,
    trace: &mut (dyn FnMut(String) + Send),
) -> Result<Decision> {
    if let Some(ty) = tp.signature("accept") {
        if *ty != Type::Omicron {
            return Err(Error::Precondition(format!("`accept` has type {ty}, expected o")));
        }
    } else {
        return Ok(Decision { accept: false, steps: 0 });
    }
    match cfg.engine {
        EngineKind::Naive => {
            let m = if cfg.trace {
                least_model_naive_traced(tp, cfg.domain_cap, trace)?
            } else {
                least_model_naive(tp, cfg.domain_cap)?
            };
            Ok(Decision {
                accept: m.interp.get("accept") == Some(&SemValue::Bool(true)),
                steps: m.iterations as u64,
            })
        }
        EngineKind::Seminaive => {
            let engine = Seminaive::new(tp, cfg.step_budget)?;
            let m = if cfg.trace { engine.run(trace)? } else { engine.run(&mut |_| {})? };
            Ok(Decision { accept: m.holds("accept", &[]), steps: m.rounds as u64 })
        }
        EngineKind::Demand => with_large_stack(|| {
            let mut engine = DemandEngine::new(tp, cfg.step_budget);
            if cfg.trace {
                engine = engine.with_trace(trace);
            }
            let accept = engine.holds(&GroundTerm::pred("accept"))?;
            Ok(Decision { accept, steps: engine.steps() })
        }),
    }
}

/// Runs `prog` on the encoding of `w`.
pub fn decide(prog: &Program, w: &str, cfg: &EngineConfig) -> Result<Decision> {
    decide_traced(prog, w, cfg, &mut |_| {})
}

pub fn decide_traced(
    prog: &Program,
    w: &str,
    cfg: &EngineConfig,
    trace: &mut (dyn FnMut(String) + Send),
) -> Result<Decision> {
    let merged = merge(prog, &encode_input(w)?)?;
    let tp = check(&merged)?;
    accepts(&tp, cfg, trace)
}

/// Every closed goal whose arguments all have order at most 1, paired
/// with its truth in `interp`.
pub fn low_order_goals(
    tp: &TypedProgram,
    interp: &Interpretation,
    cap: u64,
) -> Result<Vec<(Goal, bool)>> {
    let mut cache = DomainCache::new(tp.universe.len(), cap);
    let mut out = Vec::new();
    for (p, ty) in &tp.program.signatures {
        let args = ty.args();
        if args.iter().any(|a| a.order() > 1) {
            continue;
        }
        let mut choices: Vec<Vec<(SemValue, GroundTerm)>> = Vec::new();
        for a in &args {
            let dom = cache.get(a)?;
            choices.push(
                dom.elements
                    .iter()
                    .map(|v| (v.clone(), to_ground(v, &tp.universe)))
                    .collect(),
            );
        }
        let mut idx = vec![0usize; args.len()];
        'outer: loop {
            let mut value = interp[p].clone();
            let mut goal_args = Vec::with_capacity(args.len());
            for (k, c) in idx.iter().zip(&choices) {
                value = value.apply(&c[*k].0);
                goal_args.push(c[*k].1.clone());
            }
            out.push((GroundTerm::pred(p.clone()).apply(goal_args), value.as_bool() == Some(true)));
            for k in 0..idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    Ok(out)
}

fn to_ground(v: &SemValue, universe: &[String]) -> GroundTerm {
    match v {
        SemValue::Ind(i) => GroundTerm::cnst(universe[*i].clone()),
        SemValue::Rel(r) => GroundTerm::Ext(ExtRel::new(
            r.arity(),
            r.tuples().iter().map(|t| {
                t.iter()
                    .map(|c| match c {
                        SemValue::Ind(i) => universe[*i].clone(),
                        other => panic!("relation of order above 1: {other:?}"),
                    })
                    .collect::<Vec<_>>()
            }),
        )),
        SemValue::Bool(_) => unreachable!("no argument has type o"),
    }
}

/// Disagreements between the naive model and the other engines on all
/// low-order closed goals. Seminaive takes part only at order 1.
#[derive(Debug, Clone, Default)]
pub struct Agreement {
    pub goals: usize,
    pub mismatches: Vec<String>,
}

pub fn compare_engines(tp: &TypedProgram, cfg: &EngineConfig) -> Result<Agreement> {
    let naive = least_model_naive(tp, cfg.domain_cap)?;
    let goals = low_order_goals(tp, &naive.interp, cfg.domain_cap)?;
    let semi = if tp.order == 1 {
        Some(least_model_seminaive(tp, cfg.step_budget)?.to_interpretation())
    } else {
        None
    };
    let mut report = Agreement { goals: goals.len(), mismatches: Vec::new() };
    if let Some(s) = &semi {
        if *s != naive.interp {
            report.mismatches.push("seminaive model differs from naive model".to_string());
        }
    }
    with_large_stack(|| -> Result<()> {
        let mut engine = DemandEngine::new(tp, cfg.step_budget);
        for (g, want) in &goals {
            let got = engine.holds(g)?;
            if got != *want {
                report.mismatches.push(format!("{g}: naive {want}, demand {got}"));
            }
        }
        Ok(())
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_and_desugar;

    #[test]
    fn engine_names_round_trip() {
        for k in [EngineKind::Naive, EngineKind::Seminaive, EngineKind::Demand] {
            assert_eq!(k.to_string().parse::<EngineKind>().unwrap(), k);
        }
        assert!("fast".parse::<EngineKind>().is_err());
    }

    #[test]
    fn missing_accept_rejects() {
        let prog = parse_and_desugar("p a.").unwrap();
        for k in [EngineKind::Naive, EngineKind::Seminaive, EngineKind::Demand] {
            assert!(!decide(&prog, "ab", &EngineConfig::with_engine(k)).unwrap().accept);
        }
    }

    #[test]
    fn input_driven_accept() {
        let prog = parse_and_desugar("accept :- (input 0 a J).").unwrap();
        for k in [EngineKind::Naive, EngineKind::Seminaive, EngineKind::Demand] {
            let cfg = EngineConfig::with_engine(k);
            assert!(decide(&prog, "ab", &cfg).unwrap().accept, "{k}");
            assert!(!decide(&prog, "ba", &cfg).unwrap().accept, "{k}");
        }
    }

    #[test]
    fn worked_example_agreement() {
        let tp = check(&parse_and_desugar("p a.\nq R :- (R b).").unwrap()).unwrap();
        let r = compare_engines(&tp, &EngineConfig::default()).unwrap();
        assert_eq!(r.goals, 2 + 4);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    }
}
