//! Expression evaluation, the immediate consequence operator and the
//! naive least-model computation.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use super::domain::{is_upward_closed, product, Domain, DomainCache};
use super::value::{Rel, SemValue, Tuple};
use crate::ast::{Clause, Expr};
use crate::error::{Error, Result};
use crate::types::Type;
use crate::typing::TypedProgram;

pub type Interpretation = BTreeMap<String, SemValue>;
pub type HState = HashMap<String, SemValue>;

/// Safety limit on naive iterations; the fixpoint is always reached sooner
/// on programs whose domains fit under the cap.
pub const MAX_NAIVE_ITERATIONS: usize = 1_000_000;

/// Products up to this size get an explicit upward-closure check.
const CLOSURE_CHECK_LIMIT: usize = 512;

pub fn bottom_value(ty: &Type) -> SemValue {
    match ty.arity() {
        0 => SemValue::Bool(false),
        n => SemValue::Rel(Rel::empty(n)),
    }
}

pub fn bottom(tp: &TypedProgram) -> Interpretation {
    tp.program
        .signatures
        .iter()
        .map(|(p, ty)| (p.clone(), bottom_value(ty)))
        .collect()
}

/// Pointwise order on interpretations over the same predicates.
pub fn interp_leq(a: &Interpretation, b: &Interpretation) -> bool {
    a.iter().all(|(p, x)| match b.get(p) {
        Some(y) => super::value::value_leq(x, y).unwrap_or(false),
        None => false,
    })
}

/// Name-to-index map for the Herbrand universe.
pub fn universe_index(universe: &[String]) -> HashMap<String, usize> {
    universe.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect()
}

pub fn eval_expr(
    e: &Expr,
    interp: &Interpretation,
    state: &HState,
    consts: &HashMap<String, usize>,
) -> Result<SemValue> {
    match e {
        Expr::Var(v) => state
            .get(v)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("unbound variable `{v}`"))),
        Expr::Const(c) => consts
            .get(c)
            .map(|i| SemValue::Ind(*i))
            .ok_or_else(|| Error::Precondition(format!("`{c}` is not in the universe"))),
        Expr::Pred(p) => interp
            .get(p)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("no value for predicate `{p}`"))),
        Expr::Eq(a, b) => {
            let x = eval_expr(a, interp, state, consts)?;
            let y = eval_expr(b, interp, state, consts)?;
            Ok(SemValue::Bool(x == y))
        }
        Expr::App(..) => {
            let (head, args) = e.spine();
            let f = eval_expr(head, interp, state, consts)?;
            let vals = args
                .iter()
                .map(|a| eval_expr(a, interp, state, consts))
                .collect::<Result<Vec<_>>>()?;
            match &f {
                SemValue::Rel(r) if r.arity() == vals.len() => {
                    Ok(SemValue::Bool(r.contains(&vals)))
                }
                SemValue::Rel(_) => Ok(vals.iter().fold(f, |acc, v| acc.apply(v))),
                other => Err(Error::Precondition(format!("applying non-relation {other:?}"))),
            }
        }
    }
}

fn atom_true(
    e: &Expr,
    interp: &Interpretation,
    state: &HState,
    consts: &HashMap<String, usize>,
) -> Result<bool> {
    match eval_expr(e, interp, state, consts)? {
        SemValue::Bool(b) => Ok(b),
        other => Err(Error::Precondition(format!("body atom evaluated to {other:?}"))),
    }
}

/// Body atoms grouped by the number of local variables that must be bound
/// before they can be checked.
struct PreparedClause<'c> {
    clause: &'c Clause,
    locals: Vec<&'c str>,
    stages: Vec<Vec<&'c Expr>>,
}

impl<'c> PreparedClause<'c> {
    fn new(clause: &'c Clause) -> Self {
        let locals = clause.local_vars();
        let pos: HashMap<&str, usize> = locals.iter().enumerate().map(|(i, v)| (*v, i + 1)).collect();
        let mut stages = vec![Vec::new(); locals.len() + 1];
        for atom in &clause.body {
            let need = atom.vars().iter().filter_map(|v| pos.get(v)).max().copied().unwrap_or(0);
            stages[need].push(atom);
        }
        PreparedClause { clause, locals, stages }
    }

    fn holds(
        &self,
        depth: usize,
        state: &mut HState,
        interp: &Interpretation,
        consts: &HashMap<String, usize>,
        universe_len: usize,
    ) -> Result<bool> {
        for atom in &self.stages[depth] {
            if !atom_true(atom, interp, state, consts)? {
                return Ok(false);
            }
        }
        if depth == self.locals.len() {
            return Ok(true);
        }
        let var = self.locals[depth];
        for u in 0..universe_len {
            state.insert(var.to_string(), SemValue::Ind(u));
            if self.holds(depth + 1, state, interp, consts, universe_len)? {
                state.remove(var);
                return Ok(true);
            }
        }
        state.remove(var);
        Ok(false)
    }
}

/// Shared data for repeated applications of the consequence operator.
pub struct Evaluator<'p> {
    tp: &'p TypedProgram,
    consts: HashMap<String, usize>,
    domains: DomainCache,
    /// Per predicate: argument domains and the product of them.
    points: BTreeMap<String, (Vec<Arc<Domain>>, Vec<Tuple>)>,
    clauses: BTreeMap<String, Vec<PreparedClause<'p>>>,
}

impl<'p> Evaluator<'p> {
    pub fn new(tp: &'p TypedProgram, cap: u64) -> Result<Self> {
        let mut domains = DomainCache::new(tp.universe.len(), cap);
        let mut points = BTreeMap::new();
        for (p, ty) in &tp.program.signatures {
            let doms = ty
                .args()
                .iter()
                .map(|a| domains.get(a))
                .collect::<Result<Vec<_>>>()?;
            let tuples = product(&doms);
            points.insert(p.clone(), (doms, tuples));
        }
        let mut clauses: BTreeMap<String, Vec<PreparedClause>> = BTreeMap::new();
        for c in &tp.program.clauses {
            clauses.entry(c.head.clone()).or_default().push(PreparedClause::new(c));
        }
        Ok(Evaluator { tp, consts: universe_index(&tp.universe), domains, points, clauses })
    }

    pub fn domains(&mut self) -> &mut DomainCache {
        &mut self.domains
    }

    pub fn consts(&self) -> &HashMap<String, usize> {
        &self.consts
    }

    /// One application of the immediate consequence operator.
    pub fn step(&self, interp: &Interpretation) -> Result<Interpretation> {
        let mut out = Interpretation::new();
        let ulen = self.tp.universe.len();
        for (p, ty) in &self.tp.program.signatures {
            let (doms, tuples) = &self.points[p];
            let clauses = self.clauses.get(p).map(Vec::as_slice).unwrap_or(&[]);
            let mut state = HState::new();
            let mut holds_at = |t: &Tuple| -> Result<bool> {
                for pc in clauses {
                    state.clear();
                    for (f, v) in pc.clause.formal_names().zip(t) {
                        state.insert(f.to_string(), v.clone());
                    }
                    if pc.holds(0, &mut state, interp, &self.consts, ulen)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            };
            let value = if ty.arity() == 0 {
                SemValue::Bool(holds_at(&Vec::new())?)
            } else {
                let mut true_set = Vec::new();
                for t in tuples {
                    if holds_at(t)? {
                        true_set.push(t.clone());
                    }
                }
                let rel = Rel::from_tuples(ty.arity(), true_set);
                if tuples.len() <= CLOSURE_CHECK_LIMIT {
                    assert!(is_upward_closed(&rel, doms), "non-monotone result for `{p}`");
                }
                SemValue::Rel(rel)
            };
            out.insert(p.clone(), value);
        }
        Ok(out)
    }
}

pub fn tp_step(tp: &TypedProgram, interp: &Interpretation, cap: u64) -> Result<Interpretation> {
    Evaluator::new(tp, cap)?.step(interp)
}

#[derive(Debug, Clone)]
pub struct NaiveModel {
    pub interp: Interpretation,
    /// Applications of the operator that changed the interpretation.
    pub iterations: usize,
}

pub fn least_model_naive(tp: &TypedProgram, cap: u64) -> Result<NaiveModel> {
    least_model_naive_traced(tp, cap, &mut |_| {})
}

/// Like [`least_model_naive`], reporting each changed predicate as
/// `pred -> value @iteration`.
pub fn least_model_naive_traced(
    tp: &TypedProgram,
    cap: u64,
    trace: &mut dyn FnMut(String),
) -> Result<NaiveModel> {
    let ev = Evaluator::new(tp, cap)?;
    let mut interp = bottom(tp);
    let mut iterations = 0;
    loop {
        let next = ev.step(&interp)?;
        if next == interp {
            return Ok(NaiveModel { interp, iterations });
        }
        iterations += 1;
        if iterations > MAX_NAIVE_ITERATIONS {
            return Err(Error::IterationCap(MAX_NAIVE_ITERATIONS));
        }
        for (p, v) in &next {
            if interp.get(p) != Some(v) {
                trace(format!("{p} -> {} @{iterations}", render_value(v, &tp.universe)));
            }
        }
        interp = next;
    }
}

/// Whether `interp` is a fixpoint of the operator.
pub fn is_fixpoint(tp: &TypedProgram, interp: &Interpretation, cap: u64) -> Result<bool> {
    Ok(tp_step(tp, interp, cap)? == *interp)
}

fn render_component(v: &SemValue, universe: &[String]) -> String {
    match v {
        SemValue::Ind(i) => universe.get(*i).cloned().unwrap_or_else(|| format!("#{i}")),
        SemValue::Bool(b) => b.to_string(),
        SemValue::Rel(r) => {
            let inner: Vec<String> = r.tuples().iter().map(|t| render_tuple(t, universe)).collect();
            format!("{{{}}}", inner.join(","))
        }
    }
}

fn render_tuple(t: &[SemValue], universe: &[String]) -> String {
    if t.len() == 1 {
        render_component(&t[0], universe)
    } else {
        let parts: Vec<String> = t.iter().map(|c| render_component(c, universe)).collect();
        format!("({})", parts.join(","))
    }
}

/// Right-hand side of a dump line.
pub fn render_value(v: &SemValue, universe: &[String]) -> String {
    match v {
        SemValue::Rel(r) if r.is_empty() => "{ }".to_string(),
        SemValue::Rel(r) => {
            let tuples: Vec<String> = r.tuples().iter().map(|t| render_tuple(t, universe)).collect();
            format!("{{ {} }}", tuples.join(" ; "))
        }
        other => render_component(other, universe),
    }
}

/// One `pred = { tuple ; ... }` line per predicate, sorted by name.
pub fn dump_model(interp: &Interpretation, universe: &[String]) -> String {
    interp
        .iter()
        .map(|(p, v)| format!("{p} = {}\n", render_value(v, universe)))
        .collect()
}

/// Herbrand universe of the program, in first-occurrence order.
pub fn herbrand_universe(tp: &TypedProgram) -> Vec<String> {
    tp.universe.clone()
}

/// Predicates that take no predicate arguments of order above 1.
pub fn low_order_predicates(tp: &TypedProgram) -> HashSet<String> {
    tp.program
        .signatures
        .iter()
        .filter(|(_, ty)| ty.args().iter().all(|a| a.order() <= 1))
        .map(|(p, _)| p.clone())
        .collect()
}
