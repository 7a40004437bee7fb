//! Demand-driven tabled evaluation.
//!
//! A call is a predicate (or extensional relation) applied to arguments
//! that are either closed terms or open individual positions. Every
//! distinct call gets a table of answer tuples for its open positions.
//! Tables start empty and only grow; a table is recomputed whenever one
//! it read from grows, so the final state is the least fixpoint over the
//! calls that were actually reached. Closures are kept syntactically:
//! `(pred_1 N)` applied to `X V` is the call `pred_1 N X V`.

use std::collections::{HashMap, HashSet, VecDeque};

use super::goal::{ExtRel, GroundTerm};
use crate::ast::Expr;
use crate::error::{Error, Result};
use crate::typing::TypedProgram;

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

/// Tables deeper than this are queued instead of evaluated in place.
const MAX_NESTING: usize = 200;

type TermId = u32;
type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Head {
    Pred(u32),
    Ext(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Term {
    Ind(u32),
    Clo(Head, Vec<TermId>),
}

#[derive(Debug, Clone)]
enum CExpr {
    Var(usize),
    Term(TermId),
    Pred(u32),
    App(Box<CExpr>, Vec<CExpr>),
}

#[derive(Debug, Clone)]
enum CAtom {
    Eq(CExpr, CExpr),
    Call(CExpr, Vec<CExpr>),
}

#[derive(Debug, Clone)]
struct CClause {
    /// Variable slot of each formal.
    formals: Vec<usize>,
    nvars: usize,
    body: Vec<CAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CallKey {
    head: Head,
    args: Vec<Option<TermId>>,
}

#[derive(Debug, Default)]
struct Table {
    answers: Vec<Vec<TermId>>,
    seen: HashSet<Vec<TermId>>,
    dependents: HashSet<NodeId>,
    evaluated: bool,
    running: bool,
    queued: bool,
}

/// A tabled evaluator over one program. Tables persist across queries.
pub struct DemandEngine<'p> {
    tp: &'p TypedProgram,
    pred_names: Vec<String>,
    pred_index: HashMap<String, u32>,
    clauses: Vec<Vec<CClause>>,
    exts: Vec<Vec<Vec<TermId>>>,
    ext_index: HashMap<ExtRel, u32>,
    terms: Vec<Term>,
    term_index: HashMap<Term, TermId>,
    /// Names of individuals; the first `ulen` are the Herbrand universe.
    ind_names: Vec<String>,
    ind_index: HashMap<String, u32>,
    ulen: u32,
    keys: Vec<CallKey>,
    tables: Vec<Table>,
    node_index: HashMap<CallKey, NodeId>,
    worklist: VecDeque<NodeId>,
    depth: usize,
    steps: u64,
    budget: u64,
    passes: u64,
    trace: Option<Box<dyn FnMut(String) + 'p>>,
}

impl<'p> DemandEngine<'p> {
    pub fn new(tp: &'p TypedProgram, budget: u64) -> DemandEngine<'p> {
        let pred_names: Vec<String> = tp.program.signatures.keys().cloned().collect();
        let pred_index = pred_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        let mut eng = DemandEngine {
            tp,
            pred_names,
            pred_index,
            clauses: Vec::new(),
            exts: Vec::new(),
            ext_index: HashMap::new(),
            terms: Vec::new(),
            term_index: HashMap::new(),
            ind_names: Vec::new(),
            ind_index: HashMap::new(),
            ulen: tp.universe.len() as u32,
            keys: Vec::new(),
            tables: Vec::new(),
            node_index: HashMap::new(),
            worklist: VecDeque::new(),
            depth: 0,
            steps: 0,
            budget,
            passes: 0,
            trace: None,
        };
        for u in &tp.universe {
            eng.individual(u);
        }
        let mut clauses = vec![Vec::new(); eng.pred_names.len()];
        for c in &tp.program.clauses {
            let p = eng.pred_index[&c.head] as usize;
            let compiled = eng.compile_clause(c);
            clauses[p].push(compiled);
        }
        eng.clauses = clauses;
        eng
    }

    /// Reports every new answer as `atom -> true @pass`.
    pub fn with_trace(mut self, trace: impl FnMut(String) + 'p) -> Self {
        self.trace = Some(Box::new(trace));
        self
    }

    /// Resolution steps spent so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn table_count(&self) -> usize {
        self.tables.len()
    }

    fn individual(&mut self, name: &str) -> TermId {
        if let Some(i) = self.ind_index.get(name) {
            return self.intern(Term::Ind(*i));
        }
        let i = self.ind_names.len() as u32;
        self.ind_names.push(name.to_string());
        self.ind_index.insert(name.to_string(), i);
        self.intern(Term::Ind(i))
    }

    fn intern(&mut self, t: Term) -> TermId {
        if let Some(id) = self.term_index.get(&t) {
            return *id;
        }
        let id = self.terms.len() as TermId;
        self.terms.push(t.clone());
        self.term_index.insert(t, id);
        id
    }

    fn compile_clause(&mut self, c: &crate::ast::Clause) -> CClause {
        let mut vars: HashMap<String, usize> = HashMap::new();
        let formals = c
            .formals
            .iter()
            .map(|f| {
                let n = vars.len();
                *vars.entry(f.name.clone()).or_insert(n)
            })
            .collect();
        let body = c
            .body
            .iter()
            .map(|a| match a {
                Expr::Eq(l, r) => CAtom::Eq(self.compile_expr(l, &mut vars), self.compile_expr(r, &mut vars)),
                other => {
                    let (h, args) = other.spine();
                    let head = self.compile_expr(h, &mut vars);
                    let args = args.iter().map(|a| self.compile_expr(a, &mut vars)).collect();
                    CAtom::Call(head, args)
                }
            })
            .collect();
        CClause { formals, nvars: vars.len(), body }
    }

    fn compile_expr(&mut self, e: &Expr, vars: &mut HashMap<String, usize>) -> CExpr {
        match e {
            Expr::Var(v) => {
                let n = vars.len();
                CExpr::Var(*vars.entry(v.clone()).or_insert(n))
            }
            Expr::Const(c) => CExpr::Term(self.individual(c)),
            Expr::Pred(p) => CExpr::Pred(self.pred_index[p]),
            Expr::App(..) => {
                let (h, args) = e.spine();
                let head = self.compile_expr(h, vars);
                let args = args.iter().map(|a| self.compile_expr(a, vars)).collect();
                CExpr::App(Box::new(head), args)
            }
            Expr::Eq(..) => unreachable!("equality inside an argument"),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExhausted { steps: self.budget });
        }
        Ok(())
    }

    fn ground_to_term(&mut self, g: &GroundTerm) -> Result<TermId> {
        match g {
            GroundTerm::Const(c) => Ok(self.individual(c)),
            GroundTerm::Pred(p) => {
                let idx = *self
                    .pred_index
                    .get(p)
                    .ok_or_else(|| Error::Precondition(format!("unknown predicate `{p}`")))?;
                Ok(self.intern(Term::Clo(Head::Pred(idx), Vec::new())))
            }
            GroundTerm::Ext(rel) => {
                let id = match self.ext_index.get(rel) {
                    Some(id) => *id,
                    None => {
                        let tuples = rel
                            .tuples
                            .iter()
                            .map(|t| t.iter().map(|c| self.individual(c)).collect())
                            .collect();
                        let id = self.exts.len() as u32;
                        self.exts.push(tuples);
                        self.ext_index.insert(rel.clone(), id);
                        id
                    }
                };
                Ok(self.intern(Term::Clo(Head::Ext(id), Vec::new())))
            }
            GroundTerm::App(h, args) => {
                let head = self.ground_to_term(h)?;
                let mut a = args.iter().map(|x| self.ground_to_term(x)).collect::<Result<Vec<_>>>()?;
                match self.terms[head as usize].clone() {
                    Term::Clo(h, mut pre) => {
                        pre.append(&mut a);
                        Ok(self.intern(Term::Clo(h, pre)))
                    }
                    Term::Ind(_) => Err(Error::Precondition(format!("`{h}` is not a predicate"))),
                }
            }
        }
    }

    fn term_to_ground(&self, t: TermId) -> GroundTerm {
        match &self.terms[t as usize] {
            Term::Ind(i) => GroundTerm::Const(self.ind_names[*i as usize].clone()),
            Term::Clo(h, args) => {
                let head = match h {
                    Head::Pred(p) => GroundTerm::Pred(self.pred_names[*p as usize].clone()),
                    Head::Ext(e) => GroundTerm::Ext(
                        self.ext_index.iter().find(|(_, v)| **v == *e).map(|(k, _)| k.clone()).expect("ext"),
                    ),
                };
                head.apply(args.iter().map(|a| self.term_to_ground(*a)))
            }
        }
    }

    /// Truth of a closed goal of type `o`.
    pub fn holds(&mut self, goal: &GroundTerm) -> Result<bool> {
        let (head, args) = match goal {
            GroundTerm::App(h, a) => ((**h).clone(), a.clone()),
            other => (other.clone(), Vec::new()),
        };
        let args: Vec<Option<GroundTerm>> = args.into_iter().map(Some).collect();
        Ok(!self.answers(&head, &args)?.is_empty())
    }

    /// Values of the open positions for which `head args` is true, sorted.
    pub fn answers(
        &mut self,
        head: &GroundTerm,
        args: &[Option<GroundTerm>],
    ) -> Result<Vec<Vec<GroundTerm>>> {
        let h = self.ground_to_term(head)?;
        let Term::Clo(head, pre) = self.terms[h as usize].clone() else {
            return Err(Error::Precondition("goal head is an individual".into()));
        };
        let mut key_args: Vec<Option<TermId>> = pre.into_iter().map(Some).collect();
        for a in args {
            key_args.push(match a {
                Some(g) => Some(self.ground_to_term(g)?),
                None => None,
            });
        }
        self.check_arity(head, key_args.len())?;
        let key = CallKey { head, args: key_args };
        let node = self.node_for(key);
        if !self.tables[node].evaluated {
            self.evaluate(node)?;
        }
        self.drain()?;
        let mut out: Vec<Vec<GroundTerm>> = self.tables[node]
            .answers
            .iter()
            .map(|t| t.iter().map(|x| self.term_to_ground(*x)).collect())
            .collect();
        out.sort_by_key(|t| t.iter().map(ToString::to_string).collect::<Vec<_>>());
        Ok(out)
    }

    fn check_arity(&self, head: Head, n: usize) -> Result<()> {
        let expected = match head {
            Head::Pred(p) => self.tp.program.signatures[&self.pred_names[p as usize]].arity(),
            Head::Ext(e) => self.exts[e as usize].first().map_or(n, Vec::len),
        };
        if expected != n {
            return Err(Error::Precondition(format!(
                "goal supplies {n} argument(s), predicate takes {expected}"
            )));
        }
        Ok(())
    }

    fn node_for(&mut self, key: CallKey) -> NodeId {
        if let Some(n) = self.node_index.get(&key) {
            return *n;
        }
        let n = self.tables.len();
        self.tables.push(Table::default());
        self.keys.push(key.clone());
        self.node_index.insert(key, n);
        n
    }

    fn drain(&mut self) -> Result<()> {
        while let Some(n) = self.worklist.pop_front() {
            self.tables[n].queued = false;
            self.evaluate(n)?;
        }
        Ok(())
    }

    fn schedule(&mut self, n: NodeId) {
        if !self.tables[n].queued {
            self.tables[n].queued = true;
            self.worklist.push_back(n);
        }
    }

    /// Recomputes one table from the current state of the others.
    fn evaluate(&mut self, node: NodeId) -> Result<()> {
        if self.tables[node].running {
            self.schedule(node);
            return Ok(());
        }
        self.tables[node].running = true;
        self.tables[node].evaluated = true;
        self.passes += 1;
        self.depth += 1;
        let key = self.keys[node].clone();
        let mut found: Vec<Vec<TermId>> = Vec::new();
        let result = match key.head {
            Head::Ext(e) => {
                for t in &self.exts[e as usize] {
                    if key.args.iter().zip(t).all(|(k, v)| k.is_none_or(|k| k == *v)) {
                        found.push(
                            key.args.iter().zip(t).filter(|(k, _)| k.is_none()).map(|(_, v)| *v).collect(),
                        );
                    }
                }
                Ok(())
            }
            Head::Pred(p) => {
                let mut r = Ok(());
                for ci in 0..self.clauses[p as usize].len() {
                    let clause = self.clauses[p as usize][ci].clone();
                    let mut env: Vec<Option<TermId>> = vec![None; clause.nvars];
                    for (slot, a) in clause.formals.iter().zip(&key.args) {
                        env[*slot] = *a;
                    }
                    r = self.solve(node, &key, &clause, 0, &mut env, &mut found);
                    if r.is_err() {
                        break;
                    }
                }
                r
            }
        };
        self.depth -= 1;
        self.tables[node].running = false;
        result?;
        let mut grew = false;
        for t in found {
            if self.tables[node].seen.insert(t.clone()) {
                if self.trace.is_some() {
                    let line = format!("{} -> true @{}", self.render_atom(&key, &t), self.passes);
                    if let Some(sink) = self.trace.as_mut() {
                        sink(line);
                    }
                }
                self.tables[node].answers.push(t);
                grew = true;
            }
        }
        if grew {
            let deps: Vec<NodeId> = self.tables[node].dependents.iter().copied().collect();
            for d in deps {
                self.schedule(d);
            }
        }
        Ok(())
    }

    fn render_atom(&self, key: &CallKey, answer: &[TermId]) -> String {
        let mut free = answer.iter();
        let head = match key.head {
            Head::Pred(p) => GroundTerm::Pred(self.pred_names[p as usize].clone()),
            Head::Ext(e) => GroundTerm::Ext(
                self.ext_index.iter().find(|(_, v)| **v == e).map(|(k, _)| k.clone()).expect("ext"),
            ),
        };
        head.apply(key.args.iter().map(|a| {
            let id = a.unwrap_or_else(|| *free.next().expect("answer width"));
            self.term_to_ground(id)
        }))
        .to_string()
    }

    fn value(&self, e: &CExpr, env: &[Option<TermId>]) -> Option<TermId> {
        match e {
            CExpr::Var(v) => env[*v],
            CExpr::Term(t) => Some(*t),
            _ => None,
        }
    }

    fn unbound_in(&self, e: &CExpr, env: &[Option<TermId>], out: &mut Vec<usize>) {
        match e {
            CExpr::Var(v) if env[*v].is_none() && !out.contains(v) => out.push(*v),
            CExpr::App(h, args) => {
                self.unbound_in(h, env, out);
                for a in args {
                    self.unbound_in(a, env, out);
                }
            }
            _ => {}
        }
    }

    fn build(&mut self, e: &CExpr, env: &[Option<TermId>]) -> Result<TermId> {
        match e {
            CExpr::Var(v) => Ok(env[*v].expect("bound variable")),
            CExpr::Term(t) => Ok(*t),
            CExpr::Pred(p) => Ok(self.intern(Term::Clo(Head::Pred(*p), Vec::new()))),
            CExpr::App(h, args) => {
                let head = self.build(h, env)?;
                let mut a = Vec::with_capacity(args.len());
                for x in args {
                    a.push(self.build(x, env)?);
                }
                match self.terms[head as usize].clone() {
                    Term::Clo(h, mut pre) => {
                        pre.extend(a);
                        Ok(self.intern(Term::Clo(h, pre)))
                    }
                    Term::Ind(_) => Err(Error::Precondition("individual applied to arguments".into())),
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn solve(
        &mut self,
        node: NodeId,
        key: &CallKey,
        clause: &CClause,
        i: usize,
        env: &mut Vec<Option<TermId>>,
        found: &mut Vec<Vec<TermId>>,
    ) -> Result<()> {
        self.tick()?;
        if i == clause.body.len() {
            return self.emit(key, clause, env, found);
        }
        match &clause.body[i] {
            CAtom::Eq(l, r) => match (self.value(l, env), self.value(r, env)) {
                (Some(x), Some(y)) => {
                    if x == y {
                        self.solve(node, key, clause, i + 1, env, found)?;
                    }
                }
                (Some(x), None) | (None, Some(x)) => {
                    let CExpr::Var(v) = (if self.value(l, env).is_none() { l } else { r }) else {
                        unreachable!()
                    };
                    env[*v] = Some(x);
                    self.solve(node, key, clause, i + 1, env, found)?;
                    env[*v] = None;
                }
                (None, None) => {
                    let (CExpr::Var(a), CExpr::Var(b)) = (l, r) else { unreachable!() };
                    for u in 0..self.ulen {
                        let t = self.intern(Term::Ind(u));
                        env[*a] = Some(t);
                        env[*b] = Some(t);
                        self.solve(node, key, clause, i + 1, env, found)?;
                    }
                    env[*a] = None;
                    env[*b] = None;
                }
            },
            CAtom::Call(head, args) => {
                // Individual variables nested inside closure arguments are
                // instantiated over the universe before the call.
                let mut nested = Vec::new();
                for a in args.iter().chain(std::iter::once(head)) {
                    if matches!(a, CExpr::App(..)) {
                        self.unbound_in(a, env, &mut nested);
                    }
                }
                if let Some(v) = nested.first().copied() {
                    for u in 0..self.ulen {
                        env[v] = Some(self.intern(Term::Ind(u)));
                        self.solve(node, key, clause, i, env, found)?;
                    }
                    env[v] = None;
                    return Ok(());
                }
                let h = self.build(head, env)?;
                let Term::Clo(callee, pre) = self.terms[h as usize].clone() else {
                    return Err(Error::Precondition("atom head is not a predicate".into()));
                };
                let mut call_args: Vec<Option<TermId>> = pre.into_iter().map(Some).collect();
                let mut open: Vec<usize> = Vec::new();
                for a in args {
                    match a {
                        CExpr::Var(v) if env[*v].is_none() => {
                            call_args.push(None);
                            open.push(*v);
                        }
                        other => call_args.push(Some(self.build(other, env)?)),
                    }
                }
                let sub = self.node_for(CallKey { head: callee, args: call_args });
                self.tables[sub].dependents.insert(node);
                if !self.tables[sub].evaluated {
                    if self.depth < MAX_NESTING {
                        self.evaluate(sub)?;
                    } else {
                        self.tables[sub].evaluated = true;
                        self.schedule(sub);
                    }
                }
                let count = self.tables[sub].answers.len();
                for ai in 0..count {
                    let ans = self.tables[sub].answers[ai].clone();
                    let mut bound = Vec::new();
                    let mut ok = true;
                    for (v, x) in open.iter().zip(&ans) {
                        match env[*v] {
                            Some(y) if y != *x => {
                                ok = false;
                                break;
                            }
                            Some(_) => {}
                            None => {
                                env[*v] = Some(*x);
                                bound.push(*v);
                            }
                        }
                    }
                    if ok {
                        self.solve(node, key, clause, i + 1, env, found)?;
                    }
                    for v in bound {
                        env[v] = None;
                    }
                }
            }
        }
        Ok(())
    }

    fn emit(
        &mut self,
        key: &CallKey,
        clause: &CClause,
        env: &mut [Option<TermId>],
        found: &mut Vec<Vec<TermId>>,
    ) -> Result<()> {
        let open: Vec<usize> = clause
            .formals
            .iter()
            .zip(&key.args)
            .filter(|(_, a)| a.is_none())
            .map(|(s, _)| *s)
            .collect();
        let unbound: Vec<usize> = {
            let mut u: Vec<usize> = open.iter().copied().filter(|s| env[*s].is_none()).collect();
            u.dedup();
            u
        };
        if let Some(&v) = unbound.first() {
            for x in 0..self.ulen {
                env[v] = Some(self.intern(Term::Ind(x)));
                self.emit(key, clause, env, found)?;
            }
            env[v] = None;
            return Ok(());
        }
        found.push(open.iter().map(|s| env[*s].expect("bound")).collect());
        Ok(())
    }
}

/// Decides one closed goal with a fresh engine, on a large stack.
pub fn solve_demand(tp: &TypedProgram, goal: &GroundTerm, budget: u64) -> Result<bool> {
    with_large_stack(|| DemandEngine::new(tp, budget).holds(goal))
}

/// Runs `f` on a thread with a stack big enough for deep table nesting.
pub fn with_large_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(1 << 29)
            .spawn_scoped(s, f)
            .expect("spawn evaluation thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}
