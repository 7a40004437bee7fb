//! Semi-naive bottom-up evaluation for first-order programs.
//!
//! Each round joins every rule once per body atom whose relation grew in
//! the previous round, using only the new tuples at that position. Joins
//! use hash indexes keyed by the bound argument positions. Head variables
//! left unbound by the body range over the whole universe.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::ast::Expr;
use crate::error::{Error, Result};
use crate::semantics::{Interpretation, Rel, SemValue};
use crate::typing::TypedProgram;

type Row = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Var(usize),
    Const(u32),
}

#[derive(Debug, Clone)]
enum Lit {
    Atom { pred: usize, args: Vec<Slot> },
    Eq(Slot, Slot),
}

#[derive(Debug, Clone)]
struct Rule {
    head: usize,
    head_args: Vec<Slot>,
    body: Vec<Lit>,
    nvars: usize,
    /// Evaluation order per delta position (`None` = no delta).
    plans: HashMap<Option<usize>, Vec<usize>>,
}

#[derive(Debug, Default)]
struct Relation {
    arity: usize,
    rows: Vec<Row>,
    set: HashSet<Row>,
    indexes: HashMap<u64, HashMap<Row, Vec<usize>>>,
}

fn mask_key(row: &[u32], mask: u64) -> Row {
    row.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, v)| *v)
        .collect()
}

impl Relation {
    fn insert(&mut self, row: Row) -> bool {
        if !self.set.insert(row.clone()) {
            return false;
        }
        let id = self.rows.len();
        for (mask, idx) in self.indexes.iter_mut() {
            idx.entry(mask_key(&row, *mask)).or_default().push(id);
        }
        self.rows.push(row);
        true
    }

    fn ensure_index(&mut self, mask: u64) {
        if self.indexes.contains_key(&mask) {
            return;
        }
        let mut idx: HashMap<Row, Vec<usize>> = HashMap::new();
        for (i, r) in self.rows.iter().enumerate() {
            idx.entry(mask_key(r, mask)).or_default().push(i);
        }
        self.indexes.insert(mask, idx);
    }
}

/// Result of a semi-naive run.
#[derive(Debug, Clone)]
pub struct SeminaiveModel {
    pub universe: Vec<String>,
    pub relations: BTreeMap<String, Vec<Vec<String>>>,
    /// Rounds that produced at least one new tuple.
    pub rounds: usize,
    pub steps: u64,
    arities: BTreeMap<String, usize>,
}

impl SeminaiveModel {
    pub fn holds(&self, pred: &str, args: &[&str]) -> bool {
        self.relations
            .get(pred)
            .is_some_and(|rows| rows.iter().any(|r| r.iter().map(String::as_str).eq(args.iter().copied())))
    }

    /// The same model in the representation of the naive engine.
    pub fn to_interpretation(&self) -> Interpretation {
        let index: HashMap<&str, usize> =
            self.universe.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
        self.arities
            .iter()
            .map(|(p, &arity)| {
                let rows = &self.relations[p];
                let v = if arity == 0 {
                    SemValue::Bool(!rows.is_empty())
                } else {
                    SemValue::Rel(Rel::from_tuples(
                        arity,
                        rows.iter()
                            .map(|r| r.iter().map(|c| SemValue::Ind(index[c.as_str()])).collect()),
                    ))
                };
                (p.clone(), v)
            })
            .collect()
    }
}

struct Compiler<'a> {
    preds: &'a HashMap<String, usize>,
    consts: &'a HashMap<String, u32>,
}

impl Compiler<'_> {
    fn slot(&self, e: &Expr, vars: &mut HashMap<String, usize>) -> Result<Slot> {
        match e {
            Expr::Var(v) => {
                let n = vars.len();
                Ok(Slot::Var(*vars.entry(v.clone()).or_insert(n)))
            }
            Expr::Const(c) => Ok(Slot::Const(self.consts[c])),
            other => Err(Error::Precondition(format!(
                "`{}` is not an individual argument; program is not first-order",
                crate::syntax::expr_flat(other)
            ))),
        }
    }
}

fn plan(rule: &Rule, delta: Option<usize>) -> Vec<usize> {
    let mut bound = vec![false; rule.nvars];
    let mut order = Vec::new();
    let mut left: Vec<usize> = (0..rule.body.len()).collect();
    let is_bound = |s: &Slot, bound: &[bool]| match s {
        Slot::Const(_) => true,
        Slot::Var(v) => bound[*v],
    };
    let mark = |lit: &Lit, bound: &mut [bool]| {
        let slots: Vec<Slot> = match lit {
            Lit::Atom { args, .. } => args.clone(),
            Lit::Eq(a, b) => vec![*a, *b],
        };
        for s in slots {
            if let Slot::Var(v) = s {
                bound[v] = true;
            }
        }
    };
    if let Some(d) = delta {
        order.push(d);
        left.retain(|i| *i != d);
        mark(&rule.body[d], &mut bound);
    }
    while !left.is_empty() {
        // Cheapest next literal: a usable equality, then the atom with the
        // fewest unbound arguments; unbound equalities go last.
        let score = |i: &usize| -> (usize, usize) {
            match &rule.body[*i] {
                Lit::Eq(a, b) if is_bound(a, &bound) || is_bound(b, &bound) => (0, *i),
                Lit::Eq(..) => (usize::MAX, *i),
                Lit::Atom { args, .. } => {
                    (1 + args.iter().filter(|s| !is_bound(s, &bound)).count(), *i)
                }
            }
        };
        let best = *left.iter().min_by_key(|i| score(i)).expect("non-empty");
        left.retain(|i| *i != best);
        mark(&rule.body[best], &mut bound);
        order.push(best);
    }
    order
}

pub struct Seminaive<'p> {
    tp: &'p TypedProgram,
    names: Vec<String>,
    rels: Vec<Relation>,
    rules: Vec<Rule>,
    ulen: u32,
    steps: u64,
    budget: u64,
}

impl<'p> Seminaive<'p> {
    pub fn new(tp: &'p TypedProgram, budget: u64) -> Result<Self> {
        if tp.order > 1 {
            return Err(Error::Precondition(format!(
                "semi-naive evaluation needs a first-order program, this one has order {}",
                tp.order
            )));
        }
        let names: Vec<String> = tp.program.signatures.keys().cloned().collect();
        let preds: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let consts: HashMap<String, u32> =
            tp.universe.iter().enumerate().map(|(i, u)| (u.clone(), i as u32)).collect();
        let rels = tp
            .program
            .signatures
            .values()
            .map(|ty| Relation { arity: ty.arity(), ..Default::default() })
            .collect();
        let comp = Compiler { preds: &preds, consts: &consts };
        let mut rules = Vec::new();
        for c in &tp.program.clauses {
            let mut vars: HashMap<String, usize> = HashMap::new();
            let head_args = c
                .formals
                .iter()
                .map(|f| comp.slot(&Expr::Var(f.name.clone()), &mut vars))
                .collect::<Result<Vec<_>>>()?;
            let mut body = Vec::new();
            for atom in &c.body {
                body.push(match atom {
                    Expr::Eq(a, b) => Lit::Eq(comp.slot(a, &mut vars)?, comp.slot(b, &mut vars)?),
                    other => {
                        let (h, args) = other.spine();
                        let pred = match h {
                            Expr::Pred(p) => comp.preds[p],
                            _ => {
                                return Err(Error::Precondition(format!(
                                    "atom `{}` has no predicate constant at its head",
                                    crate::syntax::expr_flat(other)
                                )))
                            }
                        };
                        let args = args
                            .iter()
                            .map(|a| comp.slot(a, &mut vars))
                            .collect::<Result<Vec<_>>>()?;
                        Lit::Atom { pred, args }
                    }
                });
            }
            let mut rule = Rule {
                head: preds[&c.head],
                head_args,
                body,
                nvars: vars.len(),
                plans: HashMap::new(),
            };
            rule.plans.insert(None, plan(&rule, None));
            for (i, lit) in rule.body.iter().enumerate() {
                if matches!(lit, Lit::Atom { .. }) {
                    rule.plans.insert(Some(i), plan(&rule, Some(i)));
                }
            }
            rules.push(rule);
        }
        Ok(Seminaive {
            tp,
            names,
            rels,
            rules,
            ulen: tp.universe.len() as u32,
            steps: 0,
            budget,
        })
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExhausted { steps: self.budget });
        }
        Ok(())
    }

    pub fn run(mut self, trace: &mut dyn FnMut(String)) -> Result<SeminaiveModel> {
        let mut deltas: Vec<Vec<Row>> = vec![Vec::new(); self.rels.len()];
        let mut rounds = 0;
        let mut first = true;
        loop {
            let mut fresh: Vec<HashSet<Row>> = vec![HashSet::new(); self.rels.len()];
            for ri in 0..self.rules.len() {
                let positions: Vec<Option<usize>> = if first {
                    vec![None]
                } else {
                    self.rules[ri]
                        .body
                        .iter()
                        .enumerate()
                        .filter_map(|(i, l)| match l {
                            Lit::Atom { pred, .. } if !deltas[*pred].is_empty() => Some(Some(i)),
                            _ => None,
                        })
                        .collect()
                };
                for pos in positions {
                    self.eval_rule(ri, pos, &deltas, &mut fresh)?;
                }
            }
            first = false;
            let mut grew = false;
            for (p, rows) in fresh.into_iter().enumerate() {
                let mut added: Vec<Row> = rows.into_iter().filter(|r| !self.rels[p].set.contains(r)).collect();
                added.sort();
                if !added.is_empty() {
                    grew = true;
                    trace(format!("{} -> +{} tuples @{}", self.names[p], added.len(), rounds + 1));
                }
                for r in &added {
                    self.rels[p].insert(r.clone());
                }
                deltas[p] = added;
            }
            if !grew {
                break;
            }
            rounds += 1;
        }
        let universe = self.tp.universe.clone();
        let relations = self
            .names
            .iter()
            .zip(&self.rels)
            .map(|(n, r)| {
                let mut rows: Vec<Vec<String>> = r
                    .rows
                    .iter()
                    .map(|row| row.iter().map(|c| universe[*c as usize].clone()).collect())
                    .collect();
                rows.sort();
                (n.clone(), rows)
            })
            .collect();
        let arities = self.names.iter().zip(&self.rels).map(|(n, r)| (n.clone(), r.arity)).collect();
        Ok(SeminaiveModel { universe, relations, rounds, steps: self.steps, arities })
    }

    fn eval_rule(
        &mut self,
        ri: usize,
        delta: Option<usize>,
        deltas: &[Vec<Row>],
        out: &mut [HashSet<Row>],
    ) -> Result<()> {
        let order = self.rules[ri].plans[&delta].clone();
        for &li in &order {
            if let Lit::Atom { pred, args } = &self.rules[ri].body[li] {
                if Some(li) != delta {
                    let _ = args;
                    let mask = self.static_mask(ri, &order, li);
                    self.rels[*pred].ensure_index(mask);
                }
            }
        }
        let mut env: Vec<Option<u32>> = vec![None; self.rules[ri].nvars];
        self.join(ri, &order, 0, delta, deltas, &mut env, out)
    }

    /// Argument positions of literal `li` bound when it is reached in `order`.
    fn static_mask(&self, ri: usize, order: &[usize], li: usize) -> u64 {
        let rule = &self.rules[ri];
        let mut bound = vec![false; rule.nvars];
        for &k in order {
            if k == li {
                break;
            }
            let slots: Vec<Slot> = match &rule.body[k] {
                Lit::Atom { args, .. } => args.clone(),
                Lit::Eq(a, b) => vec![*a, *b],
            };
            for s in slots {
                if let Slot::Var(v) = s {
                    bound[v] = true;
                }
            }
        }
        match &rule.body[li] {
            Lit::Atom { args, .. } => args.iter().enumerate().fold(0u64, |m, (i, s)| match s {
                Slot::Const(_) => m | (1 << i),
                Slot::Var(v) if bound[*v] => m | (1 << i),
                _ => m,
            }),
            Lit::Eq(..) => 0,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn join(
        &mut self,
        ri: usize,
        order: &[usize],
        depth: usize,
        delta: Option<usize>,
        deltas: &[Vec<Row>],
        env: &mut Vec<Option<u32>>,
        out: &mut [HashSet<Row>],
    ) -> Result<()> {
        self.tick()?;
        if depth == order.len() {
            return self.emit(ri, env, out);
        }
        let li = order[depth];
        let lit = self.rules[ri].body[li].clone();
        let val = |s: &Slot, env: &[Option<u32>]| match s {
            Slot::Const(c) => Some(*c),
            Slot::Var(v) => env[*v],
        };
        match lit {
            Lit::Eq(a, b) => match (val(&a, env), val(&b, env)) {
                (Some(x), Some(y)) => {
                    if x == y {
                        self.join(ri, order, depth + 1, delta, deltas, env, out)?;
                    }
                }
                (Some(x), None) | (None, Some(x)) => {
                    let Slot::Var(v) = (if val(&a, env).is_none() { a } else { b }) else {
                        unreachable!()
                    };
                    env[v] = Some(x);
                    self.join(ri, order, depth + 1, delta, deltas, env, out)?;
                    env[v] = None;
                }
                (None, None) => {
                    let (Slot::Var(va), Slot::Var(vb)) = (a, b) else { unreachable!() };
                    for u in 0..self.ulen {
                        env[va] = Some(u);
                        if env[vb].is_none() || va == vb {
                            env[vb] = Some(u);
                            self.join(ri, order, depth + 1, delta, deltas, env, out)?;
                        }
                        env[vb] = None;
                        env[va] = None;
                    }
                }
            },
            Lit::Atom { pred, args } => {
                let candidates: Vec<Row> = if Some(li) == delta {
                    deltas[pred].clone()
                } else {
                    let mask = args.iter().enumerate().fold(0u64, |m, (i, s)| {
                        if val(s, env).is_some() {
                            m | (1 << i)
                        } else {
                            m
                        }
                    });
                    let key: Row = args.iter().filter_map(|s| val(s, env)).collect();
                    let rel = &mut self.rels[pred];
                    rel.ensure_index(mask);
                    match rel.indexes[&mask].get(&key) {
                        Some(ids) => ids.iter().map(|i| rel.rows[*i].clone()).collect(),
                        None => Vec::new(),
                    }
                };
                for row in candidates {
                    let mut newly = Vec::new();
                    let mut ok = true;
                    for (s, v) in args.iter().zip(&row) {
                        match val(s, env) {
                            Some(x) if x != *v => {
                                ok = false;
                                break;
                            }
                            Some(_) => {}
                            None => {
                                let Slot::Var(var) = s else { unreachable!() };
                                env[*var] = Some(*v);
                                newly.push(*var);
                            }
                        }
                    }
                    if ok {
                        self.join(ri, order, depth + 1, delta, deltas, env, out)?;
                    }
                    for var in newly {
                        env[var] = None;
                    }
                }
            }
        }
        Ok(())
    }

    fn emit(&mut self, ri: usize, env: &mut [Option<u32>], out: &mut [HashSet<Row>]) -> Result<()> {
        let rule = &self.rules[ri];
        let head = rule.head;
        let free: Vec<usize> = {
            let mut seen = Vec::new();
            for s in &rule.head_args {
                if let Slot::Var(v) = s {
                    if env[*v].is_none() && !seen.contains(v) {
                        seen.push(*v);
                    }
                }
            }
            seen
        };
        let head_args = rule.head_args.clone();
        let ulen = self.ulen;
        let mut counters = vec![0u32; free.len()];
        loop {
            for (k, v) in free.iter().enumerate() {
                env[*v] = Some(counters[k]);
            }
            let row: Row = head_args
                .iter()
                .map(|s| match s {
                    Slot::Const(c) => *c,
                    Slot::Var(v) => env[*v].expect("bound"),
                })
                .collect();
            if !self.rels[head].set.contains(&row) {
                out[head].insert(row);
            }
            self.tick()?;
            // Advance the odometer over unbound head variables.
            let mut k = 0;
            loop {
                if k == free.len() {
                    for v in &free {
                        env[*v] = None;
                    }
                    return Ok(());
                }
                counters[k] += 1;
                if counters[k] < ulen {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
        }
    }
}

pub fn least_model_seminaive(tp: &TypedProgram, budget: u64) -> Result<SeminaiveModel> {
    Seminaive::new(tp, budget)?.run(&mut |_| {})
}
