//! Monomorphic type inference and the definitional-clause checks.
//!
//! Every lowercase symbol gets one type for the whole program. After
//! unification, symbols of type `i` are individual constants and all
//! others are predicate constants; `Expr::Const`/`Expr::Pred` tags from
//! desugaring are rewritten accordingly. Unconstrained argument positions
//! default to `i`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::ast::{is_numeral, Clause, Expr, Program, Span, DESIGNATED_CONSTANT};
use crate::diag::{Code, Diagnostic};
use crate::error::{Error, Result};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeReport {
    /// Every predicate constant with its resolved type.
    pub signatures: BTreeMap<String, Type>,
    /// Individual constants in first-occurrence order.
    pub constants: Vec<String>,
    /// Per clause: formals and body variables with their types.
    pub clause_vars: Vec<BTreeMap<String, Type>>,
    pub program_order: usize,
    /// Type clashes found during inference (E101).
    pub violations: Vec<Diagnostic>,
}

impl TypeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A program that passed inference and the definitional checks.
#[derive(Debug, Clone)]
pub struct TypedProgram {
    /// Expressions tagged by resolved sort; `signatures` holds every predicate.
    pub program: Program,
    pub var_types: Vec<BTreeMap<String, Type>>,
    /// The Herbrand universe.
    pub universe: Vec<String>,
    pub order: usize,
}

impl TypedProgram {
    pub fn signature(&self, pred: &str) -> Option<&Type> {
        self.program.signatures.get(pred)
    }
}

const ARG: u8 = 1;
const PRED: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    Var(usize),
    Iota,
    Omicron,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn from_type(t: &Type) -> Ty {
        match t {
            Type::Iota => Ty::Iota,
            Type::Omicron => Ty::Omicron,
            Type::Arrow(a, r) => Ty::Arrow(Box::new(Ty::from_type(a)), Box::new(Ty::from_type(r))),
        }
    }
}

#[derive(Default)]
struct Unifier {
    bindings: Vec<Option<Ty>>,
    kinds: Vec<u8>,
}

impl Unifier {
    fn fresh(&mut self, kind: u8) -> Ty {
        self.bindings.push(None);
        self.kinds.push(kind);
        Ty::Var(self.bindings.len() - 1)
    }

    fn shallow(&self, t: &Ty) -> Ty {
        let mut cur = t.clone();
        while let Ty::Var(v) = cur {
            match &self.bindings[v] {
                Some(b) => cur = b.clone(),
                None => return Ty::Var(v),
            }
        }
        cur
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Var(w) => v == w,
            Ty::Arrow(a, r) => self.occurs(v, &a) || self.occurs(v, &r),
            _ => false,
        }
    }

    fn constrain(&mut self, t: &Ty, kind: u8) -> Result<(), ()> {
        match self.shallow(t) {
            Ty::Var(v) => {
                self.kinds[v] |= kind;
                Ok(())
            }
            Ty::Omicron if kind & ARG != 0 => Err(()),
            Ty::Iota if kind & PRED != 0 => Err(()),
            _ => Ok(()),
        }
    }

    fn arrow(&mut self, arg: Ty, result: Ty) -> Result<Ty, ()> {
        self.constrain(&arg, ARG)?;
        self.constrain(&result, PRED)?;
        Ok(Ty::Arrow(Box::new(arg), Box::new(result)))
    }

    fn bind(&mut self, v: usize, t: Ty) -> Result<(), ()> {
        if self.occurs(v, &t) {
            return Err(());
        }
        let kind = self.kinds[v];
        self.constrain(&t, kind)?;
        self.bindings[v] = Some(t);
        Ok(())
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), ()> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (a, b) {
            (Ty::Var(x), Ty::Var(y)) if x == y => Ok(()),
            (Ty::Var(x), t) | (t, Ty::Var(x)) => self.bind(x, t),
            (Ty::Iota, Ty::Iota) | (Ty::Omicron, Ty::Omicron) => Ok(()),
            (Ty::Arrow(a1, r1), Ty::Arrow(a2, r2)) => {
                self.unify(&a1, &a2)?;
                self.unify(&r1, &r2)
            }
            _ => Err(()),
        }
    }

    /// Resolves fully, binding leftover variables to their defaults.
    fn finish(&mut self, t: &Ty) -> Type {
        match self.shallow(t) {
            Ty::Var(v) => {
                let kind = self.kinds[v];
                let default = if kind & PRED != 0 && kind & ARG != 0 {
                    Ty::Arrow(Box::new(Ty::Iota), Box::new(Ty::Omicron))
                } else if kind & PRED != 0 {
                    Ty::Omicron
                } else {
                    Ty::Iota
                };
                self.bindings[v] = Some(default.clone());
                self.finish(&default)
            }
            Ty::Iota => Type::Iota,
            Ty::Omicron => Type::Omicron,
            Ty::Arrow(a, r) => Type::arrow(self.finish(&a), self.finish(&r)),
        }
    }

    /// Human-readable rendering without committing defaults.
    fn show(&self, t: &Ty) -> String {
        match self.shallow(t) {
            Ty::Var(v) => format!("?{v}"),
            Ty::Iota => "i".into(),
            Ty::Omicron => "o".into(),
            Ty::Arrow(a, r) => {
                let a_s = self.show(&a);
                let a_s = if matches!(self.shallow(&a), Ty::Arrow(..)) {
                    format!("({a_s})")
                } else {
                    a_s
                };
                format!("{a_s} -> {}", self.show(&r))
            }
        }
    }
}

struct Inference<'p> {
    u: Unifier,
    symbols: HashMap<String, Ty>,
    symbol_order: Vec<String>,
    violations: Vec<Diagnostic>,
    prog: &'p Program,
}

impl<'p> Inference<'p> {
    fn symbol(&mut self, name: &str) -> Ty {
        if is_numeral(name) {
            return Ty::Iota;
        }
        if let Some(t) = self.symbols.get(name) {
            return t.clone();
        }
        let t = self.u.fresh(0);
        self.symbols.insert(name.to_string(), t.clone());
        self.symbol_order.push(name.to_string());
        t
    }

    fn clash(&mut self, span: Option<Span>, what: &str, expected: &Ty, found: &Ty) {
        let msg = format!(
            "type clash in {what}: expected {}, found {}",
            self.u.show(expected),
            self.u.show(found)
        );
        self.violations.push(Diagnostic::new(Code::E101, msg, span));
    }

    fn unify_or_report(&mut self, span: Option<Span>, what: &str, expected: &Ty, found: &Ty) {
        if self.u.unify(expected, found).is_err() {
            self.clash(span, what, expected, found);
        }
    }

    fn infer(&mut self, e: &Expr, vars: &mut HashMap<String, Ty>, span: Option<Span>) -> Ty {
        match e {
            Expr::Var(v) => {
                if let Some(t) = vars.get(v) {
                    return t.clone();
                }
                let t = self.u.fresh(ARG);
                vars.insert(v.clone(), t.clone());
                t
            }
            Expr::Const(c) | Expr::Pred(c) => self.symbol(c),
            Expr::App(f, a) => {
                let tf = self.infer(f, vars, span);
                let ta = self.infer(a, vars, span);
                let r = self.u.fresh(PRED);
                match self.u.arrow(ta.clone(), r.clone()) {
                    Ok(expected) => {
                        let what = format!("application `{}`", crate::syntax::expr_flat(e));
                        self.unify_or_report(span, &what, &expected, &tf);
                    }
                    Err(()) => {
                        let what = format!("argument of `{}`", crate::syntax::expr_flat(e));
                        self.clash(span, &what, &Ty::Var(usize::MAX), &ta);
                    }
                }
                r
            }
            Expr::Eq(a, b) => {
                for side in [a, b] {
                    let t = self.infer(side, vars, span);
                    let what = format!("equality operand `{}`", crate::syntax::expr_flat(side));
                    self.unify_or_report(span, &what, &Ty::Iota, &t);
                }
                Ty::Omicron
            }
        }
    }

    fn clause(&mut self, c: &Clause) -> HashMap<String, Ty> {
        let mut vars: HashMap<String, Ty> = HashMap::new();
        let mut arg_tys = Vec::new();
        for f in &c.formals {
            let t = match vars.get(&f.name) {
                Some(t) => t.clone(),
                None => {
                    let t = self.u.fresh(ARG);
                    vars.insert(f.name.clone(), t.clone());
                    t
                }
            };
            if let Some(term) = &f.head_term {
                let tt = self.infer(term, &mut vars, c.span);
                let what = format!("head argument `{}`", crate::syntax::expr_flat(term));
                self.unify_or_report(c.span, &what, &t, &tt);
            }
            arg_tys.push(t);
        }
        let mut head_ty = Ty::Omicron;
        for t in arg_tys.into_iter().rev() {
            head_ty = match self.u.arrow(t.clone(), head_ty) {
                Ok(a) => a,
                Err(()) => {
                    self.clash(c.span, "head argument", &Ty::Var(usize::MAX), &t);
                    Ty::Omicron
                }
            };
        }
        let p = self.symbol(&c.head);
        let what = format!("head of clause for `{}`", c.head);
        self.unify_or_report(c.span, &what, &p, &head_ty);
        for atom in &c.body {
            let t = self.infer(atom, &mut vars, c.span);
            let what = format!("body atom `{}`", crate::syntax::expr_flat(atom));
            self.unify_or_report(c.span, &what, &Ty::Omicron, &t);
        }
        vars
    }
}

pub fn infer_types(prog: &Program) -> TypeReport {
    let mut inf = Inference {
        u: Unifier::default(),
        symbols: HashMap::new(),
        symbol_order: Vec::new(),
        violations: Vec::new(),
        prog,
    };
    for (name, ty) in &prog.signatures {
        let declared = Ty::from_type(ty);
        let t = inf.symbol(name);
        let what = format!("declaration of `{name}`");
        inf.unify_or_report(None, &what, &declared, &t);
    }
    let clause_tvs: Vec<HashMap<String, Ty>> =
        prog.clauses.iter().map(|c| inf.clause(c)).collect();

    let mut resolved: HashMap<String, Type> = HashMap::new();
    for name in inf.symbol_order.clone() {
        let t = inf.symbols[&name].clone();
        resolved.insert(name, inf.u.finish(&t));
    }
    let mut clause_vars = Vec::with_capacity(clause_tvs.len());
    for (c, tvs) in inf.prog.clauses.iter().zip(&clause_tvs) {
        let mut m = BTreeMap::new();
        let order: Vec<&str> = c.formal_names().chain(c.local_vars()).collect();
        for v in order {
            if let Some(t) = tvs.get(v) {
                let ty = inf.u.finish(t);
                m.insert(v.to_string(), ty);
            }
        }
        // Variables that only occur inside head terms.
        let mut rest: Vec<_> = tvs.keys().filter(|k| !m.contains_key(*k)).cloned().collect();
        rest.sort();
        for v in rest {
            let ty = inf.u.finish(&tvs[&v]);
            m.insert(v, ty);
        }
        clause_vars.push(m);
    }

    let signatures: BTreeMap<String, Type> = resolved
        .iter()
        .filter(|(_, t)| t.is_predicate())
        .map(|(n, t)| (n.clone(), t.clone()))
        .collect();

    let mut constants = Vec::new();
    let mut seen = HashSet::new();
    for c in &prog.clauses {
        let exprs = c
            .formals
            .iter()
            .filter_map(|f| f.head_term.as_ref())
            .chain(c.body.iter());
        for e in exprs {
            e.visit(&mut |x| {
                if let Expr::Const(n) | Expr::Pred(n) = x {
                    let is_ind = is_numeral(n) || resolved.get(n).is_some_and(Type::is_iota);
                    if is_ind && seen.insert(n.clone()) {
                        constants.push(n.clone());
                    }
                }
            });
        }
    }

    let mut report = TypeReport {
        signatures,
        constants,
        clause_vars,
        program_order: 0,
        violations: inf.violations,
    };
    report.program_order = classify_order(&report);
    report
}

/// Restrictions of definitional clauses: distinct formals, variable-only
/// predicate-typed head arguments, and body variables limited to formals
/// plus individual variables.
pub fn validate_definitional(prog: &Program, report: &TypeReport) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (i, c) in prog.clauses.iter().enumerate() {
        let mut seen = HashSet::new();
        for f in &c.formals {
            if f.head_term.is_none() && !seen.insert(f.name.as_str()) {
                out.push(Diagnostic::new(
                    Code::E201,
                    format!("formal `{}` is used twice in the head of `{}`", f.name, c.head),
                    c.span,
                ));
            }
        }
        for f in &c.formals {
            if let Some(t) = &f.head_term {
                out.push(Diagnostic::new(
                    Code::E202,
                    format!(
                        "`{}` appears as a predicate-typed argument in the head of `{}`; only variables are allowed",
                        crate::syntax::expr_flat(t),
                        c.head
                    ),
                    c.span,
                ));
            }
        }
        let types = report.clause_vars.get(i);
        for v in c.local_vars() {
            let ty = types.and_then(|m| m.get(v));
            if let Some(ty) = ty.filter(|t| !t.is_iota()) {
                out.push(Diagnostic::new(
                    Code::E203,
                    format!(
                        "variable `{v}` of type {ty} occurs in the body of `{}` but is not a formal",
                        c.head
                    ),
                    c.span,
                ));
            }
        }
    }
    out
}

/// Smallest k with predicate constants of order <= k and predicate
/// variables of order <= k - 1 (at least 1).
pub fn classify_order(report: &TypeReport) -> usize {
    let consts = report.signatures.values().map(Type::order).max().unwrap_or(0);
    let vars = report
        .clause_vars
        .iter()
        .flat_map(|m| m.values())
        .filter(|t| t.is_predicate())
        .map(|t| t.order() + 1)
        .max()
        .unwrap_or(0);
    consts.max(vars).max(1)
}

/// Inference plus validation; on success returns the program with every
/// symbol tagged by its resolved sort and all signatures filled in.
pub fn check(prog: &Program) -> Result<TypedProgram> {
    let report = infer_types(prog);
    let mut diags = report.violations.clone();
    diags.extend(validate_definitional(prog, &report));
    if !diags.is_empty() {
        return Err(Error::Invalid(diags));
    }
    Ok(apply_report(prog, report))
}

fn apply_report(prog: &Program, report: TypeReport) -> TypedProgram {
    let sigs = &report.signatures;
    let retag = |n: &str, _was_pred: bool| {
        if sigs.contains_key(n) {
            Expr::Pred(n.to_string())
        } else {
            Expr::Const(n.to_string())
        }
    };
    let clauses = prog
        .clauses
        .iter()
        .map(|c| Clause {
            head: c.head.clone(),
            formals: c.formals.clone(),
            body: c.body.iter().map(|e| e.map_symbols(&retag)).collect(),
            span: c.span,
        })
        .collect();
    let program = Program {
        signatures: report.signatures.clone(),
        clauses,
        constants: report.constants.clone(),
    };
    let universe = if report.constants.is_empty() {
        vec![DESIGNATED_CONSTANT.to_string()]
    } else {
        report.constants.clone()
    };
    TypedProgram {
        program,
        var_types: report.clause_vars,
        universe,
        order: report.program_order,
    }
}
