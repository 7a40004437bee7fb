//! Program characteristics and the iteration bounds derived from them.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive};

use crate::ast::{is_numeral, Expr, Program};
use crate::error::{Error, Result};
use crate::types::Type;
use crate::typing::TypedProgram;

/// Default size limit for `expk` results, in bits.
pub const DEFAULT_CAP_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProgramStats {
    /// Maximum number of atoms in a rule, head included.
    pub l: usize,
    /// Individual constants, not counting numerals of the `input` relation.
    pub c: usize,
    /// Number of rules.
    pub r: usize,
    /// Number of predicate constants.
    pub p: usize,
    /// Distinct predicate types among predicate constants and variables.
    pub s: usize,
    /// Maximum arity among those types.
    pub t: usize,
}

/// Numerals that occur in clauses defining `input`.
pub fn input_numerals(prog: &Program) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for c in prog.clauses_for("input") {
        let exprs = c
            .formals
            .iter()
            .filter_map(|f| f.head_term.as_ref())
            .chain(c.body.iter());
        for e in exprs {
            e.visit(&mut |x| {
                if let Expr::Const(n) = x {
                    if is_numeral(n) {
                        out.insert(n.clone());
                    }
                }
            });
        }
    }
    out
}

pub fn compute_stats(tp: &TypedProgram) -> ProgramStats {
    let prog = &tp.program;
    let excluded = input_numerals(prog);
    let c = tp.universe.iter().filter(|u| !excluded.contains(*u)).count();
    let l = prog.clauses.iter().map(|c| c.len_atoms()).max().unwrap_or(0);

    let mut types: HashSet<&Type> = prog.signatures.values().collect();
    for vars in &tp.var_types {
        types.extend(vars.values().filter(|t| t.is_predicate()));
    }
    let t = types.iter().map(|ty| ty.arity()).max().unwrap_or(0);
    ProgramStats {
        l,
        c,
        r: prog.clauses.len(),
        p: prog.signatures.len(),
        s: types.len(),
        t,
    }
}

/// Iterated exponential: `expk(0, x) = x`, `expk(k + 1, x) = 2^expk(k, x)`.
pub fn expk(k: u32, x: &BigUint) -> Result<BigUint> {
    expk_capped(k, x, DEFAULT_CAP_BITS)
}

pub fn expk_capped(k: u32, x: &BigUint, cap_bits: u64) -> Result<BigUint> {
    let mut v = x.clone();
    for _ in 0..k {
        let e = v
            .to_u64()
            .filter(|e| *e < cap_bits)
            .ok_or(Error::TooLarge { cap_bits })?;
        v = BigUint::one() << e;
    }
    if v.bits() > cap_bits {
        return Err(Error::TooLarge { cap_bits });
    }
    Ok(v)
}

/// Upper bound on the number of fixpoint iterations for input length `n`
/// at program order `k`.
///
/// `k = 1`: `p * (n + c)^t`; `k >= 2`: `p * expk(k - 1, t^(k - 2) * (n + c)^t)^t`.
pub fn iteration_bound(stats: &ProgramStats, n: usize, k: usize) -> Result<BigUint> {
    iteration_bound_capped(stats, n, k, DEFAULT_CAP_BITS)
}

pub fn iteration_bound_capped(
    stats: &ProgramStats,
    n: usize,
    k: usize,
    cap_bits: u64,
) -> Result<BigUint> {
    assert!(k >= 1, "program order is at least 1");
    let base = BigUint::from(n + stats.c);
    let t = stats.t as u32;
    let p = BigUint::from(stats.p);
    let tuples = Pow::pow(&base, t);
    if k == 1 {
        return Ok(p * tuples);
    }
    let inner = Pow::pow(BigUint::from(stats.t), (k - 2) as u32) * tuples;
    let e = expk_capped((k - 1) as u32, &inner, cap_bits)?;
    let bound = p * Pow::pow(&e, t);
    if bound.bits() > cap_bits {
        return Err(Error::TooLarge { cap_bits });
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_and_desugar;
    use crate::typing::check;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn expk_small_values() {
        assert_eq!(expk(0, &big(5)).unwrap(), big(5));
        assert_eq!(expk(1, &big(3)).unwrap(), big(8));
        assert_eq!(expk(2, &big(2)).unwrap(), big(16));
    }

    #[test]
    fn expk_overflow_is_an_error() {
        assert!(matches!(expk(3, &big(64)), Err(Error::TooLarge { .. })));
        assert!(matches!(expk_capped(1, &big(40), 32), Err(Error::TooLarge { cap_bits: 32 })));
    }

    #[test]
    fn bound_formula_instances() {
        let s = ProgramStats { p: 2, t: 2, c: 3, ..Default::default() };
        assert_eq!(iteration_bound(&s, 0, 1).unwrap(), big(18));
        let s = ProgramStats { p: 1, t: 1, c: 2, ..Default::default() };
        assert_eq!(iteration_bound(&s, 0, 2).unwrap(), big(4));
    }

    #[test]
    fn stats_of_small_second_order_program() {
        let tp = check(&parse_and_desugar("p a.\nq R :- (R b).").unwrap()).unwrap();
        let s = compute_stats(&tp);
        assert_eq!(s, ProgramStats { l: 2, c: 2, r: 2, p: 2, s: 2, t: 1 });
    }

    #[test]
    fn stats_of_empty_program() {
        let tp = check(&Program::default()).unwrap();
        assert_eq!(compute_stats(&tp), ProgramStats { c: 1, ..Default::default() });
    }
}
