//! Finite enumeration of the semantic domain of a type.
//!
//! The elements of a predicate type are the upward-closed subsets of the
//! product of its argument domains. They are generated by walking the
//! product elements from the top down: an element may join the set only
//! when everything above it already has, so every branch yields a valid
//! up-set and nothing is generated twice.

use std::collections::HashMap;
use std::sync::Arc;

use super::value::{tuple_leq, value_leq, Rel, SemValue, Tuple};
use crate::error::{Error, Result};
use crate::types::Type;

pub const DEFAULT_DOMAIN_CAP: u64 = 1 << 16;

/// Order tables are only precomputed up to this many elements.
const LEQ_TABLE_LIMIT: usize = 2048;

/// Largest product of argument domains that is enumerated at all.
const MAX_PRODUCT_POINTS: u64 = 4096;

#[derive(Debug, Clone)]
pub struct Domain {
    pub ty: Type,
    /// Distinct elements in canonical order.
    pub elements: Vec<SemValue>,
    leq_table: Option<Vec<Vec<bool>>>,
}

impl Domain {
    fn new(ty: Type, mut elements: Vec<SemValue>) -> Domain {
        elements.sort();
        elements.dedup();
        let leq_table = (elements.len() <= LEQ_TABLE_LIMIT).then(|| {
            elements
                .iter()
                .map(|x| elements.iter().map(|y| value_leq(x, y).unwrap_or(false)).collect())
                .collect()
        });
        Domain { ty, elements, leq_table }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        match &self.leq_table {
            Some(t) => t[i][j],
            None => value_leq(&self.elements[i], &self.elements[j]).unwrap_or(false),
        }
    }

    pub fn index_of(&self, v: &SemValue) -> Option<usize> {
        self.elements.binary_search(v).ok()
    }
}

/// Memoised domains for one universe size.
#[derive(Debug, Clone)]
pub struct DomainCache {
    pub universe_len: usize,
    pub cap: u64,
    cache: HashMap<Type, Arc<Domain>>,
}

impl DomainCache {
    pub fn new(universe_len: usize, cap: u64) -> DomainCache {
        DomainCache { universe_len, cap, cache: HashMap::new() }
    }

    pub fn get(&mut self, ty: &Type) -> Result<Arc<Domain>> {
        if let Some(d) = self.cache.get(ty) {
            return Ok(d.clone());
        }
        let d = Arc::new(self.build(ty)?);
        self.cache.insert(ty.clone(), d.clone());
        Ok(d)
    }

    fn build(&mut self, ty: &Type) -> Result<Domain> {
        match ty {
            Type::Iota => Ok(Domain::new(
                ty.clone(),
                (0..self.universe_len).map(SemValue::Ind).collect(),
            )),
            Type::Omicron => Ok(Domain::new(
                ty.clone(),
                vec![SemValue::Bool(false), SemValue::Bool(true)],
            )),
            Type::Arrow(..) => {
                let args = ty.args();
                let mut doms = Vec::with_capacity(args.len());
                for a in &args {
                    doms.push(self.get(a)?);
                }
                let elements = upsets(ty, &doms, self.cap)?;
                Ok(Domain::new(ty.clone(), elements))
            }
        }
    }
}

pub fn enumerate_domain(ty: &Type, universe_len: usize, cap: u64) -> Result<Domain> {
    let mut cache = DomainCache::new(universe_len, cap);
    cache.get(ty).map(|d| (*d).clone())
}

/// All tuples of the product, in lexicographic order of element indices.
pub fn product(doms: &[Arc<Domain>]) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = vec![Vec::new()];
    for d in doms {
        let mut next = Vec::with_capacity(out.len() * d.len());
        for t in &out {
            for e in &d.elements {
                let mut t2 = t.clone();
                t2.push(e.clone());
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn too_large(ty: &Type, product_size: Option<u64>, cap: u64) -> Error {
    let predicted = match product_size {
        Some(n) => format!("2^{n}"),
        None => "2^(more than 2^64)".to_string(),
    };
    Error::DomainTooLarge { ty: ty.clone(), predicted, cap }
}

fn upsets(ty: &Type, doms: &[Arc<Domain>], cap: u64) -> Result<Vec<SemValue>> {
    let size = doms
        .iter()
        .try_fold(1u64, |acc, d| acc.checked_mul(d.len() as u64));
    // A product of N points has at least N + 1 up-sets; past a few thousand
    // points the quadratic order scan alone is prohibitive.
    match size {
        Some(n) if n < cap && n <= MAX_PRODUCT_POINTS => {}
        other => return Err(too_large(ty, other, cap)),
    }
    let points = product(doms);
    let n = points.len();
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut down_size = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if tuple_leq(&points[j], &points[i]) {
                down_size[i] += 1;
                if i != j {
                    above[j].push(i);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| down_size[*b].cmp(&down_size[*a]).then(a.cmp(b)));

    let arity = doms.len();
    let mut chosen = vec![false; n];
    let mut out = Vec::new();
    // Depth-first walk over include/exclude decisions.
    #[allow(clippy::too_many_arguments)]
    fn walk(
        depth: usize,
        order: &[usize],
        above: &[Vec<usize>],
        chosen: &mut Vec<bool>,
        points: &[Tuple],
        arity: usize,
        cap: u64,
        out: &mut Vec<SemValue>,
    ) -> bool {
        if depth == order.len() {
            let tuples = (0..points.len()).filter(|i| chosen[*i]).map(|i| points[i].clone());
            out.push(SemValue::Rel(Rel::from_tuples(arity, tuples)));
            return (out.len() as u64) <= cap;
        }
        let x = order[depth];
        if !walk(depth + 1, order, above, chosen, points, arity, cap, out) {
            return false;
        }
        if above[x].iter().all(|y| chosen[*y]) {
            chosen[x] = true;
            let ok = walk(depth + 1, order, above, chosen, points, arity, cap, out);
            chosen[x] = false;
            return ok;
        }
        true
    }
    if !walk(0, &order, &above, &mut chosen, &points, arity, cap, &mut out) {
        return Err(too_large(ty, Some(n as u64), cap));
    }
    Ok(out)
}

/// Whether `rel` is upward closed within the product of `doms`.
pub fn is_upward_closed(rel: &Rel, doms: &[Arc<Domain>]) -> bool {
    let points = product(doms);
    rel.tuples().iter().all(|u| {
        points
            .iter()
            .filter(|v| tuple_leq(u, v))
            .all(|v| rel.contains(v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel1() -> Type {
        Type::relation(1)
    }

    #[test]
    fn individuals_and_booleans() {
        assert_eq!(enumerate_domain(&Type::Iota, 2, 100).unwrap().len(), 2);
        assert_eq!(enumerate_domain(&Type::Omicron, 2, 100).unwrap().len(), 2);
    }

    #[test]
    fn unary_relations_over_two_constants() {
        assert_eq!(enumerate_domain(&rel1(), 2, 100).unwrap().len(), 4);
    }

    #[test]
    fn second_order_counts() {
        let ty = Type::predicate([rel1()]);
        assert_eq!(enumerate_domain(&ty, 1, 100).unwrap().len(), 3);
        assert_eq!(enumerate_domain(&ty, 2, 100).unwrap().len(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        let ty = Type::predicate([rel1()]);
        match enumerate_domain(&ty, 3, 10) {
            Err(Error::DomainTooLarge { cap: 10, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elements_are_upward_closed() {
        let mut cache = DomainCache::new(2, 1000);
        let ty = Type::predicate([rel1(), Type::Iota]);
        let doms = vec![cache.get(&rel1()).unwrap(), cache.get(&Type::Iota).unwrap()];
        let d = cache.get(&ty).unwrap();
        for e in &d.elements {
            assert!(is_upward_closed(e.as_rel().unwrap(), &doms));
        }
    }

    #[test]
    fn leq_table_is_a_partial_order() {
        let d = enumerate_domain(&Type::predicate([rel1()]), 2, 100).unwrap();
        let n = d.len();
        for i in 0..n {
            assert!(d.leq(i, i));
            for j in 0..n {
                if i != j {
                    assert!(!(d.leq(i, j) && d.leq(j, i)));
                }
                for k in 0..n {
                    if d.leq(i, j) && d.leq(j, k) {
                        assert!(d.leq(i, k));
                    }
                }
            }
        }
    }
}
