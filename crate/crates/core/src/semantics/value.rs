//! Extensional semantic values.
//!
//! A monotone function of arity `n` is stored as the set of argument
//! tuples on which it is true. That set is upward closed, so partial
//! application is residuation: fix the first component, keep the rest.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Tuple = Vec<SemValue>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemValue {
    /// An individual, by position in the Herbrand universe.
    Ind(usize),
    Bool(bool),
    Rel(Rel),
}

/// True set of a monotone relation of fixed arity (at least 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rel {
    arity: usize,
    tuples: Arc<BTreeSet<Tuple>>,
}

impl Rel {
    pub fn empty(arity: usize) -> Rel {
        assert!(arity >= 1, "relations have positive arity");
        Rel { arity, tuples: Arc::new(BTreeSet::new()) }
    }

    pub fn from_tuples(arity: usize, tuples: impl IntoIterator<Item = Tuple>) -> Rel {
        assert!(arity >= 1, "relations have positive arity");
        let tuples: BTreeSet<Tuple> = tuples.into_iter().collect();
        assert!(tuples.iter().all(|t| t.len() == arity), "tuple arity mismatch");
        Rel { arity, tuples: Arc::new(tuples) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[SemValue]) -> bool {
        self.tuples.contains(t)
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.arity == other.arity && self.tuples.is_subset(&other.tuples)
    }

    /// Fixes the first argument.
    pub fn apply(&self, arg: &SemValue) -> SemValue {
        if self.arity == 1 {
            return SemValue::Bool(self.tuples.contains(std::slice::from_ref(arg)));
        }
        let rest = self
            .tuples
            .iter()
            .filter(|t| t[0] == *arg)
            .map(|t| t[1..].to_vec());
        SemValue::Rel(Rel::from_tuples(self.arity - 1, rest))
    }
}

/// Smaller relations first, then lexicographic over the sorted tuples.
impl Ord for Rel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tuples
            .len()
            .cmp(&other.tuples.len())
            .then_with(|| self.tuples.iter().cmp(other.tuples.iter()))
            .then_with(|| self.arity.cmp(&other.arity))
    }
}

impl PartialOrd for Rel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SemValue {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            SemValue::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_rel(&self) -> Option<&Rel> {
        match self {
            SemValue::Rel(r) => Some(r),
            _ => None,
        }
    }

    pub fn apply(&self, arg: &SemValue) -> SemValue {
        match self {
            SemValue::Rel(r) => r.apply(arg),
            other => panic!("cannot apply non-relation {other:?}"),
        }
    }
}

/// The information order: equality on individuals, `false <= true`,
/// inclusion on relations.
pub fn value_leq(x: &SemValue, y: &SemValue) -> Result<bool> {
    match (x, y) {
        (SemValue::Ind(a), SemValue::Ind(b)) => Ok(a == b),
        (SemValue::Bool(a), SemValue::Bool(b)) => Ok(!a || *b),
        (SemValue::Rel(a), SemValue::Rel(b)) if a.arity == b.arity => Ok(a.is_subset(b)),
        _ => Err(Error::Precondition(format!(
            "values of different types compared: {x:?} and {y:?}"
        ))),
    }
}

/// Componentwise order on tuples of equal length.
pub fn tuple_leq(a: &[SemValue], b: &[SemValue]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| value_leq(x, y).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(i: usize) -> SemValue {
        SemValue::Ind(i)
    }

    #[test]
    fn bool_order() {
        assert!(value_leq(&SemValue::Bool(false), &SemValue::Bool(true)).unwrap());
        assert!(!value_leq(&SemValue::Bool(true), &SemValue::Bool(false)).unwrap());
    }

    #[test]
    fn empty_relation_is_below() {
        let a = SemValue::Rel(Rel::empty(1));
        let b = SemValue::Rel(Rel::from_tuples(1, [vec![ind(0)]]));
        assert!(value_leq(&a, &b).unwrap());
        assert!(!value_leq(&b, &a).unwrap());
    }

    #[test]
    fn mismatched_types_error() {
        assert!(value_leq(&ind(0), &SemValue::Bool(true)).is_err());
    }

    #[test]
    fn residuation() {
        let q = Rel::from_tuples(2, [vec![ind(0), ind(1)]]);
        let qa = q.apply(&ind(0));
        assert_eq!(qa, SemValue::Rel(Rel::from_tuples(1, [vec![ind(1)]])));
        assert_eq!(qa.apply(&ind(1)), SemValue::Bool(true));
        assert_eq!(q.apply(&ind(1)), SemValue::Rel(Rel::empty(1)));
    }

    #[test]
    fn shortlex_ordering() {
        let b = Rel::from_tuples(1, [vec![ind(1)]]);
        let ab = Rel::from_tuples(1, [vec![ind(0)], vec![ind(1)]]);
        assert!(b < ab);
        assert!(Rel::empty(1) < b);
    }
}
