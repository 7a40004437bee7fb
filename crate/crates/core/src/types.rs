//! The two-sorted simple type grammar.
//!
//! Argument types are `i` or predicate types; predicate types are `o` or
//! `arg -> pred`. Arrows associate to the right, so every predicate type
//! flattens to `r1 -> ... -> rn -> o`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    /// Individuals.
    Iota,
    /// Booleans.
    Omicron,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(arg: Type, result: Type) -> Type {
        Type::Arrow(Box::new(arg), Box::new(result))
    }

    /// Builds `args[0] -> ... -> args[n-1] -> o`.
    pub fn predicate<I>(args: I) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(Type::Omicron, |acc, arg| Type::arrow(arg, acc))
    }

    /// `i -> ... -> i -> o` with `arity` individual arguments.
    pub fn relation(arity: usize) -> Type {
        Type::predicate(std::iter::repeat_n(Type::Iota, arity).collect::<Vec<_>>())
    }

    pub fn is_iota(&self) -> bool {
        matches!(self, Type::Iota)
    }

    /// True for `o` and arrow types.
    pub fn is_predicate(&self) -> bool {
        !self.is_iota()
    }

    /// Peels the arrows of a predicate type. Returns `None` for `i`.
    pub fn flatten(&self) -> Option<Vec<&Type>> {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Type::Iota => return None,
                Type::Omicron => return Some(args),
                Type::Arrow(a, r) => {
                    args.push(a.as_ref());
                    cur = r;
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.flatten().map_or(0, |a| a.len())
    }

    /// Argument types of a predicate type, cloned.
    pub fn args(&self) -> Vec<Type> {
        self.flatten()
            .map(|a| a.into_iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Checks the argument/predicate sort discipline: no arrow takes `o`
    /// as its argument and no arrow ends in `i`.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Type::Iota | Type::Omicron => true,
            Type::Arrow(a, r) => {
                !matches!(**a, Type::Omicron)
                    && !matches!(**r, Type::Iota)
                    && a.is_well_formed()
                    && r.is_well_formed()
            }
        }
    }

    /// `order(i) = order(o) = 0`, `order(r1 -> ... -> rn -> o) = 1 + max order(ri)`.
    pub fn order(&self) -> usize {
        match self.flatten() {
            None => 0,
            Some(args) if args.is_empty() => 0,
            Some(args) => 1 + args.iter().map(|a| a.order()).max().unwrap_or(0),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, as_arg: bool) -> fmt::Result {
        match self {
            Type::Iota => f.write_str("i"),
            Type::Omicron => f.write_str("o"),
            Type::Arrow(a, r) => {
                if as_arg {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, true)?;
                f.write_str(" -> ")?;
                r.fmt_prec(f, false)?;
                if as_arg {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

/// Order of a predicate-typed variable or constant; `i` has order 0.
pub fn type_order(ty: &Type) -> usize {
    ty.order()
}
