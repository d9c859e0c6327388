//! Sort signatures, sorts as constructor trees, sort expressions with
//! metavariables, and folds along sort translations.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

/// Interned-ish name used for sort constructors and term arities.
pub type Name = Arc<str>;

/// Prefix of the fresh atomic sorts that stand for sort metavariables when
/// a degree-`n` object is checked generically.
pub const ATOM_PREFIX: &str = "?";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("unknown sort constructor `{0}`")]
    UnknownConstructor(String),
    #[error("sort constructor `{name}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("sort expression has degree {expected}, got {got} argument(s)")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("sort metavariable {index} out of range for degree {degree}")]
    MetaOutOfRange { index: usize, degree: usize },
    #[error("duplicate sort constructor `{0}`")]
    Duplicate(String),
    #[error("invalid sort constructor name `{0}`")]
    InvalidName(String),
    #[error("sort translation has no clause for `{0}`")]
    MissingClause(String),
    #[error("sort translation clause for unknown constructor `{0}`")]
    ExtraClause(String),
}

/// A family of sort constructors with their argument counts, in declaration
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SortSignature {
    constructors: IndexMap<Name, usize>,
}

impl SortSignature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, SortError> {
        let mut sig = Self::new();
        for (name, arity) in pairs {
            sig.declare(name, arity)?;
        }
        Ok(sig)
    }

    pub fn declare(&mut self, name: &str, arity: usize) -> Result<(), SortError> {
        if name.is_empty() || name.starts_with(ATOM_PREFIX) {
            return Err(SortError::InvalidName(name.to_string()));
        }
        if self.constructors.contains_key(name) {
            return Err(SortError::Duplicate(name.to_string()));
        }
        self.constructors.insert(Name::from(name), arity);
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.constructors.get(name).copied()
    }

    pub fn constructors(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.constructors.iter().map(|(n, a)| (n, *a))
    }

    pub fn len(&self) -> usize {
        self.constructors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constructors.is_empty()
    }

    /// The signature extended by `n` fresh 0-ary atoms `?1..?n`.
    ///
    /// Instantiating the metavariables of a degree-`n` expression with these
    /// atoms is injective, so checking the instance checks the expression
    /// for every choice of sort arguments.
    pub fn with_atoms(&self, n: usize) -> SortSignature {
        let mut ext = self.clone();
        for i in 1..=n {
            ext.constructors.insert(atom_name(i), 0);
        }
        ext
    }

    /// Checks that every node of `sort` is declared with a matching argument
    /// count.
    pub fn validate(&self, sort: &Sort) -> Result<(), SortError> {
        let expected = self
            .arity(&sort.head)
            .ok_or_else(|| SortError::UnknownConstructor(sort.head.to_string()))?;
        if expected != sort.args.len() {
            return Err(SortError::ArityMismatch {
                name: sort.head.to_string(),
                expected,
                got: sort.args.len(),
            });
        }
        sort.args.iter().try_for_each(|a| self.validate(a))
    }

    pub fn validate_expr(&self, expr: &SortExpr, degree: usize) -> Result<(), SortError> {
        match expr {
            SortExpr::Meta(i) => {
                if *i == 0 || *i > degree {
                    Err(SortError::MetaOutOfRange { index: *i, degree })
                } else {
                    Ok(())
                }
            }
            SortExpr::Con(head, args) => {
                let expected = self
                    .arity(head)
                    .ok_or_else(|| SortError::UnknownConstructor(head.to_string()))?;
                if expected != args.len() {
                    return Err(SortError::ArityMismatch {
                        name: head.to_string(),
                        expected,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.validate_expr(a, degree))
            }
        }
    }

    /// All sorts with at most `max_nodes` constructor nodes, smallest first,
    /// then in declaration order.
    pub fn sorts_up_to(&self, max_nodes: usize) -> Vec<Sort> {
        let mut by_size: Vec<Vec<Sort>> = vec![Vec::new(); max_nodes + 1];
        for size in 1..=max_nodes {
            let mut here = Vec::new();
            for (name, arity) in self.constructors() {
                if name.starts_with(ATOM_PREFIX) {
                    continue;
                }
                for split in compositions(size - 1, arity) {
                    let pools: Vec<&Vec<Sort>> = split.iter().map(|&s| &by_size[s]).collect();
                    for args in cartesian(&pools) {
                        here.push(Sort::new(name.clone(), args));
                    }
                }
            }
            by_size[size] = here;
        }
        by_size.into_iter().flatten().collect()
    }
}

pub fn atom_name(i: usize) -> Name {
    Name::from(format!("{ATOM_PREFIX}{i}"))
}

/// The fresh atoms `?1..?n` as sorts.
pub fn atoms(n: usize) -> Vec<Sort> {
    (1..=n).map(|i| Sort::atom(atom_name(i))).collect()
}

/// Ways to write `total` as an ordered sum of `parts` positive integers.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        if total < parts {
            return;
        }
        for first in 1..=total - (parts - 1) {
            acc.push(first);
            go(total - first, parts - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn cartesian<T: Clone>(pools: &[&Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for pool in pools {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for prefix in &out {
            for item in pool.iter() {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// A closed sort: a constructor applied to sorts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort {
    pub head: Name,
    pub args: Vec<Sort>,
}

impl Sort {
    pub fn new(head: impl Into<Name>, args: Vec<Sort>) -> Self {
        Sort {
            head: head.into(),
            args,
        }
    }

    pub fn atom(head: impl Into<Name>) -> Self {
        Sort::new(head, Vec::new())
    }

    pub fn nodes(&self) -> usize {
        1 + self.args.iter().map(Sort::nodes).sum::<usize>()
    }

    /// Reads a sort back as an expression, turning the atoms `?i` into
    /// metavariables.
    pub fn to_expr(&self) -> SortExpr {
        if self.args.is_empty() {
            if let Some(i) = self
                .head
                .strip_prefix(ATOM_PREFIX)
                .and_then(|s| s.parse::<usize>().ok())
            {
                return SortExpr::Meta(i);
            }
        }
        SortExpr::Con(
            self.head.clone(),
            self.args.iter().map(Sort::to_expr).collect(),
        )
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            return write!(f, "{}", self.head);
        }
        write!(f, "({}", self.head)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A sort tree whose leaves may be metavariables `1..=degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SortExpr {
    /// 1-based metavariable.
    Meta(usize),
    Con(Name, Vec<SortExpr>),
}

impl SortExpr {
    pub fn con(head: impl Into<Name>, args: Vec<SortExpr>) -> Self {
        SortExpr::Con(head.into(), args)
    }

    pub fn constant(head: impl Into<Name>) -> Self {
        SortExpr::Con(head.into(), Vec::new())
    }

    /// The expression of degree 0 denoting a fixed sort.
    pub fn from_sort(sort: &Sort) -> Self {
        SortExpr::Con(
            sort.head.clone(),
            sort.args.iter().map(SortExpr::from_sort).collect(),
        )
    }

    /// Largest metavariable index occurring (0 when closed).
    pub fn max_meta(&self) -> usize {
        match self {
            SortExpr::Meta(i) => *i,
            SortExpr::Con(_, args) => args.iter().map(SortExpr::max_meta).max().unwrap_or(0),
        }
    }

    pub fn metas(&self, out: &mut Vec<usize>) {
        match self {
            SortExpr::Meta(i) => out.push(*i),
            SortExpr::Con(_, args) => args.iter().for_each(|a| a.metas(out)),
        }
    }

    /// Replaces metavariable `i` by `args[i - 1]`.
    pub fn instantiate(&self, args: &[Sort]) -> Result<Sort, SortError> {
        match self {
            SortExpr::Meta(i) => {
                args.get(i.wrapping_sub(1))
                    .cloned()
                    .ok_or(SortError::MetaOutOfRange {
                        index: *i,
                        degree: args.len(),
                    })
            }
            SortExpr::Con(head, sub) => Ok(Sort::new(
                head.clone(),
                sub.iter()
                    .map(|e| e.instantiate(args))
                    .collect::<Result<_, _>>()?,
            )),
        }
    }

    /// Replaces metavariable `i` by the expression `args[i - 1]`.
    pub fn substitute(&self, args: &[SortExpr]) -> SortExpr {
        match self {
            SortExpr::Meta(i) => args[i - 1].clone(),
            SortExpr::Con(head, sub) => SortExpr::Con(
                head.clone(),
                sub.iter().map(|e| e.substitute(args)).collect(),
            ),
        }
    }

    /// First-order matching of this pattern against a sort, extending the
    /// partial assignment. Returns false on clash.
    pub fn match_sort(&self, sort: &Sort, assignment: &mut [Option<Sort>]) -> bool {
        match self {
            SortExpr::Meta(i) => match &assignment[i - 1] {
                Some(bound) => bound == sort,
                None => {
                    assignment[i - 1] = Some(sort.clone());
                    true
                }
            },
            SortExpr::Con(head, args) => {
                head == &sort.head
                    && args.len() == sort.args.len()
                    && args
                        .iter()
                        .zip(&sort.args)
                        .all(|(p, s)| p.match_sort(s, assignment))
            }
        }
    }
}

/// Checked instantiation of a degree-`degree` expression.
pub fn instantiate_sort_expr(
    expr: &SortExpr,
    degree: usize,
    args: &[Sort],
) -> Result<Sort, SortError> {
    if args.len() != degree {
        return Err(SortError::DegreeMismatch {
            expected: degree,
            got: args.len(),
        });
    }
    expr.instantiate(args)
}

impl fmt::Display for SortExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortExpr::Meta(i) => write!(f, "{i}"),
            SortExpr::Con(head, args) if args.is_empty() => write!(f, "{head}"),
            SortExpr::Con(head, args) => {
                write!(f, "({head}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A representation of one sort signature in the sort trees of another:
/// each source constructor of arity `k` is sent to a degree-`k` expression
/// over the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortTranslation {
    source: SortSignature,
    target: SortSignature,
    clauses: IndexMap<Name, SortExpr>,
}

impl SortTranslation {
    pub fn new(
        source: SortSignature,
        target: SortSignature,
        clauses: impl IntoIterator<Item = (Name, SortExpr)>,
    ) -> Result<Self, SortError> {
        let clauses: IndexMap<Name, SortExpr> = clauses.into_iter().collect();
        for name in clauses.keys() {
            if source.arity(name).is_none() {
                return Err(SortError::ExtraClause(name.to_string()));
            }
        }
        let mut ordered = IndexMap::new();
        for (name, arity) in source.constructors() {
            let clause = clauses
                .get(name)
                .ok_or_else(|| SortError::MissingClause(name.to_string()))?;
            target.validate_expr(clause, arity)?;
            ordered.insert(name.clone(), clause.clone());
        }
        Ok(SortTranslation {
            source,
            target,
            clauses: ordered,
        })
    }

    /// Each constructor sent to itself applied to its metavariables.
    pub fn identity(sig: &SortSignature) -> Self {
        let clauses = sig
            .constructors()
            .map(|(name, arity)| {
                (
                    name.clone(),
                    SortExpr::Con(name.clone(), (1..=arity).map(SortExpr::Meta).collect()),
                )
            })
            .collect::<Vec<_>>();
        SortTranslation::new(sig.clone(), sig.clone(), clauses)
            .expect("identity clauses are well formed")
    }

    pub fn source(&self) -> &SortSignature {
        &self.source
    }

    pub fn target(&self) -> &SortSignature {
        &self.target
    }

    pub fn clause(&self, name: &str) -> Option<&SortExpr> {
        self.clauses.get(name)
    }

    pub fn clauses(&self) -> impl Iterator<Item = (&Name, &SortExpr)> {
        self.clauses.iter()
    }

    /// The homomorphic image of a source sort.
    ///
    /// Panics if `sort` is not valid over the source signature.
    pub fn fold(&self, sort: &Sort) -> Sort {
        let clause = self
            .clauses
            .get(&sort.head)
            .unwrap_or_else(|| panic!("no sort clause for `{}`", sort.head));
        let args: Vec<Sort> = sort.args.iter().map(|a| self.fold(a)).collect();
        clause
            .instantiate(&args)
            .expect("clause degree equals constructor arity")
    }

    /// The single sort every source sort folds to, when all clauses are the
    /// same closed expression.
    pub fn constant_image(&self) -> Option<Sort> {
        let mut clauses = self.clauses.values();
        let first = clauses.next()?.instantiate(&[]).ok()?;
        clauses
            .all(|c| c.instantiate(&[]).ok().as_ref() == Some(&first))
            .then_some(first)
    }

    /// Stand-ins for the images of `n` unknown source sorts: fresh atoms,
    /// or the constant image when there is one.
    pub fn generic_params(&self, n: usize) -> Vec<Sort> {
        match self.constant_image() {
            Some(s) => vec![s; n],
            None => atoms(n),
        }
    }

    /// Folds an expression, leaving its metavariables in place. Instantiating
    /// the result agrees with folding the instance.
    pub fn fold_expr(&self, expr: &SortExpr) -> SortExpr {
        match expr {
            SortExpr::Meta(i) => SortExpr::Meta(*i),
            SortExpr::Con(head, args) => {
                let clause = self
                    .clauses
                    .get(head)
                    .unwrap_or_else(|| panic!("no sort clause for `{head}`"));
                let args: Vec<SortExpr> = args.iter().map(|a| self.fold_expr(a)).collect();
                clause.substitute(&args)
            }
        }
    }
}

/// Convenience: checked fold with validation of the input.
pub fn fold_sorts(tr: &SortTranslation, sort: &Sort) -> Result<Sort, SortError> {
    tr.source.validate(sort)?;
    Ok(tr.fold(sort))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stlc() -> SortSignature {
        SortSignature::from_pairs([("*", 0), ("arr", 2)]).unwrap()
    }

    fn pcf() -> SortSignature {
        SortSignature::from_pairs([("nat", 0), ("bool", 0), ("arr", 2)]).unwrap()
    }

    fn s(head: &str, args: Vec<Sort>) -> Sort {
        Sort::new(head, args)
    }

    #[test]
    fn validate_examples() {
        let star = Sort::atom("*");
        assert!(stlc().validate(&s("arr", vec![star.clone(), star])).is_ok());
        let ulc = SortSignature::from_pairs([("*", 0)]).unwrap();
        assert_eq!(
            ulc.validate(&Sort::atom("nat")),
            Err(SortError::UnknownConstructor("nat".into()))
        );
        assert_eq!(
            pcf().validate(&s("arr", vec![Sort::atom("nat")])),
            Err(SortError::ArityMismatch {
                name: "arr".into(),
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn instantiate_examples() {
        let nat = Sort::atom("nat");
        let bool_ = Sort::atom("bool");
        let arr12 = SortExpr::con("arr", vec![SortExpr::Meta(1), SortExpr::Meta(2)]);
        assert_eq!(
            instantiate_sort_expr(&arr12, 2, &[nat.clone(), bool_.clone()]).unwrap(),
            s("arr", vec![nat.clone(), bool_.clone()])
        );
        assert_eq!(
            instantiate_sort_expr(&SortExpr::Meta(1), 1, std::slice::from_ref(&bool_)).unwrap(),
            bool_
        );
        let nb = s("arr", vec![nat.clone(), Sort::atom("bool")]);
        let arr11 = SortExpr::con("arr", vec![SortExpr::Meta(1), SortExpr::Meta(1)]);
        assert_eq!(
            instantiate_sort_expr(&arr11, 1, std::slice::from_ref(&nb)).unwrap(),
            s("arr", vec![nb.clone(), nb])
        );
        assert_eq!(
            instantiate_sort_expr(&arr11, 1, &[]),
            Err(SortError::DegreeMismatch {
                expected: 1,
                got: 0
            })
        );
    }

    #[test]
    fn degree_zero_instantiation_is_embedding() {
        for sort in pcf().sorts_up_to(5) {
            assert_eq!(SortExpr::from_sort(&sort).instantiate(&[]).unwrap(), sort);
        }
    }

    #[test]
    fn identity_translation_is_identity() {
        let id = SortTranslation::identity(&pcf());
        for sort in pcf().sorts_up_to(7) {
            assert_eq!(id.fold(&sort), sort);
        }
    }

    #[test]
    fn translation_must_be_total() {
        let ulc = SortSignature::from_pairs([("*", 0)]).unwrap();
        let err = SortTranslation::new(pcf(), ulc, [(Name::from("nat"), SortExpr::constant("*"))])
            .unwrap_err();
        assert_eq!(err, SortError::MissingClause("bool".into()));
    }

    #[test]
    fn sort_enumeration_counts() {
        // 2 atoms, then arr over pairs of size-1 sorts.
        assert_eq!(pcf().sorts_up_to(1).len(), 2);
        assert_eq!(pcf().sorts_up_to(3).len(), 6);
        assert_eq!(stlc().sorts_up_to(5).len(), 1 + 1 + 2);
    }

    #[test]
    fn atoms_read_back_as_metas() {
        let e = SortExpr::con("arr", vec![SortExpr::Meta(2), SortExpr::constant("nat")]);
        let inst = e.instantiate(&atoms(2)).unwrap();
        assert_eq!(inst.to_expr(), e);
    }
}
