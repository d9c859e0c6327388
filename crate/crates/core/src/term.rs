//! Term signatures with binding arities and intrinsically sorted de Bruijn
//! terms, with renaming and simultaneous substitution.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::sort::{Name, Sort, SortError, SortExpr, SortSignature};

/// One argument slot of an arity: the sorts bound in the argument
/// (outermost first, so the last binder is de Bruijn index 0) and the
/// argument's sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgSpec {
    pub binders: Vec<SortExpr>,
    pub sort: SortExpr,
}

impl ArgSpec {
    pub fn new(binders: Vec<SortExpr>, sort: SortExpr) -> Self {
        ArgSpec { binders, sort }
    }

    pub fn plain(sort: SortExpr) -> Self {
        ArgSpec::new(Vec::new(), sort)
    }
}

/// A term constructor, possibly indexed by `degree` sort parameters and,
/// for constant families, by one natural number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arity {
    pub name: Name,
    pub degree: usize,
    pub nat_param: bool,
    pub args: Vec<ArgSpec>,
    pub out: SortExpr,
}

impl Arity {
    pub fn new(name: &str, degree: usize, args: Vec<ArgSpec>, out: SortExpr) -> Self {
        Arity {
            name: Name::from(name),
            degree,
            nat_param: false,
            args,
            out,
        }
    }

    pub fn constant(name: &str, out: SortExpr) -> Self {
        Arity::new(name, 0, Vec::new(), out)
    }

    pub fn with_nat_param(mut self) -> Self {
        self.nat_param = true;
        self
    }

    pub(crate) fn binder_sorts(&self, i: usize, params: &[Sort]) -> Vec<Sort> {
        self.args[i]
            .binders
            .iter()
            .map(|b| b.instantiate(params).expect("validated arity"))
            .collect()
    }

    pub(crate) fn arg_sort(&self, i: usize, params: &[Sort]) -> Sort {
        self.args[i]
            .sort
            .instantiate(params)
            .expect("validated arity")
    }

    pub(crate) fn out_sort(&self, params: &[Sort]) -> Sort {
        self.out.instantiate(params).expect("validated arity")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate arity `{0}`")]
    DuplicateArity(String),
    #[error("arity `{arity}`: {source}")]
    BadSortExpr { arity: String, source: SortError },
    #[error("invalid arity name `{0}`")]
    InvalidName(String),
}

/// Sorts plus term arities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSignature {
    pub sorts: SortSignature,
    arities: IndexMap<Name, Arity>,
}

impl TermSignature {
    pub fn new(sorts: SortSignature) -> Self {
        TermSignature {
            sorts,
            arities: IndexMap::new(),
        }
    }

    pub fn with_arities(
        sorts: SortSignature,
        arities: impl IntoIterator<Item = Arity>,
    ) -> Result<Self, SignatureError> {
        let mut sig = TermSignature::new(sorts);
        for a in arities {
            sig.add_arity(a)?;
        }
        Ok(sig)
    }

    pub fn add_arity(&mut self, arity: Arity) -> Result<(), SignatureError> {
        if arity.name.is_empty() || &*arity.name == "var" {
            return Err(SignatureError::InvalidName(arity.name.to_string()));
        }
        if self.arities.contains_key(&arity.name) {
            return Err(SignatureError::DuplicateArity(arity.name.to_string()));
        }
        let bad = |source| SignatureError::BadSortExpr {
            arity: arity.name.to_string(),
            source,
        };
        for arg in &arity.args {
            for b in &arg.binders {
                self.sorts.validate_expr(b, arity.degree).map_err(bad)?;
            }
            self.sorts
                .validate_expr(&arg.sort, arity.degree)
                .map_err(bad)?;
        }
        self.sorts
            .validate_expr(&arity.out, arity.degree)
            .map_err(bad)?;
        self.arities.insert(arity.name.clone(), arity);
        Ok(())
    }

    /// Adds an arity without checking its sort expressions. Used for the
    /// fresh constructors of generic instances, which live over an extended
    /// sort signature.
    pub(crate) fn add_arity_unchecked(&mut self, arity: Arity) {
        self.arities.insert(arity.name.clone(), arity);
    }

    pub fn arity(&self, name: &str) -> Option<&Arity> {
        self.arities.get(name)
    }

    pub fn arities(&self) -> impl Iterator<Item = &Arity> {
        self.arities.values()
    }

    /// The same arities over an extended sort signature (e.g. with atoms).
    pub(crate) fn with_sorts(&self, sorts: SortSignature) -> TermSignature {
        TermSignature {
            sorts,
            arities: self.arities.clone(),
        }
    }
}

/// An ordered typing context. Index 0 is the most recently bound variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Context {
    // outermost first
    entries: Vec<Sort>,
}

impl Context {
    pub fn empty() -> Self {
        Context::default()
    }

    /// Builds a context from a list whose first element is index 0.
    pub fn from_innermost(sorts: Vec<Sort>) -> Self {
        let mut entries = sorts;
        entries.reverse();
        Context { entries }
    }

    /// Builds a context from a list whose last element is index 0.
    pub fn from_outermost(entries: Vec<Sort>) -> Self {
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Sort> {
        self.entries
            .len()
            .checked_sub(index + 1)
            .map(|pos| &self.entries[pos])
    }

    /// Context extended by binders listed outermost first.
    pub fn extended(&self, binders: &[Sort]) -> Context {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(binders);
        Context { entries }
    }

    pub fn push(&mut self, sort: Sort) {
        self.entries.push(sort);
    }

    pub fn pop(&mut self) -> Option<Sort> {
        self.entries.pop()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    /// Entries from index 0 outwards.
    pub fn iter_innermost(&self) -> impl Iterator<Item = &Sort> {
        self.entries.iter().rev()
    }

    pub fn validate(&self, sorts: &SortSignature) -> Result<(), SortError> {
        self.entries.iter().try_for_each(|s| sorts.validate(s))
    }

    pub fn map(&self, f: impl Fn(&Sort) -> Sort) -> Context {
        Context {
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.iter_innermost().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// A constructor node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConTerm {
    pub arity: Name,
    pub nat: Option<u64>,
    pub sorts: Vec<Sort>,
    pub children: Vec<Term>,
}

/// A de Bruijn term. Well-sortedness is relative to a signature and a
/// context, see [`sort_of`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Con(ConTerm),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn con(arity: impl Into<Name>, sorts: Vec<Sort>, children: Vec<Term>) -> Term {
        Term::Con(ConTerm {
            arity: arity.into(),
            nat: None,
            sorts,
            children,
        })
    }

    pub fn nat_con(arity: impl Into<Name>, n: u64, sorts: Vec<Sort>) -> Term {
        Term::Con(ConTerm {
            arity: arity.into(),
            nat: Some(n),
            sorts,
            children: Vec::new(),
        })
    }

    /// Constructor and variable nodes.
    pub fn nodes(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Con(c) => 1 + c.children.iter().map(Term::nodes).sum::<usize>(),
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in &pos.0 {
            match t {
                Term::Con(c) => t = c.children.get(i)?,
                Term::Var(_) => return None,
            }
        }
        Some(t)
    }

    /// True when no variable with index >= `depth` occurs free.
    pub fn is_closed_below(&self, depth: usize, sig: &TermSignature) -> bool {
        match self {
            Term::Var(i) => *i < depth,
            Term::Con(c) => {
                let arity = sig.arity(&c.arity);
                c.children.iter().enumerate().all(|(i, ch)| {
                    let b = arity.map_or(0, |a| a.args.get(i).map_or(0, |x| x.binders.len()));
                    ch.is_closed_below(depth + b, sig)
                })
            }
        }
    }
}

/// A path of child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown arity `{0}`")]
    UnknownArity(String),
    #[error("at {position}: expected sort {expected}, got {got}")]
    IllSorted {
        position: Position,
        expected: Sort,
        got: Sort,
    },
    #[error("at {position}: variable index {index} outside context of length {len}")]
    BadIndex {
        position: Position,
        index: usize,
        len: usize,
    },
    #[error("at {position}: `{arity}` takes {expected} sort argument(s), got {got}")]
    SortArgCount {
        position: Position,
        arity: String,
        expected: usize,
        got: usize,
    },
    #[error("at {position}: `{arity}` takes {expected} argument(s), got {got}")]
    ChildCount {
        position: Position,
        arity: String,
        expected: usize,
        got: usize,
    },
    #[error("at {position}: natural-number parameter of `{arity}` {problem}")]
    NatParam {
        position: Position,
        arity: String,
        problem: &'static str,
    },
    #[error("at {position}: {source}")]
    BadSort {
        position: Position,
        source: SortError,
    },
}

/// The sort of `t` in `ctx`, or the first violation found.
pub fn sort_of(sig: &TermSignature, ctx: &Context, t: &Term) -> Result<Sort, TermError> {
    let mut ctx = ctx.clone();
    sort_at(sig, &mut ctx, t, &mut Vec::new())
}

fn sort_at(
    sig: &TermSignature,
    ctx: &mut Context,
    t: &Term,
    path: &mut Vec<usize>,
) -> Result<Sort, TermError> {
    let here = |path: &Vec<usize>| Position(path.clone());
    match t {
        Term::Var(i) => ctx.get(*i).cloned().ok_or_else(|| TermError::BadIndex {
            position: here(path),
            index: *i,
            len: ctx.len(),
        }),
        Term::Con(c) => {
            let arity = sig
                .arity(&c.arity)
                .ok_or_else(|| TermError::UnknownArity(c.arity.to_string()))?;
            if c.sorts.len() != arity.degree {
                return Err(TermError::SortArgCount {
                    position: here(path),
                    arity: c.arity.to_string(),
                    expected: arity.degree,
                    got: c.sorts.len(),
                });
            }
            for s in &c.sorts {
                sig.sorts.validate(s).map_err(|source| TermError::BadSort {
                    position: here(path),
                    source,
                })?;
            }
            match (arity.nat_param, c.nat) {
                (true, None) => {
                    return Err(TermError::NatParam {
                        position: here(path),
                        arity: c.arity.to_string(),
                        problem: "is missing",
                    })
                }
                (false, Some(_)) => {
                    return Err(TermError::NatParam {
                        position: here(path),
                        arity: c.arity.to_string(),
                        problem: "is not expected",
                    })
                }
                _ => {}
            }
            if c.children.len() != arity.args.len() {
                return Err(TermError::ChildCount {
                    position: here(path),
                    arity: c.arity.to_string(),
                    expected: arity.args.len(),
                    got: c.children.len(),
                });
            }
            for (i, child) in c.children.iter().enumerate() {
                let binders = arity.binder_sorts(i, &c.sorts);
                let expected = arity.arg_sort(i, &c.sorts);
                let saved = ctx.len();
                for b in binders {
                    ctx.push(b);
                }
                path.push(i);
                let got = sort_at(sig, ctx, child, path);
                let got = match got {
                    Ok(s) => s,
                    Err(e) => {
                        path.pop();
                        ctx.truncate(saved);
                        return Err(e);
                    }
                };
                if got != expected {
                    let err = TermError::IllSorted {
                        position: here(path),
                        expected,
                        got,
                    };
                    path.pop();
                    ctx.truncate(saved);
                    return Err(err);
                }
                path.pop();
                ctx.truncate(saved);
            }
            Ok(arity.out_sort(&c.sorts))
        }
    }
}

/// Number of binders introduced around each child of a constructor node.
///
/// Substitution needs only these counts, so it works for any node whose
/// arity is known; unknown arities are treated as binding nothing.
pub(crate) fn binder_counts<'a>(
    sig: &'a TermSignature,
    c: &ConTerm,
) -> impl Fn(usize) -> usize + 'a {
    let arity = sig.arity(&c.arity);
    move |i| arity.map_or(0, |a| a.args.get(i).map_or(0, |x| x.binders.len()))
}

/// Rebuilds `t`, replacing each free variable (index >= depth at its
/// occurrence) by `f(index - depth, depth)`.
pub(crate) fn map_free_vars(
    sig: &TermSignature,
    t: &Term,
    depth: usize,
    f: &mut dyn FnMut(usize, usize) -> Term,
) -> Term {
    match t {
        Term::Var(i) if *i < depth => Term::Var(*i),
        Term::Var(i) => f(*i - depth, depth),
        Term::Con(c) => {
            let binders = binder_counts(sig, c);
            Term::Con(ConTerm {
                arity: c.arity.clone(),
                nat: c.nat,
                sorts: c.sorts.clone(),
                children: c
                    .children
                    .iter()
                    .enumerate()
                    .map(|(i, ch)| map_free_vars(sig, ch, depth + binders(i), f))
                    .collect(),
            })
        }
    }
}

/// A finite map from the indices of a source context to indices of a target
/// context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Renaming(pub Vec<usize>);

impl Renaming {
    pub fn identity(len: usize) -> Self {
        Renaming((0..len).collect())
    }

    /// Every index moved up by `k`.
    pub fn weakening(len: usize, k: usize) -> Self {
        Renaming((0..len).map(|i| i + k).collect())
    }

    /// Whether this renaming maps `from` into `to` preserving sorts.
    pub fn is_sort_preserving(&self, from: &Context, to: &Context) -> bool {
        self.0.len() == from.len()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &j)| to.get(j).is_some() && to.get(j) == from.get(i))
    }
}

/// Renames the free variables of `t` along `rho`, lifted under binders.
pub fn rename(sig: &TermSignature, t: &Term, rho: &Renaming) -> Term {
    map_free_vars(sig, t, 0, &mut |i, depth| {
        Term::Var(
            rho.0
                .get(i)
                .copied()
                .unwrap_or_else(|| panic!("renaming undefined at index {i}"))
                + depth,
        )
    })
}

/// Adds `k` to every free variable index.
pub fn weaken(sig: &TermSignature, t: &Term, k: usize) -> Term {
    if k == 0 {
        return t.clone();
    }
    map_free_vars(sig, t, 0, &mut |i, depth| Term::Var(i + k + depth))
}

/// A simultaneous substitution: index `i` of the source context is sent to
/// the `i`-th term, which lives in the target context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution(pub Vec<Term>);

impl Substitution {
    pub fn identity(len: usize) -> Self {
        Substitution((0..len).map(Term::Var).collect())
    }

    pub fn from_renaming(rho: &Renaming) -> Self {
        Substitution(rho.0.iter().map(|&j| Term::Var(j)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &Term {
        &self.0[i]
    }

    pub fn is_sort_preserving(&self, sig: &TermSignature, from: &Context, to: &Context) -> bool {
        self.0.len() == from.len()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, t)| sort_of(sig, to, t).ok().as_ref() == from.get(i))
    }
}

/// The substitution for contexts extended by `binders`: fresh variables go
/// to themselves, old images are weakened past the binders.
pub fn shift(sig: &TermSignature, sigma: &Substitution, binders: &[Sort]) -> Substitution {
    let k = binders.len();
    let mut out: Vec<Term> = (0..k).map(Term::Var).collect();
    out.extend(sigma.0.iter().map(|t| weaken(sig, t, k)));
    Substitution(out)
}

/// Simultaneous capture-avoiding substitution (Kleisli extension).
pub fn bind(sig: &TermSignature, t: &Term, sigma: &Substitution) -> Term {
    map_free_vars(sig, t, 0, &mut |i, depth| {
        let image = sigma
            .0
            .get(i)
            .unwrap_or_else(|| panic!("substitution undefined at index {i}"));
        weaken(sig, image, depth)
    })
}

/// Substitutes `u` for variable 0 of `t`, lowering the other free variables.
pub fn subst1(sig: &TermSignature, t: &Term, u: &Term) -> Term {
    map_free_vars(sig, t, 0, &mut |i, depth| {
        if i == 0 {
            weaken(sig, u, depth)
        } else {
            Term::Var(i - 1 + depth)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulc() -> TermSignature {
        let star = SortExpr::constant("*");
        TermSignature::with_arities(
            SortSignature::from_pairs([("*", 0)]).unwrap(),
            [
                Arity::new(
                    "app",
                    0,
                    vec![ArgSpec::plain(star.clone()), ArgSpec::plain(star.clone())],
                    star.clone(),
                ),
                Arity::new(
                    "abs",
                    0,
                    vec![ArgSpec::new(vec![star.clone()], star.clone())],
                    star,
                ),
            ],
        )
        .unwrap()
    }

    fn app(a: Term, b: Term) -> Term {
        Term::con("app", vec![], vec![a, b])
    }

    fn lam(b: Term) -> Term {
        Term::con("abs", vec![], vec![b])
    }

    fn v(i: usize) -> Term {
        Term::Var(i)
    }

    fn star_ctx(n: usize) -> Context {
        Context::from_innermost(vec![Sort::atom("*"); n])
    }

    fn omega() -> Term {
        let d = lam(app(v(0), v(0)));
        app(d.clone(), d)
    }

    #[test]
    fn var_sort() {
        assert_eq!(
            sort_of(&ulc(), &star_ctx(1), &v(0)).unwrap(),
            Sort::atom("*")
        );
        assert!(matches!(
            sort_of(&ulc(), &star_ctx(1), &v(1)),
            Err(TermError::BadIndex {
                index: 1,
                len: 1,
                ..
            })
        ));
    }

    #[test]
    fn context_order() {
        let ctx = Context::from_innermost(vec![Sort::atom("bool"), Sort::atom("nat")]);
        assert_eq!(ctx.get(0), Some(&Sort::atom("bool")));
        assert_eq!(ctx.get(1), Some(&Sort::atom("nat")));
        let ext = ctx.extended(&[Sort::atom("a"), Sort::atom("b")]);
        assert_eq!(ext.get(0), Some(&Sort::atom("b")));
        assert_eq!(ext.get(3), Some(&Sort::atom("nat")));
        assert_eq!(ctx.to_string(), "[bool, nat]");
    }

    #[test]
    fn rename_examples() {
        let sig = ulc();
        let t = app(v(0), lam(v(1)));
        assert_eq!(rename(&sig, &t, &Renaming::identity(1)), t);
        assert_eq!(rename(&sig, &v(0), &Renaming(vec![1, 0])), v(1));
        let t = lam(app(v(0), v(1)));
        assert_eq!(rename(&sig, &t, &Renaming(vec![1])), lam(app(v(0), v(2))));
    }

    #[test]
    fn bind_examples() {
        let sig = ulc();
        let sigma = Substitution(vec![omega(), v(0)]);
        assert_eq!(bind(&sig, &v(0), &sigma), omega());
        let t = lam(app(v(1), v(0)));
        assert_eq!(
            bind(&sig, &t, &Substitution::identity(1)),
            t,
            "identity substitution"
        );
        assert_eq!(
            bind(&sig, &t, &Substitution(vec![omega()])),
            lam(app(omega(), v(0)))
        );
    }

    #[test]
    fn shift_examples() {
        let sig = ulc();
        let star = Sort::atom("*");
        let sigma = Substitution(vec![v(3), lam(v(1))]);
        let shifted = shift(&sig, &sigma, std::slice::from_ref(&star));
        assert_eq!(shifted.get(0), &v(0));
        assert_eq!(
            shifted.get(1),
            &rename(&sig, &v(3), &Renaming(vec![1, 2, 3, 4]))
        );
        assert_eq!(shifted.get(2), &lam(v(2)));
        assert_eq!(
            shift(&sig, &Substitution::identity(3), &[star.clone(), star]),
            Substitution::identity(5)
        );
    }

    #[test]
    fn subst1_examples() {
        let sig = ulc();
        let u = lam(v(3));
        assert_eq!(subst1(&sig, &v(0), &u), u);
        assert_eq!(subst1(&sig, &v(1), &u), v(0));
        let d = lam(app(v(0), v(0)));
        assert_eq!(subst1(&sig, &app(v(0), v(0)), &d), omega());
        // under a binder the argument is weakened
        assert_eq!(subst1(&sig, &lam(v(1)), &v(0)), lam(v(1)));
    }

    #[test]
    fn ill_sorted_reports_position() {
        let sig = TermSignature::with_arities(
            SortSignature::from_pairs([("nat", 0), ("bool", 0)]).unwrap(),
            [
                Arity::constant("tt", SortExpr::constant("bool")),
                Arity::new(
                    "not",
                    0,
                    vec![ArgSpec::plain(SortExpr::constant("bool"))],
                    SortExpr::constant("bool"),
                ),
                Arity::constant("z", SortExpr::constant("nat")),
            ],
        )
        .unwrap();
        let t = Term::con(
            "not",
            vec![],
            vec![Term::con(
                "not",
                vec![],
                vec![Term::con("z", vec![], vec![])],
            )],
        );
        assert_eq!(
            sort_of(&sig, &Context::empty(), &t),
            Err(TermError::IllSorted {
                position: Position(vec![0, 0]),
                expected: Sort::atom("bool"),
                got: Sort::atom("nat"),
            })
        );
        assert!(matches!(
            sort_of(&sig, &Context::empty(), &Term::con("zz", vec![], vec![])),
            Err(TermError::UnknownArity(_))
        ));
    }

    #[test]
    fn position_display() {
        assert_eq!(Position::root().to_string(), "ε");
        assert_eq!(Position(vec![1, 0, 2]).to_string(), "1.0.2");
    }
}
