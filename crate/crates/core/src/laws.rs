//! Exhaustive checks of the substitution structure on small terms: the
//! monad laws for `bind`, renaming as a special case of `bind`,
//! distributivity over constructors, preservation of sorts, and agreement
//! with a textbook named-variable substitution.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;

use crate::enumerate::{small_contexts, Enumerator};
use crate::sort::{Name, Sort};
use crate::term::{
    bind, rename, shift, sort_of, Context, Renaming, Substitution, Term, TermSignature,
};

pub const LAWS: &[&str] = &[
    "left-unit",
    "right-unit",
    "associativity",
    "rename-as-bind",
    "distributivity",
    "sort-preservation",
    "named-oracle",
];

/// Substitution images have at most this many nodes. Of the closed
/// candidates only the first is used, since closed images are unaffected by
/// lifting.
pub const LAW_SUBST_NODES: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    pub law: &'static str,
    pub ctx: Context,
    pub term: Term,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    /// Instances checked per law.
    pub checked: IndexMap<&'static str, usize>,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(
        &mut self,
        law: &'static str,
        ok: bool,
        ctx: &Context,
        term: &Term,
        detail: impl FnOnce() -> String,
    ) {
        *self.checked.entry(law).or_default() += 1;
        if !ok {
            self.failures.push(LawFailure {
                law,
                ctx: ctx.clone(),
                term: term.clone(),
                detail: detail(),
            });
        }
    }
}

/// Named syntax used only by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Named {
    Var(Ident),
    Con {
        arity: Name,
        nat: Option<u64>,
        sorts: Vec<Sort>,
        children: Vec<(Vec<Ident>, Named)>,
    },
}

/// Context and binder names are their depth; renamed binders get ids from
/// [`FRESH_BASE`] on, which no depth reaches.
type Ident = usize;

const FRESH_BASE: Ident = 1 << 20;

fn name(i: usize) -> Ident {
    i
}

/// `env` lists the names in scope, outermost first. Binders are named after
/// their depth, so the same names recur across contexts and capture is
/// possible when substituting.
fn to_named(sig: &TermSignature, t: &Term, env: &mut Vec<Ident>) -> Named {
    match t {
        Term::Var(i) => Named::Var(env[env.len() - 1 - i]),
        Term::Con(c) => {
            let arity = sig.arity(&c.arity).expect("well-formed term");
            let children = c
                .children
                .iter()
                .enumerate()
                .map(|(i, ch)| {
                    let k = arity.args[i].binders.len();
                    let names: Vec<Ident> = (0..k).map(|j| name(env.len() + j)).collect();
                    env.extend(names.iter().cloned());
                    let body = to_named(sig, ch, env);
                    env.truncate(env.len() - k);
                    (names, body)
                })
                .collect();
            Named::Con {
                arity: c.arity.clone(),
                nat: c.nat,
                sorts: c.sorts.clone(),
                children,
            }
        }
    }
}

fn from_named(n: &Named, env: &mut Vec<Ident>) -> Term {
    match n {
        Named::Var(x) => {
            let pos = env
                .iter()
                .rposition(|y| y == x)
                .unwrap_or_else(|| panic!("unbound name {x}"));
            Term::Var(env.len() - 1 - pos)
        }
        Named::Con {
            arity,
            nat,
            sorts,
            children,
        } => Term::Con(crate::term::ConTerm {
            arity: arity.clone(),
            nat: *nat,
            sorts: sorts.clone(),
            children: children
                .iter()
                .map(|(names, body)| {
                    env.extend(names.iter().cloned());
                    let t = from_named(body, env);
                    env.truncate(env.len() - names.len());
                    t
                })
                .collect(),
        }),
    }
}

fn free_names(n: &Named, bound: &mut Vec<Ident>, out: &mut HashSet<Ident>) {
    match n {
        Named::Var(x) => {
            if !bound.contains(x) {
                out.insert(*x);
            }
        }
        Named::Con { children, .. } => {
            for (names, body) in children {
                bound.extend(names.iter().cloned());
                free_names(body, bound, out);
                bound.truncate(bound.len() - names.len());
            }
        }
    }
}

fn rename_free(n: &Named, from: Ident, to: Ident) -> Named {
    match n {
        Named::Var(x) if *x == from => Named::Var(to),
        Named::Var(_) => n.clone(),
        Named::Con {
            arity,
            nat,
            sorts,
            children,
        } => Named::Con {
            arity: arity.clone(),
            nat: *nat,
            sorts: sorts.clone(),
            children: children
                .iter()
                .map(|(names, body)| {
                    if names.contains(&from) {
                        (names.clone(), body.clone())
                    } else {
                        (names.clone(), rename_free(body, from, to))
                    }
                })
                .collect(),
        },
    }
}

/// Simultaneous capture-avoiding substitution on named terms: a binder that
/// would capture a free name of an image is renamed first.
fn subst_named(n: &Named, map: &HashMap<Ident, Named>, fresh: &mut Ident) -> Named {
    match n {
        Named::Var(x) => map.get(x).cloned().unwrap_or_else(|| n.clone()),
        Named::Con {
            arity,
            nat,
            sorts,
            children,
        } => {
            let children = children
                .iter()
                .map(|(names, body)| {
                    if names.is_empty() {
                        return (Vec::new(), subst_named(body, map, fresh));
                    }
                    let inner: HashMap<Ident, Named> = map
                        .iter()
                        .filter(|(k, _)| !names.contains(k))
                        .map(|(k, v)| (*k, v.clone()))
                        .collect();
                    let mut avoid = HashSet::new();
                    let mut body_free = HashSet::new();
                    free_names(body, &mut names.clone(), &mut body_free);
                    for (k, v) in &inner {
                        if body_free.contains(k) {
                            free_names(v, &mut Vec::new(), &mut avoid);
                        }
                    }
                    let mut body = body.clone();
                    let mut new_names = names.clone();
                    for b in new_names.iter_mut() {
                        if avoid.contains(b) {
                            *fresh += 1;
                            body = rename_free(&body, *b, *fresh);
                            *b = *fresh;
                        }
                    }
                    (new_names, subst_named(&body, &inner, fresh))
                })
                .collect();
            Named::Con {
                arity: arity.clone(),
                nat: *nat,
                sorts: sorts.clone(),
                children,
            }
        }
    }
}

/// `bind` computed through named syntax.
pub fn named_bind(
    sig: &TermSignature,
    t: &Term,
    ctx_len: usize,
    sigma: &Substitution,
    target_len: usize,
) -> Term {
    let mut src_env: Vec<Ident> = (0..ctx_len).map(name).collect();
    let nt = to_named(sig, t, &mut src_env);
    let mut tgt_env: Vec<Ident> = (0..target_len).map(name).collect();
    let map: HashMap<Ident, Named> = (0..ctx_len)
        .map(|i| {
            let key = src_env[ctx_len - 1 - i];
            (key, to_named(sig, sigma.get(i), &mut tgt_env))
        })
        .collect();
    let mut fresh = FRESH_BASE;
    let out = subst_named(&nt, &map, &mut fresh);
    from_named(&out, &mut tgt_env)
}

/// All sort-preserving renamings from `from` into `to`.
pub fn renamings(from: &Context, to: &Context) -> Vec<Renaming> {
    let pools: Vec<Vec<usize>> = (0..from.len())
        .map(|i| {
            (0..to.len())
                .filter(|&j| to.get(j) == from.get(i))
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<usize>> = pools.iter().collect();
    crate::sort::cartesian(&refs)
        .into_iter()
        .map(Renaming)
        .collect()
}

/// Substitutions from `from` into `to` used by the suite: each image is a
/// variable, an open term of at most [`LAW_SUBST_NODES`] nodes, or the first
/// closed such term.
pub fn law_substitutions(
    sig: &TermSignature,
    en: &mut Enumerator<'_>,
    from: &Context,
    to: &Context,
) -> Vec<Substitution> {
    let pools: Vec<Vec<Term>> = (0..from.len())
        .map(|i| {
            let sort = from.get(i).expect("in range");
            let mut closed_seen = false;
            en.terms(to, sort, LAW_SUBST_NODES)
                .into_iter()
                .filter(|t| {
                    if matches!(t, Term::Var(_)) || !t.is_closed_below(0, sig) {
                        return true;
                    }
                    !std::mem::replace(&mut closed_seen, true)
                })
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<Term>> = pools.iter().collect();
    crate::sort::cartesian(&refs)
        .into_iter()
        .map(Substitution)
        .collect()
}

fn compose(sig: &TermSignature, sigma: &Substitution, tau: &Substitution) -> Substitution {
    Substitution(sigma.0.iter().map(|t| bind(sig, t, tau)).collect())
}

/// Runs every law on all terms of at most `max_nodes` nodes in every context
/// of at most `ctx_len` entries. Context entries are the one-node sorts;
/// sort parameters inside terms range over the enumerator's universe.
pub fn check_laws(sig: &TermSignature, max_nodes: usize, ctx_len: usize) -> LawReport {
    let mut en = Enumerator::new(sig);
    let contexts = small_contexts(&sig.sorts, ctx_len);
    let mut report = LawReport {
        checked: LAWS.iter().map(|l| (*l, 0)).collect(),
        failures: Vec::new(),
    };
    let mut subs: HashMap<(Context, Context), Vec<Substitution>> = HashMap::new();
    let mut subs_for = |en: &mut Enumerator<'_>, a: &Context, b: &Context| {
        subs.entry((a.clone(), b.clone()))
            .or_insert_with(|| law_substitutions(sig, en, a, b))
            .clone()
    };
    for ctx in &contexts {
        let terms: Vec<(Sort, Term)> = en.terms_of_all_sorts(ctx, max_nodes);
        if terms.is_empty() {
            continue;
        }
        let id = Substitution::identity(ctx.len());
        for (_, t) in &terms {
            let ok = bind(sig, t, &id) == *t;
            report.record("right-unit", ok, ctx, t, || {
                "bind(t, id) differs from t".into()
            });
        }
        for target in &contexts {
            for rho in renamings(ctx, target) {
                for (sort, t) in &terms {
                    let r = rename(sig, t, &rho);
                    let ok = r == bind(sig, t, &Substitution::from_renaming(&rho))
                        && sort_of(sig, target, &r).as_ref() == Ok(sort);
                    report.record("rename-as-bind", ok, ctx, t, || {
                        format!("renaming {:?}", rho.0)
                    });
                }
            }
            let sigmas = subs_for(&mut en, ctx, target);
            for sigma in &sigmas {
                for i in 0..ctx.len() {
                    let ok = bind(sig, &Term::Var(i), sigma) == *sigma.get(i);
                    report.record("left-unit", ok, ctx, &Term::Var(i), || {
                        format!("substitution {:?}", sigma.0)
                    });
                }
                for (sort, t) in &terms {
                    let b = bind(sig, t, sigma);
                    let ok = sort_of(sig, target, &b).as_ref() == Ok(sort);
                    report.record("sort-preservation", ok, ctx, t, || {
                        format!("substitution {:?}", sigma.0)
                    });
                    let ok = b == named_bind(sig, t, ctx.len(), sigma, target.len());
                    report.record("named-oracle", ok, ctx, t, || {
                        format!("substitution {:?}", sigma.0)
                    });
                    if let Term::Con(c) = t {
                        let arity = sig.arity(&c.arity).expect("well-formed term");
                        let children: Vec<Term> = c
                            .children
                            .iter()
                            .enumerate()
                            .map(|(i, ch)| {
                                let binders = arity.binder_sorts(i, &c.sorts);
                                bind(sig, ch, &shift(sig, sigma, &binders))
                            })
                            .collect();
                        let expected = Term::Con(crate::term::ConTerm {
                            children,
                            ..c.clone()
                        });
                        report.record("distributivity", b == expected, ctx, t, || {
                            format!("substitution {:?}", sigma.0)
                        });
                    }
                }
            }
            let taus: Vec<Substitution> = renamings(target, target)
                .iter()
                .map(Substitution::from_renaming)
                .collect();
            for sigma in &sigmas {
                for tau in &taus {
                    let st = compose(sig, sigma, tau);
                    for (_, t) in &terms {
                        let ok = bind(sig, &bind(sig, t, sigma), tau) == bind(sig, t, &st);
                        report.record("associativity", ok, ctx, t, || {
                            format!("substitutions {:?} then {:?}", sigma.0, tau.0)
                        });
                    }
                }
            }
        }
    }
    report
}
