//! Term templates: terms with metavariables, bound-variable references and
//! single-variable substitution. Rewrite rules use them for both sides;
//! representations use them (with metavariables as argument holes) for the
//! image of each arity.

use std::fmt;

use thiserror::Error;

use crate::sort::{Name, Sort, SortError, SortExpr, SortSignature};
use crate::term::{subst1, ConTerm, Position, Term, TermSignature};

/// Natural-number argument of a template node: a literal, the rule's
/// variable `k`, or `k+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NatExpr {
    Lit(u64),
    Var,
    Succ,
}

impl NatExpr {
    pub fn eval(self, k: Option<u64>) -> Option<u64> {
        match self {
            NatExpr::Lit(m) => Some(m),
            NatExpr::Var => k,
            NatExpr::Succ => k.map(|k| k + 1),
        }
    }

    pub fn uses_var(self) -> bool {
        !matches!(self, NatExpr::Lit(_))
    }
}

impl fmt::Display for NatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatExpr::Lit(m) => write!(f, "{m}"),
            NatExpr::Var => write!(f, "k"),
            NatExpr::Succ => write!(f, "k+1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Template {
    /// Metavariable, 0-based into the owner's declarations.
    Meta(usize),
    /// Variable bound by an enclosing binder of the template itself.
    Var(usize),
    Con {
        arity: Name,
        nat: Option<NatExpr>,
        sorts: Vec<SortExpr>,
        children: Vec<Template>,
    },
    /// `body` lives under one extra binder which is replaced by `arg`.
    Subst1 {
        body: Box<Template>,
        arg: Box<Template>,
    },
}

impl Template {
    pub fn con(arity: &str, sorts: Vec<SortExpr>, children: Vec<Template>) -> Template {
        Template::Con {
            arity: Name::from(arity),
            nat: None,
            sorts,
            children,
        }
    }

    pub fn nat_con(arity: &str, nat: NatExpr) -> Template {
        Template::Con {
            arity: Name::from(arity),
            nat: Some(nat),
            sorts: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn subst1(body: Template, arg: Template) -> Template {
        Template::Subst1 {
            body: Box::new(body),
            arg: Box::new(arg),
        }
    }

    /// Embeds a closed term (its variables become template-bound variables).
    pub fn from_term(t: &Term) -> Template {
        match t {
            Term::Var(i) => Template::Var(*i),
            Term::Con(c) => Template::Con {
                arity: c.arity.clone(),
                nat: c.nat.map(NatExpr::Lit),
                sorts: c.sorts.iter().map(SortExpr::from_sort).collect(),
                children: c.children.iter().map(Template::from_term).collect(),
            },
        }
    }

    /// Occurrence count of each metavariable.
    pub fn meta_counts(&self, counts: &mut Vec<usize>) {
        match self {
            Template::Meta(i) => {
                if counts.len() <= *i {
                    counts.resize(*i + 1, 0);
                }
                counts[*i] += 1;
            }
            Template::Var(_) => {}
            Template::Con { children, .. } => children.iter().for_each(|c| c.meta_counts(counts)),
            Template::Subst1 { body, arg } => {
                body.meta_counts(counts);
                arg.meta_counts(counts);
            }
        }
    }

    pub fn uses_nat_var(&self) -> bool {
        match self {
            Template::Con { nat, children, .. } => {
                nat.is_some_and(NatExpr::uses_var) || children.iter().any(Template::uses_nat_var)
            }
            Template::Subst1 { body, arg } => body.uses_nat_var() || arg.uses_nat_var(),
            _ => false,
        }
    }

    pub fn contains_subst(&self) -> bool {
        match self {
            Template::Subst1 { .. } => true,
            Template::Con { children, .. } => children.iter().any(Template::contains_subst),
            _ => false,
        }
    }

    /// Sort metavariables mentioned in constructor sort arguments.
    pub fn sort_metas(&self, out: &mut Vec<usize>) {
        match self {
            Template::Con {
                sorts, children, ..
            } => {
                sorts.iter().for_each(|s| s.metas(out));
                children.iter().for_each(|c| c.sort_metas(out));
            }
            Template::Subst1 { body, arg } => {
                body.sort_metas(out);
                arg.sort_metas(out);
            }
            _ => {}
        }
    }
}

/// A metavariable declaration: the sorts it binds (outermost first) and its
/// sort, as expressions of the owner's degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaDecl {
    pub name: Name,
    pub binders: Vec<SortExpr>,
    pub sort: SortExpr,
}

impl MetaDecl {
    pub fn new(name: &str, binders: Vec<SortExpr>, sort: SortExpr) -> Self {
        MetaDecl {
            name: Name::from(name),
            binders,
            sort,
        }
    }
}

/// A metavariable declaration with concrete sorts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaSort {
    pub binders: Vec<Sort>,
    pub sort: Sort,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("at {position}: unknown arity `{arity}`")]
    UnknownArity { position: Position, arity: String },
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
    #[error("at {position}: expected sort {expected}, got {got}")]
    IllSorted {
        position: Position,
        expected: Sort,
        got: Sort,
    },
    #[error("at {position}: bound variable {index} escapes the template's {depth} binder(s)")]
    UnboundVar {
        position: Position,
        index: usize,
        depth: usize,
    },
    #[error("at {position}: unknown metavariable #{index}")]
    UnknownMeta { position: Position, index: usize },
    #[error("at {position}: metavariable `{meta}` must occur under binders ending in [{expected}], found [{found}]")]
    MetaScope {
        position: Position,
        meta: String,
        expected: String,
        found: String,
    },
    #[error("at {position}: {source}")]
    BadSort {
        position: Position,
        source: SortError,
    },
}

fn join_sorts(sorts: &[Sort]) -> String {
    sorts
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// What a template's metavariables, sort metavariables and nat variable
/// stand for while checking.
pub struct CheckEnv<'a> {
    pub sig: &'a TermSignature,
    /// Sort signature the instantiated sorts live in (usually with atoms).
    pub sorts: &'a SortSignature,
    pub params: &'a [Sort],
    pub metas: &'a [MetaSort],
    pub meta_names: &'a [Name],
    pub nat_var: bool,
}

/// Computes the sort of `tpl` under the template binders in `stack`
/// (outermost first).
pub fn check_template(
    env: &CheckEnv<'_>,
    tpl: &Template,
    stack: &mut Vec<Sort>,
) -> Result<Sort, TemplateError> {
    check_at(env, tpl, stack, &mut Vec::new())
}

fn check_at(
    env: &CheckEnv<'_>,
    tpl: &Template,
    stack: &mut Vec<Sort>,
    path: &mut Vec<usize>,
) -> Result<Sort, TemplateError> {
    let here = |path: &Vec<usize>| Position(path.clone());
    match tpl {
        Template::Var(j) => {
            if *j < stack.len() {
                Ok(stack[stack.len() - 1 - j].clone())
            } else {
                Err(TemplateError::UnboundVar {
                    position: here(path),
                    index: *j,
                    depth: stack.len(),
                })
            }
        }
        Template::Meta(i) => {
            let decl = env.metas.get(*i).ok_or(TemplateError::UnknownMeta {
                position: here(path),
                index: *i,
            })?;
            let k = decl.binders.len();
            if stack.len() < k || stack[stack.len() - k..] != decl.binders[..] {
                return Err(TemplateError::MetaScope {
                    position: here(path),
                    meta: env
                        .meta_names
                        .get(*i)
                        .map_or_else(|| format!("#{i}"), |n| n.to_string()),
                    expected: join_sorts(&decl.binders),
                    found: join_sorts(stack),
                });
            }
            Ok(decl.sort.clone())
        }
        Template::Subst1 { body, arg } => {
            path.push(1);
            let arg_sort = check_at(env, arg, stack, path);
            path.pop();
            let arg_sort = arg_sort?;
            stack.push(arg_sort);
            path.push(0);
            let out = check_at(env, body, stack, path);
            path.pop();
            stack.pop();
            out
        }
        Template::Con {
            arity,
            nat,
            sorts,
            children,
        } => {
            let a = env
                .sig
                .arity(arity)
                .ok_or_else(|| TemplateError::UnknownArity {
                    position: here(path),
                    arity: arity.to_string(),
                })?;
            if sorts.len() != a.degree {
                return Err(TemplateError::SortArgCount {
                    position: here(path),
                    arity: arity.to_string(),
                    expected: a.degree,
                    got: sorts.len(),
                });
            }
            let bad_sort = |source| TemplateError::BadSort {
                position: here(path),
                source,
            };
            let mut params = Vec::with_capacity(sorts.len());
            for s in sorts {
                let inst = s.instantiate(env.params).map_err(bad_sort)?;
                env.sorts.validate(&inst).map_err(bad_sort)?;
                params.push(inst);
            }
            match (a.nat_param, nat) {
                (true, None) => {
                    return Err(TemplateError::NatParam {
                        position: here(path),
                        arity: arity.to_string(),
                        problem: "is missing",
                    })
                }
                (false, Some(_)) => {
                    return Err(TemplateError::NatParam {
                        position: here(path),
                        arity: arity.to_string(),
                        problem: "is not expected",
                    })
                }
                (true, Some(n)) if n.uses_var() && !env.nat_var => {
                    return Err(TemplateError::NatParam {
                        position: here(path),
                        arity: arity.to_string(),
                        problem: "uses `k` but no natural-number variable is declared",
                    })
                }
                _ => {}
            }
            if children.len() != a.args.len() {
                return Err(TemplateError::ChildCount {
                    position: here(path),
                    arity: arity.to_string(),
                    expected: a.args.len(),
                    got: children.len(),
                });
            }
            for (i, child) in children.iter().enumerate() {
                let binders = a.binder_sorts(i, &params);
                let expected = a.arg_sort(i, &params);
                let saved = stack.len();
                stack.extend(binders);
                path.push(i);
                let got = check_at(env, child, stack, path);
                let res = match got {
                    Ok(got) if got == expected => Ok(()),
                    Ok(got) => Err(TemplateError::IllSorted {
                        position: here(path),
                        expected,
                        got,
                    }),
                    Err(e) => Err(e),
                };
                path.pop();
                stack.truncate(saved);
                res?;
            }
            Ok(a.out_sort(&params))
        }
    }
}

/// Values for a template's parameters during instantiation.
pub struct Instance<'a> {
    pub params: &'a [Sort],
    pub nat: Option<u64>,
    /// Each metavariable's value and the number of binders it was declared
    /// under; the value lives in the ambient context extended by those.
    pub metas: &'a [(Term, usize)],
}

/// Builds the term denoted by `tpl` in the ambient context extended by
/// `depth` template binders.
///
/// A metavariable declared under `k` binders and used under `depth >= k`
/// binders refers to the innermost `k` of them; its value is weakened past
/// the other `depth - k`.
pub fn instantiate(sig: &TermSignature, tpl: &Template, inst: &Instance<'_>, depth: usize) -> Term {
    match tpl {
        Template::Var(j) => Term::Var(*j),
        Template::Meta(i) => {
            let (value, k) = &inst.metas[*i];
            weaken_above(sig, value, *k, depth - k)
        }
        Template::Subst1 { body, arg } => {
            let b = instantiate(sig, body, inst, depth + 1);
            let a = instantiate(sig, arg, inst, depth);
            subst1(sig, &b, &a)
        }
        Template::Con {
            arity,
            nat,
            sorts,
            children,
        } => {
            let a = sig.arity(arity).expect("checked template");
            let params: Vec<Sort> = sorts
                .iter()
                .map(|s| s.instantiate(inst.params).expect("checked template"))
                .collect();
            let children = children
                .iter()
                .enumerate()
                .map(|(i, c)| instantiate(sig, c, inst, depth + a.args[i].binders.len()))
                .collect();
            Term::Con(ConTerm {
                arity: arity.clone(),
                nat: nat.map(|n| n.eval(inst.nat).expect("nat variable bound")),
                sorts: params,
                children,
            })
        }
    }
}

/// Weakens the variables of `t` at or above index `keep` by `k`.
fn weaken_above(sig: &TermSignature, t: &Term, keep: usize, k: usize) -> Term {
    if k == 0 {
        return t.clone();
    }
    crate::term::map_free_vars(sig, t, keep, &mut |i, depth| Term::Var(i + k + depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{ArgSpec, Arity};

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

    #[test]
    fn meta_weakened_past_extra_binders() {
        let sig = ulc();
        // abs (abs M) with M declared under no binders: M's free var 0 must
        // become 2.
        let tpl = Template::con(
            "abs",
            vec![],
            vec![Template::con("abs", vec![], vec![Template::Meta(0)])],
        );
        let inst = Instance {
            params: &[],
            nat: None,
            metas: &[(Term::Var(0), 0)],
        };
        let t = instantiate(&sig, &tpl, &inst, 0);
        let expected = Term::con(
            "abs",
            vec![],
            vec![Term::con("abs", vec![], vec![Term::Var(2)])],
        );
        assert_eq!(t, expected);
        // declared under one binder: own var stays, outer ones move by one
        let tpl = Template::con(
            "abs",
            vec![],
            vec![Template::con("abs", vec![], vec![Template::Meta(0)])],
        );
        let body = Term::con("app", vec![], vec![Term::Var(0), Term::Var(1)]);
        let inst = Instance {
            params: &[],
            nat: None,
            metas: &[(body, 1)],
        };
        let t = instantiate(&sig, &tpl, &inst, 0);
        let inner = Term::con("app", vec![], vec![Term::Var(0), Term::Var(2)]);
        assert_eq!(
            t,
            Term::con("abs", vec![], vec![Term::con("abs", vec![], vec![inner])])
        );
    }

    #[test]
    fn check_rejects_escaping_var() {
        let sig = ulc();
        let sorts = sig.sorts.clone();
        let env = CheckEnv {
            sig: &sig,
            sorts: &sorts,
            params: &[],
            metas: &[],
            meta_names: &[],
            nat_var: false,
        };
        let tpl = Template::con("abs", vec![], vec![Template::Var(1)]);
        assert!(matches!(
            check_template(&env, &tpl, &mut Vec::new()),
            Err(TemplateError::UnboundVar {
                index: 1,
                depth: 1,
                ..
            })
        ));
        let ok = Template::con("abs", vec![], vec![Template::Var(0)]);
        assert_eq!(
            check_template(&env, &ok, &mut Vec::new()).unwrap(),
            Sort::atom("*")
        );
    }
}
