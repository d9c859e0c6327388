//! Turns parsed expressions into templates: resolves names and infers
//! omitted sort arguments by first-order unification.

use indexmap::IndexMap;

use super::lexer::{Diagnostic, Span};
use super::parser::{Expr, NatAst, SortAst};
use crate::sort::{Name, Sort, SortExpr, SortSignature};
use crate::template::{MetaSort, NatExpr, Template};
use crate::term::TermSignature;

/// Sort with unification variables.
#[derive(Debug, Clone, PartialEq, Eq)]
enum U {
    Var(usize),
    Con(Name, Vec<U>),
}

impl U {
    fn from_sort(s: &Sort) -> U {
        U::Con(s.head.clone(), s.args.iter().map(U::from_sort).collect())
    }

    fn from_expr(e: &SortExpr, params: &[U]) -> U {
        match e {
            SortExpr::Meta(i) => params[i - 1].clone(),
            SortExpr::Con(h, args) => U::Con(
                h.clone(),
                args.iter().map(|a| U::from_expr(a, params)).collect(),
            ),
        }
    }
}

#[derive(Default)]
struct Unifier {
    slots: Vec<Option<U>>,
}

impl Unifier {
    fn fresh(&mut self) -> U {
        self.slots.push(None);
        U::Var(self.slots.len() - 1)
    }

    fn walk(&self, u: &U) -> U {
        let mut u = u.clone();
        while let U::Var(v) = u {
            match &self.slots[v] {
                Some(next) => u = next.clone(),
                None => break,
            }
        }
        u
    }

    fn occurs(&self, v: usize, u: &U) -> bool {
        match self.walk(u) {
            U::Var(w) => v == w,
            U::Con(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify(&mut self, a: &U, b: &U) -> bool {
        match (self.walk(a), self.walk(b)) {
            (U::Var(x), U::Var(y)) if x == y => true,
            (U::Var(x), t) | (t, U::Var(x)) => {
                if self.occurs(x, &t) {
                    return false;
                }
                self.slots[x] = Some(t);
                true
            }
            (U::Con(h1, a1), U::Con(h2, a2)) => {
                h1 == h2
                    && a1.len() == a2.len()
                    && a1.iter().zip(&a2).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    fn to_sort(&self, u: &U) -> Option<Sort> {
        match self.walk(u) {
            U::Var(_) => None,
            U::Con(h, args) => Some(Sort {
                head: h,
                args: args
                    .iter()
                    .map(|a| self.to_sort(a))
                    .collect::<Option<_>>()?,
            }),
        }
    }

    fn show(&self, u: &U) -> String {
        match self.walk(u) {
            U::Var(_) => "_".to_string(),
            U::Con(h, args) if args.is_empty() => h.to_string(),
            U::Con(h, args) => {
                let parts: Vec<String> = args.iter().map(|a| self.show(a)).collect();
                format!("({h} {})", parts.join(" "))
            }
        }
    }
}

enum Pre {
    Meta(usize),
    Var(usize),
    Con {
        arity: Name,
        nat: Option<NatExpr>,
        sorts: Vec<U>,
        children: Vec<Pre>,
        span: Span,
    },
    Subst1 {
        body: Box<Pre>,
        arg: Box<Pre>,
    },
}

/// A named closed template and its sort.
pub type Lets = IndexMap<String, (Template, Sort)>;

/// Everything names in an expression can refer to.
pub struct Scope<'a> {
    pub sig: &'a TermSignature,
    /// Sorts allowed in written sort arguments (possibly with atoms).
    pub sorts: &'a SortSignature,
    /// What the written sort metavariables `1..n` stand for.
    pub params: Vec<Sort>,
    /// Metavariables referenced by bare name.
    pub metas: Vec<(String, MetaSort)>,
    /// Holes `$1..$k` or `$prev`, by name without `$`.
    pub holes: Vec<(String, MetaSort)>,
    pub lets: &'a Lets,
    pub nat_var: bool,
    /// Ambient context, outermost first (for plain terms).
    pub ctx: Vec<Sort>,
}

impl<'a> Scope<'a> {
    pub fn new(sig: &'a TermSignature, sorts: &'a SortSignature, lets: &'a Lets) -> Self {
        Scope {
            sig,
            sorts,
            params: Vec::new(),
            metas: Vec::new(),
            holes: Vec::new(),
            lets,
            nat_var: false,
            ctx: Vec::new(),
        }
    }
}

/// Converts written sort syntax to a sort expression of the given degree.
pub fn sort_expr(
    sorts: &SortSignature,
    ast: &SortAst,
    degree: usize,
) -> Result<SortExpr, Diagnostic> {
    let e = raw_expr(ast);
    sorts
        .validate_expr(&e, degree)
        .map_err(|err| Diagnostic::new(ast.span(), err.to_string()))?;
    Ok(e)
}

fn raw_expr(ast: &SortAst) -> SortExpr {
    match ast {
        SortAst::Meta(i, _) => SortExpr::Meta(*i),
        SortAst::Con(h, args, _) => SortExpr::con(h.as_str(), args.iter().map(raw_expr).collect()),
    }
}

/// Converts written sort syntax to a sort, resolving metavariables through
/// `params`.
pub fn sort_in_scope(
    sorts: &SortSignature,
    params: &[Sort],
    ast: &SortAst,
) -> Result<Sort, Diagnostic> {
    let e = sort_expr(sorts, ast, params.len())?;
    Ok(e.instantiate(params).expect("degree checked"))
}

struct Elab<'s, 'a> {
    scope: &'s Scope<'a>,
    u: Unifier,
}

impl Elab<'_, '_> {
    fn mismatch(&self, span: Span, what: &str, got: &U, expected: &U) -> Diagnostic {
        Diagnostic::new(
            span,
            format!(
                "{what} has sort {}, expected {}",
                self.u.show(got),
                self.u.show(expected)
            ),
        )
    }

    fn meta(
        &mut self,
        index: usize,
        name: &str,
        decl: &MetaSort,
        span: Span,
        expected: &U,
        stack: &[U],
    ) -> Result<Pre, Diagnostic> {
        let k = decl.binders.len();
        let fits = stack.len() >= k
            && decl
                .binders
                .iter()
                .zip(&stack[stack.len() - k..])
                .all(|(b, s)| self.u.unify(&U::from_sort(b), s));
        if !fits {
            let want: Vec<String> = decl.binders.iter().map(|b| b.to_string()).collect();
            return Err(Diagnostic::new(
                span,
                format!(
                    "`{name}` must be used under binders ending in [{}]",
                    want.join(", ")
                ),
            ));
        }
        let got = U::from_sort(&decl.sort);
        if !self.u.unify(&got, expected) {
            return Err(self.mismatch(span, &format!("`{name}`"), &got, expected));
        }
        Ok(Pre::Meta(index))
    }

    fn expr(&mut self, e: &Expr, expected: &U, stack: &mut Vec<U>) -> Result<Pre, Diagnostic> {
        match e {
            Expr::Var(n, span) => {
                let j = n - 1;
                if j >= stack.len() {
                    return Err(Diagnostic::new(
                        *span,
                        format!("variable {n} is out of scope ({} in scope)", stack.len()),
                    ));
                }
                let got = stack[stack.len() - 1 - j].clone();
                if !self.u.unify(&got, expected) {
                    return Err(self.mismatch(*span, &format!("(var {n})"), &got, expected));
                }
                Ok(Pre::Var(j))
            }
            Expr::Hole(h, span) => {
                let scope = self.scope;
                let Some(i) = scope.holes.iter().position(|(n, _)| n == h) else {
                    return Err(Diagnostic::new(*span, format!("unknown hole `${h}`")));
                };
                let decl = &scope.holes[i].1;
                self.meta(i, &format!("${h}"), decl, *span, expected, stack)
            }
            Expr::Ident(name, span) => {
                let scope = self.scope;
                if let Some(i) = scope.metas.iter().position(|(n, _)| n == name) {
                    let decl = &scope.metas[i].1;
                    return self.meta(i, name, decl, *span, expected, stack);
                }
                if let Some((tpl, sort)) = scope.lets.get(name) {
                    let got = U::from_sort(sort);
                    if !self.u.unify(&got, expected) {
                        return Err(self.mismatch(*span, &format!("`{name}`"), &got, expected));
                    }
                    return Ok(self.embed(tpl, *span));
                }
                self.node(name, None, &[], *span, expected, stack)
            }
            Expr::Nat(_, span) => Err(Diagnostic::new(
                *span,
                "a natural number is only allowed as the first argument of a constructor with a natural-number parameter",
            )),
            Expr::Node {
                head,
                sorts,
                args,
                span,
            } => self.node(head, sorts.as_deref(), args, *span, expected, stack),
            Expr::Subst { body, arg, .. } => {
                let alpha = self.u.fresh();
                let a = self.expr(arg, &alpha, stack)?;
                stack.push(alpha);
                let b = self.expr(body, expected, stack);
                stack.pop();
                Ok(Pre::Subst1 {
                    body: Box::new(b?),
                    arg: Box::new(a),
                })
            }
        }
    }

    /// A closed template from a `let`, with all sorts fixed.
    fn embed(&self, tpl: &Template, span: Span) -> Pre {
        match tpl {
            Template::Var(j) => Pre::Var(*j),
            Template::Meta(i) => Pre::Meta(*i),
            Template::Con {
                arity,
                nat,
                sorts,
                children,
            } => Pre::Con {
                arity: arity.clone(),
                nat: *nat,
                sorts: sorts.iter().map(|s| U::from_expr(s, &[])).collect(),
                children: children.iter().map(|c| self.embed(c, span)).collect(),
                span,
            },
            Template::Subst1 { body, arg } => Pre::Subst1 {
                body: Box::new(self.embed(body, span)),
                arg: Box::new(self.embed(arg, span)),
            },
        }
    }

    fn node(
        &mut self,
        head: &str,
        sorts: Option<&[SortAst]>,
        args: &[Expr],
        span: Span,
        expected: &U,
        stack: &mut Vec<U>,
    ) -> Result<Pre, Diagnostic> {
        let scope = self.scope;
        let arity = scope.sig.arity(head).ok_or_else(|| {
            Diagnostic::new(span, format!("unknown constructor or name `{head}`"))
        })?;
        let params: Vec<U> = match sorts {
            Some(list) => {
                if list.len() != arity.degree {
                    return Err(Diagnostic::new(
                        span,
                        format!(
                            "`{head}` takes {} sort argument(s), got {}",
                            arity.degree,
                            list.len()
                        ),
                    ));
                }
                list.iter()
                    .map(|s| sort_in_scope(scope.sorts, &scope.params, s).map(|s| U::from_sort(&s)))
                    .collect::<Result<_, _>>()?
            }
            None => (0..arity.degree).map(|_| self.u.fresh()).collect(),
        };
        let mut rest = args;
        let nat = if arity.nat_param {
            let Some((first, tail)) = args.split_first() else {
                return Err(Diagnostic::new(
                    span,
                    format!("`{head}` needs a natural-number argument"),
                ));
            };
            rest = tail;
            let is_k = matches!(first, Expr::Nat(NatAst::K | NatAst::KPlus1, _))
                || matches!(first, Expr::Ident(k, _) if k == "k");
            if is_k && !scope.nat_var {
                return Err(Diagnostic::new(
                    first.span(),
                    "`k` is only available in rules declared with `(k)`",
                ));
            }
            Some(match first {
                Expr::Nat(NatAst::Lit(n), _) => NatExpr::Lit(*n),
                Expr::Nat(NatAst::KPlus1, _) => NatExpr::Succ,
                Expr::Nat(NatAst::K, _) => NatExpr::Var,
                Expr::Ident(k, _) if k == "k" => NatExpr::Var,
                other => {
                    return Err(Diagnostic::new(
                        other.span(),
                        format!("`{head}` expects a natural number, `k` or `k+1` here"),
                    ))
                }
            })
        } else {
            None
        };
        if rest.len() != arity.args.len() {
            return Err(Diagnostic::new(
                span,
                format!(
                    "`{head}` takes {} argument(s), got {}",
                    arity.args.len(),
                    rest.len()
                ),
            ));
        }
        let out = U::from_expr(&arity.out, &params);
        if !self.u.unify(&out, expected) {
            return Err(self.mismatch(span, &format!("`{head}`"), &out, expected));
        }
        let mut children = Vec::with_capacity(rest.len());
        for (spec, arg) in arity.args.iter().zip(rest) {
            let saved = stack.len();
            stack.extend(spec.binders.iter().map(|b| U::from_expr(b, &params)));
            let want = U::from_expr(&spec.sort, &params);
            let child = self.expr(arg, &want, stack);
            stack.truncate(saved);
            children.push(child?);
        }
        Ok(Pre::Con {
            arity: arity.name.clone(),
            nat,
            sorts: params,
            children,
            span,
        })
    }

    fn finish(&self, pre: Pre) -> Result<Template, Diagnostic> {
        Ok(match pre {
            Pre::Meta(i) => Template::Meta(i),
            Pre::Var(j) => Template::Var(j),
            Pre::Subst1 { body, arg } => Template::Subst1 {
                body: Box::new(self.finish(*body)?),
                arg: Box::new(self.finish(*arg)?),
            },
            Pre::Con {
                arity,
                nat,
                sorts,
                children,
                span,
            } => {
                let sorts = sorts
                    .iter()
                    .map(|u| self.u.to_sort(u).map(|s| s.to_expr()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| {
                        Diagnostic::new(
                            span,
                            format!(
                                "cannot infer the sort arguments of `{arity}`; write them as `({arity}[...] ...)`"
                            ),
                        )
                    })?;
                Template::Con {
                    arity,
                    nat,
                    sorts,
                    children: children
                        .into_iter()
                        .map(|c| self.finish(c))
                        .collect::<Result<_, _>>()?,
                }
            }
        })
    }
}

/// Elaborates `expr` in `scope`, optionally against an expected sort, and
/// returns the template with its sort.
pub fn elaborate(
    scope: &Scope<'_>,
    expr: &Expr,
    expected: Option<&Sort>,
) -> Result<(Template, Sort), Diagnostic> {
    let mut el = Elab {
        scope,
        u: Unifier::default(),
    };
    let want = match expected {
        Some(s) => U::from_sort(s),
        None => el.u.fresh(),
    };
    let mut stack: Vec<U> = scope.ctx.iter().map(U::from_sort).collect();
    let pre = el.expr(expr, &want, &mut stack)?;
    let sort = el.u.to_sort(&want).ok_or_else(|| {
        Diagnostic::new(
            expr.span(),
            format!(
                "cannot determine the sort of this expression (got {})",
                el.u.show(&want)
            ),
        )
    })?;
    Ok((el.finish(pre)?, sort))
}
