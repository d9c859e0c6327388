//! Rewrite rules over a term signature: second-order pattern matching,
//! one-step reduction closed under contexts, bounded reachability and
//! outermost-leftmost normalization.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::enumerate::{small_contexts, Enumerator};
use crate::sort::{atoms, Name, Sort, SortError};
use crate::template::{
    check_template, instantiate, CheckEnv, Instance, MetaDecl, MetaSort, NatExpr, Template,
    TemplateError,
};
use crate::term::{sort_of, ConTerm, Context, Position, Term, TermError, TermSignature};

/// A directed rule `lhs => rhs` between templates over metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: Name,
    pub degree: usize,
    pub nat_var: bool,
    pub metas: Vec<MetaDecl>,
    pub lhs: Template,
    pub rhs: Template,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule `{rule}`: {source}")]
    Template {
        rule: String,
        side: &'static str,
        source: TemplateError,
    },
    #[error("rule `{rule}`: metavariable `{meta}`: {source}")]
    BadMeta {
        rule: String,
        meta: String,
        source: SortError,
    },
    #[error("rule `{rule}`: left-hand side must be rooted at a constructor")]
    VariableRoot { rule: String },
    #[error("rule `{rule}`: left-hand side may not contain substitution")]
    SubstInPattern { rule: String },
    #[error(
        "rule `{rule}`: metavariable `{meta}` must occur exactly once on the left, found {count}"
    )]
    NonLinear {
        rule: String,
        meta: String,
        count: usize,
    },
    #[error("rule `{rule}`: metavariable `{meta}` must sit directly under binders [{expected}] on the left")]
    PatternScope {
        rule: String,
        meta: String,
        expected: String,
    },
    #[error("rule `{rule}`: sort metavariable {index} is not fixed by the left-hand side")]
    UnfixedSortMeta { rule: String, index: usize },
    #[error("rule `{rule}`: `k` is used but not bound by the left-hand side")]
    UnboundNatVar { rule: String },
    #[error("rule `{rule}`: sides have different sorts ({lhs} vs {rhs})")]
    SortMismatch { rule: String, lhs: Sort, rhs: Sort },
    #[error("duplicate rule `{0}`")]
    Duplicate(String),
}

impl RewriteRule {
    /// Load-time checks: well-formed declarations, pattern restrictions on
    /// the left, and equal sorts of both sides for generic sort arguments.
    /// Returns the generic sort of the rule.
    pub fn check(&self, sig: &TermSignature) -> Result<Sort, RuleError> {
        let rule = self.name.to_string();
        let atoms = atoms(self.degree);
        let ext_sorts = sig.sorts.with_atoms(self.degree);
        let mut metas = Vec::with_capacity(self.metas.len());
        for m in &self.metas {
            let bad = |source| RuleError::BadMeta {
                rule: rule.clone(),
                meta: m.name.to_string(),
                source,
            };
            for b in m.binders.iter().chain(std::iter::once(&m.sort)) {
                sig.sorts.validate_expr(b, self.degree).map_err(bad)?;
            }
            metas.push(MetaSort {
                binders: m
                    .binders
                    .iter()
                    .map(|b| b.instantiate(&atoms).expect("validated"))
                    .collect(),
                sort: m.sort.instantiate(&atoms).expect("validated"),
            });
        }
        if !matches!(self.lhs, Template::Con { .. }) {
            return Err(RuleError::VariableRoot { rule });
        }
        if self.lhs.contains_subst() {
            return Err(RuleError::SubstInPattern { rule });
        }
        let mut counts = vec![0; self.metas.len()];
        self.lhs.meta_counts(&mut counts);
        for (m, &c) in self.metas.iter().zip(&counts) {
            if c != 1 {
                return Err(RuleError::NonLinear {
                    rule,
                    meta: m.name.to_string(),
                    count: c,
                });
            }
        }
        self.check_pattern_scopes(sig, &self.lhs, 0)?;
        let mut fixed = Vec::new();
        self.lhs.sort_metas(&mut fixed);
        for i in 1..=self.degree {
            if !fixed.contains(&i) {
                return Err(RuleError::UnfixedSortMeta { rule, index: i });
            }
        }
        if self.rhs.uses_nat_var() && !self.lhs.uses_nat_var() {
            return Err(RuleError::UnboundNatVar { rule });
        }
        let sig_ext = sig.with_sorts(ext_sorts.clone());
        let names: Vec<Name> = self.metas.iter().map(|m| m.name.clone()).collect();
        let env = CheckEnv {
            sig: &sig_ext,
            sorts: &ext_sorts,
            params: &atoms,
            metas: &metas,
            meta_names: &names,
            nat_var: self.nat_var,
        };
        let side = |side: &'static str, tpl: &Template| {
            check_template(&env, tpl, &mut Vec::new()).map_err(|source| RuleError::Template {
                rule: rule.clone(),
                side,
                source,
            })
        };
        let lhs = side("left", &self.lhs)?;
        let rhs = side("right", &self.rhs)?;
        if lhs != rhs {
            return Err(RuleError::SortMismatch { rule, lhs, rhs });
        }
        Ok(lhs)
    }

    // Each metavariable on the left must see exactly its declared binders.
    fn check_pattern_scopes(
        &self,
        sig: &TermSignature,
        tpl: &Template,
        depth: usize,
    ) -> Result<(), RuleError> {
        match tpl {
            Template::Meta(i) => {
                let decl = &self.metas[*i];
                if decl.binders.len() != depth {
                    return Err(RuleError::PatternScope {
                        rule: self.name.to_string(),
                        meta: decl.name.to_string(),
                        expected: decl
                            .binders
                            .iter()
                            .map(|b| b.to_string())
                            .collect::<Vec<_>>()
                            .join(", "),
                    });
                }
                Ok(())
            }
            Template::Con {
                arity, children, ..
            } => {
                let a = sig.arity(arity);
                for (i, c) in children.iter().enumerate() {
                    let b = a.map_or(0, |a| a.args.get(i).map_or(0, |x| x.binders.len()));
                    self.check_pattern_scopes(sig, c, depth + b)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// A 2-signature: a term signature and its rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub signature: TermSignature,
    rules: Vec<RewriteRule>,
}

impl RuleSet {
    pub fn new(signature: TermSignature, rules: Vec<RewriteRule>) -> Result<Self, RuleError> {
        let mut seen = std::collections::HashSet::new();
        for r in &rules {
            if !seen.insert(r.name.clone()) {
                return Err(RuleError::Duplicate(r.name.to_string()));
            }
            r.check(&signature)?;
        }
        Ok(RuleSet { signature, rules })
    }

    /// A signature with no rules.
    pub fn bare(signature: TermSignature) -> Self {
        RuleSet {
            signature,
            rules: Vec::new(),
        }
    }

    /// The same rules over an extended signature; the rules are not
    /// re-checked.
    pub(crate) fn over(&self, signature: TermSignature) -> RuleSet {
        RuleSet {
            signature,
            rules: self.rules.clone(),
        }
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| &*r.name == name)
    }
}

/// Values for a rule's parameters found by matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub sorts: Vec<Sort>,
    pub nat: Option<u64>,
    /// Each term metavariable's value; it lives in the context of the match
    /// extended by the metavariable's binders.
    pub metas: Vec<Term>,
}

struct Partial {
    sorts: Vec<Option<Sort>>,
    nat: Option<u64>,
    metas: Vec<Option<Term>>,
}

/// Matches the left-hand side of `rule` against `t`.
pub fn match_rule(rule: &RewriteRule, t: &Term) -> Option<Assignment> {
    let mut p = Partial {
        sorts: vec![None; rule.degree],
        nat: None,
        metas: vec![None; rule.metas.len()],
    };
    if !match_at(&rule.lhs, t, &mut p) {
        return None;
    }
    Some(Assignment {
        sorts: p.sorts.into_iter().collect::<Option<_>>()?,
        nat: p.nat,
        metas: p.metas.into_iter().collect::<Option<_>>()?,
    })
}

fn match_at(pat: &Template, t: &Term, p: &mut Partial) -> bool {
    match (pat, t) {
        (Template::Meta(i), _) => {
            p.metas[*i] = Some(t.clone());
            true
        }
        (Template::Var(j), Term::Var(i)) => i == j,
        (
            Template::Con {
                arity,
                nat,
                sorts,
                children,
            },
            Term::Con(c),
        ) => {
            if *arity != c.arity
                || children.len() != c.children.len()
                || sorts.len() != c.sorts.len()
            {
                return false;
            }
            for (pe, s) in sorts.iter().zip(&c.sorts) {
                if !pe.match_sort(s, &mut p.sorts) {
                    return false;
                }
            }
            match (nat, c.nat) {
                (None, None) => {}
                (Some(pe), Some(n)) => {
                    let k = match pe {
                        NatExpr::Lit(m) => {
                            if *m != n {
                                return false;
                            }
                            None
                        }
                        NatExpr::Var => Some(n),
                        NatExpr::Succ => match n.checked_sub(1) {
                            Some(k) => Some(k),
                            None => return false,
                        },
                    };
                    if let Some(k) = k {
                        match p.nat {
                            Some(prev) if prev != k => return false,
                            _ => p.nat = Some(k),
                        }
                    }
                }
                _ => return false,
            }
            children
                .iter()
                .zip(&c.children)
                .all(|(pc, tc)| match_at(pc, tc, p))
        }
        _ => false,
    }
}

/// The right-hand side of `rule` under an assignment.
pub fn apply_rule(rule: &RewriteRule, sig: &TermSignature, a: &Assignment) -> Term {
    let metas: Vec<(Term, usize)> = a
        .metas
        .iter()
        .zip(&rule.metas)
        .map(|(t, d)| (t.clone(), d.binders.len()))
        .collect();
    let inst = Instance {
        params: &a.sorts,
        nat: a.nat,
        metas: &metas,
    };
    instantiate(sig, &rule.rhs, &inst, 0)
}

/// One rewrite step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub position: Position,
    pub rule: Name,
    pub before: Term,
    pub after: Term,
}

/// All one-step reducts of `t`: every rule at every position, positions in
/// pre-order (outermost-leftmost first), rules in declaration order.
pub fn successors(rs: &RuleSet, t: &Term) -> Vec<(Position, Name, Term)> {
    let mut out = Vec::new();
    successors_at(rs, t, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|(p, r, t)| (Position(p), r, t))
        .collect()
}

fn successors_at(
    rs: &RuleSet,
    t: &Term,
    path: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Name, Term)>,
) {
    let Term::Con(c) = t else { return };
    for rule in &rs.rules {
        if let Some(a) = match_rule(rule, t) {
            out.push((
                path.clone(),
                rule.name.clone(),
                apply_rule(rule, &rs.signature, &a),
            ));
        }
    }
    for (i, child) in c.children.iter().enumerate() {
        let mut inner = Vec::new();
        path.push(i);
        successors_at(rs, child, path, &mut inner);
        path.pop();
        for (p, r, reduct) in inner {
            let mut children = c.children.clone();
            children[i] = reduct;
            out.push((
                p,
                r,
                Term::Con(ConTerm {
                    arity: c.arity.clone(),
                    nat: c.nat,
                    sorts: c.sorts.clone(),
                    children,
                }),
            ));
        }
    }
}

/// The outermost-leftmost reduct, if any.
pub fn first_successor(rs: &RuleSet, t: &Term) -> Option<(Position, Name, Term)> {
    fn go(rs: &RuleSet, t: &Term, path: &mut Vec<usize>) -> Option<(Vec<usize>, Name, Term)> {
        let Term::Con(c) = t else { return None };
        for rule in &rs.rules {
            if let Some(a) = match_rule(rule, t) {
                return Some((
                    path.clone(),
                    rule.name.clone(),
                    apply_rule(rule, &rs.signature, &a),
                ));
            }
        }
        for (i, child) in c.children.iter().enumerate() {
            path.push(i);
            let found = go(rs, child, path);
            path.pop();
            if let Some((p, r, reduct)) = found {
                let mut children = c.children.clone();
                children[i] = reduct;
                return Some((
                    p,
                    r,
                    Term::Con(ConTerm {
                        arity: c.arity.clone(),
                        nat: c.nat,
                        sorts: c.sorts.clone(),
                        children,
                    }),
                ));
            }
        }
        None
    }
    go(rs, t, &mut Vec::new()).map(|(p, r, t)| (Position(p), r, t))
}

/// Outcome of a bounded reachability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    /// `false` only means "not found within the budget".
    pub reached: bool,
    /// Shortest witness when reached.
    pub path: Vec<Step>,
    /// Nodes whose successors were computed.
    pub expansions: usize,
    /// Distinct terms seen.
    pub visited: usize,
}

/// Breadth-first search for `target` from `source` with at most `fuel` node
/// expansions and structural-equality deduplication.
pub fn reduces_to(rs: &RuleSet, source: &Term, target: &Term, fuel: usize) -> Reachability {
    if source == target {
        return Reachability {
            reached: true,
            path: Vec::new(),
            expansions: 0,
            visited: 1,
        };
    }
    // parent index, position, rule
    let mut nodes: Vec<(Term, Option<(usize, Position, Name)>)> = vec![(source.clone(), None)];
    let mut index: HashMap<Term, usize> = HashMap::new();
    index.insert(source.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut expansions = 0;
    while let Some(current) = queue.pop_front() {
        if expansions >= fuel {
            break;
        }
        expansions += 1;
        let term = nodes[current].0.clone();
        for (pos, rule, next) in successors(rs, &term) {
            if index.contains_key(&next) {
                continue;
            }
            let id = nodes.len();
            let hit = next == *target;
            index.insert(next.clone(), id);
            nodes.push((next, Some((current, pos, rule))));
            if hit {
                return Reachability {
                    reached: true,
                    path: witness(&nodes, id),
                    expansions,
                    visited: nodes.len(),
                };
            }
            queue.push_back(id);
        }
    }
    Reachability {
        reached: false,
        path: Vec::new(),
        expansions,
        visited: nodes.len(),
    }
}

fn witness(nodes: &[(Term, Option<(usize, Position, Name)>)], mut id: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    while let Some((parent, pos, rule)) = &nodes[id].1 {
        steps.push(Step {
            position: pos.clone(),
            rule: rule.clone(),
            before: nodes[*parent].0.clone(),
            after: nodes[id].0.clone(),
        });
        id = *parent;
    }
    steps.reverse();
    steps
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    Normal { term: Term, steps: Vec<Step> },
    FuelExhausted { term: Term, steps: Vec<Step> },
}

impl Normalization {
    pub fn term(&self) -> &Term {
        match self {
            Normalization::Normal { term, .. } | Normalization::FuelExhausted { term, .. } => term,
        }
    }

    pub fn steps(&self) -> &[Step] {
        match self {
            Normalization::Normal { steps, .. } | Normalization::FuelExhausted { steps, .. } => {
                steps
            }
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, Normalization::Normal { .. })
    }
}

/// Repeatedly takes the outermost-leftmost step, at most `fuel` times.
pub fn normalize(rs: &RuleSet, t: &Term, fuel: usize) -> Normalization {
    let mut term = t.clone();
    let mut steps = Vec::new();
    loop {
        let Some((position, rule, next)) = first_successor(rs, &term) else {
            return Normalization::Normal { term, steps };
        };
        if steps.len() >= fuel {
            return Normalization::FuelExhausted { term, steps };
        }
        steps.push(Step {
            position,
            rule,
            before: term,
            after: next.clone(),
        });
        term = next;
    }
}

/// A step that changed the sort of a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortChange {
    pub ctx: Context,
    pub term: Term,
    pub sort: Sort,
    pub rule: Name,
    pub position: Position,
    pub successor: Term,
    /// Sort of the successor, or the error it raised.
    pub got: Result<Sort, TermError>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubjectReductionReport {
    pub terms: usize,
    /// Steps examined.
    pub checked: usize,
    pub failures: Vec<SortChange>,
}

impl SubjectReductionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every one-step successor of every enumerated term keeps its
/// sort. Terms range over the enumerator's universe in every context of at
/// most `ctx_len` one-node sorts.
pub fn check_subject_reduction(
    rs: &RuleSet,
    max_nodes: usize,
    ctx_len: usize,
) -> SubjectReductionReport {
    let sig = &rs.signature;
    let mut en = Enumerator::new(sig);
    let universe = en.universe().to_vec();
    let mut report = SubjectReductionReport::default();
    for ctx in small_contexts(&sig.sorts, ctx_len) {
        for sort in &universe {
            for t in en.terms(&ctx, sort, max_nodes) {
                report.terms += 1;
                for (position, rule, successor) in successors(rs, &t) {
                    report.checked += 1;
                    let got = sort_of(sig, &ctx, &successor);
                    if got.as_ref() != Ok(sort) {
                        report.failures.push(SortChange {
                            ctx: ctx.clone(),
                            term: t.clone(),
                            sort: sort.clone(),
                            rule,
                            position,
                            successor,
                            got,
                        });
                    }
                }
            }
        }
    }
    report
}
