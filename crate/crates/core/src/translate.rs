//! Representations of one 2-signature in the term model of another, the
//! translation they induce by structural recursion, and checkers for the
//! substitution law, rule satisfaction and faithfulness.

use std::collections::HashMap;

use indexmap::IndexMap;
use thiserror::Error;

use crate::enumerate::{small_contexts, Enumerator};
use crate::laws::law_substitutions;
use crate::rewrite::{reduces_to, successors, RewriteRule, RuleSet, Step};
use crate::sort::{Name, Sort, SortExpr, SortTranslation};
use crate::template::{
    check_template, instantiate, CheckEnv, Instance, MetaSort, NatExpr, Template, TemplateError,
};
use crate::term::{
    bind, sort_of, subst1, ArgSpec, Arity, ConTerm, Context, Position, Substitution, Term,
    TermSignature,
};

/// Image of one source arity. Holes `Meta(i)` stand for the translated
/// `i`-th argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetTemplate {
    Plain(Template),
    /// For arities with a natural-number parameter: `zero` is closed and
    /// `succ` has the single hole `Meta(0)` for the previous value.
    NatRec {
        zero: Template,
        succ: Template,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("sort translation goes from a different sort signature than the source")]
    SourceSortMismatch,
    #[error("sort translation goes into a different sort signature than the target")]
    TargetSortMismatch,
    #[error("template for unknown source arity `{0}`")]
    UnknownArity(String),
    #[error("no template for arity `{0}`")]
    Missing(String),
    #[error("arity `{arity}` has a natural-number parameter and needs zero/succ cases")]
    NeedsNatRec { arity: String },
    #[error("arity `{arity}` has no natural-number parameter")]
    UnexpectedNatRec { arity: String },
    #[error("template for `{arity}`{case}: {source}")]
    Template {
        arity: String,
        case: &'static str,
        source: TemplateError,
    },
    #[error("template for `{arity}`{case} has sort {got}, expected {expected}")]
    WrongSort {
        arity: String,
        case: &'static str,
        expected: Sort,
        got: Sort,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("arity `{0}` is not represented")]
    Unrepresented(String),
    #[error("rule `{0}` is not in the source signature")]
    UnknownRule(String),
    #[error("rule `{rule}`: sides fold to different sorts ({lhs} vs {rhs})")]
    SortClash { rule: String, lhs: Sort, rhs: Sort },
}

/// A source 2-signature represented in a target one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub source: RuleSet,
    pub target: RuleSet,
    pub sort_trans: SortTranslation,
    templates: IndexMap<Name, TargetTemplate>,
}

impl Representation {
    /// A representation covering every source arity.
    pub fn new(
        source: RuleSet,
        target: RuleSet,
        sort_trans: SortTranslation,
        templates: IndexMap<Name, TargetTemplate>,
    ) -> Result<Self, RepresentationError> {
        let rep = Representation::partial(source, target, sort_trans, templates)?;
        if let Some(a) = rep.unrepresented().first() {
            return Err(RepresentationError::Missing(a.to_string()));
        }
        Ok(rep)
    }

    /// A representation that may leave some arities out; translating a term
    /// that uses one of them fails.
    pub fn partial(
        source: RuleSet,
        target: RuleSet,
        sort_trans: SortTranslation,
        templates: IndexMap<Name, TargetTemplate>,
    ) -> Result<Self, RepresentationError> {
        if sort_trans.source() != &source.signature.sorts {
            return Err(RepresentationError::SourceSortMismatch);
        }
        if sort_trans.target() != &target.signature.sorts {
            return Err(RepresentationError::TargetSortMismatch);
        }
        let rep = Representation {
            source,
            target,
            sort_trans,
            templates,
        };
        for (name, tpl) in &rep.templates {
            rep.check_template(name, tpl)?;
        }
        Ok(rep)
    }

    fn check_template(&self, name: &str, tpl: &TargetTemplate) -> Result<(), RepresentationError> {
        let arity = self
            .source
            .signature
            .arity(name)
            .ok_or_else(|| RepresentationError::UnknownArity(name.to_string()))?;
        let n = arity.degree;
        let params = self.sort_trans.generic_params(n);
        let sorts = self.target.signature.sorts.with_atoms(n);
        let sig = self.target.signature.with_sorts(sorts.clone());
        let fold = |e: &SortExpr| {
            self.sort_trans
                .fold_expr(e)
                .instantiate(&params)
                .expect("degree checked at load")
        };
        let expected = fold(&arity.out);
        let run = |tpl: &Template, metas: &[MetaSort], names: &[Name], case| {
            let env = CheckEnv {
                sig: &sig,
                sorts: &sorts,
                params: &params,
                metas,
                meta_names: names,
                nat_var: false,
            };
            let got = check_template(&env, tpl, &mut Vec::new()).map_err(|source| {
                RepresentationError::Template {
                    arity: name.to_string(),
                    case,
                    source,
                }
            })?;
            if got != expected {
                return Err(RepresentationError::WrongSort {
                    arity: name.to_string(),
                    case,
                    expected: expected.clone(),
                    got,
                });
            }
            Ok(())
        };
        match (tpl, arity.nat_param) {
            (TargetTemplate::Plain(t), false) => {
                let metas: Vec<MetaSort> = arity
                    .args
                    .iter()
                    .map(|a| MetaSort {
                        binders: a.binders.iter().map(fold).collect(),
                        sort: fold(&a.sort),
                    })
                    .collect();
                let names: Vec<Name> = (1..=metas.len())
                    .map(|i| Name::from(format!("${i}")))
                    .collect();
                run(t, &metas, &names, "")
            }
            (TargetTemplate::NatRec { zero, succ }, true) => {
                run(zero, &[], &[], " (zero case)")?;
                let prev = [MetaSort {
                    binders: Vec::new(),
                    sort: expected.clone(),
                }];
                run(succ, &prev, &[Name::from("$prev")], " (succ case)")
            }
            (TargetTemplate::Plain(_), true) => Err(RepresentationError::NeedsNatRec {
                arity: name.to_string(),
            }),
            (TargetTemplate::NatRec { .. }, false) => Err(RepresentationError::UnexpectedNatRec {
                arity: name.to_string(),
            }),
        }
    }

    pub fn template(&self, arity: &str) -> Option<&TargetTemplate> {
        self.templates.get(arity)
    }

    pub fn templates(&self) -> impl Iterator<Item = (&Name, &TargetTemplate)> {
        self.templates.iter()
    }

    /// Source arities without a template, in declaration order.
    pub fn unrepresented(&self) -> Vec<Name> {
        self.source
            .signature
            .arities()
            .filter(|a| !self.templates.contains_key(&a.name))
            .map(|a| a.name.clone())
            .collect()
    }

    pub fn is_total(&self) -> bool {
        self.unrepresented().is_empty()
    }

    /// Same representation with one template replaced, checked again.
    pub fn with_template(
        &self,
        arity: &str,
        tpl: TargetTemplate,
    ) -> Result<Representation, RepresentationError> {
        self.check_template(arity, &tpl)?;
        let mut rep = self.clone();
        rep.templates.insert(Name::from(arity), tpl);
        Ok(rep)
    }

    /// Instantiates the template of `arity` with already translated
    /// children. `sig` is the target signature, possibly extended.
    fn apply(
        &self,
        sig: &TermSignature,
        arity: &str,
        params: &[Sort],
        nat: Option<u64>,
        children: Vec<Term>,
    ) -> Result<Term, TranslateError> {
        let tpl = self
            .templates
            .get(arity)
            .ok_or_else(|| TranslateError::Unrepresented(arity.to_string()))?;
        match tpl {
            TargetTemplate::Plain(t) => {
                let src = self.source.signature.arity(arity).expect("known arity");
                let metas: Vec<(Term, usize)> = children
                    .into_iter()
                    .zip(&src.args)
                    .map(|(c, a)| (c, a.binders.len()))
                    .collect();
                let inst = Instance {
                    params,
                    nat: None,
                    metas: &metas,
                };
                Ok(instantiate(sig, t, &inst, 0))
            }
            TargetTemplate::NatRec { zero, succ } => {
                let n = nat.expect("nat arity carries a parameter");
                let none = Instance {
                    params,
                    nat: None,
                    metas: &[],
                };
                let mut acc = instantiate(sig, zero, &none, 0);
                for _ in 0..n {
                    let metas = [(acc, 0)];
                    let inst = Instance {
                        params,
                        nat: None,
                        metas: &metas,
                    };
                    acc = instantiate(sig, succ, &inst, 0);
                }
                Ok(acc)
            }
        }
    }
}

/// Maps a context pointwise along the sort translation.
pub fn retype_context(g: &SortTranslation, ctx: &Context) -> Context {
    ctx.map(|s| g.fold(s))
}

/// The fold of `t` along the representation. Variables stay in place; the
/// result lives in the retyped context.
pub fn translate(rep: &Representation, t: &Term) -> Result<Term, TranslateError> {
    match t {
        Term::Var(i) => Ok(Term::Var(*i)),
        Term::Con(c) => {
            let params: Vec<Sort> = c.sorts.iter().map(|s| rep.sort_trans.fold(s)).collect();
            let children = c
                .children
                .iter()
                .map(|ch| translate(rep, ch))
                .collect::<Result<Vec<_>, _>>()?;
            rep.apply(&rep.target.signature, &c.arity, &params, c.nat, children)
        }
    }
}

/// A counterexample to `translate(bind(t, σ)) = bind(translate(t), translate ∘ σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismFailure {
    pub ctx: Context,
    pub term: Term,
    pub subst: Substitution,
    pub left: Term,
    pub right: Term,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MorphismReport {
    pub checked: usize,
    pub failures: Vec<MorphismFailure>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that translation commutes with substitution on every enumerated
/// source term (at most `max_nodes` nodes, contexts of at most `ctx_len`
/// entries) and every substitution between such contexts drawn from
/// [`law_substitutions`].
pub fn check_monad_morphism(
    rep: &Representation,
    max_nodes: usize,
    ctx_len: usize,
) -> Result<MorphismReport, TranslateError> {
    let sig = &rep.source.signature;
    let tsig = &rep.target.signature;
    let mut en = Enumerator::new(sig);
    let universe = en.universe().to_vec();
    let contexts = small_contexts(&sig.sorts, ctx_len);
    let mut report = MorphismReport::default();
    for ctx in &contexts {
        let terms: Vec<Term> = universe
            .iter()
            .flat_map(|s| en.terms(ctx, s, max_nodes))
            .collect();
        if terms.is_empty() {
            continue;
        }
        let translated = terms
            .iter()
            .map(|t| translate(rep, t))
            .collect::<Result<Vec<_>, _>>()?;
        for target in &contexts {
            for sigma in law_substitutions(sig, &mut en, ctx, target) {
                let tsigma = Substitution(
                    sigma
                        .0
                        .iter()
                        .map(|t| translate(rep, t))
                        .collect::<Result<_, _>>()?,
                );
                for (t, ft) in terms.iter().zip(&translated) {
                    report.checked += 1;
                    let left = translate(rep, &bind(sig, t, &sigma))?;
                    let right = bind(tsig, ft, &tsigma);
                    if left != right {
                        report.failures.push(MorphismFailure {
                            ctx: ctx.clone(),
                            term: t.clone(),
                            subst: sigma.clone(),
                            left,
                            right,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of checking one rule (for one value of its natural-number
/// variable, if it has one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatisfactionVerdict {
    pub rule: Name,
    pub nat: Option<u64>,
    pub satisfied: bool,
    /// Generic interpretations of both sides in the target.
    pub lhs: Term,
    pub rhs: Term,
    pub witness: Vec<Step>,
    pub expansions: usize,
    /// Target signature extended by the fresh constructors standing for
    /// the rule's metavariables, for printing the terms above.
    pub signature: TermSignature,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SatisfactionReport {
    pub verdicts: Vec<SatisfactionVerdict>,
}

impl SatisfactionReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.satisfied)
    }

    pub fn failed_rules(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        for v in &self.verdicts {
            if !v.satisfied && !out.contains(&v.rule) {
                out.push(v.rule.clone());
            }
        }
        out
    }
}

/// Name of the fresh constructor standing for a rule metavariable.
pub fn meta_constructor(name: &str) -> Name {
    Name::from(format!("?{name}"))
}

/// Checks whether the representation satisfies `rule`.
///
/// Each sort metavariable becomes a fresh atomic sort and each term
/// metavariable `M` with binders `b1..bk` becomes a fresh target
/// constructor `?M` applied to the bound variables, so the left and right
/// sides are interpreted once, generically, in the target. Rules with a
/// natural-number variable are checked for each `k` in `0..=nat_range`.
pub fn check_satisfies(
    rep: &Representation,
    rule: &str,
    fuel: usize,
    nat_range: u64,
) -> Result<Vec<SatisfactionVerdict>, TranslateError> {
    let rule = rep
        .source
        .rule(rule)
        .ok_or_else(|| TranslateError::UnknownRule(rule.to_string()))?;
    let n = rule.degree;
    let params = rep.sort_trans.generic_params(n);
    let sorts = rep.target.signature.sorts.with_atoms(n);
    let mut sig = rep.target.signature.with_sorts(sorts);
    let fold_meta = |e: &SortExpr| {
        rep.sort_trans
            .fold_expr(e)
            .instantiate(&params)
            .expect("rule checked at load")
    };
    for m in &rule.metas {
        let args = m
            .binders
            .iter()
            .map(|b| ArgSpec::plain(SortExpr::from_sort(&fold_meta(b))))
            .collect();
        sig.add_arity_unchecked(Arity::new(
            &meta_constructor(&m.name),
            0,
            args,
            SortExpr::from_sort(&fold_meta(&m.sort)),
        ));
    }
    let rs = rep.target.over(sig.clone());
    let ks: Vec<Option<u64>> = if rule.nat_var {
        (0..=nat_range).map(Some).collect()
    } else {
        vec![None]
    };
    let mut out = Vec::new();
    for k in ks {
        let interp = Interpretation {
            rep,
            rule,
            sig: &sig,
            src_params: &params,
            k,
        };
        let lhs = interp.run(&rule.lhs)?;
        let rhs = interp.run(&rule.rhs)?;
        let ls = sort_of(&sig, &Context::empty(), &lhs);
        let rs_sort = sort_of(&sig, &Context::empty(), &rhs);
        match (ls, rs_sort) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => {
                let unknown = || Sort::atom("?");
                return Err(TranslateError::SortClash {
                    rule: rule.name.to_string(),
                    lhs: a.unwrap_or_else(|_| unknown()),
                    rhs: b.unwrap_or_else(|_| unknown()),
                });
            }
        }
        let r = reduces_to(&rs, &lhs, &rhs, fuel);
        out.push(SatisfactionVerdict {
            rule: rule.name.clone(),
            nat: k,
            satisfied: r.reached,
            lhs,
            rhs,
            witness: r.path,
            expansions: r.expansions,
            signature: sig.clone(),
        });
    }
    Ok(out)
}

/// Runs [`check_satisfies`] for every source rule, in declaration order.
pub fn check_all_rules(
    rep: &Representation,
    fuel: usize,
    nat_range: u64,
) -> Result<SatisfactionReport, TranslateError> {
    let mut report = SatisfactionReport::default();
    for rule in rep.source.rules() {
        report
            .verdicts
            .extend(check_satisfies(rep, &rule.name, fuel, nat_range)?);
    }
    Ok(report)
}

struct Interpretation<'a> {
    rep: &'a Representation,
    rule: &'a RewriteRule,
    sig: &'a TermSignature,
    src_params: &'a [Sort],
    k: Option<u64>,
}

impl Interpretation<'_> {
    fn run(&self, tpl: &Template) -> Result<Term, TranslateError> {
        match tpl {
            Template::Var(j) => Ok(Term::Var(*j)),
            Template::Meta(i) => {
                let m = &self.rule.metas[*i];
                let k = m.binders.len();
                Ok(Term::Con(ConTerm {
                    arity: meta_constructor(&m.name),
                    nat: None,
                    sorts: Vec::new(),
                    children: (0..k).rev().map(Term::Var).collect(),
                }))
            }
            Template::Subst1 { body, arg } => {
                let b = self.run(body)?;
                let a = self.run(arg)?;
                Ok(subst1(self.sig, &b, &a))
            }
            Template::Con {
                arity,
                nat,
                sorts,
                children,
            } => {
                let params: Vec<Sort> = sorts
                    .iter()
                    .map(|e| {
                        self.rep
                            .sort_trans
                            .fold_expr(e)
                            .instantiate(self.src_params)
                            .expect("rule checked at load")
                    })
                    .collect();
                let children = children
                    .iter()
                    .map(|c| self.run(c))
                    .collect::<Result<Vec<_>, _>>()?;
                let nat = nat.map(|e: NatExpr| e.eval(self.k).expect("k bound"));
                self.rep.apply(self.sig, arity, &params, nat, children)
            }
        }
    }
}

/// A source step whose image is not reproduced in the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessFailure {
    pub ctx: Context,
    pub source: Term,
    pub rule: Name,
    pub position: Position,
    pub successor: Term,
    pub image: Term,
    pub successor_image: Term,
    pub expansions: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaithfulnessReport {
    /// Source steps examined.
    pub checked: usize,
    /// Most expansions any successful search needed.
    pub max_expansions: usize,
    /// Longest witness found.
    pub max_witness: usize,
    pub failures: Vec<FaithfulnessFailure>,
}

impl FaithfulnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every enumerated source term and every one-step successor, checks
/// that the translation of the term reduces to the translation of the
/// successor within `fuel`.
pub fn check_faithful(
    rep: &Representation,
    max_nodes: usize,
    ctx_len: usize,
    fuel: usize,
) -> Result<FaithfulnessReport, TranslateError> {
    let mut en = Enumerator::new(&rep.source.signature);
    let universe = en.universe().to_vec();
    let mut report = FaithfulnessReport::default();
    let mut cache: HashMap<(Term, Term), (bool, usize, usize)> = HashMap::new();
    for ctx in small_contexts(&rep.source.signature.sorts, ctx_len) {
        for s in &universe {
            for t in en.terms(&ctx, s, max_nodes) {
                let succ = successors(&rep.source, &t);
                if succ.is_empty() {
                    continue;
                }
                let image = translate(rep, &t)?;
                for (position, rule, next) in succ {
                    report.checked += 1;
                    let next_image = translate(rep, &next)?;
                    let key = (image.clone(), next_image.clone());
                    let (ok, expansions, len) = *cache.entry(key).or_insert_with(|| {
                        let r = reduces_to(&rep.target, &image, &next_image, fuel);
                        (r.reached, r.expansions, r.path.len())
                    });
                    if ok {
                        report.max_expansions = report.max_expansions.max(expansions);
                        report.max_witness = report.max_witness.max(len);
                    } else {
                        report.failures.push(FaithfulnessFailure {
                            ctx: ctx.clone(),
                            source: t.clone(),
                            rule,
                            position,
                            successor: next,
                            image: image.clone(),
                            successor_image: next_image,
                            expansions,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The identity representation of a 2-signature in itself. Arities with a
/// natural-number parameter are left unrepresented, since the zero/succ
/// shape cannot rebuild the literal.
pub fn identity_representation(rs: &RuleSet) -> Representation {
    let sig = &rs.signature;
    let templates = sig
        .arities()
        .filter(|a| !a.nat_param)
        .map(|a| {
            let tpl = Template::Con {
                arity: a.name.clone(),
                nat: None,
                sorts: (1..=a.degree).map(SortExpr::Meta).collect(),
                children: (0..a.args.len()).map(Template::Meta).collect(),
            };
            (a.name.clone(), TargetTemplate::Plain(tpl))
        })
        .collect();
    Representation::partial(
        rs.clone(),
        rs.clone(),
        SortTranslation::identity(&sig.sorts),
        templates,
    )
    .expect("identity templates check")
}
