//! Text formats: sorts, contexts, terms, signature documents (`.sig`) and
//! representation documents (`.rep`), with positioned diagnostics.

pub mod elaborate;
pub mod lexer;
pub mod parser;
pub mod print;

use std::path::{Path, PathBuf};

use indexmap::IndexMap;

use crate::enumerate::{small_contexts, Enumerator};
use crate::rewrite::{RewriteRule, RuleSet};
use crate::sort::{atoms, Name, Sort, SortSignature, SortTranslation};
use crate::stdlib::{self, Builtin};
use crate::template::{instantiate, Instance, MetaDecl, MetaSort, Template};
use crate::term::{sort_of, ArgSpec, Arity, Context, Term, TermSignature};
use crate::translate::{Representation, TargetTemplate};

pub use elaborate::Lets;
pub use lexer::{Diagnostic, Span};
pub use print::{
    print_arity, print_canonical, print_context, print_paper, print_representation, print_rule,
    print_signature, print_target_template, print_template, print_term, Style,
};

use elaborate::{elaborate, sort_expr, sort_in_scope, Scope};
use parser::{Expr, Parser, RepItem, TermClauseAst};

pub fn parse_sort(sorts: &SortSignature, text: &str) -> Result<Sort, Diagnostic> {
    let mut p = Parser::new(text)?;
    let ast = p.sort()?;
    p.expect_eof()?;
    sort_in_scope(sorts, &[], &ast)
}

/// A context written innermost first, comma separated, optionally in
/// brackets: `nat, (arr nat nat)`.
pub fn parse_context(sorts: &SortSignature, text: &str) -> Result<Context, Diagnostic> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .unwrap_or(trimmed);
    let mut p = Parser::new(inner)?;
    let mut entries = Vec::new();
    if !p.at_eof() {
        for ast in p.sort_list(&lexer::Tok::Eof)? {
            entries.push(sort_in_scope(sorts, &[], &ast)?);
        }
    }
    p.expect_eof()?;
    Ok(Context::from_innermost(entries))
}

/// Parses a term in `ctx`, inferring omitted sort arguments.
pub fn parse_term(sig: &TermSignature, ctx: &Context, text: &str) -> Result<Term, Diagnostic> {
    parse_term_with_sort(sig, ctx, text).map(|(t, _)| t)
}

pub fn parse_term_with_sort(
    sig: &TermSignature,
    ctx: &Context,
    text: &str,
) -> Result<(Term, Sort), Diagnostic> {
    parse_term_expecting(sig, ctx, text, None)
}

/// Parses a term, using `expected` (when given) to infer omitted sort
/// arguments and rejecting a term of any other sort.
pub fn parse_term_expecting(
    sig: &TermSignature,
    ctx: &Context,
    text: &str,
    expected: Option<&Sort>,
) -> Result<(Term, Sort), Diagnostic> {
    let mut p = Parser::new(text)?;
    let expr = p.expr()?;
    p.expect_eof()?;
    let lets = Lets::new();
    let mut scope = Scope::new(sig, &sig.sorts, &lets);
    let mut outer: Vec<Sort> = ctx.iter_innermost().cloned().collect();
    outer.reverse();
    scope.ctx = outer;
    let (tpl, sort) = elaborate(&scope, &expr, expected)?;
    let term = instantiate(
        sig,
        &tpl,
        &Instance {
            params: &[],
            nat: None,
            metas: &[],
        },
        0,
    );
    Ok((term, sort))
}

/// A term whose canonical print does not parse back to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripFailure {
    pub ctx: Context,
    pub term: Term,
    pub text: String,
    /// The parse error, or the canonical print of what came back.
    pub got: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub checked: usize,
    pub failures: Vec<RoundtripFailure>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Prints every enumerated term canonically and parses it back, in every
/// context of at most `ctx_len` one-node sorts.
pub fn check_roundtrip(sig: &TermSignature, max_nodes: usize, ctx_len: usize) -> RoundtripReport {
    let mut en = Enumerator::new(sig);
    let universe = en.universe().to_vec();
    let mut report = RoundtripReport::default();
    for ctx in small_contexts(&sig.sorts, ctx_len) {
        for sort in &universe {
            for t in en.terms(&ctx, sort, max_nodes) {
                report.checked += 1;
                let text = print_canonical(&t);
                let got = match parse_term(sig, &ctx, &text) {
                    Ok(back) if back == t => continue,
                    Ok(back) => print_canonical(&back),
                    Err(e) => e.to_string(),
                };
                report.failures.push(RoundtripFailure {
                    ctx: ctx.clone(),
                    term: t,
                    text,
                    got,
                });
            }
        }
    }
    report
}

/// Parses a signature document: `sorts { .. } terms { .. } rules { .. }`.
pub fn parse_signature(text: &str) -> Result<RuleSet, Diagnostic> {
    let doc = Parser::new(text)?.signature()?;
    let mut sorts = SortSignature::new();
    for (name, n, span) in &doc.sorts {
        sorts
            .declare(name, *n)
            .map_err(|e| Diagnostic::new(*span, e.to_string()))?;
    }
    let mut sig = TermSignature::new(sorts);
    for a in &doc.terms {
        let conv = |ast| sort_expr(&sig.sorts, ast, a.degree);
        let mut args = Vec::new();
        for (binders, sort) in &a.args {
            let binders = binders.iter().map(conv).collect::<Result<_, _>>()?;
            args.push(ArgSpec::new(binders, conv(sort)?));
        }
        let mut arity = Arity::new(&a.name, a.degree, args, conv(&a.out)?);
        if a.nat_param {
            arity = arity.with_nat_param();
        }
        sig.add_arity(arity)
            .map_err(|e| Diagnostic::new(a.span, e.to_string()))?;
    }
    let mut rules: Vec<RewriteRule> = Vec::new();
    let no_lets = Lets::new();
    for r in &doc.rules {
        if rules.iter().any(|q| *q.name == *r.name) {
            return Err(Diagnostic::new(
                r.span,
                format!("duplicate rule `{}`", r.name),
            ));
        }
        let params = atoms(r.degree);
        let ext_sorts = sig.sorts.with_atoms(r.degree);
        let ext_sig = sig.with_sorts(ext_sorts.clone());
        let mut metas = Vec::new();
        let mut scope_metas = Vec::new();
        for m in &r.metas {
            let conv = |ast| sort_expr(&sig.sorts, ast, r.degree);
            let binders: Vec<_> = m.binders.iter().map(conv).collect::<Result<_, _>>()?;
            let sort = conv(&m.sort)?;
            let inst = |e: &crate::sort::SortExpr| e.instantiate(&params).expect("degree checked");
            scope_metas.push((
                m.name.clone(),
                MetaSort {
                    binders: binders.iter().map(inst).collect(),
                    sort: inst(&sort),
                },
            ));
            metas.push(MetaDecl::new(&m.name, binders, sort));
        }
        let mut scope = Scope::new(&ext_sig, &ext_sorts, &no_lets);
        scope.params = params;
        scope.metas = scope_metas;
        scope.nat_var = r.nat_var;
        let (lhs, sort) = elaborate(&scope, &r.lhs, None)?;
        let (rhs, _) = elaborate(&scope, &r.rhs, Some(&sort))?;
        let rule = RewriteRule {
            name: Name::from(r.name.as_str()),
            degree: r.degree,
            nat_var: r.nat_var,
            metas,
            lhs,
            rhs,
        };
        rule.check(&sig)
            .map_err(|e| Diagnostic::new(r.span, e.to_string()))?;
        rules.push(rule);
    }
    RuleSet::new(sig, rules).map_err(|e| Diagnostic::new(Span { line: 1, col: 1 }, e.to_string()))
}

/// A loaded representation document.
#[derive(Debug, Clone)]
pub struct ParsedRepresentation {
    pub rep: Representation,
    pub source_name: String,
    pub target_name: String,
    /// Named target terms: the defaults plus the document's `let`s.
    pub lets: Lets,
}

/// The stdlib lambda-calculus constants that are well sorted, closed terms
/// of `target`, by name.
pub fn default_lets(target: &TermSignature) -> Lets {
    stdlib::constants::named()
        .into_iter()
        .filter_map(|(name, t)| {
            let sort = sort_of(target, &Context::empty(), &t).ok()?;
            Some((name.to_string(), (Template::from_term(&t), sort)))
        })
        .collect()
}

/// Parses a representation document. `resolve` maps the source and target
/// names in its header to signatures.
pub fn parse_representation(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Result<RuleSet, String>,
) -> Result<ParsedRepresentation, Diagnostic> {
    let doc = Parser::new(text)?.representation()?;
    let source = resolve(&doc.source).map_err(|e| Diagnostic::new(doc.span, e))?;
    let target = resolve(&doc.target).map_err(|e| Diagnostic::new(doc.span, e))?;
    let mut clauses = Vec::new();
    for item in &doc.items {
        if let RepItem::Sort { name, expr, span } = item {
            let n = source.signature.sorts.arity(name).ok_or_else(|| {
                Diagnostic::new(*span, format!("unknown source sort constructor `{name}`"))
            })?;
            if clauses.iter().any(|(c, _): &(Name, _)| **c == **name) {
                return Err(Diagnostic::new(
                    *span,
                    format!("duplicate clause for `{name}`"),
                ));
            }
            clauses.push((
                Name::from(name.as_str()),
                sort_expr(&target.signature.sorts, expr, n)?,
            ));
        }
    }
    let sort_trans = SortTranslation::new(
        source.signature.sorts.clone(),
        target.signature.sorts.clone(),
        clauses,
    )
    .map_err(|e| Diagnostic::new(doc.span, e.to_string()))?;
    let mut lets = default_lets(&target.signature);
    let defaults: Vec<String> = lets.keys().cloned().collect();
    let mut templates: IndexMap<Name, TargetTemplate> = IndexMap::new();
    let mut spans = Vec::new();
    for item in &doc.items {
        match item {
            RepItem::Sort { .. } => {}
            RepItem::Let { name, expr, span } => {
                let scope = Scope::new(&target.signature, &target.signature.sorts, &lets);
                let (tpl, sort) = elaborate(&scope, expr, None)?;
                if lets.contains_key(name) && !defaults.contains(name) {
                    return Err(Diagnostic::new(*span, format!("duplicate `let {name}`")));
                }
                lets.insert(name.clone(), (tpl, sort));
            }
            RepItem::Term { name, clause, span } => {
                if templates.contains_key(name.as_str()) {
                    return Err(Diagnostic::new(
                        *span,
                        format!("duplicate clause for `{name}`"),
                    ));
                }
                let tpl =
                    elaborate_clause(&source, &target, &sort_trans, &lets, name, clause, *span)?;
                templates.insert(Name::from(name.as_str()), tpl);
                spans.push((name.clone(), *span));
            }
        }
    }
    let built = if doc.partial {
        Representation::partial(source, target, sort_trans, templates)
    } else {
        Representation::new(source, target, sort_trans, templates)
    };
    let rep = built.map_err(|e| {
        let msg = e.to_string();
        let span = spans
            .iter()
            .find(|(n, _)| msg.contains(&format!("`{n}`")))
            .map_or(doc.span, |(_, s)| *s);
        Diagnostic::new(span, msg)
    })?;
    Ok(ParsedRepresentation {
        rep,
        source_name: doc.source,
        target_name: doc.target,
        lets,
    })
}

fn elaborate_clause(
    source: &RuleSet,
    target: &RuleSet,
    g: &SortTranslation,
    lets: &Lets,
    name: &str,
    clause: &TermClauseAst,
    span: Span,
) -> Result<TargetTemplate, Diagnostic> {
    let arity = source
        .signature
        .arity(name)
        .ok_or_else(|| Diagnostic::new(span, format!("unknown source arity `{name}`")))?;
    let params = g.generic_params(arity.degree);
    let ext_sorts = target.signature.sorts.with_atoms(arity.degree);
    let ext_sig = target.signature.with_sorts(ext_sorts.clone());
    let fold = |e: &crate::sort::SortExpr| {
        g.fold_expr(e)
            .instantiate(&params)
            .expect("degree checked at load")
    };
    let expected = fold(&arity.out);
    let mut scope = Scope::new(&ext_sig, &ext_sorts, lets);
    scope.params = params.clone();
    let run = |scope: &Scope<'_>, e: &Expr| elaborate(scope, e, Some(&expected)).map(|(t, _)| t);
    match (clause, arity.nat_param) {
        (TermClauseAst::Plain(e), false) => {
            scope.holes = arity
                .args
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let decl = MetaSort {
                        binders: a.binders.iter().map(fold).collect(),
                        sort: fold(&a.sort),
                    };
                    ((i + 1).to_string(), decl)
                })
                .collect();
            Ok(TargetTemplate::Plain(run(&scope, e)?))
        }
        (TermClauseAst::NatRec { zero, succ }, true) => {
            let zero = run(&scope, zero)?;
            scope.holes = vec![(
                "prev".to_string(),
                MetaSort {
                    binders: Vec::new(),
                    sort: expected.clone(),
                },
            )];
            let succ = run(&scope, succ)?;
            Ok(TargetTemplate::NatRec { zero, succ })
        }
        (TermClauseAst::Plain(_), true) => Err(Diagnostic::new(
            span,
            format!("`{name}` has a natural-number parameter; write `zero: .. | succ: ..`"),
        )),
        (TermClauseAst::NatRec { .. }, false) => Err(Diagnostic::new(
            span,
            format!("`{name}` has no natural-number parameter"),
        )),
    }
}

/// Parses the right-hand side of a single `term` clause against an existing
/// representation (used to override one clause).
pub fn parse_term_clause(
    rep: &Representation,
    lets: &Lets,
    arity: &str,
    text: &str,
) -> Result<TargetTemplate, Diagnostic> {
    let mut p = Parser::new(text)?;
    let clause = p.term_clause()?;
    p.expect_eof()?;
    elaborate_clause(
        &rep.source,
        &rep.target,
        &rep.sort_trans,
        lets,
        arity,
        &clause,
        Span { line: 1, col: 1 },
    )
}

/// Error loading a document from disk or from the builtin catalog.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: String, source: Diagnostic },
    #[error("`{0}` is neither a readable file nor a builtin of that kind")]
    NotFound(String),
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a signature from a file path, or a builtin name.
pub fn load_signature(arg: &str) -> Result<RuleSet, LoadError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        return parse_signature(&text).map_err(|source| LoadError::Parse {
            path: arg.to_string(),
            source,
        });
    }
    match stdlib::builtin(arg) {
        Ok(Builtin::Signature(rs)) => Ok(rs),
        _ => Err(LoadError::NotFound(arg.to_string())),
    }
}

/// Resolves a name in a representation header: a path (relative to `base`),
/// a `<name>.sig` next to the document, or a builtin signature.
pub fn resolve_signature(name: &str, base: Option<&Path>) -> Result<RuleSet, String> {
    let candidates: Vec<PathBuf> = match base {
        Some(dir) => vec![dir.join(name), dir.join(format!("{name}.sig"))],
        None => vec![PathBuf::from(name)],
    };
    for c in candidates {
        if c.is_file() {
            return load_signature(&c.to_string_lossy()).map_err(|e| e.to_string());
        }
    }
    match stdlib::builtin(name) {
        Ok(Builtin::Signature(rs)) => Ok(rs),
        _ => Err(format!("cannot resolve signature `{name}`")),
    }
}

/// Loads a representation from a file path, or a builtin name.
pub fn load_representation(arg: &str) -> Result<ParsedRepresentation, LoadError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        let base = path.parent().map(Path::to_path_buf);
        return parse_representation(&text, &mut |n| resolve_signature(n, base.as_deref()))
            .map_err(|source| LoadError::Parse {
                path: arg.to_string(),
                source,
            });
    }
    let rep = match stdlib::builtin(arg) {
        Ok(Builtin::Representation(rep)) => *rep,
        Ok(Builtin::SortTranslation(g)) => {
            Representation::partial(stdlib::cpc(), stdlib::ipc(), g, IndexMap::new())
                .expect("builtin sort translation matches its signatures")
        }
        _ => return Err(LoadError::NotFound(arg.to_string())),
    };
    let lets = default_lets(&rep.target.signature);
    let (source_name, target_name) = match arg {
        "pcf2ulc" => ("pcf", "ulc"),
        "cpc2ipc" | "cpc2ipc-sorts" => ("cpc", "ipc"),
        _ => ("source", "target"),
    };
    Ok(ParsedRepresentation {
        rep,
        source_name: source_name.to_string(),
        target_name: target_name.to_string(),
        lets,
    })
}
