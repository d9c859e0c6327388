//! `synsem`: load 2-signatures and representations, run terms, translate
//! them, and check laws, satisfaction and faithfulness.
//!
//! Exit status is 0 on success, 1 when a check fails, 2 on usage or input
//! errors.

mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use synsem::laws::check_laws;
use synsem::syntax::{
    check_roundtrip, load_representation, load_signature, parse_context, parse_sort,
    parse_term_clause, parse_term_expecting, parse_term_with_sort, print_representation,
    print_signature, Diagnostic, LoadError, ParsedRepresentation, Style,
};
use synsem::translate::{
    check_all_rules, check_faithful, check_monad_morphism, check_satisfies, translate,
    RepresentationError, TranslateError,
};
use synsem::{check_subject_reduction, normalize, RuleSet};
use thiserror::Error;

use report::*;

#[derive(Debug, Parser)]
#[command(
    name = "synsem",
    version,
    about = "Syntax and semantics from 2-signatures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a signature or representation; optionally sort-check a term or
    /// run subject reduction and the print/parse roundtrip on small terms.
    Check(CheckArgs),
    /// Normalize a term, outermost-leftmost.
    Reduce(RunArgs),
    /// Normalize a term, printing one line per step.
    Trace(RunArgs),
    /// Translate a term or a sort along a representation.
    Translate(TranslateArgs),
    /// Check the substitution laws of a signature, or the substitution
    /// compatibility of a representation.
    Laws(LawsArgs),
    /// Check that a representation satisfies the source rules.
    Satisfy(SatisfyArgs),
    /// Check that source steps map to target reductions.
    Faithful(FaithfulArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Output style for terms.
    #[arg(long, default_value = "canonical")]
    style: Style,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Signature file or builtin name.
    #[arg(long, conflicts_with = "rep")]
    sig: Option<String>,
    /// Representation file or builtin name.
    #[arg(long)]
    rep: Option<String>,
    /// Context, innermost first, comma separated.
    #[arg(long, default_value = "")]
    ctx: String,
    #[arg(long)]
    term: Option<String>,
    /// Expected sort of `--term`.
    #[arg(long, requires = "term")]
    sort: Option<String>,
    /// Run subject reduction and the roundtrip on terms up to this size.
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long, default_value_t = 2)]
    ctx_len: usize,
    /// Print the loaded document back in normal form.
    #[arg(long)]
    print: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Signature file or builtin name.
    #[arg(long)]
    sig: String,
    /// Context, innermost first, comma separated.
    #[arg(long, default_value = "")]
    ctx: String,
    #[arg(long)]
    term: String,
    #[arg(long, default_value_t = 64)]
    fuel: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct RepArgs {
    /// Representation file or builtin name.
    #[arg(long)]
    rep: String,
    /// Replace one term clause, `arity=template`.
    #[arg(long, value_name = "ARITY=TEMPLATE")]
    fix_via: Vec<String>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).multiple(true))]
struct TranslateArgs {
    #[command(flatten)]
    rep: RepArgs,
    /// Source context, innermost first, comma separated.
    #[arg(long, default_value = "")]
    ctx: String,
    #[arg(long, group = "input")]
    term: Option<String>,
    /// A source sort to fold instead of (or besides) a term.
    #[arg(long, group = "input")]
    sort: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true))]
struct LawsArgs {
    /// Signature whose substitution is checked.
    #[arg(long, group = "input")]
    sig: Option<String>,
    /// Representation whose translation is checked against substitution.
    #[arg(long, group = "input")]
    rep: Option<String>,
    #[arg(long, value_name = "ARITY=TEMPLATE", requires = "rep")]
    fix_via: Vec<String>,
    #[arg(long, default_value_t = 3)]
    max_nodes: usize,
    #[arg(long, default_value_t = 2)]
    ctx_len: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SatisfyArgs {
    #[command(flatten)]
    rep: RepArgs,
    /// Check only this rule.
    #[arg(long)]
    rule: Option<String>,
    #[arg(long, default_value_t = 64)]
    fuel: usize,
    /// Rules with a natural-number variable are checked for k in 0..=n.
    #[arg(long, default_value_t = 3)]
    nat_range: u64,
    /// Print the witness path under each satisfied rule.
    #[arg(long)]
    witness: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct FaithfulArgs {
    #[command(flatten)]
    rep: RepArgs,
    #[arg(long, default_value_t = 4)]
    max_nodes: usize,
    #[arg(long, default_value_t = 2)]
    ctx_len: usize,
    #[arg(long, default_value_t = 64)]
    fuel: usize,
    #[command(flatten)]
    common: Common,
}

/// What a command produced: text for stdout, the JSON body, and whether
/// the checks it ran passed.
struct Outcome {
    ok: bool,
    text: String,
    json: String,
}

impl Outcome {
    fn new<T: Serialize>(command: &'static str, ok: bool, text: String, body: T) -> Self {
        let json = serde_json::to_string_pretty(&Envelope {
            schema: SCHEMA_VERSION,
            command,
            ok,
            body,
        })
        .expect("reports serialize");
        Outcome { ok, text, json }
    }
}

/// Input errors; all of them exit with status 2.
#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{what}:{source}")]
    Parse {
        what: &'static str,
        source: Diagnostic,
    },
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("{0}")]
    Usage(String),
}

fn parse_err(what: &'static str) -> impl FnOnce(Diagnostic) -> CliError {
    move |source| CliError::Parse { what, source }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json, result) = match cli.command {
        Command::Check(a) => (a.common.json, check(a)),
        Command::Reduce(a) => (a.common.json, reduce(a, false)),
        Command::Trace(a) => (a.common.json, reduce(a, true)),
        Command::Translate(a) => (a.common.json, translate_cmd(a)),
        Command::Laws(a) => (a.common.json, laws(a)),
        Command::Satisfy(a) => (a.common.json, satisfy(a)),
        Command::Faithful(a) => (a.common.json, faithful(a)),
    };
    match result {
        Ok(out) => {
            if json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_rep(args: &RepArgs) -> Result<ParsedRepresentation, CliError> {
    let mut parsed = load_representation(&args.rep)?;
    for fix in &args.fix_via {
        let (arity, text) = fix.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("--fix-via `{fix}`: expected ARITY=TEMPLATE"))
        })?;
        let arity = arity.trim();
        if parsed.rep.source.signature.arity(arity).is_none() {
            return Err(CliError::Usage(format!(
                "--fix-via: `{arity}` is not an arity of the source signature"
            )));
        }
        let tpl = parse_term_clause(&parsed.rep, &parsed.lets, arity, text)
            .map_err(parse_err("--fix-via"))?;
        parsed.rep = parsed.rep.with_template(arity, tpl)?;
    }
    Ok(parsed)
}

fn summary(rs: &RuleSet) -> SignatureSummary {
    SignatureSummary {
        sort_constructors: rs.signature.sorts.len(),
        arities: rs.signature.arities().count(),
        rules: rs.rules().len(),
    }
}

fn check(a: CheckArgs) -> Result<Outcome, CliError> {
    let mut text = String::new();
    let mut ok = true;
    let mut body = CheckJson {
        signature: None,
        representation: None,
        term: None,
        subject_reduction: None,
        roundtrip: None,
    };
    let rs = match (&a.sig, &a.rep) {
        (Some(sig), _) => {
            let rs = load_signature(sig)?;
            let s = summary(&rs);
            text += &format!(
                "signature {sig}: {} sort constructors, {} arities, {} rules\n",
                s.sort_constructors, s.arities, s.rules
            );
            if a.print {
                text += &print_signature(&rs);
            }
            body.signature = Some(s);
            rs
        }
        (None, Some(rep)) => {
            let p = load_representation(rep)?;
            let unrepresented: Vec<String> = p
                .rep
                .unrepresented()
                .iter()
                .map(|n| n.to_string())
                .collect();
            text += &format!(
                "representation of {} in {}: {}\n",
                p.source_name,
                p.target_name,
                if unrepresented.is_empty() {
                    "total".to_string()
                } else {
                    format!("partial, no image for {}", unrepresented.join(", "))
                }
            );
            if a.print {
                text += &print_representation(&p.rep, &p.source_name, &p.target_name);
            }
            body.representation = Some(RepresentationSummary {
                source: p.source_name.clone(),
                target: p.target_name.clone(),
                total: unrepresented.is_empty(),
                unrepresented,
            });
            p.rep.source
        }
        (None, None) => return Err(CliError::Usage("check needs --sig or --rep".into())),
    };
    let style = a.common.style;
    if let Some(src) = &a.term {
        let ctx = parse_context(&rs.signature.sorts, &a.ctx).map_err(parse_err("--ctx"))?;
        let expected = match &a.sort {
            Some(e) => Some(parse_sort(&rs.signature.sorts, e).map_err(parse_err("--sort"))?),
            None => None,
        };
        let (t, sort) = match parse_term_with_sort(&rs.signature, &ctx, src) {
            Ok((t, sort)) => (t, sort),
            Err(_) if expected.is_some() => {
                parse_term_expecting(&rs.signature, &ctx, src, expected.as_ref())
                    .map_err(parse_err("--term"))?
            }
            Err(e) => return Err(parse_err("--term")(e)),
        };
        text += &format!("{} : {sort}\n", term(&t, style));
        if let Some(e) = &expected {
            if *e != sort {
                ok = false;
                text += &format!("expected sort {e}\n");
            }
        }
        body.term = Some(TermSort {
            term: term(&t, style),
            sort: sort.to_string(),
            expected: expected.map(|e| e.to_string()),
        });
    }
    if let Some(n) = a.max_nodes {
        let sr = check_subject_reduction(&rs, n, a.ctx_len);
        text += &format!(
            "subject reduction: {} terms, {} steps, {} failures\n",
            sr.terms,
            sr.checked,
            sr.failures.len()
        );
        for f in &sr.failures {
            text += &format!(
                "  [{}] {} : {} --{} @ {}--> {}\n",
                ctx_string(&f.ctx),
                term(&f.term, style),
                f.sort,
                f.rule,
                f.position,
                term(&f.successor, style)
            );
        }
        ok &= sr.passed();
        body.subject_reduction = Some(SubjectReductionJson {
            terms: sr.terms,
            checked: sr.checked,
            failures: sr
                .failures
                .iter()
                .map(|f| SortChangeJson {
                    ctx: ctx_string(&f.ctx),
                    term: term(&f.term, style),
                    sort: f.sort.to_string(),
                    rule: f.rule.to_string(),
                    position: f.position.to_string(),
                    successor: term(&f.successor, style),
                    got: match &f.got {
                        Ok(s) => s.to_string(),
                        Err(e) => e.to_string(),
                    },
                })
                .collect(),
        });
        let rt = check_roundtrip(&rs.signature, n, a.ctx_len);
        text += &format!(
            "roundtrip: {} terms, {} failures\n",
            rt.checked,
            rt.failures.len()
        );
        for f in &rt.failures {
            text += &format!("  [{}] {} -> {}\n", ctx_string(&f.ctx), f.text, f.got);
        }
        ok &= rt.passed();
        body.roundtrip = Some(RoundtripJson {
            checked: rt.checked,
            failures: rt
                .failures
                .iter()
                .map(|f| RoundtripFailureJson {
                    ctx: ctx_string(&f.ctx),
                    text: f.text.clone(),
                    got: f.got.clone(),
                })
                .collect(),
        });
    }
    Ok(Outcome::new("check", ok, text, body))
}

fn reduce(a: RunArgs, trace: bool) -> Result<Outcome, CliError> {
    let rs = load_signature(&a.sig)?;
    let ctx = parse_context(&rs.signature.sorts, &a.ctx).map_err(parse_err("--ctx"))?;
    let (t, _) = parse_term_with_sort(&rs.signature, &ctx, &a.term).map_err(parse_err("--term"))?;
    let style = a.common.style;
    let n = normalize(&rs, &t, a.fuel);
    let mut text = String::new();
    if trace {
        for s in n.steps() {
            text += &s.display(style);
            text.push('\n');
        }
    } else {
        text += &term(n.term(), style);
        text.push('\n');
    }
    if !n.is_normal() {
        eprintln!("fuel exhausted after {} steps", n.steps().len());
    }
    let body = ReduceJson {
        term: term(n.term(), style),
        normal: n.is_normal(),
        step_count: n.steps().len(),
        steps: if trace {
            steps(n.steps(), style)
        } else {
            Vec::new()
        },
    };
    Ok(Outcome::new(
        if trace { "trace" } else { "reduce" },
        n.is_normal(),
        text,
        body,
    ))
}

fn translate_cmd(a: TranslateArgs) -> Result<Outcome, CliError> {
    let p = load_rep(&a.rep)?;
    let rep = &p.rep;
    let style = a.common.style;
    let mut text = String::new();
    let mut body = TranslateJson {
        term: None,
        sort: None,
    };
    if let Some(src) = &a.sort {
        let s = parse_sort(&rep.source.signature.sorts, src).map_err(parse_err("--sort"))?;
        let folded = rep.sort_trans.fold(&s);
        text += &format!("{folded}\n");
        body.sort = Some(folded.to_string());
    }
    if let Some(src) = &a.term {
        let ctx = parse_context(&rep.source.signature.sorts, &a.ctx).map_err(parse_err("--ctx"))?;
        let (t, _) =
            parse_term_with_sort(&rep.source.signature, &ctx, src).map_err(parse_err("--term"))?;
        let image = translate(rep, &t)?;
        text += &term(&image, style);
        text.push('\n');
        body.term = Some(term(&image, style));
    }
    Ok(Outcome::new("translate", true, text, body))
}

fn laws(a: LawsArgs) -> Result<Outcome, CliError> {
    let style = a.common.style;
    let mut text = String::new();
    let (checked, failures) = if let Some(sig) = &a.sig {
        let rs = load_signature(sig)?;
        let r = check_laws(&rs.signature, a.max_nodes, a.ctx_len);
        let checked: Vec<LawCount> = r
            .checked
            .iter()
            .map(|(law, n)| LawCount {
                law: law.to_string(),
                instances: *n,
            })
            .collect();
        let failures: Vec<LawFailureJson> = r
            .failures
            .iter()
            .map(|f| LawFailureJson {
                law: f.law.to_string(),
                ctx: ctx_string(&f.ctx),
                term: term(&f.term, style),
                detail: f.detail.clone(),
            })
            .collect();
        (checked, failures)
    } else {
        let rep = load_rep(&RepArgs {
            rep: a.rep.clone().expect("clap requires --sig or --rep"),
            fix_via: a.fix_via.clone(),
        })?;
        let r = check_monad_morphism(&rep.rep, a.max_nodes, a.ctx_len)?;
        let checked = vec![LawCount {
            law: "translation-commutes-with-bind".into(),
            instances: r.checked,
        }];
        let failures = r
            .failures
            .iter()
            .map(|f| LawFailureJson {
                law: "translation-commutes-with-bind".into(),
                ctx: ctx_string(&f.ctx),
                term: term(&f.term, style),
                detail: format!(
                    "translate(bind) = {} but bind(translate) = {}",
                    term(&f.left, style),
                    term(&f.right, style)
                ),
            })
            .collect();
        (checked, failures)
    };
    for c in &checked {
        let bad = failures.iter().filter(|f| f.law == c.law).count();
        text += &format!(
            "{} {}: {} instances, {} failures\n",
            if bad == 0 { "ok  " } else { "FAIL" },
            c.law,
            c.instances,
            bad
        );
    }
    for f in failures.iter().take(20) {
        text += &format!("  {} [{}] {}: {}\n", f.law, f.ctx, f.term, f.detail);
    }
    let ok = failures.is_empty();
    let body = LawsJson {
        max_nodes: a.max_nodes,
        ctx_len: a.ctx_len,
        checked,
        failures,
    };
    Ok(Outcome::new("laws", ok, text, body))
}

fn satisfy(a: SatisfyArgs) -> Result<Outcome, CliError> {
    let p = load_rep(&a.rep)?;
    let style = a.common.style;
    let verdicts = match &a.rule {
        Some(r) => check_satisfies(&p.rep, r, a.fuel, a.nat_range)?,
        None => check_all_rules(&p.rep, a.fuel, a.nat_range)?.verdicts,
    };
    let mut text = String::new();
    let mut failed: Vec<String> = Vec::new();
    for v in &verdicts {
        let name = match v.nat {
            Some(k) => format!("{} (k={k})", v.rule),
            None => v.rule.to_string(),
        };
        if v.satisfied {
            text += &format!(
                "ok   {name}: path length {}, expansions {}\n",
                v.witness.len(),
                v.expansions
            );
            if a.witness {
                for s in &v.witness {
                    text += &format!("       {}\n", s.display(style));
                }
            }
        } else {
            text += &format!(
                "FAIL {name}: no path within fuel {}, expansions {}\n       {} =/=> {}\n",
                a.fuel,
                v.expansions,
                term(&v.lhs, style),
                term(&v.rhs, style)
            );
            if !failed.iter().any(|f| **f == *v.rule) {
                failed.push(v.rule.to_string());
            }
        }
    }
    if !failed.is_empty() {
        text += &format!("unsatisfied: {}\n", failed.join(", "));
    }
    let body = SatisfyJson {
        fuel: a.fuel,
        nat_range: a.nat_range,
        verdicts: verdicts
            .iter()
            .map(|v| VerdictJson {
                rule: v.rule.to_string(),
                k: v.nat,
                satisfied: v.satisfied,
                lhs: term(&v.lhs, style),
                rhs: term(&v.rhs, style),
                witness_length: v.satisfied.then_some(v.witness.len()),
                expansions: v.expansions,
                witness: steps(&v.witness, style),
            })
            .collect(),
        failed_rules: failed.clone(),
    };
    Ok(Outcome::new("satisfy", failed.is_empty(), text, body))
}

fn faithful(a: FaithfulArgs) -> Result<Outcome, CliError> {
    let p = load_rep(&a.rep)?;
    let style = a.common.style;
    let r = check_faithful(&p.rep, a.max_nodes, a.ctx_len, a.fuel)?;
    let mut text = format!(
        "{} source steps, {} failures, longest target witness {}, most expansions {}\n",
        r.checked,
        r.failures.len(),
        r.max_witness,
        r.max_expansions
    );
    for f in r.failures.iter().take(20) {
        text += &format!(
            "  [{}] {} --{} @ {}--> {}\n    image {} does not reach {}\n",
            ctx_string(&f.ctx),
            term(&f.source, style),
            f.rule,
            f.position,
            term(&f.successor, style),
            term(&f.image, style),
            term(&f.successor_image, style)
        );
    }
    let body = FaithfulJson {
        max_nodes: a.max_nodes,
        ctx_len: a.ctx_len,
        fuel: a.fuel,
        checked: r.checked,
        max_expansions: r.max_expansions,
        max_witness: r.max_witness,
        failures: r
            .failures
            .iter()
            .map(|f| FaithfulFailureJson {
                ctx: ctx_string(&f.ctx),
                source: term(&f.source, style),
                rule: f.rule.to_string(),
                position: f.position.to_string(),
                successor: term(&f.successor, style),
                image: term(&f.image, style),
                successor_image: term(&f.successor_image, style),
                expansions: f.expansions,
            })
            .collect(),
    };
    Ok(Outcome::new("faithful", r.passed(), text, body))
}
