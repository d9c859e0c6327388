//! Printers. The canonical style is the s-expression syntax the parser
//! reads back; the paper style renders untyped lambda terms as `Abs` and
//! infix `@`.

use std::fmt::{self, Write as _};

use crate::rewrite::{RewriteRule, RuleSet, Step};
use crate::sort::{Sort, SortExpr};
use crate::template::Template;
use crate::term::{Arity, Term};
use crate::translate::{Representation, TargetTemplate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Canonical,
    Paper,
}

impl std::str::FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "canonical" => Ok(Style::Canonical),
            "paper" => Ok(Style::Paper),
            other => Err(format!("unknown style `{other}` (paper or canonical)")),
        }
    }
}

pub fn print_term(t: &Term, style: Style) -> String {
    match style {
        Style::Canonical => print_canonical(t),
        Style::Paper => print_paper(t),
    }
}

fn sort_args<T: fmt::Display>(out: &mut String, sorts: &[T]) {
    if sorts.is_empty() {
        return;
    }
    out.push('[');
    for (i, s) in sorts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{s}");
    }
    out.push(']');
}

pub fn print_canonical(t: &Term) -> String {
    let mut out = String::new();
    canonical(&mut out, t);
    out
}

fn canonical(out: &mut String, t: &Term) {
    match t {
        Term::Var(i) => {
            let _ = write!(out, "(var {})", i + 1);
        }
        Term::Con(c) => {
            out.push('(');
            out.push_str(&c.arity);
            sort_args(out, &c.sorts);
            if let Some(n) = c.nat {
                let _ = write!(out, " {n}");
            }
            for child in &c.children {
                out.push(' ');
                canonical(out, child);
            }
            out.push(')');
        }
    }
}

fn is_app(t: &Term) -> bool {
    matches!(t, Term::Con(c) if &*c.arity == "app" && c.children.len() == 2)
}

fn is_abs(t: &Term) -> bool {
    matches!(t, Term::Con(c) if &*c.arity == "abs" && c.children.len() == 1)
}

pub fn print_paper(t: &Term) -> String {
    let mut out = String::new();
    paper(&mut out, t);
    out
}

fn paper(out: &mut String, t: &Term) {
    match t {
        Term::Var(i) => {
            let _ = write!(out, "{}", i + 1);
        }
        Term::Con(c) if is_app(t) => {
            paper(out, &c.children[0]);
            out.push_str(" @ ");
            paper_operand(out, &c.children[1], is_app(&c.children[1]));
        }
        Term::Con(c) if is_abs(t) => {
            out.push_str("Abs ");
            let body = &c.children[0];
            paper_operand(out, body, !matches!(body, Term::Var(_)));
        }
        Term::Con(c) => {
            let bare = c.nat.is_none() && c.children.is_empty() && c.sorts.is_empty();
            if !bare {
                out.push('(');
            }
            out.push_str(&c.arity);
            sort_args(out, &c.sorts);
            if let Some(n) = c.nat {
                let _ = write!(out, " {n}");
            }
            for child in &c.children {
                out.push(' ');
                paper_operand(out, child, is_app(child) || is_abs(child));
            }
            if !bare {
                out.push(')');
            }
        }
    }
}

fn paper_operand(out: &mut String, t: &Term, parens: bool) {
    if parens {
        out.push('(');
        paper(out, t);
        out.push(')');
    } else {
        paper(out, t);
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_canonical(self))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} @ {} : {} ==> {}",
            self.rule, self.position, self.before, self.after
        )
    }
}

impl Step {
    pub fn display(&self, style: Style) -> String {
        format!(
            "{} @ {} : {} ==> {}",
            self.rule,
            self.position,
            print_term(&self.before, style),
            print_term(&self.after, style)
        )
    }
}

/// Prints a template, naming metavariable `i` by `names[i]`.
pub fn print_template(tpl: &Template, names: &[String]) -> String {
    let mut out = String::new();
    template(&mut out, tpl, names);
    out
}

fn template(out: &mut String, tpl: &Template, names: &[String]) {
    match tpl {
        Template::Meta(i) => match names.get(*i) {
            Some(n) => out.push_str(n),
            None => {
                let _ = write!(out, "?{i}");
            }
        },
        Template::Var(j) => {
            let _ = write!(out, "(var {})", j + 1);
        }
        Template::Con {
            arity,
            nat,
            sorts,
            children,
        } => {
            out.push('(');
            out.push_str(arity);
            sort_args(out, sorts);
            if let Some(n) = nat {
                let _ = write!(out, " {n}");
            }
            for c in children {
                out.push(' ');
                template(out, c, names);
            }
            out.push(')');
        }
        Template::Subst1 { body, arg } => {
            template(out, body, names);
            out.push('[');
            template(out, arg, names);
            out.push(']');
        }
    }
}

fn binders(out: &mut String, bs: &[SortExpr]) {
    if bs.is_empty() {
        return;
    }
    out.push('{');
    for (i, b) in bs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{b}");
    }
    out.push('}');
}

fn degree(out: &mut String, d: usize) {
    if d > 0 {
        let _ = write!(out, "[{d}]");
    }
}

pub fn print_arity(a: &Arity) -> String {
    let mut out = String::new();
    out.push_str(&a.name);
    degree(&mut out, a.degree);
    if a.nat_param {
        out.push_str("(nat)");
    }
    out.push_str(" :");
    for (i, spec) in a.args.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        binders(&mut out, &spec.binders);
        if !spec.binders.is_empty() {
            out.push(' ');
        }
        let _ = write!(out, "{}", spec.sort);
    }
    let _ = write!(out, " -> {}", a.out);
    out
}

pub fn print_rule(r: &RewriteRule) -> String {
    let mut out = String::new();
    out.push_str(&r.name);
    degree(&mut out, r.degree);
    if r.nat_var {
        out.push_str("(k)");
    }
    out.push_str(" :");
    let names: Vec<String> = r.metas.iter().map(|m| m.name.to_string()).collect();
    for (i, m) in r.metas.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        out.push_str(&m.name);
        binders(&mut out, &m.binders);
        let _ = write!(out, ":{}", m.sort);
    }
    let _ = write!(
        out,
        " |- {} => {}",
        print_template(&r.lhs, &names),
        print_template(&r.rhs, &names)
    );
    out
}

/// A signature document the parser reads back to the same rule set.
pub fn print_signature(rs: &RuleSet) -> String {
    let mut out = String::from("sorts {\n");
    for (name, n) in rs.signature.sorts.constructors() {
        let _ = writeln!(out, "  {name} : {n};");
    }
    out.push_str("}\nterms {\n");
    for a in rs.signature.arities() {
        let _ = writeln!(out, "  {};", print_arity(a));
    }
    out.push_str("}\n");
    if !rs.rules().is_empty() {
        out.push_str("rules {\n");
        for r in rs.rules() {
            let _ = writeln!(out, "  {};", print_rule(r));
        }
        out.push_str("}\n");
    }
    out
}

fn hole_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("${i}")).collect()
}

pub fn print_target_template(tpl: &TargetTemplate, args: usize) -> String {
    match tpl {
        TargetTemplate::Plain(t) => print_template(t, &hole_names(args)),
        TargetTemplate::NatRec { zero, succ } => format!(
            "zero: {} | succ: {}",
            print_template(zero, &[]),
            print_template(succ, &["$prev".to_string()])
        ),
    }
}

/// A representation document; `source` and `target` are the names written
/// in its header.
pub fn print_representation(rep: &Representation, source: &str, target: &str) -> String {
    let quote = |s: &str| {
        if s.chars().all(|c| c.is_alphanumeric() || c == '_') {
            s.to_string()
        } else {
            format!("{s:?}")
        }
    };
    let mut out = format!("represent {} in {}", quote(source), quote(target));
    if !rep.is_total() {
        out.push_str(" partial");
    }
    out.push_str(" {\n");
    for (name, e) in rep.sort_trans.clauses() {
        let _ = writeln!(out, "  sort {name} -> {e};");
    }
    for (name, tpl) in rep.templates() {
        let args = rep.source.signature.arity(name).map_or(0, |a| a.args.len());
        let _ = writeln!(
            out,
            "  term {name} -> {};",
            print_target_template(tpl, args)
        );
    }
    out.push_str("}\n");
    out
}

/// Context in the `--ctx` syntax: innermost first, comma separated.
pub fn print_context(sorts: &[Sort]) -> String {
    sorts
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
