//! Recursive-descent parser producing an untyped syntax tree. Resolution of
//! names and inference of omitted sort arguments happen in `elaborate`.

use super::lexer::{lex, Diagnostic, Span, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortAst {
    Meta(usize, Span),
    Con(String, Vec<SortAst>, Span),
}

impl SortAst {
    pub fn span(&self) -> Span {
        match self {
            SortAst::Meta(_, s) | SortAst::Con(_, _, s) => *s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NatAst {
    Lit(u64),
    K,
    KPlus1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// `(var i)`, 1-based as written.
    Var(usize, Span),
    /// `$1`, `$prev`
    Hole(String, Span),
    /// Bare name: metavariable, `let` name, or constant.
    Ident(String, Span),
    /// Natural-number argument: literal, `k` is parsed as `Ident`.
    Nat(NatAst, Span),
    Node {
        head: String,
        sorts: Option<Vec<SortAst>>,
        args: Vec<Expr>,
        span: Span,
    },
    /// `body[arg]`
    Subst {
        body: Box<Expr>,
        arg: Box<Expr>,
        span: Span,
    },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Var(_, s)
            | Expr::Hole(_, s)
            | Expr::Ident(_, s)
            | Expr::Nat(_, s)
            | Expr::Node { span: s, .. }
            | Expr::Subst { span: s, .. } => *s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityAst {
    pub name: String,
    pub degree: usize,
    pub nat_param: bool,
    /// (binders, sort) per argument.
    pub args: Vec<(Vec<SortAst>, SortAst)>,
    pub out: SortAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaAst {
    pub name: String,
    pub binders: Vec<SortAst>,
    pub sort: SortAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleAst {
    pub name: String,
    pub degree: usize,
    pub nat_var: bool,
    pub metas: Vec<MetaAst>,
    pub lhs: Expr,
    pub rhs: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignatureAst {
    pub sorts: Vec<(String, usize, Span)>,
    pub terms: Vec<ArityAst>,
    pub rules: Vec<RuleAst>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermClauseAst {
    Plain(Expr),
    NatRec { zero: Expr, succ: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepItem {
    Sort {
        name: String,
        expr: SortAst,
        span: Span,
    },
    Term {
        name: String,
        clause: TermClauseAst,
        span: Span,
    },
    Let {
        name: String,
        expr: Expr,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationAst {
    pub source: String,
    pub target: String,
    pub partial: bool,
    pub items: Vec<RepItem>,
    pub span: Span,
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self, Diagnostic> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, Diagnostic> {
        Err(Diagnostic::new(
            self.span(),
            format!("expected {expected}, found {}", self.peek()),
        ))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<Span, Diagnostic> {
        if self.peek() == tok {
            Ok(self.bump().span)
        } else {
            self.error(&tok.to_string())
        }
    }

    fn ident(&mut self) -> Result<(String, Span), Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => self.error("a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, Diagnostic> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().span),
            _ => self.error(&format!("`{kw}`")),
        }
    }

    fn num(&mut self) -> Result<u64, Diagnostic> {
        match self.peek() {
            Tok::Num(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => self.error("a number"),
        }
    }

    pub fn expect_eof(&mut self) -> Result<(), Diagnostic> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    /// `1` (metavariable), `name`, or `(name sort*)`.
    pub fn sort(&mut self) -> Result<SortAst, Diagnostic> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                if n == 0 {
                    return Err(Diagnostic::new(span, "sort metavariables start at 1"));
                }
                Ok(SortAst::Meta(n as usize, span))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(SortAst::Con(s, Vec::new(), span))
            }
            Tok::LParen => {
                self.bump();
                let (head, _) = self.ident()?;
                let mut args = Vec::new();
                while *self.peek() != Tok::RParen {
                    if self.at_eof() {
                        return self.error("`)`");
                    }
                    args.push(self.sort()?);
                }
                self.bump();
                Ok(SortAst::Con(head, args, span))
            }
            _ => self.error("a sort"),
        }
    }

    /// Comma-separated sorts, possibly empty.
    pub fn sort_list(&mut self, close: &Tok) -> Result<Vec<SortAst>, Diagnostic> {
        let mut out = Vec::new();
        if self.peek() == close {
            return Ok(out);
        }
        loop {
            out.push(self.sort()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    /// A term or template expression.
    pub fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::LBrack {
            let span = self.bump().span;
            let arg = self.expr()?;
            self.expect(&Tok::RBrack)?;
            e = Expr::Subst {
                body: Box::new(e),
                arg: Box::new(arg),
                span,
            };
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Hole(h) => {
                self.bump();
                Ok(Expr::Hole(h, span))
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Nat(NatAst::Lit(n), span))
            }
            Tok::Ident(s) => {
                self.bump();
                if s == "k" && *self.peek() == Tok::Plus {
                    self.bump();
                    let one = self.span();
                    if self.num()? != 1 {
                        return Err(Diagnostic::new(one, "only `k+1` is supported"));
                    }
                    return Ok(Expr::Nat(NatAst::KPlus1, span));
                }
                Ok(Expr::Ident(s, span))
            }
            Tok::LParen => {
                self.bump();
                let (head, _) = self.ident()?;
                if head == "var" && *self.peek() != Tok::LBrack {
                    let at = self.span();
                    let n = self.num()?;
                    if n == 0 {
                        return Err(Diagnostic::new(at, "variables are numbered from 1"));
                    }
                    self.expect(&Tok::RParen)?;
                    return Ok(Expr::Var(n as usize, span));
                }
                let sorts = if self.eat(&Tok::LBrack) {
                    let s = self.sort_list(&Tok::RBrack)?;
                    self.expect(&Tok::RBrack)?;
                    Some(s)
                } else {
                    None
                };
                let mut args = Vec::new();
                while *self.peek() != Tok::RParen {
                    if self.at_eof() {
                        return self.error("`)`");
                    }
                    args.push(self.expr()?);
                }
                self.bump();
                Ok(Expr::Node {
                    head,
                    sorts,
                    args,
                    span,
                })
            }
            _ => self.error("a term"),
        }
    }

    fn section<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, Diagnostic>,
    ) -> Result<Vec<T>, Diagnostic> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        while *self.peek() != Tok::RBrace {
            if self.at_eof() {
                return self.error("`}`");
            }
            out.push(item(self)?);
            self.expect(&Tok::Semi)?;
        }
        self.bump();
        Ok(out)
    }

    fn degree(&mut self) -> Result<usize, Diagnostic> {
        if self.eat(&Tok::LBrack) {
            let n = self.num()? as usize;
            self.expect(&Tok::RBrack)?;
            Ok(n)
        } else {
            Ok(0)
        }
    }

    fn flag(&mut self, word: &str) -> Result<bool, Diagnostic> {
        if self.eat(&Tok::LParen) {
            self.keyword(word)?;
            self.expect(&Tok::RParen)?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn arity(&mut self) -> Result<ArityAst, Diagnostic> {
        let (name, span) = self.ident()?;
        let degree = self.degree()?;
        let nat_param = self.flag("nat")?;
        self.expect(&Tok::Colon)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::Arrow {
            loop {
                let binders = if self.eat(&Tok::LBrace) {
                    let b = self.sort_list(&Tok::RBrace)?;
                    self.expect(&Tok::RBrace)?;
                    b
                } else {
                    Vec::new()
                };
                args.push((binders, self.sort()?));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::Arrow)?;
        let out = self.sort()?;
        Ok(ArityAst {
            name,
            degree,
            nat_param,
            args,
            out,
            span,
        })
    }

    fn rule(&mut self) -> Result<RuleAst, Diagnostic> {
        let (name, span) = self.ident()?;
        let degree = self.degree()?;
        let nat_var = self.flag("k")?;
        self.expect(&Tok::Colon)?;
        let mut metas = Vec::new();
        if *self.peek() != Tok::Turnstile {
            loop {
                let (mname, mspan) = self.ident()?;
                let binders = if self.eat(&Tok::LBrace) {
                    let b = self.sort_list(&Tok::RBrace)?;
                    self.expect(&Tok::RBrace)?;
                    b
                } else {
                    Vec::new()
                };
                self.expect(&Tok::Colon)?;
                let sort = self.sort()?;
                metas.push(MetaAst {
                    name: mname,
                    binders,
                    sort,
                    span: mspan,
                });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::Turnstile)?;
        let lhs = self.expr()?;
        self.expect(&Tok::Rewrites)?;
        let rhs = self.expr()?;
        Ok(RuleAst {
            name,
            degree,
            nat_var,
            metas,
            lhs,
            rhs,
            span,
        })
    }

    pub fn signature(&mut self) -> Result<SignatureAst, Diagnostic> {
        let mut doc = SignatureAst::default();
        let mut seen: Vec<&'static str> = Vec::new();
        let order = ["sorts", "terms", "rules"];
        while !self.at_eof() {
            let span = self.span();
            let (kw, _) = self.ident()?;
            let Some(idx) = order.iter().position(|k| *k == kw) else {
                return Err(Diagnostic::new(
                    span,
                    format!("expected `sorts`, `terms` or `rules`, found `{kw}`"),
                ));
            };
            if seen
                .iter()
                .any(|s| order.iter().position(|k| k == s) >= Some(idx))
            {
                return Err(Diagnostic::new(
                    span,
                    format!("section `{kw}` repeated or out of order (sorts, terms, rules)"),
                ));
            }
            seen.push(order[idx]);
            match idx {
                0 => {
                    doc.sorts = self.section(|p| {
                        let (name, span) = p.ident()?;
                        p.expect(&Tok::Colon)?;
                        Ok((name, p.num()? as usize, span))
                    })?
                }
                1 => doc.terms = self.section(Parser::arity)?,
                _ => doc.rules = self.section(Parser::rule)?,
            }
        }
        Ok(doc)
    }

    fn name_or_path(&mut self) -> Result<String, Diagnostic> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            Tok::Ident(_) => Ok(self.ident()?.0),
            _ => self.error("a signature name or path"),
        }
    }

    pub fn representation(&mut self) -> Result<RepresentationAst, Diagnostic> {
        let span = self.keyword("represent")?;
        let source = self.name_or_path()?;
        self.keyword("in")?;
        let target = self.name_or_path()?;
        let partial = matches!(self.peek(), Tok::Ident(s) if s == "partial");
        if partial {
            self.bump();
        }
        let items = self.section(|p| {
            let span = p.span();
            let (kw, _) = p.ident()?;
            match kw.as_str() {
                "sort" => {
                    let (name, _) = p.ident()?;
                    p.expect(&Tok::Arrow)?;
                    Ok(RepItem::Sort {
                        name,
                        expr: p.sort()?,
                        span,
                    })
                }
                "term" => {
                    let (name, _) = p.ident()?;
                    p.expect(&Tok::Arrow)?;
                    Ok(RepItem::Term {
                        name,
                        clause: p.term_clause()?,
                        span,
                    })
                }
                "let" => {
                    let (name, _) = p.ident()?;
                    p.expect(&Tok::Eq)?;
                    Ok(RepItem::Let {
                        name,
                        expr: p.expr()?,
                        span,
                    })
                }
                other => Err(Diagnostic::new(
                    span,
                    format!("expected `sort`, `term` or `let`, found `{other}`"),
                )),
            }
        })?;
        self.expect_eof()?;
        Ok(RepresentationAst {
            source,
            target,
            partial,
            items,
            span,
        })
    }

    /// `expr` or `zero: expr | succ: expr`.
    pub fn term_clause(&mut self) -> Result<TermClauseAst, Diagnostic> {
        let is_rec =
            matches!(self.peek(), Tok::Ident(s) if s == "zero") && *self.peek2() == Tok::Colon;
        if !is_rec {
            return Ok(TermClauseAst::Plain(self.expr()?));
        }
        self.keyword("zero")?;
        self.expect(&Tok::Colon)?;
        let zero = self.expr()?;
        self.expect(&Tok::Bar)?;
        self.keyword("succ")?;
        self.expect(&Tok::Colon)?;
        let succ = self.expr()?;
        Ok(TermClauseAst::NatRec { zero, succ })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ulc_document() {
        let text = "sorts { * : 0; } terms { app : *, * -> *; abs : {*} * -> *; } \
                    rules { beta : M{*}:*, N:* |- (app (abs M) N) => M[N]; }";
        let doc = Parser::new(text).unwrap().signature().unwrap();
        assert_eq!(doc.sorts.len(), 1);
        assert_eq!(doc.terms[1].args[0].0.len(), 1);
        assert!(matches!(doc.rules[0].rhs, Expr::Subst { .. }));
    }

    #[test]
    fn unbalanced_braces_are_reported() {
        let err = Parser::new("sorts { * : 0; ")
            .unwrap()
            .signature()
            .unwrap_err();
        assert!(err.message.contains("`}`"), "{err}");
    }

    #[test]
    fn nat_arguments() {
        let e = Parser::new("(nats k+1)").unwrap().expr().unwrap();
        let Expr::Node { args, .. } = e else { panic!() };
        assert!(matches!(args[0], Expr::Nat(NatAst::KPlus1, _)));
    }
}
