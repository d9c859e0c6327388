//! Tokens for signature, representation and term text. `#` starts a line
//! comment.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A positioned error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    /// `->`
    Arrow,
    /// `=>`
    Rewrites,
    /// `|-`
    Turnstile,
    Bar,
    Eq,
    Plus,
    /// `$1`, `$prev`
    Hole(String),
    Num(u64),
    Ident(String),
    Str(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrack => write!(f, "`[`"),
            Tok::RBrack => write!(f, "`]`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Rewrites => write!(f, "`=>`"),
            Tok::Turnstile => write!(f, "`|-`"),
            Tok::Bar => write!(f, "`|`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Hole(h) => write!(f, "`${h}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '*'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '*' || c == '\''
}

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let next = chars.get(i + 1).copied();
        let mut width = 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '+' => Tok::Plus,
            '-' if next == Some('>') => {
                width = 2;
                Tok::Arrow
            }
            '=' if next == Some('>') => {
                width = 2;
                Tok::Rewrites
            }
            '=' => Tok::Eq,
            '|' if next == Some('-') => {
                width = 2;
                Tok::Turnstile
            }
            '|' => Tok::Bar,
            '$' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_alphanumeric() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(Diagnostic::new(span, "expected a hole name after `$`"));
                }
                width = j - i;
                Tok::Hole(chars[i + 1..j].iter().collect())
            }
            '"' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                    j += 1;
                }
                if chars.get(j) != Some(&'"') {
                    return Err(Diagnostic::new(span, "unterminated string"));
                }
                width = j + 1 - i;
                Tok::Str(chars[i + 1..j].iter().collect())
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                width = j - i;
                let s: String = chars[i..j].iter().collect();
                Tok::Num(
                    s.parse()
                        .map_err(|_| Diagnostic::new(span, format!("number `{s}` too large")))?,
                )
            }
            c if ident_start(c) => {
                let mut j = i;
                while j < chars.len() && ident_continue(chars[j]) {
                    j += 1;
                }
                width = j - i;
                Tok::Ident(chars[i..j].iter().collect())
            }
            c => return Err(Diagnostic::new(span, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, span });
        i += width;
        col += width;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = lex("abs : {*} * -> *; # c\n  M[N] $prev").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds[0], &Tok::Ident("abs".into()));
        assert_eq!(kinds[6], &Tok::Arrow);
        assert_eq!(toks[9].span, Span { line: 2, col: 3 });
        assert_eq!(kinds[13], &Tok::Hole("prev".into()));
    }

    #[test]
    fn bad_character_is_positioned() {
        let err = lex("sorts {\n  @ }").unwrap_err();
        assert_eq!(err.span, Span { line: 2, col: 3 });
    }
}
