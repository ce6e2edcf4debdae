//! Recursive-descent parser for parameter expressions.
//!
//! ```text
//! param    := "0" | segment ("(+)" segment)*
//! segment  := "St" "(" INT "," IDENT ")" twist? | IDENT twist?
//! twist    := "*" "nu" "^" RATIONAL
//! RATIONAL := ("+" | "-")? INT ("/" INT)?
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of the line.

use num_rational::Rational64;

use super::{NotationError, ParseError, SourceSpan};
use crate::groups::Catalog;
use crate::param::{Segment, WDParameter};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    Comma,
    DirectSum,
    Star,
    Caret,
    Slash,
    Plus,
    Minus,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Comma => "\",\"".into(),
            Tok::DirectSum => "\"(+)\"".into(),
            Tok::Star => "\"*\"".into(),
            Tok::Caret => "\"^\"".into(),
            Tok::Slash => "\"/\"".into(),
            Tok::Plus => "\"+\"".into(),
            Tok::Minus => "\"-\"".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = |tok| Token {
            tok,
            start,
            end: start + 1,
        };
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' if text[i..].starts_with("(+)") => {
                out.push(Token {
                    tok: Tok::DirectSum,
                    start,
                    end: start + 3,
                });
                i += 3;
            }
            b'(' | b')' | b',' | b'*' | b'^' | b'/' | b'+' | b'-' => {
                out.push(single(match c {
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b',' => Tok::Comma,
                    b'*' => Tok::Star,
                    b'^' => Tok::Caret,
                    b'/' => Tok::Slash,
                    b'+' => Tok::Plus,
                    _ => Tok::Minus,
                }));
                i += 1;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Int(text[start..i].to_string()),
                    start,
                    end: i,
                });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    start,
                    end: i,
                });
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(ParseError {
                    span: SourceSpan::from_offsets(text, i, i + ch.len_utf8()),
                    message: format!("unexpected character `{ch}`"),
                    expected: Vec::new(),
                });
            }
        }
    }
    // End-of-input errors point at the last non-blank character so spans stay inside the text.
    let last = text.trim_end().len();
    let end_start = text[..last].char_indices().last().map_or(0, |(i, _)| i);
    out.push(Token {
        tok: Tok::End,
        start: end_start,
        end: last,
    });
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    catalog: &'a Catalog,
}

type PResult<T> = Result<T, NotationError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn span(&self, t: &Token) -> SourceSpan {
        SourceSpan::from_offsets(self.text, t.start, t.end)
    }

    fn error(&self, t: &Token, message: String, expected: &[&str]) -> NotationError {
        NotationError::Parse(ParseError {
            span: self.span(t),
            message,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn unexpected(&self, expected: &[&str]) -> NotationError {
        let t = self.peek();
        self.error(t, format!("unexpected {}", t.tok.describe()), expected)
    }

    fn expect(&mut self, tok: Tok, name: &str) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn param(&mut self) -> PResult<WDParameter> {
        if let Tok::Int(s) = &self.peek().tok {
            if s == "0" && self.tokens[self.pos + 1].tok == Tok::End {
                return Ok(WDParameter::empty());
            }
        }
        if self.peek().tok == Tok::End {
            let t = self.peek().clone();
            return Err(self.error(&t, "empty expression".into(), &["\"St\"", "identifier", "\"0\""]));
        }
        let mut segments = vec![self.segment()?];
        loop {
            match self.peek().tok {
                Tok::DirectSum => {
                    self.bump();
                    segments.push(self.segment()?);
                }
                Tok::End => break,
                _ => return Err(self.unexpected(&["\"(+)\"", "\"*\"", "end of input"])),
            }
        }
        Ok(WDParameter::new(segments).expect("labels come from one catalog"))
    }

    fn segment(&mut self) -> PResult<Segment> {
        let steinberg =
            matches!(&self.peek().tok, Tok::Ident(s) if s == "St") && self.tokens[self.pos + 1].tok == Tok::LParen;
        let head = if steinberg {
            self.bump();
            self.bump();
            let (k, k_tok) = self.length()?;
            self.expect(Tok::Comma, "\",\"")?;
            let label = self.label()?;
            self.expect(Tok::RParen, "\")\"")?;
            Segment::new(label, k).map_err(|e| self.error(&k_tok, e.to_string(), &[]))?
        } else if matches!(self.peek().tok, Tok::Ident(_)) {
            Segment::new(self.label()?, 1).expect("k = 1")
        } else {
            return Err(self.unexpected(&["\"St\"", "identifier"]));
        };
        if self.peek().tok != Tok::Star {
            return Ok(head);
        }
        self.bump();
        match &self.peek().tok {
            Tok::Ident(s) if s == "nu" => {
                self.bump();
            }
            _ => return Err(self.unexpected(&["\"nu\""])),
        }
        self.expect(Tok::Caret, "\"^\"")?;
        let twist = self.rational()?;
        Ok(Segment::twisted(head.cuspidal, head.k, twist).expect("k already checked"))
    }

    fn length(&mut self) -> PResult<(u32, Token)> {
        let t = self.peek().clone();
        let Tok::Int(s) = &t.tok else {
            return Err(self.unexpected(&["integer"]));
        };
        let k: u32 = s
            .parse()
            .map_err(|_| self.error(&t, format!("Steinberg length `{s}` is too large"), &[]))?;
        if k == 0 {
            return Err(self.error(&t, "Steinberg length must be positive".into(), &["positive integer"]));
        }
        self.bump();
        Ok((k, t))
    }

    fn label(&mut self) -> PResult<std::sync::Arc<crate::param::CuspidalLabel>> {
        let t = self.peek().clone();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.unexpected(&["identifier"]));
        };
        let label = self.catalog.label(name).map_err(|_| NotationError::UnknownLabel {
            name: name.clone(),
            span: self.span(&t),
        })?;
        self.bump();
        Ok(label)
    }

    fn int(&mut self) -> PResult<i64> {
        let t = self.peek().clone();
        let Tok::Int(s) = &t.tok else {
            return Err(self.unexpected(&["integer"]));
        };
        let v = s
            .parse()
            .map_err(|_| self.error(&t, format!("integer `{s}` is too large"), &[]))?;
        self.bump();
        Ok(v)
    }

    fn rational(&mut self) -> PResult<Rational64> {
        let negative = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        if !matches!(self.peek().tok, Tok::Int(_)) {
            return Err(self.unexpected(&["\"+\"", "\"-\"", "integer"]));
        }
        let num = self.int()?;
        let den = if self.peek().tok == Tok::Slash {
            self.bump();
            let t = self.peek().clone();
            let d = self.int()?;
            if d == 0 {
                return Err(self.error(&t, "zero denominator".into(), &["positive integer"]));
            }
            d
        } else {
            1
        };
        let r = Rational64::new(num, den);
        Ok(if negative { -r } else { r })
    }
}

/// Parses one expression against the labels of `catalog`.
pub fn parse_param(text: &str, catalog: &Catalog) -> Result<WDParameter, NotationError> {
    let tokens = lex(text).map_err(NotationError::Parse)?;
    Parser {
        text,
        tokens,
        pos: 0,
        catalog,
    }
    .param()
}

/// One expression per line; blank lines and `#` comments are skipped. Spans
/// refer to lines of the whole text.
pub fn parse_param_list(text: &str, catalog: &Catalog) -> Vec<(usize, Result<WDParameter, NotationError>)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let result = parse_param(body, catalog).map_err(|e| match e {
            NotationError::Parse(mut p) => {
                p.span.line = i + 1;
                NotationError::Parse(p)
            }
            NotationError::UnknownLabel { name, mut span } => {
                span.line = i + 1;
                NotationError::UnknownLabel { name, span }
            }
        });
        out.push((i + 1, result));
    }
    out
}
