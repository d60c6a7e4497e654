//! Tokenizer and token cursor shared by the object-language parsers.
//!
//! Identifiers may carry a label pin, `name@7` or `name@'7`, which fixes the
//! label id (and, with the tick, synthesized provenance). Pins must be unique
//! within one input. Unpinned names get fresh source labels.

use std::collections::BTreeSet;

use crate::error::ParseError;
use crate::term::{fresh_source_label, reserve_through, Label};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident { text: String, pin: Option<Label> },
    Int(i64),
    Str(String),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const PUNCTS: [&str; 13] = ["=>", "==", "(", ")", ",", ";", "=", "+", "*", "!", ".", "\\", "λ"];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && c != 'λ' || c == '_'
}

fn is_ident_char(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit()
}

pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut pins = BTreeSet::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (l0, c0) = (line, col);
        let start = i;
        let tok = if is_ident_start(c) {
            let mut j = i;
            // hyphens join identifier parts: opened-dispatch
            while j < chars.len()
                && (is_ident_char(chars[j])
                    || chars[j] == '-' && chars.get(j + 1).is_some_and(|c| is_ident_char(*c)))
            {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let mut pin = None;
            if chars.get(j) == Some(&'@') {
                let mut k = j + 1;
                let synthesized = chars.get(k) == Some(&'\'');
                if synthesized {
                    k += 1;
                }
                let digits_start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[digits_start..k].iter().collect();
                let id: u64 = digits
                    .parse()
                    .map_err(|_| ParseError::new(l0, c0, format!("bad label pin after `{text}`")))?;
                if id == 0 || !pins.insert(id) {
                    return Err(ParseError::new(l0, c0, format!("label {id} pinned twice or zero")));
                }
                pin = Some(if synthesized {
                    Label::synthesized(id)
                } else {
                    Label::source(id)
                });
                j = k;
            }
            advance(&mut i, &mut line, &mut col, j - start);
            Tok::Ident { text, pin }
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| ParseError::new(l0, c0, "integer literal out of range"))?;
            advance(&mut i, &mut line, &mut col, j - start);
            Tok::Int(n)
        } else if c == '"' {
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                match chars.get(j) {
                    None | Some('\n') => {
                        return Err(ParseError::new(l0, c0, "unterminated string literal"))
                    }
                    Some('"') => break,
                    Some('\\') if chars.get(j + 1).is_some() => {
                        s.push(chars[j + 1]);
                        j += 2;
                    }
                    Some(ch) => {
                        s.push(*ch);
                        j += 1;
                    }
                }
            }
            advance(&mut i, &mut line, &mut col, j + 1 - start);
            Tok::Str(s)
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    advance(&mut i, &mut line, &mut col, p.chars().count());
                    Tok::Punct(p)
                }
                None => return Err(ParseError::new(l0, c0, format!("unexpected character `{c}`"))),
            }
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    if let Some(max) = pins.last() {
        reserve_through(*max);
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: lex(src)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError::new(s.line, s.column, msg)
    }

    pub fn at_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident { text, pin: None } if text == kw)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`, found {}", describe(self.peek()))))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`, found {}", describe(self.peek()))))
        }
    }

    /// Consumes an identifier that is not one of `keywords`.
    pub fn ident(&mut self, keywords: &[&str]) -> Result<(String, Label), ParseError> {
        match self.peek().clone() {
            Tok::Ident { text, pin } if pin.is_some() || !keywords.contains(&text.as_str()) => {
                self.next();
                Ok((text, pin.unwrap_or_else(fresh_source_label)))
            }
            other => Err(self.error(format!("expected identifier, found {}", describe(&other)))),
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", describe(self.peek()))))
        }
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident { text, .. } => format!("`{text}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Str(s) => format!("{s:?}"),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn hyphenated_identifiers_and_arrows() {
        let t = toks("lock=>opened-dispatch");
        assert_eq!(t.len(), 4);
        assert!(matches!(&t[2], Tok::Ident { text, .. } if text == "opened-dispatch"));
        assert_eq!(t[1], Tok::Punct("=>"));
    }

    #[test]
    fn pins_set_id_and_provenance() {
        let t = toks("x@3 x@'5");
        assert!(matches!(&t[0], Tok::Ident { pin: Some(l), .. } if l.id() == 3 && !l.is_synthesized()));
        assert!(matches!(&t[1], Tok::Ident { pin: Some(l), .. } if l.id() == 5 && l.is_synthesized()));
    }

    #[test]
    fn duplicate_pins_are_rejected() {
        let e = lex("x@1 y@1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
    }

    #[test]
    fn strings_comments_and_positions() {
        let s = lex("// hi\n  \"close\" == 12").unwrap();
        assert_eq!(s[0].tok, Tok::Str("close".into()));
        assert_eq!((s[0].line, s[0].column), (2, 3));
        assert_eq!(s[2].tok, Tok::Int(12));
    }

    #[test]
    fn lambda_symbol_is_punctuation() {
        assert_eq!(toks("λx")[0], Tok::Punct("λ"));
    }
}
