//! A small λ-calculus with integers and `+`.
//!
//! Terms are encoded directly as [`Term`]s: `(lam x body)`, `(app f a)`,
//! `(add l r)`, name references and integer constants.
//!
//! ```
//! use namefix::lambda::{parse_lambda, LambdaResolver};
//! use namefix::Resolver;
//!
//! let p = parse_lambda(r"\x. (\y. y y) x").unwrap();
//! let g = LambdaResolver.resolve(&p).unwrap();
//! assert_eq!(g.edges().len(), 3);
//! ```

use std::collections::BTreeSet;

use crate::error::{Error, ParseError};
use crate::graph::{GraphBuilder, NameGraph};
use crate::resolver::Resolver;
use crate::syntax::{describe, Cursor, Tok};
use crate::term::{Atom, Label, Name, Term};

const LANG: &str = "lambda";

pub fn lam(param: Term, body: Term) -> Term {
    Term::node("lam", [param, body])
}

pub fn app(f: Term, a: Term) -> Term {
    Term::node("app", [f, a])
}

pub fn add(l: Term, r: Term) -> Term {
    Term::node("add", [l, r])
}

pub fn var(text: &str, label: Label) -> Term {
    Term::name(text, label)
}

/// Parses `e ::= \x. e | e e | e + e | x | <int> | (e)`.
///
/// `λ` may be used instead of `\`. Application is left associative and
/// binds tighter than `+`; a lambda extends as far right as possible.
pub fn parse_lambda(src: &str) -> Result<Term, ParseError> {
    let mut c = Cursor::new(src)?;
    let t = expr(&mut c)?;
    c.expect_eof()?;
    Ok(t)
}

fn at_lambda(c: &Cursor) -> bool {
    c.at_punct("\\") || c.at_punct("λ")
}

fn expr(c: &mut Cursor) -> Result<Term, ParseError> {
    if at_lambda(c) {
        c.next();
        let (x, l) = c.ident(&[])?;
        c.expect_punct(".")?;
        let body = expr(c)?;
        return Ok(lam(Term::name(x, l), body));
    }
    let mut lhs = application(c)?;
    while c.eat_punct("+") {
        let rhs = if at_lambda(c) { expr(c)? } else { application(c)? };
        lhs = add(lhs, rhs);
    }
    Ok(lhs)
}

fn starts_atom(c: &Cursor) -> bool {
    matches!(c.peek(), Tok::Ident { .. } | Tok::Int(_)) || c.at_punct("(")
}

fn application(c: &mut Cursor) -> Result<Term, ParseError> {
    let mut f = atom(c)?;
    loop {
        if starts_atom(c) {
            let a = atom(c)?;
            f = app(f, a);
        } else if at_lambda(c) {
            let a = expr(c)?;
            return Ok(app(f, a));
        } else {
            return Ok(f);
        }
    }
}

fn atom(c: &mut Cursor) -> Result<Term, ParseError> {
    match c.peek().clone() {
        Tok::Int(n) => {
            c.next();
            Ok(Term::int(n))
        }
        Tok::Ident { .. } => {
            let (x, l) = c.ident(&[])?;
            Ok(Term::name(x, l))
        }
        Tok::Punct("(") => {
            c.next();
            let e = expr(c)?;
            c.expect_punct(")")?;
            Ok(e)
        }
        other => Err(c.error(format!("expected expression, found {}", describe(&other)))),
    }
}

fn tag(ts: &[Term]) -> Option<&str> {
    match ts.first() {
        Some(Term::Const(Atom::Sym(s))) => Some(s),
        _ => None,
    }
}

/// Innermost-binder resolution; unbound names stay out of the map.
#[derive(Debug, Clone, Copy, Default)]
pub struct LambdaResolver;

impl LambdaResolver {
    fn walk<'a>(
        t: &'a Term,
        env: &mut Vec<&'a Name>,
        b: &mut GraphBuilder,
    ) -> Result<(), Error> {
        match t {
            Term::Const(Atom::Int(_)) => Ok(()),
            Term::Const(c) => Err(Error::malformed(LANG, format!("unexpected constant {c}"))),
            Term::Name(n) => {
                match env.iter().rposition(|d| d.text == n.text) {
                    Some(i) => b.bind(n.label, env[i].label, i + 1),
                    None => b.node(n.label),
                }
                Ok(())
            }
            Term::Compound(ts) => match (tag(ts), ts.len()) {
                (Some("lam"), 3) => {
                    let Term::Name(x) = &ts[1] else {
                        return Err(Error::malformed(LANG, "lambda parameter must be a name"));
                    };
                    b.node(x.label);
                    env.push(x);
                    let r = Self::walk(&ts[2], env, b);
                    env.pop();
                    r
                }
                (Some("app" | "add"), 3) => {
                    Self::walk(&ts[1], env, b)?;
                    Self::walk(&ts[2], env, b)
                }
                _ => Err(Error::malformed(LANG, format!("unexpected form {t}"))),
            },
        }
    }
}

impl Resolver for LambdaResolver {
    fn language(&self) -> &'static str {
        LANG
    }

    fn resolve(&self, t: &Term) -> Result<NameGraph, Error> {
        let mut b = GraphBuilder::new();
        Self::walk(t, &mut Vec::new(), &mut b)?;
        Ok(b.finish())
    }

    fn declarations(&self, t: &Term) -> Result<BTreeSet<Label>, Error> {
        fn go(t: &Term, out: &mut BTreeSet<Label>) {
            if let Term::Compound(ts) = t {
                if let (Some("lam"), Some(Term::Name(x))) = (tag(ts), ts.get(1)) {
                    out.insert(x.label);
                }
                ts.iter().for_each(|c| go(c, out));
            }
        }
        let mut out = BTreeSet::new();
        go(t, &mut out);
        Ok(out)
    }
}

/// Renders a λ-term in the concrete syntax accepted by [`parse_lambda`].
pub fn pretty_lambda(t: &Term, show_labels: bool) -> String {
    let mut s = String::new();
    pp(t, 0, show_labels, &mut s);
    s
}

// levels: 0 lambda, 1 sum, 2 application, 3 atom
fn pp(t: &Term, level: u8, labels: bool, out: &mut String) {
    let wrap = |need: u8, out: &mut String, f: &dyn Fn(&mut String)| {
        if level > need {
            out.push('(');
            f(out);
            out.push(')');
        } else {
            f(out);
        }
    };
    match t {
        Term::Const(c) => out.push_str(&c.to_string()),
        Term::Name(n) if labels => out.push_str(&n.to_string()),
        Term::Name(n) => out.push_str(&n.text),
        Term::Compound(ts) => match tag(ts) {
            Some("lam") => wrap(0, out, &|out| {
                out.push('\\');
                pp(&ts[1], 3, labels, out);
                out.push_str(". ");
                pp(&ts[2], 0, labels, out);
            }),
            Some("add") => wrap(1, out, &|out| {
                pp(&ts[1], 1, labels, out);
                out.push_str(" + ");
                pp(&ts[2], 2, labels, out);
            }),
            Some("app") => wrap(2, out, &|out| {
                pp(&ts[1], 2, labels, out);
                out.push(' ');
                pp(&ts[2], 3, labels, out);
            }),
            _ => out.push_str(&t.to_string()),
        },
    }
}
