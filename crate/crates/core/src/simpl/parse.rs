use crate::error::ParseError;
use crate::syntax::{describe, Cursor, Tok};
use crate::term::Name;

use super::ast::{Exp, FDef, SimplProgram};

const KEYWORDS: [&str; 7] = ["fun", "let", "in", "if", "then", "else", "error"];

/// Parses `(fun f(x, ...) = e;)* e (; e)*`.
///
/// Every name occurrence gets a fresh source label unless pinned with `@`.
pub fn parse_simpl(src: &str) -> Result<SimplProgram, ParseError> {
    let mut c = Cursor::new(src)?;
    let mut fdefs = Vec::new();
    while c.at_keyword("fun") {
        c.next();
        fdefs.push(fdef(&mut c)?);
        if !c.eat_punct(";") && !c.at_eof() {
            return Err(c.error(format!("expected `;`, found {}", describe(c.peek()))));
        }
    }
    let mut main = Vec::new();
    while !c.at_eof() {
        main.push(exp(&mut c)?);
        if !c.eat_punct(";") {
            break;
        }
    }
    c.expect_eof()?;
    Ok(SimplProgram { fdefs, main })
}

/// Parses a single expression, as used for substitution arguments.
pub fn parse_simpl_exp(src: &str) -> Result<Exp, ParseError> {
    let mut c = Cursor::new(src)?;
    let e = exp(&mut c)?;
    c.expect_eof()?;
    Ok(e)
}

fn name(c: &mut Cursor) -> Result<Name, ParseError> {
    let (text, label) = c.ident(&KEYWORDS)?;
    Ok(Name::new(text, label))
}

// after `fun`
fn fdef(c: &mut Cursor) -> Result<FDef, ParseError> {
    let f = name(c)?;
    c.expect_punct("(")?;
    let mut params = Vec::new();
    if !c.at_punct(")") {
        loop {
            params.push(name(c)?);
            if !c.eat_punct(",") {
                break;
            }
        }
    }
    c.expect_punct(")")?;
    c.expect_punct("=")?;
    let body = exp(c)?;
    Ok(FDef::new(f, params, body))
}

fn exp(c: &mut Cursor) -> Result<Exp, ParseError> {
    if c.eat_keyword("let") {
        if c.eat_keyword("fun") {
            let d = fdef(c)?;
            c.expect_keyword("in")?;
            let body = exp(c)?;
            return Ok(Exp::LetFun(Box::new(d), Box::new(body)));
        }
        let x = name(c)?;
        c.expect_punct("=")?;
        let init = exp(c)?;
        c.expect_keyword("in")?;
        let body = exp(c)?;
        return Ok(Exp::let_(x, init, body));
    }
    if c.eat_keyword("if") {
        let cond = exp(c)?;
        c.expect_keyword("then")?;
        let t = exp(c)?;
        c.expect_keyword("else")?;
        let e = exp(c)?;
        return Ok(Exp::if_(cond, t, e));
    }
    let lhs = sum(c)?;
    if c.eat_punct("==") {
        let rhs = sum(c)?;
        return Ok(Exp::eq(lhs, rhs));
    }
    Ok(lhs)
}

fn sum(c: &mut Cursor) -> Result<Exp, ParseError> {
    let mut lhs = product(c)?;
    while c.eat_punct("+") {
        lhs = Exp::add(lhs, product(c)?);
    }
    Ok(lhs)
}

fn product(c: &mut Cursor) -> Result<Exp, ParseError> {
    let mut lhs = unary(c)?;
    while c.eat_punct("*") {
        lhs = Exp::mul(lhs, unary(c)?);
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor) -> Result<Exp, ParseError> {
    if c.eat_punct("!") {
        return Ok(Exp::not(unary(c)?));
    }
    if c.at_keyword("let") || c.at_keyword("if") {
        return exp(c);
    }
    atom(c)
}

fn atom(c: &mut Cursor) -> Result<Exp, ParseError> {
    match c.peek().clone() {
        Tok::Int(n) => {
            c.next();
            Ok(Exp::Int(n))
        }
        Tok::Str(s) => {
            c.next();
            Ok(Exp::Str(s))
        }
        Tok::Punct("(") => {
            c.next();
            let e = exp(c)?;
            c.expect_punct(")")?;
            Ok(e)
        }
        Tok::Ident { ref text, pin: None } if text == "error" => {
            c.next();
            c.expect_punct("(")?;
            c.expect_punct(")")?;
            Ok(Exp::Error)
        }
        Tok::Ident { .. } => {
            let n = name(c)?;
            if !c.eat_punct("(") {
                return Ok(Exp::Var(n));
            }
            let mut args = Vec::new();
            if !c.at_punct(")") {
                loop {
                    args.push(exp(c)?);
                    if !c.eat_punct(",") {
                        break;
                    }
                }
            }
            c.expect_punct(")")?;
            Ok(Exp::Call(n, args))
        }
        other => Err(c.error(format!("expected expression, found {}", describe(&other)))),
    }
}
