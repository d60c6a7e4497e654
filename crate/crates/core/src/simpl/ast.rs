use std::collections::BTreeSet;

use crate::error::Error;
use crate::term::{Atom, Label, Name, Term};

pub(crate) const LANG: &str = "simpl";

/// Top-level function definitions followed by the main expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplProgram {
    pub fdefs: Vec<FDef>,
    pub main: Vec<Exp>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FDef {
    pub name: Name,
    pub params: Vec<Name>,
    pub body: Exp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exp {
    Var(Name),
    Let(Name, Box<Exp>, Box<Exp>),
    /// A local function definition scoping over its own body and the second expression.
    LetFun(Box<FDef>, Box<Exp>),
    If(Box<Exp>, Box<Exp>, Box<Exp>),
    Eq(Box<Exp>, Box<Exp>),
    Add(Box<Exp>, Box<Exp>),
    Mul(Box<Exp>, Box<Exp>),
    Not(Box<Exp>),
    Call(Name, Vec<Exp>),
    Int(i64),
    Str(String),
    Error,
}

impl Exp {
    pub fn var(text: &str, label: Label) -> Exp {
        Exp::Var(Name::new(text, label))
    }

    pub fn call(text: &str, label: Label, args: Vec<Exp>) -> Exp {
        Exp::Call(Name::new(text, label), args)
    }

    pub fn let_(x: Name, init: Exp, body: Exp) -> Exp {
        Exp::Let(x, Box::new(init), Box::new(body))
    }

    pub fn if_(c: Exp, t: Exp, e: Exp) -> Exp {
        Exp::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn eq(a: Exp, b: Exp) -> Exp {
        Exp::Eq(Box::new(a), Box::new(b))
    }

    pub fn add(a: Exp, b: Exp) -> Exp {
        Exp::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Exp, b: Exp) -> Exp {
        Exp::Mul(Box::new(a), Box::new(b))
    }

    pub fn not(a: Exp) -> Exp {
        Exp::Not(Box::new(a))
    }

    /// Visits every name occurrence, declarations included.
    pub fn for_each_name(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Exp::Var(n) => f(n),
            Exp::Let(x, i, b) => {
                f(x);
                i.for_each_name(f);
                b.for_each_name(f);
            }
            Exp::LetFun(fd, b) => {
                fd.for_each_name(f);
                b.for_each_name(f);
            }
            Exp::If(c, t, e) => {
                c.for_each_name(f);
                t.for_each_name(f);
                e.for_each_name(f);
            }
            Exp::Eq(a, b) | Exp::Add(a, b) | Exp::Mul(a, b) => {
                a.for_each_name(f);
                b.for_each_name(f);
            }
            Exp::Not(a) => a.for_each_name(f),
            Exp::Call(n, args) => {
                f(n);
                args.iter().for_each(|a| a.for_each_name(f));
            }
            Exp::Int(_) | Exp::Str(_) | Exp::Error => {}
        }
    }

    /// Rebuilds the expression with every name occurrence passed through `f`.
    pub fn map_names(&self, f: &mut impl FnMut(&Name) -> Name) -> Exp {
        let bx = |e: &Exp, mut f: &mut dyn FnMut(&Name) -> Name| Box::new(e.map_names(&mut f));
        match self {
            Exp::Var(n) => Exp::Var(f(n)),
            Exp::Let(x, i, b) => {
                let x = f(x);
                Exp::Let(x, bx(i, f), bx(b, f))
            }
            Exp::LetFun(d, b) => {
                let d = d.map_names(f);
                Exp::LetFun(Box::new(d), bx(b, f))
            }
            Exp::If(c, t, e) => Exp::If(bx(c, f), bx(t, f), bx(e, f)),
            Exp::Eq(a, b) => Exp::Eq(bx(a, f), bx(b, f)),
            Exp::Add(a, b) => Exp::Add(bx(a, f), bx(b, f)),
            Exp::Mul(a, b) => Exp::Mul(bx(a, f), bx(b, f)),
            Exp::Not(a) => Exp::Not(bx(a, f)),
            Exp::Call(n, args) => {
                let n = f(n);
                Exp::Call(n, args.iter().map(|a| a.map_names(&mut *f)).collect())
            }
            Exp::Int(_) | Exp::Str(_) | Exp::Error => self.clone(),
        }
    }

    /// Pre-order rewrite: where `f` returns a replacement it is used as is,
    /// elsewhere the children are rewritten.
    pub fn rewrite(&self, f: &mut dyn FnMut(&Exp) -> Option<Exp>) -> Exp {
        if let Some(r) = f(self) {
            return r;
        }
        let mut bx = |e: &Exp| Box::new(e.rewrite(f));
        match self {
            Exp::Let(x, i, b) => Exp::Let(x.clone(), bx(i), bx(b)),
            Exp::LetFun(d, b) => {
                let body = d.body.rewrite(f);
                let d = FDef::new(d.name.clone(), d.params.clone(), body);
                Exp::LetFun(Box::new(d), Box::new(b.rewrite(f)))
            }
            Exp::If(c, t, e) => Exp::If(bx(c), bx(t), bx(e)),
            Exp::Eq(a, b) => Exp::Eq(bx(a), bx(b)),
            Exp::Add(a, b) => Exp::Add(bx(a), bx(b)),
            Exp::Mul(a, b) => Exp::Mul(bx(a), bx(b)),
            Exp::Not(a) => Exp::Not(bx(a)),
            Exp::Call(n, args) => Exp::Call(n.clone(), args.iter().map(|a| a.rewrite(f)).collect()),
            Exp::Var(_) | Exp::Int(_) | Exp::Str(_) | Exp::Error => self.clone(),
        }
    }

    pub fn contains_let_fun(&self) -> bool {
        match self {
            Exp::LetFun(..) => true,
            Exp::Let(_, i, b) => i.contains_let_fun() || b.contains_let_fun(),
            Exp::If(c, t, e) => c.contains_let_fun() || t.contains_let_fun() || e.contains_let_fun(),
            Exp::Eq(a, b) | Exp::Add(a, b) | Exp::Mul(a, b) => {
                a.contains_let_fun() || b.contains_let_fun()
            }
            Exp::Not(a) => a.contains_let_fun(),
            Exp::Call(_, args) => args.iter().any(Exp::contains_let_fun),
            Exp::Var(_) | Exp::Int(_) | Exp::Str(_) | Exp::Error => false,
        }
    }
}

impl FDef {
    pub fn new(name: Name, params: Vec<Name>, body: Exp) -> FDef {
        FDef { name, params, body }
    }

    pub fn map_names(&self, f: &mut impl FnMut(&Name) -> Name) -> FDef {
        let name = f(&self.name);
        let params = self.params.iter().map(&mut *f).collect();
        FDef::new(name, params, self.body.map_names(f))
    }

    pub fn for_each_name(&self, f: &mut impl FnMut(&Name)) {
        f(&self.name);
        self.params.iter().for_each(&mut *f);
        self.body.for_each_name(f);
    }
}

impl SimplProgram {
    pub fn for_each_name(&self, f: &mut impl FnMut(&Name)) {
        self.fdefs.iter().for_each(|d| d.for_each_name(f));
        self.main.iter().for_each(|e| e.for_each_name(f));
    }

    pub fn map_names(&self, f: &mut impl FnMut(&Name) -> Name) -> SimplProgram {
        SimplProgram {
            fdefs: self.fdefs.iter().map(|d| d.map_names(&mut *f)).collect(),
            main: self.main.iter().map(|e| e.map_names(&mut *f)).collect(),
        }
    }

    /// Every label occurring in the program.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.for_each_name(&mut |n| {
            out.insert(n.label);
        });
        out
    }

    /// Every name text occurring in the program.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_name(&mut |n| {
            out.insert(n.text.clone());
        });
        out
    }

    /// The last top-level definition called `name`, the one references resolve to.
    pub fn fdef(&self, name: &str) -> Option<&FDef> {
        self.fdefs.iter().rev().find(|d| d.name.text == name)
    }

    pub fn to_term(&self) -> Term {
        Term::node(
            "program",
            [
                Term::node("fdefs", self.fdefs.iter().map(fdef_term)),
                Term::node("main", self.main.iter().map(exp_term)),
            ],
        )
    }

    pub fn from_term(t: &Term) -> Result<SimplProgram, Error> {
        let [fdefs, main] = children(t, "program")? else {
            return Err(bad(t));
        };
        Ok(SimplProgram {
            fdefs: list(fdefs, "fdefs")?
                .iter()
                .map(fdef_of)
                .collect::<Result<_, _>>()?,
            main: list(main, "main")?
                .iter()
                .map(exp_of)
                .collect::<Result<_, _>>()?,
        })
    }
}

fn fdef_term(d: &FDef) -> Term {
    Term::node(
        "fdef",
        [
            Term::Name(d.name.clone()),
            Term::node("params", d.params.iter().cloned().map(Term::Name)),
            exp_term(&d.body),
        ],
    )
}

pub(crate) fn exp_term(e: &Exp) -> Term {
    let b = |tag: &str, xs: &[&Exp]| Term::node(tag, xs.iter().map(|x| exp_term(x)));
    match e {
        Exp::Var(n) => Term::node("var", [Term::Name(n.clone())]),
        Exp::Let(x, i, body) => {
            Term::node("let", [Term::Name(x.clone()), exp_term(i), exp_term(body)])
        }
        Exp::LetFun(d, body) => Term::node("letfun", [fdef_term(d), exp_term(body)]),
        Exp::If(c, t, f) => b("if", &[c, t, f]),
        Exp::Eq(l, r) => b("eq", &[l, r]),
        Exp::Add(l, r) => b("add", &[l, r]),
        Exp::Mul(l, r) => b("mul", &[l, r]),
        Exp::Not(a) => b("not", &[a]),
        Exp::Call(f, args) => Term::node(
            "call",
            [Term::Name(f.clone()), Term::node("args", args.iter().map(exp_term))],
        ),
        Exp::Int(n) => Term::int(*n),
        Exp::Str(s) => Term::Const(Atom::Str(s.clone())),
        Exp::Error => Term::node("error", []),
    }
}

fn bad(t: &Term) -> Error {
    Error::malformed(LANG, format!("unexpected form {t}"))
}

fn tagged<'a>(t: &'a Term) -> Option<(&'a str, &'a [Term])> {
    match t {
        Term::Compound(ts) => match ts.first() {
            Some(Term::Const(Atom::Sym(s))) => Some((s.as_str(), &ts[1..])),
            _ => None,
        },
        _ => None,
    }
}

fn children<'a>(t: &'a Term, tag: &str) -> Result<&'a [Term], Error> {
    match tagged(t) {
        Some((s, rest)) if s == tag => Ok(rest),
        _ => Err(bad(t)),
    }
}

fn list<'a>(t: &'a Term, tag: &str) -> Result<&'a [Term], Error> {
    children(t, tag)
}

fn name_of(t: &Term) -> Result<Name, Error> {
    match t {
        Term::Name(n) => Ok(n.clone()),
        _ => Err(Error::malformed(LANG, format!("expected a name, found {t}"))),
    }
}

fn fdef_of(t: &Term) -> Result<FDef, Error> {
    let [name, params, body] = children(t, "fdef")? else {
        return Err(bad(t));
    };
    Ok(FDef {
        name: name_of(name)?,
        params: list(params, "params")?
            .iter()
            .map(name_of)
            .collect::<Result<_, _>>()?,
        body: exp_of(body)?,
    })
}

pub(crate) fn exp_of(t: &Term) -> Result<Exp, Error> {
    let bx = |t: &Term| exp_of(t).map(Box::new);
    match t {
        Term::Const(Atom::Int(n)) => return Ok(Exp::Int(*n)),
        Term::Const(Atom::Str(s)) => return Ok(Exp::Str(s.clone())),
        _ => {}
    }
    let Some((tag, xs)) = tagged(t) else {
        return Err(bad(t));
    };
    Ok(match (tag, xs) {
        ("var", [n]) => Exp::Var(name_of(n)?),
        ("let", [x, i, b]) => Exp::Let(name_of(x)?, bx(i)?, bx(b)?),
        ("letfun", [d, b]) => Exp::LetFun(Box::new(fdef_of(d)?), bx(b)?),
        ("if", [c, a, b]) => Exp::If(bx(c)?, bx(a)?, bx(b)?),
        ("eq", [a, b]) => Exp::Eq(bx(a)?, bx(b)?),
        ("add", [a, b]) => Exp::Add(bx(a)?, bx(b)?),
        ("mul", [a, b]) => Exp::Mul(bx(a)?, bx(b)?),
        ("not", [a]) => Exp::Not(bx(a)?),
        ("call", [f, args]) => Exp::Call(
            name_of(f)?,
            list(args, "args")?
                .iter()
                .map(exp_of)
                .collect::<Result<_, _>>()?,
        ),
        ("error", []) => Exp::Error,
        _ => return Err(bad(t)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Label;

    #[test]
    fn term_round_trip() {
        let s = Label::source;
        let n = |t: &str, id| Name::new(t, s(id));
        let p = SimplProgram {
            fdefs: vec![FDef::new(
                n("f", 1),
                vec![n("x", 2)],
                Exp::LetFun(
                    Box::new(FDef::new(n("g", 3), vec![], Exp::Str("s".into()))),
                    Box::new(Exp::if_(
                        Exp::eq(Exp::var("x", s(4)), Exp::Int(0)),
                        Exp::not(Exp::Error),
                        Exp::let_(n("y", 5), Exp::Int(1), Exp::call("g", s(6), vec![])),
                    )),
                ),
            )],
            main: vec![Exp::mul(Exp::add(Exp::Int(1), Exp::Int(2)), Exp::call("f", s(7), vec![Exp::Int(3)]))],
        };
        let t = p.to_term();
        assert_eq!(SimplProgram::from_term(&t).unwrap(), p);
        assert!(SimplProgram::from_term(&Term::int(1)).is_err());
        assert!(p.fdefs[0].body.contains_let_fun());
    }
}
