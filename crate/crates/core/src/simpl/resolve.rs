use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::graph::{GraphBuilder, NameGraph};
use crate::resolver::Resolver;
use crate::term::{Label, Name, Term};

use super::ast::{Exp, FDef, SimplProgram, LANG};

/// Lexical resolution with one namespace for functions and variables.
///
/// Top-level functions form the outermost scope and are visible everywhere;
/// among duplicates the last definition wins. Parameters scope over their
/// function body, `let` over its body only (not its initializer), and a local
/// function over its own body and the `let` body. Inner declarations shadow
/// outer ones.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimplResolver;

pub fn resolve_simpl(p: &SimplProgram) -> NameGraph {
    let globals: BTreeMap<&str, Label> = p
        .fdefs
        .iter()
        .map(|d| (d.name.text.as_str(), d.name.label))
        .collect();
    let mut w = Walker {
        globals,
        env: Vec::new(),
        b: GraphBuilder::new(),
    };
    for d in &p.fdefs {
        w.b.node(d.name.label);
        w.function(d);
    }
    for e in &p.main {
        w.exp(e);
    }
    w.b.finish()
}

/// Every label at a binding position: function names, parameters, let-bound names.
pub fn simpl_declarations(p: &SimplProgram) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    p.fdefs.iter().for_each(|d| fdef_declarations(d, &mut out));
    p.main.iter().for_each(|e| exp_declarations(e, &mut out));
    out
}

pub(crate) fn fdef_declarations(d: &FDef, out: &mut BTreeSet<Label>) {
    out.insert(d.name.label);
    out.extend(d.params.iter().map(|n| n.label));
    exp_declarations(&d.body, out);
}

pub(crate) fn exp_declarations(e: &Exp, out: &mut BTreeSet<Label>) {
    match e {
        Exp::Let(x, i, b) => {
            out.insert(x.label);
            exp_declarations(i, out);
            exp_declarations(b, out);
        }
        Exp::LetFun(d, b) => {
            fdef_declarations(d, out);
            exp_declarations(b, out);
        }
        Exp::If(c, t, f) => {
            exp_declarations(c, out);
            exp_declarations(t, out);
            exp_declarations(f, out);
        }
        Exp::Eq(a, b) | Exp::Add(a, b) | Exp::Mul(a, b) => {
            exp_declarations(a, out);
            exp_declarations(b, out);
        }
        Exp::Not(a) => exp_declarations(a, out),
        Exp::Call(_, args) => args.iter().for_each(|a| exp_declarations(a, out)),
        Exp::Var(_) | Exp::Int(_) | Exp::Str(_) | Exp::Error => {}
    }
}

struct Walker<'a> {
    globals: BTreeMap<&'a str, Label>,
    env: Vec<&'a Name>,
    b: GraphBuilder,
}

impl<'a> Walker<'a> {
    fn reference(&mut self, n: &Name) {
        if let Some(i) = self.env.iter().rposition(|d| d.text == n.text) {
            self.b.bind(n.label, self.env[i].label, i + 1);
        } else if let Some(d) = self.globals.get(n.text.as_str()) {
            self.b.bind(n.label, *d, 0);
        } else {
            self.b.node(n.label);
        }
    }

    fn function(&mut self, d: &'a FDef) {
        let depth = self.env.len();
        for p in &d.params {
            self.b.node(p.label);
            self.env.push(p);
        }
        self.exp(&d.body);
        self.env.truncate(depth);
    }

    fn exp(&mut self, e: &'a Exp) {
        match e {
            Exp::Var(n) => self.reference(n),
            Exp::Call(f, args) => {
                self.reference(f);
                args.iter().for_each(|a| self.exp(a));
            }
            Exp::Let(x, init, body) => {
                self.b.node(x.label);
                self.exp(init);
                self.env.push(x);
                self.exp(body);
                self.env.pop();
            }
            Exp::LetFun(d, body) => {
                self.b.node(d.name.label);
                self.env.push(&d.name);
                self.function(d);
                self.exp(body);
                self.env.pop();
            }
            Exp::If(c, t, f) => {
                self.exp(c);
                self.exp(t);
                self.exp(f);
            }
            Exp::Eq(a, b) | Exp::Add(a, b) | Exp::Mul(a, b) => {
                self.exp(a);
                self.exp(b);
            }
            Exp::Not(a) => self.exp(a),
            Exp::Int(_) | Exp::Str(_) | Exp::Error => {}
        }
    }
}

impl Resolver for SimplResolver {
    fn language(&self) -> &'static str {
        LANG
    }

    fn resolve(&self, t: &Term) -> Result<NameGraph, Error> {
        Ok(resolve_simpl(&SimplProgram::from_term(t)?))
    }

    fn declarations(&self, t: &Term) -> Result<BTreeSet<Label>, Error> {
        Ok(simpl_declarations(&SimplProgram::from_term(t)?))
    }
}
