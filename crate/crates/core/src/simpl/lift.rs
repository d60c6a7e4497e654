use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::graph::NameGraph;
use crate::term::{Label, Name};

use super::ast::{Exp, FDef, SimplProgram};
use super::resolve::{fdef_declarations, resolve_simpl};
use super::fix_with_graph;

/// Lifts every local function to the top level, then removes capture.
pub fn lambda_lift(p: &SimplProgram) -> Result<SimplProgram, Error> {
    let raw = lambda_lift_raw(p);
    Ok(fix_with_graph(resolve_simpl(p), raw)?.program)
}

/// Naive lambda lifting.
///
/// Variables a local function uses from enclosing scopes, directly or through
/// calls to other local functions, become extra trailing parameters (ordered
/// by declaration label) and every call passes them along. Free variables are
/// computed from the name graph of the input. Lifted definitions keep their
/// labels and are appended after the existing ones in pre-order.
pub fn lambda_lift_raw(p: &SimplProgram) -> SimplProgram {
    let g = resolve_simpl(p);
    let mut locals: Vec<&FDef> = Vec::new();
    p.fdefs.iter().for_each(|d| collect_locals(&d.body, &mut locals));
    p.main.iter().for_each(|e| collect_locals(e, &mut locals));
    if locals.is_empty() {
        return p.clone();
    }

    let globals: BTreeSet<Label> = p.fdefs.iter().map(|d| d.name.label).collect();
    let local_names: BTreeSet<Label> = locals.iter().map(|d| d.name.label).collect();
    let mut texts: BTreeMap<Label, String> = BTreeMap::new();
    p.for_each_name(&mut |n| {
        texts.entry(n.label).or_insert_with(|| n.text.clone());
    });

    struct Info {
        inner: BTreeSet<Label>,
        free: BTreeSet<Label>,
        calls: BTreeSet<Label>,
    }
    let mut info: BTreeMap<Label, Info> = BTreeMap::new();
    for d in &locals {
        let mut inner = BTreeSet::new();
        fdef_declarations(d, &mut inner);
        let (mut free, mut calls) = (BTreeSet::new(), BTreeSet::new());
        d.body.for_each_name(&mut |n| {
            let Some(decl) = g.resolve(n.label) else { return };
            if inner.contains(&decl) || globals.contains(&decl) {
            } else if local_names.contains(&decl) {
                calls.insert(decl);
            } else {
                free.insert(decl);
            }
        });
        info.insert(d.name.label, Info { inner, free, calls });
    }
    loop {
        let mut changed = false;
        for f in local_names.iter() {
            let mut add = BTreeSet::new();
            for h in &info[f].calls {
                add.extend(info[h].free.difference(&info[f].inner).copied());
            }
            let entry = info.get_mut(f).unwrap();
            for v in add {
                changed |= entry.free.insert(v);
            }
        }
        if !changed {
            break;
        }
    }
    let extra: BTreeMap<Label, Vec<Name>> = info
        .iter()
        .map(|(f, i)| (*f, i.free.iter().map(|v| Name::new(texts[v].clone(), *v)).collect()))
        .collect();

    let mut lx = Lifter {
        g: &g,
        extra: &extra,
        lifted: Vec::new(),
    };
    let fdefs: Vec<FDef> = p
        .fdefs
        .iter()
        .map(|d| FDef::new(d.name.clone(), d.params.clone(), lx.exp(&d.body)))
        .collect();
    let main = p.main.iter().map(|e| lx.exp(e)).collect();
    let mut all = fdefs;
    all.extend(lx.lifted.into_iter().flatten());
    SimplProgram { fdefs: all, main }
}

fn collect_locals<'a>(e: &'a Exp, out: &mut Vec<&'a FDef>) {
    match e {
        Exp::LetFun(d, b) => {
            out.push(d);
            collect_locals(&d.body, out);
            collect_locals(b, out);
        }
        Exp::Let(_, i, b) => {
            collect_locals(i, out);
            collect_locals(b, out);
        }
        Exp::If(c, t, f) => {
            collect_locals(c, out);
            collect_locals(t, out);
            collect_locals(f, out);
        }
        Exp::Eq(a, b) | Exp::Add(a, b) | Exp::Mul(a, b) => {
            collect_locals(a, out);
            collect_locals(b, out);
        }
        Exp::Not(a) => collect_locals(a, out),
        Exp::Call(_, args) => args.iter().for_each(|a| collect_locals(a, out)),
        Exp::Var(_) | Exp::Int(_) | Exp::Str(_) | Exp::Error => {}
    }
}

struct Lifter<'a> {
    g: &'a NameGraph,
    extra: &'a BTreeMap<Label, Vec<Name>>,
    lifted: Vec<Option<FDef>>,
}

impl Lifter<'_> {
    fn exp(&mut self, e: &Exp) -> Exp {
        e.rewrite(&mut |node| match node {
            Exp::LetFun(d, body) => {
                let slot = self.lifted.len();
                self.lifted.push(None);
                let mut params = d.params.clone();
                params.extend(self.extra[&d.name.label].iter().cloned());
                let lifted_body = self.exp(&d.body);
                self.lifted[slot] = Some(FDef::new(d.name.clone(), params, lifted_body));
                Some(self.exp(body))
            }
            Exp::Call(f, args) => {
                let mut args: Vec<Exp> = args.iter().map(|a| self.exp(a)).collect();
                if let Some(extra) = self.g.resolve(f.label).and_then(|d| self.extra.get(&d)) {
                    args.extend(extra.iter().map(|n| Exp::Var(n.clone())));
                }
                Some(Exp::Call(f.clone(), args))
            }
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{eval_simpl, parse_simpl, pretty_simpl};
    use super::*;

    fn lifted(src: &str) -> String {
        pretty_simpl(&lambda_lift(&parse_simpl(src).unwrap()).unwrap(), false)
    }

    #[test]
    fn no_local_functions_means_no_change() {
        let p = parse_simpl("fun f(x) = x + 1; let y = 2 in f(y)").unwrap();
        assert_eq!(lambda_lift(&p).unwrap(), p);
    }

    #[test]
    fn closed_local_function_keeps_arity() {
        assert_eq!(
            lifted("let fun k(a) = a*2 in k(4)"),
            "fun k(a) = a*2;\nk(4)\n"
        );
    }

    #[test]
    fn free_variables_flow_through_calls() {
        let src = "let y = 1 in let fun h() = y in let y = 2 in let fun f() = h() + y in f()";
        let p = parse_simpl(src).unwrap();
        let out = lambda_lift(&p).unwrap();
        assert!(!out.main.iter().any(Exp::contains_let_fun));
        assert_eq!(eval_simpl(&out, 1000), eval_simpl(&p, 1000));
        assert_eq!(
            pretty_simpl(&out, false),
            "fun h(y) = y;\nfun f(y, y0) = h(y) + y0;\nlet y = 1 in\n  let y0 = 2 in\n    f(y, y0)\n"
        );
    }

    #[test]
    fn nested_local_functions() {
        let src = "let a = 5 in let fun outer(x) = let fun inner(z) = z + a + x in inner(1) in outer(2)";
        let p = parse_simpl(src).unwrap();
        let out = lambda_lift(&p).unwrap();
        assert_eq!(out.fdefs.len(), 2);
        assert_eq!(eval_simpl(&out, 1000), eval_simpl(&p, 1000));
        assert_eq!(out.fdefs[0].name.text, "outer");
        assert_eq!(out.fdefs[1].params.len(), 3);
    }
}
