use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::graph::NameGraph;
use crate::term::{Label, LabelGen};

use super::ast::{Exp, FDef, SimplProgram};
use super::resolve::{exp_declarations, resolve_simpl};
use super::{fix_with_graph, Copier};

/// Inlines every call of the top-level function `fname`, then removes capture.
///
/// The definition itself is kept. Calls inside its own body are left alone,
/// so each call site is expanded exactly once.
pub fn inline(p: &SimplProgram, fname: &str) -> Result<SimplProgram, Error> {
    let raw = inline_raw(p, fname)?;
    Ok(fix_with_graph(resolve_simpl(p), raw)?.program)
}

/// Naive inlining. Each call site gets a copy of the body whose local
/// declarations are fresh; parameters are replaced by the argument expressions.
pub fn inline_raw(p: &SimplProgram, fname: &str) -> Result<SimplProgram, Error> {
    let target = p
        .fdef(fname)
        .ok_or_else(|| Error::UnknownFunction(fname.to_string()))?;
    let g = resolve_simpl(p);
    let mut body_decls = BTreeSet::new();
    exp_declarations(&target.body, &mut body_decls);
    let mut cx = Inliner {
        target,
        params: target.params.iter().map(|n| n.label).collect(),
        body_decls,
        g: &g,
        copier: Copier::new(&g, LabelGen::above(p.labels())),
    };
    let fdefs = p
        .fdefs
        .iter()
        .map(|d| {
            if d.name.label == target.name.label {
                Ok(d.clone())
            } else {
                Ok(FDef::new(d.name.clone(), d.params.clone(), cx.exp(&d.body)?))
            }
        })
        .collect::<Result<_, Error>>()?;
    let main = p.main.iter().map(|e| cx.exp(e)).collect::<Result<_, _>>()?;
    Ok(SimplProgram { fdefs, main })
}

struct Inliner<'a> {
    target: &'a FDef,
    params: Vec<Label>,
    body_decls: BTreeSet<Label>,
    g: &'a NameGraph,
    copier: Copier,
}

impl Inliner<'_> {
    fn exp(&mut self, e: &Exp) -> Result<Exp, Error> {
        let mut err = None;
        let out = e.rewrite(&mut |node| match node {
            Exp::Call(f, args) if self.g.resolve(f.label) == Some(self.target.name.label) => {
                let args: Result<Vec<Exp>, Error> = args.iter().map(|a| self.exp(a)).collect();
                match args.and_then(|a| self.expand(a)) {
                    Ok(x) => Some(x),
                    Err(e) => {
                        err.get_or_insert(e);
                        Some(Exp::Error)
                    }
                }
            }
            _ => None,
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    fn expand(&mut self, args: Vec<Exp>) -> Result<Exp, Error> {
        if args.len() != self.params.len() {
            return Err(Error::ArityMismatch {
                function: self.target.name.text.clone(),
                expected: self.params.len(),
                found: args.len(),
            });
        }
        let body = self.copier.relabel(&self.target.body, &self.body_decls);
        let by_param: BTreeMap<Label, Exp> = self.params.iter().copied().zip(args).collect();
        let mut used: BTreeSet<Label> = BTreeSet::new();
        Ok(body.rewrite(&mut |node| match node {
            Exp::Var(x) => {
                let param = self.copier.intended(x.label)?;
                let arg = by_param.get(&param)?;
                Some(if used.insert(param) {
                    arg.clone()
                } else {
                    self.copier.fresh_copy(arg)
                })
            }
            _ => None,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{eval_simpl, parse_simpl, pretty_simpl};
    use super::*;

    #[test]
    fn uncalled_function_leaves_program_unchanged() {
        let p = parse_simpl("fun f(x) = x; fun g(y) = y + 1; g(2)").unwrap();
        assert_eq!(inline(&p, "f").unwrap(), p);
    }

    #[test]
    fn unknown_function_and_arity() {
        let p = parse_simpl("fun f(x) = x; f(1, 2)").unwrap();
        assert!(matches!(inline(&p, "g"), Err(Error::UnknownFunction(_))));
        assert!(matches!(
            inline(&p, "f"),
            Err(Error::ArityMismatch { expected: 1, found: 2, .. })
        ));
    }

    #[test]
    fn parameters_are_replaced_simultaneously() {
        let p = parse_simpl("fun swap(x, y) = y + x*10; swap(y, x)").unwrap();
        let out = inline(&p, "swap").unwrap();
        assert_eq!(pretty_simpl(&out, false), "fun swap(x, y) = y + x*10;\nx + y*10\n");
    }

    #[test]
    fn body_declarations_are_fresh_at_every_site() {
        let p = parse_simpl("fun f(x) = let t = x in t + t; f(1) + f(2)").unwrap();
        let raw = inline_raw(&p, "f").unwrap();
        assert!(raw.to_term().labels().is_ok());
        let decl_labels: Vec<Label> = raw.main.iter().flat_map(|e| {
            let mut s = BTreeSet::new();
            exp_declarations(e, &mut s);
            s
        }).collect();
        assert_eq!(decl_labels.len(), 2);
        assert!(decl_labels.iter().all(|l| l.is_synthesized()));
        assert_eq!(eval_simpl(&inline(&p, "f").unwrap(), 1000), eval_simpl(&p, 1000));
    }

    #[test]
    fn recursive_calls_inside_the_definition_stay() {
        let p = parse_simpl("fun f(x) = if x == 0 then 0 else f(0); f(3)").unwrap();
        let out = inline(&p, "f").unwrap();
        assert_eq!(
            pretty_simpl(&out, false),
            "fun f(x) = if x == 0 then 0 else f(0);\nif 3 == 0 then 0 else f(0)\n"
        );
    }
}
