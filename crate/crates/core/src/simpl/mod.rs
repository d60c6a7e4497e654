//! SIMPL: a small procedural language with global first-order functions,
//! `let`, local functions, conditionals and a few operators.
//!
//! Besides parsing, printing, name resolution and an interpreter, the module
//! hosts three transformations that are written without any regard for
//! capture: substitution, inlining and lambda lifting. Each one runs the raw
//! transformation and then [`name_fix`] against the source program's graph.
//!
//! ```
//! use namefix::simpl::{parse_simpl, parse_simpl_exp, pretty_simpl, subst};
//!
//! let p = parse_simpl("fun f(y) = y; let n = 1 in x + n").unwrap();
//! let out = subst(&p, "x", &parse_simpl_exp("n").unwrap()).unwrap();
//! assert_eq!(pretty_simpl(&out, false), "fun f(y) = y;\nlet n0 = 1 in\n  n + n0\n");
//! ```

mod ast;
mod eval;
mod inline;
mod lift;
mod parse;
mod pretty;
mod resolve;
mod subst;

use std::collections::{BTreeMap, BTreeSet};

pub use ast::{Exp, FDef, SimplProgram};
pub use eval::{call_function, eval_simpl, EvalError, Value};
pub use inline::{inline, inline_raw};
pub use lift::{lambda_lift, lambda_lift_raw};
pub use parse::{parse_simpl, parse_simpl_exp};
pub use pretty::{pretty_exp, pretty_simpl};
pub use resolve::{resolve_simpl, simpl_declarations, SimplResolver};
pub use subst::{subst, subst_e, subst_f, subst_p};

use crate::error::Error;
use crate::fix::{name_fix, FixTrace};
use crate::graph::NameGraph;
use crate::term::{Label, LabelGen, Name};

/// A transformation result before and after capture elimination.
#[derive(Debug, Clone)]
pub struct Fixed {
    pub source_graph: NameGraph,
    pub raw: SimplProgram,
    pub program: SimplProgram,
    pub trace: FixTrace,
}

/// Runs [`name_fix`] on `raw`, the output of transforming `source`.
pub fn fix_against(source: &SimplProgram, raw: SimplProgram) -> Result<Fixed, Error> {
    let gs = resolve_simpl(source);
    fix_with_graph(gs, raw)
}

pub(crate) fn fix_with_graph(gs: NameGraph, raw: SimplProgram) -> Result<Fixed, Error> {
    let (t, trace) = name_fix(&gs, &raw.to_term(), &SimplResolver)?;
    Ok(Fixed {
        source_graph: gs,
        program: SimplProgram::from_term(&t)?,
        raw,
        trace,
    })
}

/// Copies expressions, giving fresh synthesized labels to the declarations
/// inside the copy and to the references meant to bind to them.
///
/// `intended` starts out as the source program's reference map and learns
/// the bindings of every fresh reference, so copies of copies stay consistent.
pub(crate) struct Copier {
    intended: BTreeMap<Label, Label>,
    gen: LabelGen,
}

impl Copier {
    pub fn new(intended: &NameGraph, gen: LabelGen) -> Self {
        Copier {
            intended: intended.edges().clone(),
            gen,
        }
    }

    pub fn intended(&self, reference: Label) -> Option<Label> {
        self.intended.get(&reference).copied()
    }

    /// Relabels the declarations `decls` of `e` and every reference bound to them.
    pub fn relabel(&mut self, e: &Exp, decls: &BTreeSet<Label>) -> Exp {
        let mut map: BTreeMap<Label, Label> = BTreeMap::new();
        for d in decls {
            map.insert(*d, self.gen.fresh());
        }
        let mut refs = Vec::new();
        e.for_each_name(&mut |n| {
            if let Some(d) = self.intended.get(&n.label) {
                if decls.contains(d) && !decls.contains(&n.label) {
                    refs.push((n.label, *d));
                }
            }
        });
        for (r, d) in refs {
            if !map.contains_key(&r) {
                let fresh = self.gen.fresh();
                map.insert(r, fresh);
                self.intended.insert(fresh, map[&d]);
            }
        }
        e.map_names(&mut |n| match map.get(&n.label) {
            Some(l) => Name::new(n.text.clone(), *l),
            None => n.clone(),
        })
    }

    /// A copy of `e` whose own declarations are fresh.
    pub fn fresh_copy(&mut self, e: &Exp) -> Exp {
        let mut decls = BTreeSet::new();
        resolve::exp_declarations(e, &mut decls);
        if decls.is_empty() {
            return e.clone();
        }
        self.relabel(e, &decls)
    }
}
