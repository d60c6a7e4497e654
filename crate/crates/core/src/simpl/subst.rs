use crate::error::Error;
use crate::term::LabelGen;

use super::ast::{Exp, FDef, SimplProgram};
use super::resolve::resolve_simpl;
use super::{fix_against, Copier};

/// Capture-avoiding substitution of `e` for the free occurrences of `x`.
pub fn subst(p: &SimplProgram, x: &str, e: &Exp) -> Result<SimplProgram, Error> {
    Ok(fix_against(p, subst_p(p, x, e))?.program)
}

/// Naive substitution over a whole program. May capture.
///
/// Each inserted copy of `e` reuses `e`'s labels; only declarations inside
/// the second and later copies are relabeled.
pub fn subst_p(p: &SimplProgram, x: &str, e: &Exp) -> SimplProgram {
    let standalone = SimplProgram {
        fdefs: Vec::new(),
        main: vec![e.clone()],
    };
    let mut labels = p.labels();
    labels.extend(standalone.labels());
    let mut s = Subst {
        x,
        e,
        copies: 0,
        copier: Copier::new(&resolve_simpl(&standalone), LabelGen::above(labels)),
    };
    SimplProgram {
        fdefs: p.fdefs.iter().map(|d| s.fdef(d)).collect(),
        main: p.main.iter().map(|m| s.exp(m)).collect(),
    }
}

/// Naive substitution into one function; a parameter named `x` blocks it.
pub fn subst_f(d: &FDef, x: &str, e: &Exp) -> FDef {
    let p = SimplProgram {
        fdefs: vec![d.clone()],
        main: Vec::new(),
    };
    subst_p(&p, x, e).fdefs.remove(0)
}

/// Naive substitution into one expression.
pub fn subst_e(body: &Exp, x: &str, e: &Exp) -> Exp {
    let p = SimplProgram {
        fdefs: Vec::new(),
        main: vec![body.clone()],
    };
    subst_p(&p, x, e).main.remove(0)
}

struct Subst<'a> {
    x: &'a str,
    e: &'a Exp,
    copies: usize,
    copier: Copier,
}

impl Subst<'_> {
    fn fdef(&mut self, d: &FDef) -> FDef {
        if d.params.iter().any(|p| p.text == self.x) {
            return d.clone();
        }
        FDef::new(d.name.clone(), d.params.clone(), self.exp(&d.body))
    }

    fn exp(&mut self, body: &Exp) -> Exp {
        body.rewrite(&mut |node| match node {
            Exp::Var(y) if y.text == self.x => {
                self.copies += 1;
                Some(if self.copies == 1 {
                    self.e.clone()
                } else {
                    self.copier.fresh_copy(self.e)
                })
            }
            Exp::Let(y, init, b) => {
                let init = self.exp(init);
                let b = if y.text == self.x { (**b).clone() } else { self.exp(b) };
                Some(Exp::let_(y.clone(), init, b))
            }
            Exp::LetFun(d, b) => {
                let d2 = if d.name.text == self.x {
                    (**d).clone()
                } else {
                    self.fdef(d)
                };
                let b = if d.name.text == self.x { (**b).clone() } else { self.exp(b) };
                Some(Exp::LetFun(Box::new(d2), Box::new(b)))
            }
            _ => None,
        })
    }
}
