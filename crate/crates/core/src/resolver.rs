//! The resolver contract and a randomized checker for it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::error::Error;
use crate::graph::{validate_graph, NameGraph, Violation};
use crate::term::{Label, Renaming, Term};

/// Name analysis for one object language.
///
/// Implementations must be pure functions of the term. They should leave free
/// names out of the reference map rather than fail on them.
pub trait Resolver {
    fn language(&self) -> &'static str;

    fn resolve(&self, t: &Term) -> Result<NameGraph, Error>;

    /// Labels that occur at binding positions.
    fn declarations(&self, t: &Term) -> Result<BTreeSet<Label>, Error>;
}

impl<R: Resolver + ?Sized> Resolver for &R {
    fn language(&self) -> &'static str {
        (**self).language()
    }

    fn resolve(&self, t: &Term) -> Result<NameGraph, Error> {
        (**self).resolve(t)
    }

    fn declarations(&self, t: &Term) -> Result<BTreeSet<Label>, Error> {
        (**self).declarations(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssumptionViolation {
    /// The resolver output is not a name graph of its input.
    InvalidGraph { trial: usize, violation: Violation },
    /// Label-equivalent inputs produced different node sets.
    NodeSetMismatch { trial: usize },
    /// A reference whose declaration is still spelled the same was left unbound.
    ReferenceDropped {
        trial: usize,
        reference: Label,
        declaration: Label,
    },
    /// Two equally-named candidate declarations were chosen inconsistently.
    Nondeterministic {
        trial: usize,
        reference: Label,
        first: Label,
        second: Label,
    },
}

impl fmt::Display for AssumptionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssumptionViolation::InvalidGraph { trial, violation } => {
                write!(f, "trial {trial}: invalid graph: {violation}")
            }
            AssumptionViolation::NodeSetMismatch { trial } => {
                write!(f, "trial {trial}: node sets differ")
            }
            AssumptionViolation::ReferenceDropped {
                trial,
                reference,
                declaration,
            } => write!(
                f,
                "trial {trial}: reference {reference} (bound to {declaration}) became unbound"
            ),
            AssumptionViolation::Nondeterministic {
                trial,
                reference,
                first,
                second,
            } => write!(
                f,
                "trial {trial}: reference {reference} resolved to {first} and to {second}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AssumptionReport {
    pub trials: usize,
    pub violations: Vec<AssumptionViolation>,
}

impl AssumptionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares the resolutions of two label-equivalent programs and records
/// every breach of the determinism requirements (in the `p1 → p2` direction).
fn compare_resolutions(
    trial: usize,
    p1: &Term,
    g1: &NameGraph,
    p2: &Term,
    g2: &NameGraph,
    out: &mut Vec<AssumptionViolation>,
) -> Result<(), Error> {
    let n1 = p1.label_texts()?;
    let n2 = p2.label_texts()?;
    for (&r, &d) in g1.edges() {
        let (Some(r2), Some(d2)) = (n2.get(&r), n2.get(&d)) else {
            continue;
        };
        match g2.resolve(r) {
            None if r2 == d2 => out.push(AssumptionViolation::ReferenceDropped {
                trial,
                reference: r,
                declaration: d,
            }),
            Some(d_alt) if d_alt != d => {
                let same1 = n1.get(&d) == n1.get(&d_alt);
                let same2 = n2.get(&d) == n2.get(&d_alt);
                if same1 && same2 {
                    out.push(AssumptionViolation::Nondeterministic {
                        trial,
                        reference: r,
                        first: d,
                        second: d_alt,
                    });
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Draws a random label-consistent renaming of `p`'s texts.
///
/// Half of the draws permute whole text classes (consistent renamings), the
/// others re-spell individual labels from a small pool, which produces
/// capture and collisions.
fn random_variant(p: &Term, rng: &mut StdRng) -> Result<Term, Error> {
    let texts = p.label_texts()?;
    let mut pool: Vec<String> = texts.values().map(|s| s.to_string()).collect();
    pool.sort();
    pool.dedup();
    pool.push("v0".into());
    pool.push("v1".into());
    let pi: Renaming = if rng.gen_bool(0.5) {
        let classes: BTreeMap<&str, String> = texts
            .values()
            .map(|t| (*t, pool.choose(rng).unwrap().clone()))
            .collect();
        texts
            .iter()
            .map(|(l, t)| (*l, classes[t].clone()))
            .collect()
    } else {
        let mut pi = Renaming::new();
        for l in texts.keys() {
            if rng.gen_bool(0.5) {
                pi.insert(*l, pool.choose(rng).unwrap().clone());
            }
        }
        pi
    };
    Ok(p.rename(&pi))
}

/// Runs `trials` randomized checks of the resolver contract on variants of `p`.
///
/// Trial 0 always uses `p` itself. Every trial validates both graphs and
/// compares the two resolutions in both directions.
pub fn check_resolver_assumptions<R: Resolver + ?Sized>(
    r: &R,
    p: &Term,
    trials: usize,
    seed: u64,
) -> Result<AssumptionReport, Error> {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = r.resolve(p)?;
    let mut report = AssumptionReport {
        trials,
        violations: Vec::new(),
    };
    for violation in validate_graph(p, &g) {
        report
            .violations
            .push(AssumptionViolation::InvalidGraph { trial: 0, violation });
    }
    for trial in 0..trials {
        let q = if trial == 0 {
            p.clone()
        } else {
            random_variant(p, &mut rng)?
        };
        let gq = r.resolve(&q)?;
        for violation in validate_graph(&q, &gq) {
            report
                .violations
                .push(AssumptionViolation::InvalidGraph { trial, violation });
        }
        if gq.nodes() != g.nodes() {
            report
                .violations
                .push(AssumptionViolation::NodeSetMismatch { trial });
        }
        compare_resolutions(trial, p, &g, &q, &gq, &mut report.violations)?;
        compare_resolutions(trial, &q, &gq, p, &g, &mut report.violations)?;
    }
    Ok(report)
}
