//! Capture detection and elimination.
//!
//! [`name_fix`] compares the name graph of a transformation's input with the
//! name graph of its output, renames declarations that capture something, and
//! repeats until the output graph preserves every source binding and keeps
//! synthesized references away from source declarations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::graph::NameGraph;
use crate::resolver::Resolver;
use crate::term::{Label, Renaming, Term};

/// Which preservation rule a capture edge breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaptureKind {
    /// A source reference now resolves to a different declaration than in the source.
    ReferenceRedirected,
    /// A source label that was not a reference now resolves to something other than itself.
    ReferenceIntroduced,
    /// A synthesized reference resolves to a source declaration.
    DeclarationExtended,
}

impl CaptureKind {
    /// Short tag used in logs.
    pub fn tag(self) -> &'static str {
        match self {
            CaptureKind::ReferenceRedirected => "ref-redirected",
            CaptureKind::ReferenceIntroduced => "ref-introduced",
            CaptureKind::DeclarationExtended => "decl-extended",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaptureEdge {
    pub reference: Label,
    pub declaration: Label,
    pub kind: CaptureKind,
}

impl fmt::Display for CaptureEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} ↦ {}) [{}]",
            self.reference,
            self.declaration,
            self.kind.tag()
        )
    }
}

/// Edges of the target graph that witness capture.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaptureSet {
    edges: BTreeSet<CaptureEdge>,
}

impl CaptureSet {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CaptureEdge> + '_ {
        self.edges.iter()
    }

    pub fn contains(&self, reference: Label, declaration: Label) -> bool {
        self.edges
            .iter()
            .any(|e| e.reference == reference && e.declaration == declaration)
    }

    /// The capturing declarations, in ascending label order.
    pub fn declarations(&self) -> BTreeSet<Label> {
        self.edges.iter().map(|e| e.declaration).collect()
    }

    pub fn of_kind(&self, kind: CaptureKind) -> impl Iterator<Item = &CaptureEdge> + '_ {
        self.edges.iter().filter(move |e| e.kind == kind)
    }
}

impl fmt::Display for CaptureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Renamings for captured-into source declarations and synthesized name groups.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RenamingPair {
    pub source: Renaming,
    pub synthesized: Renaming,
}

impl RenamingPair {
    pub fn combined(&self) -> Renaming {
        self.source.union(&self.synthesized)
    }
}

/// One round of [`name_fix`]: what was captured, how it was renamed, and the result.
#[derive(Debug, Clone)]
pub struct FixStep {
    /// The term examined in this round and its name graph.
    pub before: Term,
    pub graph: NameGraph,
    pub capture: CaptureSet,
    pub renaming: RenamingPair,
    pub term: Term,
}

#[derive(Debug, Clone, Default)]
pub struct FixTrace {
    pub steps: Vec<FixStep>,
}

impl FixTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One line per iteration: capture edges followed by both renamings.
    pub fn log(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "iteration {}: capture {} src {} syn {}\n",
                i + 1,
                s.capture,
                s.renaming.source,
                s.renaming.synthesized
            ));
        }
        out
    }
}

/// `base` followed by the smallest decimal suffix that is not in `used`.
pub fn gensym(base: &str, used: &BTreeSet<String>) -> String {
    (0u64..)
        .map(|k| format!("{base}{k}"))
        .find(|cand| !used.contains(cand))
        .expect("unbounded suffix space")
}

/// Collects every edge of `gt` that breaks reference intent or declaration extent
/// relative to `gs`.
pub fn find_capture(gs: &NameGraph, gt: &NameGraph) -> CaptureSet {
    let mut edges = BTreeSet::new();
    for (&v, &target) in gt.edges() {
        let kind = if gs.contains(v) {
            match gs.resolve(v) {
                Some(intended) if intended != target => Some(CaptureKind::ReferenceRedirected),
                None if v != target => Some(CaptureKind::ReferenceIntroduced),
                _ => None,
            }
        } else if gs.contains(target) {
            Some(CaptureKind::DeclarationExtended)
        } else {
            None
        };
        if let Some(kind) = kind {
            edges.insert(CaptureEdge {
                reference: v,
                declaration: target,
                kind,
            });
        }
    }
    CaptureSet { edges }
}

/// Computes fresh names for every capturing declaration.
///
/// A source declaration is renamed together with its source references. A
/// synthesized declaration is renamed together with every synthesized label
/// that shares its name, since the target graph cannot tell which of those
/// were meant to refer to it.
pub fn comp_renaming(
    gs: &NameGraph,
    gt: &NameGraph,
    t: &Term,
    capture: &CaptureSet,
) -> Result<RenamingPair, Error> {
    let texts = t.label_texts()?;
    let target_names: BTreeSet<String> = texts.values().map(|s| s.to_string()).collect();
    let mut pair = RenamingPair::default();
    for vd in capture.declarations() {
        let current = texts.get(&vd).copied().ok_or(Error::LabelNotFound(vd))?;
        let mut used = target_names.clone();
        used.extend(pair.source.codomain().map(str::to_string));
        used.extend(pair.synthesized.codomain().map(str::to_string));
        let fresh = gensym(current, &used);
        if gs.contains(vd) {
            if !pair.source.contains(vd) {
                pair.source.insert(vd, fresh.clone());
                for vr in gs.references_to(vd) {
                    pair.source.insert(vr, fresh.clone());
                }
            }
        } else if !pair.synthesized.contains(vd) {
            for (v, text) in &texts {
                if gt.contains(*v) && !gs.contains(*v) && *text == current {
                    pair.synthesized.insert(*v, fresh.clone());
                }
            }
        }
    }
    Ok(pair)
}

fn marked_source_labels(gs: &NameGraph, t: &Term) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    t.for_each_name(&mut |n| {
        if n.label.is_synthesized() && gs.contains(n.label) {
            out.insert(n.label);
        }
    });
    out
}

/// Removes variable capture from `t`, the output of a transformation whose
/// input resolved to `gs`.
///
/// Returns `t` unchanged when it is already capture free. Source labels that
/// were flagged synthesized with [`Term::mark`] are treated as synthesized, so
/// binders introduced by the transformation may capture them on purpose.
pub fn name_fix<R: Resolver + ?Sized>(
    gs: &NameGraph,
    t: &Term,
    r: &R,
) -> Result<(Term, FixTrace), Error> {
    let marked = marked_source_labels(gs, t);
    let owned;
    let gs = if marked.is_empty() {
        gs
    } else {
        owned = gs.without(&marked);
        &owned
    };
    let budget = r.declarations(t)?.len();
    let mut trace = FixTrace::default();
    let mut current = t.clone();
    loop {
        let gt = r.resolve(&current)?;
        let capture = find_capture(gs, &gt);
        if capture.is_empty() {
            return Ok((current, trace));
        }
        if trace.len() >= budget {
            return Err(Error::IterationBudgetExceeded { budget });
        }
        let renaming = comp_renaming(gs, &gt, &current, &capture)?;
        let next = current.rename(&renaming.combined());
        let before = std::mem::replace(&mut current, next);
        trace.steps.push(FixStep {
            before,
            graph: gt,
            capture,
            renaming,
            term: current.clone(),
        });
    }
}

/// Groups the labels of `t` by text; handy for inspecting fix results.
pub fn labels_by_name(t: &Term) -> Result<BTreeMap<String, BTreeSet<Label>>, Error> {
    let mut out: BTreeMap<String, BTreeSet<Label>> = BTreeMap::new();
    for (l, s) in t.label_texts()? {
        out.entry(s.to_string()).or_default().insert(l);
    }
    Ok(out)
}
