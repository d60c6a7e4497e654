//! Name graphs: the label set of a program plus its reference → declaration map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::term::{Label, Term};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameGraph {
    nodes: BTreeSet<Label>,
    rho: BTreeMap<Label, Label>,
}

impl NameGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from explicit parts. Edge endpoints are added to the node set.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = Label>,
        edges: impl IntoIterator<Item = (Label, Label)>,
    ) -> Self {
        let mut g = NameGraph {
            nodes: nodes.into_iter().collect(),
            rho: BTreeMap::new(),
        };
        for (r, d) in edges {
            g.nodes.insert(r);
            g.nodes.insert(d);
            g.rho.insert(r, d);
        }
        g
    }

    pub fn nodes(&self) -> &BTreeSet<Label> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<Label, Label> {
        &self.rho
    }

    pub fn contains(&self, v: Label) -> bool {
        self.nodes.contains(&v)
    }

    /// `rho(v)`, if `v` is a bound reference.
    pub fn resolve(&self, v: Label) -> Option<Label> {
        self.rho.get(&v).copied()
    }

    pub fn is_reference(&self, v: Label) -> bool {
        self.rho.contains_key(&v)
    }

    /// Labels that some reference resolves to.
    pub fn declarations(&self) -> BTreeSet<Label> {
        self.rho.values().copied().collect()
    }

    /// All references bound to `decl`.
    pub fn references_to(&self, decl: Label) -> impl Iterator<Item = Label> + '_ {
        self.rho
            .iter()
            .filter(move |(_, d)| **d == decl)
            .map(|(r, _)| *r)
    }

    /// True iff no label is both a reference and a declaration.
    pub fn is_bipartite(&self) -> bool {
        self.rho.values().all(|d| !self.rho.contains_key(d))
    }

    /// The graph with the given labels (and every edge touching them) removed.
    pub fn without(&self, drop: &BTreeSet<Label>) -> NameGraph {
        NameGraph {
            nodes: self.nodes.difference(drop).copied().collect(),
            rho: self
                .rho
                .iter()
                .filter(|(r, d)| !drop.contains(r) && !drop.contains(d))
                .map(|(r, d)| (*r, *d))
                .collect(),
        }
    }
}

impl fmt::Display for NameGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("({")?;
        for (i, v) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}, {")?;
        for (i, (r, d)) in self.rho.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r} ↦ {d}")?;
        }
        f.write_str("})")
    }
}

/// Accumulates resolution results while a resolver walks a term.
///
/// A label may occur several times in a generated term. When its occurrences
/// resolve to different declarations, the binding found at the deepest scope
/// wins (ties go to the later occurrence), and a bound occurrence beats an
/// unbound one. Any disagreement between copies means one of them was
/// captured by a shadowing binder, and shadowing binders are always the more
/// deeply nested ones, so this choice keeps the capture visible.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: BTreeSet<Label>,
    rho: BTreeMap<Label, (Label, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, v: Label) {
        self.nodes.insert(v);
    }

    /// Records that an occurrence of `reference` resolves to `declaration`,
    /// which lives at scope depth `depth`.
    pub fn bind(&mut self, reference: Label, declaration: Label, depth: usize) {
        self.nodes.insert(reference);
        self.nodes.insert(declaration);
        match self.rho.get(&reference) {
            Some((_, old)) if *old > depth => {}
            _ => {
                self.rho.insert(reference, (declaration, depth));
            }
        }
    }

    pub fn finish(self) -> NameGraph {
        NameGraph {
            nodes: self.nodes,
            rho: self.rho.into_iter().map(|(r, (d, _))| (r, d)).collect(),
        }
    }
}

/// Why a graph is not a valid name graph of a program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A label of the program is missing from the node set.
    MissingLabel(Label),
    /// The node set has a label that does not occur in the program.
    UnknownLabel(Label),
    /// An edge endpoint is not in the node set.
    DanglingEdge { reference: Label, declaration: Label },
    /// Reference and declaration are spelled differently.
    NameMismatch {
        reference: Label,
        declaration: Label,
        reference_text: String,
        declaration_text: String,
    },
    /// The program itself spells one label two ways.
    InconsistentLabel(Label),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingLabel(l) => write!(f, "label {l} missing from graph"),
            Violation::UnknownLabel(l) => write!(f, "graph node {l} not in program"),
            Violation::DanglingEdge {
                reference,
                declaration,
            } => write!(f, "edge {reference} ↦ {declaration} leaves the node set"),
            Violation::NameMismatch {
                reference,
                declaration,
                reference_text,
                declaration_text,
            } => write!(
                f,
                "edge {reference} ↦ {declaration} joins `{reference_text}` and `{declaration_text}`"
            ),
            Violation::InconsistentLabel(l) => write!(f, "label {l} has inconsistent texts"),
        }
    }
}

/// Checks that `g` is a name graph of `p`. An empty result means valid.
pub fn validate_graph(p: &Term, g: &NameGraph) -> Vec<Violation> {
    let texts = match p.label_texts() {
        Ok(t) => t,
        Err(crate::Error::InconsistentLabel { label, .. }) => {
            return vec![Violation::InconsistentLabel(label)]
        }
        Err(_) => unreachable!("label_texts only reports inconsistent labels"),
    };
    let mut out = Vec::new();
    for l in texts.keys() {
        if !g.contains(*l) {
            out.push(Violation::MissingLabel(*l));
        }
    }
    for l in g.nodes() {
        if !texts.contains_key(l) {
            out.push(Violation::UnknownLabel(*l));
        }
    }
    for (r, d) in g.edges() {
        if !g.contains(*r) || !g.contains(*d) {
            out.push(Violation::DanglingEdge {
                reference: *r,
                declaration: *d,
            });
            continue;
        }
        if let (Some(rt), Some(dt)) = (texts.get(r), texts.get(d)) {
            if rt != dt {
                out.push(Violation::NameMismatch {
                    reference: *r,
                    declaration: *d,
                    reference_text: rt.to_string(),
                    declaration_text: dt.to_string(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(id: u64) -> Label {
        Label::source(id)
    }

    fn door_graph() -> NameGraph {
        NameGraph::from_parts(
            [1, 2, 4, 5, 6, 8, 9].map(s),
            [(6, 1), (2, 4), (9, 4), (5, 8)].map(|(a, b)| (s(a), s(b))),
        )
    }

    #[test]
    fn bipartite_examples() {
        assert!(door_graph().is_bipartite());
        assert!(NameGraph::new().is_bipartite());
        let mut edges: Vec<(Label, Label)> = door_graph().edges().iter().map(|(a, b)| (*a, *b)).collect();
        edges.extend([(s(1), s(1)), (s(4), s(4)), (s(8), s(8))]);
        let with_cycle = NameGraph::from_parts([], edges);
        assert!(!with_cycle.is_bipartite());
    }

    #[test]
    fn validate_reports_name_mismatch_and_missing_label() {
        let p = Term::Compound(vec![
            Term::name("a", s(1)),
            Term::name("a", s(2)),
            Term::name("b", s(3)),
        ]);
        let ok = NameGraph::from_parts([s(3)], [(s(2), s(1))]);
        assert!(validate_graph(&p, &ok).is_empty());
        let bad = NameGraph::from_parts([s(1)], [(s(3), s(2))]);
        let v = validate_graph(&p, &bad);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::NameMismatch { .. }));
        let missing = NameGraph::from_parts([s(1), s(2)], []);
        assert_eq!(validate_graph(&p, &missing), vec![Violation::MissingLabel(s(3))]);
    }

    #[test]
    fn builder_prefers_deeper_binding() {
        let mut b = GraphBuilder::new();
        b.bind(s(5), s(1), 0);
        b.bind(s(5), s(2), 3);
        b.bind(s(5), s(1), 0);
        let g = b.finish();
        assert_eq!(g.resolve(s(5)), Some(s(2)));
    }

    #[test]
    fn without_drops_edges_touching_labels() {
        let g = door_graph().without(&[s(4)].into_iter().collect());
        assert_eq!(g.edges().len(), 2);
        assert!(!g.contains(s(4)));
    }
}
