//! Graphviz export of name graphs.
//!
//! Declarations are drawn as boxes and references as circles. Synthesized
//! labels are filled gray. Capture edges are dashed and red.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::fix::{CaptureSet, FixTrace};
use crate::graph::NameGraph;
use crate::term::{Label, Term};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders `g` as a DOT digraph. Node captions come from `t` when the label occurs there.
pub fn graph_to_dot(
    name: &str,
    g: &NameGraph,
    t: &Term,
    declarations: &BTreeSet<Label>,
    capture: &CaptureSet,
) -> String {
    let texts: BTreeMap<Label, String> = match t.label_texts() {
        Ok(m) => m.into_iter().map(|(l, s)| (l, s.to_string())).collect(),
        Err(_) => BTreeMap::new(),
    };
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [fontname=\"monospace\"];").unwrap();
    let bound = g.declarations();
    for v in g.nodes() {
        let shape = if declarations.contains(v) || bound.contains(v) {
            "box"
        } else {
            "circle"
        };
        let caption = match texts.get(v) {
            Some(s) => format!("{}\\n{v}", escape(s)),
            None => v.to_string(),
        };
        let fill = if v.is_synthesized() {
            ", style=filled, fillcolor=gray80"
        } else {
            ""
        };
        writeln!(
            out,
            "  n{} [label=\"{}\", shape={shape}{fill}];",
            v.id(),
            caption
        )
        .unwrap();
    }
    for (r, d) in g.edges() {
        let style = if capture.contains(*r, *d) {
            " [style=dashed, color=red]"
        } else {
            ""
        };
        writeln!(out, "  n{} -> n{}{style};", r.id(), d.id()).unwrap();
    }
    out.push_str("}\n");
    out
}

/// One DOT document per fix iteration, showing the graph in which capture was found.
pub fn trace_to_dot(trace: &FixTrace, declarations: &BTreeSet<Label>) -> Vec<String> {
    trace
        .steps
        .iter()
        .enumerate()
        .map(|(k, s)| graph_to_dot(&format!("fix{}", k + 1), &s.graph, &s.before, declarations, &s.capture))
        .collect()
}
