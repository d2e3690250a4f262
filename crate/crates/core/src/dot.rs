//! Graphviz output. Base edges are solid, fill edges dashed.

use std::fmt::Write as _;

use crate::graph::{FillSet, MulticoloredGraph};
use crate::zipper::GadgetEmbedding;

/// DOT rendering of `g` with optional fill edges. Vertices are labelled
/// `id: colors`.
pub fn to_dot(g: &MulticoloredGraph, fill: Option<&FillSet>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle, fontsize=10];\n");
    for v in 0..g.num_vertices() {
        let cs: Vec<String> = g.colors(v).iter().map(|c| c.to_string()).collect();
        writeln!(out, "  {v} [label=\"{v}: {}\"];", cs.join(",")).unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    for (u, v) in fill.into_iter().flat_map(|f| f.iter()) {
        writeln!(out, "  {u} -- {v} [style=dashed, color=red];").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Gadget drawn as a ladder: P on top, Q underneath, head and tail at the
/// ends, with pinned positions for `neato -n`.
pub fn gadget_to_dot(g: &MulticoloredGraph, emb: &GadgetEmbedding, fill: Option<&FillSet>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle, fontsize=10, fixedsize=true, width=0.45];\n");
    let mut place = |v: usize, name: String, x: usize, y: usize| {
        let cs: Vec<String> = g.colors(v).iter().map(|c| c.to_string()).collect();
        writeln!(out, "  {v} [label=\"{name}\\n{}\", pos=\"{},{}!\"];", cs.join(","), x * 40, y * 80).unwrap();
    };
    place(emb.head, "h".into(), 0, 1);
    for (i, &p) in emb.p.iter().enumerate() {
        place(p, format!("p{}", i + 1), i + 1, 2);
    }
    for (j, &q) in emb.q.iter().enumerate() {
        place(q, format!("q{}", j + 1), j + 1, 0);
    }
    place(emb.tail, "t".into(), emb.q.len().max(emb.p.len()) + 1, 1);
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    for (u, v) in fill.into_iter().flat_map(|f| f.iter()) {
        writeln!(out, "  {u} -- {v} [style=dashed, color=red];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zipper::{build_zipper_gadget, canonical_gadget_triangulation};

    #[test]
    fn fill_edges_are_dashed() {
        let gadget = build_zipper_gadget(2, 1).unwrap();
        let fill = canonical_gadget_triangulation(&gadget, 0).unwrap();
        let dot = gadget_to_dot(&gadget.graph, &gadget.embedding, Some(&fill));
        assert_eq!(dot.matches("dashed").count(), 18);
        assert!(dot.contains("label=\"p1\\n0,3\""));
        let plain = to_dot(&gadget.graph, None);
        assert_eq!(plain.matches(" -- ").count(), gadget.graph.num_edges());
    }
}
