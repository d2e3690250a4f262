//! Multicolored to colored triangulation by clique expansion.

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Edge, MulticoloredGraph};

/// Copies of each original vertex, one per color it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueExpansion {
    pub cliques: Vec<Vec<usize>>,
    pub origin: Vec<usize>,
}

/// Replaces every vertex `v` by a clique with one singly colored vertex per
/// color of `v`, and every edge `vw` by all edges between the two cliques.
pub fn reduce_tmg_to_tcg(g: &MulticoloredGraph) -> Result<(MulticoloredGraph, CliqueExpansion)> {
    let mut cliques = Vec::with_capacity(g.num_vertices());
    let mut origin = Vec::new();
    let mut colors = Vec::new();
    for v in 0..g.num_vertices() {
        if g.colors(v).is_empty() {
            return Err(Error::Unsupported(format!("vertex {v} has no color")));
        }
        let mut clique = Vec::with_capacity(g.colors(v).len());
        for c in g.colors(v) {
            clique.push(origin.len());
            origin.push(v);
            colors.push(vec![c].into_iter().collect());
        }
        cliques.push(clique);
    }
    let mut edges: Vec<Edge> = Vec::new();
    for clique in &cliques {
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    for (v, w) in g.edges() {
        for &a in &cliques[v] {
            for &b in &cliques[w] {
                edges.push((a, b));
            }
        }
    }
    let expanded = MulticoloredGraph::new(crate::graph::ColorMode::Colored, g.num_colors(), colors, edges)?;
    Ok((expanded, CliqueExpansion { cliques, origin }))
}

/// Same tree; a bag holds `v` iff the expanded bag holds all of `v`'s copies.
pub fn lift_tcg_decomposition_to_tmg(
    g: &MulticoloredGraph,
    td: &TreeDecomposition,
    expansion: &CliqueExpansion,
) -> TreeDecomposition {
    let bags = td
        .bags
        .iter()
        .map(|bag| {
            (0..g.num_vertices())
                .filter(|&v| expansion.cliques[v].iter().all(|&x| bag.contains(x)))
                .collect()
        })
        .collect();
    TreeDecomposition::new(bags, td.tree_edges.iter().copied(), crate::decomposition::GraphRef::of(g))
}
