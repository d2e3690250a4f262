//! Perfect phylogeny as colored triangulation of the partition intersection graph.

use std::collections::BTreeMap;

use crate::decomposition::{color_multiplicity_ok, Multiplicity, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, MulticoloredGraph};
use crate::phylogeny::{PhylogenyInstance, PhylogenyTree};

/// Vertex of the partition intersection graph for each `(gene, variant)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantMap {
    pub vertex_of: BTreeMap<(usize, usize), usize>,
    pub variant_of: Vec<(usize, usize)>,
}

/// One vertex per observed `(gene, variant)`, colored by gene, with an edge
/// between two variants carried together by some species.
pub fn reduce_pp_to_tcg(inst: &PhylogenyInstance) -> Result<(MulticoloredGraph, VariantMap)> {
    let mut variant_of = Vec::new();
    let mut vertex_of = BTreeMap::new();
    for gene in 0..inst.num_genes() {
        for variant in inst.variants(gene) {
            vertex_of.insert((gene, variant), variant_of.len());
            variant_of.push((gene, variant));
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    for s in inst.species() {
        let vs: Vec<usize> = s.variants.iter().enumerate().map(|(g, &x)| vertex_of[&(g, x)]).collect();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                edges.push(edge(a, b));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let colors: Vec<usize> = variant_of.iter().map(|&(g, _)| g).collect();
    let g = MulticoloredGraph::colored(&colors, edges)?;
    Ok((g, VariantMap { vertex_of, variant_of }))
}

/// Reads a phylogeny off an exactly-once decomposition of the partition
/// intersection graph: each bag is a species tuple. Neighbouring bags with the
/// same tuple are merged.
pub fn extract_phylogeny(
    inst: &PhylogenyInstance,
    g: &MulticoloredGraph,
    td: &TreeDecomposition,
    map: &VariantMap,
) -> Result<PhylogenyTree> {
    if !color_multiplicity_ok(g, td, Multiplicity::ExactlyOnce) {
        return Err(Error::Precondition("decomposition is not exactly-once".into()));
    }
    let tuples: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|bag| {
            let mut t = vec![0; inst.num_genes()];
            for v in bag {
                let (gene, variant) = map.variant_of[v];
                t[gene] = variant;
            }
            t
        })
        .collect();
    let b = tuples.len();
    let mut parent: Vec<usize> = (0..b).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &(x, y) in &td.tree_edges {
        if tuples[x] == tuples[y] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx.max(ry)] = rx.min(ry);
        }
    }
    let mut node_of = vec![usize::MAX; b];
    let mut nodes = Vec::new();
    for x in 0..b {
        let r = find(&mut parent, x);
        if node_of[r] == usize::MAX {
            node_of[r] = nodes.len();
            nodes.push(tuples[r].clone());
        }
        node_of[x] = node_of[r];
    }
    let mut edges: Vec<Edge> = td
        .tree_edges
        .iter()
        .filter(|&&(x, y)| node_of[x] != node_of[y])
        .map(|&(x, y)| edge(node_of[x], node_of[y]))
        .collect();
    edges.sort_unstable();
    let leaf_map = inst
        .species()
        .iter()
        .map(|s| {
            nodes.iter().position(|t| *t == s.variants).ok_or_else(|| {
                Error::Internal(format!("no bag holds every variant of species {}", s.name))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhylogenyTree { nodes, edges, leaf_map })
}
