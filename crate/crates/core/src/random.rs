//! Seeded instance generators and the small-graph enumeration used by the
//! oracle sweeps.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::bitset::VertexSet;
use crate::graph::{components_within, edge, Edge, MulticoloredGraph};
use crate::phylogeny::PhylogenyInstance;
use crate::tcmis::{ClassVertex, TcmisInstance};

/// Generator for cell `key` of a run seeded with `seed`; the same pair always
/// yields the same stream.
pub fn rng_for(seed: u64, key: u64) -> StdRng {
    StdRng::seed_from_u64(seed ^ key.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Colors renumbered to `0..k` in order of first appearance.
fn contiguous(colors: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    colors
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

/// Random colored graph: each vertex draws one of `max_colors` colors and each
/// pair of differently colored vertices is joined with probability `density`.
pub fn random_colored_graph(rng: &mut impl Rng, n: usize, max_colors: usize, density: f64) -> MulticoloredGraph {
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..max_colors.max(1))).collect();
    let colors = contiguous(&raw);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if colors[u] != colors[v] && rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    MulticoloredGraph::colored(&colors, edges).expect("generated graph is well formed")
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every connected, properly colored graph on `n` vertices up to renaming
/// colors and reordering vertices of equal color: vertices are sorted by
/// color, color classes by decreasing size, and every subset of the
/// cross-class pairs is tried. Some isomorphic copies remain.
pub fn connected_colored_graphs(n: usize) -> Vec<MulticoloredGraph> {
    let mut out = Vec::new();
    for sizes in partitions(n, n) {
        let colors: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect();
        let pairs: Vec<Edge> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| colors[u] != colors[v])
            .collect();
        assert!(pairs.len() < 64, "enumeration is meant for tiny graphs");
        for mask in 0u64..1 << pairs.len() {
            let edges: Vec<Edge> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            if edges.len() + 1 < n {
                continue;
            }
            let g = MulticoloredGraph::colored(&colors, edges).expect("well formed");
            if components_within(g.adjacency(), &VertexSet::full(n)).len() == 1 {
                out.push(g);
            }
        }
    }
    out
}

/// Species matrix over `states` variants per gene, with distinct rows. May hold
/// fewer than `species` rows when there are not enough distinct tuples.
pub fn random_pp(rng: &mut impl Rng, species: usize, genes: usize, states: usize) -> PhylogenyInstance {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut tries = 0;
    while rows.len() < species && tries < 100 * species.max(1) {
        tries += 1;
        let row: Vec<usize> = (0..genes).map(|_| rng.gen_range(0..states.max(1))).collect();
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    PhylogenyInstance::from_rows(genes, rows).expect("rows are distinct and full length")
}

/// Random tree-chained instance: up to `max_nodes` nodes on a random tree of
/// maximum degree three, `1..=k` classes per node, class sizes in
/// `1..=max_index + 1`, and up to `max_edges` distinct edges.
pub fn random_tcmis(rng: &mut impl Rng, max_nodes: usize, k: usize, max_index: usize, max_edges: usize) -> TcmisInstance {
    let nodes = rng.gen_range(1..=max_nodes.max(1));
    let mut degree = vec![0; nodes];
    let mut tree_edges = Vec::new();
    for x in 1..nodes {
        let candidates: Vec<usize> = (0..x).filter(|&y| degree[y] < 3).collect();
        let y = *candidates.choose(rng).expect("a path always has room");
        degree[x] += 1;
        degree[y] += 1;
        tree_edges.push((y, x));
    }
    let sizes: Vec<Vec<usize>> = (0..nodes)
        .map(|_| (0..rng.gen_range(1..=k.max(1))).map(|_| rng.gen_range(1..=max_index + 1)).collect())
        .collect();
    let vertices: Vec<ClassVertex> = sizes
        .iter()
        .enumerate()
        .flat_map(|(x, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(c, &s)| (0..s).map(move |i| ClassVertex::new(x, c, i)))
        })
        .collect();
    let near = |a: &ClassVertex, b: &ClassVertex| {
        if a.node == b.node {
            a.color != b.color
        } else {
            tree_edges.contains(&edge(a.node, b.node))
        }
    };
    let mut allowed: Vec<(ClassVertex, ClassVertex)> = Vec::new();
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            if near(a, b) {
                allowed.push((*a, *b));
            }
        }
    }
    allowed.shuffle(rng);
    let m = rng.gen_range(0..=max_edges.min(allowed.len()));
    allowed.truncate(m);
    TcmisInstance::new(k.max(1), tree_edges, sizes, allowed).expect("generated instance is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = random_colored_graph(&mut rng_for(7, 3), 7, 3, 0.5);
        let b = random_colored_graph(&mut rng_for(7, 3), 7, 3, 0.5);
        assert_eq!(a, b);
        let c = random_tcmis(&mut rng_for(1, 2), 3, 2, 1, 2);
        assert_eq!(c, random_tcmis(&mut rng_for(1, 2), 3, 2, 1, 2));
    }

    #[test]
    fn enumeration_counts() {
        // one vertex; two vertices need an edge; three vertices: path shapes
        assert_eq!(connected_colored_graphs(1).len(), 1);
        assert_eq!(connected_colored_graphs(2).len(), 1);
        // sizes [2,1]: the lone vertex joins both; [1,1,1]: 3 paths + triangle
        assert_eq!(connected_colored_graphs(3).len(), 5);
        for g in connected_colored_graphs(5) {
            assert!(crate::graph::is_properly_multicolored(&g));
            assert_eq!(g.occupied_colors().len(), g.num_colors());
        }
    }

    #[test]
    fn random_graphs_use_contiguous_colors() {
        let mut rng = rng_for(0, 0);
        for _ in 0..50 {
            let g = random_colored_graph(&mut rng, 6, 4, 0.4);
            assert_eq!(g.occupied_colors().len(), g.num_colors());
        }
    }
}
