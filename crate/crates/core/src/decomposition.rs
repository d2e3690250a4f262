//! Tree decompositions and their conversions to and from triangulations.

use std::collections::VecDeque;

use crate::bitset::{ColorSet, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{
    adjacency_from_edges, edge, maximal_cliques_chordal, verify_triangulation, Edge, FillSet,
    MulticoloredGraph,
};

/// Identity of the graph a decomposition was built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GraphRef {
    pub num_vertices: usize,
    pub num_edges: Option<usize>,
    pub fingerprint: Option<u64>,
}

impl GraphRef {
    pub fn of(g: &MulticoloredGraph) -> Self {
        GraphRef {
            num_vertices: g.num_vertices(),
            num_edges: Some(g.num_edges()),
            fingerprint: Some(g.fingerprint()),
        }
    }

    /// Reference that only pins the vertex count (as read from a bare `td` file).
    pub fn vertices_only(num_vertices: usize) -> Self {
        GraphRef {
            num_vertices,
            num_edges: None,
            fingerprint: None,
        }
    }

    pub fn matches(&self, g: &MulticoloredGraph) -> bool {
        self.num_vertices == g.num_vertices()
            && self.num_edges.is_none_or(|m| m == g.num_edges())
            && self.fingerprint.is_none_or(|h| h == g.fingerprint())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    /// Tree edges between bag ids, normalized and sorted.
    pub tree_edges: Vec<Edge>,
    pub graph_ref: GraphRef,
}

/// The first condition a candidate decomposition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    NoBags,
    NotATree,
    VertexOutOfRange { bag: usize, vertex: usize },
    VertexUncovered(usize),
    EdgeUncovered(Edge),
    VertexNotConnected(usize),
}

impl std::fmt::Display for TdViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TdViolation::NoBags => write!(f, "decomposition has no bags"),
            TdViolation::NotATree => write!(f, "bag graph is not a tree"),
            TdViolation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {bag} holds vertex {vertex} outside the graph")
            }
            TdViolation::VertexUncovered(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::EdgeUncovered((u, v)) => write!(f, "edge {u}-{v} is in no bag"),
            TdViolation::VertexNotConnected(v) => {
                write!(f, "bags holding vertex {v} do not form a subtree")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    AtMostOnce,
    ExactlyOnce,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<VertexSet>, tree_edges: impl IntoIterator<Item = Edge>, graph_ref: GraphRef) -> Self {
        let mut tree_edges: Vec<Edge> = tree_edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        tree_edges.sort_unstable();
        tree_edges.dedup();
        TreeDecomposition {
            bags,
            tree_edges,
            graph_ref,
        }
    }

    pub fn single_bag(g: &MulticoloredGraph) -> Self {
        TreeDecomposition::new(vec![g.vertex_set()], [], GraphRef::of(g))
    }

    pub fn num_bags(&self) -> usize {
        self.bags.len()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn tree_adjacency(&self) -> Vec<VertexSet> {
        adjacency_from_edges(self.bags.len(), self.tree_edges.iter().copied())
    }

    pub fn is_tree(&self) -> bool {
        let b = self.bags.len();
        if b == 0 || self.tree_edges.len() != b - 1 {
            return false;
        }
        if self.tree_edges.iter().any(|&(x, y)| x == y || y >= b) {
            return false;
        }
        let adj = self.tree_adjacency();
        crate::graph::components_within(&adj, &VertexSet::full(b)).len() == 1
    }

    /// Bag ids on the tree path from `from` to `to`, both included.
    pub fn tree_path(&self, from: usize, to: usize) -> Vec<usize> {
        let adj = self.tree_adjacency();
        let mut parent = vec![usize::MAX; self.bags.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for y in adj[x].iter() {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![to];
        let mut x = to;
        while x != from {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        path
    }
}

/// First violated tree-decomposition condition, or `None` if `td` decomposes `g`.
pub fn td_violation(g: &MulticoloredGraph, td: &TreeDecomposition) -> Result<Option<TdViolation>> {
    if !td.graph_ref.matches(g) {
        return Err(Error::validation(
            "decomposition was built for a different graph",
        ));
    }
    if td.bags.is_empty() {
        return Ok(Some(TdViolation::NoBags));
    }
    if !td.is_tree() {
        return Ok(Some(TdViolation::NotATree));
    }
    let n = g.num_vertices();
    let mut holders = vec![VertexSet::new(); n];
    for (b, bag) in td.bags.iter().enumerate() {
        for v in bag {
            if v >= n {
                return Ok(Some(TdViolation::VertexOutOfRange { bag: b, vertex: v }));
            }
            holders[v].insert(b);
        }
    }
    if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
        return Ok(Some(TdViolation::VertexUncovered(v)));
    }
    for (u, v) in g.edges() {
        if !holders[u].intersects(&holders[v]) {
            return Ok(Some(TdViolation::EdgeUncovered((u, v))));
        }
    }
    let adj = td.tree_adjacency();
    for (v, hs) in holders.iter().enumerate() {
        if crate::graph::components_within(&adj, hs).len() != 1 {
            return Ok(Some(TdViolation::VertexNotConnected(v)));
        }
    }
    Ok(None)
}

/// True iff every vertex and edge is covered and each vertex's bags form a subtree.
pub fn verify_tree_decomposition(g: &MulticoloredGraph, td: &TreeDecomposition) -> Result<bool> {
    Ok(td_violation(g, td)?.is_none())
}

/// Color multiset of a bag: per color, how many member vertices carry it.
fn bag_color_counts(g: &MulticoloredGraph, bag: &VertexSet) -> Vec<usize> {
    let mut counts = vec![0usize; g.num_colors()];
    for v in bag {
        for c in g.colors(v) {
            counts[c] += 1;
        }
    }
    counts
}

/// First `(bag, color)` breaking the multiplicity requirement.
pub fn multiplicity_violation(
    g: &MulticoloredGraph,
    td: &TreeDecomposition,
    mode: Multiplicity,
) -> Option<(usize, usize)> {
    for (b, bag) in td.bags.iter().enumerate() {
        let counts = bag_color_counts(g, bag);
        let bad = counts.iter().position(|&c| match mode {
            Multiplicity::AtMostOnce => c > 1,
            Multiplicity::ExactlyOnce => c != 1,
        });
        if let Some(c) = bad {
            return Some((b, c));
        }
    }
    None
}

/// Exactly-once counts against every id in `0..g.num_colors()`.
pub fn color_multiplicity_ok(g: &MulticoloredGraph, td: &TreeDecomposition, mode: Multiplicity) -> bool {
    multiplicity_violation(g, td, mode).is_none()
}

/// Turns an at-most-once decomposition into an exactly-once one by only adding
/// vertices to bags.
///
/// For each color, bags lacking it are reached breadth-first from the bags that
/// hold it, and each copies a vertex of that color from the neighbouring bag it
/// was reached from. In a multicolored graph the copied vertex must not bring a
/// second color the bag already holds; if no such vertex exists the
/// normalization fails.
pub fn normalize_exactly_once(g: &MulticoloredGraph, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    if let Some(v) = td_violation(g, td)? {
        return Err(Error::Precondition(format!("not a tree decomposition: {v}")));
    }
    if let Some((b, c)) = multiplicity_violation(g, td, Multiplicity::AtMostOnce) {
        return Err(Error::Precondition(format!("bag {b} holds color {c} twice")));
    }
    let occupied = g.occupied_colors();
    if let Some(c) = (0..g.num_colors()).find(|&c| !occupied.contains(c)) {
        return Err(Error::Normalization(format!(
            "color {c} does not appear in the graph"
        )));
    }
    let mut out = td.clone();
    let adj = td.tree_adjacency();
    let mut bag_colors: Vec<ColorSet> = out
        .bags
        .iter()
        .map(|bag| {
            let mut cs = ColorSet::new();
            for v in bag {
                cs.union_with(g.colors(v));
            }
            cs
        })
        .collect();
    for c in 0..g.num_colors() {
        let mut queue: VecDeque<usize> = (0..out.bags.len()).filter(|&b| bag_colors[b].contains(c)).collect();
        let mut reached: VertexSet = queue.iter().copied().collect();
        while let Some(from) = queue.pop_front() {
            for to in adj[from].iter() {
                if reached.contains(to) {
                    continue;
                }
                let donor = out.bags[from]
                    .iter()
                    .find(|&v| g.colors(v).contains(c) && !g.colors(v).intersects(&bag_colors[to]))
                    .ok_or_else(|| {
                        Error::Normalization(format!(
                            "bag {to} cannot receive color {c} from bag {from} without repeating a color"
                        ))
                    })?;
                out.bags[to].insert(donor);
                bag_colors[to].union_with(g.colors(donor));
                reached.insert(to);
                queue.push_back(to);
            }
        }
    }
    Ok(out)
}

/// Fill edges making every bag a clique.
pub fn treedecomp_to_triangulation(g: &MulticoloredGraph, td: &TreeDecomposition) -> FillSet {
    let mut fill = FillSet::new();
    for bag in &td.bags {
        let members = bag.to_vec();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if !g.has_edge(u, v) {
                    fill.insert(u, v);
                }
            }
        }
    }
    fill
}

/// Clique tree of the chordal supergraph `g + fill`.
///
/// Bags are the maximal cliques; the tree is a maximum-intersection spanning
/// tree over them, ties broken by the smaller bag ids.
pub fn triangulation_to_treedecomp(g: &MulticoloredGraph, fill: &FillSet) -> Result<TreeDecomposition> {
    if !verify_triangulation(g, fill) {
        return Err(Error::Precondition(
            "fill does not give a properly colored chordal supergraph".into(),
        ));
    }
    let h = g.with_fill(fill)?;
    let cliques = maximal_cliques_chordal(h.adjacency())
        .ok_or_else(|| Error::Internal("verified triangulation is not chordal".into()))?;
    if cliques.is_empty() {
        return Ok(TreeDecomposition::new(vec![VertexSet::new()], [], GraphRef::of(g)));
    }
    let tree_edges = max_intersection_tree(&cliques);
    Ok(TreeDecomposition::new(cliques, tree_edges, GraphRef::of(g)))
}

fn max_intersection_tree(bags: &[VertexSet]) -> Vec<Edge> {
    let b = bags.len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::with_capacity(b * b.saturating_sub(1) / 2);
    for i in 0..b {
        for j in i + 1..b {
            pairs.push((bags[i].intersection(&bags[j]).len(), i, j));
        }
    }
    pairs.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut parent: Vec<usize> = (0..b).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    let mut edges = Vec::with_capacity(b.saturating_sub(1));
    for (_, i, j) in pairs {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            edges.push((i, j));
            if edges.len() + 1 == b {
                break;
            }
        }
    }
    edges
}
