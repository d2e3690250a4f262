//! Multicolored graphs, fill sets and the chordality machinery built on them.

use std::collections::BTreeSet;

use crate::bitset::{BitSet, ColorSet, VertexSet};
use crate::error::{Error, Result};

/// Unordered vertex pair, always stored with the smaller id first.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Whether every vertex carries exactly one color (`tcg`) or an arbitrary set (`tmg`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColorMode {
    Colored,
    Multicolored,
}

impl ColorMode {
    pub fn keyword(self) -> &'static str {
        match self {
            ColorMode::Colored => "tcg",
            ColorMode::Multicolored => "tmg",
        }
    }
}

/// Undirected graph on vertices `0..n` where every vertex carries a set of color ids.
///
/// Color ids live in `0..num_colors`. Ids in that range that no vertex uses are
/// allowed (the reductions allocate color slots up front); [`Self::occupied_colors`]
/// reports the ones actually present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulticoloredGraph {
    mode: ColorMode,
    num_colors: usize,
    colors: Vec<ColorSet>,
    adj: Vec<VertexSet>,
    num_edges: usize,
}

impl MulticoloredGraph {
    pub fn new(
        mode: ColorMode,
        num_colors: usize,
        colors: Vec<ColorSet>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let n = colors.len();
        for (v, cs) in colors.iter().enumerate() {
            if let Some(c) = cs.iter().find(|&c| c >= num_colors) {
                return Err(Error::validation(format!(
                    "vertex {v} has color {c} outside 0..{num_colors}"
                )));
            }
            if mode == ColorMode::Colored && cs.len() != 1 {
                return Err(Error::validation(format!(
                    "vertex {v} has {} colors in a colored graph",
                    cs.len()
                )));
            }
        }
        let mut adj = vec![VertexSet::new(); n];
        let mut num_edges = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::validation(format!("edge {u}-{v} out of range")));
            }
            if u == v {
                return Err(Error::validation(format!("self-loop at {u}")));
            }
            if !adj[u].insert(v) {
                return Err(Error::validation(format!("duplicate edge {u}-{v}")));
            }
            adj[v].insert(u);
            num_edges += 1;
        }
        Ok(MulticoloredGraph {
            mode,
            num_colors,
            colors,
            adj,
            num_edges,
        })
    }

    /// Colored graph with one color per vertex; `num_colors` is `max + 1`.
    pub fn colored(colors: &[usize], edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let num_colors = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
        let sets = colors.iter().map(|&c| ColorSet::singleton(c)).collect();
        Self::new(ColorMode::Colored, num_colors, sets, edges)
    }

    /// Multicolored graph; `num_colors` is one past the largest id used.
    pub fn multicolored(colors: Vec<ColorSet>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let num_colors = colors
            .iter()
            .filter_map(|cs| cs.iter().last())
            .map(|c| c + 1)
            .max()
            .unwrap_or(0);
        Self::new(ColorMode::Multicolored, num_colors, colors, edges)
    }

    pub fn mode(&self) -> ColorMode {
        self.mode
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Size of the color id range.
    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn colors(&self, v: usize) -> &ColorSet {
        &self.colors[v]
    }

    /// The single color of `v`; only meaningful in colored mode.
    pub fn color(&self, v: usize) -> usize {
        self.colors[v].first().expect("vertex without color")
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges in ascending `(u, v)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.num_vertices())
    }

    pub fn occupied_colors(&self) -> ColorSet {
        let mut all = ColorSet::new();
        for cs in &self.colors {
            all.union_with(cs);
        }
        all
    }

    /// Number of distinct colors present (the parameter k).
    pub fn k(&self) -> usize {
        self.occupied_colors().len()
    }

    /// Renumbers occupied colors densely to `0..k`, preserving their order.
    /// Returns the graph and, per new id, the original id.
    pub fn compact_colors(&self) -> (MulticoloredGraph, Vec<usize>) {
        let old_ids = self.occupied_colors().to_vec();
        let mut map = vec![usize::MAX; self.num_colors];
        for (new, &old) in old_ids.iter().enumerate() {
            map[old] = new;
        }
        let colors = self
            .colors
            .iter()
            .map(|cs| cs.iter().map(|c| map[c]).collect())
            .collect();
        let g = MulticoloredGraph {
            mode: self.mode,
            num_colors: old_ids.len(),
            colors,
            adj: self.adj.clone(),
            num_edges: self.num_edges,
        };
        (g, old_ids)
    }

    /// The supergraph `self + fill`.
    pub fn with_fill(&self, fill: &FillSet) -> Result<MulticoloredGraph> {
        let mut g = self.clone();
        for &(u, v) in fill.iter() {
            if u >= g.num_vertices() || v >= g.num_vertices() || u == v {
                return Err(Error::validation(format!("fill edge {u}-{v} is not a vertex pair of the graph")));
            }
            if !g.adj[u].insert(v) {
                return Err(Error::validation(format!("fill edge {u}-{v} already in the graph")));
            }
            g.adj[v].insert(u);
            g.num_edges += 1;
        }
        Ok(g)
    }

    /// Stable 64-bit FNV-1a digest of the vertex colors and edge list.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::default();
        h.write(self.num_vertices() as u64);
        for cs in &self.colors {
            h.write(cs.len() as u64);
            for c in cs {
                h.write(c as u64);
            }
        }
        for (u, v) in self.edges() {
            h.write(u as u64);
            h.write(v as u64);
        }
        h.0
    }
}

struct Fnv(u64);

impl Default for Fnv {
    fn default() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv {
    fn write(&mut self, x: u64) {
        for b in x.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100_0000_01b3);
        }
    }
}

/// Edges added on top of a base graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FillSet {
    edges: BTreeSet<Edge>,
}

impl FillSet {
    pub fn new() -> Self {
        FillSet::default()
    }

    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        self.edges.insert(edge(u, v))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&edge(u, v))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Checks the fill is made of distinct vertex pairs of `g` not already in `g`.
    pub fn validate_against(&self, g: &MulticoloredGraph) -> Result<()> {
        for &(u, v) in &self.edges {
            if u == v || v >= g.num_vertices() {
                return Err(Error::validation(format!("fill edge {u}-{v} is not a vertex pair")));
            }
            if g.has_edge(u, v) {
                return Err(Error::validation(format!("fill edge {u}-{v} is a graph edge")));
            }
        }
        Ok(())
    }
}

impl FromIterator<Edge> for FillSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        FillSet {
            edges: iter.into_iter().map(|(u, v)| edge(u, v)).collect(),
        }
    }
}

impl Extend<Edge> for FillSet {
    fn extend<I: IntoIterator<Item = Edge>>(&mut self, iter: I) {
        self.edges.extend(iter.into_iter().map(|(u, v)| edge(u, v)));
    }
}

/// Maximum cardinality search visit order; ties go to the smallest id.
///
/// Reversing the returned order gives a perfect elimination ordering whenever
/// the graph is chordal.
pub fn mcs_order(adj: &[VertexSet]) -> Vec<usize> {
    let n = adj.len();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if !visited[v] && best.is_none_or(|b| weight[v] > weight[b]) {
                best = Some(v);
            }
        }
        let v = best.expect("unvisited vertex");
        visited[v] = true;
        order.push(v);
        for u in adj[v].iter() {
            if !visited[u] {
                weight[u] += 1;
            }
        }
    }
    order
}

/// Checks that `elimination` (first eliminated first) is a perfect elimination ordering.
pub fn is_perfect_elimination_ordering(adj: &[VertexSet], elimination: &[usize]) -> bool {
    let n = adj.len();
    let mut pos = vec![0usize; n];
    for (i, &v) in elimination.iter().enumerate() {
        pos[v] = i;
    }
    for &v in elimination {
        let later: Vec<usize> = adj[v].iter().filter(|&u| pos[u] > pos[v]).collect();
        let Some(&follower) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if later
            .iter()
            .any(|&u| u != follower && !adj[follower].contains(u))
        {
            return false;
        }
    }
    true
}

/// Perfect elimination ordering of a chordal adjacency, or `None` if it is not chordal.
pub fn perfect_elimination_ordering(adj: &[VertexSet]) -> Option<Vec<usize>> {
    let mut order = mcs_order(adj);
    order.reverse();
    is_perfect_elimination_ordering(adj, &order).then_some(order)
}

pub fn is_chordal_adjacency(adj: &[VertexSet]) -> bool {
    perfect_elimination_ordering(adj).is_some()
}

/// True iff every cycle of length at least four has a chord.
pub fn is_chordal(g: &MulticoloredGraph) -> bool {
    is_chordal_adjacency(g.adjacency())
}

/// True iff no edge joins two vertices whose color sets intersect.
pub fn is_properly_multicolored(g: &MulticoloredGraph) -> bool {
    g.edges().all(|(u, v)| !g.colors(u).intersects(g.colors(v)))
}

/// First edge whose endpoints share a color, if any.
pub fn improper_edge(g: &MulticoloredGraph) -> Option<Edge> {
    g.edges().find(|&(u, v)| g.colors(u).intersects(g.colors(v)))
}

/// Connected components of `g - removed`, ordered by their minimum vertex.
pub fn components_after_removal(g: &MulticoloredGraph, removed: &VertexSet) -> Vec<VertexSet> {
    let alive = g.vertex_set().difference(removed);
    components_within(g.adjacency(), &alive)
}

/// Connected components of the subgraph induced by `alive`, ordered by minimum vertex.
pub fn components_within(adj: &[VertexSet], alive: &VertexSet) -> Vec<VertexSet> {
    let mut left = alive.clone();
    let mut out = Vec::new();
    while let Some(start) = left.first() {
        let mut comp = VertexSet::singleton(start);
        let mut stack = vec![start];
        left.remove(start);
        while let Some(v) = stack.pop() {
            for u in adj[v].iter() {
                if left.contains(u) {
                    left.remove(u);
                    comp.insert(u);
                    stack.push(u);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// True iff `g + fill` is chordal and properly multicolored.
pub fn verify_triangulation(g: &MulticoloredGraph, fill: &FillSet) -> bool {
    if fill.validate_against(g).is_err() {
        return false;
    }
    if fill.iter().any(|&(u, v)| g.colors(u).intersects(g.colors(v))) {
        return false;
    }
    match g.with_fill(fill) {
        Ok(h) => is_properly_multicolored(&h) && is_chordal(&h),
        Err(_) => false,
    }
}

/// Maximal cliques of a chordal adjacency, read off a perfect elimination ordering.
/// Returns `None` if the graph is not chordal. Cliques are sorted by minimum vertex.
pub fn maximal_cliques_chordal(adj: &[VertexSet]) -> Option<Vec<VertexSet>> {
    let peo = perfect_elimination_ordering(adj)?;
    let mut pos = vec![0usize; adj.len()];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    let candidates: Vec<VertexSet> = peo
        .iter()
        .map(|&v| {
            let mut c: VertexSet = adj[v].iter().filter(|&u| pos[u] > pos[v]).collect();
            c.insert(v);
            c
        })
        .collect();
    let mut cliques: Vec<VertexSet> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let dominated = candidates
            .iter()
            .enumerate()
            .any(|(j, d)| j != i && c.is_subset(d) && (c != d || j < i));
        if !dominated {
            cliques.push(c.clone());
        }
    }
    cliques.sort_by_key(|c| c.first());
    Some(cliques)
}

/// Adjacency of the complete graph on the vertex set, restricted to pairs in `edges`.
pub(crate) fn adjacency_from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Vec<VertexSet> {
    let mut adj = vec![BitSet::new(); n];
    for (u, v) in edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    adj
}
