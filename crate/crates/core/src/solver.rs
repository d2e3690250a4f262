//! Exact backtracking search for exactly-once tree decompositions.
//!
//! The search grows a rooted decomposition one bag at a time. A state is a bag
//! `bag` (at most one vertex per color) and a connected vertex set `comp` hanging
//! below it. A step picks `v` in `comp`; the bag vertex `w` sharing `v`'s color
//! must have no neighbour in `comp`, and is swapped out for `v`. Every component
//! of `comp - v` then has to succeed below the new bag.
//!
//! Whether a state succeeds depends only on `comp` and on the bag vertices with
//! a neighbour in `comp`, so results are memoized on that pair.

use std::collections::HashMap;
use std::time::Instant;

use crate::bitset::VertexSet;
use crate::decomposition::{normalize_exactly_once, GraphRef, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{components_within, improper_edge, ColorMode, MulticoloredGraph};
use crate::phylogeny::{PhylogenyInstance, PhylogenyTree};
use crate::reductions::{pp, tmg};

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub memoize: bool,
    pub deadline: Option<Instant>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            memoize: true,
            deadline: None,
        }
    }
}

impl SolveOptions {
    pub fn with_timeout(timeout: std::time::Duration) -> Self {
        SolveOptions {
            deadline: Some(Instant::now() + timeout),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Solved(T),
    Unsat,
    Timeout,
}

impl<T> Outcome<T> {
    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Solved(_))
    }

    pub fn solved(self) -> Option<T> {
        match self {
            Outcome::Solved(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Solved(t) => Outcome::Solved(f(t)),
            Outcome::Unsat => Outcome::Unsat,
            Outcome::Timeout => Outcome::Timeout,
        }
    }
}

struct TimedOut;

struct Search<'a> {
    g: &'a MulticoloredGraph,
    memo: Option<HashMap<(VertexSet, VertexSet), Option<usize>>>,
    deadline: Option<Instant>,
    steps: u64,
}

impl Search<'_> {
    fn neighbourhood(&self, comp: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in comp {
            out.union_with(self.g.neighbors(v));
        }
        out.difference_with(comp);
        out
    }

    /// Finds a vertex to introduce below `bag` for `comp`, or `None` if the state fails.
    fn solve(&mut self, bag: &[Option<usize>], comp: &VertexSet) -> std::result::Result<Option<usize>, TimedOut> {
        self.steps += 1;
        if self.steps & 0x3ff == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(TimedOut);
                }
            }
        }
        let boundary = self.neighbourhood(comp);
        let attached: VertexSet = bag.iter().flatten().copied().filter(|&x| boundary.contains(x)).collect();
        let unattached = attached.is_empty();
        let key = self.memo.as_ref().map(|_| (attached, comp.clone()));
        if let (Some(memo), Some(key)) = (&self.memo, &key) {
            if let Some(&hit) = memo.get(key) {
                return Ok(hit);
            }
        }
        let mut found = None;
        for v in comp.iter() {
            let c = self.g.color(v);
            if bag[c].is_some_and(|w| boundary.contains(w)) {
                continue;
            }
            let mut next = bag.to_vec();
            next[c] = Some(v);
            let mut rest = comp.clone();
            rest.remove(v);
            let mut ok = true;
            for sub in components_within(self.g.adjacency(), &rest) {
                if self.solve(&next, &sub)?.is_none() {
                    ok = false;
                    break;
                }
            }
            if ok {
                found = Some(v);
                break;
            }
            // With nothing attached, some decomposition has a bag holding the smallest vertex.
            if unattached {
                break;
            }
        }
        if let (Some(memo), Some(key)) = (&mut self.memo, key) {
            memo.insert(key, found);
        }
        Ok(found)
    }

    /// Replays successful choices into bags and tree edges.
    fn build(
        &mut self,
        bag: &[Option<usize>],
        comp: &VertexSet,
        parent: Option<usize>,
        bags: &mut Vec<VertexSet>,
        edges: &mut Vec<(usize, usize)>,
    ) -> std::result::Result<(), TimedOut> {
        let v = self
            .solve(bag, comp)?
            .expect("replayed state was solved before");
        let mut next = bag.to_vec();
        next[self.g.color(v)] = Some(v);
        let id = bags.len();
        bags.push(next.iter().flatten().copied().collect());
        if let Some(p) = parent {
            edges.push((p, id));
        }
        let mut rest = comp.clone();
        rest.remove(v);
        for sub in components_within(self.g.adjacency(), &rest) {
            self.build(&next, &sub, Some(id), bags, edges)?;
        }
        Ok(())
    }
}

/// Searches for a tree decomposition of a colored graph in which every bag
/// holds each color exactly once.
pub fn solve_tcg(g: &MulticoloredGraph, opts: &SolveOptions) -> Result<Outcome<TreeDecomposition>> {
    if g.mode() != ColorMode::Colored {
        return Err(Error::validation("solve_tcg needs a graph with one color per vertex"));
    }
    let occupied = g.occupied_colors();
    if let Some(c) = (0..g.num_colors()).find(|&c| !occupied.contains(c)) {
        return Err(Error::validation(format!("color {c} has no vertex")));
    }
    if g.num_vertices() == 0 {
        return Ok(Outcome::Solved(TreeDecomposition::new(
            vec![VertexSet::new()],
            [],
            GraphRef::of(g),
        )));
    }
    if improper_edge(g).is_some() {
        return Ok(Outcome::Unsat);
    }
    let mut search = Search {
        g,
        memo: opts.memoize.then(HashMap::new),
        deadline: opts.deadline,
        steps: 0,
    };
    let empty = vec![None; g.num_colors()];
    let comps = components_within(g.adjacency(), &g.vertex_set());
    let run = |search: &mut Search| -> std::result::Result<Option<TreeDecomposition>, TimedOut> {
        for comp in &comps {
            if search.solve(&empty, comp)?.is_none() {
                return Ok(None);
            }
        }
        // Separate components hang off one shared empty root bag.
        let mut bags = vec![VertexSet::new()];
        let mut edges = Vec::new();
        for comp in &comps {
            search.build(&empty, comp, Some(0), &mut bags, &mut edges)?;
        }
        Ok(Some(TreeDecomposition::new(bags, edges, GraphRef::of(g))))
    };
    match run(&mut search) {
        Err(TimedOut) => Ok(Outcome::Timeout),
        Ok(None) => Ok(Outcome::Unsat),
        Ok(Some(td)) => Ok(Outcome::Solved(normalize_exactly_once(g, &td)?)),
    }
}

/// Multicolored variant: expands every vertex into a clique of singly colored
/// copies, solves that, and lifts the decomposition back.
pub fn solve_tmg(g: &MulticoloredGraph, opts: &SolveOptions) -> Result<Outcome<TreeDecomposition>> {
    if let Some(v) = (0..g.num_vertices()).find(|&v| g.colors(v).is_empty()) {
        return Err(Error::Unsupported(format!("vertex {v} has no color")));
    }
    if improper_edge(g).is_some() {
        return Ok(Outcome::Unsat);
    }
    let (compact, _) = g.compact_colors();
    let (expanded, prov) = tmg::reduce_tmg_to_tcg(&compact)?;
    Ok(match solve_tcg(&expanded, opts)? {
        Outcome::Solved(td) => {
            let mut lifted = tmg::lift_tcg_decomposition_to_tmg(&compact, &td, &prov);
            lifted.graph_ref = GraphRef::of(g);
            Outcome::Solved(lifted)
        }
        Outcome::Unsat => Outcome::Unsat,
        Outcome::Timeout => Outcome::Timeout,
    })
}

/// Decides perfect phylogeny through the partition intersection graph.
pub fn solve_pp(inst: &PhylogenyInstance, opts: &SolveOptions) -> Result<Outcome<PhylogenyTree>> {
    let (g, prov) = pp::reduce_pp_to_tcg(inst)?;
    Ok(match solve_tcg(&g, opts)? {
        Outcome::Solved(td) => Outcome::Solved(pp::extract_phylogeny(inst, &g, &td, &prov)?),
        Outcome::Unsat => Outcome::Unsat,
        Outcome::Timeout => Outcome::Timeout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{color_multiplicity_ok, verify_tree_decomposition, Multiplicity};
    use proptest::prelude::*;

    fn checked(g: &MulticoloredGraph, memoize: bool) -> bool {
        let opts = SolveOptions {
            memoize,
            deadline: None,
        };
        match solve_tcg(g, &opts).unwrap() {
            Outcome::Solved(td) => {
                assert!(verify_tree_decomposition(g, &td).unwrap());
                assert!(color_multiplicity_ok(g, &td, Multiplicity::ExactlyOnce));
                true
            }
            Outcome::Unsat => false,
            Outcome::Timeout => unreachable!(),
        }
    }

    #[test]
    fn alternating_four_cycle_is_unsat() {
        let g = MulticoloredGraph::colored(&[0, 1, 0, 1], [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(!checked(&g, true));
    }

    #[test]
    fn rainbow_clique_is_one_bag() {
        let edges: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let g = MulticoloredGraph::colored(&[0, 1, 2, 3], edges).unwrap();
        let td = solve_tcg(&g, &SolveOptions::default()).unwrap().solved().unwrap();
        assert!(td.bags.iter().all(|b| b.len() == 4));
        assert!(td.bags.contains(&g.vertex_set()));
    }

    #[test]
    fn disconnected_graph_and_empty_graph() {
        let g = MulticoloredGraph::colored(&[0, 1, 0, 1], [(0, 1), (2, 3)]).unwrap();
        assert!(checked(&g, true));
        let g = MulticoloredGraph::colored(&[], []).unwrap();
        assert!(checked(&g, true));
    }

    #[test]
    fn rejects_multicolored_mode_and_missing_color() {
        let g = MulticoloredGraph::multicolored(vec![[0].into_iter().collect()], []).unwrap();
        assert!(solve_tcg(&g, &SolveOptions::default()).is_err());
        let g = MulticoloredGraph::new(ColorMode::Colored, 2, vec![[1].into_iter().collect()], []).unwrap();
        assert!(solve_tcg(&g, &SolveOptions::default()).is_err());
    }

    #[test]
    fn expired_deadline_times_out_on_hard_instance() {
        // the deadline is checked on the very first step
        let n = 30;
        let colors: Vec<usize> = (0..n).map(|v| v % 3).collect();
        let mut edges = Vec::new();
        for v in 0..n {
            for d in [1, 2, 4, 5] {
                if v + d < n && colors[v] != colors[v + d] {
                    edges.push((v, v + d));
                }
            }
        }
        let g = MulticoloredGraph::colored(&colors, edges).unwrap();
        let opts = SolveOptions {
            memoize: false,
            deadline: Some(Instant::now()),
        };
        assert_ne!(solve_tcg(&g, &opts).unwrap(), Outcome::Unsat);
    }

    #[test]
    fn tmg_rejects_empty_color_set() {
        let g = MulticoloredGraph::multicolored(vec![VertexSet::new()], []).unwrap();
        assert!(matches!(solve_tmg(&g, &SolveOptions::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tmg_improper_edge_is_unsat() {
        let g = MulticoloredGraph::multicolored(
            vec![[1, 3].into_iter().collect(), [2, 3].into_iter().collect()],
            [(0, 1)],
        )
        .unwrap();
        assert_eq!(solve_tmg(&g, &SolveOptions::default()).unwrap(), Outcome::Unsat);
    }

    proptest! {
        #[test]
        fn memoization_is_transparent(n in 1usize..=7, k in 1usize..=3, bits in any::<u32>(), cbits in any::<u32>()) {
            let colors: Vec<usize> = (0..n).map(|v| if v < k { v } else { ((cbits >> (2 * v)) as usize & 3) % k }).collect();
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .enumerate()
                .filter(|&(i, (u, v))| bits & (1 << i) != 0 && colors[u] != colors[v])
                .map(|(_, e)| e)
                .collect();
            let g = MulticoloredGraph::colored(&colors, edges).unwrap();
            prop_assert_eq!(checked(&g, true), checked(&g, false));
        }
    }
}
