//! Exhaustive reference implementations, kept independent of the solver.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{FillSet, MulticoloredGraph};
use crate::phylogeny::PhylogenyInstance;
use crate::tcmis::{verify_tcmis_solution, TcmisInstance, TcmisSolution};

pub const ELIMINATION_LIMIT: usize = 9;
pub const COUNT_LIMIT: usize = 24;
pub const TCMIS_LIMIT: u64 = 1_000_000;
const COUNT_STATE_LIMIT: usize = 20_000_000;

/// Vertices outside `eliminated` (and other than `v`) reachable from `v`
/// through eliminated vertices only: `v`'s neighbourhood at elimination time.
fn elimination_neighbours(adj: &[u32], eliminated: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(x) = stack.pop() {
        let mut nb = adj[x] & !seen;
        while nb != 0 {
            let y = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            seen |= 1 << y;
            if eliminated & (1 << y) != 0 {
                stack.push(y);
            } else {
                out |= 1 << y;
            }
        }
    }
    out
}

fn small_adjacency(g: &MulticoloredGraph) -> Vec<u32> {
    (0..g.num_vertices())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | (1 << u)))
        .collect()
}

/// Properly colored triangulation by trying every elimination order, or
/// `None` if no order keeps the fill proper. Colored graphs with at most nine
/// vertices only.
///
/// Fill of an order depends only on which vertices precede each vertex, so
/// the search runs over subsets of eliminated vertices.
pub fn brute_force_tcg_elimination(g: &MulticoloredGraph) -> Result<Option<FillSet>> {
    let n = g.num_vertices();
    if n > ELIMINATION_LIMIT {
        return Err(Error::GuardExceeded(format!("{n} vertices exceed the limit of {ELIMINATION_LIMIT}")));
    }
    if g.mode() != crate::graph::ColorMode::Colored {
        return Err(Error::validation("elimination oracle expects one color per vertex"));
    }
    let adj = small_adjacency(g);
    let full = (1u32 << n) - 1;
    // parent[s] = (previous set, vertex eliminated last) for reachable s
    let mut reached: Vec<Option<(u32, usize)>> = vec![None; 1 << n];
    reached[0] = Some((0, usize::MAX));
    for s in 0..=full {
        if reached[s as usize].is_none() {
            continue;
        }
        for v in (0..n).filter(|&v| s & (1 << v) == 0) {
            let next = s | (1 << v);
            if reached[next as usize].is_some() {
                continue;
            }
            let nb = elimination_neighbours(&adj, s, v);
            let clique = nb | (1 << v);
            let mut colors = 0u64;
            let proper = (0..n).filter(|&x| clique & (1 << x) != 0).all(|x| {
                let bit = 1u64 << g.color(x);
                let fresh = colors & bit == 0;
                colors |= bit;
                fresh
            });
            if proper {
                reached[next as usize] = Some((s, v));
            }
        }
    }
    if reached[full as usize].is_none() {
        return Ok(None);
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let (prev, v) = reached[s as usize].unwrap();
        order.push(v);
        s = prev;
    }
    order.reverse();
    let mut fill = FillSet::new();
    let mut eliminated = 0u32;
    for v in order {
        let nb = elimination_neighbours(&adj, eliminated, v);
        let members: Vec<usize> = (0..n).filter(|&x| nb & (1 << x) != 0).collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !g.has_edge(a, b) {
                    fill.insert(a, b);
                }
            }
        }
        eliminated |= 1 << v;
    }
    Ok(Some(fill))
}

/// Number of distinct edge-minimal properly multicolored triangulations of
/// `g` whose fill edges all lie in `candidates` (every pair if `None`).
///
/// Runs the elimination game over all orders, pruning any order that would
/// add an improper or non-candidate edge, and keeps the fills that lose
/// chordality when any single fill edge is dropped.
pub fn exhaustive_triangulation_count(g: &MulticoloredGraph, candidates: Option<&FillSet>) -> Result<usize> {
    Ok(exhaustive_minimal_triangulations(g, candidates)?.len())
}

/// The fills counted by [`exhaustive_triangulation_count`], sorted.
pub fn exhaustive_minimal_triangulations(g: &MulticoloredGraph, candidates: Option<&FillSet>) -> Result<Vec<FillSet>> {
    let n = g.num_vertices();
    if n > COUNT_LIMIT {
        return Err(Error::GuardExceeded(format!("{n} vertices exceed the limit of {COUNT_LIMIT}")));
    }
    let allowed = |u: usize, v: usize| {
        !g.colors(u).intersects(g.colors(v)) && candidates.is_none_or(|c| c.contains(u, v))
    };
    let mut seen: HashSet<(u32, Vec<u32>)> = HashSet::new();
    let mut results: HashSet<Vec<u32>> = HashSet::new();
    let adj0 = small_adjacency(g);
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    // explicit stack of (eliminated, current adjacency)
    let mut stack = vec![(0u32, adj0.clone())];
    while let Some((elim, adj)) = stack.pop() {
        if elim == full {
            results.insert(adj);
            continue;
        }
        if !seen.insert((elim, adj.clone())) {
            continue;
        }
        if seen.len() > COUNT_STATE_LIMIT {
            return Err(Error::GuardExceeded("elimination state space too large".into()));
        }
        for v in (0..n).filter(|&v| elim & (1 << v) == 0) {
            let nb: Vec<usize> = (0..n).filter(|&x| adj[v] & (1 << x) != 0 && elim & (1 << x) == 0).collect();
            let mut next = adj.clone();
            let mut ok = true;
            'pairs: for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if next[a] & (1 << b) == 0 {
                        if !allowed(a, b) {
                            ok = false;
                            break 'pairs;
                        }
                        next[a] |= 1 << b;
                        next[b] |= 1 << a;
                    }
                }
            }
            if ok {
                stack.push((elim | (1 << v), next));
            }
        }
    }
    let mut fills: Vec<FillSet> = Vec::new();
    for adj in results {
        let fill: FillSet = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| adj[u] & (1 << v) != 0 && adj0[u] & (1 << v) == 0)
            .collect();
        let minimal = fill.iter().all(|&(u, v)| {
            let mut less = adj.clone();
            less[u] &= !(1 << v);
            less[v] &= !(1 << u);
            !chordal_small(&less)
        });
        if minimal {
            fills.push(fill);
        }
    }
    fills.sort_by(|a, b| a.edges().iter().cmp(b.edges().iter()));
    Ok(fills)
}

/// Chordality by repeatedly removing a simplicial vertex.
fn chordal_small(adj: &[u32]) -> bool {
    let n = adj.len();
    let mut alive: u32 = if n == 0 { 0 } else { ((1u64 << n) - 1) as u32 };
    while alive != 0 {
        let simplicial = (0..n).filter(|&v| alive & (1 << v) != 0).find(|&v| {
            let nb = adj[v] & alive;
            (0..n).filter(|&x| nb & (1 << x) != 0).all(|x| nb & !(1 << x) & !adj[x] == 0)
        });
        match simplicial {
            Some(v) => alive &= !(1 << v),
            None => return false,
        }
    }
    true
}

/// Pairwise compatibility of two-state characters: no two genes show all four
/// combinations. Genes with more than two observed variants are refused.
pub fn four_gamete_pp(inst: &PhylogenyInstance) -> Result<bool> {
    let k = inst.num_genes();
    for gene in 0..k {
        if inst.variants(gene).len() > 2 {
            return Err(Error::Unsupported(format!("gene {gene} has more than two variants")));
        }
    }
    for g1 in 0..k {
        for g2 in g1 + 1..k {
            let combos: HashSet<(usize, usize)> = inst
                .species()
                .iter()
                .map(|s| (s.variants[g1], s.variants[g2]))
                .collect();
            if combos.len() == 4 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Tries every choice map, smallest first in odometer order.
pub fn brute_force_tcmis(inst: &TcmisInstance) -> Result<Option<TcmisSolution>> {
    let sizes: Vec<usize> = inst.class_sizes().iter().flatten().copied().collect();
    let total = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s as u64).filter(|&p| p <= TCMIS_LIMIT));
    if total.is_none() {
        return Err(Error::GuardExceeded(format!("more than {TCMIS_LIMIT} choice maps")));
    }
    let mut digits = vec![0usize; sizes.len()];
    loop {
        let mut it = digits.iter().copied();
        let sol: TcmisSolution = inst
            .class_sizes()
            .iter()
            .map(|row| row.iter().map(|_| it.next().unwrap()).collect())
            .collect();
        if verify_tcmis_solution(inst, &sol) {
            return Ok(Some(sol));
        }
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < sizes[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_triangulation;
    use crate::tcmis::ClassVertex;
    use crate::zipper::{build_zipper_gadget, enumerate_gadget_triangulations};

    fn cycle(colors: &[usize]) -> MulticoloredGraph {
        let n = colors.len();
        MulticoloredGraph::colored(colors, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn alternating_four_cycle_has_no_triangulation() {
        assert_eq!(brute_force_tcg_elimination(&cycle(&[0, 1, 0, 1])).unwrap(), None);
    }

    #[test]
    fn colored_tree_is_triangulable() {
        let g = MulticoloredGraph::colored(&[0, 1, 0, 2], [(0, 1), (1, 2), (1, 3)]).unwrap();
        let fill = brute_force_tcg_elimination(&g).unwrap().unwrap();
        assert!(verify_triangulation(&g, &fill));
    }

    #[test]
    fn three_colored_five_cycle_is_triangulable() {
        let g = cycle(&[1, 2, 0, 1, 2]);
        let fill = brute_force_tcg_elimination(&g).unwrap().unwrap();
        assert!(verify_triangulation(&g, &fill));
    }

    #[test]
    fn guards_refuse() {
        assert!(matches!(
            brute_force_tcg_elimination(&cycle(&[0, 1, 0, 1, 0, 1, 0, 1, 0, 1])),
            Err(Error::GuardExceeded(_))
        ));
        let big = MulticoloredGraph::colored(&[0; 25], []).unwrap();
        assert!(exhaustive_triangulation_count(&big, None).is_err());
    }

    #[test]
    fn four_cycle_has_two_minimal_triangulations() {
        let g = cycle(&[0, 1, 2, 3]);
        assert_eq!(exhaustive_triangulation_count(&g, None).unwrap(), 2);
        let g = cycle(&[0, 1, 0, 2]);
        assert_eq!(exhaustive_triangulation_count(&g, None).unwrap(), 1);
    }

    #[test]
    fn gadget_counts_match_canonical_fills() {
        for (n, s) in [(1, 0), (1, 1), (2, 0), (2, 1)] {
            let g = build_zipper_gadget(n, s).unwrap();
            let mut found = exhaustive_minimal_triangulations(&g.graph, None).unwrap();
            let mut canonical = enumerate_gadget_triangulations(&g);
            let key = |f: &FillSet| f.edges().iter().copied().collect::<Vec<_>>();
            found.sort_by_key(key);
            canonical.sort_by_key(key);
            assert_eq!(found, canonical, "gadget({n},{s})");
        }
    }

    #[test]
    fn four_gamete_examples() {
        let yes = PhylogenyInstance::from_rows(2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let no = PhylogenyInstance::from_rows(2, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let one = PhylogenyInstance::from_rows(1, vec![vec![0], vec![1]]).unwrap();
        assert!(four_gamete_pp(&yes).unwrap());
        assert!(!four_gamete_pp(&no).unwrap());
        assert!(four_gamete_pp(&one).unwrap());
        let ternary = PhylogenyInstance::from_rows(1, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(four_gamete_pp(&ternary).is_err());
    }

    #[test]
    fn tcmis_brute_force() {
        let single = TcmisInstance::new(1, vec![], vec![vec![1]], vec![]).unwrap();
        assert_eq!(brute_force_tcmis(&single).unwrap(), Some(vec![vec![0]]));
        let v = ClassVertex::new;
        let clash = TcmisInstance::new(2, vec![], vec![vec![1, 1]], vec![(v(0, 0, 0), v(0, 1, 0))]).unwrap();
        assert_eq!(brute_force_tcmis(&clash).unwrap(), None);
        let two = TcmisInstance::new(2, vec![], vec![vec![2, 2]], vec![(v(0, 0, 0), v(0, 1, 0))]).unwrap();
        let sol = brute_force_tcmis(&two).unwrap().unwrap();
        assert!(verify_tcmis_solution(&two, &sol));
        let huge = TcmisInstance::new(3, vec![], vec![vec![200, 200, 200]], vec![]).unwrap();
        assert!(brute_force_tcmis(&huge).is_err());
    }
}
