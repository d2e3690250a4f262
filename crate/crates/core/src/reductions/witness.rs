//! Witnesses across the independent set reduction.
//!
//! Forward: a solution gives every gadget an offset, and the decomposition is
//! built by sliding chords along the gadgets' lattice paths, one tree segment
//! (child node to parent node) at a time. Backward: the offset read off each
//! gadget of a triangulation is the picked index.

use crate::bitset::VertexSet;
use crate::decomposition::{treedecomp_to_triangulation, GraphRef, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{FillSet, MulticoloredGraph};
use crate::tcmis::{first_conflict, TcmisInstance, TcmisSolution};
use crate::zipper::{lattice_path, read_offset, GadgetEmbedding};

use super::tcmis::GadgetLayout;

/// A gadget on a segment, walking its lattice path.
struct Walker<'a> {
    emb: &'a GadgetEmbedding,
    /// P-tooth offset of this half: 0 for the first half, the middle tooth for the second.
    base: usize,
    offset: usize,
    path: Vec<(usize, usize)>,
    at: usize,
}

impl Walker<'_> {
    fn chord(&self) -> (usize, usize) {
        let (x, y) = self.path[self.at];
        (self.emb.upper(x), self.emb.lower(y))
    }

    fn index_of(&self, pt: (usize, usize)) -> usize {
        self.path
            .iter()
            .position(|&p| p == pt)
            .unwrap_or_else(|| panic!("lattice point {pt:?} is not on the path"))
    }

    /// Chord at the first vertex of P-tooth `tooth` (relative to this half).
    fn cut(&self, tooth: usize) -> (usize, usize) {
        let t = self.base + tooth;
        (4 * t - 3, 4 * (t + self.offset) - 3)
    }

    fn pre_merge(&self, tooth: usize) -> (usize, usize) {
        let t = self.base + tooth;
        (4 * t - 4, 4 * (t + self.offset) - 3)
    }

    /// Last chord before the P-side reaches the end of this half.
    fn pre_end(&self, half_teeth: usize) -> (usize, usize) {
        let t = self.base + half_teeth;
        (4 * t - 1, 4 * (t + self.offset) - 1)
    }
}

struct Segment<'a> {
    walkers: Vec<Walker<'a>>,
    bags: Vec<VertexSet>,
    d_color: usize,
    g: &'a MulticoloredGraph,
}

impl Segment<'_> {
    fn current(&self) -> VertexSet {
        let mut bag = VertexSet::new();
        for w in &self.walkers {
            let (a, b) = w.chord();
            bag.insert(a);
            bag.insert(b);
        }
        bag
    }

    fn step(&mut self, i: usize) {
        let mut bag = self.current();
        self.walkers[i].at += 1;
        let (a, b) = self.walkers[i].chord();
        bag.insert(a);
        bag.insert(b);
        self.bags.push(bag);
    }

    fn advance_to(&mut self, i: usize, pt: (usize, usize)) {
        let target = self.walkers[i].index_of(pt);
        assert!(target >= self.walkers[i].at, "walker would move backwards");
        while self.walkers[i].at < target {
            self.step(i);
        }
    }

    fn holds_d(&self, i: usize) -> bool {
        self.g.colors(self.walkers[i].chord().1).contains(self.d_color)
    }
}

/// Decomposition of the reduced graph in which gadget `g` follows offset
/// `offsets[g]`. Offsets are not checked against the instance; a forbidden
/// pair shows up as a bag holding `d` twice.
pub fn build_decomposition_with_offsets(
    reduced: &MulticoloredGraph,
    layout: &GadgetLayout,
    offsets: &[usize],
) -> Result<TreeDecomposition> {
    if offsets.len() != layout.gadgets.len() || offsets.iter().any(|&d| d > layout.skew) {
        return Err(Error::Precondition("one offset in range is needed per gadget".into()));
    }
    let m = layout.num_edges;
    let mid = layout.middle_tooth;
    let tree_nodes = layout.num_tree_nodes();

    let mut bags: Vec<VertexSet> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // hub bags first, one per rooted-tree node
    for x in 0..tree_nodes {
        let mut bag = VertexSet::singleton(layout.hubs[x]);
        for (g, z) in layout.gadgets.iter().enumerate() {
            let e = &z.embedding;
            if z.start == x {
                bag.insert(e.q[0]);
            }
            if z.middle == x {
                bag.insert(e.lower(4 * (mid + offsets[g]) + 1));
            }
            if z.end == x {
                bag.insert(*e.q.last().unwrap());
            }
        }
        bags.push(bag);
    }

    for x in 0..tree_nodes {
        let Some(y) = layout.parent[x] else { continue };
        let mut on_segment: Vec<(usize, usize)> = Vec::new();
        for (g, z) in layout.gadgets.iter().enumerate() {
            if z.start == x {
                on_segment.push((g, 0));
            } else if z.middle == x {
                on_segment.push((g, mid));
            }
        }
        let walkers: Vec<Walker> = on_segment
            .iter()
            .map(|&(g, base)| {
                let emb = &layout.gadgets[g].embedding;
                let path = lattice_path(emb.size, emb.skew, offsets[g]);
                let mut w = Walker {
                    emb,
                    base,
                    offset: offsets[g],
                    path,
                    at: 0,
                };
                if base > 0 {
                    w.at = w.index_of((4 * mid, 4 * (mid + w.offset) + 1));
                }
                w
            })
            .collect();
        let mut seg = Segment {
            walkers,
            bags: Vec::new(),
            d_color: layout.d_color,
            g: reduced,
        };
        let merges_here = |i: usize| -> Option<[usize; 2]> {
            let merge = &layout.merges[i - 1];
            let pos = |g| on_segment.iter().position(|&(h, _)| h == g);
            match (pos(merge.gadgets[0]), pos(merge.gadgets[1])) {
                (Some(a), Some(b)) => Some([a, b]),
                _ => None,
            }
        };
        let count = seg.walkers.len();
        for i in 0..=m {
            // leave the source
            if i == 0 {
                for w in 0..count {
                    let hub_x = if seg.walkers[w].base == 0 { 0 } else { 4 * mid };
                    while seg.walkers[w].path[seg.walkers[w].at].0 == hub_x {
                        seg.step(w);
                    }
                }
            } else if let Some(pair) = merges_here(i) {
                for w in pair {
                    seg.step(w);
                }
            }
            for w in 0..count {
                while seg.holds_d(w) {
                    seg.step(w);
                }
            }
            let late = if i < m { merges_here(i + 1) } else { None };
            let late_list = late.map(|p| p.to_vec()).unwrap_or_default();
            for w in (0..count).filter(|w| !late_list.contains(w)) {
                let target = if i < m {
                    seg.walkers[w].cut(layout.cut_tooth(i + 1))
                } else {
                    seg.walkers[w].pre_end(mid)
                };
                seg.advance_to(w, target);
            }
            if let Some(pair) = late {
                let merge = &layout.merges[i];
                let chosen = |side: usize| offsets[merge.gadgets[side]] == merge.endpoints[side].index;
                let order: Vec<usize> = if chosen(0) { vec![1, 0] } else { vec![0, 1] };
                for &side in &order {
                    let w = pair[side];
                    let target = seg.walkers[w].pre_merge(layout.cut_tooth(i + 1));
                    seg.advance_to(w, target);
                }
                for &side in &order {
                    seg.step(pair[side]);
                }
            }
            if i == m {
                for w in 0..count {
                    let last = seg.walkers[w].path.len() - 1;
                    let end = if seg.walkers[w].base == 0 {
                        seg.walkers[w].index_of((4 * mid, 4 * (mid + seg.walkers[w].offset) + 1))
                    } else {
                        last
                    };
                    while seg.walkers[w].at < end {
                        seg.step(w);
                    }
                }
            }
        }
        let first = bags.len();
        let n_seg = seg.bags.len();
        bags.extend(seg.bags);
        if n_seg == 0 {
            edges.push((x, y));
        } else {
            edges.push((x, first));
            for b in first + 1..first + n_seg {
                edges.push((b - 1, b));
            }
            edges.push((first + n_seg - 1, y));
        }
    }
    Ok(TreeDecomposition::new(bags, edges, GraphRef::of(reduced)))
}

/// Gadget offsets encoding a solution of the original instance.
pub fn offsets_for_solution(layout: &GadgetLayout, sol: &TcmisSolution) -> Vec<usize> {
    layout.gadgets.iter().map(|z| sol[z.node][z.color]).collect()
}

/// Decomposition witnessing that the reduced graph has a proper triangulation,
/// built from a solution of the original instance.
pub fn build_decomposition_from_solution(
    inst: &TcmisInstance,
    sol: &TcmisSolution,
    reduced: &MulticoloredGraph,
    layout: &GadgetLayout,
) -> Result<TreeDecomposition> {
    inst.check_shape(sol).map_err(|e| Error::Precondition(e.to_string()))?;
    if let Some(e) = first_conflict(inst, sol) {
        return Err(Error::Precondition(format!("solution picks both ends of edge {e}")));
    }
    build_decomposition_with_offsets(reduced, layout, &offsets_for_solution(layout, sol))
}

/// Reads every gadget's offset under the triangulation `reduced + fill`.
pub fn extract_tcmis_solution(
    inst: &TcmisInstance,
    reduced: &MulticoloredGraph,
    layout: &GadgetLayout,
    fill: &FillSet,
) -> Result<TcmisSolution> {
    let mut sol: TcmisSolution = inst.class_sizes().iter().map(|row| vec![0; row.len()]).collect();
    for z in &layout.gadgets {
        let d = read_offset(&z.embedding, |u, v| reduced.has_edge(u, v) || fill.contains(u, v))?;
        if d >= inst.class_sizes()[z.node][z.color] {
            return Err(Error::MalformedWitness(format!(
                "gadget of class ({}, {}) has offset {d}, a padding vertex",
                z.node, z.color
            )));
        }
        sol[z.node][z.color] = d;
    }
    Ok(sol)
}

/// Same as [`extract_tcmis_solution`] for a decomposition witness.
pub fn extract_tcmis_solution_from_decomposition(
    inst: &TcmisInstance,
    reduced: &MulticoloredGraph,
    layout: &GadgetLayout,
    td: &TreeDecomposition,
) -> Result<TcmisSolution> {
    extract_tcmis_solution(inst, reduced, layout, &treedecomp_to_triangulation(reduced, td))
}

/// Fill the forward construction gives a reduced graph for arbitrary offsets.
pub fn extended_pair_fill(reduced: &MulticoloredGraph, layout: &GadgetLayout, offsets: &[usize]) -> Result<FillSet> {
    let td = build_decomposition_with_offsets(reduced, layout, offsets)?;
    Ok(treedecomp_to_triangulation(reduced, &td))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{color_multiplicity_ok, td_violation, Multiplicity};
    use crate::graph::verify_triangulation;
    use crate::reductions::tcmis::reduce_tcmis_to_tmg;
    use crate::tcmis::ClassVertex;
    use crate::zipper::canonical_fill;

    fn v(n: usize, c: usize, i: usize) -> ClassVertex {
        ClassVertex::new(n, c, i)
    }

    fn check(inst: &TcmisInstance, sol: &TcmisSolution) {
        let (g, layout) = reduce_tcmis_to_tmg(inst).unwrap();
        let td = build_decomposition_from_solution(inst, sol, &g, &layout).unwrap();
        assert_eq!(td_violation(&g, &td).unwrap(), None);
        assert_eq!(crate::decomposition::multiplicity_violation(&g, &td, Multiplicity::AtMostOnce), None);
        let fill = treedecomp_to_triangulation(&g, &td);
        assert!(verify_triangulation(&g, &fill));
        assert_eq!(&extract_tcmis_solution(inst, &g, &layout, &fill).unwrap(), sol);
        // restricted to a gadget the fill is that gadget's canonical fill
        for (gi, z) in layout.gadgets.iter().enumerate() {
            let emb = &z.embedding;
            let canon = canonical_fill(emb, sol[z.node][z.color]).unwrap();
            let upper: VertexSet = std::iter::once(emb.head)
                .chain(emb.p.iter().copied())
                .chain(std::iter::once(emb.tail))
                .collect();
            let lower: VertexSet = emb.q.iter().copied().collect();
            let restricted: FillSet = fill
                .iter()
                .copied()
                .filter(|&(a, b)| (upper.contains(a) && lower.contains(b)) || (upper.contains(b) && lower.contains(a)))
                .collect();
            assert_eq!(restricted, canon, "gadget {gi}");
        }
    }

    #[test]
    fn smallest_instance() {
        let inst = TcmisInstance::new(1, vec![], vec![vec![1]], vec![]).unwrap();
        check(&inst, &vec![vec![0]]);
    }

    #[test]
    fn one_edge_every_allowed_choice() {
        let inst = TcmisInstance::new(2, vec![], vec![vec![2, 2]], vec![(v(0, 0, 0), v(0, 1, 1))]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                if (a, b) != (0, 1) {
                    check(&inst, &vec![vec![a, b]]);
                }
            }
        }
        let (g, layout) = reduce_tcmis_to_tmg(&inst).unwrap();
        assert!(build_decomposition_from_solution(&inst, &vec![vec![0, 1]], &g, &layout).is_err());
    }

    #[test]
    fn forbidden_offsets_break_the_extension() {
        for r in 0..=2 {
            for i1 in 0..=r {
                for i2 in 0..=r {
                    let inst = TcmisInstance::new(2, vec![], vec![vec![r + 1, r + 1]], vec![(v(0, 0, i1), v(0, 1, i2))]).unwrap();
                    let (g, layout) = reduce_tcmis_to_tmg(&inst).unwrap();
                    for d1 in 0..=r {
                        for d2 in 0..=r {
                            let td = build_decomposition_with_offsets(&g, &layout, &[d1, d2]).unwrap();
                            let ok = color_multiplicity_ok(&g, &td, Multiplicity::AtMostOnce);
                            let fill = treedecomp_to_triangulation(&g, &td);
                            assert_eq!(verify_triangulation(&g, &fill), ok);
                            assert_eq!(ok, (d1, d2) != (i1, i2), "r={r} i=({i1},{i2}) d=({d1},{d2})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parent_child_edges_on_a_path() {
        let inst = TcmisInstance::new(
            2,
            vec![(0, 1), (1, 2)],
            vec![vec![2, 1], vec![2, 2], vec![1, 2]],
            vec![(v(0, 0, 1), v(1, 1, 0)), (v(1, 0, 0), v(2, 1, 1)), (v(1, 0, 1), v(1, 1, 1))],
        )
        .unwrap();
        let sol = crate::oracles::brute_force_tcmis(&inst).unwrap().unwrap();
        check(&inst, &sol);
    }

    #[test]
    fn three_node_star_in_both_directions() {
        // node 1 in the middle; attaching node is 0 so 1 is 0's child
        let inst = TcmisInstance::new(
            1,
            vec![(1, 0), (1, 2)],
            vec![vec![2], vec![2], vec![2]],
            vec![(v(1, 0, 0), v(0, 0, 0)), (v(2, 0, 1), v(1, 0, 1))],
        )
        .unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let sol = vec![vec![a], vec![b], vec![c]];
                    if crate::tcmis::verify_tcmis_solution(&inst, &sol) {
                        check(&inst, &sol);
                    }
                }
            }
        }
    }
}
