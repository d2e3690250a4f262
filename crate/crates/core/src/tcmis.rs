//! Tree-chained multicolor independent set.
//!
//! Every node of a tree (maximum degree 3) carries a multicolor independent set
//! instance: color classes of vertices `(node, color, index)`. Edges join two
//! vertices of one node or of two neighbouring nodes. A solution picks one
//! vertex per class so that no edge has both endpoints picked.

use std::collections::BTreeSet;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{adjacency_from_edges, components_within, edge, Edge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVertex {
    pub node: usize,
    pub color: usize,
    pub index: usize,
}

impl ClassVertex {
    pub fn new(node: usize, color: usize, index: usize) -> Self {
        ClassVertex { node, color, index }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TcmisInstance {
    k: usize,
    tree_edges: Vec<Edge>,
    /// `class_sizes[node][color]`.
    class_sizes: Vec<Vec<usize>>,
    /// In input order; the position plus one is the edge's index.
    edges: Vec<(ClassVertex, ClassVertex)>,
}

/// `choice[node][color]` is the picked index in that class.
pub type TcmisSolution = Vec<Vec<usize>>;

impl TcmisInstance {
    pub fn new(
        k: usize,
        tree_edges: Vec<Edge>,
        class_sizes: Vec<Vec<usize>>,
        edges: Vec<(ClassVertex, ClassVertex)>,
    ) -> Result<Self> {
        let n = class_sizes.len();
        if n == 0 {
            return Err(Error::validation("instance has no nodes"));
        }
        let tree_edges: Vec<Edge> = tree_edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        if tree_edges.len() != n - 1 || tree_edges.iter().any(|&(a, b)| a == b || b >= n) {
            return Err(Error::validation("tree edges do not form a tree on the nodes"));
        }
        let adj = adjacency_from_edges(n, tree_edges.iter().copied());
        if components_within(&adj, &VertexSet::full(n)).len() != 1 {
            return Err(Error::validation("tree edges do not form a tree on the nodes"));
        }
        if let Some(x) = (0..n).find(|&x| adj[x].len() > 3) {
            return Err(Error::validation(format!("node {x} has more than three tree neighbours")));
        }
        for (x, sizes) in class_sizes.iter().enumerate() {
            if sizes.is_empty() || sizes.len() > k {
                return Err(Error::validation(format!("node {x} needs between 1 and {k} color classes")));
            }
            if let Some(c) = sizes.iter().position(|&s| s == 0) {
                return Err(Error::validation(format!("class ({x}, {c}) is empty")));
            }
        }
        for (i, (a, b)) in edges.iter().enumerate() {
            for v in [a, b] {
                let ok = v.node < n && v.color < class_sizes[v.node].len() && v.index < class_sizes[v.node][v.color];
                if !ok {
                    return Err(Error::validation(format!("edge {} names a missing vertex", i + 1)));
                }
            }
            if a.node == b.node && a.color == b.color {
                return Err(Error::validation(format!("edge {} joins two vertices of one class", i + 1)));
            }
            if a.node != b.node && !adj[a.node].contains(b.node) {
                return Err(Error::validation(format!("edge {} joins nodes that are not tree neighbours", i + 1)));
            }
        }
        Ok(TcmisInstance {
            k,
            tree_edges,
            class_sizes,
            edges,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_nodes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn tree_edges(&self) -> &[Edge] {
        &self.tree_edges
    }

    pub fn class_sizes(&self) -> &[Vec<usize>] {
        &self.class_sizes
    }

    pub fn num_colors(&self, node: usize) -> usize {
        self.class_sizes[node].len()
    }

    pub fn edges(&self) -> &[(ClassVertex, ClassVertex)] {
        &self.edges
    }

    pub fn tree_adjacency(&self) -> Vec<VertexSet> {
        adjacency_from_edges(self.num_nodes(), self.tree_edges.iter().copied())
    }

    /// Largest class size.
    pub fn max_class(&self) -> usize {
        self.class_sizes.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Pads every class to the largest class size. Pad vertices conflict with
    /// every vertex, pads included, of the other classes of their node, or, in
    /// a node with a single class, of the neighbouring nodes. Existing indices
    /// and edge order are kept; pad edges come last.
    pub fn padded(&self) -> TcmisInstance {
        let width = self.max_class();
        let adj = self.tree_adjacency();
        let mut pad_edges = BTreeSet::new();
        for (x, neighbours) in adj.iter().enumerate() {
            let others: Vec<(usize, usize)> = if self.num_colors(x) > 1 {
                (0..self.num_colors(x)).map(|c| (x, c)).collect()
            } else {
                neighbours.iter().flat_map(|y| (0..self.num_colors(y)).map(move |c| (y, c))).collect()
            };
            for c in 0..self.num_colors(x) {
                for i in self.class_sizes[x][c]..width {
                    let pad = ClassVertex::new(x, c, i);
                    for &(y, c2) in others.iter().filter(|&&(y, c2)| (y, c2) != (x, c)) {
                        for j in 0..width {
                            let other = ClassVertex::new(y, c2, j);
                            pad_edges.insert((pad.min(other), pad.max(other)));
                        }
                    }
                }
            }
        }
        let mut edges = self.edges.clone();
        edges.extend(pad_edges);
        let class_sizes = self.class_sizes.iter().map(|s| vec![width; s.len()]).collect();
        TcmisInstance {
            k: self.k,
            tree_edges: self.tree_edges.clone(),
            class_sizes,
            edges,
        }
    }

    /// Rejects solutions of the wrong shape or with indices out of range.
    pub fn check_shape(&self, sol: &TcmisSolution) -> Result<()> {
        let ok = sol.len() == self.num_nodes()
            && sol
                .iter()
                .zip(&self.class_sizes)
                .all(|(row, sizes)| row.len() == sizes.len() && row.iter().zip(sizes).all(|(&i, &s)| i < s));
        if ok {
            Ok(())
        } else {
            Err(Error::validation("solution does not pick one in-range vertex per class"))
        }
    }

    pub fn is_chosen(&self, sol: &TcmisSolution, v: &ClassVertex) -> bool {
        sol[v.node][v.color] == v.index
    }
}

/// True iff `sol` picks one vertex per class and no edge has both ends picked.
pub fn verify_tcmis_solution(inst: &TcmisInstance, sol: &TcmisSolution) -> bool {
    inst.check_shape(sol).is_ok() && first_conflict(inst, sol).is_none()
}

/// 1-based index of the first edge with both endpoints picked.
pub fn first_conflict(inst: &TcmisInstance, sol: &TcmisSolution) -> Option<usize> {
    inst.edges()
        .iter()
        .position(|(a, b)| inst.is_chosen(sol, a) && inst.is_chosen(sol, b))
        .map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: usize, c: usize, i: usize) -> ClassVertex {
        ClassVertex::new(n, c, i)
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(TcmisInstance::new(1, vec![], vec![], vec![]).is_err());
        assert!(TcmisInstance::new(1, vec![(0, 1)], vec![vec![1]], vec![]).is_err());
        assert!(TcmisInstance::new(2, vec![], vec![vec![2, 2]], vec![(v(0, 0, 0), v(0, 0, 1))]).is_err());
        // star with four leaves
        let star = TcmisInstance::new(1, (1..5).map(|x| (0, x)).collect(), vec![vec![1]; 5], vec![]);
        assert!(star.is_err());
        // nodes 0 and 2 are not neighbours on the path 0-1-2
        let far = TcmisInstance::new(1, vec![(0, 1), (1, 2)], vec![vec![1]; 3], vec![(v(0, 0, 0), v(2, 0, 0))]);
        assert!(far.is_err());
    }

    #[test]
    fn empty_edge_sets_accept_any_choice() {
        let inst = TcmisInstance::new(2, vec![], vec![vec![2, 3]], vec![]).unwrap();
        assert!(verify_tcmis_solution(&inst, &vec![vec![1, 2]]));
        assert!(!verify_tcmis_solution(&inst, &vec![vec![2, 0]]));
    }

    #[test]
    fn both_endpoints_conflict() {
        let inst = TcmisInstance::new(1, vec![(0, 1)], vec![vec![2], vec![2]], vec![(v(0, 0, 1), v(1, 0, 0))]).unwrap();
        assert!(!verify_tcmis_solution(&inst, &vec![vec![1], vec![0]]));
        assert_eq!(first_conflict(&inst, &vec![vec![1], vec![0]]), Some(1));
        assert!(verify_tcmis_solution(&inst, &vec![vec![1], vec![1]]));
    }

    #[test]
    fn two_padded_classes_cannot_both_pick_pads() {
        let inst = TcmisInstance::new(3, vec![], vec![vec![1, 1, 2]], vec![]).unwrap();
        let padded = inst.padded();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let sol = vec![vec![a, b, c]];
                    assert_eq!(verify_tcmis_solution(&padded, &sol), a == 0 && b == 0, "{sol:?}");
                }
            }
        }
        let pads = ClassVertex::new(0, 0, 1);
        assert_eq!(padded.edges().iter().filter(|(u, v)| *u == pads && *v == ClassVertex::new(0, 1, 1)).count(), 1);
        assert!(!padded.edges().iter().any(|(u, v)| *u == ClassVertex::new(0, 1, 1) && *v == pads));
    }

    #[test]
    fn padding_keeps_solutions() {
        let inst = TcmisInstance::new(2, vec![(0, 1)], vec![vec![1, 2], vec![2]], vec![(v(0, 0, 0), v(1, 0, 1))]).unwrap();
        let padded = inst.padded();
        assert_eq!(padded.class_sizes(), &[vec![2, 2], vec![2]]);
        assert_eq!(padded.edges()[0], inst.edges()[0]);
        // every solution of the padded instance avoids the pad vertex (0,0,1)
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let sol = vec![vec![a, b], vec![c]];
                    if verify_tcmis_solution(&padded, &sol) {
                        assert_eq!(a, 0);
                        assert!(verify_tcmis_solution(&inst, &sol));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn padding_preserves_solvability(seed in any::<u64>()) {
            let inst = crate::random::random_tcmis(&mut crate::random::rng_for(seed, 0), 3, 3, 2, 4);
            let padded = inst.padded();
            let original = crate::oracles::brute_force_tcmis(&inst).unwrap();
            let after = crate::oracles::brute_force_tcmis(&padded).unwrap();
            prop_assert_eq!(original.is_some(), after.is_some());
            if let Some(sol) = after {
                prop_assert!(verify_tcmis_solution(&inst, &sol));
            }
        }
    }
}
