//! Species-by-gene matrices and candidate phylogenies.

use std::collections::BTreeSet;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{adjacency_from_edges, components_within, edge, Edge};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Species {
    pub name: String,
    pub variants: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhylogenyInstance {
    num_genes: usize,
    species: Vec<Species>,
}

impl PhylogenyInstance {
    pub fn new(num_genes: usize, species: Vec<Species>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &species {
            if s.variants.len() != num_genes {
                return Err(Error::validation(format!(
                    "species {} has {} variants, expected {num_genes}",
                    s.name,
                    s.variants.len()
                )));
            }
            if !seen.insert(&s.variants) {
                return Err(Error::validation(format!("species {} duplicates another species", s.name)));
            }
        }
        Ok(PhylogenyInstance { num_genes, species })
    }

    /// Instance with species named `s0, s1, ...`.
    pub fn from_rows(num_genes: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let species = rows
            .into_iter()
            .enumerate()
            .map(|(i, variants)| Species {
                name: format!("s{i}"),
                variants,
            })
            .collect();
        PhylogenyInstance::new(num_genes, species)
    }

    pub fn num_genes(&self) -> usize {
        self.num_genes
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    /// Variants of `gene` that some species carries, ascending.
    pub fn variants(&self, gene: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.species.iter().map(|s| s.variants[gene]).collect();
        set.into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhylogenyTree {
    /// One variant per gene for every node.
    pub nodes: Vec<Vec<usize>>,
    pub edges: Vec<Edge>,
    /// Node holding each input species, by species index.
    pub leaf_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhylogenyViolation {
    NotATree,
    WrongTupleLength(usize),
    SpeciesMissing(usize),
    VariantDisconnected { gene: usize, variant: usize },
}

impl std::fmt::Display for PhylogenyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhylogenyViolation::NotATree => write!(f, "nodes and edges do not form a tree"),
            PhylogenyViolation::WrongTupleLength(n) => write!(f, "node {n} has the wrong number of genes"),
            PhylogenyViolation::SpeciesMissing(s) => write!(f, "species {s} is not held by its node"),
            PhylogenyViolation::VariantDisconnected { gene, variant } => {
                write!(f, "nodes with variant {variant} of gene {gene} are disconnected")
            }
        }
    }
}

/// First reason `tree` is not a perfect phylogeny for `inst`.
pub fn phylogeny_violation(inst: &PhylogenyInstance, tree: &PhylogenyTree) -> Option<PhylogenyViolation> {
    let n = tree.nodes.len();
    let normalized: BTreeSet<Edge> = tree.edges.iter().map(|&(a, b)| edge(a, b)).collect();
    let well_formed = n > 0
        && normalized.len() == tree.edges.len()
        && tree.edges.len() == n - 1
        && tree.edges.iter().all(|&(a, b)| a != b && a < n && b < n);
    if !well_formed {
        return Some(PhylogenyViolation::NotATree);
    }
    let adj = adjacency_from_edges(n, tree.edges.iter().copied());
    if components_within(&adj, &VertexSet::full(n)).len() != 1 {
        return Some(PhylogenyViolation::NotATree);
    }
    if let Some(i) = tree.nodes.iter().position(|t| t.len() != inst.num_genes()) {
        return Some(PhylogenyViolation::WrongTupleLength(i));
    }
    if tree.leaf_map.len() != inst.num_species() {
        return Some(PhylogenyViolation::SpeciesMissing(tree.leaf_map.len().min(inst.num_species())));
    }
    for (s, sp) in inst.species().iter().enumerate() {
        let node = tree.leaf_map[s];
        if node >= n || tree.nodes[node] != sp.variants {
            return Some(PhylogenyViolation::SpeciesMissing(s));
        }
    }
    for gene in 0..inst.num_genes() {
        let values: BTreeSet<usize> = tree.nodes.iter().map(|t| t[gene]).collect();
        for variant in values {
            let support: VertexSet = (0..n).filter(|&x| tree.nodes[x][gene] == variant).collect();
            if components_within(&adj, &support).len() != 1 {
                return Some(PhylogenyViolation::VariantDisconnected { gene, variant });
            }
        }
    }
    None
}

/// True iff `tree` holds every species and each gene variant spans a subtree.
pub fn verify_perfect_phylogeny(inst: &PhylogenyInstance, tree: &PhylogenyTree) -> bool {
    phylogeny_violation(inst, tree).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst() -> PhylogenyInstance {
        PhylogenyInstance::from_rows(2, vec![vec![0, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn single_species_single_node() {
        let inst = PhylogenyInstance::from_rows(1, vec![vec![3]]).unwrap();
        let tree = PhylogenyTree {
            nodes: vec![vec![3]],
            edges: vec![],
            leaf_map: vec![0],
        };
        assert!(verify_perfect_phylogeny(&inst, &tree));
    }

    #[test]
    fn path_with_connected_supports() {
        let tree = PhylogenyTree {
            nodes: vec![vec![0, 0], vec![0, 1], vec![1, 1]],
            edges: vec![(0, 1), (1, 2)],
            leaf_map: vec![0, 1, 2],
        };
        assert!(verify_perfect_phylogeny(&inst(), &tree));
    }

    #[test]
    fn disconnected_variant_is_named() {
        let tree = PhylogenyTree {
            nodes: vec![vec![0, 0], vec![1, 1], vec![0, 1]],
            edges: vec![(0, 1), (1, 2)],
            leaf_map: vec![0, 2, 1],
        };
        assert_eq!(
            phylogeny_violation(&inst(), &tree),
            Some(PhylogenyViolation::VariantDisconnected { gene: 0, variant: 0 })
        );
    }

    #[test]
    fn rejects_duplicates_and_ragged_rows() {
        assert!(PhylogenyInstance::from_rows(2, vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(PhylogenyInstance::from_rows(2, vec![vec![0]]).is_err());
    }

    #[test]
    fn cycle_is_not_a_tree() {
        let tree = PhylogenyTree {
            nodes: vec![vec![0, 0], vec![0, 1], vec![1, 1]],
            edges: vec![(0, 1), (1, 2), (0, 2)],
            leaf_map: vec![0, 1, 2],
        };
        assert_eq!(phylogeny_violation(&inst(), &tree), Some(PhylogenyViolation::NotATree));
    }
}
