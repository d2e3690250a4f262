//! Tree-chained multicolor independent set to multicolored triangulation.
//!
//! The tree gets two extra nodes above a node of degree at most two, so every
//! original node has a parent and a grandparent. Each class `(node, color)`
//! becomes a zipper gadget starting at the node, passing through its parent at
//! the middle vertex and ending at its grandparent; the offset of its
//! triangulation is the picked index. Heads, middles and tails meeting at a
//! tree node are identified into one hub vertex.
//!
//! Every edge of the (padded) instance has a cut: a P-tooth in each of the two
//! gadgets of its endpoints. The first vertices of those teeth are identified,
//! and the Q-vertices the merged vertex would see under the forbidden offsets
//! get the extra color `d`.
//!
//! Layout with `st = r + 1` (skew `r`, class size `r + 1`, `m` edges):
//! first-half cut `i` sits at P-tooth `1 + i * st`, the middle is the last
//! vertex of tooth `M = (m + 1) * st`, second-half cut `i` at tooth `M + 1 + i * st`,
//! and gadgets have size `2M`. Consecutive cuts are a stride apart, and the
//! `st` possible `d` teeth of one cut never meet those of the next.

use std::collections::{HashMap, VecDeque};

use crate::bitset::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{edge, ColorMode, Edge, MulticoloredGraph};
use crate::tcmis::{ClassVertex, TcmisInstance};
use crate::zipper::{tooth_start, GadgetEmbedding, Palette};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexRole {
    Head { gadget: usize },
    Tail { gadget: usize },
    P { gadget: usize, index: usize },
    Q { gadget: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInfo {
    pub node: usize,
    pub color: usize,
    /// Nodes of the rooted tree where the gadget starts, passes and ends.
    pub start: usize,
    pub middle: usize,
    pub end: usize,
    pub slot: usize,
    pub embedding: GadgetEmbedding,
}

/// Identification made for one instance edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Merge {
    /// 1-based edge index.
    pub edge: usize,
    /// The gadget cut in its first half comes first.
    pub gadgets: [usize; 2],
    pub endpoints: [ClassVertex; 2],
    /// P-tooth cut in each gadget.
    pub teeth: [usize; 2],
    pub vertex: usize,
    /// Q-vertices carrying `d`.
    pub marked: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetLayout {
    pub padded: TcmisInstance,
    pub skew: usize,
    pub num_edges: usize,
    pub middle_tooth: usize,
    pub gadget_size: usize,
    /// Parent of every node of the rooted tree; original nodes keep their ids,
    /// the two added nodes come next and the last one is the root.
    pub parent: Vec<Option<usize>>,
    pub attach: usize,
    pub hubs: Vec<usize>,
    pub gadgets: Vec<GadgetInfo>,
    pub gadget_of: Vec<Vec<usize>>,
    pub merges: Vec<Merge>,
    pub roles: Vec<Vec<VertexRole>>,
    pub d_color: usize,
    pub allocated_colors: usize,
}

impl GadgetLayout {
    pub fn stride(&self) -> usize {
        self.skew + 1
    }

    /// P-tooth of cut `i` (1-based) in the first half.
    pub fn cut_tooth(&self, i: usize) -> usize {
        1 + i * self.stride()
    }

    pub fn root(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn num_tree_nodes(&self) -> usize {
        self.parent.len()
    }

    /// Color ids actually carried by some vertex.
    pub fn occupied_colors(&self, g: &MulticoloredGraph) -> usize {
        g.occupied_colors().len()
    }
}

fn build_parents(inst: &TcmisInstance) -> (Vec<Option<usize>>, usize) {
    let n = inst.num_nodes();
    let adj = inst.tree_adjacency();
    let attach = (0..n).find(|&x| adj[x].len() <= 2).expect("a tree has a leaf");
    let (v, w) = (n, n + 1);
    let mut parent = vec![None; n + 2];
    parent[attach] = Some(v);
    parent[v] = Some(w);
    let mut queue = VecDeque::from([attach]);
    let mut seen = vec![false; n];
    seen[attach] = true;
    while let Some(x) = queue.pop_front() {
        for y in adj[x].iter() {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                queue.push_back(y);
            }
        }
    }
    (parent, attach)
}

/// Breadth-first order from the root over the rooted tree.
fn root_order(parent: &[Option<usize>]) -> Vec<usize> {
    let nodes = parent.len();
    let mut children = vec![Vec::new(); nodes];
    for (x, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(x);
        }
    }
    let mut order = vec![nodes - 1];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        order.extend(children[x].iter().copied());
        i += 1;
    }
    order
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Hub(usize),
    Merge(usize),
    P(usize, usize),
    Q(usize, usize),
}

/// Builds the multicolored graph of the reduction and its layout.
pub fn reduce_tcmis_to_tmg(inst: &TcmisInstance) -> Result<(MulticoloredGraph, GadgetLayout)> {
    let padded = inst.padded();
    let k = inst.k();
    let skew = padded.max_class() - 1;
    let st = skew + 1;
    let m = padded.edges().len();
    let middle_tooth = (m + 1) * st;
    let size = 2 * middle_tooth;
    let (parent, attach) = build_parents(&padded);
    let tree_nodes = parent.len();
    let gp = |x: usize| parent[x].and_then(|p| parent[p]);

    // gadgets in (node, color) order
    let mut gadget_of: Vec<Vec<usize>> = Vec::with_capacity(padded.num_nodes());
    let mut specs: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for x in 0..padded.num_nodes() {
        let row = (0..padded.num_colors(x))
            .map(|c| {
                specs.push((x, c, x, parent[x].unwrap(), gp(x).unwrap()));
                specs.len() - 1
            })
            .collect();
        gadget_of.push(row);
    }

    // color slots, nodes closest to the root first
    let mut slot = vec![usize::MAX; specs.len()];
    let span = |x: usize| [Some(x), parent[x], gp(x)];
    for x in root_order(&parent).into_iter().filter(|&x| x < padded.num_nodes()) {
        let mine = span(x);
        let mut used = vec![false; 7 * k];
        for (g, &(y, ..)) in specs.iter().enumerate() {
            if slot[g] != usize::MAX && span(y).iter().flatten().any(|z| mine.contains(&Some(*z))) {
                used[slot[g]] = true;
            }
        }
        let mut free = (0..7 * k).filter(|&s| !used[s]);
        for &g in &gadget_of[x] {
            slot[g] = free
                .next()
                .ok_or_else(|| Error::Internal("ran out of color slots".into()))?;
        }
    }
    let d_color = 49 * k;

    // merges, with the tooth each gadget is cut at
    let mut merges: Vec<Merge> = Vec::with_capacity(m);
    let mut cut_at: HashMap<(usize, usize), usize> = HashMap::new();
    for (pos, &(a, b)) in padded.edges().iter().enumerate() {
        let i = pos + 1;
        let t = 1 + i * st;
        let (first, second, second_tooth) = if a.node == b.node {
            (a, b, t)
        } else if parent[b.node] == Some(a.node) {
            (a, b, middle_tooth + t)
        } else {
            (b, a, middle_tooth + t)
        };
        let gadgets = [gadget_of[first.node][first.color], gadget_of[second.node][second.color]];
        let teeth = [t, second_tooth];
        for (&g, &tooth) in gadgets.iter().zip(&teeth) {
            cut_at.insert((g, tooth_start(tooth)), i);
        }
        merges.push(Merge {
            edge: i,
            gadgets,
            endpoints: [first, second],
            teeth,
            vertex: usize::MAX,
            marked: [usize::MAX; 2],
        });
    }

    let lp = 4 * size - 1;
    let lq = 4 * (size + skew);
    let mut ids: HashMap<Key, usize> = HashMap::new();
    let mut colors: Vec<ColorSet> = Vec::new();
    let mut roles: Vec<Vec<VertexRole>> = Vec::new();
    let mut vertex = |key: Key, cs: ColorSet, role: VertexRole| -> usize {
        let id = *ids.entry(key).or_insert_with(|| {
            colors.push(ColorSet::new());
            roles.push(Vec::new());
            colors.len() - 1
        });
        colors[id].union_with(&cs);
        roles[id].push(role);
        id
    };
    let mut gadgets = Vec::with_capacity(specs.len());
    let mut edges: Vec<Edge> = Vec::new();
    for (g, &(node, color, start, middle, end)) in specs.iter().enumerate() {
        let pal = Palette { base: 7 * slot[g] };
        let head = vertex(Key::Hub(start), pal.end_colors(), VertexRole::Head { gadget: g });
        let p: Vec<usize> = (1..=lp)
            .map(|i| {
                let key = if i == 4 * middle_tooth {
                    Key::Hub(middle)
                } else if let Some(&e) = cut_at.get(&(g, i)) {
                    Key::Merge(e)
                } else {
                    Key::P(g, i)
                };
                vertex(key, pal.p_colors(i), VertexRole::P { gadget: g, index: i })
            })
            .collect();
        let tail = vertex(Key::Hub(end), pal.end_colors(), VertexRole::Tail { gadget: g });
        let q: Vec<usize> = (1..=lq)
            .map(|j| vertex(Key::Q(g, j), pal.q_colors(j), VertexRole::Q { gadget: g, index: j }))
            .collect();
        let embedding = GadgetEmbedding {
            size,
            skew,
            palette: pal,
            head,
            tail,
            p,
            q,
        };
        edges.extend(embedding.cycle_edges());
        gadgets.push(GadgetInfo {
            node,
            color,
            start,
            middle,
            end,
            slot: slot[g],
            embedding,
        });
    }
    for merge in &mut merges {
        let [g1, g2] = merge.gadgets;
        merge.vertex = gadgets[g1].embedding.p[tooth_start(merge.teeth[0]) - 1];
        debug_assert_eq!(merge.vertex, gadgets[g2].embedding.p[tooth_start(merge.teeth[1]) - 1]);
        for side in 0..2 {
            let emb = &gadgets[merge.gadgets[side]].embedding;
            let tooth = merge.teeth[side] + merge.endpoints[side].index;
            let q = emb.q[tooth_start(tooth) - 1];
            colors[q].insert(d_color);
            merge.marked[side] = q;
        }
    }
    let hubs = (0..tree_nodes)
        .map(|x| ids.get(&Key::Hub(x)).copied().unwrap_or(usize::MAX))
        .collect();
    let edges: Vec<Edge> = edges.into_iter().map(|(a, b)| edge(a, b)).collect();
    let allocated_colors = 49 * k + 1;
    let graph = MulticoloredGraph::new(ColorMode::Multicolored, allocated_colors, colors, edges)?;
    let layout = GadgetLayout {
        padded,
        skew,
        num_edges: m,
        middle_tooth,
        gadget_size: size,
        parent,
        attach,
        hubs,
        gadgets,
        gadget_of,
        merges,
        roles,
        d_color,
        allocated_colors,
    };
    Ok((graph, layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_properly_multicolored;

    fn v(n: usize, c: usize, i: usize) -> ClassVertex {
        ClassVertex::new(n, c, i)
    }

    #[test]
    fn smallest_instance_is_one_gadget() {
        let inst = TcmisInstance::new(1, vec![], vec![vec![1]], vec![]).unwrap();
        let (g, layout) = reduce_tcmis_to_tmg(&inst).unwrap();
        assert_eq!(layout.gadgets.len(), 1);
        let z = &layout.gadgets[0];
        assert_eq!((z.start, z.middle, z.end), (0, 1, 2));
        assert_eq!(z.embedding.skew, 0);
        assert_eq!(layout.allocated_colors, 50);
        assert!(is_properly_multicolored(&g));
        // head, middle and tail are the three hubs
        assert_eq!(layout.hubs, vec![z.embedding.head, z.embedding.p[4 * layout.middle_tooth - 1], z.embedding.tail]);
    }

    #[test]
    fn one_edge_two_classes() {
        let inst = TcmisInstance::new(2, vec![], vec![vec![2, 2]], vec![(v(0, 0, 0), v(0, 1, 1))]).unwrap();
        let (g, layout) = reduce_tcmis_to_tmg(&inst).unwrap();
        assert_eq!(layout.skew, 1);
        let [z0, z1] = [&layout.gadgets[0], &layout.gadgets[1]];
        assert_ne!(z0.slot, z1.slot);
        let merge = &layout.merges[0];
        assert_eq!(merge.teeth, [3, 3]);
        let u = merge.vertex;
        assert_eq!(z0.embedding.p[8], u);
        assert_eq!(z1.embedding.p[8], u);
        assert_eq!(g.colors(u).len(), 4);
        // d on the first vertex of Q-teeth 3 + 0 and 3 + 1
        assert_eq!(merge.marked, [z0.embedding.q[8], z1.embedding.q[12]]);
        assert!(g.colors(merge.marked[0]).contains(layout.d_color));
        assert!(g.colors(merge.marked[1]).contains(layout.d_color));
        assert!(is_properly_multicolored(&g));
        assert_eq!(g.occupied_colors().iter().max(), Some(layout.d_color));
    }

    #[test]
    fn colors_stay_within_budget_and_apart() {
        // path of three nodes, two classes each
        let inst = TcmisInstance::new(
            2,
            vec![(0, 1), (1, 2)],
            vec![vec![2, 1], vec![2, 2], vec![1, 2]],
            vec![(v(0, 0, 1), v(1, 1, 0)), (v(1, 0, 0), v(2, 1, 1))],
        )
        .unwrap();
        let (g, layout) = reduce_tcmis_to_tmg(&inst).unwrap();
        assert!(g.num_colors() <= 49 * inst.k() + 1);
        assert!(is_properly_multicolored(&g));
        for (a, za) in layout.gadgets.iter().enumerate() {
            for zb in &layout.gadgets[a + 1..] {
                let na = [za.start, za.middle, za.end];
                if [zb.start, zb.middle, zb.end].iter().any(|x| na.contains(x)) {
                    assert_ne!(za.slot, zb.slot);
                }
            }
        }
    }
}
