//! Zipper chains and zipper gadgets.
//!
//! A chain is two paths `P = p1 p2 ...` and `Q = q1 q2 ...` over seven colors
//! `a, bP, bQ, c1..c4`, two per vertex, repeating every four vertices (a tooth):
//!
//! ```text
//! P: a c1 | bP c2 | a c3 | bP c4
//! Q: bQ c3 | a c4 | bQ c1 | a c2
//! ```
//!
//! A gadget of size `n` and skew `s` has `4n - 1` P-vertices, `4(n + s)`
//! Q-vertices and two `bP` vertices, head and tail, closing everything into one
//! cycle. Its triangulations are exactly `s + 1` lattice paths, one per offset.
//!
//! P/Q indices are 1-based like the teeth; offsets are 0-based.

use crate::bitset::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{edge, ColorMode, Edge, FillSet, MulticoloredGraph};

/// Seven consecutive color ids starting at `base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Palette {
    pub base: usize,
}

impl Palette {
    pub const WIDTH: usize = 7;

    pub fn a(self) -> usize {
        self.base
    }
    pub fn b_p(self) -> usize {
        self.base + 1
    }
    pub fn b_q(self) -> usize {
        self.base + 2
    }
    /// `c(1)..=c(4)`.
    pub fn c(self, i: usize) -> usize {
        debug_assert!((1..=4).contains(&i));
        self.base + 2 + i
    }

    pub fn p_colors(self, i: usize) -> ColorSet {
        match i % 4 {
            1 => [self.a(), self.c(1)],
            2 => [self.b_p(), self.c(2)],
            3 => [self.a(), self.c(3)],
            _ => [self.b_p(), self.c(4)],
        }
        .into_iter()
        .collect()
    }

    pub fn q_colors(self, j: usize) -> ColorSet {
        match j % 4 {
            1 => [self.b_q(), self.c(3)],
            2 => [self.a(), self.c(4)],
            3 => [self.b_q(), self.c(1)],
            _ => [self.a(), self.c(2)],
        }
        .into_iter()
        .collect()
    }

    pub fn end_colors(self) -> ColorSet {
        ColorSet::singleton(self.b_p())
    }

    pub fn ids(self) -> std::ops::Range<usize> {
        self.base..self.base + Self::WIDTH
    }
}

pub fn p_has_a(i: usize) -> bool {
    i % 2 == 1
}

pub fn q_has_a(j: usize) -> bool {
    j.is_multiple_of(2)
}

/// 1-based tooth holding the 1-based path position `i`.
pub fn tooth_of(i: usize) -> usize {
    (i - 1) / 4 + 1
}

/// 1-based position of the first vertex of `tooth`.
pub fn tooth_start(tooth: usize) -> usize {
    4 * tooth - 3
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZipperChain {
    pub graph: MulticoloredGraph,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

/// Two bare paths with `teeth_p` and `teeth_q` full teeth, P-vertices first.
pub fn build_zipper_chain(teeth_p: usize, teeth_q: usize) -> Result<ZipperChain> {
    if teeth_p == 0 || teeth_q == 0 {
        return Err(Error::validation("a zipper chain needs at least one tooth on each path"));
    }
    let pal = Palette { base: 0 };
    let (lp, lq) = (4 * teeth_p, 4 * teeth_q);
    let mut colors: Vec<ColorSet> = (1..=lp).map(|i| pal.p_colors(i)).collect();
    colors.extend((1..=lq).map(|j| pal.q_colors(j)));
    let p: Vec<usize> = (0..lp).collect();
    let q: Vec<usize> = (lp..lp + lq).collect();
    let edges = p.windows(2).chain(q.windows(2)).map(|w| (w[0], w[1]));
    let graph = MulticoloredGraph::new(ColorMode::Multicolored, Palette::WIDTH, colors, edges)?;
    Ok(ZipperChain { graph, p, q })
}

/// Where a gadget's vertices sit inside some host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetEmbedding {
    pub size: usize,
    pub skew: usize,
    pub palette: Palette,
    pub head: usize,
    pub tail: usize,
    /// `p[i - 1]` is `p_i`.
    pub p: Vec<usize>,
    /// `q[j - 1]` is `q_j`.
    pub q: Vec<usize>,
}

impl GadgetEmbedding {
    /// Upper side of the lattice: head, `p_1 .. p_{4n-1}`, tail.
    pub fn upper(&self, x: usize) -> usize {
        if x == 0 {
            self.head
        } else if x == 4 * self.size {
            self.tail
        } else {
            self.p[x - 1]
        }
    }

    /// Lower side of the lattice, 1-based: `q_y`.
    pub fn lower(&self, y: usize) -> usize {
        self.q[y - 1]
    }

    pub fn chord(&self, (x, y): (usize, usize)) -> Edge {
        edge(self.upper(x), self.lower(y))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.head)
            .chain(self.p.iter().copied())
            .chain(std::iter::once(self.tail))
            .chain(self.q.iter().copied())
    }

    /// Base cycle: head, P, tail, Q reversed.
    pub fn cycle_edges(&self) -> Vec<Edge> {
        let mut cycle: Vec<usize> = Vec::with_capacity(self.p.len() + self.q.len() + 2);
        cycle.push(self.head);
        cycle.extend(&self.p);
        cycle.push(self.tail);
        cycle.extend(self.q.iter().rev());
        let mut edges: Vec<Edge> = cycle.windows(2).map(|w| edge(w[0], w[1])).collect();
        edges.push(edge(*cycle.last().unwrap(), cycle[0]));
        edges
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZipperGadget {
    pub graph: MulticoloredGraph,
    pub embedding: GadgetEmbedding,
}

impl ZipperGadget {
    pub fn size(&self) -> usize {
        self.embedding.size
    }

    pub fn skew(&self) -> usize {
        self.embedding.skew
    }
}

/// Standalone gadget on colors `0..7`. Vertex ids: head, P, tail, Q.
pub fn build_zipper_gadget(size: usize, skew: usize) -> Result<ZipperGadget> {
    if size == 0 {
        return Err(Error::validation("gadget size must be positive"));
    }
    let pal = Palette { base: 0 };
    let lp = 4 * size - 1;
    let lq = 4 * (size + skew);
    let head = 0;
    let p: Vec<usize> = (1..=lp).collect();
    let tail = lp + 1;
    let q: Vec<usize> = (tail + 1..=tail + lq).collect();
    let mut colors = vec![pal.end_colors()];
    colors.extend((1..=lp).map(|i| pal.p_colors(i)));
    colors.push(pal.end_colors());
    colors.extend((1..=lq).map(|j| pal.q_colors(j)));
    let embedding = GadgetEmbedding {
        size,
        skew,
        palette: pal,
        head,
        tail,
        p,
        q,
    };
    let graph = MulticoloredGraph::new(ColorMode::Multicolored, Palette::WIDTH, colors, embedding.cycle_edges())?;
    Ok(ZipperGadget { graph, embedding })
}

/// Lattice points `(x, y)` visited by the offset-`offset` triangulation, from
/// the head edge `(0, 1)` to the tail edge `(4n, 4(n + s))`.
///
/// The path climbs the head `4 * offset` times, then repeats "P, P, Q, Q"
/// along the chain, and finishes on the tail.
pub fn lattice_path(size: usize, skew: usize, offset: usize) -> Vec<(usize, usize)> {
    let (end_x, end_y) = (4 * size, 4 * (size + skew));
    let mut pt = (0, 1);
    let mut path = vec![pt];
    for _ in 0..4 * offset {
        pt.1 += 1;
        path.push(pt);
    }
    'blocks: for _ in 0..2 * size {
        for step in [(1, 0), (1, 0), (0, 1), (0, 1)] {
            if pt.1 + step.1 > end_y {
                break 'blocks;
            }
            pt = (pt.0 + step.0, pt.1 + step.1);
            path.push(pt);
        }
    }
    while pt.1 < end_y {
        pt.1 += 1;
        path.push(pt);
    }
    debug_assert_eq!(pt, (end_x, end_y));
    path
}

fn check_offset(emb: &GadgetEmbedding, offset: usize) -> Result<()> {
    if offset > emb.skew {
        return Err(Error::validation(format!(
            "offset {offset} outside 0..={} for this gadget",
            emb.skew
        )));
    }
    Ok(())
}

/// Fill edges of the offset-`offset` triangulation of an embedded gadget.
pub fn canonical_fill(emb: &GadgetEmbedding, offset: usize) -> Result<FillSet> {
    check_offset(emb, offset)?;
    let path = lattice_path(emb.size, emb.skew, offset);
    Ok(path[1..path.len() - 1].iter().map(|&pt| emb.chord(pt)).collect())
}

/// The triangulation with the head joined to the first `offset` Q-teeth.
pub fn canonical_gadget_triangulation(gadget: &ZipperGadget, offset: usize) -> Result<FillSet> {
    canonical_fill(&gadget.embedding, offset)
}

/// All `s + 1` triangulations, by offset.
pub fn enumerate_gadget_triangulations(gadget: &ZipperGadget) -> Vec<FillSet> {
    (0..=gadget.skew())
        .map(|d| canonical_gadget_triangulation(gadget, d).expect("offset in range"))
        .collect()
}

/// Offset of an embedded gadget under a triangulation given by `adjacent`:
/// one less than the unique Q-tooth locked together with the first P-tooth.
pub fn read_offset(emb: &GadgetEmbedding, adjacent: impl Fn(usize, usize) -> bool) -> Result<usize> {
    let first_tooth = 1..=4.min(emb.p.len());
    let mut teeth: Vec<usize> = Vec::new();
    for i in first_tooth {
        for j in 1..=emb.q.len() {
            if (p_has_a(i) || q_has_a(j)) && adjacent(emb.p[i - 1], emb.q[j - 1]) {
                let t = tooth_of(j);
                if !teeth.contains(&t) {
                    teeth.push(t);
                }
            }
        }
    }
    match teeth.as_slice() {
        [t] if t - 1 <= emb.skew => Ok(t - 1),
        [] => Err(Error::MalformedWitness(
            "first P-tooth is not locked to any Q-tooth".into(),
        )),
        _ => Err(Error::MalformedWitness(format!(
            "first P-tooth is locked to Q-teeth {teeth:?}"
        ))),
    }
}

/// Offset of a standalone gadget's triangulation.
pub fn read_gadget_offset(gadget: &ZipperGadget, fill: &FillSet) -> Result<usize> {
    read_offset(&gadget.embedding, |u, v| {
        gadget.graph.has_edge(u, v) || fill.contains(u, v)
    })
}

/// Structural facts every triangulation of a gadget must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ZipperProperty {
    /// No edge between non-consecutive vertices of one path.
    NoPathChord,
    /// A vertex joined to two vertices of the other path is joined to everything between.
    Convex,
    /// An edge `p_i q_j` is followed by `p_{i+1} q_j` or `p_i q_{j+1}`.
    Climbing,
    /// An edge `p_i q_j` with an `a` endpoint is followed by `p_{i+1} q_{j+1}`.
    Sliding,
    /// Locked teeth `i, j` imply locked teeth `i + 1, j + 1`.
    TeethFollow,
    /// A tooth is locked together with at most one tooth of the other path.
    UniqueLock,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyViolation {
    pub property: ZipperProperty,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZipperReport {
    pub violations: Vec<PropertyViolation>,
}

impl ZipperReport {
    pub fn holds(&self, property: ZipperProperty) -> bool {
        self.violations.iter().all(|v| v.property != property)
    }

    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural properties on a fill of a standalone gadget, for P
/// and Q in both directions. They are guaranteed for proper triangulations;
/// any other fill just gets its violations listed.
pub fn check_zipper_properties(gadget: &ZipperGadget, fill: &FillSet) -> Result<ZipperReport> {
    fill.validate_against(&gadget.graph)?;
    let emb = &gadget.embedding;
    let adj = |u: usize, v: usize| gadget.graph.has_edge(u, v) || fill.contains(u, v);
    let (lp, lq) = (emb.p.len(), emb.q.len());
    // cross[i][j] for 1-based i, j
    let cross = |i: usize, j: usize| adj(emb.p[i - 1], emb.q[j - 1]);
    let mut report = ZipperReport::default();
    let mut flag = |property, witness: Vec<usize>| report.violations.push(PropertyViolation { property, witness });

    for (path, len) in [(&emb.p, lp), (&emb.q, lq)] {
        for i in 0..len {
            for j in i + 2..len {
                if adj(path[i], path[j]) {
                    flag(ZipperProperty::NoPathChord, vec![path[i], path[j]]);
                }
            }
        }
    }

    for i in 1..=lp {
        let js: Vec<usize> = (1..=lq).filter(|&j| cross(i, j)).collect();
        if let (Some(&lo), Some(&hi)) = (js.first(), js.last()) {
            if js.len() != hi - lo + 1 {
                flag(ZipperProperty::Convex, vec![emb.p[i - 1], emb.q[lo - 1], emb.q[hi - 1]]);
            }
        }
    }
    for j in 1..=lq {
        let is: Vec<usize> = (1..=lp).filter(|&i| cross(i, j)).collect();
        if let (Some(&lo), Some(&hi)) = (is.first(), is.last()) {
            if is.len() != hi - lo + 1 {
                flag(ZipperProperty::Convex, vec![emb.q[j - 1], emb.p[lo - 1], emb.p[hi - 1]]);
            }
        }
    }

    for i in 1..=lp {
        for j in 1..=lq {
            if !cross(i, j) {
                continue;
            }
            let w = vec![emb.p[i - 1], emb.q[j - 1]];
            if i < lp && j < lq && !cross(i + 1, j) && !cross(i, j + 1) {
                flag(ZipperProperty::Climbing, w.clone());
            }
            if i > 1 && j > 1 && !cross(i - 1, j) && !cross(i, j - 1) {
                flag(ZipperProperty::Climbing, w.clone());
            }
            if p_has_a(i) || q_has_a(j) {
                if i < lp && j < lq && !cross(i + 1, j + 1) {
                    flag(ZipperProperty::Sliding, w.clone());
                }
                if i > 1 && j > 1 && !cross(i - 1, j - 1) {
                    flag(ZipperProperty::Sliding, w);
                }
            }
        }
    }

    let (tp, tq) = (tooth_of(lp), tooth_of(lq));
    let mut locked = vec![vec![false; tq + 1]; tp + 1];
    for i in 1..=lp {
        for j in 1..=lq {
            if (p_has_a(i) || q_has_a(j)) && cross(i, j) {
                locked[tooth_of(i)][tooth_of(j)] = true;
            }
        }
    }
    for a in 1..=tp {
        for b in 1..=tq {
            if locked[a][b] && a < tp && b < tq && !locked[a + 1][b + 1] {
                flag(ZipperProperty::TeethFollow, vec![a, b]);
            }
            if locked[a][b] && a > 1 && b > 1 && !locked[a - 1][b - 1] {
                flag(ZipperProperty::TeethFollow, vec![a, b]);
            }
        }
        let partners: Vec<usize> = (1..=tq).filter(|&b| locked[a][b]).collect();
        if partners.len() > 1 {
            flag(ZipperProperty::UniqueLock, std::iter::once(a).chain(partners).collect());
        }
    }
    #[allow(clippy::needless_range_loop)]
    for b in 1..=tq {
        let partners: Vec<usize> = (1..=tp).filter(|&a| locked[a][b]).collect();
        if partners.len() > 1 {
            flag(ZipperProperty::UniqueLock, std::iter::once(b).chain(partners).collect());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{components_within, is_properly_multicolored, verify_triangulation};
    use crate::VertexSet;

    fn drawn_fill(g: &ZipperGadget) -> FillSet {
        let e = &g.embedding;
        let (p, q, t) = (|i: usize| e.p[i - 1], |j: usize| e.q[j - 1], e.tail);
        [
            (p(1), q(1)),
            (p(2), q(1)),
            (p(2), q(2)),
            (p(2), q(3)),
            (p(3), q(3)),
            (p(4), q(3)),
            (p(4), q(4)),
            (p(4), q(5)),
            (p(5), q(5)),
            (p(6), q(5)),
            (p(6), q(6)),
            (p(6), q(7)),
            (p(7), q(7)),
            (t, q(7)),
            (t, q(8)),
            (t, q(9)),
            (t, q(10)),
            (t, q(11)),
        ]
        .into_iter()
        .map(|(a, b)| edge(a, b))
        .collect()
    }

    #[test]
    fn chain_color_pattern() {
        let c = build_zipper_chain(2, 2).unwrap();
        let pal = Palette { base: 0 };
        let names = |s: &ColorSet| s.to_vec();
        let p: Vec<_> = c.p.iter().map(|&v| names(c.graph.colors(v))).collect();
        let expect_p: Vec<_> = [
            [pal.a(), pal.c(1)],
            [pal.b_p(), pal.c(2)],
            [pal.a(), pal.c(3)],
            [pal.b_p(), pal.c(4)],
        ]
        .iter()
        .cycle()
        .take(8)
        .map(|x| {
            let mut x = x.to_vec();
            x.sort();
            x
        })
        .collect();
        assert_eq!(p, expect_p);
        let q1: Vec<_> = c.q.iter().take(4).map(|&v| names(c.graph.colors(v))).collect();
        assert_eq!(q1, vec![vec![pal.b_q(), pal.c(3)], vec![pal.a(), pal.c(4)], vec![pal.b_q(), pal.c(1)], vec![pal.a(), pal.c(2)]]);
        assert!(is_properly_multicolored(&c.graph));
        assert_eq!(build_zipper_chain(1, 1).unwrap().graph.num_vertices(), 8);
        assert!(build_zipper_chain(0, 1).is_err());
    }

    #[test]
    fn a_sits_on_odd_p_and_even_q() {
        let c = build_zipper_chain(3, 2).unwrap();
        for (i, &v) in c.p.iter().enumerate() {
            assert_eq!(c.graph.colors(v).contains(0), p_has_a(i + 1));
        }
        for (j, &v) in c.q.iter().enumerate() {
            assert_eq!(c.graph.colors(v).contains(0), q_has_a(j + 1));
        }
    }

    #[test]
    fn gadget_sizes() {
        for (n, s, lp, lq) in [(2, 1, 7, 12), (1, 0, 3, 4), (3, 2, 11, 20)] {
            let g = build_zipper_gadget(n, s).unwrap();
            assert_eq!((g.embedding.p.len(), g.embedding.q.len()), (lp, lq));
            assert_eq!(g.graph.num_vertices(), lp + lq + 2);
        }
        assert!(build_zipper_gadget(0, 1).is_err());
    }

    #[test]
    fn gadget_is_one_proper_cycle() {
        for n in 1..=3 {
            for s in 0..=2 {
                let g = build_zipper_gadget(n, s).unwrap();
                assert!(is_properly_multicolored(&g.graph));
                assert!((0..g.graph.num_vertices()).all(|v| g.graph.degree(v) == 2));
                let all = VertexSet::full(g.graph.num_vertices());
                assert_eq!(components_within(g.graph.adjacency(), &all).len(), 1);
                assert!(g.graph.has_edge(g.embedding.head, g.embedding.p[0]));
                assert!(g.graph.has_edge(g.embedding.head, g.embedding.q[0]));
                assert!(g.graph.has_edge(g.embedding.tail, *g.embedding.p.last().unwrap()));
                assert!(g.graph.has_edge(g.embedding.tail, *g.embedding.q.last().unwrap()));
            }
        }
    }

    #[test]
    fn head_without_p_is_disconnected_only_at_head() {
        let g = build_zipper_gadget(2, 1).unwrap();
        let mut rest = VertexSet::full(g.graph.num_vertices());
        rest.remove(g.embedding.head);
        assert_eq!(components_within(g.graph.adjacency(), &rest), vec![rest.clone()]);
    }

    #[test]
    fn offset_zero_matches_the_drawing() {
        let g = build_zipper_gadget(2, 1).unwrap();
        let fill = canonical_gadget_triangulation(&g, 0).unwrap();
        assert_eq!(fill, drawn_fill(&g));
        assert!(verify_triangulation(&g.graph, &fill));
        assert_eq!(read_gadget_offset(&g, &fill).unwrap(), 0);
        assert!(check_zipper_properties(&g, &fill).unwrap().all_hold());
    }

    #[test]
    fn offset_one_uses_head_and_one_forced_tail_chord() {
        let g = build_zipper_gadget(2, 1).unwrap();
        let e = &g.embedding;
        let fill = canonical_gadget_triangulation(&g, 1).unwrap();
        assert!(verify_triangulation(&g.graph, &fill));
        for j in 2..=5 {
            assert!(fill.contains(e.head, e.q[j - 1]));
        }
        // p7 and q12 both carry a, so the tail must take q11
        let tail_fill: Vec<_> = (1..=12).filter(|&j| fill.contains(e.tail, e.q[j - 1])).collect();
        assert_eq!(tail_fill, vec![11]);
        assert_eq!(read_gadget_offset(&g, &fill).unwrap(), 1);
    }

    #[test]
    fn smallest_gadget_has_one_ladder() {
        let g = build_zipper_gadget(1, 0).unwrap();
        let all = enumerate_gadget_triangulations(&g);
        assert_eq!(all.len(), 1);
        assert!(verify_triangulation(&g.graph, &all[0]));
        assert!(all[0].iter().all(|&(u, v)| u != g.embedding.head && v != g.embedding.head));
    }

    #[test]
    fn counts_and_read_back_sweep() {
        for n in 1..=4 {
            for s in 0..=3 {
                let g = build_zipper_gadget(n, s).unwrap();
                let fills = enumerate_gadget_triangulations(&g);
                assert_eq!(fills.len(), s + 1);
                for (d, fill) in fills.iter().enumerate() {
                    assert!(verify_triangulation(&g.graph, fill), "n={n} s={s} d={d}");
                    assert_eq!(read_gadget_offset(&g, fill).unwrap(), d);
                    let report = check_zipper_properties(&g, fill).unwrap();
                    assert!(report.all_hold(), "n={n} s={s} d={d}: {:?}", report.violations);
                }
            }
        }
        assert!(canonical_gadget_triangulation(&build_zipper_gadget(2, 1).unwrap(), 2).is_err());
    }

    #[test]
    fn path_chord_is_flagged() {
        let g = build_zipper_gadget(2, 1).unwrap();
        let e = &g.embedding;
        let mut fill = canonical_gadget_triangulation(&g, 0).unwrap();
        fill.insert(e.p[0], e.p[2]);
        let report = check_zipper_properties(&g, &fill).unwrap();
        assert!(!report.holds(ZipperProperty::NoPathChord));
        assert!(report.violations.iter().any(|v| v.witness == vec![e.p[0], e.p[2]]));
        let mut bad = FillSet::new();
        bad.insert(e.head, e.p[0]);
        assert!(check_zipper_properties(&g, &bad).is_err());
    }

    #[test]
    fn read_back_rejects_unlocked_first_tooth() {
        let g = build_zipper_gadget(1, 1).unwrap();
        assert!(read_gadget_offset(&g, &FillSet::new()).is_err());
    }
}
