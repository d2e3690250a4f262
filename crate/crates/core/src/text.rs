//! Line-oriented text formats. `#` starts a comment; blank lines are skipped.
//!
//! ```text
//! graph tcg|tmg <num_vertices> <num_colors>     vertex <id> <color>*    edge <u> <v>
//! td <num_bags> <num_vertices>                  bag <id> <vertex>*      tedge <b1> <b2>
//! fill <u> <v>
//! tcmis <num_nodes> <k>    treeedge <n1> <n2>    class <node> <color> <size>
//!                          edge <n1> <c1> <i1> <n2> <c2> <i2>
//! choose <node> <color> <index>
//! pp <num_species> <num_genes>                  species <name> <variant>*
//! phylo <num_nodes> <num_genes>   node <id> <variant>*   pedge <a> <b>   leaf <species> <node>
//! annot <anything>
//! ```
//!
//! A `td` file may carry `ref <num_edges> <fingerprint>` pinning the graph it
//! was built for.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::bitset::{ColorSet, VertexSet};
use crate::decomposition::{GraphRef, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{ColorMode, FillSet, MulticoloredGraph};
use crate::phylogeny::{PhylogenyInstance, PhylogenyTree, Species};
use crate::tcmis::{ClassVertex, TcmisInstance, TcmisSolution};
use crate::zipper::{GadgetEmbedding, Palette};

struct Line<'a> {
    no: usize,
    words: Vec<&'a str>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.words[0]
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.no, message)
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.words.len() - 1 != n {
            return Err(self.err(format!("`{}` takes {n} fields, found {}", self.keyword(), self.words.len() - 1)));
        }
        Ok(())
    }

    fn num<T: FromStr>(&self, i: usize) -> Result<T> {
        let w = self.words.get(i).ok_or_else(|| self.err(format!("`{}` is missing field {i}", self.keyword())))?;
        w.parse().map_err(|_| self.err(format!("`{w}` is not a non-negative integer")))
    }

    fn nums<T: FromStr>(&self, from: usize) -> Result<Vec<T>> {
        (from..self.words.len()).map(|i| self.num(i)).collect()
    }

    fn below(&self, i: usize, bound: usize, what: &str) -> Result<usize> {
        let x: usize = self.num(i)?;
        if x >= bound {
            return Err(self.err(format!("{what} {x} out of range 0..{bound}")));
        }
        Ok(x)
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some(Line { no: i + 1, words })
    })
}

/// Splits off the header line, checking its keyword.
fn header<'a>(text: &'a str, keyword: &str) -> Result<(Line<'a>, impl Iterator<Item = Line<'a>>)> {
    let mut it = lines(text);
    let head = it.next().ok_or_else(|| Error::parse(1, format!("empty input, expected `{keyword}` header")))?;
    if head.keyword() != keyword {
        return Err(head.err(format!("expected `{keyword}` header, found `{}`", head.keyword())));
    }
    Ok((head, it))
}

fn unknown(line: &Line) -> Error {
    line.err(format!("unknown keyword `{}`", line.keyword()))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

// ---- graphs ----

pub fn parse_graph(text: &str) -> Result<MulticoloredGraph> {
    let (head, rest) = header(text, "graph")?;
    head.arity(3)?;
    let mode = match head.words[1] {
        "tcg" => ColorMode::Colored,
        "tmg" => ColorMode::Multicolored,
        other => return Err(head.err(format!("graph kind must be tcg or tmg, found `{other}`"))),
    };
    let n: usize = head.num(2)?;
    let num_colors: usize = head.num(3)?;
    let mut colors: Vec<Option<ColorSet>> = vec![None; n];
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for line in rest {
        match line.keyword() {
            "vertex" => {
                let v = line.below(1, n, "vertex")?;
                if colors[v].is_some() {
                    return Err(line.err(format!("vertex {v} declared twice")));
                }
                let mut cs = ColorSet::new();
                for i in 2..line.words.len() {
                    let c = line.below(i, num_colors, "color")?;
                    if !cs.insert(c) {
                        return Err(line.err(format!("color {c} repeated")));
                    }
                }
                if mode == ColorMode::Colored && cs.len() != 1 {
                    return Err(line.err(format!("tcg vertex {v} needs exactly one color, found {}", cs.len())));
                }
                colors[v] = Some(cs);
            }
            "edge" => {
                line.arity(2)?;
                let u = line.below(1, n, "vertex")?;
                let v = line.below(2, n, "vertex")?;
                if u == v {
                    return Err(line.err(format!("self-loop at {u}")));
                }
                if !seen.insert(crate::graph::edge(u, v)) {
                    return Err(line.err(format!("duplicate edge {u}-{v}")));
                }
                edges.push((u, v));
            }
            "annot" => {}
            _ => return Err(unknown(&line)),
        }
    }
    let colors = colors
        .into_iter()
        .enumerate()
        .map(|(v, cs)| cs.ok_or_else(|| Error::parse(head.no, format!("vertex {v} has no `vertex` line"))))
        .collect::<Result<Vec<_>>>()?;
    MulticoloredGraph::new(mode, num_colors, colors, edges)
}

pub fn write_graph(g: &MulticoloredGraph) -> String {
    let mut out = format!("graph {} {} {}\n", g.mode().keyword(), g.num_vertices(), g.num_colors());
    for v in 0..g.num_vertices() {
        let cs = g.colors(v);
        if cs.is_empty() {
            writeln!(out, "vertex {v}").unwrap();
        } else {
            writeln!(out, "vertex {v} {}", join(cs.iter())).unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "edge {u} {v}").unwrap();
    }
    out
}

/// Text after `annot` on every annotation line.
pub fn annotations(text: &str) -> Vec<String> {
    lines(text)
        .filter(|l| l.keyword() == "annot")
        .map(|l| l.words[1..].join(" "))
        .collect()
}

// ---- fills ----

pub fn parse_fill(text: &str) -> Result<FillSet> {
    let mut fill = FillSet::new();
    for line in lines(text) {
        if line.keyword() != "fill" {
            return Err(unknown(&line));
        }
        line.arity(2)?;
        let (u, v): (usize, usize) = (line.num(1)?, line.num(2)?);
        if u == v {
            return Err(line.err(format!("fill edge {u}-{v} is a loop")));
        }
        fill.insert(u, v);
    }
    Ok(fill)
}

pub fn write_fill(fill: &FillSet) -> String {
    fill.iter().map(|(u, v)| format!("fill {u} {v}\n")).collect()
}

// ---- tree decompositions ----

pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let (head, rest) = header(text, "td")?;
    head.arity(2)?;
    let nb: usize = head.num(1)?;
    let n: usize = head.num(2)?;
    let mut bags: Vec<Option<VertexSet>> = vec![None; nb];
    let mut edges = Vec::new();
    let mut graph_ref = GraphRef::vertices_only(n);
    for line in rest {
        match line.keyword() {
            "bag" => {
                let b = line.below(1, nb, "bag")?;
                if bags[b].is_some() {
                    return Err(line.err(format!("bag {b} declared twice")));
                }
                let mut bag = VertexSet::new();
                for i in 2..line.words.len() {
                    bag.insert(line.below(i, n, "vertex")?);
                }
                bags[b] = Some(bag);
            }
            "tedge" => {
                line.arity(2)?;
                edges.push((line.below(1, nb, "bag")?, line.below(2, nb, "bag")?));
            }
            "ref" => {
                line.arity(2)?;
                let h = u64::from_str_radix(line.words[2], 16).map_err(|_| line.err("fingerprint is not hex"))?;
                graph_ref.num_edges = Some(line.num(1)?);
                graph_ref.fingerprint = Some(h);
            }
            _ => return Err(unknown(&line)),
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(b, bag)| bag.ok_or_else(|| Error::parse(head.no, format!("bag {b} has no `bag` line"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, edges, graph_ref))
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = format!("td {} {}\n", td.num_bags(), td.graph_ref.num_vertices);
    if let (Some(m), Some(h)) = (td.graph_ref.num_edges, td.graph_ref.fingerprint) {
        writeln!(out, "ref {m} {h:016x}").unwrap();
    }
    for (b, bag) in td.bags.iter().enumerate() {
        if bag.is_empty() {
            writeln!(out, "bag {b}").unwrap();
        } else {
            writeln!(out, "bag {b} {}", join(bag.iter())).unwrap();
        }
    }
    for (a, b) in &td.tree_edges {
        writeln!(out, "tedge {a} {b}").unwrap();
    }
    out
}

// ---- tree-chained independent set ----

pub fn parse_tcmis(text: &str) -> Result<TcmisInstance> {
    let (head, rest) = header(text, "tcmis")?;
    head.arity(2)?;
    let nodes: usize = head.num(1)?;
    let k: usize = head.num(2)?;
    let mut tree_edges = Vec::new();
    let mut classes: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); nodes];
    let mut edges = Vec::new();
    for line in rest {
        match line.keyword() {
            "treeedge" => {
                line.arity(2)?;
                tree_edges.push((line.below(1, nodes, "node")?, line.below(2, nodes, "node")?));
            }
            "class" => {
                line.arity(3)?;
                let x = line.below(1, nodes, "node")?;
                let c = line.below(2, k, "color")?;
                if classes[x].insert(c, line.num(3)?).is_some() {
                    return Err(line.err(format!("class ({x}, {c}) declared twice")));
                }
            }
            "edge" => {
                line.arity(6)?;
                let ends = line.nums::<usize>(1)?;
                edges.push((
                    ClassVertex::new(ends[0], ends[1], ends[2]),
                    ClassVertex::new(ends[3], ends[4], ends[5]),
                ));
            }
            _ => return Err(unknown(&line)),
        }
    }
    let mut sizes = Vec::with_capacity(nodes);
    for (x, row) in classes.into_iter().enumerate() {
        if row.keys().copied().ne(0..row.len()) {
            return Err(Error::parse(head.no, format!("classes of node {x} are not numbered 0..")));
        }
        sizes.push(row.into_values().collect());
    }
    TcmisInstance::new(k, tree_edges, sizes, edges)
}

pub fn write_tcmis(inst: &TcmisInstance) -> String {
    let mut out = format!("tcmis {} {}\n", inst.num_nodes(), inst.k());
    for (a, b) in inst.tree_edges() {
        writeln!(out, "treeedge {a} {b}").unwrap();
    }
    for (x, row) in inst.class_sizes().iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            writeln!(out, "class {x} {c} {s}").unwrap();
        }
    }
    for (a, b) in inst.edges() {
        writeln!(out, "edge {} {} {} {} {} {}", a.node, a.color, a.index, b.node, b.color, b.index).unwrap();
    }
    out
}

/// Reads `choose` lines; every class of `inst` must be chosen exactly once.
pub fn parse_solution(inst: &TcmisInstance, text: &str) -> Result<TcmisSolution> {
    let mut sol: Vec<Vec<Option<usize>>> = inst.class_sizes().iter().map(|r| vec![None; r.len()]).collect();
    for line in lines(text) {
        if line.keyword() != "choose" {
            return Err(unknown(&line));
        }
        line.arity(3)?;
        let x = line.below(1, inst.num_nodes(), "node")?;
        let c = line.below(2, inst.num_colors(x), "color")?;
        let i = line.below(3, inst.class_sizes()[x][c], "index")?;
        if sol[x][c].replace(i).is_some() {
            return Err(line.err(format!("class ({x}, {c}) chosen twice")));
        }
    }
    sol.into_iter()
        .enumerate()
        .map(|(x, row)| {
            row.into_iter()
                .enumerate()
                .map(|(c, i)| i.ok_or_else(|| Error::validation(format!("class ({x}, {c}) has no `choose` line"))))
                .collect()
        })
        .collect()
}

pub fn write_solution(sol: &TcmisSolution) -> String {
    let mut out = String::new();
    for (x, row) in sol.iter().enumerate() {
        for (c, i) in row.iter().enumerate() {
            writeln!(out, "choose {x} {c} {i}").unwrap();
        }
    }
    out
}

// ---- phylogeny ----

pub fn parse_pp(text: &str) -> Result<PhylogenyInstance> {
    let (head, rest) = header(text, "pp")?;
    head.arity(2)?;
    let ns: usize = head.num(1)?;
    let ng: usize = head.num(2)?;
    let mut species = Vec::with_capacity(ns);
    for line in rest {
        if line.keyword() != "species" {
            return Err(unknown(&line));
        }
        line.arity(ng + 1)?;
        species.push(Species {
            name: line.words[1].to_string(),
            variants: line.nums(2)?,
        });
    }
    if species.len() != ns {
        return Err(Error::parse(head.no, format!("header promises {ns} species, found {}", species.len())));
    }
    PhylogenyInstance::new(ng, species)
}

pub fn write_pp(inst: &PhylogenyInstance) -> String {
    let mut out = format!("pp {} {}\n", inst.num_species(), inst.num_genes());
    for s in inst.species() {
        writeln!(out, "species {} {}", s.name, join(&s.variants)).unwrap();
    }
    out
}

pub fn parse_phylogeny(inst: &PhylogenyInstance, text: &str) -> Result<PhylogenyTree> {
    let (head, rest) = header(text, "phylo")?;
    head.arity(2)?;
    let nn: usize = head.num(1)?;
    let ng: usize = head.num(2)?;
    let mut nodes: Vec<Option<Vec<usize>>> = vec![None; nn];
    let mut edges = Vec::new();
    let index: HashMap<&str, usize> = inst.species().iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let mut leaf_map: Vec<Option<usize>> = vec![None; inst.num_species()];
    for line in rest {
        match line.keyword() {
            "node" => {
                line.arity(ng + 1)?;
                let x = line.below(1, nn, "node")?;
                if nodes[x].replace(line.nums(2)?).is_some() {
                    return Err(line.err(format!("node {x} declared twice")));
                }
            }
            "pedge" => {
                line.arity(2)?;
                edges.push(crate::graph::edge(line.below(1, nn, "node")?, line.below(2, nn, "node")?));
            }
            "leaf" => {
                line.arity(2)?;
                let s = *index
                    .get(line.words[1])
                    .ok_or_else(|| line.err(format!("unknown species `{}`", line.words[1])))?;
                leaf_map[s] = Some(line.below(2, nn, "node")?);
            }
            _ => return Err(unknown(&line)),
        }
    }
    let nodes = nodes
        .into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| Error::parse(head.no, format!("node {x} has no `node` line"))))
        .collect::<Result<Vec<_>>>()?;
    let leaf_map = leaf_map
        .into_iter()
        .enumerate()
        .map(|(s, x)| x.ok_or_else(|| Error::validation(format!("species `{}` has no `leaf` line", inst.species()[s].name))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhylogenyTree { nodes, edges, leaf_map })
}

pub fn write_phylogeny(inst: &PhylogenyInstance, tree: &PhylogenyTree) -> String {
    let mut out = format!("phylo {} {}\n", tree.nodes.len(), inst.num_genes());
    for (x, tuple) in tree.nodes.iter().enumerate() {
        writeln!(out, "node {x} {}", join(tuple)).unwrap();
    }
    for (a, b) in &tree.edges {
        writeln!(out, "pedge {a} {b}").unwrap();
    }
    for (s, x) in inst.species().iter().zip(&tree.leaf_map) {
        writeln!(out, "leaf {} {x}", s.name).unwrap();
    }
    out
}

// ---- gadget annotations ----

pub fn gadget_annotation(id: usize, emb: &GadgetEmbedding) -> String {
    let list = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!(
        "annot gadget {id} n={} s={} head={} tail={} p={} q={}",
        emb.size,
        emb.skew,
        emb.head,
        emb.tail,
        list(&emb.p),
        list(&emb.q)
    )
}

/// Recovers gadget embeddings from `annot gadget` lines, taking each palette
/// from the head's color.
pub fn parse_gadget_annotations(text: &str, g: &MulticoloredGraph) -> Result<Vec<(usize, GadgetEmbedding)>> {
    let mut out = Vec::new();
    for line in lines(text).filter(|l| l.keyword() == "annot" && l.words.get(1) == Some(&"gadget")) {
        let id: usize = line.num(2)?;
        let mut kv: HashMap<&str, &str> = HashMap::new();
        for w in &line.words[3..] {
            let (k, v) = w.split_once('=').ok_or_else(|| line.err(format!("expected key=value, found `{w}`")))?;
            kv.insert(k, v);
        }
        let field = |k: &str| kv.get(k).copied().ok_or_else(|| line.err(format!("gadget annotation lacks `{k}`")));
        let one = |k: &str| -> Result<usize> {
            field(k)?.parse().map_err(|_| line.err(format!("`{k}` is not an integer")))
        };
        let many = |k: &str| -> Result<Vec<usize>> {
            field(k)?
                .split(',')
                .map(|x| x.parse().map_err(|_| line.err(format!("`{k}` is not a list of integers"))))
                .collect()
        };
        let (size, skew, head, tail, p, q) = (one("n")?, one("s")?, one("head")?, one("tail")?, many("p")?, many("q")?);
        if size == 0 || p.len() != 4 * size - 1 || q.len() != 4 * (size + skew) {
            return Err(line.err("gadget path lengths do not match n and s"));
        }
        if std::iter::once(head).chain(p.iter().copied()).chain([tail]).chain(q.iter().copied()).any(|v| v >= g.num_vertices()) {
            return Err(line.err("gadget names a vertex outside the graph"));
        }
        let base = g
            .colors(head)
            .iter()
            .next()
            .and_then(|c| c.checked_sub(1))
            .ok_or_else(|| line.err("gadget head has no palette color"))?;
        out.push((
            id,
            GadgetEmbedding {
                size,
                skew,
                palette: Palette { base },
                head,
                tail,
                p,
                q,
            },
        ));
    }
    Ok(out)
}
