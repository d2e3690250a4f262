//! `chromatic`: solve, reduce, verify and benchmark chromatic triangulation
//! instances.
//!
//! Exit codes: `solve` and `oracle` return 10 (SAT), 20 (UNSAT), 30 (timeout);
//! `verify` returns 0 (OK) or 2 (FAIL); everything returns 1 on error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use chromatic_core::decomposition::{
    multiplicity_violation, td_violation, treedecomp_to_triangulation, Multiplicity, TreeDecomposition,
};
use chromatic_core::dot::{gadget_to_dot, to_dot};
use chromatic_core::graph::{improper_edge, is_chordal, ColorMode, FillSet, MulticoloredGraph};
use chromatic_core::oracles::{
    brute_force_tcg_elimination, brute_force_tcmis, exhaustive_triangulation_count, four_gamete_pp,
};
use chromatic_core::phylogeny::phylogeny_violation;
use chromatic_core::reductions::{pp, tcmis as tcmis_reduction, tmg};
use chromatic_core::solver::{solve_pp, solve_tcg, solve_tmg, Outcome, SolveOptions};
use chromatic_core::sweep::{bench_pp, BenchConfig};
use chromatic_core::tcmis::first_conflict;
use chromatic_core::text;
use chromatic_core::zipper::{build_zipper_gadget, canonical_gadget_triangulation, read_offset};

use report::{RunReport, Stats, Verdict};

const SEED_VAR: &str = "CHROMATIC_SEED";

#[derive(Parser)]
#[command(name = "chromatic", version, about = "Chromatic triangulation toolkit")]
struct Cli {
    /// Print nothing on success; errors still go to stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print the report as one JSON object.
    #[arg(long, global = true, conflicts_with = "quiet")]
    json: bool,
    /// Seed for randomized commands (default: $CHROMATIC_SEED, else 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveKind {
    Pp,
    Tcg,
    Tmg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    PpToTcg,
    TmgToTcg,
    TcmisToTmg,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Td,
    Fill,
    Pp,
    Tcmis,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    /// Elimination-order search on a colored graph.
    Tcg,
    /// Four-gamete test on a binary species matrix.
    Pp,
    /// Exhaustive search for an independent set choice.
    Tcmis,
    /// Number of edge-minimal proper triangulations.
    Count,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and write a witness when it is satisfiable.
    Solve {
        kind: SolveKind,
        input: PathBuf,
        /// Witness file (default: input path plus `.td` or `.phylo`).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the fill edges of the triangulation (tcg/tmg).
        #[arg(long)]
        fill: Option<PathBuf>,
        #[arg(long)]
        timeout_ms: Option<u64>,
        /// Disable memoization of search states.
        #[arg(long)]
        no_memo: bool,
    },
    /// Translate an instance and write the result with provenance annotations.
    Reduce {
        kind: ReduceKind,
        input: PathBuf,
        output: PathBuf,
    },
    /// Emit a zipper gadget of size `n` and skew `s`.
    Gadget {
        n: usize,
        s: usize,
        /// Also emit the triangulation with this offset.
        #[arg(long)]
        offset: Option<usize>,
        /// Graph file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fill file for `--offset`.
        #[arg(long)]
        fill: Option<PathBuf>,
        /// Write a DOT drawing here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a witness against an instance.
    Verify {
        kind: VerifyKind,
        instance: PathBuf,
        witness: PathBuf,
    },
    /// Run a brute-force reference search.
    Oracle { kind: OracleKind, input: PathBuf },
    /// Time solve_pp over random instances per (genes, species) cell.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
        genes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 20])]
        species: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        states: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Per-instance budget; exceeded cells are flagged as partial.
        #[arg(long, default_value_t = 10_000)]
        budget_ms: u64,
    },
    /// Render a graph, optionally with fill edges, as DOT on stdout.
    Dot {
        graph: PathBuf,
        #[arg(long)]
        fill: Option<PathBuf>,
    },
}

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn with_path<T>(path: &Path, r: chromatic_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| format!("{}: {e}", path.display()))
}

fn graph_stats(g: &MulticoloredGraph) -> Stats {
    Stats {
        n: g.num_vertices(),
        m: g.num_edges(),
        k: g.k(),
    }
}

fn default_seed() -> CliResult<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| format!("{SEED_VAR}={s} is not an unsigned integer")),
        Err(_) => Ok(0),
    }
}

fn sibling(input: &Path, ext: &str) -> PathBuf {
    let mut s = input.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

/// First reason `fill` does not turn `g` into a properly colored chordal graph.
fn fill_problem(g: &MulticoloredGraph, fill: &FillSet) -> Option<String> {
    if let Err(e) = fill.validate_against(g) {
        return Some(e.to_string());
    }
    let h = match g.with_fill(fill) {
        Ok(h) => h,
        Err(e) => return Some(e.to_string()),
    };
    if let Some((u, v)) = improper_edge(&h) {
        return Some(format!("edge {u}-{v} joins vertices sharing a color"));
    }
    if !is_chordal(&h) {
        return Some("graph plus fill is not chordal".into());
    }
    None
}

/// First reason `td` is not a chromatic decomposition of `g`.
fn td_problem(g: &MulticoloredGraph, td: &TreeDecomposition, mode: Multiplicity) -> Option<String> {
    match td_violation(g, td) {
        Err(e) => return Some(e.to_string()),
        Ok(Some(v)) => return Some(v.to_string()),
        Ok(None) => {}
    }
    multiplicity_violation(g, td, mode).map(|(b, c)| match mode {
        Multiplicity::AtMostOnce => format!("bag {b} holds color {c} more than once"),
        Multiplicity::ExactlyOnce => format!("bag {b} does not hold color {c} exactly once"),
    })
}

fn solve(
    kind: SolveKind,
    input: &Path,
    output: Option<PathBuf>,
    fill_out: Option<PathBuf>,
    opts: SolveOptions,
    seed: u64,
) -> CliResult<RunReport> {
    let src = read(input)?;
    let start = Instant::now();
    let mut report = match kind {
        SolveKind::Pp => {
            let inst = with_path(input, text::parse_pp(&src))?;
            let (g, _) = with_path(input, pp::reduce_pp_to_tcg(&inst))?;
            let stats = Stats {
                n: inst.num_species(),
                m: g.num_edges(),
                k: inst.num_genes(),
            };
            match with_path(input, solve_pp(&inst, &opts))? {
                Outcome::Solved(tree) => {
                    if let Some(v) = phylogeny_violation(&inst, &tree) {
                        let mut r = RunReport::new(Verdict::Error, stats, seed);
                        r.note("error", format!("witness failed its own check: {v}"));
                        r
                    } else {
                        let path = output.unwrap_or_else(|| sibling(input, ".phylo"));
                        write(&path, &text::write_phylogeny(&inst, &tree))?;
                        let mut r = RunReport::new(Verdict::Sat, stats, seed);
                        r.witness = Some(path.display().to_string());
                        r.note("tree_nodes", tree.nodes.len());
                        r
                    }
                }
                Outcome::Unsat => RunReport::new(Verdict::Unsat, stats, seed),
                Outcome::Timeout => RunReport::new(Verdict::Timeout, stats, seed),
            }
        }
        SolveKind::Tcg | SolveKind::Tmg => {
            let g = with_path(input, text::parse_graph(&src))?;
            let stats = graph_stats(&g);
            let (outcome, mode) = match kind {
                SolveKind::Tcg => {
                    if g.mode() != ColorMode::Colored {
                        return Err(format!("{}: `solve tcg` needs a `graph tcg` file", input.display()));
                    }
                    (with_path(input, solve_tcg(&g, &opts))?, Multiplicity::ExactlyOnce)
                }
                _ => (with_path(input, solve_tmg(&g, &opts))?, Multiplicity::AtMostOnce),
            };
            match outcome {
                Outcome::Solved(td) => {
                    let fill = treedecomp_to_triangulation(&g, &td);
                    let problem = td_problem(&g, &td, mode).or_else(|| fill_problem(&g, &fill));
                    if let Some(p) = problem {
                        let mut r = RunReport::new(Verdict::Error, stats, seed);
                        r.note("error", format!("witness failed its own check: {p}"));
                        r
                    } else {
                        let path = output.unwrap_or_else(|| sibling(input, ".td"));
                        write(&path, &text::write_td(&td))?;
                        if let Some(f) = &fill_out {
                            write(f, &text::write_fill(&fill))?;
                        }
                        let mut r = RunReport::new(Verdict::Sat, stats, seed);
                        r.witness = Some(path.display().to_string());
                        r.note("bags", td.num_bags());
                        r.note("fill_edges", fill.len());
                        let gadgets = with_path(input, text::parse_gadget_annotations(&src, &g))?;
                        if !gadgets.is_empty() {
                            let mut offsets = Vec::new();
                            for (id, emb) in &gadgets {
                                let d = read_offset(emb, |u, v| g.has_edge(u, v) || fill.contains(u, v));
                                offsets.push(match d {
                                    Ok(d) => json!({"gadget": id, "offset": d}),
                                    Err(e) => json!({"gadget": id, "error": e.to_string()}),
                                });
                            }
                            r.note("gadget_offsets", offsets);
                        }
                        r
                    }
                }
                Outcome::Unsat => RunReport::new(Verdict::Unsat, stats, seed),
                Outcome::Timeout => RunReport::new(Verdict::Timeout, stats, seed),
            }
        }
    };
    report.wall = start.elapsed();
    Ok(report)
}

fn reduce(kind: ReduceKind, input: &Path, output: &Path, seed: u64) -> CliResult<RunReport> {
    let src = read(input)?;
    let start = Instant::now();
    let (mut report, contents) = match kind {
        ReduceKind::PpToTcg => {
            let inst = with_path(input, text::parse_pp(&src))?;
            let (g, map) = with_path(input, pp::reduce_pp_to_tcg(&inst))?;
            let mut out = text::write_graph(&g);
            for (v, (gene, variant)) in map.variant_of.iter().enumerate() {
                out.push_str(&format!("annot variant {v} {gene} {variant}\n"));
            }
            let mut r = RunReport::new(Verdict::Ok, graph_stats(&g), seed);
            r.note("colors", g.num_colors());
            r.note("genes", inst.num_genes());
            (r, out)
        }
        ReduceKind::TmgToTcg => {
            let g = with_path(input, text::parse_graph(&src))?;
            let (h, expansion) = with_path(input, tmg::reduce_tmg_to_tcg(&g))?;
            let mut out = text::write_graph(&h);
            for (v, o) in expansion.origin.iter().enumerate() {
                out.push_str(&format!("annot origin {v} {o}\n"));
            }
            let mut r = RunReport::new(Verdict::Ok, graph_stats(&h), seed);
            r.note("input_vertices", g.num_vertices());
            r.note("vertex_bound_nk", g.num_vertices() * g.k());
            (r, out)
        }
        ReduceKind::TcmisToTmg => {
            let inst = with_path(input, text::parse_tcmis(&src))?;
            let (g, layout) = with_path(input, tcmis_reduction::reduce_tcmis_to_tmg(&inst))?;
            let mut out = text::write_graph(&g);
            for (id, z) in layout.gadgets.iter().enumerate() {
                out.push_str(&text::gadget_annotation(id, &z.embedding));
                out.push('\n');
                out.push_str(&format!("annot class {id} {} {}\n", z.node, z.color));
            }
            for (x, hub) in layout.hubs.iter().enumerate() {
                out.push_str(&format!("annot hub {x} {hub}\n"));
            }
            for merge in &layout.merges {
                out.push_str(&format!("annot merge {} {}\n", merge.edge, merge.vertex));
            }
            let mut r = RunReport::new(Verdict::Ok, graph_stats(&g), seed);
            r.note("colors_allocated", format!("{} (49k+1 with k = {})", layout.allocated_colors, inst.k()));
            r.note("colors_occupied", layout.occupied_colors(&g));
            r.note("gadgets", layout.gadgets.len());
            (r, out)
        }
    };
    write(output, &contents)?;
    report.witness = Some(output.display().to_string());
    report.wall = start.elapsed();
    Ok(report)
}

fn gadget(
    n: usize,
    s: usize,
    offset: Option<usize>,
    output: Option<PathBuf>,
    fill_out: Option<PathBuf>,
    dot: Option<PathBuf>,
    seed: u64,
) -> CliResult<(RunReport, Option<String>)> {
    let start = Instant::now();
    let gadget = build_zipper_gadget(n, s).map_err(|e| e.to_string())?;
    let fill = offset
        .map(|d| canonical_gadget_triangulation(&gadget, d))
        .transpose()
        .map_err(|e| e.to_string())?;
    let graph_text = format!(
        "{}{}\n",
        text::write_graph(&gadget.graph),
        text::gadget_annotation(0, &gadget.embedding)
    );
    let mut report = RunReport::new(Verdict::Ok, graph_stats(&gadget.graph), seed);
    let mut stdout = None;
    match &output {
        Some(p) => {
            write(p, &graph_text)?;
            report.witness = Some(p.display().to_string());
        }
        None => stdout = Some(graph_text),
    }
    if let Some(f) = &fill {
        if let Some(p) = fill_problem(&gadget.graph, f) {
            return Err(format!("canonical fill rejected: {p}"));
        }
        report.note("fill_edges", f.len());
        match &fill_out {
            Some(p) => write(p, &text::write_fill(f))?,
            None => {
                if let Some(s) = stdout.as_mut() {
                    s.push_str(&text::write_fill(f));
                }
            }
        }
    }
    if let Some(p) = &dot {
        write(p, &gadget_to_dot(&gadget.graph, &gadget.embedding, fill.as_ref()))?;
        report.note("dot", p.display().to_string());
    }
    report.wall = start.elapsed();
    Ok((report, stdout))
}

fn verify(kind: VerifyKind, instance: &Path, witness: &Path, seed: u64) -> CliResult<RunReport> {
    let (isrc, wsrc) = (read(instance)?, read(witness)?);
    let start = Instant::now();
    let (stats, problem) = match kind {
        VerifyKind::Td | VerifyKind::Fill => {
            let g = with_path(instance, text::parse_graph(&isrc))?;
            let problem = if let VerifyKind::Td = kind {
                let td = with_path(witness, text::parse_td(&wsrc))?;
                td_problem(&g, &td, Multiplicity::AtMostOnce)
            } else {
                let fill = with_path(witness, text::parse_fill(&wsrc))?;
                fill_problem(&g, &fill)
            };
            (graph_stats(&g), problem)
        }
        VerifyKind::Pp => {
            let inst = with_path(instance, text::parse_pp(&isrc))?;
            let tree = with_path(witness, text::parse_phylogeny(&inst, &wsrc))?;
            let stats = Stats {
                n: inst.num_species(),
                m: tree.edges.len(),
                k: inst.num_genes(),
            };
            (stats, phylogeny_violation(&inst, &tree).map(|v| v.to_string()))
        }
        VerifyKind::Tcmis => {
            let inst = with_path(instance, text::parse_tcmis(&isrc))?;
            let stats = Stats {
                n: inst.num_nodes(),
                m: inst.edges().len(),
                k: inst.k(),
            };
            let problem = match text::parse_solution(&inst, &wsrc) {
                Err(e) => Some(e.to_string()),
                Ok(sol) => first_conflict(&inst, &sol).map(|e| {
                    let (a, b) = inst.edges()[e - 1];
                    format!(
                        "edge {e} has both ends chosen: ({}, {}, {}) and ({}, {}, {})",
                        a.node, a.color, a.index, b.node, b.color, b.index
                    )
                }),
            };
            (stats, problem)
        }
    };
    let mut report = RunReport::new(if problem.is_some() { Verdict::Fail } else { Verdict::Ok }, stats, seed);
    if let Some(p) = problem {
        report.note("violation", p);
    }
    report.wall = start.elapsed();
    Ok(report)
}

fn oracle(kind: OracleKind, input: &Path, seed: u64) -> CliResult<(RunReport, Option<String>)> {
    let src = read(input)?;
    let start = Instant::now();
    let sat = |b: bool| if b { Verdict::Sat } else { Verdict::Unsat };
    let (mut report, body) = match kind {
        OracleKind::Tcg | OracleKind::Count => {
            let g = with_path(input, text::parse_graph(&src))?;
            if let OracleKind::Count = kind {
                let count = with_path(input, exhaustive_triangulation_count(&g, None))?;
                let mut r = RunReport::new(sat(count > 0), graph_stats(&g), seed);
                r.note("minimal_triangulations", count);
                (r, None)
            } else {
                let fill = with_path(input, brute_force_tcg_elimination(&g))?;
                let r = RunReport::new(sat(fill.is_some()), graph_stats(&g), seed);
                (r, fill.map(|f| text::write_fill(&f)))
            }
        }
        OracleKind::Pp => {
            let inst = with_path(input, text::parse_pp(&src))?;
            let ok = with_path(input, four_gamete_pp(&inst))?;
            let stats = Stats {
                n: inst.num_species(),
                m: 0,
                k: inst.num_genes(),
            };
            (RunReport::new(sat(ok), stats, seed), None)
        }
        OracleKind::Tcmis => {
            let inst = with_path(input, text::parse_tcmis(&src))?;
            let sol = with_path(input, brute_force_tcmis(&inst))?;
            let stats = Stats {
                n: inst.num_nodes(),
                m: inst.edges().len(),
                k: inst.k(),
            };
            (RunReport::new(sat(sol.is_some()), stats, seed), sol.map(|s| text::write_solution(&s)))
        }
    };
    report.wall = start.elapsed();
    Ok((report, body))
}

fn run(cli: Cli) -> CliResult<(RunReport, Option<String>)> {
    let seed = match cli.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    match cli.command {
        Command::Solve {
            kind,
            input,
            output,
            fill,
            timeout_ms,
            no_memo,
        } => {
            let mut opts = match timeout_ms {
                Some(ms) => SolveOptions::with_timeout(Duration::from_millis(ms)),
                None => SolveOptions::default(),
            };
            opts.memoize = !no_memo;
            Ok((solve(kind, &input, output, fill, opts, seed)?, None))
        }
        Command::Reduce { kind, input, output } => Ok((reduce(kind, &input, &output, seed)?, None)),
        Command::Gadget {
            n,
            s,
            offset,
            output,
            fill,
            dot,
        } => gadget(n, s, offset, output, fill, dot, seed),
        Command::Verify {
            kind,
            instance,
            witness,
        } => Ok((verify(kind, &instance, &witness, seed)?, None)),
        Command::Oracle { kind, input } => oracle(kind, &input, seed),
        Command::Bench {
            genes,
            species,
            states,
            reps,
            budget_ms,
        } => {
            let start = Instant::now();
            let cfg = BenchConfig {
                genes,
                species,
                states,
                reps,
                seed,
                budget: Some(Duration::from_millis(budget_ms)),
            };
            let table = bench_pp(&cfg);
            let mut r = RunReport::new(Verdict::Ok, Stats::default(), seed);
            r.note("partial", table.is_partial());
            let cells: Vec<_> = table
                .cells
                .iter()
                .map(|c| {
                    json!({
                        "genes": c.genes,
                        "species": c.species,
                        "median_us": c.median.as_micros() as u64,
                        "sat": c.solved,
                        "unsat": c.unsat,
                        "timeout": c.timeouts,
                        "instances": format!("{:016x}", c.instances),
                    })
                })
                .collect();
            r.note("cells", cells);
            r.wall = start.elapsed();
            Ok((r, Some(format!("{}\n{}", table.markdown(), table.rows()))))
        }
        Command::Dot { graph, fill } => {
            let src = read(&graph)?;
            let g = with_path(&graph, text::parse_graph(&src))?;
            let f = match &fill {
                Some(p) => Some(with_path(p, text::parse_fill(&read(p)?))?),
                None => None,
            };
            let mut r = RunReport::new(Verdict::Ok, graph_stats(&g), seed);
            r.note("format", "dot");
            Ok((r, Some(to_dot(&g, f.as_ref()))))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (quiet, as_json) = (cli.quiet, cli.json);
    match run(cli) {
        Ok((mut report, body)) => {
            if as_json {
                if let Some(b) = body {
                    report.note("output", b);
                }
                println!("{}", report.to_json());
            } else if let Some(b) = body {
                // the body owns stdout; the report moves to stderr
                print!("{b}");
                if !quiet {
                    eprint!("{}", report.to_text());
                }
            } else if !quiet {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.verdict.exit_code() as u8)
        }
        Err(e) => {
            if as_json {
                println!("{}", json!({"verdict": "ERROR", "error": e}));
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
