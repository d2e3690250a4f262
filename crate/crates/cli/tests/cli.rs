use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn chromatic(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromatic"))
        .current_dir(dir)
        .env_remove("CHROMATIC_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = chromatic(dir, &full);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(text.lines().last().unwrap_or("null")).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

const C4_ALT: &str = "graph tcg 4 2\nvertex 0 0\nvertex 1 1\nvertex 2 0\nvertex 3 1\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 0\n";
const TINY_TCMIS: &str = "tcmis 2 2\ntreeedge 0 1\nclass 0 0 2\nclass 0 1 2\nclass 1 0 2\nedge 0 0 0 0 1 1\nedge 0 0 1 1 0 0\n";

#[test]
fn alternating_square_is_unsat() {
    let dir = TempDir::new().unwrap();
    file(&dir, "c4-alt.cg", C4_ALT);
    let (code, r) = json(dir.path(), &["solve", "tcg", "c4-alt.cg"]);
    assert_eq!(code, 20);
    assert_eq!(r["verdict"], "UNSAT");
    assert!(!dir.path().join("c4-alt.cg.td").exists());
}

#[test]
fn one_species_phylogeny_is_sat() {
    let dir = TempDir::new().unwrap();
    file(&dir, "one.pp", "pp 1 3\nspecies lone 0 2 1\n");
    let (code, r) = json(dir.path(), &["solve", "pp", "one.pp", "-o", "tree.phylo"]);
    assert_eq!(code, 10);
    assert_eq!(r["witness"], "tree.phylo");
    let out = chromatic(dir.path(), &["verify", "pp", "one.pp", "tree.phylo"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solved_gadget_reads_back_an_offset() {
    let dir = TempDir::new().unwrap();
    assert_eq!(chromatic(dir.path(), &["gadget", "2", "1", "-o", "gadget-2-1.cg"]).status.code(), Some(0));
    let (code, r) = json(dir.path(), &["solve", "tmg", "gadget-2-1.cg", "--fill", "g.fill"]);
    assert_eq!(code, 10);
    let offset = r["gadget_offsets"][0]["offset"].as_u64().unwrap();
    assert!(offset <= 1);
    let out = chromatic(dir.path(), &["verify", "fill", "gadget-2-1.cg", "g.fill"]);
    assert_eq!(out.status.code(), Some(0));
    let out = chromatic(dir.path(), &["verify", "td", "gadget-2-1.cg", "gadget-2-1.cg.td"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gadget_outputs() {
    let dir = TempDir::new().unwrap();
    let out = chromatic(dir.path(), &["--quiet", "gadget", "1", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph tmg 9 7\n"));
    assert!(text.contains("annot gadget 0 n=1 s=0 head=0 tail=4 p=1,2,3 q=5,6,7,8"));

    let out = chromatic(dir.path(), &["gadget", "2", "1", "--offset", "0", "--dot", "fig.dot", "-o", "g.cg"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(dir.path().join("fig.dot")).unwrap();
    assert_eq!(dot.matches("style=dashed").count(), 18);

    chromatic(dir.path(), &["gadget", "3", "2", "--offset", "2", "-o", "g32.cg", "--fill", "g32.fill"]);
    let out = chromatic(dir.path(), &["verify", "fill", "g32.cg", "g32.fill"]);
    assert_eq!(out.status.code(), Some(0));

    let out = chromatic(dir.path(), &["gadget", "1", "1", "--offset", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reductions_report_their_accounting() {
    let dir = TempDir::new().unwrap();
    file(&dir, "tiny.tcmis", TINY_TCMIS);
    let (code, r) = json(dir.path(), &["reduce", "tcmis-to-tmg", "tiny.tcmis", "out.cg"]);
    assert_eq!(code, 0);
    assert!(r["colors_allocated"].as_str().unwrap().starts_with("99 "));
    let reduced = std::fs::read_to_string(dir.path().join("out.cg")).unwrap();
    assert_eq!(reduced.matches("annot gadget").count(), 3);

    file(&dir, "m.cg", "graph tmg 3 3\nvertex 0 0 1\nvertex 1 2\nvertex 2 0 2\nedge 0 1\n");
    let (code, r) = json(dir.path(), &["reduce", "tmg-to-tcg", "m.cg", "e.cg"]);
    assert_eq!(code, 0);
    assert!(r["n"].as_u64().unwrap() <= r["vertex_bound_nk"].as_u64().unwrap());

    file(&dir, "x.pp", "pp 3 2\nspecies a 0 0\nspecies b 0 1\nspecies c 1 0\n");
    let (code, r) = json(dir.path(), &["reduce", "pp-to-tcg", "x.pp", "x.cg"]);
    assert_eq!(code, 0);
    assert_eq!(r["colors"], r["genes"]);
}

#[test]
fn verify_names_the_first_violation() {
    let dir = TempDir::new().unwrap();
    file(&dir, "path.cg", "graph tcg 3 3\nvertex 0 0\nvertex 1 1\nvertex 2 2\nedge 0 1\nedge 1 2\n");
    file(&dir, "short.td", "td 2 3\nbag 0 0 1\nbag 1 2\ntedge 0 1\n");
    let (code, r) = json(dir.path(), &["verify", "td", "path.cg", "short.td"]);
    assert_eq!(code, 2);
    assert_eq!(r["violation"], "edge 1-2 is in no bag");

    file(&dir, "x.pp", "pp 3 2\nspecies a 0 0\nspecies b 1 1\nspecies c 0 1\n");
    file(&dir, "bad.phylo", "phylo 3 2\nnode 0 0 0\nnode 1 1 1\nnode 2 0 1\npedge 0 1\npedge 1 2\nleaf a 0\nleaf b 1\nleaf c 2\n");
    let (code, r) = json(dir.path(), &["verify", "pp", "x.pp", "bad.phylo"]);
    assert_eq!(code, 2);
    assert_eq!(r["violation"], "nodes with variant 0 of gene 0 are disconnected");
}

#[test]
fn oracle_and_solution_verification() {
    let dir = TempDir::new().unwrap();
    file(&dir, "tiny.tcmis", TINY_TCMIS);
    let out = chromatic(dir.path(), &["--quiet", "oracle", "tcmis", "tiny.tcmis"]);
    assert_eq!(out.status.code(), Some(10));
    std::fs::write(dir.path().join("tiny.sol"), &out.stdout).unwrap();
    assert_eq!(chromatic(dir.path(), &["verify", "tcmis", "tiny.tcmis", "tiny.sol"]).status.code(), Some(0));
    file(&dir, "bad.sol", "choose 0 0 0\nchoose 0 1 1\nchoose 1 0 0\n");
    assert_eq!(chromatic(dir.path(), &["verify", "tcmis", "tiny.tcmis", "bad.sol"]).status.code(), Some(2));

    file(&dir, "c4-alt.cg", C4_ALT);
    assert_eq!(chromatic(dir.path(), &["oracle", "tcg", "c4-alt.cg"]).status.code(), Some(20));
}

#[test]
fn expired_budget_times_out() {
    let dir = TempDir::new().unwrap();
    chromatic(dir.path(), &["gadget", "2", "2", "-o", "g.cg"]);
    let (code, r) = json(dir.path(), &["solve", "tmg", "g.cg", "--timeout-ms", "0"]);
    assert_eq!(code, 30);
    assert_eq!(r["verdict"], "TIMEOUT");
}

#[test]
fn parse_errors_exit_one_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    file(&dir, "dup.cg", "graph tcg 2 1\n# two lines for one vertex\nvertex 0 0\nvertex 0 0\n");
    let out = chromatic(dir.path(), &["solve", "tcg", "dup.cg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 4"));
    file(&dir, "m.cg", "graph tmg 1 1\nvertex 0 0\n");
    assert_eq!(chromatic(dir.path(), &["solve", "tcg", "m.cg"]).status.code(), Some(1));
}

#[test]
fn bench_streams_follow_the_seed() {
    let dir = TempDir::new().unwrap();
    let run = |seed: &str| {
        let (code, r) = json(dir.path(), &["--seed", seed, "bench", "--genes", "2,3", "--species", "10,20", "--reps", "3"]);
        assert_eq!(code, 0);
        let cells = r["cells"].as_array().unwrap().clone();
        assert_eq!(cells.len(), 4);
        cells.iter().map(|c| c["instances"].as_str().unwrap().to_string()).collect::<Vec<_>>()
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));

    let out = Command::new(env!("CARGO_BIN_EXE_chromatic"))
        .env("CHROMATIC_SEED", "5")
        .args(["--json", "bench", "--genes", "2", "--species", "10", "--reps", "1"])
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["seed"], 5);
}
