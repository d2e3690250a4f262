//! Data-parallel sweeps. With the `parallel` feature the work runs on the
//! rayon pool; without it, on the calling thread. Results keep input order
//! either way.

use std::time::{Duration, Instant};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::random::{random_pp, rng_for};
use crate::solver::{solve_pp, Outcome, SolveOptions};

/// Applies `f` to every item, in parallel when the feature is enabled.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential version of [`map`], for comparison.
pub fn map_sequential<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Number of items for which `pred` fails, with the first few failing indices.
pub fn failures<T, F>(items: &[T], pred: F) -> (usize, Vec<usize>)
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    let ok = map(items, pred);
    let bad: Vec<usize> = ok.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i).collect();
    (bad.len(), bad.into_iter().take(5).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchCell {
    pub genes: usize,
    pub species: usize,
    pub median: Duration,
    pub solved: usize,
    pub unsat: usize,
    pub timeouts: usize,
    /// Fingerprint of the generated instances, equal across runs with one seed.
    pub instances: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchTable {
    pub seed: u64,
    pub reps: usize,
    pub cells: Vec<BenchCell>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub genes: Vec<usize>,
    pub species: Vec<usize>,
    pub states: usize,
    pub reps: usize,
    pub seed: u64,
    /// Per-instance budget; exceeded instances count as timeouts.
    pub budget: Option<Duration>,
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    if xs.is_empty() {
        return Duration::ZERO;
    }
    xs[xs.len() / 2]
}

/// Median `solve_pp` time over `reps` random instances per (genes, species)
/// cell. Cells run in parallel; instances within a cell run in order.
pub fn bench_pp(cfg: &BenchConfig) -> BenchTable {
    let keys: Vec<(usize, usize)> = cfg
        .genes
        .iter()
        .flat_map(|&k| cfg.species.iter().map(move |&n| (k, n)))
        .collect();
    let cells = map(&keys, |&(genes, species)| {
        let mut times = Vec::with_capacity(cfg.reps);
        let (mut solved, mut unsat, mut timeouts) = (0, 0, 0);
        let mut fp: u64 = 0xcbf2_9ce4_8422_2325;
        for rep in 0..cfg.reps {
            let key = ((genes as u64) << 40) ^ ((species as u64) << 20) ^ rep as u64;
            let inst = random_pp(&mut rng_for(cfg.seed, key), species, genes, cfg.states);
            for s in inst.species() {
                for &x in &s.variants {
                    fp = (fp ^ x as u64).wrapping_mul(0x100_0000_01b3);
                }
            }
            let opts = SolveOptions {
                memoize: true,
                deadline: cfg.budget.map(|b| Instant::now() + b),
            };
            let start = Instant::now();
            match solve_pp(&inst, &opts).expect("generated instances are valid") {
                Outcome::Solved(_) => solved += 1,
                Outcome::Unsat => unsat += 1,
                Outcome::Timeout => timeouts += 1,
            }
            times.push(start.elapsed());
        }
        BenchCell {
            genes,
            species,
            median: median(times),
            solved,
            unsat,
            timeouts,
            instances: fp,
        }
    });
    BenchTable {
        seed: cfg.seed,
        reps: cfg.reps,
        cells,
    }
}

impl BenchTable {
    pub fn is_partial(&self) -> bool {
        self.cells.iter().any(|c| c.timeouts > 0)
    }

    pub fn markdown(&self) -> String {
        let mut out = String::from("| genes | species | median ms | sat | unsat | timeout |\n|---|---|---|---|---|---|\n");
        for c in &self.cells {
            out.push_str(&format!(
                "| {} | {} | {:.3} | {} | {} | {} |\n",
                c.genes,
                c.species,
                c.median.as_secs_f64() * 1e3,
                c.solved,
                c.unsat,
                c.timeouts
            ));
        }
        out
    }

    /// One whitespace-separated row per cell.
    pub fn rows(&self) -> String {
        self.cells
            .iter()
            .map(|c| {
                format!(
                    "cell genes={} species={} median_us={} sat={} unsat={} timeout={} instances={:016x}\n",
                    c.genes,
                    c.species,
                    c.median.as_micros(),
                    c.solved,
                    c.unsat,
                    c.timeouts,
                    c.instances
                )
            })
            .collect()
    }
}
