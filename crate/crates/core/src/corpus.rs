//! Seeded random instances for `gen`, `verify` and the acceptance corpus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::files::{GameFile, GameSpec};
use crate::rng::SplitMix64;

/// `piles` Nim piles with 0 to `max_stones` stones each.
pub fn gen_nim(rng: &mut SplitMix64, piles: usize, max_stones: u32) -> GameFile {
    let piles = (0..piles)
        .map(|_| rng.below(max_stones as u64 + 1) as u32)
        .collect();
    GameFile::nim(piles)
}

/// Node Kayles on vertices `0..n`, each pair joined with probability `p`.
pub fn gen_kayles(rng: &mut SplitMix64, n: u32, p: f64) -> Result<GameFile> {
    check_probability(p)?;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.chance(p) {
                edges.push([u, v]);
            }
        }
    }
    Ok(GameSpec::Kayles {
        vertices: (0..n).collect(),
        edges,
    }
    .into())
}

/// A connected game DAG on `n` nodes rooted at node 0. Node `j` gets a random
/// parent `i < j`, and every other pair `i < j` is joined with probability
/// `p`. Edges always point to the larger id, so the graph is acyclic.
pub fn gen_dag(rng: &mut SplitMix64, n: usize, p: f64) -> Result<GameFile> {
    check_probability(p)?;
    if n == 0 {
        return Err(Error::Invalid("a DAG needs at least one node".into()));
    }
    let mut nodes = vec![Vec::new(); n];
    for j in 1..n {
        let parent = rng.below(j as u64) as usize;
        for (i, kids) in nodes.iter_mut().enumerate().take(j) {
            if i == parent || rng.chance(p) {
                kids.push(j);
            }
        }
    }
    Ok(GameSpec::Dag { nodes, start: 0 }.into())
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("probability {p} is outside [0, 1]")))
    }
}

/// Size caps for the mixed corpus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusCaps {
    pub nim_piles: usize,
    pub nim_stones: u32,
    pub kayles_vertices: u32,
    pub dag_nodes: usize,
    pub dag_extra_edges: f64,
}

impl Default for CorpusCaps {
    fn default() -> Self {
        CorpusCaps {
            nim_piles: 4,
            nim_stones: 4,
            kayles_vertices: 7,
            dag_nodes: 60,
            dag_extra_edges: 0.05,
        }
    }
}

/// `count` instances cycling Nim, Kayles, DAG. Each carries its own seed
/// (drawn from the master seed) and is generated from that seed alone, so a
/// single instance can be regenerated without the rest of the corpus.
pub fn corpus(count: usize, seed: u64, caps: &CorpusCaps) -> Result<Vec<GameFile>> {
    let mut master = SplitMix64::new(seed);
    (0..count)
        .map(|i| {
            let instance_seed = master.next_u64();
            let mut rng = SplitMix64::new(instance_seed);
            let (kind, file) = match i % 3 {
                0 => {
                    let piles = rng.range(1, caps.nim_piles.max(1) as u64) as usize;
                    ("nim", gen_nim(&mut rng, piles, caps.nim_stones))
                }
                1 => {
                    let n = rng.range(1, caps.kayles_vertices.max(1) as u64) as u32;
                    let p = 0.2 + 0.5 * rng.unit();
                    ("kayles", gen_kayles(&mut rng, n, p)?)
                }
                _ => {
                    let n = rng.range(1, caps.dag_nodes.max(1) as u64) as usize;
                    ("dag", gen_dag(&mut rng, n, caps.dag_extra_edges)?)
                }
            };
            Ok(file
                .named(format!("{kind}-{i:04}"))
                .with_seed(instance_seed))
        })
        .collect()
}
