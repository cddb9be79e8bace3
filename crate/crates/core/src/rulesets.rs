//! Concrete rulesets: Nim (and `*k` as a single pile), Node Kayles, and
//! explicit DAG games.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{Game, GameDag, PositionKey};

/// Nim: remove one or more stones from a single pile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NimPosition {
    piles: Vec<u32>,
}

impl NimPosition {
    pub fn new(piles: Vec<u32>) -> Self {
        NimPosition { piles }
    }

    pub fn piles(&self) -> &[u32] {
        &self.piles
    }

    /// Piles sorted descending with empty piles dropped.
    pub fn canonical_piles(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.piles.iter().copied().filter(|&s| s > 0).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }
}

/// Every position reached by lowering exactly one pile to a smaller count.
pub fn nim_options(p: &NimPosition) -> Vec<NimPosition> {
    let mut out = Vec::new();
    for (i, &stones) in p.piles.iter().enumerate() {
        for smaller in (0..stones).rev() {
            let mut piles = p.piles.clone();
            piles[i] = smaller;
            out.push(NimPosition { piles });
        }
    }
    out
}

impl Game for NimPosition {
    fn options(&self) -> Vec<Self> {
        nim_options(self)
    }

    fn is_terminal(&self) -> bool {
        self.piles.iter().all(|&s| s == 0)
    }

    fn key(&self) -> PositionKey {
        PositionKey::from_words(b'N', self.canonical_piles())
    }

    /// Total stones; each move removes at least one.
    fn size(&self) -> usize {
        self.piles.iter().map(|&s| s as usize).sum()
    }
}

/// `*k`, represented as single-pile Nim.
pub fn star_game(k: u32) -> NimPosition {
    NimPosition::new(vec![k])
}

/// Node Kayles on an undirected simple graph: pick a vertex, delete it and its
/// neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaylesPosition {
    vertices: BTreeSet<u32>,
    /// Stored with the smaller endpoint first.
    edges: BTreeSet<(u32, u32)>,
}

impl KaylesPosition {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = u32>,
        E: IntoIterator<Item = (u32, u32)>,
    {
        let vertices: BTreeSet<u32> = vertices.into_iter().collect();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) leaves the vertex set"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(KaylesPosition {
            vertices,
            edges: set,
        })
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: u32) -> Self {
        KaylesPosition::new(0..n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn vertices(&self) -> &BTreeSet<u32> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    fn closed_neighbourhood(&self, v: u32) -> BTreeSet<u32> {
        let mut hood: BTreeSet<u32> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        hood.insert(v);
        hood
    }
}

/// One option per vertex: the graph minus that vertex's closed neighbourhood.
pub fn kayles_options(p: &KaylesPosition) -> Vec<KaylesPosition> {
    p.vertices
        .iter()
        .map(|&v| {
            let removed = p.closed_neighbourhood(v);
            KaylesPosition {
                vertices: p.vertices.difference(&removed).copied().collect(),
                edges: p
                    .edges
                    .iter()
                    .filter(|(a, b)| !removed.contains(a) && !removed.contains(b))
                    .copied()
                    .collect(),
            }
        })
        .collect()
}

impl Game for KaylesPosition {
    fn options(&self) -> Vec<Self> {
        kayles_options(self)
    }

    fn is_terminal(&self) -> bool {
        self.vertices.is_empty()
    }

    fn key(&self) -> PositionKey {
        let words = std::iter::once(self.vertices.len() as u32)
            .chain(self.vertices.iter().copied())
            .chain(self.edges.iter().flat_map(|&(a, b)| [a, b]));
        PositionKey::from_words(b'K', words)
    }

    fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// A token on a node of an explicit game DAG; moves follow child edges.
#[derive(Clone, Debug)]
pub struct DagPosition {
    dag: Arc<GameDag>,
    current: usize,
}

impl DagPosition {
    pub fn new(dag: Arc<GameDag>, current: usize) -> Result<Self> {
        if current >= dag.len() {
            return Err(Error::UnknownNode(current));
        }
        Ok(DagPosition { dag, current })
    }

    pub fn at_start(dag: Arc<GameDag>) -> Self {
        DagPosition { dag, current: 0 }
    }

    pub fn dag(&self) -> &Arc<GameDag> {
        &self.dag
    }

    pub fn current(&self) -> usize {
        self.current
    }
}

impl PartialEq for DagPosition {
    fn eq(&self, other: &Self) -> bool {
        self.current == other.current
            && (Arc::ptr_eq(&self.dag, &other.dag) || self.dag == other.dag)
    }
}

pub fn dag_options(p: &DagPosition) -> Vec<DagPosition> {
    p.dag
        .children(p.current)
        .iter()
        .map(|&c| DagPosition {
            dag: Arc::clone(&p.dag),
            current: c,
        })
        .collect()
}

impl Game for DagPosition {
    fn options(&self) -> Vec<Self> {
        dag_options(self)
    }

    fn is_terminal(&self) -> bool {
        self.dag.children(self.current).is_empty()
    }

    fn key(&self) -> PositionKey {
        PositionKey::from_words(b'X', [self.current as u32])
    }

    fn size(&self) -> usize {
        self.dag.len()
    }
}
