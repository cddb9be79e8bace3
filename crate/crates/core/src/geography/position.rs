use std::sync::Arc;

use super::{reverse_topological, GeoGraph, VertexId};
use crate::error::{Error, Result};
use crate::game::{nimber_of, Budget, Game, Nimber, PositionKey};

#[derive(Debug)]
struct Indexed {
    ids: Vec<VertexId>,
    /// (target, edge index) per vertex.
    out: Vec<Vec<(usize, usize)>>,
    edge_count: usize,
    acyclic: bool,
}

impl Indexed {
    fn new(g: &GeoGraph) -> Self {
        let (ids, dense) = g.dense();
        let acyclic = reverse_topological(&dense).is_some();
        let mut next_edge = 0;
        let out = dense
            .into_iter()
            .map(|targets| {
                targets
                    .into_iter()
                    .map(|t| {
                        next_edge += 1;
                        (t, next_edge - 1)
                    })
                    .collect()
            })
            .collect();
        Indexed {
            ids,
            out,
            edge_count: next_edge,
            acyclic,
        }
    }

    fn index_of(&self, v: VertexId) -> Result<usize> {
        self.ids
            .binary_search(&v)
            .map_err(|_| Error::InvalidGraph(format!("token {v} is not a vertex")))
    }
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn with_bit(set: &[u64], i: usize) -> Vec<u64> {
    let mut s = set.to_vec();
    s[i / 64] |= 1 << (i % 64);
    s
}

fn state_key(tag: u8, token: usize, removed: &[u64]) -> PositionKey {
    let words = std::iter::once(token as u32)
        .chain(removed.iter().flat_map(|&w| [w as u32, (w >> 32) as u32]));
    PositionKey::from_words(tag, words)
}

/// Compact vertex-Geography position over a shared, indexed graph.
///
/// On an acyclic graph deleted vertices can never be reached again, so the
/// deletion set is not tracked and the token alone identifies the position.
#[derive(Clone, Debug)]
pub struct GeoPosition {
    graph: Arc<Indexed>,
    removed: Vec<u64>,
    token: usize,
}

impl GeoPosition {
    pub fn new(g: &GeoGraph) -> Self {
        let graph = Indexed::new(g);
        let token = graph
            .index_of(g.token())
            .expect("GeoGraph token is a vertex");
        let words = if graph.acyclic {
            0
        } else {
            graph.ids.len().div_ceil(64)
        };
        GeoPosition {
            graph: Arc::new(graph),
            removed: vec![0; words],
            token,
        }
    }

    pub fn token(&self) -> VertexId {
        self.graph.ids[self.token]
    }

    pub fn is_acyclic(&self) -> bool {
        self.graph.acyclic
    }
}

impl Game for GeoPosition {
    fn options(&self) -> Vec<Self> {
        let g = &self.graph;
        if g.acyclic {
            return g.out[self.token]
                .iter()
                .map(|&(t, _)| GeoPosition {
                    graph: Arc::clone(g),
                    removed: Vec::new(),
                    token: t,
                })
                .collect();
        }
        let removed = with_bit(&self.removed, self.token);
        g.out[self.token]
            .iter()
            .filter(|&&(t, _)| !bit(&removed, t))
            .map(|&(t, _)| GeoPosition {
                graph: Arc::clone(g),
                removed: removed.clone(),
                token: t,
            })
            .collect()
    }

    fn key(&self) -> PositionKey {
        state_key(b'g', self.token, &self.removed)
    }

    fn size(&self) -> usize {
        self.graph.ids.len()
    }
}

/// Compact edge-Geography position: the set of used edges plus the token.
#[derive(Clone, Debug)]
pub struct EdgeGeoPosition {
    graph: Arc<Indexed>,
    used: Vec<u64>,
    token: usize,
}

impl EdgeGeoPosition {
    pub fn new(g: &GeoGraph) -> Self {
        let graph = Indexed::new(g);
        let token = graph
            .index_of(g.token())
            .expect("GeoGraph token is a vertex");
        let words = if graph.acyclic {
            0
        } else {
            graph.edge_count.div_ceil(64)
        };
        EdgeGeoPosition {
            graph: Arc::new(graph),
            used: vec![0; words],
            token,
        }
    }

    pub fn token(&self) -> VertexId {
        self.graph.ids[self.token]
    }
}

impl Game for EdgeGeoPosition {
    fn options(&self) -> Vec<Self> {
        let g = &self.graph;
        g.out[self.token]
            .iter()
            .filter(|&&(_, e)| g.acyclic || !bit(&self.used, e))
            .map(|&(t, e)| EdgeGeoPosition {
                graph: Arc::clone(g),
                used: if g.acyclic {
                    Vec::new()
                } else {
                    with_bit(&self.used, e)
                },
                token: t,
            })
            .collect()
    }

    fn key(&self) -> PositionKey {
        state_key(b'e', self.token, &self.used)
    }

    fn size(&self) -> usize {
        self.graph.edge_count
    }
}

/// Vertex-Geography value of `g` at its token.
pub fn geography_nimber(g: &GeoGraph, budget: &Budget) -> Result<Nimber> {
    nimber_of(&GeoPosition::new(g), budget)
}

pub fn edge_geography_nimber(g: &GeoGraph, budget: &Budget) -> Result<Nimber> {
    nimber_of(&EdgeGeoPosition::new(g), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geography::EdgeGeography;
    use proptest::prelude::*;

    fn arb_graph(max_n: u32) -> impl Strategy<Value = GeoGraph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(u32, u32)> = (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            let len = pairs.len();
            (proptest::collection::vec(any::<bool>(), len), 0..n).prop_map(move |(mask, token)| {
                let edges = pairs.iter().zip(&mask).filter(|(_, &m)| m).map(|(&e, _)| e);
                GeoGraph::new(0..n, edges, token).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn compact_positions_match_snapshots(g in arb_graph(5)) {
            let budget = Budget::default();
            prop_assert_eq!(geography_nimber(&g, &budget).unwrap(), nimber_of(&g, &budget).unwrap());
            prop_assert_eq!(
                edge_geography_nimber(&g, &budget).unwrap(),
                nimber_of(&EdgeGeography(g.clone()), &budget).unwrap()
            );
        }
    }

    #[test]
    fn large_cycle_uses_wide_bitsets() {
        let n = 130u32;
        let g = GeoGraph::new(0..n, (0..n).map(|i| (i, (i + 1) % n)), 0).unwrap();
        // Forced walk around the ring: 129 moves, then stuck.
        assert_eq!(
            geography_nimber(&g, &Budget::default()).unwrap(),
            Nimber::STAR
        );
        // Edge variant: 130 moves returns to 0 and every edge is used.
        assert_eq!(
            edge_geography_nimber(&g, &Budget::default()).unwrap(),
            Nimber::ZERO
        );
    }
}
