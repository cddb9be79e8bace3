//! Generalized Geography: a token on a directed graph. A move slides the token
//! along an out-edge and deletes the vertex it left (or, in the edge variant,
//! the edge it used).

mod export;
mod position;
mod sweep;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::game::{Game, GameDag, Nimber, PositionKey};

pub use position::{edge_geography_nimber, geography_nimber, EdgeGeoPosition, GeoPosition};
pub use sweep::{max_nimber_sweep, DegreeNotion, SweepReport, SweepResult};

pub type VertexId = u32;

/// A Generalized Geography position: directed graph, token, optional role tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
    token: VertexId,
    labels: BTreeMap<VertexId, String>,
}

impl GeoGraph {
    /// Validates the token, edge endpoints, self-loops and duplicate edges.
    pub fn new<V, E>(vertices: V, edges: E, token: VertexId) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        if !vertices.contains(&token) {
            return Err(Error::InvalidGraph(format!(
                "token {token} is not a vertex"
            )));
        }
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
            if !set.insert((u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(GeoGraph {
            vertices,
            edges: set,
            token,
            labels: BTreeMap::new(),
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<VertexId, String>) -> Result<Self> {
        if let Some(v) = labels.keys().find(|v| !self.vertices.contains(v)) {
            return Err(Error::InvalidGraph(format!("label on unknown vertex {v}")));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Same graph with the token moved to `token`.
    pub fn with_token(&self, token: VertexId) -> Result<Self> {
        if !self.vertices.contains(&token) {
            return Err(Error::InvalidGraph(format!(
                "token {token} is not a vertex"
            )));
        }
        let mut g = self.clone();
        g.token = token;
        Ok(g)
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }

    pub fn token(&self) -> VertexId {
        self.token
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, String> {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    /// First vertex carrying `tag`.
    pub fn vertex_with_label(&self, tag: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .find(|(_, t)| t.as_str() == tag)
            .map(|(&v, _)| v)
    }

    pub fn out_neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.edges
            .range((v, 0)..=(v, VertexId::MAX))
            .map(|&(_, w)| w)
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_neighbours(v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(_, w)| w == v).count()
    }

    /// Dense adjacency over vertices in ascending id order.
    pub(crate) fn dense(&self) -> (Vec<VertexId>, Vec<Vec<usize>>) {
        let ids: Vec<VertexId> = self.vertices.iter().copied().collect();
        let index: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out = vec![Vec::new(); ids.len()];
        for &(u, v) in &self.edges {
            out[index[&u]].push(index[&v]);
        }
        (ids, out)
    }

    pub fn is_acyclic(&self) -> bool {
        let (_, out) = self.dense();
        reverse_topological(&out).is_some()
    }

    /// Grundy value of the static game "move the token along an edge" at every
    /// vertex. On an acyclic graph this equals the Geography value, since play
    /// can never return to a deleted vertex.
    pub fn static_values(&self) -> Result<BTreeMap<VertexId, Nimber>> {
        let (ids, out) = self.dense();
        let order = reverse_topological(&out).ok_or(Error::Cyclic)?;
        let mut values = vec![Nimber::ZERO; ids.len()];
        for v in order {
            values[v] = crate::game::mex(out[v].iter().map(|&w| values[w]));
        }
        Ok(ids.into_iter().zip(values).collect())
    }
}

/// Children-before-parents order, or `None` on a cycle.
pub(crate) fn reverse_topological(out: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = out.len();
    let mut indegree = vec![0usize; n];
    for kids in out {
        for &w in kids {
            indegree[w] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                stack.push(w);
            }
        }
    }
    if order.len() != n {
        return None;
    }
    order.reverse();
    Some(order)
}

/// Vertex Geography moves: delete the token's vertex and slide along an out-edge.
pub fn geo_options(g: &GeoGraph) -> Vec<GeoGraph> {
    g.out_neighbours(g.token)
        .map(|target| {
            let mut next = g.clone();
            next.vertices.remove(&g.token);
            next.edges.retain(|&(a, b)| a != g.token && b != g.token);
            next.labels.remove(&g.token);
            next.token = target;
            next
        })
        .collect()
}

/// Edge Geography moves: delete only the traversed edge.
pub fn edge_geo_options(g: &GeoGraph) -> Vec<GeoGraph> {
    g.out_neighbours(g.token)
        .map(|target| {
            let mut next = g.clone();
            next.edges.remove(&(g.token, target));
            next.token = target;
            next
        })
        .collect()
}

/// Vertex Geography played directly on [`GeoGraph`] snapshots. Positions from
/// one starting graph are identified by their remaining vertices and token.
impl Game for GeoGraph {
    fn options(&self) -> Vec<Self> {
        geo_options(self)
    }

    fn is_terminal(&self) -> bool {
        self.out_neighbours(self.token).next().is_none()
    }

    fn key(&self) -> PositionKey {
        let words = std::iter::once(self.token).chain(self.vertices.iter().copied());
        PositionKey::from_words(b'V', words)
    }

    fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// Edge Geography played on [`GeoGraph`] snapshots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGeography(pub GeoGraph);

impl Game for EdgeGeography {
    fn options(&self) -> Vec<Self> {
        edge_geo_options(&self.0)
            .into_iter()
            .map(EdgeGeography)
            .collect()
    }

    fn is_terminal(&self) -> bool {
        self.0.is_terminal()
    }

    fn key(&self) -> PositionKey {
        let words =
            std::iter::once(self.0.token).chain(self.0.edges.iter().flat_map(|&(a, b)| [a, b]));
        PositionKey::from_words(b'W', words)
    }

    fn size(&self) -> usize {
        self.0.edges.len()
    }
}

/// Embeds a game DAG as a Geography graph: node ids become vertex ids, the
/// token sits on the start node. Repeated moves to the same child collapse
/// into one edge, which leaves every value unchanged.
pub fn dag_as_geography(d: &GameDag) -> GeoGraph {
    let edges: BTreeSet<(VertexId, VertexId)> = (0..d.len())
        .flat_map(|v| {
            d.children(v)
                .iter()
                .map(move |&c| (v as VertexId, c as VertexId))
        })
        .collect();
    GeoGraph::new(0..d.len() as VertexId, edges, 0).expect("a game dag has no self-loops")
}
