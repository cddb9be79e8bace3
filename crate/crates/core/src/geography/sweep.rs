use serde::Serialize;

use super::GeoGraph;
use crate::error::{Error, Result};
use crate::game::{Budget, Nimber};

/// How the degree bound of a sweep is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeNotion {
    /// in-degree + out-degree of every vertex
    Total,
    /// out-degree of every vertex
    Out,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub notion: DegreeNotion,
    pub graphs: u64,
    pub max_nimber: Nimber,
    /// First enumerated graph (token placed) reaching `max_nimber`.
    pub witness: GeoGraph,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub max_vertices: usize,
    pub degree_bound: Option<usize>,
    pub results: Vec<SweepResult>,
}

impl SweepReport {
    pub fn result(&self, notion: DegreeNotion) -> &SweepResult {
        self.results
            .iter()
            .find(|r| r.notion == notion)
            .expect("both notions are always reported")
    }
}

const MAX_SWEEP_VERTICES: usize = 16;

/// Exhaustive vertex-Geography solver on graphs with at most 16 vertices,
/// memoized on (alive mask, token).
struct SmallSolver {
    n: usize,
    memo: Vec<u8>,
}

impl SmallSolver {
    fn new(n: usize) -> Self {
        SmallSolver {
            n,
            memo: vec![u8::MAX; (1usize << n) * n],
        }
    }

    fn values(&mut self, out: &[u16]) -> Vec<u8> {
        self.memo.fill(u8::MAX);
        let full = ((1u32 << self.n) - 1) as u16;
        (0..self.n).map(|t| self.value(out, full, t)).collect()
    }

    fn value(&mut self, out: &[u16], alive: u16, token: usize) -> u8 {
        let slot = alive as usize * self.n + token;
        if self.memo[slot] != u8::MAX {
            return self.memo[slot];
        }
        let rest = alive & !(1 << token);
        let mut targets = out[token] & rest;
        let mut seen = 0u32;
        while targets != 0 {
            let w = targets.trailing_zeros() as usize;
            targets &= targets - 1;
            seen |= 1 << self.value(out, rest, w);
        }
        let v = (!seen).trailing_zeros() as u8;
        self.memo[slot] = v;
        v
    }
}

struct Search<'a> {
    n: usize,
    bound: usize,
    budget: &'a Budget,
    solver: SmallSolver,
    graphs: u64,
    best: Option<(u8, Vec<u16>, usize)>,
}

impl Search<'_> {
    fn visit(&mut self, out: &[u16]) -> Result<()> {
        self.graphs += 1;
        self.budget.check(self.graphs as usize, "sweep graphs")?;
        let values = self.solver.values(out);
        for (token, &v) in values.iter().enumerate() {
            if self.best.as_ref().is_none_or(|(b, _, _)| v > *b) {
                self.best = Some((v, out.to_vec(), token));
            }
        }
        Ok(())
    }

    fn total(
        &mut self,
        pairs: &[(usize, usize)],
        idx: usize,
        out: &mut Vec<u16>,
        degree: &mut Vec<usize>,
    ) -> Result<()> {
        if idx == pairs.len() {
            return self.visit(out);
        }
        self.total(pairs, idx + 1, out, degree)?;
        let (u, v) = pairs[idx];
        if degree[u] < self.bound && degree[v] < self.bound {
            degree[u] += 1;
            degree[v] += 1;
            out[u] |= 1 << v;
            self.total(pairs, idx + 1, out, degree)?;
            out[u] &= !(1 << v);
            degree[u] -= 1;
            degree[v] -= 1;
        }
        Ok(())
    }

    fn out_degree(&mut self, vertex: usize, out: &mut Vec<u16>) -> Result<()> {
        if vertex == self.n {
            return self.visit(out);
        }
        let others = (((1u32 << self.n) - 1) as u16) & !(1 << vertex);
        // Enumerate every subset of `others` in increasing order.
        let mut subset: u16 = 0;
        loop {
            if (subset.count_ones() as usize) <= self.bound {
                out[vertex] = subset;
                self.out_degree(vertex + 1, out)?;
            }
            if subset == others {
                break;
            }
            subset = subset.wrapping_sub(others) & others;
        }
        out[vertex] = 0;
        Ok(())
    }
}

fn to_graph(n: usize, out: &[u16], token: usize) -> GeoGraph {
    let edges = (0..n).flat_map(|u| {
        (0..n)
            .filter(move |&v| out[u] >> v & 1 == 1)
            .map(move |v| (u as u32, v as u32))
    });
    GeoGraph::new(0..n as u32, edges, token as u32).expect("sweep graphs are simple")
}

/// Maximum vertex-Geography value over every simple directed graph on
/// `max_vertices` labelled vertices (isolated vertices allowed, so smaller
/// graphs are included) and every token placement.
///
/// Both degree notions are reported. `degree_bound = None` means unbounded.
/// The budget counts enumerated graphs.
pub fn max_nimber_sweep(
    max_vertices: usize,
    degree_bound: Option<usize>,
    budget: &Budget,
) -> Result<SweepReport> {
    if max_vertices == 0 || max_vertices > MAX_SWEEP_VERTICES {
        return Err(Error::Invalid(format!(
            "sweep needs between 1 and {MAX_SWEEP_VERTICES} vertices, got {max_vertices}"
        )));
    }
    let n = max_vertices;
    let bound = degree_bound.unwrap_or(usize::MAX);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();

    let mut results = Vec::new();
    for notion in [DegreeNotion::Total, DegreeNotion::Out] {
        let mut search = Search {
            n,
            bound,
            budget,
            solver: SmallSolver::new(n),
            graphs: 0,
            best: None,
        };
        let mut out = vec![0u16; n];
        match notion {
            DegreeNotion::Total => search.total(&pairs, 0, &mut out, &mut vec![0; n])?,
            DegreeNotion::Out => search.out_degree(0, &mut out)?,
        }
        let (value, graph, token) = search.best.expect("at least the empty graph is visited");
        results.push(SweepResult {
            notion,
            graphs: search.graphs,
            max_nimber: Nimber::new(value as u32),
            witness: to_graph(n, &graph, token),
        });
    }
    Ok(SweepReport {
        max_vertices,
        degree_bound,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::nimber_of;

    #[test]
    fn single_vertex_has_value_zero() {
        let r = max_nimber_sweep(1, None, &Budget::default()).unwrap();
        for res in &r.results {
            assert_eq!(res.max_nimber, Nimber::ZERO);
            assert_eq!(res.graphs, 1);
        }
    }

    #[test]
    fn two_vertices_reach_one() {
        let r = max_nimber_sweep(2, None, &Budget::default()).unwrap();
        assert_eq!(r.result(DegreeNotion::Total).max_nimber, Nimber::STAR);
        assert_eq!(r.result(DegreeNotion::Total).graphs, 4);
        assert_eq!(r.result(DegreeNotion::Out).graphs, 4);
    }

    #[test]
    fn witness_value_is_confirmed_by_snapshot_solver() {
        let r = max_nimber_sweep(4, Some(3), &Budget::default()).unwrap();
        for res in &r.results {
            let v = nimber_of(&res.witness, &Budget::default()).unwrap();
            assert_eq!(v, res.max_nimber);
        }
    }

    #[test]
    fn unbounded_three_vertex_count() {
        // 6 ordered pairs, every subset.
        let r = max_nimber_sweep(3, None, &Budget::default()).unwrap();
        assert_eq!(r.result(DegreeNotion::Total).graphs, 64);
        assert_eq!(r.result(DegreeNotion::Out).graphs, 64);
    }

    #[test]
    fn rejects_bad_sizes_and_budget() {
        assert!(max_nimber_sweep(0, None, &Budget::default()).is_err());
        assert!(max_nimber_sweep(17, None, &Budget::default()).is_err());
        assert!(max_nimber_sweep(4, None, &Budget::nodes(10))
            .unwrap_err()
            .is_budget());
    }
}
