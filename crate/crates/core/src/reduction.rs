//! Nimber-preserving compiler from an explicit game DAG to one Generalized
//! Geography graph.
//!
//! For a game `G` with `g = min(height, root options)`:
//!
//! * `Q_i` gadget, `i in 0..=g`: path `b_i -> a_i -> s_i`. The value at `b_i`
//!   is `*` exactly when `nimber(G) = i`, and `0` otherwise.
//! * `t`-chain `t_0 .. t_{g-2}` with `t_i -> t_j` for all `j < i`, so `t_i = *i`.
//! * `c_i -> b_i` and `c_i -> t_j` for `j in 1..=i-2`.
//! * `d_i -> b_1` and `d_i -> c_j` for `j in 2..=i`.
//! * `start -> b_0, c_1, d_2 .. d_g`; the value at `start` is `nimber(G)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{build_dag, disjunctive_sum, Budget, Game, GameDag, Nimber};
use crate::geography::{GeoGraph, VertexId};
use crate::rulesets::{star_game, DagPosition};

/// How the `s_i` tail of each `Q_i` gadget is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// `s_i` moves to the embedded DAG of `G + *i`, a second-player win iff
    /// `nimber(G) = i`. No nimber is computed during compilation.
    Product,
    /// The nimber is computed up front; `s_i` is a leaf, or has a single leaf
    /// child when `i` is the nimber.
    Trusted,
}

impl OracleMode {
    pub const ALL: [OracleMode; 2] = [OracleMode::Product, OracleMode::Trusted];

    pub fn name(self) -> &'static str {
        match self {
            OracleMode::Product => "product",
            OracleMode::Trusted => "trusted",
        }
    }
}

/// A self-contained fragment whose token sits on its entry vertex.
#[derive(Clone, Debug)]
pub struct GadgetBundle {
    pub graph: GeoGraph,
    pub entry: VertexId,
}

/// Vertex ids of the named gadget vertices in a compiled graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Roles {
    pub start: VertexId,
    /// Indexed by `i in 0..=g`.
    pub b: Vec<VertexId>,
    pub a: Vec<VertexId>,
    pub s: Vec<VertexId>,
    /// `t_j` for `j in 0..=g-2`; empty unless some `c_i` uses the chain.
    pub t: Vec<VertexId>,
    /// `c_i` for `i in 1..=g`.
    pub c: BTreeMap<u32, VertexId>,
    /// `d_i` for `i in 2..=g`.
    pub d: BTreeMap<u32, VertexId>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub graph: GeoGraph,
    pub g: u32,
    pub roles: Roles,
    pub mode: OracleMode,
    /// A-priori vertex bound for product mode.
    pub size_bound: usize,
}

#[derive(Default)]
struct Builder {
    next: VertexId,
    edges: Vec<(VertexId, VertexId)>,
    labels: BTreeMap<VertexId, String>,
}

impl Builder {
    fn vertex(&mut self, label: impl Into<String>) -> VertexId {
        let v = self.next;
        self.next += 1;
        self.labels.insert(v, label.into());
        v
    }

    fn edge(&mut self, from: VertexId, to: VertexId) {
        self.edges.push((from, to));
    }

    fn len(&self) -> usize {
        self.next as usize
    }

    /// Copies a DAG in, collapsing repeated child entries. Returns the id of
    /// its start node.
    fn embed(&mut self, dag: &GameDag) -> VertexId {
        let base = self.next;
        for _ in 0..dag.len() {
            self.vertex("payload");
        }
        for v in 0..dag.len() {
            let mut kids: Vec<usize> = dag.children(v).to_vec();
            kids.sort_unstable();
            kids.dedup();
            for c in kids {
                self.edge(base + v as VertexId, base + c as VertexId);
            }
        }
        base
    }

    fn finish(self, token: VertexId) -> GeoGraph {
        GeoGraph::new(0..self.next, self.edges, token)
            .and_then(|g| g.with_labels(self.labels))
            .expect("gadget construction yields a valid graph")
    }
}

/// `min(height, root option count)`: an upper bound on the game's nimber.
pub fn grundy_bound(d: &GameDag) -> u32 {
    d.height().min(d.root_options()) as u32
}

fn add_t_chain(b: &mut Builder, g: u32) -> Vec<VertexId> {
    let count = g.saturating_sub(1);
    let t: Vec<VertexId> = (0..count).map(|j| b.vertex(format!("t_{j}"))).collect();
    for i in 0..t.len() {
        for j in 0..i {
            b.edge(t[i], t[j]);
        }
    }
    t
}

/// Vertices `t_0 .. t_{g-2}`, entry at the top `t_{g-2}`. `None` when `g < 2`.
pub fn build_t_chain(g: u32) -> Option<GadgetBundle> {
    let mut b = Builder::default();
    let t = add_t_chain(&mut b, g);
    let entry = *t.last()?;
    Some(GadgetBundle {
        graph: b.finish(entry),
        entry,
    })
}

struct QiIds {
    b: VertexId,
    a: VertexId,
    s: VertexId,
}

fn product_tail(d: &Arc<GameDag>, i: u32, budget: &Budget) -> Result<GameDag> {
    build_dag(
        &disjunctive_sum(DagPosition::at_start(Arc::clone(d)), star_game(i)),
        budget,
    )
}

fn add_qi(
    builder: &mut Builder,
    d: &Arc<GameDag>,
    i: u32,
    tail: Tail,
    budget: &Budget,
) -> Result<QiIds> {
    let b = builder.vertex(format!("b_{i}"));
    let a = builder.vertex(format!("a_{i}"));
    let s = builder.vertex(format!("s_{i}"));
    builder.edge(b, a);
    builder.edge(a, s);
    match tail {
        Tail::Product => {
            let product = product_tail(d, i, budget)?;
            budget.check(builder.len() + product.len(), "output vertices")?;
            let root = builder.embed(&product);
            builder.edge(s, root);
        }
        Tail::Known(k) => {
            if k.value() == i {
                let leaf = builder.vertex("payload");
                builder.edge(s, leaf);
            }
        }
    }
    budget.check(builder.len(), "output vertices")?;
    Ok(QiIds { b, a, s })
}

#[derive(Clone, Copy)]
enum Tail {
    Product,
    Known(Nimber),
}

fn tail_for(d: &GameDag, mode: OracleMode) -> Tail {
    match mode {
        OracleMode::Product => Tail::Product,
        OracleMode::Trusted => Tail::Known(d.nimber()),
    }
}

/// The `Q_i` gadget on its own, token at `b_i`.
pub fn build_qi_gadget(
    d: &GameDag,
    i: u32,
    mode: OracleMode,
    budget: &Budget,
) -> Result<GadgetBundle> {
    let shared = Arc::new(d.clone());
    let mut builder = Builder::default();
    let ids = add_qi(&mut builder, &shared, i, tail_for(d, mode), budget)?;
    Ok(GadgetBundle {
        graph: builder.finish(ids.b),
        entry: ids.b,
    })
}

/// Vertex budget for a product-mode compilation:
/// `3(g+1)` prefix vertices, `sum_{i=0..g} |G| (i+1)` tail vertices (the DAG of
/// `G + *i` has exactly `|G| (i+1)` nodes), `g-1` t-vertices, `g` c-vertices,
/// `g-1` d-vertices and `start`.
pub fn output_size_bound(d: &GameDag, g: u32) -> usize {
    let g = g as usize;
    let tails = d.len() * (g + 1) * (g + 2) / 2;
    3 * (g + 1) + tails + g.saturating_sub(1) + g + g.saturating_sub(1) + 1
}

pub fn reduce_dag(d: &GameDag, mode: OracleMode, budget: &Budget) -> Result<Reduction> {
    let g = grundy_bound(d);
    let shared = Arc::new(d.clone());
    let tail = tail_for(d, mode);
    let mut builder = Builder::default();
    let mut roles = Roles {
        start: builder.vertex("start"),
        ..Roles::default()
    };

    for i in 0..=g {
        let ids = add_qi(&mut builder, &shared, i, tail, budget)?;
        roles.b.push(ids.b);
        roles.a.push(ids.a);
        roles.s.push(ids.s);
    }
    // Only c_i with i >= 3 reach into the chain.
    if g >= 3 {
        roles.t = add_t_chain(&mut builder, g);
    }
    for i in 1..=g {
        let c = builder.vertex(format!("c_{i}"));
        builder.edge(c, roles.b[i as usize]);
        for j in 1..=i.saturating_sub(2) {
            builder.edge(c, roles.t[j as usize]);
        }
        roles.c.insert(i, c);
    }
    for i in 2..=g {
        let dv = builder.vertex(format!("d_{i}"));
        builder.edge(dv, roles.b[1]);
        for j in 2..=i {
            builder.edge(dv, roles.c[&j]);
        }
        roles.d.insert(i, dv);
    }
    builder.edge(roles.start, roles.b[0]);
    if let Some(&c1) = roles.c.get(&1) {
        builder.edge(roles.start, c1);
    }
    for &dv in roles.d.values() {
        builder.edge(roles.start, dv);
    }
    budget.check(builder.len(), "output vertices")?;

    let graph = builder.finish(roles.start);
    Ok(Reduction {
        graph,
        g,
        roles,
        mode,
        size_bound: output_size_bound(d, g),
    })
}

/// Compiles `game` into a Geography graph with the same nimber.
pub fn reduce_to_geography<G: Game>(
    game: &G,
    mode: OracleMode,
    budget: &Budget,
) -> Result<Reduction> {
    let dag = build_dag(game, budget)?;
    reduce_dag(&dag, mode, budget)
}

/// One Geography graph whose nimber is `nimber(a) xor nimber(b)`, built from
/// the disjunctive sum without evaluating either component.
pub fn encode_xor<A: Game, B: Game>(
    a: &A,
    b: &B,
    mode: OracleMode,
    budget: &Budget,
) -> Result<Reduction> {
    reduce_to_geography(&disjunctive_sum(a.clone(), b.clone()), mode, budget)
}

impl std::str::FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(OracleMode::Product),
            "trusted" => Ok(OracleMode::Trusted),
            other => Err(Error::Invalid(format!("unknown oracle mode {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::nimber_of;
    use crate::geography::geography_nimber;
    use crate::rulesets::{KaylesPosition, NimPosition};

    fn dag<G: Game>(g: &G) -> GameDag {
        build_dag(g, &Budget::default()).unwrap()
    }

    fn value_at(graph: &GeoGraph, v: VertexId) -> u32 {
        graph.static_values().unwrap()[&v].value()
    }

    #[test]
    fn grundy_bound_examples() {
        assert_eq!(grundy_bound(&dag(&star_game(0))), 0);
        assert_eq!(grundy_bound(&dag(&star_game(5))), 5);
        let nim22 = dag(&NimPosition::new(vec![2, 2]));
        assert_eq!(nim22.height(), 4);
        assert_eq!(nim22.root_options(), 4);
        assert_eq!(grundy_bound(&nim22), 4);
    }

    #[test]
    fn t_chain_examples() {
        assert!(build_t_chain(0).is_none());
        assert!(build_t_chain(1).is_none());

        let two = build_t_chain(2).unwrap();
        assert_eq!(two.graph.vertices().len(), 1);
        assert_eq!(two.graph.label(two.entry), Some("t_0"));
        assert_eq!(value_at(&two.graph, two.entry), 0);

        let four = build_t_chain(4).unwrap();
        assert_eq!(four.graph.vertices().len(), 3);
        assert_eq!(four.graph.edges().len(), 3);
        assert_eq!(four.graph.label(four.entry), Some("t_2"));
        assert_eq!(
            geography_nimber(&four.graph, &Budget::default())
                .unwrap()
                .value(),
            2
        );

        let ten = build_t_chain(10).unwrap();
        assert_eq!(ten.graph.label(ten.entry), Some("t_8"));
        // Literal deletion semantics, independent of the static evaluation.
        assert_eq!(
            nimber_of(&ten.graph, &Budget::default()).unwrap().value(),
            8
        );
    }

    #[test]
    fn qi_gadget_examples() {
        for mode in OracleMode::ALL {
            let terminal = dag(&star_game(0));
            let q0 = build_qi_gadget(&terminal, 0, mode, &Budget::default()).unwrap();
            assert_eq!(
                geography_nimber(&q0.graph, &Budget::default()).unwrap(),
                Nimber::STAR
            );
            let q1 = build_qi_gadget(&terminal, 1, mode, &Budget::default()).unwrap();
            assert_eq!(
                geography_nimber(&q1.graph, &Budget::default()).unwrap(),
                Nimber::ZERO
            );

            let nim12 = dag(&NimPosition::new(vec![1, 2]));
            for i in 0..=4 {
                let q = build_qi_gadget(&nim12, i, mode, &Budget::default()).unwrap();
                let expected = if i == 3 { Nimber::STAR } else { Nimber::ZERO };
                assert_eq!(
                    geography_nimber(&q.graph, &Budget::default()).unwrap(),
                    expected,
                    "i={i} {mode:?}"
                );
            }
        }
    }

    #[test]
    fn product_tail_has_exact_size() {
        let d = Arc::new(dag(&KaylesPosition::path(4)));
        for i in 0..5 {
            assert_eq!(
                product_tail(&d, i, &Budget::default()).unwrap().len(),
                d.len() * (i as usize + 1)
            );
        }
    }

    #[test]
    fn terminal_game_compiles_to_short_path() {
        for mode in OracleMode::ALL {
            let r = reduce_to_geography(&star_game(0), mode, &Budget::default()).unwrap();
            assert_eq!(r.g, 0);
            assert!(r.roles.c.is_empty() && r.roles.d.is_empty() && r.roles.t.is_empty());
            assert_eq!(r.graph.out_degree(r.roles.start), 1);
            assert_eq!(
                geography_nimber(&r.graph, &Budget::default()).unwrap(),
                Nimber::ZERO
            );
            assert!(r.graph.vertices().len() <= r.size_bound);
        }
        let product =
            reduce_to_geography(&star_game(0), OracleMode::Product, &Budget::default()).unwrap();
        assert_eq!(product.graph.vertices().len(), 5);
        assert_eq!(product.size_bound, 5);
    }

    #[test]
    fn small_games_keep_their_nimber() {
        for mode in OracleMode::ALL {
            let star3 = reduce_to_geography(&star_game(3), mode, &Budget::default()).unwrap();
            assert_eq!(
                geography_nimber(&star3.graph, &Budget::default())
                    .unwrap()
                    .value(),
                3
            );
            assert!(star3.graph.vertices().len() <= star3.size_bound);

            let kayles =
                reduce_to_geography(&KaylesPosition::path(3), mode, &Budget::default()).unwrap();
            assert_eq!(
                geography_nimber(&kayles.graph, &Budget::default())
                    .unwrap()
                    .value(),
                2
            );
            assert!(kayles.graph.is_acyclic());
        }
    }

    #[test]
    fn degenerate_ranges() {
        let r =
            reduce_to_geography(&star_game(2), OracleMode::Trusted, &Budget::default()).unwrap();
        assert_eq!(r.g, 2);
        assert!(r.roles.t.is_empty());
        // c_1 and c_2 only reach their own b.
        assert_eq!(r.graph.out_degree(r.roles.c[&1]), 1);
        assert_eq!(r.graph.out_degree(r.roles.c[&2]), 1);
        // d_2 -> b_1, c_2
        assert_eq!(
            r.graph.out_neighbours(r.roles.d[&2]).collect::<Vec<_>>(),
            vec![r.roles.b[1], r.roles.c[&2]]
        );
        assert!(!r.roles.d.contains_key(&1));
    }

    #[test]
    fn xor_encoding_examples() {
        for mode in OracleMode::ALL {
            let r = encode_xor(&star_game(0), &star_game(0), mode, &Budget::default()).unwrap();
            assert_eq!(
                geography_nimber(&r.graph, &Budget::default())
                    .unwrap()
                    .value(),
                0
            );
            let r = encode_xor(&star_game(2), &star_game(3), mode, &Budget::default()).unwrap();
            assert_eq!(
                geography_nimber(&r.graph, &Budget::default())
                    .unwrap()
                    .value(),
                1
            );
            let single = KaylesPosition::new([0], []).unwrap();
            let r = encode_xor(
                &NimPosition::new(vec![1, 2]),
                &single,
                mode,
                &Budget::default(),
            )
            .unwrap();
            assert_eq!(
                geography_nimber(&r.graph, &Budget::default())
                    .unwrap()
                    .value(),
                2
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = reduce_to_geography(
            &NimPosition::new(vec![4, 4, 4]),
            OracleMode::Product,
            &Budget::nodes(200),
        )
        .unwrap_err();
        assert!(err.is_budget());
    }
}
