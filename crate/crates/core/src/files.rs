//! The JSON game container: a ruleset tag plus a ruleset-specific payload.
//!
//! ```json
//! {"ruleset": "sum", "payload": [
//!     {"ruleset": "star", "payload": {"k": 2}},
//!     {"ruleset": "nim", "payload": {"piles": [1, 3]}}
//! ]}
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, GameDag, PositionKey, Sum};
use crate::geography::{EdgeGeoPosition, GeoGraph, GeoPosition};
use crate::rulesets::{DagPosition, KaylesPosition, NimPosition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ruleset", content = "payload", rename_all = "kebab-case")]
pub enum GameSpec {
    Nim {
        piles: Vec<u32>,
    },
    Star {
        k: u32,
    },
    Kayles {
        vertices: Vec<u32>,
        #[serde(default)]
        edges: Vec<[u32; 2]>,
    },
    Dag {
        nodes: Vec<Vec<usize>>,
        #[serde(default)]
        start: usize,
    },
    Geography(GeoGraph),
    EdgeGeography(GeoGraph),
    Sum(Box<(GameFile, GameFile)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFile {
    #[serde(flatten)]
    pub game: GameSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl From<GameSpec> for GameFile {
    fn from(game: GameSpec) -> Self {
        GameFile {
            game,
            name: None,
            seed: None,
        }
    }
}

impl GameFile {
    pub fn nim(piles: Vec<u32>) -> Self {
        GameSpec::Nim { piles }.into()
    }

    pub fn star(k: u32) -> Self {
        GameSpec::Star { k }.into()
    }

    pub fn kayles(p: &KaylesPosition) -> Self {
        GameSpec::Kayles {
            vertices: p.vertices().iter().copied().collect(),
            edges: p.edges().iter().map(|&(u, v)| [u, v]).collect(),
        }
        .into()
    }

    pub fn dag(d: &GameDag) -> Self {
        GameSpec::Dag {
            nodes: d.adjacency().to_vec(),
            start: d.start(),
        }
        .into()
    }

    pub fn geography(g: GeoGraph) -> Self {
        GameSpec::Geography(g).into()
    }

    pub fn sum(a: GameFile, b: GameFile) -> Self {
        GameSpec::Sum(Box::new((a, b))).into()
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn ruleset(&self) -> &'static str {
        match self.game {
            GameSpec::Nim { .. } => "nim",
            GameSpec::Star { .. } => "star",
            GameSpec::Kayles { .. } => "kayles",
            GameSpec::Dag { .. } => "dag",
            GameSpec::Geography(_) => "geography",
            GameSpec::EdgeGeography(_) => "edge-geography",
            GameSpec::Sum(_) => "sum",
        }
    }

    /// Parses and validates a game file. A bare Geography graph (an object
    /// with `vertices`, `edges` and `token`) is accepted as a `geography` game,
    /// so `reduce` output can be fed straight back in.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let file = if value.get("ruleset").is_none() && value.get("token").is_some() {
            GameFile::geography(serde_json::from_value(value)?)
        } else {
            serde_json::from_value(value)?
        };
        file.to_game()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("game files serialize");
        s.push('\n');
        s
    }

    /// Builds the playable start position, validating the payload.
    pub fn to_game(&self) -> Result<AnyGame> {
        Ok(match &self.game {
            GameSpec::Nim { piles } => AnyGame::Nim(NimPosition::new(piles.clone())),
            GameSpec::Star { k } => AnyGame::Nim(NimPosition::new(vec![*k])),
            GameSpec::Kayles { vertices, edges } => {
                let mut seen = std::collections::BTreeSet::new();
                if !vertices.iter().all(|v| seen.insert(*v)) {
                    return Err(Error::Invalid("duplicate Kayles vertex".into()));
                }
                AnyGame::Kayles(KaylesPosition::new(
                    vertices.iter().copied(),
                    edges.iter().map(|&[u, v]| (u, v)),
                )?)
            }
            GameSpec::Dag { nodes, start } => {
                let dag = GameDag::from_adjacency(nodes, *start)?;
                AnyGame::Dag(DagPosition::at_start(Arc::new(dag)))
            }
            GameSpec::Geography(g) => AnyGame::Geography(GeoPosition::new(g)),
            GameSpec::EdgeGeography(g) => AnyGame::EdgeGeography(EdgeGeoPosition::new(g)),
            GameSpec::Sum(parts) => AnyGame::Sum(Box::new(Sum {
                left: parts.0.to_game()?,
                right: parts.1.to_game()?,
            })),
        })
    }
}

/// A start position of any supported ruleset.
#[derive(Clone, Debug)]
pub enum AnyGame {
    Nim(NimPosition),
    Kayles(KaylesPosition),
    Dag(DagPosition),
    Geography(GeoPosition),
    EdgeGeography(EdgeGeoPosition),
    Sum(Box<Sum<AnyGame, AnyGame>>),
}

fn wrap<G, F: Fn(G) -> AnyGame>(opts: Vec<G>, f: F) -> Vec<AnyGame> {
    opts.into_iter().map(f).collect()
}

impl Game for AnyGame {
    fn options(&self) -> Vec<Self> {
        match self {
            AnyGame::Nim(p) => wrap(p.options(), AnyGame::Nim),
            AnyGame::Kayles(p) => wrap(p.options(), AnyGame::Kayles),
            AnyGame::Dag(p) => wrap(p.options(), AnyGame::Dag),
            AnyGame::Geography(p) => wrap(p.options(), AnyGame::Geography),
            AnyGame::EdgeGeography(p) => wrap(p.options(), AnyGame::EdgeGeography),
            AnyGame::Sum(p) => wrap(p.options(), |s| AnyGame::Sum(Box::new(s))),
        }
    }

    fn key(&self) -> PositionKey {
        match self {
            AnyGame::Nim(p) => p.key(),
            AnyGame::Kayles(p) => p.key(),
            AnyGame::Dag(p) => p.key(),
            AnyGame::Geography(p) => p.key(),
            AnyGame::EdgeGeography(p) => p.key(),
            AnyGame::Sum(p) => p.key(),
        }
    }

    fn size(&self) -> usize {
        match self {
            AnyGame::Nim(p) => p.size(),
            AnyGame::Kayles(p) => p.size(),
            AnyGame::Dag(p) => p.size(),
            AnyGame::Geography(p) => p.size(),
            AnyGame::EdgeGeography(p) => p.size(),
            AnyGame::Sum(p) => p.size(),
        }
    }
}
