//! Sprague-Grundy values of impartial games, and a nimber-preserving compiler
//! from explicitly enumerable games into single Generalized Geography graphs.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod files;
pub mod game;
pub mod geography;
pub mod primality;
pub mod reduction;
pub mod rng;
pub mod rulesets;
pub mod verify;

pub use error::{Error, Result};
pub use game::{
    build_dag, disjunctive_sum, mex, nim_sum, nimber_of, tree_sum_expand, Budget, Game, GameDag,
    GameTree, Nimber, PositionKey, Sum,
};
pub use files::{AnyGame, GameFile};
pub use geography::{geography_nimber, GeoGraph, GeoPosition};
pub use primality::{canonical_form, is_prime_game, CanonicalTreeHash, PrimeVerdict};
pub use reduction::{encode_xor, reduce_to_geography, OracleMode, Reduction};
