//! Impartial-game abstraction and the Sprague-Grundy machinery shared by every
//! ruleset: nimbers, `mex`, nim-sum, budgets, the memoized solver, disjunctive
//! sums, and explicit position DAGs / game trees.

mod budget;
mod dag;
mod tree;

use std::collections::HashMap;
use std::fmt;
use std::ops::BitXor;

use serde::{Deserialize, Serialize};

pub use budget::Budget;
pub use dag::{build_dag, GameDag};
pub use tree::{expand_tree, tree_sum_expand, GameTree, Rooted};

use crate::error::Result;

/// A Grundy value `*k`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Nimber(u32);

impl Nimber {
    pub const ZERO: Nimber = Nimber(0);
    pub const STAR: Nimber = Nimber(1);

    pub const fn new(value: u32) -> Self {
        Nimber(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<u32> for Nimber {
    fn from(value: u32) -> Self {
        Nimber(value)
    }
}

impl fmt::Display for Nimber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl BitXor for Nimber {
    type Output = Nimber;

    fn bitxor(self, rhs: Nimber) -> Nimber {
        nim_sum(self, rhs)
    }
}

/// Least non-negative integer absent from `values`.
pub fn mex<I: IntoIterator<Item = Nimber>>(values: I) -> Nimber {
    let values: Vec<Nimber> = values.into_iter().collect();
    // The answer is at most values.len(), so larger entries can be ignored.
    let mut seen = vec![false; values.len() + 1];
    for v in &values {
        if let Some(slot) = seen.get_mut(v.0 as usize) {
            *slot = true;
        }
    }
    let first_gap = seen.iter().position(|&s| !s).unwrap_or(values.len());
    Nimber(first_gap as u32)
}

pub fn nim_sum(a: Nimber, b: Nimber) -> Nimber {
    Nimber(a.0 ^ b.0)
}

/// Canonical byte string identifying a position within one ruleset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionKey(Vec<u8>);

impl PositionKey {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        PositionKey(bytes)
    }

    /// A ruleset tag followed by little-endian `u32` words.
    pub fn from_words<I: IntoIterator<Item = u32>>(tag: u8, words: I) -> Self {
        let mut bytes = vec![tag];
        for w in words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        PositionKey(bytes)
    }

    /// Key of an ordered pair of positions, as used by disjunctive sums.
    pub fn pair(left: &PositionKey, right: &PositionKey) -> Self {
        let mut bytes = Vec::with_capacity(5 + left.0.len() + right.0.len());
        bytes.push(b'+');
        bytes.extend_from_slice(&(left.0.len() as u32).to_le_bytes());
        bytes.extend_from_slice(&left.0);
        bytes.extend_from_slice(&right.0);
        PositionKey(bytes)
    }

    /// Prefixes an existing key with a tag byte.
    pub fn tagged(tag: u8, inner: &PositionKey) -> Self {
        let mut bytes = Vec::with_capacity(1 + inner.0.len());
        bytes.push(tag);
        bytes.extend_from_slice(&inner.0);
        PositionKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for PositionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PositionKey(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// A position of an impartial ruleset under normal play.
///
/// Implementors must produce options in a deterministic order and keep
/// `is_terminal` consistent with `options().is_empty()`. Two positions with
/// equal keys must have isomorphic game trees.
pub trait Game: Clone {
    fn options(&self) -> Vec<Self>;

    fn is_terminal(&self) -> bool {
        self.options().is_empty()
    }

    fn key(&self) -> PositionKey;

    /// Ruleset-specific size measure (stones, vertices, ...).
    fn size(&self) -> usize;
}

/// Grundy value by exhaustive memoized DFS over the position graph.
///
/// The memo table lives for this call only and is keyed on [`PositionKey`].
/// Every newly discovered position counts against `budget`.
pub fn nimber_of<G: Game>(game: &G, budget: &Budget) -> Result<Nimber> {
    struct Frame<G> {
        key: PositionKey,
        options: Vec<G>,
        next: usize,
        values: Vec<Nimber>,
    }

    let mut memo: HashMap<PositionKey, Nimber> = HashMap::new();
    let mut discovered = 1usize;
    budget.check(discovered, "positions")?;
    let mut stack = vec![Frame {
        key: game.key(),
        options: game.options(),
        next: 0,
        values: Vec::new(),
    }];

    loop {
        let top = stack
            .last_mut()
            .expect("stack is never empty inside the loop");
        if top.next < top.options.len() {
            let child = top.options[top.next].clone();
            top.next += 1;
            let key = child.key();
            if let Some(&v) = memo.get(&key) {
                top.values.push(v);
                continue;
            }
            discovered += 1;
            budget.check(discovered, "positions")?;
            let options = child.options();
            stack.push(Frame {
                key,
                options,
                next: 0,
                values: Vec::new(),
            });
        } else {
            let frame = stack.pop().expect("checked non-empty");
            let value = mex(frame.values);
            memo.insert(frame.key, value);
            match stack.last_mut() {
                Some(parent) => parent.values.push(value),
                None => return Ok(value),
            }
        }
    }
}

/// Disjunctive sum: a move is made in exactly one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sum<A, B> {
    pub left: A,
    pub right: B,
}

pub fn disjunctive_sum<A: Game, B: Game>(left: A, right: B) -> Sum<A, B> {
    Sum { left, right }
}

impl<A: Game, B: Game> Game for Sum<A, B> {
    fn options(&self) -> Vec<Self> {
        let mut out: Vec<Self> = self
            .left
            .options()
            .into_iter()
            .map(|l| Sum {
                left: l,
                right: self.right.clone(),
            })
            .collect();
        out.extend(self.right.options().into_iter().map(|r| Sum {
            left: self.left.clone(),
            right: r,
        }));
        out
    }

    fn is_terminal(&self) -> bool {
        self.left.is_terminal() && self.right.is_terminal()
    }

    fn key(&self) -> PositionKey {
        PositionKey::pair(&self.left.key(), &self.right.key())
    }

    fn size(&self) -> usize {
        self.left.size() + self.right.size()
    }
}
