use std::collections::{HashMap, VecDeque};

use super::{mex, Budget, Game, Nimber, PositionKey};
use crate::error::{Error, Result};

/// Deduplicated reachable-position graph of a game.
///
/// Node 0 is the start position and ids follow breadth-first discovery order.
/// Each node keeps one child entry per move, so a node that can be reached by
/// two different moves appears twice in its parent's child list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameDag {
    keys: Vec<PositionKey>,
    children: Vec<Vec<usize>>,
    /// Reverse topological order: every node appears after all of its children.
    order: Vec<usize>,
    height: usize,
    max_branching: usize,
}

impl GameDag {
    fn from_parts(keys: Vec<PositionKey>, children: Vec<Vec<usize>>) -> Result<Self> {
        let n = children.len();
        let mut indegree = vec![0usize; n];
        for kids in &children {
            for &c in kids {
                indegree[c] += 1;
            }
        }
        // Kahn's algorithm from the sources, then reverse.
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::Cyclic);
        }
        topo.reverse();

        let mut heights = vec![0usize; n];
        for &v in &topo {
            heights[v] = children[v]
                .iter()
                .map(|&c| heights[c] + 1)
                .max()
                .unwrap_or(0);
        }
        let max_branching = children.iter().map(Vec::len).max().unwrap_or(0);
        Ok(GameDag {
            keys,
            height: heights[0],
            children,
            order: topo,
            max_branching,
        })
    }

    /// Builds a DAG from adjacency lists, keeping only nodes reachable from
    /// `start`. Keys are the original node ids.
    pub fn from_adjacency(adjacency: &[Vec<usize>], start: usize) -> Result<Self> {
        let n = adjacency.len();
        if start >= n {
            return Err(Error::UnknownNode(start));
        }
        for kids in adjacency {
            if let Some(&bad) = kids.iter().find(|&&c| c >= n) {
                return Err(Error::UnknownNode(bad));
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut original = vec![start];
        index[start] = 0;
        let mut head = 0;
        while head < original.len() {
            let v = original[head];
            head += 1;
            for &c in &adjacency[v] {
                if index[c] == usize::MAX {
                    index[c] = original.len();
                    original.push(c);
                }
            }
        }
        let keys = original
            .iter()
            .map(|&v| PositionKey::from_words(b'D', [v as u32]))
            .collect();
        let children = original
            .iter()
            .map(|&v| adjacency[v].iter().map(|&c| index[c]).collect())
            .collect();
        GameDag::from_parts(keys, children)
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn key(&self, node: usize) -> &PositionKey {
        &self.keys[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.children
    }

    /// Longest start-to-sink path length.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn max_branching(&self) -> usize {
        self.max_branching
    }

    /// Number of moves available at the start position.
    pub fn root_options(&self) -> usize {
        self.children[0].len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Nodes in reverse topological order (children before parents).
    pub fn reverse_topological(&self) -> &[usize] {
        &self.order
    }

    /// Grundy value of every node.
    pub fn nimbers(&self) -> Vec<Nimber> {
        let mut values = vec![Nimber::ZERO; self.len()];
        for &v in &self.order {
            values[v] = mex(self.children[v].iter().map(|&c| values[c]));
        }
        values
    }

    pub fn nimber(&self) -> Nimber {
        self.nimbers()[0]
    }
}

/// Enumerates every position reachable from `game`, merging equal keys.
pub fn build_dag<G: Game>(game: &G, budget: &Budget) -> Result<GameDag> {
    let mut index: HashMap<PositionKey, usize> = HashMap::new();
    let mut keys = Vec::new();
    let mut positions: Vec<Option<G>> = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();

    budget.check(1, "dag nodes")?;
    let root_key = game.key();
    index.insert(root_key.clone(), 0);
    keys.push(root_key);
    positions.push(Some(game.clone()));
    children.push(Vec::new());

    let mut head = 0;
    while head < positions.len() {
        let position = positions[head]
            .take()
            .expect("each position is expanded once");
        let mut kids = Vec::new();
        for option in position.options() {
            let key = option.key();
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    budget.check(id + 1, "dag nodes")?;
                    index.insert(key.clone(), id);
                    keys.push(key);
                    positions.push(Some(option));
                    children.push(Vec::new());
                    id
                }
            };
            kids.push(id);
        }
        children[head] = kids;
        head += 1;
    }
    GameDag::from_parts(keys, children)
}
