use super::{Budget, GameDag};
use crate::error::Result;

/// Anything with a root and ordered child lists.
pub trait Rooted {
    fn root(&self) -> usize;
    fn node_children(&self, node: usize) -> &[usize];
}

impl Rooted for GameDag {
    fn root(&self) -> usize {
        self.start()
    }

    fn node_children(&self, node: usize) -> &[usize] {
        self.children(node)
    }
}

/// An explicit game tree without shared subtrees. Node 0 is the root and
/// nodes are stored in preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTree {
    children: Vec<Vec<usize>>,
}

impl Rooted for GameTree {
    fn root(&self) -> usize {
        0
    }

    fn node_children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }
}

impl GameTree {
    pub fn leaf() -> Self {
        GameTree {
            children: vec![Vec::new()],
        }
    }

    /// A root whose subtrees are `subtrees`, in order.
    pub fn node(subtrees: Vec<GameTree>) -> Self {
        let mut children = vec![Vec::new()];
        for sub in subtrees {
            let offset = children.len();
            children[0].push(offset);
            children.extend(
                sub.children
                    .into_iter()
                    .map(|kids| kids.into_iter().map(|c| c + offset).collect()),
            );
        }
        GameTree { children }
    }

    /// A path with `edges` edges.
    pub fn path(edges: usize) -> Self {
        let mut children: Vec<Vec<usize>> = (0..edges).map(|i| vec![i + 1]).collect();
        children.push(Vec::new());
        GameTree { children }
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn height(&self) -> usize {
        // Preorder: children have larger indices than parents.
        let mut h = vec![0usize; self.len()];
        for v in (0..self.len()).rev() {
            h[v] = self.children[v]
                .iter()
                .map(|&c| h[c] + 1)
                .max()
                .unwrap_or(0);
        }
        h[0]
    }

    /// Reinterprets the tree as a game DAG (every node distinct).
    pub fn to_dag(&self) -> GameDag {
        GameDag::from_adjacency(&self.children, 0).expect("a tree is acyclic")
    }
}

/// Unfolds shared structure so every path from the root gets its own copy.
pub fn expand_tree<R: Rooted>(rooted: &R, budget: &Budget) -> Result<GameTree> {
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    budget.check(1, "tree nodes")?;
    let mut stack = vec![(0usize, rooted.root())];
    while let Some((node, source)) = stack.pop() {
        let mut kids = Vec::new();
        for &c in rooted.node_children(source) {
            let id = children.len();
            budget.check(id + 1, "tree nodes")?;
            children.push(Vec::new());
            kids.push(id);
            stack.push((id, c));
        }
        children[node] = kids;
    }
    Ok(renumber_preorder(children))
}

/// Tree sum: the tree expansion of the Cartesian product of two game trees.
///
/// Node `(x, y)` has children `(x', y)` for every child `x'` of `x`, followed
/// by `(x, y')` for every child `y'` of `y`.
pub fn tree_sum_expand<A: Rooted, B: Rooted>(a: &A, b: &B, budget: &Budget) -> Result<GameTree> {
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    budget.check(1, "tree nodes")?;
    let mut stack = vec![(0usize, a.root(), b.root())];
    while let Some((node, x, y)) = stack.pop() {
        let mut kids = Vec::new();
        let moves = a
            .node_children(x)
            .iter()
            .map(|&x2| (x2, y))
            .chain(b.node_children(y).iter().map(|&y2| (x, y2)));
        for (x2, y2) in moves {
            let id = children.len();
            budget.check(id + 1, "tree nodes")?;
            children.push(Vec::new());
            kids.push(id);
            stack.push((id, x2, y2));
        }
        children[node] = kids;
    }
    Ok(renumber_preorder(children))
}

fn renumber_preorder(children: Vec<Vec<usize>>) -> GameTree {
    let mut new_id = vec![0usize; children.len()];
    let mut order = Vec::with_capacity(children.len());
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        new_id[v] = order.len();
        order.push(v);
        stack.extend(children[v].iter().rev());
    }
    let renumbered = order
        .iter()
        .map(|&v| children[v].iter().map(|&c| new_id[c]).collect())
        .collect();
    GameTree {
        children: renumbered,
    }
}
