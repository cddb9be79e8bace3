//! Prime/composite decisions for small games under the tree sum.
//!
//! Game trees are hash-consed into a [`Forest`]: every isomorphism class of
//! rooted unordered trees gets one [`ClassId`], interned on the exact sorted
//! list of child classes. Class equality is therefore tree isomorphism, with
//! no reliance on hash digests.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{build_dag, tree_sum_expand, Budget, Game, GameTree, Rooted};

pub type ClassId = u32;

#[derive(Clone, Debug)]
struct ClassInfo {
    children: Vec<ClassId>,
    size: u64,
    height: u32,
    digest: u64,
}

/// Isomorphism classes of rooted trees, closed under the tree sum.
#[derive(Debug)]
pub struct Forest {
    index: HashMap<Vec<ClassId>, ClassId>,
    classes: Vec<ClassInfo>,
    sums: HashMap<(ClassId, ClassId), ClassId>,
}

fn mix(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Order-independent digest of a node from its children's digests.
fn digest_of(mut child_digests: Vec<u64>) -> u64 {
    child_digests.sort_unstable();
    child_digests
        .into_iter()
        .fold(0x9e3779b97f4a7c15, |acc, d| mix(acc.rotate_left(5) ^ d))
}

impl Default for Forest {
    fn default() -> Self {
        Forest::new()
    }
}

impl Forest {
    pub fn new() -> Self {
        let mut f = Forest {
            index: HashMap::new(),
            classes: Vec::new(),
            sums: HashMap::new(),
        };
        f.intern(Vec::new());
        f
    }

    pub fn leaf(&self) -> ClassId {
        0
    }

    /// Class of a node whose subtrees have the given classes (any order).
    pub fn intern(&mut self, mut children: Vec<ClassId>) -> ClassId {
        children.sort_unstable();
        if let Some(&id) = self.index.get(&children) {
            return id;
        }
        let info = ClassInfo {
            size: children.iter().fold(1u64, |acc, &c| {
                acc.saturating_add(self.classes[c as usize].size)
            }),
            height: children
                .iter()
                .map(|&c| self.classes[c as usize].height + 1)
                .max()
                .unwrap_or(0),
            digest: digest_of(
                children
                    .iter()
                    .map(|&c| self.classes[c as usize].digest)
                    .collect(),
            ),
            children: children.clone(),
        };
        let id = self.classes.len() as ClassId;
        self.classes.push(info);
        self.index.insert(children, id);
        id
    }

    /// Class of the tree expansion of `rooted`, without expanding it.
    pub fn intern_rooted<R: Rooted>(&mut self, rooted: &R) -> ClassId {
        self.intern_nodes(rooted)[&rooted.root()]
    }

    /// Class of every node reachable from the root of `rooted`.
    pub fn intern_nodes<R: Rooted>(&mut self, rooted: &R) -> HashMap<usize, ClassId> {
        let mut class: HashMap<usize, ClassId> = HashMap::new();
        let mut stack = vec![(rooted.root(), false)];
        while let Some((v, ready)) = stack.pop() {
            if class.contains_key(&v) {
                continue;
            }
            if ready {
                let kids = rooted.node_children(v).iter().map(|c| class[c]).collect();
                let id = self.intern(kids);
                class.insert(v, id);
            } else {
                stack.push((v, true));
                for &c in rooted.node_children(v) {
                    if !class.contains_key(&c) {
                        stack.push((c, false));
                    }
                }
            }
        }
        class
    }

    pub fn children(&self, c: ClassId) -> &[ClassId] {
        &self.classes[c as usize].children
    }

    /// Node count of the expanded tree (saturating).
    pub fn size(&self, c: ClassId) -> u64 {
        self.classes[c as usize].size
    }

    pub fn height(&self, c: ClassId) -> u32 {
        self.classes[c as usize].height
    }

    pub fn digest(&self, c: ClassId) -> u64 {
        self.classes[c as usize].digest
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Class of `T_a ■ T_b`.
    pub fn sum(&mut self, a: ClassId, b: ClassId) -> ClassId {
        if a == self.leaf() {
            return b;
        }
        if b == self.leaf() {
            return a;
        }
        if let Some(&c) = self.sums.get(&(a, b)) {
            return c;
        }
        let mut kids = Vec::new();
        for a2 in self.children(a).to_vec() {
            kids.push(self.sum(a2, b));
        }
        for b2 in self.children(b).to_vec() {
            kids.push(self.sum(a, b2));
        }
        let c = self.intern(kids);
        self.sums.insert((a, b), c);
        c
    }

    /// Every class occurring as a subtree of `c`, including `c`.
    pub fn subclasses(&self, c: ClassId) -> Vec<ClassId> {
        let mut seen = vec![false; self.classes.len()];
        let mut stack = vec![c];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x as usize], true) {
                continue;
            }
            out.push(x);
            stack.extend(self.children(x).iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// An explicit representative tree of class `c`.
    pub fn to_tree(&self, c: ClassId) -> GameTree {
        GameTree::node(self.children(c).iter().map(|&k| self.to_tree(k)).collect())
    }
}

/// Canonical description of a game tree.
///
/// `canonical` is the AHU encoding: a node is `(` followed by its children's
/// encodings in sorted order and `)`. Two trees are isomorphic exactly when
/// their encodings are equal; digests are only a quick pre-filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalTreeHash {
    pub root_digest: u64,
    /// Digest of the subtree at every node of the input, by node id.
    pub node_digests: Vec<u64>,
    pub canonical: String,
}

impl CanonicalTreeHash {
    pub fn isomorphic(&self, other: &CanonicalTreeHash) -> bool {
        self.root_digest == other.root_digest && self.canonical == other.canonical
    }
}

/// Canonical form of the tree expansion of `rooted` (a tree or a game DAG).
/// Fails when the expansion has more nodes than the budget allows.
pub fn canonical_form<R: Rooted>(rooted: &R, budget: &Budget) -> Result<CanonicalTreeHash> {
    let mut forest = Forest::new();
    let root_class = forest.intern_rooted(rooted);
    budget.check(
        forest.size(root_class).min(usize::MAX as u64) as usize,
        "tree nodes",
    )?;

    let mut encoding: HashMap<ClassId, String> = HashMap::new();
    for c in forest.subclasses(root_class).into_iter() {
        encode(&forest, c, &mut encoding);
    }

    let classes = forest.intern_nodes(rooted);
    let mut node_digests = vec![0; classes.keys().max().map_or(0, |m| m + 1)];
    for (&v, &c) in &classes {
        node_digests[v] = forest.digest(c);
    }
    Ok(CanonicalTreeHash {
        root_digest: forest.digest(root_class),
        node_digests,
        canonical: encoding.remove(&root_class).expect("root encoded"),
    })
}

fn encode(forest: &Forest, c: ClassId, out: &mut HashMap<ClassId, String>) -> String {
    if let Some(s) = out.get(&c) {
        return s.clone();
    }
    let mut parts: Vec<String> = forest
        .children(c)
        .iter()
        .map(|&k| encode(forest, k, out))
        .collect();
    parts.sort_unstable();
    let s = format!("({})", parts.concat());
    out.insert(c, s.clone());
    s
}

/// Result of a factorization search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeVerdict {
    Prime,
    /// `T ≅ a ■ b` with both factors of height at least 1.
    Composite {
        a: GameTree,
        b: GameTree,
    },
    BudgetExceeded(String),
}

impl PrimeVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            PrimeVerdict::Prime => "prime",
            PrimeVerdict::Composite { .. } => "composite",
            PrimeVerdict::BudgetExceeded(_) => "budget-exceeded",
        }
    }

    pub fn is_prime(&self) -> bool {
        matches!(self, PrimeVerdict::Prime)
    }
}

struct Factorizer<'a> {
    forest: &'a mut Forest,
    quotients: HashMap<(ClassId, ClassId), Option<ClassId>>,
    budget: &'a Budget,
    steps: usize,
}

impl Factorizer<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        self.budget.check(self.steps, "factorization steps")
    }

    /// Some `A` with `T_t ≅ A ■ T_b`, if one exists.
    ///
    /// The root moves of `A ■ B` split into A-moves, whose subtrees are
    /// `A' ■ B`, and B-moves, whose subtrees are `A ■ B'`. The search guesses
    /// how many children of each class are B-moves, divides the rest by `b`
    /// recursively to rebuild `A`, then checks the B-moves against `A ■ B'`.
    fn divide(&mut self, t: ClassId, b: ClassId) -> Result<Option<ClassId>> {
        let leaf = self.forest.leaf();
        if b == leaf {
            return Ok(Some(t));
        }
        if t == b {
            return Ok(Some(leaf));
        }
        if let Some(&q) = self.quotients.get(&(t, b)) {
            return Ok(q);
        }
        self.tick()?;
        let result = self.divide_uncached(t, b)?;
        self.quotients.insert((t, b), result);
        Ok(result)
    }

    fn divide_uncached(&mut self, t: ClassId, b: ClassId) -> Result<Option<ClassId>> {
        let (ht, hb) = (self.forest.height(t), self.forest.height(b));
        let t_kids = self.forest.children(t).to_vec();
        let b_kids = self.forest.children(b).to_vec();
        if ht <= hb || t_kids.len() <= b_kids.len() || self.forest.size(t) <= self.forest.size(b) {
            return Ok(None);
        }
        let target_height = ht - hb;

        // Children grouped by class (already sorted).
        let mut groups: Vec<(ClassId, usize)> = Vec::new();
        for c in t_kids {
            match groups.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => groups.push((c, 1)),
            }
        }
        let mut quotient = Vec::with_capacity(groups.len());
        for &(c, _) in &groups {
            quotient.push(self.divide(c, b)?);
        }

        let mut expected: Vec<ClassId> = Vec::new();
        let need = b_kids.len();
        let mut chosen = vec![0usize; groups.len()];
        // Groups without a quotient must go entirely to the B side.
        let forced: usize = groups
            .iter()
            .zip(&quotient)
            .filter(|(_, q)| q.is_none())
            .map(|(&(_, n), _)| n)
            .sum();
        if forced > need {
            return Ok(None);
        }
        for (slot, ((_, n), q)) in chosen.iter_mut().zip(groups.iter().zip(&quotient)) {
            if q.is_none() {
                *slot = *n;
            }
        }
        let free: Vec<usize> = (0..groups.len())
            .filter(|&g| quotient[g].is_some())
            .collect();
        let mut found = None;
        self.assign(
            &groups,
            &quotient,
            &free,
            0,
            need - forced,
            &mut chosen,
            &b_kids,
            target_height,
            &mut expected,
            &mut found,
        )?;
        Ok(found)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &mut self,
        groups: &[(ClassId, usize)],
        quotient: &[Option<ClassId>],
        free: &[usize],
        pos: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        b_kids: &[ClassId],
        target_height: u32,
        scratch: &mut Vec<ClassId>,
        found: &mut Option<ClassId>,
    ) -> Result<()> {
        if found.is_some() {
            return Ok(());
        }
        if pos == free.len() {
            if remaining != 0 {
                return Ok(());
            }
            self.tick()?;
            // A's children: quotients of the A-side children.
            let mut a_kids = Vec::new();
            for (g, &(_, n)) in groups.iter().enumerate() {
                if let Some(q) = quotient[g] {
                    a_kids.extend(std::iter::repeat_n(q, n - chosen[g]));
                }
            }
            if a_kids.is_empty() {
                return Ok(());
            }
            let a = self.forest.intern(a_kids);
            if self.forest.height(a) != target_height {
                return Ok(());
            }
            scratch.clear();
            for &bk in b_kids {
                let s = self.forest.sum(a, bk);
                scratch.push(s);
            }
            scratch.sort_unstable();
            let mut b_side: Vec<ClassId> = Vec::new();
            for (g, &(c, _)) in groups.iter().enumerate() {
                b_side.extend(std::iter::repeat_n(c, chosen[g]));
            }
            if *scratch == b_side {
                *found = Some(a);
            }
            return Ok(());
        }
        let g = free[pos];
        let max_here = groups[g].1.min(remaining);
        for take in 0..=max_here {
            chosen[g] = take;
            self.assign(
                groups,
                quotient,
                free,
                pos + 1,
                remaining - take,
                chosen,
                b_kids,
                target_height,
                scratch,
                found,
            )?;
            if found.is_some() {
                break;
            }
        }
        chosen[g] = 0;
        Ok(())
    }
}

/// Searches for `T ≅ A ■ B` with both factors of height at least 1.
///
/// Candidate right factors are the subtree classes of `T` (a factor always
/// occurs as a subtree: the node reached by playing `A` to a leaf), tried in
/// increasing (size, class id) order so the witness is deterministic.
pub fn factorize(
    forest: &mut Forest,
    t: ClassId,
    budget: &Budget,
) -> Result<Option<(ClassId, ClassId)>> {
    let ht = forest.height(t);
    let root_degree = forest.children(t).len();
    let mut candidates: Vec<ClassId> = forest
        .subclasses(t)
        .into_iter()
        .filter(|&c| {
            c != t
                && forest.height(c) >= 1
                && forest.height(c) < ht
                && forest.children(c).len() < root_degree
        })
        .collect();
    candidates.sort_by_key(|&c| (forest.size(c), c));

    let mut f = Factorizer {
        forest,
        quotients: HashMap::new(),
        budget,
        steps: 0,
    };
    for b in candidates {
        if let Some(a) = f.divide(t, b)? {
            if f.forest.height(a) >= 1 {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Decides whether `game` is prime, i.e. its game tree is not a tree sum of
/// two trees of height at least 1. Composite verdicts carry a witness whose
/// tree sum has been re-expanded and checked isomorphic to the input.
pub fn is_prime_game<G: Game>(game: &G, budget: &Budget) -> Result<PrimeVerdict> {
    match prime_verdict(game, budget) {
        Err(Error::BudgetExceeded(msg)) => Ok(PrimeVerdict::BudgetExceeded(msg)),
        other => other,
    }
}

fn prime_verdict<G: Game>(game: &G, budget: &Budget) -> Result<PrimeVerdict> {
    let dag = build_dag(game, budget)?;
    prime_verdict_rooted(&dag, budget)
}

/// [`is_prime_game`] for an explicit tree or DAG.
pub fn is_prime_rooted<R: Rooted>(rooted: &R, budget: &Budget) -> Result<PrimeVerdict> {
    match prime_verdict_rooted(rooted, budget) {
        Err(Error::BudgetExceeded(msg)) => Ok(PrimeVerdict::BudgetExceeded(msg)),
        other => other,
    }
}

fn prime_verdict_rooted<R: Rooted>(rooted: &R, budget: &Budget) -> Result<PrimeVerdict> {
    let mut forest = Forest::new();
    let t = forest.intern_rooted(rooted);
    let size = forest.size(t);
    if size > budget.max_nodes() as u64 {
        return Err(Error::BudgetExceeded(format!(
            "tree expansion has {size} nodes, more than {}",
            budget.max_nodes()
        )));
    }
    match factorize(&mut forest, t, budget)? {
        None => Ok(PrimeVerdict::Prime),
        Some((a, b)) => {
            let a = forest.to_tree(a);
            let b = forest.to_tree(b);
            if !witness_holds(&a, &b, rooted, budget)? {
                return Err(Error::Invalid(
                    "factorization witness failed re-expansion".into(),
                ));
            }
            Ok(PrimeVerdict::Composite { a, b })
        }
    }
}

/// Expands `a ■ b` explicitly and compares canonical forms with `input`.
pub fn witness_holds<R: Rooted>(
    a: &GameTree,
    b: &GameTree,
    input: &R,
    budget: &Budget,
) -> Result<bool> {
    if a.height() < 1 || b.height() < 1 {
        return Ok(false);
    }
    let expanded = tree_sum_expand(a, b, budget)?;
    let lhs = canonical_form(&expanded, budget)?;
    let rhs = canonical_form(input, budget)?;
    Ok(lhs.isomorphic(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_dag, disjunctive_sum, expand_tree};
    use crate::rulesets::{star_game, KaylesPosition, NimPosition};

    fn budget() -> Budget {
        Budget::nodes(5_000)
    }

    /// Independent check: try every pair of subtree classes with matching
    /// heights, expanding the tree sum explicitly.
    fn brute_force_composite(t: &GameTree) -> bool {
        let mut forest = Forest::new();
        let root = forest.intern_rooted(t);
        let target = canonical_form(t, &Budget::unlimited()).unwrap();
        let classes = forest.subclasses(root);
        let h = forest.height(root);
        for &a in &classes {
            for &b in &classes {
                let (ha, hb) = (forest.height(a), forest.height(b));
                if ha == 0 || hb == 0 || ha + hb != h {
                    continue;
                }
                let s =
                    tree_sum_expand(&forest.to_tree(a), &forest.to_tree(b), &Budget::unlimited())
                        .unwrap();
                if s.len() == t.len()
                    && canonical_form(&s, &Budget::unlimited())
                        .unwrap()
                        .isomorphic(&target)
                {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn leaf_digest_is_fixed_and_order_is_irrelevant() {
        let leaf1 = canonical_form(&GameTree::leaf(), &budget()).unwrap();
        let leaf2 = canonical_form(&GameTree::leaf(), &budget()).unwrap();
        assert_eq!(leaf1, leaf2);
        assert_eq!(leaf1.canonical, "()");

        let x = GameTree::node(vec![GameTree::path(2), GameTree::leaf(), GameTree::path(1)]);
        let y = GameTree::node(vec![GameTree::leaf(), GameTree::path(1), GameTree::path(2)]);
        let cx = canonical_form(&x, &budget()).unwrap();
        let cy = canonical_form(&y, &budget()).unwrap();
        assert!(cx.isomorphic(&cy));
        assert_eq!(cx.root_digest, cy.root_digest);
        assert!(!cx.isomorphic(&canonical_form(&GameTree::path(4), &budget()).unwrap()));
    }

    #[test]
    fn independent_builds_agree() {
        let s1 = build_dag(&star_game(1), &budget()).unwrap();
        let t1 = tree_sum_expand(&s1, &s1, &budget()).unwrap();
        let t2 = tree_sum_expand(&s1, &s1, &budget()).unwrap();
        assert_eq!(
            canonical_form(&t1, &budget()).unwrap(),
            canonical_form(&t2, &budget()).unwrap()
        );
        // DAG and its expansion describe the same tree.
        let d = build_dag(&NimPosition::new(vec![2, 1]), &budget()).unwrap();
        let e = expand_tree(&d, &budget()).unwrap();
        assert!(canonical_form(&d, &budget())
            .unwrap()
            .isomorphic(&canonical_form(&e, &budget()).unwrap()));
        assert_eq!(
            canonical_form(&d, &budget()).unwrap().node_digests.len(),
            d.len()
        );
    }

    #[test]
    fn canonical_form_respects_budget() {
        let d = build_dag(&NimPosition::new(vec![3, 3, 3]), &Budget::unlimited()).unwrap();
        assert!(canonical_form(&d, &Budget::nodes(100))
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn star_two_is_prime() {
        assert_eq!(
            is_prime_game(&star_game(2), &budget()).unwrap(),
            PrimeVerdict::Prime
        );
        assert_eq!(
            is_prime_game(&star_game(0), &budget()).unwrap(),
            PrimeVerdict::Prime
        );
        assert!(is_prime_rooted(&GameTree::path(2), &budget())
            .unwrap()
            .is_prime());
    }

    #[test]
    fn star_one_squared_is_composite() {
        let verdict =
            is_prime_game(&disjunctive_sum(star_game(1), star_game(1)), &budget()).unwrap();
        match verdict {
            PrimeVerdict::Composite { a, b } => {
                assert_eq!(a, GameTree::path(1));
                assert_eq!(b, GameTree::path(1));
            }
            other => panic!("expected composite, got {other:?}"),
        }
        // Nim[1,1] is the same game.
        assert_eq!(
            is_prime_game(&NimPosition::new(vec![1, 1]), &budget())
                .unwrap()
                .kind(),
            "composite"
        );
    }

    #[test]
    fn sums_of_small_games_are_composite() {
        let games: Vec<GameTree> = vec![
            expand_tree(&build_dag(&star_game(2), &budget()).unwrap(), &budget()).unwrap(),
            expand_tree(
                &build_dag(&KaylesPosition::path(3), &budget()).unwrap(),
                &budget(),
            )
            .unwrap(),
            GameTree::path(2),
            GameTree::node(vec![GameTree::path(1), GameTree::path(1)]),
        ];
        for a in &games {
            for b in &games {
                let t = tree_sum_expand(a, b, &budget()).unwrap();
                match is_prime_rooted(&t, &budget()).unwrap() {
                    PrimeVerdict::Composite { a: wa, b: wb } => {
                        assert!(witness_holds(&wa, &wb, &t, &budget()).unwrap());
                    }
                    other => panic!("expected composite, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn verdicts_agree_with_pair_enumeration() {
        let mut trees = vec![
            GameTree::path(3),
            GameTree::node(vec![GameTree::path(1), GameTree::leaf()]),
            GameTree::node(vec![GameTree::path(2), GameTree::path(2)]),
            GameTree::node(vec![GameTree::path(1), GameTree::path(2)]),
        ];
        let s = |t: &GameTree, u: &GameTree| tree_sum_expand(t, u, &Budget::unlimited()).unwrap();
        trees.push(s(&trees[1], &trees[3]));
        trees.push(s(&GameTree::path(1), &trees[2]));
        // Perturb a sum by attaching an extra leaf at the root.
        let mut perturbed = vec![s(&GameTree::path(1), &GameTree::path(2))];
        perturbed.push(GameTree::leaf());
        trees.push(GameTree::node(perturbed));
        for t in &trees {
            let verdict = is_prime_rooted(t, &budget()).unwrap();
            assert_eq!(!verdict.is_prime(), brute_force_composite(t), "{t:?}");
        }
    }

    #[test]
    fn oversized_expansion_reports_budget() {
        let v = is_prime_game(&NimPosition::new(vec![3, 3, 3]), &Budget::nodes(50)).unwrap();
        assert_eq!(v.kind(), "budget-exceeded");
    }
}
