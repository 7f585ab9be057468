//! Plane trees, their Dyck-path and ballot-sequence encodings, admissible
//! `m`-labelings, and the bijection between labeled plane trees and tours on
//! free trees.
//!
//! An `m`-labeling of a plane tree partitions the non-root vertices into
//! blocks of `m` vertices that share a level. It is admissible when the
//! parents of every block's members all lie in one block (or are all the
//! root). `C_n^(m)` counts admissibly `m`-labeled plane trees on `nm + 1`
//! vertices.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::trees::{automorphisms_by_search, FreeTree};

/// Default cap on the number of plane trees visited by
/// [`hypercatalan_via_labelings`].
pub const DEFAULT_PLANE_TREE_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Up,
    Down,
}

/// Ordered rooted tree. Vertices are numbered in preorder, so the root is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    level: Vec<u32>,
}

impl PlaneTree {
    pub fn single_vertex() -> Self {
        PlaneTree {
            children: vec![Vec::new()],
            parent: vec![None],
            level: vec![0],
        }
    }

    pub fn from_dyck(path: &DyckPath) -> Self {
        let mut tree = Self::single_vertex();
        let mut at = 0;
        for step in &path.0 {
            match step {
                Step::Up => {
                    let v = tree.children.len();
                    tree.children.push(Vec::new());
                    tree.parent.push(Some(at));
                    tree.level.push(tree.level[at] + 1);
                    tree.children[at].push(v);
                    at = v;
                }
                Step::Down => at = tree.parent[at].expect("valid Dyck path"),
            }
        }
        tree
    }

    /// Preorder traversal: down-steps of the tree become up-steps of the path.
    pub fn to_dyck(&self) -> DyckPath {
        let mut steps = Vec::with_capacity(2 * (self.k() - 1));
        self.push_steps(0, &mut steps);
        DyckPath(steps)
    }

    fn push_steps(&self, v: usize, steps: &mut Vec<Step>) {
        for &c in &self.children[v] {
            steps.push(Step::Up);
            self.push_steps(c, steps);
            steps.push(Step::Down);
        }
    }

    /// Vertex count.
    pub fn k(&self) -> usize {
        self.children.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn level(&self, v: usize) -> u32 {
        self.level[v]
    }

    /// Vertices grouped by level, each group in preorder.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in self.level.iter().enumerate() {
            let l = l as usize;
            if out.len() <= l {
                out.resize(l + 1, Vec::new());
            }
            out[l].push(v);
        }
        out
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels().iter().map(Vec::len).collect()
    }
}

/// Sequence of up and down steps that never dips below its start and ends
/// at height zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyckPath(Vec<Step>);

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut height = 0i64;
        for (i, s) in steps.iter().enumerate() {
            height += if *s == Step::Up { 1 } else { -1 };
            if height < 0 {
                return Err(Error::invalid(format!(
                    "Dyck path goes below zero at step {i}"
                )));
            }
        }
        if height != 0 {
            return Err(Error::invalid(format!("Dyck path ends at height {height}")));
        }
        Ok(DyckPath(steps))
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn to_ballot(&self) -> BallotSequence {
        BallotSequence(
            self.0
                .iter()
                .map(|s| if *s == Step::Up { 1 } else { -1 })
                .collect(),
        )
    }

    /// Levels of the slabs (components of the region under the path within
    /// a unit horizontal strip), listed in the order their up-steps occur,
    /// together with each slab's parent slab.
    pub fn slabs(&self) -> Vec<(u32, Option<usize>)> {
        let mut open: Vec<usize> = Vec::new();
        let mut slabs = Vec::new();
        for s in &self.0 {
            match s {
                Step::Up => {
                    slabs.push((open.len() as u32 + 1, open.last().copied()));
                    open.push(slabs.len() - 1);
                }
                Step::Down => {
                    open.pop();
                }
            }
        }
        slabs
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s == Step::Up { "U" } else { "D" })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Step::Up),
                'D' | 'd' => Ok(Step::Down),
                other => Err(Error::invalid(format!("bad Dyck step {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }
}

/// `+1/-1` sequence with nonnegative partial sums and total zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BallotSequence(Vec<i8>);

impl BallotSequence {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        let mut sum = 0i64;
        for (i, &a) in entries.iter().enumerate() {
            if a != 1 && a != -1 {
                return Err(Error::invalid(format!(
                    "ballot entry {a} at {i} is not +-1"
                )));
            }
            sum += i64::from(a);
            if sum < 0 {
                return Err(Error::invalid(format!(
                    "negative partial sum at position {i}"
                )));
            }
        }
        if sum != 0 {
            return Err(Error::invalid(format!("ballot sequence sums to {sum}")));
        }
        Ok(BallotSequence(entries))
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn to_dyck(&self) -> DyckPath {
        DyckPath(
            self.0
                .iter()
                .map(|&a| if a == 1 { Step::Up } else { Step::Down })
                .collect(),
        )
    }

    /// The pairs `(i, j)`: `a_i = 1`, and `j > i` is the first index with
    /// `a_j = -1` whose partial sum is one below that at `i`. Returns
    /// `(i, j, level)` with `level` the partial sum at `i`, sorted by `i`.
    pub fn pairs(&self) -> Vec<(usize, usize, u32)> {
        let mut partial = Vec::with_capacity(self.0.len());
        let mut s = 0i64;
        for &a in &self.0 {
            s += i64::from(a);
            partial.push(s);
        }
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            if self.0[i] != 1 {
                continue;
            }
            let j = (i + 1..self.0.len())
                .find(|&j| self.0[j] == -1 && partial[j] + 1 == partial[i])
                .expect("ballot sequences close every pair");
            out.push((i, j, partial[i] as u32));
        }
        out
    }
}

/// Any of the three equivalent encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalanObject {
    Tree(PlaneTree),
    Dyck(DyckPath),
    Ballot(BallotSequence),
}

/// All three encodings of the object.
pub fn convert(obj: &CatalanObject) -> (PlaneTree, DyckPath, BallotSequence) {
    let path = match obj {
        CatalanObject::Tree(t) => t.to_dyck(),
        CatalanObject::Dyck(p) => p.clone(),
        CatalanObject::Ballot(b) => b.to_dyck(),
    };
    (PlaneTree::from_dyck(&path), path.clone(), path.to_ballot())
}

/// Dyck words of a fixed semilength in lexicographic order, `U < D`.
struct DyckWords {
    next: Option<Vec<Step>>,
}

impl DyckWords {
    fn new(semilength: usize) -> Self {
        let mut first = vec![Step::Up; semilength];
        first.extend(std::iter::repeat_n(Step::Down, semilength));
        DyckWords { next: Some(first) }
    }

    fn successor(word: &[Step]) -> Option<Vec<Step>> {
        let total_ups = word.len() / 2;
        let mut heights = Vec::with_capacity(word.len());
        let mut h = 0usize;
        for s in word {
            heights.push(h);
            h = if *s == Step::Up { h + 1 } else { h - 1 };
        }
        // rightmost U that can turn into a D
        let i = (0..word.len())
            .rev()
            .find(|&i| word[i] == Step::Up && heights[i] >= 1)?;
        let ups_before = word[..i].iter().filter(|s| **s == Step::Up).count();
        let mut next = word[..i].to_vec();
        next.push(Step::Down);
        let remaining_ups = total_ups - ups_before;
        next.extend(std::iter::repeat_n(Step::Up, remaining_ups));
        next.resize(word.len(), Step::Down);
        Some(next)
    }
}

impl Iterator for DyckWords {
    type Item = DyckPath;

    fn next(&mut self) -> Option<DyckPath> {
        let word = self.next.take()?;
        self.next = Self::successor(&word);
        Some(DyckPath(word))
    }
}

/// All plane trees on `k` vertices, in lexicographic order of Dyck word.
pub fn enumerate_plane_trees(k: usize) -> Result<impl Iterator<Item = PlaneTree>> {
    if k == 0 {
        return Err(Error::invalid("a plane tree has at least one vertex"));
    }
    Ok(DyckWords::new(k - 1).map(|p| PlaneTree::from_dyck(&p)))
}

/// Partition of the non-root vertices of a plane tree into blocks of size
/// `m`. Blocks are kept sorted, and ordered by smallest member, so two
/// labelings that differ only by renaming labels compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MLabeling {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl MLabeling {
    pub fn new(m: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("block size must be positive"));
        }
        let mut seen = HashSet::new();
        for b in &mut blocks {
            if b.len() != m {
                return Err(Error::invalid(format!(
                    "block {b:?} does not have size {m}"
                )));
            }
            for &v in b.iter() {
                if !seen.insert(v) {
                    return Err(Error::invalid(format!("vertex {v} is in two blocks")));
                }
            }
            b.sort_unstable();
        }
        blocks.sort_unstable();
        Ok(MLabeling { m, blocks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `block_of[v]`, `None` for the root.
    fn block_index(&self, k: usize) -> Vec<Option<usize>> {
        let mut block_of = vec![None; k];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                if v < k {
                    block_of[v] = Some(i);
                }
            }
        }
        block_of
    }

    /// Checks that the blocks cover exactly the non-root vertices and that
    /// each block lies within a level.
    pub fn validate_for(&self, tree: &PlaneTree) -> Result<()> {
        let covered: usize = self.blocks.iter().map(Vec::len).sum();
        if covered != tree.k() - 1 {
            return Err(Error::invalid(format!(
                "labeling covers {covered} vertices, tree has {} non-root vertices",
                tree.k() - 1
            )));
        }
        for b in &self.blocks {
            if b.iter().any(|&v| v == 0 || v >= tree.k()) {
                return Err(Error::invalid(format!("block {b:?} has an invalid vertex")));
            }
            if b.iter().any(|&v| tree.level(v) != tree.level(b[0])) {
                return Err(Error::invalid(format!("block {b:?} spans several levels")));
            }
        }
        Ok(())
    }

    /// Whether vertices with children in a common block always share a block.
    pub fn is_admissible(&self, tree: &PlaneTree) -> bool {
        if self.validate_for(tree).is_err() {
            return false;
        }
        let block_of = self.block_index(tree.k());
        self.blocks.iter().all(|b| {
            let first = block_of[tree.parent(b[0]).expect("non-root")];
            b.iter()
                .all(|&v| block_of[tree.parent(v).expect("non-root")] == first)
        })
    }
}

/// Calls `visit` once per partition of `items` into consecutive-chosen blocks
/// of size `m`: the first free item always opens the next block.
fn for_each_uniform_partition(items: &[usize], m: usize, visit: &mut dyn FnMut(&[Vec<usize>])) {
    fn go(
        free: &mut Vec<usize>,
        m: usize,
        acc: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if free.is_empty() {
            visit(acc);
            return;
        }
        let first = free.remove(0);
        let rest = free.clone();
        let mut chosen = Vec::with_capacity(m - 1);
        choose(&rest, 0, m - 1, &mut chosen, &mut |picked: &[usize]| {
            let mut block = vec![first];
            block.extend_from_slice(picked);
            let mut remaining: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|v| !picked.contains(v))
                .collect();
            acc.push(block);
            go(&mut remaining, m, acc, visit);
            acc.pop();
        });
        free.insert(0, first);
    }

    fn choose(
        pool: &[usize],
        from: usize,
        want: usize,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if want == 0 {
            f(chosen);
            return;
        }
        for i in from..pool.len() {
            if pool.len() - i < want {
                break;
            }
            chosen.push(pool[i]);
            choose(pool, i + 1, want - 1, chosen, f);
            chosen.pop();
        }
    }

    if items.len() % m != 0 {
        return;
    }
    let mut free = items.to_vec();
    go(&mut free, m, &mut Vec::new(), visit);
}

/// Visits every admissible `m`-labeling, building it level by level: the
/// children of each block at one level form a group that must be split
/// into blocks on its own.
fn for_each_admissible(tree: &PlaneTree, m: usize, visit: &mut dyn FnMut(&[Vec<usize>])) {
    let levels = tree.levels();
    if levels.iter().skip(1).any(|l| l.len() % m != 0) {
        return;
    }

    fn descend(
        tree: &PlaneTree,
        m: usize,
        parents: Vec<Vec<usize>>,
        acc: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let groups: Vec<Vec<usize>> = parents
            .iter()
            .map(|b| {
                b.iter()
                    .flat_map(|&v| tree.children(v).iter().copied())
                    .collect()
            })
            .filter(|g: &Vec<usize>| !g.is_empty())
            .collect();
        if groups.is_empty() {
            visit(acc);
            return;
        }
        if groups.iter().any(|g| g.len() % m != 0) {
            return;
        }
        product(tree, m, &groups, 0, Vec::new(), acc, visit);
    }

    fn product(
        tree: &PlaneTree,
        m: usize,
        groups: &[Vec<usize>],
        idx: usize,
        level_blocks: Vec<Vec<usize>>,
        acc: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if idx == groups.len() {
            let depth = acc.len();
            acc.extend(level_blocks.iter().cloned());
            descend(tree, m, level_blocks, acc, visit);
            acc.truncate(depth);
            return;
        }
        for_each_uniform_partition(&groups[idx], m, &mut |parts| {
            let mut next = level_blocks.clone();
            next.extend(parts.iter().cloned());
            product(tree, m, groups, idx + 1, next, acc, visit);
        });
    }

    descend(tree, m, vec![vec![0]], &mut Vec::new(), visit);
}

/// All admissible `m`-labelings of `tree`.
pub fn admissible_labelings(tree: &PlaneTree, m: usize) -> Vec<MLabeling> {
    assert!(m >= 1, "block size must be positive");
    let mut out = Vec::new();
    for_each_admissible(tree, m, &mut |blocks| {
        out.push(MLabeling::new(m, blocks.to_vec()).expect("generated blocks are valid"));
    });
    out
}

/// `N_m(tree)`: the number of admissible `m`-labelings.
pub fn count_admissible_labelings(tree: &PlaneTree, m: usize) -> BigUint {
    assert!(m >= 1, "block size must be positive");
    let mut count = 0u64;
    for_each_admissible(tree, m, &mut |_| count += 1);
    BigUint::from(count)
}

/// `C_n^(m)` as the number of admissibly `m`-labeled plane trees on
/// `nm + 1` vertices.
pub fn hypercatalan_via_labelings(n: usize, m: usize, budget: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let k = n * m + 1;
    let trees = catalan_number(n * m);
    if trees > BigUint::from(budget) {
        return Err(Error::Budget {
            what: format!("{trees} plane trees on {k} vertices"),
            budget,
        });
    }
    let mut total = BigUint::zero();
    for tree in enumerate_plane_trees(k)? {
        total += count_admissible_labelings(&tree, m);
    }
    Ok(total)
}

fn catalan_number(n: usize) -> BigUint {
    crate::arith::binomial(2 * n as u64, n as u64) / (n as u64 + 1)
}

/// A closed walk on a [`FreeTree`], as the sequence of visited vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TourWord {
    vertices: Vec<usize>,
}

impl TourWord {
    pub fn new(vertices: Vec<usize>) -> Self {
        TourWord { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    /// Checks that this is a closed walk crossing every edge of `tree` the
    /// same even number of times `2m`, and returns `m` (1 for the empty walk
    /// on a single vertex).
    pub fn validate(&self, tree: &FreeTree) -> Result<usize> {
        let w = &self.vertices;
        if w.is_empty() || w.iter().any(|&v| v >= tree.n()) {
            return Err(Error::invalid("walk visits a vertex outside the tree"));
        }
        if w[0] != w[w.len() - 1] {
            return Err(Error::invalid("walk is not closed"));
        }
        let edges = tree.edge_count();
        if edges == 0 {
            return if w.len() == 1 {
                Ok(1)
            } else {
                Err(Error::invalid("walk on a single vertex must be empty"))
            };
        }
        let steps = w.len() - 1;
        if steps % (2 * edges) != 0 || steps == 0 {
            return Err(Error::invalid(format!(
                "walk of {steps} steps cannot cross {edges} edges equally often"
            )));
        }
        let m = steps / (2 * edges);
        let mut uses: BTreeMap<(usize, usize), usize> = tree
            .edges()
            .into_iter()
            .map(|(a, b)| ((a.min(b), a.max(b)), 0))
            .collect();
        for pair in w.windows(2) {
            let key = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            match uses.get_mut(&key) {
                Some(u) => *u += 1,
                None => {
                    return Err(Error::invalid(format!(
                        "step {} -> {} is not an edge",
                        pair[0], pair[1]
                    )))
                }
            }
        }
        if let Some((e, u)) = uses.iter().find(|(_, &u)| u != 2 * m) {
            return Err(Error::invalid(format!(
                "edge {e:?} is crossed {u} times, not {}",
                2 * m
            )));
        }
        Ok(m)
    }

    fn relabel(&self, map: &[usize]) -> TourWord {
        TourWord::new(self.vertices.iter().map(|&v| map[v]).collect())
    }
}

/// Every `2m`-tour starting at `v`, by exhaustive search. Fails when more
/// than `limit` tours exist.
pub fn enumerate_tours(tree: &FreeTree, v: usize, m: usize, limit: usize) -> Result<Vec<TourWord>> {
    if m == 0 || v >= tree.n() {
        return Err(Error::invalid("need m >= 1 and a valid start vertex"));
    }
    let adj = tree.adjacency();
    let mut remaining: BTreeMap<(usize, usize), usize> = tree
        .edges()
        .into_iter()
        .map(|(a, b)| ((a.min(b), a.max(b)), 2 * m))
        .collect();
    let mut walk = vec![v];
    let mut out = Vec::new();
    let left = 2 * m * tree.edge_count();

    #[allow(clippy::too_many_arguments)]
    fn go(
        adj: &[Vec<usize>],
        remaining: &mut BTreeMap<(usize, usize), usize>,
        left: usize,
        walk: &mut Vec<usize>,
        out: &mut Vec<TourWord>,
        limit: usize,
    ) -> Result<()> {
        let at = *walk.last().expect("nonempty walk");
        if left == 0 {
            if at == walk[0] {
                if out.len() == limit {
                    return Err(Error::Budget {
                        what: "tour enumeration".into(),
                        budget: limit as u64,
                    });
                }
                out.push(TourWord::new(walk.clone()));
            }
            return Ok(());
        }
        for &next in &adj[at] {
            let key = (at.min(next), at.max(next));
            let r = remaining.get_mut(&key).expect("tree edge");
            if *r == 0 {
                continue;
            }
            *r -= 1;
            walk.push(next);
            go(adj, remaining, left - 1, walk, out, limit)?;
            walk.pop();
            *remaining.get_mut(&key).expect("tree edge") += 1;
        }
        Ok(())
    }

    go(&adj, &mut remaining, left, &mut walk, &mut out, limit)?;
    Ok(out)
}

/// Sends a tour to an admissibly labeled plane tree: steps away from the
/// start vertex become up-steps of the Dyck word, and the vertex created by
/// each such step is labeled by the tree vertex it reaches.
pub fn alpha(tree: &FreeTree, walk: &TourWord) -> Result<(PlaneTree, MLabeling)> {
    let m = walk.validate(tree)?;
    let start = walk.start();
    let toward = parents_toward(tree, start);
    let mut plane = PlaneTree::single_vertex();
    let mut at = 0;
    let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for pair in walk.vertices().windows(2) {
        let (from, to) = (pair[0], pair[1]);
        if toward[to] == Some(from) {
            let v = plane.children.len();
            plane.children.push(Vec::new());
            plane.parent.push(Some(at));
            plane.level.push(plane.level[at] + 1);
            plane.children[at].push(v);
            by_label.entry(to).or_default().push(v);
            at = v;
        } else {
            at = plane.parent[at].expect("tours return towards the start");
        }
    }
    let labeling = MLabeling::new(m, by_label.into_values().collect())?;
    assert!(
        labeling.is_admissible(&plane),
        "alpha produced an inadmissible labeling"
    );
    Ok((plane, labeling))
}

/// `toward[u]` is the neighbor of `u` one step closer to `root`.
fn parents_toward(tree: &FreeTree, root: usize) -> Vec<Option<usize>> {
    let adj = tree.adjacency();
    let mut toward = vec![None; tree.n()];
    let mut seen = vec![false; tree.n()];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                toward[w] = Some(u);
                stack.push(w);
            }
        }
    }
    toward
}

/// Inverse of [`alpha`]: identifies vertices sharing a block, collapses
/// parallel edges to get a tree, and reads the walk off the preorder
/// traversal. Vertices of the result are in the tree's canonical numbering.
pub fn beta(tree: &PlaneTree, labeling: &MLabeling) -> Result<(FreeTree, TourWord)> {
    if !labeling.is_admissible(tree) {
        return Err(Error::invalid(
            "labeling is not admissible for this plane tree",
        ));
    }
    let block_of = labeling.block_index(tree.k());
    let class = |v: usize| block_of[v].map_or(0, |b| b + 1);
    let classes = labeling.blocks().len() + 1;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for v in 1..tree.k() {
        let p = tree.parent(v).expect("non-root");
        let e = (class(p), class(v));
        if seen.insert(e) {
            edges.push(e);
        }
    }
    let (quotient, relabel) = FreeTree::from_edges(classes, &edges)
        .map_err(|e| Error::invalid(format!("quotient is not a tree: {e}")))?;

    let mut walk = vec![class(0)];
    fn traverse(tree: &PlaneTree, v: usize, class: &dyn Fn(usize) -> usize, walk: &mut Vec<usize>) {
        for &c in tree.children(v) {
            walk.push(class(c));
            traverse(tree, c, class, walk);
            walk.push(class(v));
        }
    }
    traverse(tree, 0, &class, &mut walk);
    let walk = TourWord::new(walk).relabel(&relabel);
    let m = walk.validate(&quotient)?;
    if quotient.edge_count() > 0 && m != labeling.m() {
        return Err(Error::invalid(format!(
            "walk crosses edges {} times, not {}",
            2 * m,
            2 * labeling.m()
        )));
    }
    Ok((quotient, walk))
}

/// Whether some automorphism of `tree` carries `a` to `b`. Uses a
/// permutation search, so only small trees are supported.
pub fn equivalent_tours(tree: &FreeTree, a: &TourWord, b: &TourWord) -> Result<bool> {
    if a.vertices().len() != b.vertices().len() {
        return Ok(false);
    }
    Ok(automorphisms_by_search(tree)?
        .iter()
        .any(|perm| &a.relabel(perm) == b))
}

/// The smallest image of `walk` under the automorphism group, a canonical
/// representative of its equivalence class.
pub fn canonical_tour(tree: &FreeTree, walk: &TourWord) -> Result<TourWord> {
    Ok(automorphisms_by_search(tree)?
        .iter()
        .map(|perm| walk.relabel(perm))
        .min()
        .unwrap_or_else(|| walk.clone()))
}
