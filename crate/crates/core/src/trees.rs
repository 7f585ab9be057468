//! Unlabeled free trees.
//!
//! Every [`FreeTree`] is stored as the canonical level sequence of the tree
//! rooted at its centroid: vertices are numbered in preorder, `levels[v]` is
//! the depth of `v`, and at every vertex the child subtrees appear in
//! lexicographically non-increasing order of their own level sequences. When
//! the tree has two centroids, the root is whichever gives the larger
//! sequence. Two trees are isomorphic iff their sequences are equal.
//!
//! Enumeration walks the rooted level sequences with the Beyer-Hedetniemi
//! successor rule and keeps those whose root is the canonical centroid.

use std::cmp::Ordering;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::factorial;
use crate::error::{Error, Result};

/// Header written at the top of every tree catalog cache.
pub const CACHE_MAGIC: &str = "#hypercat-trees v1";

#[derive(Clone)]
pub struct FreeTree {
    levels: Vec<u32>,
    parents: Vec<Option<usize>>,
    degrees: Vec<u32>,
    aut: OnceLock<BigUint>,
}

impl PartialEq for FreeTree {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

impl Eq for FreeTree {}

impl std::hash::Hash for FreeTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.levels.hash(state);
    }
}

impl fmt::Debug for FreeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeTree({})", self.code_string())
    }
}

impl FreeTree {
    /// Builds a tree from a level sequence, which must already be canonical.
    pub fn from_levels(levels: Vec<u32>) -> Result<Self> {
        let parents = parents_from_levels(&levels)?;
        let tree = Self::from_parts(levels, parents);
        let adj = tree.adjacency();
        let (canon, _) = canonical_levels(&adj);
        if canon != tree.levels {
            return Err(Error::invalid(format!(
                "level sequence {} is not canonical (expected {})",
                tree.code_string(),
                join(&canon)
            )));
        }
        Ok(tree)
    }

    /// Canonicalizes the tree with vertices `0..n` and the given edges.
    ///
    /// Returns the tree together with `relabel`, where `relabel[old]` is the
    /// canonical index of the input vertex `old`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<(Self, Vec<usize>)> {
        if n == 0 {
            return Err(Error::invalid("a tree needs at least one vertex"));
        }
        if edges.len() != n - 1 {
            return Err(Error::invalid(format!(
                "{} edges cannot form a tree on {n} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::invalid(format!("bad edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        if !is_connected(&adj) {
            return Err(Error::invalid("edge set is not connected"));
        }
        let (levels, order) = canonical_levels(&adj);
        let mut relabel = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let parents = parents_from_levels(&levels).expect("canonical sequence is valid");
        Ok((Self::from_parts(levels, parents), relabel))
    }

    fn from_parts(levels: Vec<u32>, parents: Vec<Option<usize>>) -> Self {
        let mut degrees = vec![0u32; levels.len()];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                degrees[v] += 1;
                degrees[p] += 1;
            }
        }
        FreeTree {
            levels,
            parents,
            degrees,
            aut: OnceLock::new(),
        }
    }

    fn with_aut(self, aut: BigUint) -> Self {
        let _ = self.aut.set(aut);
        self
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    /// Edges as `(parent, child)` pairs in preorder of the child.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
            .collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (p, c) in self.edges() {
            adj[p].push(c);
            adj[c].push(p);
        }
        adj
    }

    pub fn code_string(&self) -> String {
        join(&self.levels)
    }

    /// Order of the automorphism group, computed on first use.
    pub fn aut_order(&self) -> &BigUint {
        self.aut.get_or_init(|| automorphism_order(self))
    }
}

fn join(levels: &[u32]) -> String {
    levels
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn parents_from_levels(levels: &[u32]) -> Result<Vec<Option<usize>>> {
    if levels.first() != Some(&0) {
        return Err(Error::invalid(
            "level sequence must start with the root at level 0",
        ));
    }
    // stack[d] = most recent vertex at depth d
    let mut stack: Vec<usize> = Vec::with_capacity(levels.len());
    let mut parents = Vec::with_capacity(levels.len());
    for (v, &l) in levels.iter().enumerate() {
        let l = l as usize;
        if v > 0 && (l == 0 || l > stack.len()) {
            return Err(Error::invalid(format!("invalid level {l} at position {v}")));
        }
        stack.truncate(l);
        parents.push(stack.last().copied());
        stack.push(v);
    }
    Ok(parents)
}

fn is_connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == adj.len()
}

/// The one or two centroids of a tree, in increasing vertex order.
pub(crate) fn centroids(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev().take(n - 1) {
        size[parent[v]] += size[v];
    }
    let mut result = Vec::new();
    for v in 0..n {
        let mut heaviest = n - size[v];
        for &w in &adj[v] {
            if parent[w] == v {
                heaviest = heaviest.max(size[w]);
            }
        }
        if 2 * heaviest <= n {
            result.push(v);
        }
    }
    result
}

/// Canonical level sequence of the subtree at `v` (levels relative to `v`)
/// and the matching preorder of original vertex ids.
fn rooted_code(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> (Vec<u32>, Vec<usize>) {
    let mut kids: Vec<(Vec<u32>, Vec<usize>)> = adj[v]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(adj, w, Some(v)))
        .collect();
    kids.sort_by(|a, b| b.0.cmp(&a.0));
    let mut levels = vec![0];
    let mut order = vec![v];
    for (code, ids) in kids {
        levels.extend(code.into_iter().map(|l| l + 1));
        order.extend(ids);
    }
    (levels, order)
}

fn canonical_levels(adj: &[Vec<usize>]) -> (Vec<u32>, Vec<usize>) {
    centroids(adj)
        .into_iter()
        .map(|c| rooted_code(adj, c, None))
        .max_by(|a, b| a.0.cmp(&b.0))
        .expect("every tree has a centroid")
}

/// End (exclusive) of the subtree rooted at `v` in a level sequence.
fn subtree_end(levels: &[u32], v: usize) -> usize {
    let l = levels[v];
    levels[v + 1..]
        .iter()
        .position(|&x| x <= l)
        .map_or(levels.len(), |off| v + 1 + off)
}

fn rooted_aut(levels: &[u32], v: usize) -> BigUint {
    let end = subtree_end(levels, v);
    let mut kids = Vec::new();
    let mut c = v + 1;
    while c < end {
        let e = subtree_end(levels, c);
        kids.push((c, e));
        c = e;
    }
    let mut acc = BigUint::one();
    let mut run = 0u64;
    for (i, &(s, e)) in kids.iter().enumerate() {
        acc *= rooted_aut(levels, s);
        run += 1;
        let next_same = kids
            .get(i + 1)
            .is_some_and(|&(s2, e2)| levels[s..e] == levels[s2..e2]);
        if !next_same {
            acc *= factorial(run);
            run = 0;
        }
    }
    acc
}

/// |Aut(T)| from the canonical centroid-rooted form.
///
/// The centroid (or centroid edge) is fixed by every automorphism, so the
/// group is the rooted group at the root, doubled when the two halves of a
/// bicentroidal tree are isomorphic.
pub fn automorphism_order(tree: &FreeTree) -> BigUint {
    let levels = &tree.levels;
    let n = levels.len();
    let mut aut = rooted_aut(levels, 0);
    if let Some(other) = second_centroid(levels) {
        let adj = tree.adjacency();
        let (rerooted, _) = rooted_code(&adj, other, None);
        if &rerooted == levels {
            aut *= 2u32;
        }
    }
    debug_assert!((factorial(n as u64) % &aut).is_zero());
    aut
}

/// In a canonical sequence, the child of the root whose subtree holds exactly
/// half of the vertices, if any.
fn second_centroid(levels: &[u32]) -> Option<usize> {
    let n = levels.len();
    let mut c = 1;
    while c < n {
        let e = subtree_end(levels, c);
        if 2 * (e - c) == n {
            return Some(c);
        }
        c = e;
    }
    None
}

/// Stream of all unlabeled trees on `n` vertices, each exactly once, in
/// decreasing lexicographic order of canonical level sequence.
pub fn enumerate_free_trees(n: usize) -> Result<FreeTrees> {
    if n == 0 {
        return Err(Error::invalid("tree enumeration needs n >= 1"));
    }
    Ok(FreeTrees {
        n,
        next: Some((0..n as u32).collect()),
    })
}

pub struct FreeTrees {
    n: usize,
    next: Option<Vec<u32>>,
}

impl FreeTrees {
    fn advance(&mut self) {
        let Some(levels) = self.next.as_mut() else {
            return;
        };
        let Some(p) = levels.iter().rposition(|&l| l > 1) else {
            self.next = None;
            return;
        };
        let q = levels[..p]
            .iter()
            .rposition(|&l| l == levels[p] - 1)
            .expect("a vertex at depth > 1 has an ancestor one level up");
        let shift = p - q;
        for i in p..levels.len() {
            levels[i] = levels[i - shift];
        }
    }

    /// Whether a canonical rooted sequence is rooted at its canonical centroid.
    fn rooted_at_centroid(&self, levels: &[u32]) -> bool {
        let n = self.n;
        let mut c = 1;
        while c < n {
            let e = subtree_end(levels, c);
            let size = e - c;
            match (2 * size).cmp(&n) {
                Ordering::Greater => return false,
                Ordering::Equal => {
                    let parents = parents_from_levels(levels).expect("generated sequence");
                    let tree = FreeTree::from_parts(levels.to_vec(), parents);
                    let (other, _) = rooted_code(&tree.adjacency(), c, None);
                    return levels >= other.as_slice();
                }
                Ordering::Less => {}
            }
            c = e;
        }
        true
    }
}

impl Iterator for FreeTrees {
    type Item = FreeTree;

    fn next(&mut self) -> Option<FreeTree> {
        loop {
            let levels = self.next.clone()?;
            self.advance();
            if self.rooted_at_centroid(&levels) {
                let parents = parents_from_levels(&levels).expect("generated sequence");
                return Some(FreeTree::from_parts(levels, parents));
            }
        }
    }
}

/// All automorphisms found by backtracking over vertex bijections. Each is
/// returned as a map `perm[v] = image of v`. Only meant for small trees.
pub fn automorphisms_by_search(tree: &FreeTree) -> Result<Vec<Vec<usize>>> {
    let n = tree.n();
    if n > 12 {
        return Err(Error::Budget {
            what: format!("permutation search on {n} vertices"),
            budget: 12,
        });
    }
    let adj = tree.adjacency();
    let mut matrix = vec![vec![false; n]; n];
    for (a, b) in tree.edges() {
        matrix[a][b] = true;
        matrix[b][a] = true;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found = Vec::new();
    search_perm(
        0,
        &adj,
        &matrix,
        tree.degrees(),
        &mut perm,
        &mut used,
        &mut found,
    );
    Ok(found)
}

fn search_perm(
    v: usize,
    adj: &[Vec<usize>],
    matrix: &[Vec<bool>],
    degrees: &[u32],
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Vec<Vec<usize>>,
) {
    let n = adj.len();
    if v == n {
        found.push(perm.clone());
        return;
    }
    for image in 0..n {
        if used[image] || degrees[image] != degrees[v] {
            continue;
        }
        // every already-mapped vertex must keep its adjacency to v
        let consistent = (0..v).all(|u| matrix[u][v] == matrix[perm[u]][image]);
        if !consistent {
            continue;
        }
        perm[v] = image;
        used[image] = true;
        search_perm(v + 1, adj, matrix, degrees, perm, used, found);
        used[image] = false;
        perm[v] = usize::MAX;
    }
}

/// All trees on `n` vertices with their automorphism orders.
///
/// With a cache path, an existing cache is read (and must describe the same
/// `n`); otherwise the catalog is computed and written there.
pub fn catalog(n: usize, cache_path: Option<&Path>) -> Result<Vec<FreeTree>> {
    match cache_path {
        Some(path) if path.exists() => read_catalog(path, n),
        Some(path) => {
            let trees = compute_catalog(n)?;
            write_catalog(path, n, &trees)?;
            Ok(trees)
        }
        None => compute_catalog(n),
    }
}

fn compute_catalog(n: usize) -> Result<Vec<FreeTree>> {
    Ok(enumerate_free_trees(n)?
        .inspect(|t| {
            t.aut_order();
        })
        .collect())
}

pub fn cache_header(n: usize) -> String {
    format!("{CACHE_MAGIC} n={n} canon=centroid")
}

pub fn write_catalog(path: &Path, n: usize, trees: &[FreeTree]) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{}", cache_header(n))?;
    for t in trees {
        writeln!(out, "{} {} {}", t.n(), t.code_string(), t.aut_order())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_catalog(path: &Path, n: usize) -> Result<Vec<FreeTree>> {
    let reader = BufReader::new(fs::File::open(path)?);
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Err(parse_err(1, "empty cache file".into())),
    };
    let expected = cache_header(n);
    if header != expected {
        if header.starts_with(CACHE_MAGIC) {
            return Err(Error::CacheMismatch {
                path: path.to_path_buf(),
                msg: format!("header is {header:?}, expected {expected:?}"),
            });
        }
        return Err(parse_err(1, format!("bad header {header:?}")));
    }
    let n_fact = factorial(n as u64);
    let mut trees = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        let fields: Vec<&str> = line.split(' ').collect();
        let [count, code, aut] = fields[..] else {
            return Err(parse_err(
                lineno,
                format!("expected 3 fields, got {}", fields.len()),
            ));
        };
        if count.parse::<usize>().ok() != Some(n) {
            return Err(parse_err(
                lineno,
                format!("vertex count {count:?} is not {n}"),
            ));
        }
        let levels = code
            .split(',')
            .map(str::parse::<u32>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(lineno, format!("bad level sequence {code:?}: {e}")))?;
        if levels.len() != n {
            return Err(parse_err(
                lineno,
                format!("level sequence has {} entries", levels.len()),
            ));
        }
        let tree = FreeTree::from_levels(levels).map_err(|e| parse_err(lineno, e.to_string()))?;
        let aut: BigUint = aut
            .parse()
            .map_err(|e| parse_err(lineno, format!("bad automorphism order {aut:?}: {e}")))?;
        if aut.is_zero() || !(&n_fact % &aut).is_zero() {
            return Err(parse_err(
                lineno,
                format!("automorphism order {aut} does not divide {n}!"),
            ));
        }
        trees.push(tree.with_aut(aut));
    }
    Ok(trees)
}
