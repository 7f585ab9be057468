//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own canonical forms or counting formulas.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

/// The labeled tree with Prüfer sequence `seq` on `seq.len() + 2` vertices.
pub fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Calls `f` on every Prüfer sequence of length `n - 2`.
pub fn for_each_labeled_tree(n: usize, mut f: impl FnMut(&[(usize, usize)])) {
    if n == 1 {
        f(&[]);
        return;
    }
    if n == 2 {
        f(&[(0, 1)]);
        return;
    }
    let mut seq = vec![0usize; n - 2];
    loop {
        f(&prufer_decode(&seq));
        let mut i = 0;
        loop {
            if i == seq.len() {
                return;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn ahu(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| ahu(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism invariant: the smallest rooted parenthesis code over all roots.
pub fn ahu_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let adj = adjacency(n, edges);
    (0..n).map(|r| ahu(&adj, r, usize::MAX)).min().unwrap()
}

/// Isomorphism classes of trees on `n` vertices, grown by attaching a leaf
/// to every vertex of every class on `n - 1` vertices.
pub fn classes_by_growth(n: usize) -> BTreeSet<String> {
    let mut reps: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for edges in &reps {
            for v in 0..size - 1 {
                let mut grown = edges.clone();
                grown.push((v, size - 1));
                if seen.insert(ahu_canonical(size, &grown)) {
                    next.push(grown);
                }
            }
        }
        reps = next;
    }
    reps.iter().map(|e| ahu_canonical(n, e)).collect()
}

/// Automorphism count by trying all `n!` permutations.
pub fn automorphisms_brute(n: usize, edges: &[(usize, usize)]) -> usize {
    let edge_set: BTreeSet<(usize, usize)> =
        edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    permutations(&mut perm, 0, &mut |p| {
        if edges
            .iter()
            .all(|&(a, b)| edge_set.contains(&(p[a].min(p[b]), p[a].max(p[b]))))
        {
            count += 1;
        }
    });
    count
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Closed walks from `start` crossing every edge exactly `2m` times,
/// counted by memoized search over (position, remaining crossings).
pub fn count_walks(n: usize, edges: &[(usize, usize)], start: usize, m: usize) -> u128 {
    let mut incidence = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        incidence[a].push((b, i));
        incidence[b].push((a, i));
    }
    let mut memo: HashMap<(usize, Vec<u8>), u128> = HashMap::new();

    fn go(
        at: usize,
        left: &mut Vec<u8>,
        start: usize,
        incidence: &[Vec<(usize, usize)>],
        memo: &mut HashMap<(usize, Vec<u8>), u128>,
    ) -> u128 {
        if left.iter().all(|&l| l == 0) {
            return u128::from(at == start);
        }
        if let Some(&v) = memo.get(&(at, left.clone())) {
            return v;
        }
        let mut total = 0;
        for &(next, e) in &incidence[at] {
            if left[e] > 0 {
                left[e] -= 1;
                total += go(next, left, start, incidence, memo);
                left[e] += 1;
            }
        }
        memo.insert((at, left.clone()), total);
        total
    }

    if edges.is_empty() {
        return 1;
    }
    let mut left = vec![2 * m as u8; edges.len()];
    go(start, &mut left, start, &incidence, &mut memo)
}

pub fn catalan(n: u64) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n {
        c = c * 2 * (2 * i as u128 + 1) / (i as u128 + 2);
    }
    c
}
