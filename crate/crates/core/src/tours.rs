//! Closed walks on trees that cross every edge exactly `2m` times, and the
//! tree-sum definition of `C_n^(m)`.
//!
//! Doubling every tree edge into `m` arcs each way gives a balanced digraph
//! with `m^n` oriented spanning trees towards any root. The BEST theorem
//! then counts its Eulerian circuits, and every walk on the tree lifts to
//! exactly `(m!)^(2n)` of them. This gives, for a tree with `n` edges,
//!
//! ```text
//! sum_v a(v) = 2n m^(n+1) / (m!)^(2n) * prod_w (m d(w) - 1)!
//! a(v)       = m d(v) m^n / (m!)^(2n) * prod_w (m d(w) - 1)!
//! ```

use std::thread;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{exact_div, factorial, rational_to_integer};
use crate::error::{Error, Result};
use crate::trees::{catalog, FreeTree};

/// Default limit on edge traversals explored by [`brute_force_tours`].
pub const DEFAULT_STEP_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourCount {
    pub total: BigUint,
    pub per_vertex: Vec<BigUint>,
}

/// `m^n * prod_w (m d(w) - 1)!`, the number of Eulerian circuits of the
/// doubled digraph starting with one fixed arc.
fn circuits_per_start_arc(t: &FreeTree, m: u32) -> BigUint {
    let n = t.edge_count() as u32;
    let mut acc = BigUint::from(m).pow(n);
    for &d in t.degrees() {
        acc *= factorial(u64::from(m * d) - 1);
    }
    acc
}

fn lift_multiplicity(t: &FreeTree, m: u32) -> BigUint {
    factorial(u64::from(m)).pow(2 * t.edge_count() as u32)
}

fn check_m(m: u32) {
    assert!(m >= 1, "tour counts need m >= 1");
}

/// Total number of `2m`-tours over all start vertices.
///
/// The single-vertex tree has one (empty) tour by convention.
pub fn tour_total(t: &FreeTree, m: u32) -> BigUint {
    check_m(m);
    let n = t.edge_count();
    if n == 0 {
        return BigUint::one();
    }
    let start_arcs = BigUint::from(2 * n as u64 * u64::from(m));
    let num = start_arcs * circuits_per_start_arc(t, m);
    exact_div(&num, &lift_multiplicity(t, m), "tour_total")
}

/// Number of `2m`-tours starting and ending at `v`.
pub fn tour_count_at(t: &FreeTree, v: usize, m: u32) -> BigUint {
    check_m(m);
    assert!(v < t.n(), "vertex {v} out of range");
    if t.edge_count() == 0 {
        return BigUint::one();
    }
    let start_arcs = BigUint::from(m * t.degree(v));
    let num = start_arcs * circuits_per_start_arc(t, m);
    exact_div(&num, &lift_multiplicity(t, m), "tour_count_at")
}

pub fn tour_counts(t: &FreeTree, m: u32) -> TourCount {
    let per_vertex: Vec<BigUint> = (0..t.n()).map(|v| tour_count_at(t, v, m)).collect();
    let total = tour_total(t, m);
    debug_assert!(t.n() == 1 || per_vertex.iter().sum::<BigUint>() == total);
    TourCount { total, per_vertex }
}

/// Counts the tours at `v` by exhaustive depth-first search over walks,
/// giving every edge a budget of `2m` crossings in either direction.
///
/// `step_budget` bounds the number of edge traversals explored.
pub fn brute_force_tours(t: &FreeTree, v: usize, m: u32, step_budget: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if v >= t.n() {
        return Err(Error::invalid(format!("vertex {v} out of range")));
    }
    if t.edge_count() == 0 {
        return Ok(BigUint::one());
    }
    // incidence[u] = (neighbor, edge id)
    let mut incidence = vec![Vec::new(); t.n()];
    for (e, (a, b)) in t.edges().into_iter().enumerate() {
        incidence[a].push((b, e));
        incidence[b].push((a, e));
    }
    let mut walker = Walker {
        incidence,
        remaining: vec![2 * m; t.edge_count()],
        left: 2 * m as u64 * t.edge_count() as u64,
        start: v,
        steps: 0,
        budget: step_budget,
        found: 0,
    };
    walker.walk(v)?;
    Ok(BigUint::from(walker.found))
}

struct Walker {
    incidence: Vec<Vec<(usize, usize)>>,
    remaining: Vec<u32>,
    left: u64,
    start: usize,
    steps: u64,
    budget: u64,
    found: u64,
}

impl Walker {
    fn walk(&mut self, at: usize) -> Result<()> {
        if self.left == 0 {
            if at == self.start {
                self.found += 1;
            }
            return Ok(());
        }
        for i in 0..self.incidence[at].len() {
            let (next, e) = self.incidence[at][i];
            if self.remaining[e] == 0 {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::Budget {
                    what: "brute-force tour search".into(),
                    budget: self.budget,
                });
            }
            self.remaining[e] -= 1;
            self.left -= 1;
            self.walk(next)?;
            self.remaining[e] += 1;
            self.left += 1;
        }
        Ok(())
    }
}

/// `sum_v a(v) / |Aut(T)|` for one tree.
pub fn tree_contribution(t: &FreeTree, m: u32) -> BigRational {
    BigRational::new(tour_total(t, m).into(), t.aut_order().clone().into())
}

/// Tree-sum over an explicit catalog of trees on `n + 1` vertices.
pub fn hypercatalan_from_catalog(trees: &[FreeTree], m: u32) -> BigUint {
    let sum = trees
        .iter()
        .map(|t| tree_contribution(t, m))
        .fold(BigRational::zero(), |acc, q| acc + q);
    into_count(sum, m)
}

fn into_count(sum: BigRational, m: u32) -> BigUint {
    let value = rational_to_integer(&sum)
        .unwrap_or_else(|| panic!("tree sum for m={m} is not an integer: {sum}"));
    value.to_biguint().expect("tree sum is nonnegative")
}

/// `C_n^(m)` by summing over all unlabeled trees on `n + 1` vertices.
pub fn hypercatalan(n: usize, m: u32) -> Result<BigUint> {
    hypercatalan_with_jobs(n, m, 1)
}

/// As [`hypercatalan`], splitting the per-tree work over `jobs` threads.
pub fn hypercatalan_with_jobs(n: usize, m: u32, jobs: usize) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    let trees = catalog(n + 1, None)?;
    if jobs <= 1 || trees.len() < 2 * jobs {
        return Ok(hypercatalan_from_catalog(&trees, m));
    }
    let chunk = trees.len().div_ceil(jobs);
    let sum = thread::scope(|s| {
        let handles: Vec<_> = trees
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|t| tree_contribution(t, m))
                        .fold(BigRational::zero(), |acc, q| acc + q)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .fold(BigRational::zero(), |acc, q| acc + q)
    });
    Ok(into_count(sum, m))
}

/// `C_0^(m), ..., C_{n_max}^(m)` by the tree sum.
pub fn hypercatalan_table(n_max: usize, m: u32, jobs: usize) -> Result<Vec<BigUint>> {
    (0..=n_max)
        .map(|n| hypercatalan_with_jobs(n, m, jobs))
        .collect()
}
