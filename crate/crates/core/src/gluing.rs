//! Polygon gluings into blocks of `2m` sides, the trace polynomials
//! `P_2m(N, r)` of the matrix model built on them, and the Bell-polynomial
//! moment series.
//!
//! A gluing is a partition of the sides `0..r` of an `r`-gon into blocks of
//! size `2m`. Side `e` runs clockwise from polygon vertex `e` to `e + 1`.
//!
//! The weight of a gluing comes from expanding `Tr X^r` under the formal
//! measure whose moments are `<x^k> = W_2m(k)`. All sides in a block carry
//! the same matrix entry up to transposition. Writing an off-diagonal entry
//! as `Y + iZ` and keeping only the pure `Y^2m` and `Z^2m` moments, a block
//! survives exactly when the number of sides read against the first side's
//! direction has the parity of `m`. There are `c = 2^(2m-2)` such
//! orientation patterns. Each identifies the block's sides into one edge and
//! contributes `N^(classes)`. The diagonal entries are then counted `c`
//! times, once per pattern, so every block also carries a correction
//! `-(c - 1)` times the contraction that merges all of its endpoints. For
//! `m = 1` this reduces to the orientable pairings of the polygon.

use std::collections::BTreeMap;
use std::fmt;
use std::thread;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, factorial};
use crate::error::{Error, Result};
use crate::series::block_partition_count;

/// Default cap on the number of gluings visited by [`trace_polynomial`].
pub const DEFAULT_GLUING_BUDGET: u64 = 3_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gluing {
    r: usize,
    block_size: usize,
    blocks: Vec<Vec<usize>>,
}

impl Gluing {
    pub fn new(r: usize, m: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let k = 2 * m;
        if m == 0 || r % k != 0 {
            return Err(Error::invalid(format!(
                "{r} sides cannot be split into blocks of {k}"
            )));
        }
        let mut seen = vec![false; r];
        for b in &mut blocks {
            b.sort_unstable();
            if b.len() != k {
                return Err(Error::invalid(format!(
                    "block {b:?} does not have {k} sides"
                )));
            }
            for &e in b.iter() {
                if e >= r || seen[e] {
                    return Err(Error::invalid(format!(
                        "side {e} is repeated or out of range"
                    )));
                }
                seen[e] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("gluing does not cover every side"));
        }
        blocks.sort_unstable();
        Ok(Gluing {
            r,
            block_size: k,
            blocks,
        })
    }

    fn from_labels(r: usize, k: usize, labels: &[usize]) -> Self {
        let mut blocks = vec![Vec::with_capacity(k); r / k];
        for (e, &l) in labels.iter().enumerate() {
            blocks[l].push(e);
        }
        Gluing {
            r,
            block_size: k,
            blocks,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn m(&self) -> usize {
        self.block_size / 2
    }

    /// Blocks sorted internally and by smallest side.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
}

/// Uniform set partitions of `0..r` as restricted growth strings, in
/// lexicographic order.
pub struct Gluings {
    r: usize,
    k: usize,
    labels: Option<Vec<usize>>,
}

impl Gluings {
    fn first(r: usize, k: usize) -> Vec<usize> {
        (0..r).map(|e| e / k).collect()
    }

    /// Completes `labels[from..]` with the smallest labels that still leave
    /// every block exactly `k` sides.
    fn fill(labels: &mut [usize], from: usize, k: usize, counts: &mut [usize]) {
        for slot in labels.iter_mut().skip(from) {
            let l = counts
                .iter()
                .position(|&c| c < k)
                .expect("capacity matches slots");
            counts[l] += 1;
            *slot = l;
        }
    }

    fn advance(&mut self) {
        let Some(labels) = self.labels.as_mut() else {
            return;
        };
        let (r, k) = (self.r, self.k);
        let blocks = r / k;
        let mut counts = vec![0usize; blocks];
        for &l in labels.iter() {
            counts[l] += 1;
        }
        // prefix_max[i] = largest label among labels[..i]
        let mut prefix_max = vec![0usize; r + 1];
        for i in 0..r {
            prefix_max[i + 1] = if i == 0 {
                labels[0]
            } else {
                prefix_max[i].max(labels[i])
            };
        }
        for i in (1..r).rev() {
            counts[labels[i]] -= 1;
            let limit = (prefix_max[i] + 1).min(blocks - 1);
            if let Some(l) = (labels[i] + 1..=limit).find(|&l| counts[l] < k) {
                counts[l] += 1;
                labels[i] = l;
                Self::fill(labels, i + 1, k, &mut counts);
                return;
            }
        }
        self.labels = None;
    }
}

impl Iterator for Gluings {
    type Item = Gluing;

    fn next(&mut self) -> Option<Gluing> {
        let g = Gluing::from_labels(self.r, self.k, self.labels.as_ref()?);
        self.advance();
        Some(g)
    }
}

/// Every gluing of an `r`-gon into blocks of `2m` sides.
pub fn enumerate_gluings(r: usize, m: usize) -> Result<Gluings> {
    if m == 0 || r % (2 * m) != 0 {
        return Err(Error::invalid(format!(
            "2m = {} must divide r = {r}",
            2 * m
        )));
    }
    let k = 2 * m;
    Ok(Gluings {
        r,
        k,
        labels: Some(Gluings::first(r, k)),
    })
}

struct UnionFind(Vec<u16>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u16).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] as usize != x {
            let up = self.0[self.0[x] as usize];
            self.0[x] = up;
            x = up as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b as u16;
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Endpoints of side `e` read clockwise, or reversed.
fn side(e: usize, r: usize, reversed: bool) -> (usize, usize) {
    if reversed {
        ((e + 1) % r, e)
    } else {
        (e, (e + 1) % r)
    }
}

/// Merges the sides of a block into one edge, side `j` reversed when bit `j`
/// of `pattern` is set.
fn identify(block: &[usize], r: usize, pattern: u32, uf: &mut UnionFind) {
    let (s0, t0) = side(block[0], r, pattern & 1 == 1);
    for (j, &e) in block.iter().enumerate().skip(1) {
        let (s, t) = side(e, r, pattern >> j & 1 == 1);
        uf.union(s0, s);
        uf.union(t0, t);
    }
}

/// `v(pi)`: vertex classes after identifying every block with alternating
/// orientations, the first side clockwise.
pub fn vertex_classes(g: &Gluing) -> usize {
    let mut uf = UnionFind::new(g.r);
    let alternating: u32 = (0..g.block_size)
        .filter(|j| j % 2 == 1)
        .map(|j| 1 << j)
        .sum();
    for b in &g.blocks {
        identify(b, g.r, alternating, &mut uf);
    }
    uf.classes()
}

/// One way of contracting a block: a list of vertex merges and its sign.
struct Contraction {
    coef: i64,
    merges: Vec<(usize, usize)>,
}

fn block_contractions(block: &[usize], r: usize, m: usize) -> Vec<Contraction> {
    let k = block.len();
    let mut out = Vec::new();
    // bit 0 stays clear: the first side fixes which index is which
    for pattern in (0u32..1 << k).step_by(2) {
        if pattern.count_ones() as usize % 2 != m % 2 {
            continue;
        }
        let (s0, t0) = side(block[0], r, false);
        let merges = block
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(j, &e)| {
                let (s, t) = side(e, r, pattern >> j & 1 == 1);
                [(s0, s), (t0, t)]
            })
            .collect();
        out.push(Contraction { coef: 1, merges });
    }
    let c = out.len() as i64;
    if c > 1 {
        let merges = block
            .iter()
            .flat_map(|&e| [(block[0], e), (block[0], (e + 1) % r)])
            .collect();
        out.push(Contraction {
            coef: 1 - c,
            merges,
        });
    }
    out
}

/// Adds the weight of one gluing into `acc`, indexed by power of `N`.
fn accumulate_weight(g: &Gluing, acc: &mut [i64]) {
    let per_block: Vec<Vec<Contraction>> = g
        .blocks
        .iter()
        .map(|b| block_contractions(b, g.r, g.m()))
        .collect();

    fn go(per_block: &[Vec<Contraction>], uf: &UnionFind, coef: i64, acc: &mut [i64]) {
        let Some((first, rest)) = per_block.split_first() else {
            let mut uf = UnionFind(uf.0.clone());
            acc[uf.classes()] += coef;
            return;
        };
        for c in first {
            let mut next = UnionFind(uf.0.clone());
            for &(a, b) in &c.merges {
                next.union(a, b);
            }
            go(rest, &next, coef * c.coef, acc);
        }
    }

    go(&per_block, &UnionFind::new(g.r), 1, acc);
}

/// Size of the orbit of `labels` under rotation of the polygon, or `None`
/// unless `labels` is the lexicographically smallest member of that orbit.
/// Rotation preserves the weight, so only orbit representatives need it.
fn rotation_orbit(labels: &[usize], scratch: &mut Vec<usize>) -> Option<usize> {
    let r = labels.len();
    let mut fixed = 1;
    let mut rename = vec![usize::MAX; r];
    for t in 1..r {
        rename.iter_mut().for_each(|x| *x = usize::MAX);
        scratch.clear();
        let mut next = 0;
        for i in 0..r {
            let l = labels[(i + r - t) % r];
            if rename[l] == usize::MAX {
                rename[l] = next;
                next += 1;
            }
            scratch.push(rename[l]);
        }
        match scratch.as_slice().cmp(labels) {
            std::cmp::Ordering::Less => return None,
            std::cmp::Ordering::Equal => fixed += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    Some(r / fixed)
}

/// The contribution of a single gluing to the trace polynomial.
pub fn gluing_weight(g: &Gluing) -> NPolynomial {
    let mut acc = vec![0i64; g.r + 1];
    accumulate_weight(g, &mut acc);
    NPolynomial::from_dense(&acc)
}

/// `P_2m(N, r)`, the sum of [`gluing_weight`] over every gluing.
pub fn trace_polynomial(m: usize, r: usize) -> Result<NPolynomial> {
    let jobs = thread::available_parallelism().map_or(1, |n| n.get());
    trace_polynomial_with(m, r, DEFAULT_GLUING_BUDGET, jobs)
}

/// As [`trace_polynomial`], with an explicit cap on the gluing count and
/// the number of worker threads. Each worker takes every `jobs`-th gluing.
/// Only one gluing per rotation class is weighted.
pub fn trace_polynomial_with(m: usize, r: usize, budget: u64, jobs: usize) -> Result<NPolynomial> {
    if m == 0 || r % (2 * m) != 0 {
        return Err(Error::invalid(format!(
            "2m = {} must divide r = {r}",
            2 * m
        )));
    }
    let total = block_partition_count(2 * m as u64, r as u64);
    if total > BigUint::from(budget) {
        return Err(Error::Budget {
            what: format!("{total} gluings of a {r}-gon"),
            budget,
        });
    }
    let jobs = jobs.max(1);
    let dense = thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                s.spawn(move || {
                    let mut acc = vec![0i64; r + 1];
                    let mut one = vec![0i64; r + 1];
                    let mut scratch = Vec::with_capacity(r);
                    let mut gluings = enumerate_gluings(r, m).expect("checked above");
                    let mut index = 0usize;
                    while let Some(labels) = gluings.labels.clone() {
                        if index % jobs == j {
                            if let Some(orbit) = rotation_orbit(&labels, &mut scratch) {
                                one.iter_mut().for_each(|x| *x = 0);
                                accumulate_weight(
                                    &Gluing::from_labels(r, 2 * m, &labels),
                                    &mut one,
                                );
                                for (a, b) in acc.iter_mut().zip(&one) {
                                    *a += orbit as i64 * b;
                                }
                            }
                        }
                        index += 1;
                        gluings.advance();
                    }
                    acc
                })
            })
            .collect();
        let mut acc = vec![0i64; r + 1];
        for h in handles {
            for (a, b) in acc.iter_mut().zip(h.join().expect("worker panicked")) {
                *a += b;
            }
        }
        acc
    });
    let poly = NPolynomial::from_dense(&dense);
    assert_eq!(
        poly.eval_at_one(),
        BigInt::from(total),
        "P_{}(1, {r}) must count the gluings",
        2 * m
    );
    Ok(poly)
}

/// Polynomial in `N` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NPolynomial {
    coeffs: BTreeMap<u32, BigInt>,
}

impl NPolynomial {
    pub fn from_terms<I: IntoIterator<Item = (u32, BigInt)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        NPolynomial { coeffs }
    }

    fn from_dense(dense: &[i64]) -> Self {
        Self::from_terms(
            dense
                .iter()
                .enumerate()
                .map(|(e, &c)| (e as u32, BigInt::from(c))),
        )
    }

    pub fn coeff(&self, exponent: u32) -> BigInt {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.degree().map_or_else(BigInt::zero, |d| self.coeff(d))
    }

    /// `(exponent, coefficient)` pairs from the highest power down.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .map(|(&e, c)| c * num_traits::pow(n.clone(), e as usize))
            .sum()
    }
}

impl fmt::Display for NPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match e {
                0 => write!(f, "{magnitude}")?,
                _ if magnitude.is_one() => {}
                _ => write!(f, "{magnitude}*")?,
            }
            match e {
                0 => {}
                1 => f.write_str("N")?,
                _ => write!(f, "N^{e}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial over the rationals in the indeterminates `g_1, g_2, ...`.
/// A monomial is keyed by its exponent vector, entry `i` being the power of
/// `g_(i+1)`, with trailing zeros dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GWeightPolynomial {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn trim(mut exps: Vec<u32>) -> Vec<u32> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

impl GWeightPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_terms([(Vec::new(), BigRational::one())])
    }

    /// The single indeterminate `g_i`, `i >= 1`.
    pub fn g(i: usize) -> Self {
        assert!(i >= 1, "indeterminates are g_1, g_2, ...");
        let mut exps = vec![0; i];
        exps[i - 1] = 1;
        Self::from_terms([(exps, BigRational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigRational)>>(terms: I) -> Self {
        let mut out = GWeightPolynomial::zero();
        for (e, c) in terms {
            out.add_term(trim(e), c);
        }
        out
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomials from the largest exponent vector down, which lists higher
    /// powers of `g_1` first.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().rev().map(|(e, c)| (e.as_slice(), c))
    }

    /// `sum_i i * e_i` over every monomial, or `None` if they differ.
    pub fn weighted_degree(&self) -> Option<u64> {
        let mut degrees = self.terms.keys().map(|e| {
            e.iter()
                .enumerate()
                .map(|(i, &p)| (i as u64 + 1) * u64::from(p))
                .sum::<u64>()
        });
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Multiplication by the indeterminate `g_i`.
    pub fn mul_g(&self, i: usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let mut e = e.clone();
            if e.len() < i {
                e.resize(i, 0);
            }
            e[i - 1] += 1;
            (e, c.clone())
        }))
    }
}

impl fmt::Display for GWeightPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, c)) in self.terms().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !magnitude.is_one() || exps.is_empty() {
                factors.push(magnitude.to_string());
            }
            for (j, &p) in exps.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(format!("g_{}", j + 1)),
                    _ => factors.push(format!("g_{}^{p}", j + 1)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Complete exponential Bell polynomials `Y_0, ..., Y_n_max`, from
/// `Y_(n+1) = sum_k binom(n, k) g_(k+1) Y_(n-k)`.
pub fn bell_polynomials(n_max: usize) -> Vec<GWeightPolynomial> {
    let mut ys = vec![GWeightPolynomial::one()];
    for n in 0..n_max {
        let mut next = GWeightPolynomial::zero();
        for k in 0..=n {
            let c = BigRational::from_integer(binomial(n as u64, k as u64).into());
            next = next.add(&ys[n - k].mul_g(k + 1).scale(&c));
        }
        ys.push(next);
    }
    ys
}

/// `(2m)!^d d!` for `n = 2md`: the denominator dividing `Y_n` in the
/// coefficient of `t^n`. `None` when `2m` does not divide `n`.
pub fn moment_normalizer(m: usize, n: usize) -> Option<BigUint> {
    let k = 2 * m;
    if m == 0 || n % k != 0 {
        return None;
    }
    let d = n / k;
    Some(factorial(k as u64).pow(d as u32) * factorial(d as u64))
}

/// Coefficients of `t^0, ..., t^order` in `<exp S(tx)>_2m`, where
/// `S(x) = sum_r g_r x^r / r!` and `<x^k> = W_2m(k)`.
pub fn moment_series(m: usize, order: usize) -> Vec<GWeightPolynomial> {
    assert!(m >= 1, "m must be at least 1");
    bell_polynomials(order)
        .into_iter()
        .enumerate()
        .map(|(n, y)| match moment_normalizer(m, n) {
            Some(den) => y.scale(&BigRational::new(BigInt::one(), den.into())),
            None => GWeightPolynomial::zero(),
        })
        .collect()
}
