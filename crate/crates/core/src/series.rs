//! Truncated formal power series with exact rational coefficients, and the
//! generating functions of `C_n^(m)`.
//!
//! With
//!
//! ```text
//! l_m(x) = sum_d W_m(dm) lambda(m, dm) x^d      h_m(x) = sum_d W_m(dm) x^d
//! ```
//!
//! the series `f_m = x l_m(f_m)` counts plane trees colored according to
//! `l_m`, and `F_m = x h_m(f_m)` additionally colors the root according to
//! `h_m`.
//!
//! Index convention: [`generating_function`] returns `F_m` in its shifted
//! form, `sum_n C_n^(m) x^(n+1)`; use [`hypercat_coeff`] or
//! [`hypercatalan_gf`] to read off `C_n^(m)` without worrying about the shift.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, rational_to_integer};
use crate::error::{Error, Result};

/// Coefficients `0..=order` of a power series in `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalSeries[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] + O(x^{})", self.coeffs.len())
    }
}

impl FormalSeries {
    /// Series with the given leading coefficients, zero-padded or truncated
    /// to `order`.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        FormalSeries { coeffs }
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(coeffs: &[T], order: usize) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone().into()))
            .collect();
        Self::new(coeffs, order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![BigRational::one()], order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `x^k` as an integer, if it is one.
    pub fn integer_coeff(&self, k: usize) -> Option<BigInt> {
        rational_to_integer(&self.coeff(k))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    /// `x * self`, keeping the same truncation order.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(BigRational::zero());
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        FormalSeries { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `self(inner)`; `inner` must have zero constant term. The result has
    /// the smaller of the two truncation orders.
    pub fn compose(&self, inner: &FormalSeries) -> Result<FormalSeries> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::invalid(
                "composition needs an inner series with zero constant term",
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        // Horner: only the first `order + 1` outer coefficients can contribute
        let mut acc = FormalSeries::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

impl Add for &FormalSeries {
    type Output = FormalSeries;

    fn add(self, rhs: &FormalSeries) -> FormalSeries {
        let order = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=order)
                .map(|k| &self.coeffs[k] + &rhs.coeffs[k])
                .collect(),
        }
    }
}

impl Sub for &FormalSeries {
    type Output = FormalSeries;

    fn sub(self, rhs: &FormalSeries) -> FormalSeries {
        let order = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=order)
                .map(|k| &self.coeffs[k] - &rhs.coeffs[k])
                .collect(),
        }
    }
}

impl Neg for &FormalSeries {
    type Output = FormalSeries;

    fn neg(self) -> FormalSeries {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &FormalSeries {
    type Output = FormalSeries;

    fn mul(self, rhs: &FormalSeries) -> FormalSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        FormalSeries { coeffs }
    }
}

/// `W_m(k)`: partitions of a `k`-set into blocks of size `m`.
pub fn block_partition_count(m: u64, k: u64) -> BigUint {
    assert!(m >= 1, "block size must be positive");
    if k % m != 0 {
        return BigUint::zero();
    }
    let blocks = k / m;
    factorial(k) / (factorial(m).pow(blocks as u32) * factorial(blocks))
}

/// `lambda(r, g)`: dimension of the degree-`g` homogeneous polynomials in
/// `r` variables.
pub fn homog_dim(r: u64, g: u64) -> BigUint {
    assert!(r >= 1, "need at least one variable");
    binomial(r - 1 + g, r - 1)
}

/// `(l_m, h_m)` truncated at `order`.
pub fn ell_h_series(m: u64, order: usize) -> (FormalSeries, FormalSeries) {
    ell_h_series_with(m, order, &block_partition_count)
}

/// As [`ell_h_series`], with a caller-supplied block partition count. Used to
/// check that the verification battery notices a wrong `W_m`.
pub fn ell_h_series_with(
    m: u64,
    order: usize,
    w: &dyn Fn(u64, u64) -> BigUint,
) -> (FormalSeries, FormalSeries) {
    let mut ell = Vec::with_capacity(order + 1);
    let mut h = Vec::with_capacity(order + 1);
    for d in 0..=order as u64 {
        let wd = w(m, d * m);
        ell.push(BigInt::from(&wd * homog_dim(m, d * m)));
        h.push(BigInt::from(wd));
    }
    (
        FormalSeries::from_integers(&ell, order),
        FormalSeries::from_integers(&h, order),
    )
}

/// Coefficient ring for the power table. Integral inputs run over `BigInt`,
/// which avoids a gcd after every product.
trait Coeff: Clone + Zero + One + for<'a> AddAssign<&'a Self>
where
    for<'a> &'a Self: Mul<&'a Self, Output = Self>,
{
}

impl Coeff for BigInt {}
impl Coeff for BigRational {}

/// Powers of a series with zero constant term, built one coefficient at a
/// time while the series itself is being solved for.
struct PowerTable<T> {
    // rows[d][k] = [x^k] f^d
    rows: Vec<Vec<T>>,
}

impl<T: Coeff> PowerTable<T>
where
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    fn new(order: usize) -> Self {
        let mut rows = vec![vec![T::zero(); order + 1]; order + 1];
        rows[0][0] = T::one();
        PowerTable { rows }
    }

    /// Fills column `k` for every power `d >= 1`, using `f_1..f_k`.
    fn fill_column(&mut self, f: &[T], k: usize) {
        for d in 1..=k {
            let mut acc = T::zero();
            for j in 1..=k + 1 - d {
                let lower = &self.rows[d - 1][k - j];
                if !lower.is_zero() && !f[j].is_zero() {
                    acc += &(&f[j] * lower);
                }
            }
            self.rows[d][k] = acc;
        }
    }

    /// `[x^k] a(f)` for an outer series `a`.
    fn composed_coeff(&self, a: &[T], k: usize) -> T {
        let mut acc = T::zero();
        for (d, ad) in a.iter().enumerate().take(k + 1) {
            let fd = &self.rows[d][k];
            if !fd.is_zero() && !ad.is_zero() {
                acc += &(ad * fd);
            }
        }
        acc
    }
}

fn solve_with_powers<T: Coeff>(a: &[T], order: usize) -> (Vec<T>, PowerTable<T>)
where
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let mut powers = PowerTable::new(order);
    let mut f = vec![T::zero(); order + 1];
    // f_k = [x^(k-1)] a(f); the right side only involves f_1..f_(k-1), so each
    // pass of the fixed-point iteration settles exactly one more coefficient
    for k in 1..=order {
        powers.fill_column(&f, k - 1);
        f[k] = powers.composed_coeff(a, k - 1);
    }
    powers.fill_column(&f, order);
    (f, powers)
}

fn integral(s: &FormalSeries, order: usize) -> Option<Vec<BigInt>> {
    (0..=order)
        .map(|k| rational_to_integer(&s.coeff(k)))
        .collect()
}

fn from_integral(coeffs: Vec<BigInt>) -> FormalSeries {
    FormalSeries {
        coeffs: coeffs.into_iter().map(BigRational::from_integer).collect(),
    }
}

fn padded(s: &FormalSeries, order: usize) -> Vec<BigRational> {
    (0..=order).map(|k| s.coeff(k)).collect()
}

/// Generating function `P` of plane trees whose vertices with `k` children
/// take one of `a_k` colors: the solution of `P = x a(P)` with `P(0) = 0`.
pub fn colored_plane_trees(a: &FormalSeries, order: usize) -> FormalSeries {
    match integral(a, order) {
        Some(ints) => from_integral(solve_with_powers(&ints, order).0),
        None => FormalSeries {
            coeffs: solve_with_powers(&padded(a, order), order).0,
        },
    }
}

/// Trees colored by `a` below the root and by `b` at the root:
/// `x b(P_a)`.
pub fn root_colored_plane_trees(a: &FormalSeries, b: &FormalSeries, order: usize) -> FormalSeries {
    fn shifted<T: Coeff>(a: &[T], b: &[T], order: usize) -> Vec<T>
    where
        for<'x> &'x T: Mul<&'x T, Output = T>,
    {
        let (_, powers) = solve_with_powers(a, order);
        let mut coeffs = vec![T::zero(); order + 1];
        for k in 0..order {
            coeffs[k + 1] = powers.composed_coeff(b, k);
        }
        coeffs
    }
    match (integral(a, order), integral(b, order)) {
        (Some(ai), Some(bi)) => from_integral(shifted(&ai, &bi, order)),
        _ => FormalSeries {
            coeffs: shifted(&padded(a, order), &padded(b, order), order),
        },
    }
}

/// Solves `f = x a(f)` by repeating `f <- x a(f)` from `f = x`, `order`
/// times, with full compositions. Slower than [`colored_plane_trees`] and
/// kept as an independent check.
pub fn solve_by_iteration(a: &FormalSeries, order: usize) -> FormalSeries {
    let a = a.truncate(order);
    let mut f = FormalSeries::x(order);
    for _ in 0..order {
        f = a.compose(&f).expect("f has zero constant term").mul_x();
    }
    f
}

/// `f_m`, the solution of `f = x l_m(f)`.
pub fn solve_f(m: u64, order: usize) -> FormalSeries {
    assert!(m >= 1 && order >= 1, "solve_f needs m >= 1 and order >= 1");
    let (ell, _) = ell_h_series(m, order);
    colored_plane_trees(&ell, order)
}

/// `F_m = x h_m(f_m) = sum_n C_n^(m) x^(n+1)`, truncated at `order`.
pub fn generating_function(m: u64, order: usize) -> FormalSeries {
    let (ell, h) = ell_h_series(m, order);
    root_colored_plane_trees(&ell, &h, order)
}

/// `C_n^(m)` read from the shifted generating function: `[x^(n+1)] F_m`.
pub fn hypercat_coeff(big_f: &FormalSeries, n: usize) -> BigUint {
    assert!(n < big_f.order(), "series truncated before x^{}", n + 1);
    let c = big_f
        .integer_coeff(n + 1)
        .unwrap_or_else(|| panic!("[x^{}]F is not an integer: {}", n + 1, big_f.coeff(n + 1)));
    c.to_biguint().expect("coefficients are nonnegative")
}

/// `C_0^(m), ..., C_{n_max}^(m)` by the generating-function route.
pub fn hypercatalan_gf(m: u64, n_max: usize) -> Vec<BigUint> {
    let big_f = generating_function(m, n_max + 1);
    (0..=n_max).map(|n| hypercat_coeff(&big_f, n)).collect()
}

/// `f^2 - x F + x` with `F = sum_n C_n^(m) x^n` unshifted, which vanishes
/// identically for the true `f_m`, `F_m`. Takes `F` in the shifted form
/// returned by [`generating_function`], where `x F` is simply that series.
pub fn relation_residual(f: &FormalSeries, shifted_f: &FormalSeries) -> FormalSeries {
    let order = f.order().min(shifted_f.order());
    let x = FormalSeries::x(order);
    &(&(f * f) - shifted_f) + &x
}
