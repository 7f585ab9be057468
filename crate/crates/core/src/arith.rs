//! Small exact-arithmetic helpers shared by the counting modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Cached `0!, 1!, ..., n!`.
#[derive(Debug, Clone)]
pub struct FactorialTable(Vec<BigUint>);

impl FactorialTable {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(BigUint::one());
        for k in 1..=max {
            let next = &table[k - 1] * k;
            table.push(next);
        }
        FactorialTable(table)
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.0[n]
    }
}

/// Exact division; panics if `num` is not a multiple of `den`.
pub(crate) fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> BigUint {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "{what}: division is not exact");
    q
}

/// Returns the integer value of `q`, or `None` when the denominator is not 1.
pub fn rational_to_integer(q: &BigRational) -> Option<BigInt> {
    if q.denom().is_one() {
        Some(q.numer().clone())
    } else {
        None
    }
}
