//! Numerical estimates of the growth constants of `C_n^(m)` by
//! difference-operator acceleration.
//!
//! A sequence with an expansion `a_n = C_0 + C_1/n + C_2/n^2 + ...` is sent
//! to `b_n = Delta^k (n^k a_n) / k!`, which removes the first `k` correction
//! terms and leaves `b_n = C_0 + O(n^(-k-1))`.
//!
//! For `C_n^(m) ~ K A^n (n!)^(m-1) n^rho`, the constants are read off in
//! three passes: ratios of `C_n / (n!)^(m-1)` give `A`; logarithmic ratios
//! of `C_n / (A^n (n!)^(m-1))` give `rho`; and
//! `C_n n^(-rho) / (A^n (n!)^(m-1))` gives `K`. The last two passes use the
//! conjectured `A` and `rho`, since an approximate `A` inside `A^n` would
//! swamp everything else.

use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binomial, factorial};
use crate::error::{Error, Result};
use crate::series::hypercatalan_gf;

pub const DEFAULT_PRECISION_BITS: usize = 512;
pub const DEFAULT_ACCEL_POWER: usize = 16;

/// Bits that must survive cancellation in one acceleration window.
const GUARD_BITS: i64 = 32;

const RM: RoundingMode = RoundingMode::ToEven;

fn consts() -> Consts {
    Consts::new().expect("astro-float constants cache")
}

/// Exact conversion of an integer to a float carrying all of its bits.
fn bigfloat_from_biguint(n: &BigUint) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_u64(0, 64);
    }
    let words = n.to_u64_digits();
    BigFloat::from_words(&words, Sign::Pos, 64 * words.len() as i32)
}

pub fn bigfloat_from_rational(q: &BigRational, precision: usize) -> BigFloat {
    let num = bigfloat_from_biguint(q.numer().magnitude());
    let den = bigfloat_from_biguint(q.denom().magnitude());
    let v = num.div(&den, precision, RM);
    if q.is_negative() {
        v.neg()
    } else {
        v
    }
}

/// The exact rational value of a finite float.
pub fn bigfloat_to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _, sign, exponent, _) = x.as_raw_parts()?;
    let mantissa = BigInt::from(BigUint::new(
        words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect(),
    ));
    let shift = i64::from(exponent) - 64 * words.len() as i64;
    let pow = BigInt::one() << shift.unsigned_abs();
    let mut q = if shift >= 0 {
        BigRational::from_integer(mantissa * pow)
    } else {
        BigRational::new(mantissa, pow)
    };
    if sign == Sign::Neg {
        q = -q;
    }
    Some(q)
}

/// Decimal expansion of `x` rounded to `digits` places after the point.
pub fn to_decimal(x: &BigFloat, digits: usize) -> String {
    match bigfloat_to_rational(x) {
        Some(q) => rational_to_decimal(&q, digits),
        None => "NaN".to_string(),
    }
}

pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q.abs() * BigRational::from_integer(scale))
        .round()
        .to_integer();
    let s = scaled.to_string();
    let s = if s.len() <= digits {
        format!("{}{s}", "0".repeat(digits + 1 - s.len()))
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if q.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub fn to_f64(x: &BigFloat) -> f64 {
    bigfloat_to_rational(x)
        .and_then(|q| q.to_f64())
        .unwrap_or(f64::NAN)
}

/// Terms `a_start, a_(start+1), ...` held at one working precision.
#[derive(Debug, Clone)]
pub struct RealSeq {
    values: Vec<BigFloat>,
    start: u64,
    precision: usize,
}

impl RealSeq {
    pub fn new(values: Vec<BigFloat>, start: u64, precision: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(values.len());
        for (i, mut v) in values.into_iter().enumerate() {
            if v.is_nan() || v.is_inf() {
                return Err(Error::invalid(format!(
                    "term {} is not finite",
                    start + i as u64
                )));
            }
            if !v.is_zero() {
                v.set_precision(precision, RM)
                    .map_err(|e| Error::Precision(format!("{e:?}")))?;
            }
            out.push(v);
        }
        Ok(RealSeq {
            values: out,
            start,
            precision,
        })
    }

    pub fn from_rationals(values: &[BigRational], start: u64, precision: usize) -> Self {
        let values = values
            .iter()
            .map(|q| bigfloat_from_rational(q, precision))
            .collect();
        RealSeq {
            values,
            start,
            precision,
        }
    }

    pub fn values(&self) -> &[BigFloat] {
        &self.values
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<&BigFloat> {
        self.values.last()
    }

    /// The last `len` terms.
    pub fn tail(&self, len: usize) -> RealSeq {
        let skip = self.values.len().saturating_sub(len);
        RealSeq {
            values: self.values[skip..].to_vec(),
            start: self.start + skip as u64,
            precision: self.precision,
        }
    }
}

/// `(-1)^(k-j) binom(k, j) / k!`, the weights of `Delta^k / k!`.
fn difference_weights(k: usize) -> Vec<BigRational> {
    let kf = BigInt::from(factorial(k as u64));
    (0..=k)
        .map(|j| {
            let c = BigInt::from(binomial(k as u64, j as u64));
            let c = if (k - j) % 2 == 1 { -c } else { c };
            BigRational::new(c, kf.clone())
        })
        .collect()
}

fn check_accel_args(len: usize, k: usize) -> Result<()> {
    if k % 2 == 1 {
        return Err(Error::invalid(format!(
            "acceleration power {k} must be even"
        )));
    }
    if len <= k {
        return Err(Error::invalid(format!(
            "need more than {k} terms to apply Delta^{k}, got {len}"
        )));
    }
    Ok(())
}

/// `b_n = Delta^k (n^k a_n) / k!` in exact arithmetic. The result starts
/// at the same index and is `k` terms shorter.
pub fn accelerate_exact(values: &[BigRational], start: u64, k: usize) -> Result<Vec<BigRational>> {
    check_accel_args(values.len(), k)?;
    let weights = difference_weights(k);
    let scaled: Vec<BigRational> = values
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = BigInt::from(start + i as u64);
            a * BigRational::from_integer(num_traits::pow(n, k))
        })
        .collect();
    Ok((0..=values.len() - 1 - k)
        .map(|s| {
            weights
                .iter()
                .zip(&scaled[s..=s + k])
                .fold(BigRational::zero(), |acc, (w, x)| acc + w * x)
        })
        .collect())
}

/// Floating-point version of [`accelerate_exact`]. The weights and the
/// powers `n^k` are exact; only the terms are rounded. Fails when one
/// window cancels so many leading bits that fewer than a safe margin of the
/// working precision remain.
pub fn accelerate(seq: &RealSeq, k: usize) -> Result<RealSeq> {
    check_accel_args(seq.len(), k)?;
    let p = seq.precision;
    // weights * k! are integers; divide once at the end
    let kf = bigfloat_from_biguint(&factorial(k as u64));
    let int_weights: Vec<BigFloat> = difference_weights(k)
        .iter()
        .map(|w| {
            bigfloat_from_rational(
                &(w * BigRational::from_integer(factorial(k as u64).into())),
                p,
            )
        })
        .collect();
    let scaled: Vec<BigFloat> = seq
        .values
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = BigUint::from(seq.start + i as u64).pow(k as u32);
            a.mul(&bigfloat_from_biguint(&n), p, RM)
        })
        .collect();
    let mut out = Vec::with_capacity(seq.len() - k);
    for s in 0..=seq.len() - 1 - k {
        let mut acc = BigFloat::from_u64(0, p);
        let mut largest: Option<i64> = None;
        for (w, x) in int_weights.iter().zip(&scaled[s..=s + k]) {
            let term = w.mul(x, p, RM);
            if let Some(e) = term.exponent() {
                if !term.is_zero() {
                    largest = Some(largest.map_or(e as i64, |l: i64| l.max(e as i64)));
                }
            }
            acc = acc.add(&term, p, RM);
        }
        if let Some(top) = largest {
            let kept = if acc.is_zero() {
                0
            } else {
                p as i64 - (top - acc.exponent().map_or(0, i64::from))
            };
            if kept < GUARD_BITS {
                return Err(Error::Precision(format!(
                    "Delta^{k} at n = {} keeps {kept} of {p} bits; raise the precision",
                    seq.start + s as u64
                )));
            }
        }
        out.push(acc.div(&kf, p, RM));
    }
    Ok(RealSeq {
        values: out,
        start: seq.start,
        precision: p,
    })
}

/// Estimated growth constants: `C_n^(m) ~ K A^n (n!)^(m-1) n^rho`.
#[derive(Debug, Clone)]
pub struct GrowthEstimate {
    pub a: BigFloat,
    pub rho: BigFloat,
    pub k: BigFloat,
    pub terms_used: usize,
    pub accel_power: usize,
}

/// Closed-form constants from the conjectured asymptotic
/// `C_n^(m) ~ K_m A^(n+1) (n!)^(m-1) / (pi n)^((m-1)/2)`, with
/// `A = m^(m-1)/(m-1)!` and `rho = -(m-1)/2`.
///
/// `k` is the constant in the normalization used by [`estimate_growth`],
/// `K = K_m A / pi^((m-1)/2)`; `k_m` is the constant as it appears above.
/// For `m = 2` these are `2 e^(3/2)/sqrt(pi)` and `e^(3/2)`. For `m = 1`
/// the classical `C_n ~ 4^n / (n^(3/2) sqrt(pi))` is used, and both are
/// `1/sqrt(pi)`.
#[derive(Debug, Clone)]
pub struct ConjecturedConstants {
    pub m: u32,
    pub a: BigRational,
    pub rho: BigRational,
    pub k: BigFloat,
    pub k_m: BigFloat,
}

impl ConjecturedConstants {
    pub fn a_float(&self, precision: usize) -> BigFloat {
        bigfloat_from_rational(&self.a, precision)
    }

    pub fn rho_float(&self, precision: usize) -> BigFloat {
        bigfloat_from_rational(&self.rho, precision)
    }
}

pub fn conjectured_constants(m: u32, precision: usize) -> Result<ConjecturedConstants> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let p = precision;
    let mut cc = consts();
    let pi = cc.pi(p, RM);
    let sqrt_pi = pi.sqrt(p, RM);
    if m == 1 {
        let k = BigFloat::from_u64(1, p).div(&sqrt_pi, p, RM);
        return Ok(ConjecturedConstants {
            m,
            a: BigRational::from_integer(4.into()),
            rho: BigRational::new((-3).into(), 2.into()),
            k: k.clone(),
            k_m: k,
        });
    }
    let a = BigRational::new(
        BigUint::from(m).pow(m - 1).into(),
        factorial(u64::from(m) - 1).into(),
    );
    let rho = BigRational::new(-BigInt::from(m - 1), 2.into());
    let k_m = if m == 2 {
        let three_halves = BigFloat::from_u64(3, p).div(&BigFloat::from_u64(2, p), p, RM);
        three_halves.exp(p, RM, &mut cc)
    } else {
        // odd m: 2 prod_{j = 2, 4, ..., m-1} binom(j, 2)
        // even m: sqrt(2) prod_{j = 3, 5, ..., m-1} binom(j, 2)
        let first = if m % 2 == 1 { 2 } else { 3 };
        let prod: BigUint = (first..m)
            .step_by(2)
            .map(|j| binomial(u64::from(j), 2))
            .product();
        let lead = if m % 2 == 1 {
            BigFloat::from_u64(2, p)
        } else {
            BigFloat::from_u64(2, p).sqrt(p, RM)
        };
        // m^((2m-3)/2) = m^(m-2) sqrt(m)
        let denom = bigfloat_from_biguint(&BigUint::from(m).pow(m - 2)).mul(
            &BigFloat::from_u64(u64::from(m), p).sqrt(p, RM),
            p,
            RM,
        );
        lead.mul(&bigfloat_from_biguint(&prod), p, RM)
            .div(&denom, p, RM)
    };
    // pi^((m-1)/2)
    let mut pi_pow = pi.powi((m as usize - 1) / 2, p, RM);
    if (m - 1) % 2 == 1 {
        pi_pow = pi_pow.mul(&sqrt_pi, p, RM);
    }
    let k = k_m
        .mul(&bigfloat_from_rational(&a, p), p, RM)
        .div(&pi_pow, p, RM);
    Ok(ConjecturedConstants { m, a, rho, k, k_m })
}

/// `n^e` for a half-integer `e`.
fn half_integer_power(n: u64, e: &BigRational, p: usize) -> BigFloat {
    let twice = (e * BigRational::from_integer(2.into())).to_integer();
    let t = twice.to_i64().expect("small exponent");
    let base = BigFloat::from_u64(n, p);
    let whole = base.powi((t.unsigned_abs() / 2) as usize, p, RM);
    let v = if t.is_odd() {
        whole.mul(&base.sqrt(p, RM), p, RM)
    } else {
        whole
    };
    if t < 0 {
        BigFloat::from_u64(1, p).div(&v, p, RM)
    } else {
        v
    }
}

/// `C_n / (a^n (n!)^(m-1))` for `n = 0..=terms`, exact.
fn normalized(values: &[BigUint], m: u32, a: &BigRational) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    let mut a_pow = BigRational::one();
    let mut out = Vec::with_capacity(values.len());
    for (n, c) in values.iter().enumerate() {
        if n > 0 {
            fact *= n;
            a_pow *= a;
        }
        let den = &a_pow * BigRational::from_integer(num_traits::pow(fact.clone(), m as usize - 1));
        out.push(BigRational::from_integer(c.clone().into()) / den);
    }
    out
}

/// Runs the three-stage estimate on `C_0^(m), ..., C_terms^(m)`, accelerating
/// each auxiliary sequence over its last `k + 1` entries.
pub fn estimate_growth(m: u32, terms: usize, k: usize, precision: usize) -> Result<GrowthEstimate> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if terms < k + 8 {
        return Err(Error::invalid(format!(
            "need at least {} terms for Delta^{k}",
            k + 8
        )));
    }
    let values = hypercatalan_gf(u64::from(m), terms);
    estimate_growth_from(m, &values, k, precision)
}

/// As [`estimate_growth`], on precomputed `C_0^(m), ..., C_terms^(m)`.
pub fn estimate_growth_from(
    m: u32,
    values: &[BigUint],
    k: usize,
    precision: usize,
) -> Result<GrowthEstimate> {
    let terms = values.len().saturating_sub(1);
    if terms < k + 8 {
        return Err(Error::invalid(format!(
            "need at least {} terms for Delta^{k}",
            k + 8
        )));
    }
    let p = precision;
    let conj = conjectured_constants(m, p)?;

    // A: ratios a_(j+1)/a_j of a_n = C_n/(n!)^(m-1), indexed by j, exact
    let plain = normalized(values, m, &BigRational::one());
    let ratios: Vec<BigRational> = plain.windows(2).map(|w| &w[1] / &w[0]).collect();
    let start = ratios.len() - (k + 1);
    let a_exact = accelerate_exact(&ratios[start..], start as u64, k)?;
    let a = bigfloat_from_rational(&a_exact[0], p);

    // rho: log(a_(n+1)/a_n) / log((n+1)/n) with a_n = C_n/(A^n (n!)^(m-1))
    let scaled = normalized(values, m, &conj.a);
    let mut cc = consts();
    let log_ratios: Vec<BigFloat> = (terms - k - 1..terms)
        .map(|n| {
            let r = bigfloat_from_rational(&(&scaled[n + 1] / &scaled[n]), p).ln(p, RM, &mut cc);
            let step = bigfloat_from_rational(
                &BigRational::new((n as i64 + 1).into(), (n as i64).into()),
                p,
            )
            .ln(p, RM, &mut cc);
            r.div(&step, p, RM)
        })
        .collect();
    let rho = accelerate(&RealSeq::new(log_ratios, (terms - k - 1) as u64, p)?, k)?;
    let rho = rho.values()[0].clone();

    // K: a_n n^(-rho) with the conjectured rho
    let neg_rho_conj = -conj.rho.clone();
    let ks: Vec<BigFloat> = (terms - k..=terms)
        .map(|n| {
            bigfloat_from_rational(&scaled[n], p).mul(
                &half_integer_power(n as u64, &neg_rho_conj, p),
                p,
                RM,
            )
        })
        .collect();
    let kk = accelerate(&RealSeq::new(ks, (terms - k) as u64, p)?, k)?;

    Ok(GrowthEstimate {
        a,
        rho,
        k: kk.values()[0].clone(),
        terms_used: terms,
        accel_power: k,
    })
}

/// `|x - y|` as a float.
pub fn abs_diff(x: &BigFloat, y: &BigFloat, precision: usize) -> BigFloat {
    x.sub(y, precision, RM).abs()
}

/// Whether `|x - y| < tol`.
pub fn within(x: &BigFloat, y: &BigFloat, tol: f64, precision: usize) -> bool {
    let d = abs_diff(x, y, precision);
    matches!(
        d.partial_cmp(&BigFloat::from_f64(tol, precision)),
        Some(Ordering::Less)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roundtrip() {
        for v in [q(1, 3), q(-7, 5), q(0, 1), q(123456789, 1)] {
            let f = bigfloat_from_rational(&v, 256);
            let back = bigfloat_to_rational(&f).unwrap();
            assert!((back - &v).abs() < q(1, 1 << 40));
        }
        let exact = bigfloat_from_rational(&q(5, 8), 64);
        assert_eq!(bigfloat_to_rational(&exact).unwrap(), q(5, 8));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(rational_to_decimal(&q(1, 3), 5), "0.33333");
        assert_eq!(rational_to_decimal(&q(-2, 3), 3), "-0.667");
        assert_eq!(rational_to_decimal(&q(5, 1), 2), "5.00");
        assert_eq!(rational_to_decimal(&q(7, 2), 0), "4");
        assert_eq!(rational_to_decimal(&q(1, 1000), 2), "0.00");
    }

    #[test]
    fn constant_sequence_is_fixed() {
        let values = vec![q(7, 3); 20];
        let out = accelerate_exact(&values, 5, 8).unwrap();
        assert!(out.iter().all(|v| *v == q(7, 3)));
        let seq = RealSeq::from_rationals(&values, 5, 256);
        let out = accelerate(&seq, 8).unwrap();
        for v in out.values() {
            assert!(within(
                v,
                &bigfloat_from_rational(&q(7, 3), 256),
                1e-60,
                256
            ));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let values = vec![q(1, 1); 8];
        assert!(accelerate_exact(&values, 1, 8).is_err());
        assert!(accelerate_exact(&values, 1, 3).is_err());
        assert!(estimate_growth(2, 10, 16, 256).is_err());
    }

    #[test]
    fn precision_loss_is_reported() {
        let values: Vec<BigRational> = (1..=40).map(|n| q(1, 1) + q(1, n)).collect();
        let seq = RealSeq::from_rationals(&values, 1000, 64);
        assert!(matches!(accelerate(&seq, 16), Err(Error::Precision(_))));
    }

    #[test]
    fn conjectured_values() {
        let p = 256;
        let c2 = conjectured_constants(2, p).unwrap();
        assert_eq!(c2.a, q(2, 1));
        assert_eq!(c2.rho, q(-1, 2));
        assert!((to_f64(&c2.k) - 5.057_044_580_369_127).abs() < 1e-12);
        assert!((to_f64(&c2.k_m) - 1.5f64.exp()).abs() < 1e-12);
        let c3 = conjectured_constants(3, p).unwrap();
        assert_eq!(c3.a, q(9, 2));
        assert_eq!(c3.rho, q(-1, 1));
        assert!((to_f64(&c3.k_m) - 2.0 / 3f64.powf(1.5)).abs() < 1e-12);
        let c4 = conjectured_constants(4, p).unwrap();
        assert_eq!(c4.a, q(32, 3));
        assert!((to_f64(&c4.k_m) - 3.0 * 2f64.sqrt() / 32.0).abs() < 1e-12);
        let c1 = conjectured_constants(1, p).unwrap();
        assert_eq!(c1.a, q(4, 1));
        assert!((to_f64(&c1.k) - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
