use hypercat_core::gluing::{
    bell_polynomials, enumerate_gluings, gluing_weight, moment_normalizer, moment_series,
    trace_polynomial, vertex_classes,
};
use hypercat_core::series::{block_partition_count, hypercatalan_gf};
use hypercat_core::{GWeightPolynomial, NPolynomial};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

fn numerator(m: usize, n: usize) -> GWeightPolynomial {
    let den = moment_normalizer(m, n).unwrap();
    moment_series(m, n)[n].scale(&BigRational::from_integer(den.into()))
}

fn integer_poly(terms: &[(&[u32], i64)]) -> GWeightPolynomial {
    GWeightPolynomial::from_terms(
        terms
            .iter()
            .map(|(e, c)| (e.to_vec(), BigRational::from_integer(BigInt::from(*c)))),
    )
}

#[test]
fn printed_moment_polynomials() {
    assert_eq!(numerator(1, 2), integer_poly(&[(&[2], 1), (&[0, 1], 1)]));
    let a4 = integer_poly(&[
        (&[4], 1),
        (&[2, 1], 6),
        (&[1, 0, 1], 4),
        (&[0, 2], 3),
        (&[0, 0, 0, 1], 1),
    ]);
    assert_eq!(numerator(1, 4), a4);
    let a6 = integer_poly(&[
        (&[6], 1),
        (&[4, 1], 15),
        (&[3, 0, 1], 20),
        (&[2, 2], 45),
        (&[2, 0, 0, 1], 15),
        (&[1, 1, 1], 60),
        (&[1, 0, 0, 0, 1], 6),
        (&[0, 3], 15),
        (&[0, 1, 0, 1], 15),
        (&[0, 0, 2], 10),
        (&[0, 0, 0, 0, 0, 1], 1),
    ]);
    assert_eq!(numerator(1, 6), a6);
    assert_eq!(numerator(2, 4), numerator(1, 4));
    let b8 = numerator(2, 8);
    for (exps, c) in [
        (&[8u32][..], 1),
        (&[6, 1], 28),
        (&[5, 0, 1], 56),
        (&[0, 0, 0, 2], 35),
        (&[0, 0, 0, 0, 0, 0, 0, 1], 1),
    ] {
        assert_eq!(
            b8.coeff(exps),
            BigRational::from_integer(c.into()),
            "{exps:?}"
        );
    }
    assert_eq!(
        moment_series(2, 8)[8].coeff(&[0, 0, 0, 2]),
        BigRational::new(35.into(), 1152.into())
    );
}

#[test]
fn moment_series_display_order() {
    assert_eq!(
        numerator(1, 4).to_string(),
        "g_1^4 + 6*g_1^2*g_2 + 4*g_1*g_3 + 3*g_2^2 + g_4"
    );
}

#[test]
fn odd_orders_vanish_and_degrees_are_homogeneous() {
    for m in 1..=3 {
        for (n, c) in moment_series(m, 12).iter().enumerate() {
            if n % (2 * m) != 0 {
                assert!(c.is_empty(), "m={m} n={n}");
            } else {
                assert_eq!(c.weighted_degree(), Some(n as u64));
            }
        }
    }
}

#[test]
fn bell_polynomials_count_set_partitions_by_block_sizes() {
    // coefficient of g_1^a g_2^b in Y_n counts partitions with a singletons
    // and b pairs: n! / (1!^a a! 2!^b b!)
    let ys = bell_polynomials(8);
    let fact = |k: u64| -> BigUint { (1..=k).map(BigUint::from).product() };
    for n in 0..=8u64 {
        for b in 0..=n / 2 {
            let a = n - 2 * b;
            let want = fact(n) / (fact(a) * BigUint::from(2u32).pow(b as u32) * fact(b));
            let got = ys[n as usize].coeff(&[a as u32, b as u32]);
            assert_eq!(
                got,
                BigRational::from_integer(want.into()),
                "n={n} a={a} b={b}"
            );
        }
    }
}

#[test]
fn trace_polynomials_lead_with_hypercatalan_numbers() {
    for m in 1..=3usize {
        let cs = hypercatalan_gf(m as u64, 12 / (2 * m));
        for r in (2 * m..=12).step_by(2 * m) {
            let p = trace_polynomial(m, r).unwrap();
            let d = r / (2 * m);
            assert_eq!(p.degree(), Some(d as u32 + 1), "m={m} r={r}");
            assert_eq!(p.leading_coefficient(), BigInt::from(cs[d].clone()));
            assert_eq!(
                p.eval_at_one(),
                BigInt::from(block_partition_count(2 * m as u64, r as u64))
            );
        }
    }
}

#[test]
fn pairings_weight_by_vertex_count() {
    for r in [2, 4, 6, 8, 10] {
        let mut expect = vec![0i64; r + 2];
        for g in enumerate_gluings(r, 1).unwrap() {
            expect[vertex_classes(&g)] += 1;
        }
        let direct = NPolynomial::from_terms(
            expect
                .iter()
                .enumerate()
                .map(|(e, &c)| (e as u32, BigInt::from(c))),
        );
        assert_eq!(trace_polynomial(1, r).unwrap(), direct);
    }
}

#[test]
fn weights_are_rotation_invariant() {
    for g in enumerate_gluings(8, 2).unwrap() {
        let rotated: Vec<Vec<usize>> = g
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&e| (e + 3) % 8).collect())
            .collect();
        let h = hypercat_core::Gluing::new(8, 2, rotated).unwrap();
        assert_eq!(gluing_weight(&g), gluing_weight(&h));
    }
}

#[test]
fn pairings_of_a_hexagon_at_genus_zero() {
    let top = enumerate_gluings(6, 1)
        .unwrap()
        .filter(|g| vertex_classes(g) == 4)
        .count();
    assert_eq!(top, 5);
}
