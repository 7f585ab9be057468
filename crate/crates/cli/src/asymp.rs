//! `asymp`: empirical growth constants beside the conjectured ones.

use std::io::Write;

use astro_float::RoundingMode;
use hypercat_core::asymptotics::{
    abs_diff, conjectured_constants, estimate_growth, to_decimal, to_f64,
};
use serde::Serialize;

use crate::{AsympArgs, Cli, Failure, Format, Outcome, VERSION};

#[derive(Debug, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub empirical: String,
    pub conjectured: String,
    pub difference: f64,
}

#[derive(Serialize)]
struct AsympJson<'a> {
    m: u32,
    terms: usize,
    accel_power: usize,
    precision: usize,
    constants: &'a [Row],
    version: &'a str,
}

/// Rows for `A`, `rho`, `K` and `K_m`. `K` is the constant in
/// `C_n ~ K A^n (n!)^(m-1) n^rho`; `K_m = K pi^((m-1)/2) / A` is the same
/// constant with the normalization `K_m A^(n+1) (n!)^(m-1) / (pi n)^((m-1)/2)`.
pub fn rows(a: &AsympArgs) -> Result<Vec<Row>, Failure> {
    let p = a.precision;
    let rm = RoundingMode::ToEven;
    let est = estimate_growth(a.m, a.terms, a.accel_power, p)?;
    let conj = conjectured_constants(a.m, p)?;
    let k_m = est.k.mul(&conj.k_m, p, rm).div(&conj.k, p, rm);
    let pairs = [
        ("A", est.a.clone(), conj.a_float(p)),
        ("rho", est.rho.clone(), conj.rho_float(p)),
        ("K", est.k.clone(), conj.k.clone()),
        ("K_m", k_m, conj.k_m.clone()),
    ];
    Ok(pairs
        .into_iter()
        .map(|(name, e, c)| Row {
            name,
            empirical: to_decimal(&e, a.digits),
            conjectured: to_decimal(&c, a.digits),
            difference: to_f64(&abs_diff(&e, &c, p)),
        })
        .collect())
}

pub fn cmd_asymp(cli: &Cli, a: &AsympArgs, out: &mut dyn Write) -> Outcome {
    let rows = rows(a)?;
    if cli.format == Format::Json {
        let record = AsympJson {
            m: a.m,
            terms: a.terms,
            accel_power: a.accel_power,
            precision: a.precision,
            constants: &rows,
            version: VERSION,
        };
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    } else {
        let w = a.digits + 4;
        if !cli.no_header {
            writeln!(
                out,
                "# m = {}, C_0..C_{}, k = {}, {} bits",
                a.m, a.terms, a.accel_power, a.precision
            )?;
            writeln!(
                out,
                "{:<4} {:>w$} {:>w$} {:>10}",
                "", "empirical", "conjectured", "|diff|"
            )?;
        }
        for r in &rows {
            writeln!(
                out,
                "{:<4} {:>w$} {:>w$} {:>10.3e}",
                r.name, r.empirical, r.conjectured, r.difference
            )?;
        }
    }
    if let Some(tol) = a.assert_tol {
        // K_m follows from K, so it is reported but not tested separately
        if let Some(r) = rows
            .iter()
            .take(3)
            .find(|r| r.difference.is_nan() || r.difference > tol)
        {
            return Err(Failure::Mismatch(format!(
                "{} differs from its conjectured value by {:.3e} > {tol:e}",
                r.name, r.difference
            )));
        }
    }
    Ok(())
}
