//! `verify`: the cross-check battery.

use std::io::Write;

use hypercat_core::gluing::{trace_polynomial_with, DEFAULT_GLUING_BUDGET};
use hypercat_core::plane::{
    admissible_labelings, alpha, beta, enumerate_plane_trees, enumerate_tours, equivalent_tours,
    hypercatalan_via_labelings, DEFAULT_PLANE_TREE_BUDGET,
};
use hypercat_core::series::{
    block_partition_count, colored_plane_trees, ell_h_series, ell_h_series_with, hypercatalan_gf,
    relation_residual, root_colored_plane_trees, FormalSeries,
};
use hypercat_core::tours::{
    brute_force_tours, hypercatalan_table, tour_count_at, DEFAULT_STEP_BUDGET,
};
use hypercat_core::trees::catalog;
use hypercat_core::Error;
use num_bigint::{BigInt, Sign};
use serde::Serialize;

use crate::{gf_coefficients, Cli, Failure, Fault, Format, Outcome, VerifyArgs, VERSION};

type Check = Result<String, String>;

fn err(e: Error) -> String {
    e.to_string()
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Confirmed {
    pub n: usize,
    pub value: String,
    pub routes: Vec<&'static str>,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    m: u32,
    n_max: usize,
    confirmed: &'a [Confirmed],
    checks: &'a [CheckRecord],
    passed: bool,
    version: &'a str,
}

fn series(m: u64, order: usize, fault: Option<Fault>) -> (FormalSeries, FormalSeries) {
    let (ell, h) = match fault {
        None => ell_h_series(m, order),
        Some(Fault::WOffByOne) => {
            ell_h_series_with(m, order, &|m, k| block_partition_count(m, k) + 1u32)
        }
    };
    (
        colored_plane_trees(&ell, order),
        root_colored_plane_trees(&ell, &h, order),
    )
}

/// `C_n^(m)` for `n <= n_max` by every route that fits its budget.
fn confirm_routes(
    m: u32,
    n_max: usize,
    fault: Option<Fault>,
    confirmed: &mut Vec<Confirmed>,
) -> Check {
    let trees = hypercatalan_table(n_max, m, 1).map_err(err)?;
    let (_, gf) = gf_coefficients(u64::from(m), n_max, fault);
    for (n, (t, g)) in trees.iter().zip(&gf).enumerate() {
        if t != g {
            return Err(format!("n = {n}: tree sum {t}, generating function {g}"));
        }
        let mut routes = vec!["tree sum", "generating function"];
        match hypercatalan_via_labelings(n, m as usize, DEFAULT_PLANE_TREE_BUDGET) {
            Ok(l) if l == *t => routes.push("labeled plane trees"),
            Ok(l) => return Err(format!("n = {n}: tree sum {t}, labeled plane trees {l}")),
            Err(Error::Budget { .. }) => {}
            Err(e) => return Err(err(e)),
        }
        confirmed.push(Confirmed {
            n,
            value: t.to_string(),
            routes,
        });
    }
    Ok(format!("{} values", trees.len()))
}

fn tree_sum_vs_gf(fault: Option<Fault>) -> Check {
    for m in 1..=4u32 {
        let trees = hypercatalan_table(10, m, 1).map_err(err)?;
        let (_, gf) = gf_coefficients(u64::from(m), 10, fault);
        if let Some(n) = (0..=10).find(|&n| trees[n] != gf[n]) {
            return Err(format!("m = {m}, n = {n}: {} vs {}", trees[n], gf[n]));
        }
    }
    Ok("n <= 10, m <= 4".into())
}

fn tree_sum_vs_labelings() -> Check {
    for m in 1..=8usize {
        let trees = hypercatalan_table(8 / m, m as u32, 1).map_err(err)?;
        for (n, t) in trees.iter().enumerate() {
            let l = hypercatalan_via_labelings(n, m, DEFAULT_PLANE_TREE_BUDGET).map_err(err)?;
            if l != *t {
                return Err(format!("m = {m}, n = {n}: {t} vs {l}"));
            }
        }
    }
    Ok("nm <= 8".into())
}

fn closed_form_vs_search() -> Check {
    let mut cases = 0;
    for n in 1..=7 {
        for t in catalog(n, None).map_err(err)? {
            for m in 1..=2u32 {
                for v in 0..n {
                    let closed = tour_count_at(&t, v, m);
                    let found = brute_force_tours(&t, v, m, DEFAULT_STEP_BUDGET).map_err(err)?;
                    if closed != found {
                        return Err(format!(
                            "{} vertex {v} m = {m}: {closed} vs {found}",
                            t.code_string()
                        ));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} (tree, vertex, m) cases on <= 7 vertices"))
}

fn gluing_leading_terms(jobs: usize) -> Check {
    for m in 1..=3usize {
        let cs = hypercatalan_gf(m as u64, 12 / (2 * m));
        for r in (2 * m..=12).step_by(2 * m) {
            let p = trace_polynomial_with(m, r, DEFAULT_GLUING_BUDGET, jobs).map_err(err)?;
            let d = r / (2 * m);
            if p.leading_coefficient() != BigInt::from(cs[d].clone())
                || p.degree() != Some(d as u32 + 1)
            {
                return Err(format!("m = {m}, r = {r}: {p}"));
            }
            let w = block_partition_count(2 * m as u64, r as u64);
            if p.eval_at_one() != BigInt::from(w) {
                return Err(format!("m = {m}, r = {r}: P(1) = {}", p.eval_at_one()));
            }
        }
    }
    Ok("m <= 3, r <= 12".into())
}

fn relation(fault: Option<Fault>) -> Check {
    let order = 40;
    for m in 1..=8u64 {
        let (f, big_f) = series(m, order, fault);
        let residual = relation_residual(&f, &big_f);
        if let Some(k) = (0..=order).find(|&k| residual.coeff(k).numer().sign() != Sign::NoSign) {
            return Err(format!(
                "m = {m}: f^2 - xF + x has coefficient {} at x^{k}",
                residual.coeff(k)
            ));
        }
    }
    Ok(format!("m <= 8 to order {order}"))
}

fn roundtrips() -> Check {
    let mut tours = 0;
    let mut labelings = 0;
    for (m, max_vertices) in [(1usize, 5usize), (2, 4)] {
        for n in 1..=max_vertices {
            for t in catalog(n, None).map_err(err)? {
                for v in 0..n {
                    for w in enumerate_tours(&t, v, m, 1_000_000).map_err(err)? {
                        let (pt, lab) = alpha(&t, &w).map_err(err)?;
                        let (t2, w2) = beta(&pt, &lab).map_err(err)?;
                        if t2 != t || !equivalent_tours(&t, &w, &w2).map_err(err)? {
                            return Err(format!("tour {w:?} on {}", t.code_string()));
                        }
                        tours += 1;
                    }
                }
            }
            for pt in enumerate_plane_trees((n - 1) * m + 1).map_err(err)? {
                for lab in admissible_labelings(&pt, m) {
                    let (t, w) = beta(&pt, &lab).map_err(err)?;
                    let (pt2, lab2) = alpha(&t, &w).map_err(err)?;
                    if pt2 != pt || lab2.blocks() != lab.blocks() {
                        return Err(format!("labeling {:?} of {}", lab.blocks(), pt.to_dyck()));
                    }
                    labelings += 1;
                }
            }
        }
    }
    Ok(format!("{tours} tours, {labelings} labeled plane trees"))
}

/// Runs every check. Returns the per-`n` confirmations and the check records.
pub fn battery(a: &VerifyArgs, jobs: usize) -> (Vec<Confirmed>, Vec<CheckRecord>) {
    let mut confirmed = Vec::new();
    let routes = confirm_routes(a.m, a.n_max, a.inject_fault, &mut confirmed);
    let results: Vec<(String, Check)> = vec![
        (
            format!("routes agree for m = {}, n <= {}", a.m, a.n_max),
            routes,
        ),
        (
            "tree sum = generating function".into(),
            tree_sum_vs_gf(a.inject_fault),
        ),
        (
            "tree sum = labeled plane trees".into(),
            tree_sum_vs_labelings(),
        ),
        (
            "closed-form tours = exhaustive search".into(),
            closed_form_vs_search(),
        ),
        (
            "gluing leading coefficients".into(),
            gluing_leading_terms(jobs.max(1)),
        ),
        ("f^2 - xF + x = 0".into(), relation(a.inject_fault)),
        ("alpha/beta roundtrips".into(), roundtrips()),
    ];
    let records = results
        .into_iter()
        .map(|(check, r)| {
            let passed = r.is_ok();
            let detail = r.unwrap_or_else(|e| e);
            CheckRecord {
                check,
                passed,
                detail,
            }
        })
        .collect();
    (confirmed, records)
}

fn route_list(routes: &[&str]) -> String {
    match routes {
        [] => String::new(),
        [one] => one.to_string(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

pub fn cmd_verify(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let (confirmed, records) = battery(a, cli.jobs);
    let failed = records.iter().filter(|r| !r.passed).count();
    if cli.format == Format::Json {
        let record = VerifyJson {
            m: a.m,
            n_max: a.n_max,
            confirmed: &confirmed,
            checks: &records,
            passed: failed == 0,
            version: VERSION,
        };
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    } else {
        if !cli.no_header {
            writeln!(out, "# verify m = {}, n <= {}", a.m, a.n_max)?;
        }
        for c in &confirmed {
            writeln!(
                out,
                "C_{}^({}) = {} by {}",
                c.n,
                a.m,
                c.value,
                route_list(&c.routes)
            )?;
        }
        for r in &records {
            let status = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{status} {}: {}", r.check, r.detail)?;
            if !r.passed {
                writeln!(out, "FAILURE {}", serde_json::to_string(r)?)?;
            }
        }
        writeln!(
            out,
            "{} of {} checks passed",
            records.len() - failed,
            records.len()
        )?;
    }
    if failed > 0 {
        return Err(Failure::Mismatch(format!("{failed} checks failed")));
    }
    Ok(())
}
