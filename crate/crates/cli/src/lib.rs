//! Command-line front end for `hypercat-core`.
//!
//! Every subcommand writes its data to the supplied writer and reports
//! failure through [`Failure`], which maps onto the process exit status:
//! 0 on success, 1 for a verification or assertion failure, 2 for I/O,
//! parse and resource errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercat_core::series::{
    block_partition_count, colored_plane_trees, ell_h_series, ell_h_series_with, hypercat_coeff,
    hypercatalan_gf, root_colored_plane_trees,
};
use hypercat_core::tours::{hypercatalan_from_catalog, hypercatalan_table};
use hypercat_core::trees::catalog;
use num_bigint::BigUint;
use serde::Serialize;

pub mod asymp;
pub mod bfile;
pub mod verify;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hypercat", version, about = "Hypergraph Catalan numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format. `csv` applies to `seq` and `gf`, `bfile` to `seq` only.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Leave out header lines, for golden-file comparisons.
    #[arg(long, global = true)]
    pub no_header: bool,

    /// Worker threads for the tree sum and gluing enumeration.
    #[arg(long, default_value_t = 1, global = true)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Weighted sum over free trees.
    Tree,
    /// Coefficients of the generating function.
    Gf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Add one to every block partition count `W_m(k)`.
    WOffByOne,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print C_0^(m), ..., C_{n_max}^(m).
    Seq(SeqArgs),
    /// Print the coefficients of f_m and F_m.
    Gf(GfArgs),
    /// Run the cross-check battery.
    Verify(VerifyArgs),
    /// Estimate the growth constants and compare them with the conjectured ones.
    Asymp(AsympArgs),
    /// Print the trace polynomial P_{2m}(N, r).
    Gluing(GluingArgs),
    /// Count free trees, or list those on a given number of vertices.
    Trees(TreesArgs),
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = Route::Tree)]
    pub via: Route,
    /// Directory for tree catalogs, one file per vertex count.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Compare against a local OEIS b-file; exit 1 on the first difference.
    #[arg(long)]
    pub compare_bfile: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GfArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    /// Deliberately break one ingredient, to check that the battery notices.
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Args)]
pub struct AsympArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    /// Use C_0, ..., C_terms.
    #[arg(long, default_value_t = 100)]
    pub terms: usize,
    /// Working precision in bits.
    #[arg(long, default_value_t = hypercat_core::asymptotics::DEFAULT_PRECISION_BITS)]
    pub precision: usize,
    /// Order k of the difference operator.
    #[arg(long, default_value_t = hypercat_core::asymptotics::DEFAULT_ACCEL_POWER)]
    pub accel_power: usize,
    /// Exit 1 if any estimate differs from its conjectured value by more than this.
    #[arg(long)]
    pub assert_tol: Option<f64>,
    /// Digits after the decimal point.
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct GluingArgs {
    /// Blocks have 2m sides.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    /// Number of polygon sides; a multiple of 2m.
    #[arg(long, default_value_t = 8)]
    pub r: usize,
    /// Give up after this many gluings.
    #[arg(long, default_value_t = hypercat_core::gluing::DEFAULT_GLUING_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct TreesArgs {
    /// Largest vertex count.
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    /// List the trees on exactly n_max vertices instead of counting.
    #[arg(long)]
    pub list: bool,
    /// Catalog cache file for the listed trees.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    /// A check or comparison came out wrong.
    Mismatch(String),
    /// Input could not be read, or a computation ran out of budget or precision.
    Resource(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Resource(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Mismatch(s) | Failure::Resource(s) => s,
        }
    }
}

impl From<hypercat_core::Error> for Failure {
    fn from(e: hypercat_core::Error) -> Self {
        Failure::Resource(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Resource(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Resource(e.to_string())
    }
}

pub type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let allowed: &[Format] = match cli.command {
        Command::Seq(_) => &[Format::Plain, Format::Csv, Format::Json, Format::Bfile],
        Command::Gf(_) => &[Format::Plain, Format::Csv, Format::Json],
        _ => &[Format::Plain, Format::Json],
    };
    if !allowed.contains(&cli.format) {
        return Err(Failure::Resource(format!(
            "format {:?} is not available for this command",
            cli.format
        )));
    }
    match &cli.command {
        Command::Seq(a) => cmd_seq(cli, a, out),
        Command::Gf(a) => cmd_gf(cli, a, out),
        Command::Verify(a) => verify::cmd_verify(cli, a, out),
        Command::Asymp(a) => asymp::cmd_asymp(cli, a, out),
        Command::Gluing(a) => cmd_gluing(cli, a, out),
        Command::Trees(a) => cmd_trees(cli, a, out),
    }
}

#[derive(Serialize)]
struct SeqJson<'a> {
    m: u32,
    values: Vec<String>,
    route: Route,
    version: &'a str,
}

/// `C_0^(m), ..., C_{n_max}^(m)` by the chosen route.
pub fn sequence(
    m: u32,
    n_max: usize,
    via: Route,
    cache: Option<&Path>,
    jobs: usize,
) -> Result<Vec<BigUint>, Failure> {
    match (via, cache) {
        (Route::Gf, _) => Ok(hypercatalan_gf(u64::from(m), n_max)),
        (Route::Tree, None) => Ok(hypercatalan_table(n_max, m, jobs)?),
        (Route::Tree, Some(dir)) => {
            std::fs::create_dir_all(dir)?;
            let mut values = vec![BigUint::from(1u32)];
            for n in 1..=n_max {
                let path = dir.join(format!("trees-{}.txt", n + 1));
                let trees = catalog(n + 1, Some(&path))?;
                values.push(hypercatalan_from_catalog(&trees, m));
            }
            Ok(values)
        }
    }
}

fn cmd_seq(cli: &Cli, a: &SeqArgs, out: &mut dyn Write) -> Outcome {
    let values = sequence(a.m, a.n_max, a.via, a.cache.as_deref(), cli.jobs)?;
    match cli.format {
        Format::Plain => {
            let line: Vec<String> = values.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Format::Csv => {
            if !cli.no_header {
                writeln!(out, "n,value")?;
            }
            for (n, v) in values.iter().enumerate() {
                writeln!(out, "{n},{v}")?;
            }
        }
        Format::Bfile => out.write_all(bfile::format(&values).as_bytes())?,
        Format::Json => {
            let record = SeqJson {
                m: a.m,
                values: values.iter().map(ToString::to_string).collect(),
                route: a.via,
                version: VERSION,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    if let Some(path) = &a.compare_bfile {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Resource(format!("{}: {e}", path.display())))?;
        let entries = bfile::parse(&text)
            .map_err(|e| Failure::Resource(format!("{}: {e}", path.display())))?;
        let agreed = bfile::compare(&values, &entries).map_err(Failure::Mismatch)?;
        eprintln!("b-file agrees on {agreed} terms");
    }
    Ok(())
}

#[derive(Serialize)]
struct GfJson<'a> {
    m: u64,
    f: Vec<String>,
    values: Vec<String>,
    route: Route,
    version: &'a str,
}

/// `([x^1..x^(n_max+1)] f_m, C_0..C_{n_max})`, optionally with a wrong `W_m`.
pub fn gf_coefficients(m: u64, n_max: usize, fault: Option<Fault>) -> (Vec<BigUint>, Vec<BigUint>) {
    let order = n_max + 1;
    let (ell, h) = match fault {
        None => ell_h_series(m, order),
        Some(Fault::WOffByOne) => {
            ell_h_series_with(m, order, &|m, k| block_partition_count(m, k) + 1u32)
        }
    };
    let f = colored_plane_trees(&ell, order);
    let big_f = root_colored_plane_trees(&ell, &h, order);
    let fs = (1..=order)
        .map(|k| {
            f.integer_coeff(k)
                .and_then(|c| c.to_biguint())
                .expect("f has nonnegative integer coefficients")
        })
        .collect();
    let cs = (0..=n_max).map(|n| hypercat_coeff(&big_f, n)).collect();
    (fs, cs)
}

fn cmd_gf(cli: &Cli, a: &GfArgs, out: &mut dyn Write) -> Outcome {
    let (fs, cs) = gf_coefficients(a.m, a.n_max, None);
    match cli.format {
        Format::Json => {
            let record = GfJson {
                m: a.m,
                f: fs.iter().map(ToString::to_string).collect(),
                values: cs.iter().map(ToString::to_string).collect(),
                route: Route::Gf,
                version: VERSION,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
        _ => {
            let sep = if cli.format == Format::Csv { "," } else { " " };
            if !cli.no_header {
                writeln!(out, "n{sep}[x^(n+1)]f_m{sep}C_n")?;
            }
            for (n, (f, c)) in fs.iter().zip(&cs).enumerate() {
                writeln!(out, "{n}{sep}{f}{sep}{c}")?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GluingJson<'a> {
    m: u64,
    r: usize,
    polynomial: String,
    coefficients: Vec<(u32, String)>,
    version: &'a str,
}

fn cmd_gluing(cli: &Cli, a: &GluingArgs, out: &mut dyn Write) -> Outcome {
    let m = usize::try_from(a.m).map_err(|_| Failure::Resource("m out of range".into()))?;
    let p = hypercat_core::gluing::trace_polynomial_with(m, a.r, a.budget, cli.jobs.max(1))?;
    match cli.format {
        Format::Json => {
            let record = GluingJson {
                m: a.m,
                r: a.r,
                polynomial: p.to_string(),
                coefficients: p.terms().map(|(e, c)| (e, c.to_string())).collect(),
                version: VERSION,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
        _ => writeln!(out, "{p}")?,
    }
    Ok(())
}

#[derive(Serialize)]
struct TreeJson {
    levels: Vec<u32>,
    aut: String,
}

fn cmd_trees(cli: &Cli, a: &TreesArgs, out: &mut dyn Write) -> Outcome {
    if a.list {
        let trees = catalog(a.n_max, a.cache.as_deref())?;
        if cli.format == Format::Json {
            let list: Vec<TreeJson> = trees
                .iter()
                .map(|t| TreeJson {
                    levels: t.levels().to_vec(),
                    aut: t.aut_order().to_string(),
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string(&list)?)?;
        } else {
            if !cli.no_header {
                writeln!(
                    out,
                    "# {} trees on {} vertices: levels aut",
                    trees.len(),
                    a.n_max
                )?;
            }
            for t in &trees {
                writeln!(out, "{} {}", t.code_string(), t.aut_order())?;
            }
        }
        return Ok(());
    }
    let mut counts = Vec::new();
    for n in 1..=a.n_max {
        counts.push(hypercat_core::trees::enumerate_free_trees(n)?.count());
    }
    if cli.format == Format::Json {
        writeln!(out, "{}", serde_json::to_string(&counts)?)?;
    } else {
        for (i, c) in counts.iter().enumerate() {
            writeln!(out, "{} {c}", i + 1)?;
        }
    }
    Ok(())
}
