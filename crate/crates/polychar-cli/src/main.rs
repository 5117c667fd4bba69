//! Batch front end for the supercharacter theory crate: ingest a theory
//! specification, emit lattice points, character tables, and statistics,
//! and run verification suites.
//!
//! Exit codes: 0 success, 1 validation error, 2 budget exceeded,
//! 3 verification failure.

use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use polychar::chars::{
    char_table, char_value, degree, kernel_subgroup_family, superclass_representative,
    superclass_size,
};
use polychar::fforacle::{
    dual_orbit, oracle_char_table, oracle_superclass_size, FqMatrix, Side,
    DEFAULT_ORACLE_BUDGET, DEFAULT_ORBIT_BUDGET,
};
use polychar::polytope::{
    count_lattice_points, enumerate_lattice_points, Polytope, DEFAULT_NODE_BUDGET,
};
use polychar::posets::{enumerate_normal_subposets, Composition, Poset};
use polychar::qarith::{int_pow, Int, Rat};
use polychar::{stats, Error, Result};

#[derive(Parser)]
#[command(name = "polychar", version, about = "Supercharacter theories of pattern groups cut out by lattice polytopes", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Theory specification as a JSON file; inline flags override its fields
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,

    /// Field size (any integer >= 2 for formulas; a small prime for oracles)
    #[arg(long, global = true)]
    q: Option<u64>,

    /// Composition as comma-separated parts, e.g. "4,1,2"
    #[arg(long, global = true)]
    beta: Option<String>,

    /// Strict relations as comma-separated pairs, e.g. "1<3,2<3"
    #[arg(long, global = true)]
    poset: Option<String>,

    /// Cap on enumeration nodes, oracle scan size, and orbit size
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every lattice point of the polytope, one per line
    Enum,
    /// Print the full character table
    Table {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate the supercharacter of one tableau at the superclass of another
    Value {
        /// Supercharacter label in "i,j:v;..." form ("0" for the trivial one)
        lam: String,
        /// Superclass label in the same form
        mu: String,
    },
    /// Run one invariant suite against the theory; nonzero exit on failure
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// List the normal subposets of the chain with their shapes and Dyck words
    Posets {
        /// Number of chain elements
        len: usize,
    },
    /// Count the lattice points of a dilation of the polytope
    Count {
        /// Dilation factor applied to the composition bounds
        #[arg(long, default_value_t = 1)]
        dilate: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Inner products of distinct supercharacters vanish
    Orthogonality,
    /// Formula tables and class sizes match brute-force fiber scans
    Oracle,
    /// Powers of q from the statistics match measured orbit sizes
    Stats,
    /// Kernel posets of the canonical families recover all normal subposets
    Kernels,
    /// Normal subposets biject with Dyck words and partition shapes
    Bijections,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct TheorySpec {
    q: Option<u64>,
    #[serde(default)]
    beta: Vec<u32>,
    #[serde(default)]
    poset: Vec<(u32, u32)>,
    #[serde(default)]
    options: SpecOptions,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct SpecOptions {
    #[serde(default)]
    transitive_close: bool,
    node_budget: Option<u64>,
    oracle_budget: Option<u64>,
    orbit_budget: Option<u64>,
}

/// Everything a command needs, resolved from the spec file and flag overrides.
struct Theory {
    poly: Polytope,
    q: Option<u64>,
    node_budget: u64,
    oracle_budget: u64,
    orbit_budget: u64,
}

impl Theory {
    fn q(&self) -> Result<u64> {
        self.q
            .ok_or_else(|| Error::Invalid("this command needs q (flag --q or spec field)".into()))
    }
}

fn parse_beta(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::Invalid(format!("composition part {part:?} is not an integer")))
        })
        .collect()
}

fn parse_poset(text: &str) -> Result<Vec<(u32, u32)>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|pair| {
            let (a, b) = pair
                .trim()
                .split_once('<')
                .ok_or_else(|| Error::Invalid(format!("relation {pair:?} is not of the form i<j")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Invalid(format!("relation endpoint {s:?} is not an integer")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn resolve(cli: &Cli) -> Result<Theory> {
    let mut spec = match &cli.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<TheorySpec>(&text)
                .map_err(|e| Error::Invalid(format!("bad spec file: {e}")))?
        }
        None => TheorySpec::default(),
    };
    if let Some(q) = cli.q {
        spec.q = Some(q);
    }
    if let Some(beta) = &cli.beta {
        spec.beta = parse_beta(beta)?;
    }
    if let Some(poset) = &cli.poset {
        spec.poset = parse_poset(poset)?;
    }
    if let Some(q) = spec.q {
        if q < 2 {
            return Err(Error::Invalid("q must be at least 2".into()));
        }
    }
    let beta = Composition::new(spec.beta)?;
    let poset = Poset::new(beta.len(), &spec.poset, spec.options.transitive_close)?;
    let poly = Polytope::new(beta, poset)?;
    Ok(Theory {
        poly,
        q: spec.q,
        node_budget: cli
            .budget
            .or(spec.options.node_budget)
            .unwrap_or(DEFAULT_NODE_BUDGET),
        oracle_budget: cli
            .budget
            .or(spec.options.oracle_budget)
            .unwrap_or(DEFAULT_ORACLE_BUDGET),
        orbit_budget: cli
            .budget
            .or(spec.options.orbit_budget)
            .unwrap_or(DEFAULT_ORBIT_BUDGET),
    })
}

fn cmd_enum(theory: &Theory) -> Result<i32> {
    let points = enumerate_lattice_points(&theory.poly, theory.node_budget)?;
    eprintln!("{} lattice points", points.len());
    for t in points {
        println!("{}", t.text());
    }
    Ok(0)
}

fn cmd_table(theory: &Theory, format: Format) -> Result<i32> {
    let table = char_table(&theory.poly, theory.q()?, theory.node_budget)?;
    match format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Json => println!("{}", table.to_json()),
    }
    Ok(0)
}

fn cmd_value(theory: &Theory, lam: &str, mu: &str) -> Result<i32> {
    let lam = theory.poly.parse_tableau(lam)?;
    let mu = theory.poly.parse_tableau(mu)?;
    println!("{}", char_value(&theory.poly, &lam, &mu, theory.q()?)?);
    Ok(0)
}

fn cmd_posets(len: usize) -> Result<i32> {
    for p in enumerate_normal_subposets(len)? {
        let shape = p
            .ferrers()?
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",");
        println!("{p} shape={shape} dyck={}", p.dyck()?);
    }
    Ok(0)
}

fn cmd_count(theory: &Theory, dilate: u32) -> Result<i32> {
    println!(
        "{}",
        count_lattice_points(&theory.poly, dilate, theory.node_budget)?
    );
    Ok(0)
}

/// Runs one named check, printing a pass/fail line; failures carry the first
/// counterexample in full.
fn check(name: &str, outcome: std::result::Result<(), String>, failed: &mut bool) {
    match outcome {
        Ok(()) => println!("{name}: pass"),
        Err(witness) => {
            println!("{name}: FAIL {witness}");
            *failed = true;
        }
    }
}

fn suite_orthogonality(theory: &Theory) -> Result<bool> {
    let q = theory.q()?;
    let table = char_table(&theory.poly, q, theory.node_budget)?;
    let mut failed = false;
    let mut bad = None;
    'outer: for (a, nu) in table.index().iter().enumerate() {
        for (b, mu) in table.index().iter().enumerate() {
            let got = table.inner_product(nu, mu)?;
            let want = if a == b {
                Rat::from(table.degrees()[a].clone())
            } else {
                Rat::from(Int::from(0))
            };
            if got != want {
                bad = Some(format!(
                    "<{},{}> = {got}, expected {want}",
                    nu.text(),
                    mu.text()
                ));
                break 'outer;
            }
        }
    }
    let n = table.index().len();
    check(
        &format!("inner products of {n}x{n} table are delta times degree"),
        bad.map_or(Ok(()), Err),
        &mut failed,
    );
    Ok(!failed)
}

fn suite_oracle(theory: &Theory) -> Result<bool> {
    let q = theory.q()?;
    let mut failed = false;
    let table = char_table(&theory.poly, q, theory.node_budget)?;
    let (index, values) = oracle_char_table(&theory.poly, q, theory.oracle_budget)?;
    check(
        "lattice point index agrees with oracle order",
        if table.index() == index.as_slice() {
            Ok(())
        } else {
            Err("enumeration orders differ".into())
        },
        &mut failed,
    );
    let mut bad = None;
    'outer: for (a, row) in table.values().iter().enumerate() {
        for (b, value) in row.iter().enumerate() {
            if value != &values[a][b] {
                bad = Some(format!(
                    "value({},{}) = {value}, oracle found {}",
                    index[a].text(),
                    index[b].text(),
                    values[a][b]
                ));
                break 'outer;
            }
        }
    }
    check("formula table equals oracle table", bad.map_or(Ok(()), Err), &mut failed);
    let mut bad = None;
    for mu in table.index() {
        let formula = superclass_size(&theory.poly, mu, q)?;
        let counted = oracle_superclass_size(&theory.poly, mu, q, theory.oracle_budget)?;
        if formula != counted {
            bad = Some(format!(
                "size({}) = {formula}, oracle counted {counted}",
                mu.text()
            ));
            break;
        }
    }
    check(
        "class sizes match fiber counts",
        bad.map_or(Ok(()), Err),
        &mut failed,
    );
    Ok(!failed)
}

fn suite_stats(theory: &Theory) -> Result<bool> {
    let q = theory.q()?;
    let poly = &theory.poly;
    let n = poly.beta().total() as usize;
    let mut failed = false;
    let mut bad = None;
    let points = enumerate_lattice_points(poly, theory.node_budget)?;
    for lam in &points {
        let rep = superclass_representative(poly, lam)?;
        let seed = FqMatrix::indicator(q, n, &rep)?;
        let left = dual_orbit(poly, &seed, Side::Left, false, theory.orbit_budget)?;
        let right = dual_orbit(poly, &seed, Side::Right, false, theory.orbit_budget)?;
        let both = left.intersection(&right).count() as u64;
        // The dual pairing swaps the acting sides: composing with left
        // multiplication moves the column side of the label.
        let want = [
            (left.len() as u64, stats::dim_right(poly, lam)?, "left orbit"),
            (right.len() as u64, stats::dim_left(poly, lam)?, "right orbit"),
            (both, stats::crossings(poly, lam)?, "orbit intersection"),
        ];
        for (got, exponent, what) in want {
            if Int::from(got) != int_pow(q, exponent) {
                bad = Some(format!(
                    "{what} of {} has size {got}, expected q^{exponent}",
                    lam.text()
                ));
                break;
            }
        }
        if bad.is_some() {
            break;
        }
    }
    check(
        &format!("orbit sizes realize the statistics on {} points", points.len()),
        bad.map_or(Ok(()), Err),
        &mut failed,
    );
    let mut bad = None;
    for lam in &points {
        let by_formula = degree(poly, lam, q)?;
        let at_zero = char_value(poly, lam, &poly.zero(), q)?;
        if by_formula != at_zero {
            bad = Some(format!(
                "degree({}) = {by_formula} but the value at the zero class is {at_zero}",
                lam.text()
            ));
            break;
        }
    }
    check(
        "degrees agree with values at the zero class",
        bad.map_or(Ok(()), Err),
        &mut failed,
    );
    Ok(!failed)
}

fn suite_kernels(theory: &Theory) -> Result<bool> {
    let beta = theory.poly.beta();
    let mut failed = false;
    let mut family: Vec<_> = kernel_subgroup_family(beta)?
        .into_iter()
        .map(|p| p.pairs())
        .collect();
    family.sort();
    family.dedup();
    let mut all: Vec<_> = enumerate_normal_subposets(beta.len())?
        .into_iter()
        .map(|p| p.pairs())
        .collect();
    all.sort();
    check(
        &format!("kernel family recovers all {} normal subposets", all.len()),
        if family == all {
            Ok(())
        } else {
            Err(format!("{} kernels vs {} subposets", family.len(), all.len()))
        },
        &mut failed,
    );
    Ok(!failed)
}

fn suite_bijections(theory: &Theory) -> Result<bool> {
    let l = theory.poly.beta().len();
    let posets = enumerate_normal_subposets(l)?;
    let mut failed = false;
    let mut catalan = vec![Int::from(1)];
    for n in 0..l {
        let next: Int = (0..=n).map(|i| &catalan[i] * &catalan[n - i]).sum();
        catalan.push(next);
    }
    check(
        &format!("normal subposet count at {l} elements is Catalan"),
        if Int::from(posets.len() as u64) == catalan[l] {
            Ok(())
        } else {
            Err(format!("{} subposets vs {}", posets.len(), catalan[l]))
        },
        &mut failed,
    );
    let mut bad = None;
    for p in &posets {
        if &Poset::from_dyck(&p.dyck()?)? != p || &Poset::from_ferrers(&p.ferrers()?)? != p {
            bad = Some(format!("{p} fails a round trip"));
            break;
        }
    }
    check(
        "Dyck and Ferrers round trips are exact",
        bad.map_or(Ok(()), Err),
        &mut failed,
    );
    Ok(!failed)
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::Enum => cmd_enum(&resolve(cli)?),
        Cmd::Table { format } => cmd_table(&resolve(cli)?, *format),
        Cmd::Value { lam, mu } => cmd_value(&resolve(cli)?, lam, mu),
        Cmd::Posets { len } => cmd_posets(*len),
        Cmd::Count { dilate } => cmd_count(&resolve(cli)?, *dilate),
        Cmd::Verify { suite } => {
            let theory = resolve(cli)?;
            let ok = match suite {
                Suite::Orthogonality => suite_orthogonality(&theory)?,
                Suite::Oracle => suite_oracle(&theory)?,
                Suite::Stats => suite_stats(&theory)?,
                Suite::Kernels => suite_kernels(&theory)?,
                Suite::Bijections => suite_bijections(&theory)?,
            };
            Ok(if ok { 0 } else { 3 })
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    match execute(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Budget { .. } => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
