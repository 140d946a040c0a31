//! Command-line surface: manifold and theory ingestion, batch computation,
//! verification suites and report emission.  All numeric output is exact
//! (`num/den` strings and cyclotomic coefficient lists), never floating
//! point.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use finitetft::cohomology::{brute_cohomology_oracle, cohomology_pair, Pair};
use finitetft::duality::{duality_map_object, verify_duality_square};
use finitetft::error::Error;
use finitetft::simplicial::{
    bordism_from_file, complex_from_file, library_bordism, library_closed, library_complex,
    library_names, Bordism, SimComplex,
};
use finitetft::spectra::{parse_group, parse_theory, TheorySpec};
use finitetft::suite::{self, SuiteConfig, SuiteOutcome};
use finitetft::tft::{bordism_map, partition_function, TftMap};

#[derive(Parser)]
#[command(
    name = "finitetft",
    about = "Exact finite homotopy TFTs on triangulated manifolds, with an abelian-duality verifier",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology orders and invariant factors of a complex, per degree.
    Cohomology {
        /// Library name or file (use `file:PATH` to force a file).
        complex: String,
        /// Coefficient group, e.g. `2`, `4`, `2x2`, `6`.
        #[arg(long)]
        coeff: String,
        /// Degree range `lo..hi` (inclusive); defaults to `0..dim`.
        #[arg(long)]
        degrees: Option<String>,
        /// Cross-check each degree against the enumeration oracle.
        #[arg(long)]
        oracle: bool,
        /// Enumeration bound for the oracle.
        #[arg(long, default_value_t = 1_000_000)]
        oracle_cap: u64,
    },
    /// Partition function of a closed manifold.
    Partition {
        manifold: String,
        /// Theory, e.g. `d=2;p=1,A=3` (summands separated by `;`).
        #[arg(long)]
        theory: String,
    },
    /// Transfer matrix of a bordism, with basis legends.
    Bordism {
        bordism: String,
        #[arg(long)]
        theory: String,
    },
    /// The duality map D(N) on a closed oriented manifold.
    DualityMap {
        object: String,
        #[arg(long)]
        theory: String,
        /// Also verify the duality square on the cylinder over the object.
        #[arg(long)]
        check_cylinder: bool,
    },
    /// Run a verification suite: duality | gluing | sizes | euler | pairs |
    /// oracle | klein | exactness | all.
    Verify {
        suite: String,
        /// Parallelism degree for independent suite groups.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 1_000_000)]
        oracle_cap: u64,
        /// Cap on enumerated state pairs in the pairing checks.
        #[arg(long, default_value_t = 10_000)]
        pair_cap: u64,
        /// Restrict fixture-based suites to one dimension.
        #[arg(long)]
        dim: Option<i64>,
    },
    /// List the built-in manifolds and bordisms.
    ListManifolds,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::VerificationFailed(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit(cli: &Cli, text: String) -> Result<(), Error> {
    match &cli.out {
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            // a closed pipe on the reading side is not an error for us
            let _ = writeln!(stdout, "{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {}", path.display(), e))),
    }
}

/// Library names take precedence; `file:` forces a path; otherwise fall
/// back to a path, then to FINITETFT_LIBRARY_PATH directories.
fn resolve_complex(name: &str) -> Result<SimComplex, Error> {
    if let Some(path) = name.strip_prefix("file:") {
        let json = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path, e)))?;
        return complex_from_file(&json);
    }
    match library_complex(name) {
        Ok(k) => Ok(k),
        Err(Error::UnknownManifold(_)) => {
            for candidate in file_candidates(name) {
                if candidate.exists() {
                    let json = std::fs::read_to_string(&candidate).map_err(|e| {
                        Error::InvalidInput(format!("cannot read {}: {}", candidate.display(), e))
                    })?;
                    return complex_from_file(&json);
                }
            }
            Err(Error::UnknownManifold(name.to_string()))
        }
        Err(e) => Err(e),
    }
}

fn resolve_bordism(name: &str) -> Result<Bordism, Error> {
    if let Some(path) = name.strip_prefix("file:") {
        let json = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path, e)))?;
        return bordism_from_file(&json);
    }
    match library_bordism(name) {
        Ok(b) => Ok(b),
        Err(Error::UnknownManifold(_)) => {
            for candidate in file_candidates(name) {
                if candidate.exists() {
                    let json = std::fs::read_to_string(&candidate).map_err(|e| {
                        Error::InvalidInput(format!("cannot read {}: {}", candidate.display(), e))
                    })?;
                    return bordism_from_file(&json);
                }
            }
            Err(Error::UnknownManifold(name.to_string()))
        }
        Err(e) => Err(e),
    }
}

fn file_candidates(name: &str) -> Vec<PathBuf> {
    let mut out = vec![PathBuf::from(name)];
    if let Ok(dirs) = std::env::var("FINITETFT_LIBRARY_PATH") {
        for dir in std::env::split_paths(&dirs) {
            out.push(dir.join(name));
            out.push(dir.join(format!("{}.json", name)));
        }
    }
    out
}

#[derive(Serialize)]
struct CohomologyRow {
    degree: i64,
    order: String,
    invariant_factors: Vec<String>,
    oracle: Option<String>,
}

#[derive(Serialize)]
struct MatrixReport {
    name: String,
    theory: String,
    rows: usize,
    cols: usize,
    domain_basis: Vec<String>,
    codomain_basis: Vec<String>,
    entries: Vec<Vec<String>>,
}

fn matrix_report(name: &str, theory: &TheorySpec, map: &TftMap) -> MatrixReport {
    let legend = |s: &finitetft::tft::StateSpace| -> Vec<String> {
        s.basis
            .iter()
            .map(|b| {
                let coords: Vec<String> = b.iter().map(|c| c.to_string()).collect();
                format!("({})", coords.join(","))
            })
            .collect()
    };
    MatrixReport {
        name: name.to_string(),
        theory: theory.label(),
        rows: map.matrix.rows(),
        cols: map.matrix.cols(),
        domain_basis: legend(&map.domain),
        codomain_basis: legend(&map.codomain),
        entries: (0..map.matrix.rows())
            .map(|i| {
                (0..map.matrix.cols())
                    .map(|j| map.matrix[(i, j)].to_string())
                    .collect()
            })
            .collect(),
    }
}

fn print_matrix_human(rep: &MatrixReport) -> String {
    let mut s = format!(
        "{} [{}]: {} x {}\n  columns (domain): {}\n  rows (codomain): {}\n",
        rep.name,
        rep.theory,
        rep.rows,
        rep.cols,
        rep.domain_basis.join(" "),
        rep.codomain_basis.join(" ")
    );
    for row in &rep.entries {
        s.push_str(&format!("  [ {} ]\n", row.join("  ")));
    }
    s.pop();
    s
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Cohomology {
            complex,
            coeff,
            degrees,
            oracle,
            oracle_cap,
        } => {
            let k = Arc::new(resolve_complex(complex)?);
            let group = parse_group(coeff)?;
            let (lo, hi) = match degrees {
                None => (0, k.dim()),
                Some(r) => parse_range(r)?,
            };
            let pair = Pair::absolute(k.clone());
            let mut rows = Vec::new();
            for degree in lo..=hi {
                let h = cohomology_pair(&pair, &group, degree)?;
                let oracle_result = if *oracle {
                    match brute_cohomology_oracle(&pair, &group, degree, *oracle_cap) {
                        Ok(o) => {
                            if o.order == h.order() {
                                Some(format!("agrees ({} classes)", o.order))
                            } else {
                                return Err(Error::VerificationFailed(format!(
                                    "oracle disagrees in degree {}: {} vs {}",
                                    degree,
                                    o.order,
                                    h.order()
                                )));
                            }
                        }
                        Err(Error::OracleTooLarge(m)) => Some(format!("skipped: {}", m)),
                        Err(e) => return Err(e),
                    }
                } else {
                    None
                };
                rows.push(CohomologyRow {
                    degree,
                    order: h.order().to_string(),
                    invariant_factors: h.factors().iter().map(|f| f.to_string()).collect(),
                    oracle: oracle_result,
                });
            }
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rows).unwrap(),
                Format::Csv => {
                    let mut s = String::from("degree,order,invariant_factors,oracle\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            r.degree,
                            r.order,
                            r.invariant_factors.join(" "),
                            r.oracle.clone().unwrap_or_default()
                        ));
                    }
                    s.pop();
                    s
                }
                Format::Human => {
                    let mut s = format!("H^*({}; Z/{})\n", complex, coeff);
                    for r in &rows {
                        s.push_str(&format!(
                            "  H^{} : order {}  factors [{}]{}\n",
                            r.degree,
                            r.order,
                            r.invariant_factors.join(", "),
                            r.oracle
                                .as_ref()
                                .map(|o| format!("  oracle: {}", o))
                                .unwrap_or_default()
                        ));
                    }
                    s.pop();
                    s
                }
            };
            emit(cli, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Partition { manifold, theory } => {
            let x = parse_theory(theory)?;
            let k = Arc::new(resolve_complex(manifold)?);
            let z = partition_function(&k, &x)?;
            let text = match cli.format {
                Format::Json => format!(
                    "{{\n  \"manifold\": \"{}\",\n  \"theory\": \"{}\",\n  \"value\": \"{}\"\n}}",
                    manifold,
                    x.label(),
                    z
                ),
                Format::Csv => format!("manifold,theory,value\n{},{},{}", manifold, x.label(), z),
                Format::Human => format!("Z[{}]({}) = {}", x.label(), manifold, z),
            };
            emit(cli, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bordism { bordism, theory } => {
            let x = parse_theory(theory)?;
            let b = resolve_bordism(bordism)?;
            let z = bordism_map(&b, &x)?;
            let rep = matrix_report(&b.name, &x, &z);
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rep).unwrap(),
                Format::Csv | Format::Human => print_matrix_human(&rep),
            };
            emit(cli, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DualityMap {
            object,
            theory,
            check_cylinder,
        } => {
            let x = parse_theory(theory)?;
            let obj = library_closed(object)?;
            let d = duality_map_object(&obj, &x)?;
            let rep = matrix_report(&format!("D({})", object), &x, &d);
            let mut text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rep).unwrap(),
                Format::Csv | Format::Human => print_matrix_human(&rep),
            };
            if *check_cylinder {
                let cyl = library_bordism(&format!("cyl({})", object))?;
                let square = verify_duality_square(&cyl, &x)?;
                if !square.ok() {
                    return Err(Error::VerificationFailed(format!(
                        "duality square fails on the cylinder over {}",
                        object
                    )));
                }
                text.push_str("\ncylinder duality square: pass");
            }
            emit(cli, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            jobs,
            oracle_cap,
            pair_cap,
            dim,
        } => {
            let cfg = SuiteConfig {
                oracle_cap: *oracle_cap,
                pair_cap: *pair_cap,
            };
            let jobs = (*jobs).max(1);
            let outcome: SuiteOutcome = match suite.as_str() {
                "all" => suite::run_all(&cfg, jobs)?,
                "klein" => suite::run_klein_suite().sorted(),
                "oracle" => suite::run_oracle_suite(&cfg).sorted(),
                "exactness" => suite::run_exactness_suite().sorted(),
                other => {
                    let mut fixtures = suite::Fixtures::standard()?;
                    if let Some(d) = dim {
                        fixtures.bordisms.retain(|k, _| k == d);
                        if fixtures.bordisms.is_empty() {
                            return Err(Error::InvalidInput(format!(
                                "no suite fixtures in dimension {}",
                                d
                            )));
                        }
                    }
                    match other {
                        "duality" => suite::run_duality_suite(&fixtures).sorted(),
                        "gluing" => suite::run_gluing_suite(&fixtures).sorted(),
                        "sizes" => suite::run_sizes_suite(&fixtures).sorted(),
                        "euler" => suite::run_euler_suite(&fixtures).sorted(),
                        "pairs" => suite::run_pairs_suite(&fixtures, &cfg).sorted(),
                        _ => {
                            return Err(Error::InvalidInput(format!(
                                "unknown suite `{}` (use duality|gluing|sizes|euler|pairs|oracle|klein|exactness|all)",
                                other
                            )))
                        }
                    }
                }
            };
            let ok = outcome.ok();
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&outcome).unwrap(),
                Format::Csv => {
                    let mut s = String::from("suite,name,ok,detail\n");
                    for i in &outcome.items {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            i.suite,
                            i.name.replace(',', ";"),
                            i.ok,
                            i.detail.replace(',', ";")
                        ));
                    }
                    s.pop();
                    s
                }
                Format::Human => {
                    let mut s = String::new();
                    let failed = outcome.items.iter().filter(|i| !i.ok).count();
                    for i in &outcome.items {
                        if !i.ok {
                            s.push_str(&format!("FAIL [{}] {} :: {}\n", i.suite, i.name, i.detail));
                        }
                    }
                    s.push_str(&format!(
                        "{} checks, {} failed -> {}",
                        outcome.items.len(),
                        failed,
                        if ok { "PASS" } else { "FAIL" }
                    ));
                    s
                }
            };
            emit(cli, text)?;
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::ListManifolds => {
            let (manifolds, bordisms) = library_names();
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "manifolds": manifolds,
                    "bordisms": bordisms,
                }))
                .unwrap(),
                Format::Csv => {
                    let mut s = String::from("kind,name\n");
                    for m in &manifolds {
                        s.push_str(&format!("manifold,{}\n", m));
                    }
                    for b in &bordisms {
                        s.push_str(&format!("bordism,{}\n", b));
                    }
                    s.pop();
                    s
                }
                Format::Human => format!(
                    "manifolds:\n  {}\nbordisms:\n  {}",
                    manifolds.join("\n  "),
                    bordisms.join("\n  ")
                ),
            };
            emit(cli, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_range(r: &str) -> Result<(i64, i64), Error> {
    let parts: Vec<&str> = r.split("..").collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "degree range must be lo..hi, got {}",
            r
        )));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad degree {}", parts[0])))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad degree {}", parts[1])))?;
    Ok((lo, hi))
}
