use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use nilprod::build::parse_ring;
use nilprod::suites::Suite;
use nilprod::table1::table1;
use nilprod::{check_suites, parse_manifest, run, ResultDocument};

/// Cosmash products, commutators and bilinear products, computed exactly.
#[derive(Parser)]
#[command(name = "nilprod", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the commands of a manifest.
    Run {
        manifest: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the result document here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run randomized property suites.
    Check {
        /// bilinearity, rightexact, symmetry, gamma, ganea, birkhoff, kronecker, xmod or all
        #[arg(required = true)]
        suites: Vec<String>,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bilinear products of abelian objects in each variety.
    Table1 {
        /// Z, Q, Fp (with --prime) or F<p>
        #[arg(long)]
        ring: String,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, num_args = 2, required = true, value_names = ["A", "B"])]
        dims: Vec<usize>,
        /// Read the dimensions as orders of cyclic groups (over Z).
        #[arg(long)]
        cyclic: bool,
    },
}

/// A parse or usage problem, reported with exit code 2.
#[derive(Debug)]
struct Usage(anyhow::Error);

fn usage<T>(r: Result<T>) -> Result<T, Usage> {
    r.map_err(Usage)
}

fn emit(doc: &ResultDocument, json: Option<&PathBuf>) -> Result<()> {
    let text = doc.to_json();
    println!("{text}");
    if let Some(path) = json {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<bool, Usage> {
    match cli.command {
        Cmd::Run { manifest, seed, json } => {
            let text = usage(fs::read_to_string(&manifest).with_context(|| format!("reading {}", manifest.display())))?;
            let m = usage(parse_manifest(&text).with_context(|| format!("parsing {}", manifest.display())))?;
            let doc = run(&m, seed);
            usage(emit(&doc, json.as_ref()))?;
            Ok(doc.passed)
        }
        Cmd::Check { suites, cases, seed } => {
            let selected = if suites.iter().any(|s| s == "all") {
                Suite::ALL.to_vec()
            } else {
                usage(suites.iter().map(|s| Suite::parse(s).map_err(anyhow::Error::from)).collect())?
            };
            let doc = check_suites(&selected, cases, seed);
            usage(emit(&doc, None))?;
            Ok(doc.passed)
        }
        Cmd::Table1 { ring, prime, dims, cyclic } => {
            let name = match (ring.as_str(), prime) {
                ("Fp", Some(p)) => format!("F{p}"),
                ("Fp", None) => return Err(Usage(anyhow::anyhow!("--ring Fp needs --prime"))),
                _ => ring.clone(),
            };
            let Some(r) = parse_ring(&name) else {
                return Err(Usage(anyhow::anyhow!("unknown ring `{ring}`")));
            };
            let t = usage(table1(&r, &dims[..1], &dims[1..], cyclic).map_err(anyhow::Error::from))?;
            println!("{}", usage(serde_json::to_string_pretty(&t).map_err(anyhow::Error::from))?);
            Ok(t.agrees())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
