use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pfk_core::linalg::CoeffDomain;
use pfk_core::poly::Multidegree;
use pfk_core::report::{ReportFile, Status};

mod checks;

/// Build and verify the equivariant complexes attached to codimension three
/// Pfaffian ideals and Huneke–Ulrich ideals.
#[derive(Parser, Debug)]
#[command(name = "pfk", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Worker threads (reports do not depend on it).
    #[arg(long, global = true, env = "PFK_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Seed for random evaluation points; always recorded in the report.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Record wall-clock time per check (makes reports non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    /// Largest admissible dim of a module slice; degrees beyond it are skipped and the
    /// check is marked truncated.
    #[arg(long, global = true, default_value_t = 4_000_000)]
    budget: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// The complexes C^i resolving the modules M_i.
    C,
    KoszulPfaffian,
    KoszulHu,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum HuCheck {
    H2Cycle,
    Betti,
    H2Hf,
    All,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Construct a complex and write it as JSON.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: Option<usize>,
    },
    /// Run checks and write a report.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Render a saved report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Complex JSON to check instead of a built family.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Check {
    /// Symbolic d∘d = 0 and homogeneity.
    Complex {
        #[command(flatten)]
        src: Source,
    },
    /// Ranks of the differentials at a random point (rank half of the exactness criterion).
    BeRanks {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_delimiter = ',', default_values_t = [32003u32, 65521])]
        primes: Vec<u32>,
    },
    /// Hilbert functions of Koszul homology on the Pfaffians against the filtration prediction.
    Filtration {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_degree)]
        max_deg: Option<Multidegree>,
        #[arg(long, value_parser = parse_field)]
        field: Option<CoeffDomain>,
        /// Use this complex (indexed like the Koszul complex) instead of building it.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Checks on the Koszul complex of the Huneke–Ulrich ideal.
    Hu {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        check: HuCheck,
        #[arg(long, value_parser = parse_degree)]
        max_deg: Option<Multidegree>,
        #[arg(long, value_parser = parse_field)]
        field: Option<CoeffDomain>,
    },
    /// Exterior-product pairings into top Koszul homology of the Pfaffian ideal.
    Duality {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_parser = parse_degree)]
        max_deg: Option<Multidegree>,
        /// Degree up to which the partner module is presented.
        #[arg(long)]
        presentation_bound: Option<i32>,
        #[arg(long, value_parser = parse_field)]
        field: Option<CoeffDomain>,
    },
    /// Elementary divisors over Z and dimensions over small primes.
    Torsion {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        j: Option<i32>,
        #[arg(long, value_parser = parse_degree)]
        max_deg: Option<Multidegree>,
        /// Primes whose homology dimensions are compared with those over Q.
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3])]
        primes: Vec<u32>,
    },
    /// Minimal generators and relations of a Koszul homology module.
    Betti {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        j: i32,
        #[arg(long, value_parser = parse_degree)]
        max_deg: Option<Multidegree>,
        #[arg(long, value_parser = parse_field)]
        field: Option<CoeffDomain>,
    },
}

fn parse_field(s: &str) -> Result<CoeffDomain, String> {
    s.parse().map_err(|e: pfk_core::Error| e.to_string())
}

fn parse_degree(s: &str) -> Result<Multidegree, String> {
    let parts: Vec<i32> = s
        .split(',')
        .map(|p| p.trim().parse::<i32>().map_err(|_| format!("bad degree '{s}'")))
        .collect::<Result<_, _>>()?;
    if parts.iter().any(|&x| x < 0) {
        return Err(format!("degree bound '{s}' is negative"));
    }
    Multidegree::from_slice(&parts).map_err(|e| e.to_string())
}

/// Failure modes of a run, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters, unreadable input, unwritable output: exit 2.
    Config(String),
}

impl From<pfk_core::Error> for CliError {
    fn from(e: pfk_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub struct Ctx {
    pub seed: u64,
    pub timing: bool,
    pub budget: u64,
}

impl Ctx {
    /// Runs a check, stamping the elapsed time when asked to.
    pub fn timed<T>(&self, f: impl FnOnce() -> Result<T, CliError>) -> Result<(T, Option<u64>), CliError> {
        let t = Instant::now();
        let v = f()?;
        Ok((v, self.timing.then(|| t.elapsed().as_millis() as u64)))
    }
}

fn write_output(out: Option<&Path>, s: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, s).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            match so.write_all(s.as_bytes()).and_then(|()| so.flush()) {
                // a closed pipe (`pfk ... | head`) is not a configuration problem
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn render(file: &ReportFile, f: Format) -> String {
    match f {
        Format::Json => file.to_json(),
        Format::Csv => file.to_csv(),
        Format::Text => file.to_text(),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let c = &cli.common;
    if let Some(t) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let ctx = Ctx { seed: c.seed, timing: c.timing, budget: c.budget };
    match cli.cmd {
        Cmd::Build { family, n, i } => {
            let complex = checks::build(family, n, i)?;
            write_output(c.out.as_deref(), &pfk_core::complex::complex_to_json(&complex))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Report { input } => {
            let s = std::fs::read_to_string(&input).map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
            let file = ReportFile::from_json(&s).map_err(|e| CliError::Config(format!("malformed report: {e}")))?;
            write_output(c.out.as_deref(), &render(&file, c.format.unwrap_or(Format::Text)))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { check } => {
            let file = ReportFile { reports: checks::verify(&ctx, check)? };
            write_output(c.out.as_deref(), &render(&file, c.format.unwrap_or(Format::Json)))?;
            for r in &file.reports {
                match r.status {
                    Status::Truncated => eprintln!("warning: {} truncated by the slice budget", r.check),
                    Status::Heuristic => eprintln!("warning: {} fell back to heuristic mode", r.check),
                    Status::Fail => eprintln!("{}: FAIL", r.check),
                    Status::Pass => {}
                }
            }
            Ok(if file.status().failed() { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
