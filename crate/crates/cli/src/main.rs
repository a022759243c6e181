//! `crcodes`: build the concatenated Hamming families, compute their
//! intersection arrays, monomial automorphism groups and CT verdicts.
//!
//! Exit codes: 0 success, 2 input error, 3 search budget exhausted,
//! 4 internal consistency failure.

mod grid;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use crcodes::autgroup::DEFAULT_NODE_LIMIT;
use crcodes::{Construction, ConstructionSpec, Error, Family};

use report::{Inconsistent, Loaded, Report, Stages};

const EXIT_INPUT: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "crcodes", version, about = "Completely regular codes from concatenated Hamming matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the parity-check matrix of a family member.
    Construct {
        #[command(flatten)]
        spec: SpecArgs,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameters, covering radius and intersection array.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// The monomial automorphism group and its orbits on cosets.
    Maut {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
    /// Complete transitivity verdict.
    Ct {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep r over a grid described by a key=value config file.
    Grid {
        #[arg(long)]
        config: PathBuf,
        /// Directory for per-cell reports and the summary.
        #[arg(long)]
        out: PathBuf,
        /// Cells computed at once.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 4)]
        d_limit: usize,
    },
    /// Re-check a JSON report: generators, group order, orbit counts.
    Verify {
        report: PathBuf,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Family parameter; ignored for `hamming`.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
}

impl SpecArgs {
    fn spec(&self) -> Result<ConstructionSpec> {
        let r = match (self.family, self.r) {
            (Family::Hamming, r) => r.unwrap_or(0),
            (_, Some(r)) => r,
            (f, None) => bail!(Error::Parse(format!("family {f} needs --r"))),
        };
        let spec = ConstructionSpec::new(self.q, self.m, self.family, r);
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct Source {
    /// Matrix file in the shared text format.
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["q", "m", "family", "r"])]
    input: Option<PathBuf>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
}

impl Source {
    fn load(&self) -> Result<Loaded> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Loaded::from_text(&text);
        }
        match (self.q, self.m, self.family) {
            (Some(q), Some(m), Some(family)) => Loaded::from_spec(SpecArgs { q, m, family, r: self.r }.spec()?),
            _ => bail!(Error::Parse("give --in FILE or all of --q, --m, --family".into())),
        }
    }
}

#[derive(Args)]
struct Search {
    /// Candidate images tried before the search reports `unknown`.
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    budget: u64,
}

#[derive(Args)]
struct Output {
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Largest weight tried when computing the minimum distance.
    #[arg(long, default_value_t = 4)]
    d_limit: usize,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Done {
    Ok,
    Unknown,
}

fn emit(report: &Report, output: &Output) -> Result<Done> {
    let json = serde_json::to_string_pretty(report)?;
    if let Some(path) = &output.report {
        grid::write_atomic(path, &json)?;
    }
    if output.json {
        println!("{json}");
    } else {
        print!("{}", report::render(report));
    }
    Ok(if report.is_complete() { Done::Ok } else { Done::Unknown })
}

fn execute(cli: Cli) -> Result<Done> {
    match cli.command {
        Command::Construct { spec, out } => {
            let c = Construction::build(spec.spec()?)?;
            let text = c.to_text();
            match out {
                Some(path) => grid::write_atomic(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(Done::Ok)
        }
        Command::Analyze { source, output } => {
            let loaded = source.load()?;
            let r = report::run("analyze", &loaded, Stages { maut: false, ct: false }, DEFAULT_NODE_LIMIT, output.d_limit)?;
            emit(&r, &output)
        }
        Command::Maut { source, search, output } => {
            let loaded = source.load()?;
            let r = report::run("maut", &loaded, Stages { maut: true, ct: false }, search.budget, output.d_limit)?;
            emit(&r, &output)
        }
        Command::Ct { source, search, output } => {
            let loaded = source.load()?;
            let r = report::run("ct", &loaded, Stages { maut: false, ct: true }, search.budget, output.d_limit)?;
            emit(&r, &output)
        }
        Command::Grid { config, out, jobs, d_limit } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = grid::parse_config(&text)?;
            let cells = grid::run_grid(cfg.as_ref(), &out, jobs, d_limit)?;
            let table = grid::summary(cfg.as_ref(), &cells);
            grid::write_atomic(&out.join("summary.txt"), &table)?;
            print!("{table}");
            let reused = cells.iter().filter(|c| c.reused).count();
            if reused > 0 {
                println!("{reused} of {} cells reused from existing reports", cells.len());
            }
            Ok(if cells.iter().all(|c| c.report.is_complete()) { Done::Ok } else { Done::Unknown })
        }
        Command::Verify { report } => {
            let text = fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let parsed: Report =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", report.display())))?;
            for line in report::verify(&parsed)? {
                println!("{line}");
            }
            println!("report verified");
            Ok(Done::Ok)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Inconsistent>().is_some() {
        return EXIT_INTERNAL;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Internal(_)) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::Unknown) => ExitCode::from(EXIT_UNKNOWN),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
