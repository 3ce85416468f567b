use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use gadc_core::certify::{census_line, CertifyError};
use gadc_core::diagram::to_canonical_json;
use gadc_core::generator::{for_each_diagram, Sampling};
use gadc_core::{analyze, certify, face_width, parse_diagram, CensusSpec, CheckedDiagram, Filter};

const INPUT_ERROR: u8 = 1;
const HYPOTHESES_FAILED: u8 = 2;
const CONTRADICTION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gadc",
    version,
    about = "Alternating diagrams on closed surfaces"
)]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report of a diagram.
    Analyze { file: PathBuf },
    /// Certificate for a diagram; exits 2 when a hypothesis fails.
    Certify { file: PathBuf },
    /// Face-width of the embedded diagram.
    Facewidth { file: PathBuf },
    /// Stream census diagrams with their certificate digests as JSON lines.
    Census {
        #[arg(long)]
        crossings: usize,
        /// Maximum genus `G`, or an inclusive range `A..B`.
        #[arg(long, default_value = "0")]
        genus: String,
        #[arg(long = "filter", value_name = "FILTER")]
        filters: Vec<Filter>,
        /// Sample random diagrams from this seed instead of enumerating.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random draws in seeded mode; draws failing the genus range
        /// or a filter are skipped.
        #[arg(long, default_value_t = 100, requires = "seed")]
        samples: usize,
    },
    /// Print a built-in fixture diagram.
    Fixture { name: String },
}

#[derive(Serialize)]
struct FaceWidthReport {
    face_width: gadc_core::FaceWidth,
}

/// An error that carries its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(error: E) -> Self {
        Failure {
            code: INPUT_ERROR,
            error: error.into(),
        }
    }
}

fn parse_genus(text: &str) -> Result<(u32, u32)> {
    let bounds = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => (0, text.trim().parse()?),
    };
    if bounds.0 > bounds.1 {
        bail!("empty genus range {text}");
    }
    Ok(bounds)
}

fn load(path: &Path) -> Result<CheckedDiagram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw = parse_diagram(&text).with_context(|| format!("parsing {}", path.display()))?;
    CheckedDiagram::new(raw)
        .map_err(|report| anyhow!("invalid diagram {}: {report}", path.display()))
}

fn contradiction(e: CertifyError) -> Failure {
    let code = match e {
        CertifyError::InternalContradiction { .. } => CONTRADICTION,
        _ => INPUT_ERROR,
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    let mut code = 0;
    match cli.command {
        Command::Analyze { file } => {
            let d = load(&file)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&analyze(&d))?)?;
        }
        Command::Certify { file } => {
            let d = load(&file)?;
            let cert = certify(&d).map_err(contradiction)?;
            writeln!(out, "{}", cert.to_json_pretty())?;
            if !cert.hypotheses.all_hold() {
                code = HYPOTHESES_FAILED;
            }
        }
        Command::Facewidth { file } => {
            let d = load(&file)?;
            let report = FaceWidthReport {
                face_width: face_width(&d)?,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Command::Census {
            crossings,
            genus,
            filters,
            seed,
            samples,
        } => {
            let (min_genus, max_genus) = parse_genus(&genus)?;
            let spec = CensusSpec {
                max_crossings: crossings,
                min_genus,
                max_genus,
                filters: filters.into_iter().collect(),
                sampling: seed.map(|seed| Sampling { seed, samples }),
            };
            let mut failure: Option<Failure> = None;
            for_each_diagram(&spec, |d| {
                if failure.is_some() {
                    return;
                }
                let line = census_line(&d)
                    .map_err(contradiction)
                    .and_then(|text| writeln!(out, "{text}").map_err(Failure::from));
                if let Err(f) = line {
                    failure = Some(f);
                }
            })?;
            if let Some(f) = failure {
                return Err(f);
            }
        }
        Command::Fixture { name } => {
            let fixtures = gadc_core::fixtures();
            let d = fixtures.get(&name).ok_or_else(|| {
                let names: Vec<&str> = fixtures.keys().map(String::as_str).collect();
                anyhow!("unknown fixture {name:?}; known: {}", names.join(", "))
            })?;
            writeln!(out, "{}", to_canonical_json(d))?;
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { 0 });
        }
    };
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("gadc: writing {}: {e}", path.display());
                return ExitCode::from(INPUT_ERROR);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = run(cli, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("gadc: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
