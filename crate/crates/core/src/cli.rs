//! Command-line front end: argument parsing and command dispatch.
//!
//! [`run`] renders a command's output as a string so the `latglue` binary
//! only has to print it and map errors to exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{self, CatalogInfo};
use crate::error::{Error, Result};
use crate::geometry::{minimal_vectors, voronoi_summary};
use crate::io::{format_generator, read_lattice};
use crate::lattice::Lattice;
use crate::nsm::estimate_nsm;
use crate::report::{glue_survey, nsm_csv, survey_csv, survey_text, Envelope, SurveyBase};

/// Environment variable that caps the worker thread count.
pub const THREADS_ENV: &str = "LATGLUE_THREADS";
pub const DEFAULT_SAMPLES: u64 = 10_000_000;
pub const FAST_SAMPLES: u64 = 100_000;
/// Points used for the sampled covering-radius bound in `geometry`.
pub const GEOMETRY_SAMPLES: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "latglue", version, about = "Glued lattice quantizers: enumeration, geometry and NSM estimates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args, Clone)]
pub struct Sampling {
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of random substreams; defaults to the CPU count.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub streams: Option<u64>,
    /// Use 100000 samples, for quick checks.
    #[arg(long, conflicts_with = "samples")]
    pub fast: bool,
}

impl Sampling {
    pub fn samples(&self) -> u64 {
        if self.fast {
            FAST_SAMPLES
        } else {
            self.samples
        }
    }

    pub fn streams(&self) -> u64 {
        self.streams.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get() as u64))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in lattices and their reference values.
    Catalog,
    /// Estimate the normalized second moment of a lattice.
    Nsm {
        /// Catalog name or generator-matrix file.
        lattice: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Enumerate glue groups of E6xE6 or D6xD6 and estimate every NSM.
    GlueSurvey {
        base: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Voronoi-region figures: facets, kissing number, density, thickness.
    Geometry {
        lattice: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print a generator matrix in the text interchange format.
    Export { lattice: String },
    /// Validate a generator-matrix file and summarize it.
    Import { path: PathBuf },
}

/// Resolves a catalog name, falling back to a file path.
pub fn resolve_lattice(spec: &str) -> Result<Lattice> {
    match catalog::lookup(spec) {
        Ok(entry) => Ok(entry.lattice),
        Err(e) if Path::new(spec).is_file() => read_lattice(Path::new(spec)).map_err(|err| match err {
            Error::UnknownLattice(_) => e,
            other => other,
        }),
        Err(e) => Err(e),
    }
}

/// Applies the thread-count override. Safe to call more than once.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    // A second initialization only fails because a pool already exists.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

#[derive(Debug, Serialize)]
struct ImportSummary {
    label: String,
    dimension: usize,
    ambient_dimension: usize,
    det_gram: f64,
    min_norm2: f64,
    kissing: usize,
}

fn json<T: Serialize>(command: &str, value: T) -> Result<String> {
    let mut s = Envelope::new(command, value).to_json()?;
    s.push('\n');
    Ok(s)
}

fn catalog_text(items: &[CatalogInfo]) -> String {
    let mut out = String::new();
    for c in items {
        let dim = c.dimension.map_or("-".into(), |d| d.to_string());
        let det = c.det_gram.map_or("-".into(), |d| format!("{d:.6}"));
        let nsm = c.known.nsm.as_ref().map_or(String::new(), |k| format!("  G = {} ≈ {:.9}", k.exact, k.value));
        out.push_str(&format!("{:<10} dim {:>2}  det {:>9}{nsm}\n    {}\n", c.name, dim, det, c.description));
    }
    out
}

fn catalog_csv(items: &[CatalogInfo]) -> String {
    let mut out = String::from("name,dimension,det_gram,nsm_exact,nsm\n");
    for c in items {
        let (exact, value) = c.known.nsm.as_ref().map_or((String::new(), String::new()), |k| {
            (format!("\"{}\"", k.exact), format!("{:.12}", k.value))
        });
        out.push_str(&format!(
            "{},{},{},{exact},{value}\n",
            c.name,
            c.dimension.map_or(String::new(), |d| d.to_string()),
            c.det_gram.map_or(String::new(), |d| format!("{d}"))
        ));
    }
    out
}

/// Runs a parsed command and returns the rendered report. Diagnostics
/// that must not affect the report (wall time) go to `log`.
pub fn run(cli: &Cli, log: &mut dyn Write) -> Result<String> {
    let format = cli.format;
    match &cli.command {
        Command::Catalog => {
            let items = catalog::listing();
            match format {
                Format::Json => json("catalog", items),
                Format::Csv => Ok(catalog_csv(&items)),
                Format::Text => Ok(catalog_text(&items)),
            }
        }
        Command::Nsm { lattice, sampling } => {
            let l = resolve_lattice(lattice)?;
            let est = estimate_nsm(&l, sampling.samples(), sampling.seed, sampling.streams())?;
            match format {
                Format::Json => json("nsm", est),
                Format::Csv => Ok(nsm_csv(&est)),
                Format::Text => Ok(format!("{}: G = {} ({} samples)\n", est.lattice_id, est.display(), est.samples)),
            }
        }
        Command::GlueSurvey { base, sampling } => {
            let base = SurveyBase::parse(base)?;
            let start = Instant::now();
            let report = glue_survey(base, sampling.samples(), sampling.seed, sampling.streams())?;
            let wall = start.elapsed().as_secs_f64();
            if format != Format::Text {
                let _ = writeln!(log, "glue-survey {}: wall time {wall:.2} s", base.name());
            }
            match format {
                Format::Json => json("glue-survey", report),
                Format::Csv => Ok(survey_csv(&report)),
                Format::Text => Ok(format!("{}wall time {wall:.2} s\n", survey_text(&report))),
            }
        }
        Command::Geometry { lattice, seed } => {
            let (l, asserted) = match catalog::lookup(lattice) {
                Ok(e) => (e.lattice, e.known.covering_radius.map(|k| k.value)),
                Err(_) => (resolve_lattice(lattice)?, None),
            };
            let s = voronoi_summary(&l, asserted, GEOMETRY_SAMPLES, *seed)?;
            match format {
                Format::Json => json("geometry", s),
                Format::Csv => Ok(format!(
                    "lattice,dimension,det_gram,facets,min_norm2,kissing,packing_density,covering_radius,thickness\n\
                     {},{},{},{},{},{},{},{},{}\n",
                    s.lattice,
                    s.dimension,
                    s.det_gram,
                    s.relevant_count,
                    s.min_norm2,
                    s.kissing,
                    s.packing_density,
                    s.covering_radius_bound,
                    s.thickness.map_or(String::new(), |t| t.to_string())
                )),
                Format::Text => Ok(format!(
                    "{}: dimension {}, det {:.6}\n  facets {}\n  min norm² {:.6}, kissing {}\n  packing density {:.6}\n  covering radius {:.6} ({})\n{}",
                    s.lattice,
                    s.dimension,
                    s.det_gram,
                    s.relevant_count,
                    s.min_norm2,
                    s.kissing,
                    s.packing_density,
                    s.covering_radius_bound,
                    match s.covering_radius_source {
                        crate::geometry::CoveringSource::Asserted => "known",
                        crate::geometry::CoveringSource::Sampled => "sampled lower bound",
                    },
                    s.thickness.map_or(String::new(), |t| format!("  thickness {t:.4}\n"))
                )),
            }
        }
        Command::Export { lattice } => Ok(format_generator(resolve_lattice(lattice)?.basis())),
        Command::Import { path } => {
            let l = read_lattice(path)?;
            let (min_norm2, kissing) = minimal_vectors(&l)?;
            let s = ImportSummary {
                label: l.label().to_string(),
                dimension: l.dim(),
                ambient_dimension: l.ambient_dim(),
                det_gram: l.det_gram(),
                min_norm2,
                kissing,
            };
            match format {
                Format::Json => json("import", s),
                Format::Csv => Ok(format!(
                    "label,dimension,ambient_dimension,det_gram,min_norm2,kissing\n{},{},{},{},{},{}\n",
                    s.label, s.dimension, s.ambient_dimension, s.det_gram, s.min_norm2, s.kissing
                )),
                Format::Text => Ok(format!(
                    "{}: dimension {} in R^{}, det {:.9}, min norm² {:.9}, kissing {}\n",
                    s.label, s.dimension, s.ambient_dimension, s.det_gram, s.min_norm2, s.kissing
                )),
            }
        }
    }
}

/// Runs the command and writes the report to `stdout` or the `--output`
/// file.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    configure_threads()?;
    let text = run(cli, stderr)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
