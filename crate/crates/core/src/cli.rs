//! Command-line driver: `run`, `scan` and `generate`.
//!
//! Settings come from built-in defaults, then an optional TOML file (`--config`),
//! then flags. Exit codes: 0 when every check passes, 1 when a check fails,
//! 2 for usage, configuration or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::dilation::AbstractSubspace;
use crate::error::{Error, Result};
use crate::qft1d::{self, SpectralGrid};
use crate::sampling;
use crate::suites::{self, RunConfig, SuiteOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "modspace", version, about = "Modular theory of standard subspaces, checked numerically")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an identity suite and write its reports.
    Run {
        /// modular-identities, dilation, bogoliubov, quasiequiv, entropy, helmholtz or all.
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate a registered quantity over dimensions, squeeze factors or masses.
    Scan {
        /// t1_norm, cond_a, cond_b, hs_defect or lambda1_Am.
        #[arg(long)]
        quantity: String,
        /// Squeeze factors or masses (comma separated).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write sample abstract subspaces (JSON) and the wave-packet corpus (CSV).
    Generate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Complex dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Random instances per dimension.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Spectral grid size (power of two).
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    /// Half-length of the spectral box.
    #[arg(long = "box")]
    pub box_half: Option<f64>,
    /// Tolerance applied to every check.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// What to print on stdout: the JSON summary or the check table.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file with any of the settings above; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default)]
struct FileConfig {
    out: Option<PathBuf>,
    format: Option<Format>,
    run: RunConfig,
}

impl FileConfig {
    fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        let mut table: toml::Table = toml::from_str(text)?;
        let out = table.remove("out").map(|v| v.try_into()).transpose()?;
        let format = table.remove("format").map(|v| v.try_into()).transpose()?;
        let run = toml::Value::Table(table).try_into()?;
        Ok(Self { out, format, run })
    }
}

/// Fully merged settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub run: RunConfig,
    pub out: PathBuf,
    pub format: Format,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                FileConfig::parse(&text).map_err(|e| {
                    Error::InvalidArgument(format!("config {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        let mut run = file.run;
        if let Some(v) = self.seed {
            run.seed = v;
        }
        if let Some(v) = &self.dims {
            run.dims = v.clone();
        }
        if self.samples.is_some() {
            run.samples = self.samples;
        }
        if let Some(v) = self.grid_n {
            run.grid_n = v;
        }
        if let Some(v) = self.box_half {
            run.box_half = v;
        }
        if self.tol.is_some() {
            run.tol = self.tol;
        }
        Ok(Settings {
            run,
            out: self
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("modspace-out")),
            format: self.format.or(file.format).unwrap_or(Format::Json),
        })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Run { suite, common } => {
            let settings = common.resolve()?;
            let out = suites::run_suite_named(suite, &settings.run)?;
            out.write_to(&settings.out)?;
            print_run(&out, settings.format)?;
            Ok(if out.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Scan {
            quantity,
            values,
            common,
        } => {
            let settings = common.resolve()?;
            settings.run.validate()?;
            let scan = suites::scan(quantity, &settings.run, values.as_deref())?;
            let csv = scan.csv()?;
            fs::create_dir_all(&settings.out)?;
            fs::write(settings.out.join(scan.file_name()), &csv)?;
            let mut stdout = std::io::stdout().lock();
            match settings.format {
                Format::Csv => stdout.write_all(&csv)?,
                Format::Json => writeln!(
                    stdout,
                    "{}",
                    serde_json::json!({
                        "quantity": scan.quantity,
                        "over": scan.over,
                        "points": scan.points,
                        "monotone_increasing": scan.monotone_increasing,
                    })
                )?,
            }
            Ok(EXIT_OK)
        }
        Command::Generate { common } => {
            let settings = common.resolve()?;
            let written = generate(&settings)?;
            for p in written {
                println!("{}", p.display());
            }
            Ok(EXIT_OK)
        }
    }
}

fn print_run(out: &SuiteOutput, format: Format) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match format {
        Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.summary())?)?,
        Format::Csv => stdout.write_all(&out.checks_csv()?)?,
    }
    for n in &out.notices {
        eprintln!("note: {n}");
    }
    for c in out.failures() {
        eprintln!(
            "FAILED {}: residual {:.3e} > {:.1e}",
            c.identity_name, c.residual, c.tolerance
        );
    }
    Ok(())
}

/// Writes `abstract_N<n>.json` per dimension and the packet corpus under `packets/`.
pub fn generate(settings: &Settings) -> Result<Vec<PathBuf>> {
    let run = &settings.run;
    run.validate()?;
    let dir: &Path = &settings.out;
    fs::create_dir_all(dir.join("packets"))?;
    let mut written = Vec::new();
    let mut rng = sampling::rng(run.seed);
    for &n in &run.dims {
        let abs = AbstractSubspace::sample(&mut rng, n)?;
        let path = dir.join(format!("abstract_N{n}.json"));
        fs::write(&path, abs.to_json()? + "\n")?;
        written.push(path);
    }
    let grid = SpectralGrid::new(run.grid_n, run.box_half)?;
    let mut index = csv::Writer::from_path(dir.join("packets").join("index.csv"))?;
    index.write_record(["file", "packet"])?;
    for (k, (name, phi)) in qft1d::packet_corpus(&grid)?.into_iter().enumerate() {
        let file = format!("packet_{k:02}.csv");
        let path = dir.join("packets").join(&file);
        qft1d::write_packet_csv(&grid, &phi, fs::File::create(&path)?)?;
        index.write_record([file.as_str(), name.as_str()])?;
        written.push(path);
    }
    index.flush()?;
    written.push(dir.join("packets").join("index.csv"));
    Ok(written)
}
