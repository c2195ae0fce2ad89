use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dunkl_lab::harness::suites::{run_suite, Suite, SuiteConfig, DEFAULT_SEED};
use dunkl_lab::harness::sweep::{rows_to_csv, run_sweep, Family, FieldSpec, OutputFormat, SweepConfig};
use dunkl_lab::harness::tables::{field_table, kernel_table, parse_grid, poisson_table, w_table};
use dunkl_lab::{Error, QuadratureSpec};

#[derive(Parser)]
#[command(name = "dunkl-verify", version, about = "Identity suites, Cesàro sweeps and kernel tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exits 0 iff every check passes.
    Verify {
        #[arg(long)]
        suite: String,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON file with `quadrature` and `seed` keys.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Cesàro ratio sweep; exits 0 iff every row passes.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write CSV here (overrides `output` and `format`).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        ps: Option<Vec<f64>>,
    },
    /// Tabulate E_λ(iz) or the translation kernel W(x, t, z).
    #[command(allow_negative_numbers = true)]
    Kernel {
        #[arg(long)]
        lambda: f64,
        /// lo:hi:n
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, value_enum, default_value_t = KernelKind::Dunkl)]
        kind: KernelKind,
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// CSV is the only format; the flag is accepted for symmetry.
        #[arg(long)]
        csv: bool,
    },
    /// Tabulate a half-plane field on the standard grid.
    #[command(allow_negative_numbers = true)]
    Field {
        #[arg(long, value_enum)]
        family: FieldFamily,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        y0: f64,
        #[arg(long)]
        lambda: f64,
        /// For `poisson`: the translate `t` of the kernels.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Dunkl,
    W,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldFamily {
    KernelP,
    KernelQ,
    KernelCauchy,
    Cauchy,
    Spectral,
    Poisson,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { suite, json, seed, config } => {
            let suite: Suite = suite.parse()?;
            let mut cfg = match config {
                Some(p) => serde_json::from_str(&read(&p)?).map_err(|e| Error::Config(e.to_string()))?,
                None => SuiteConfig { quadrature: QuadratureSpec::default(), seed: DEFAULT_SEED },
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = run_suite(suite, &cfg)?;
            print!("{}", report.summary());
            if let Some(p) = json {
                write(&p, &report.to_json())?;
            }
            Ok(report.pass)
        }
        Command::Sweep { config, csv, json, lambdas, alphas, ps } => {
            let mut cfg = match config {
                Some(p) => SweepConfig::from_json(&read(&p)?)?,
                None => SweepConfig::default(),
            };
            if let Some(v) = lambdas {
                cfg.lambdas = v;
            }
            if let Some(v) = alphas {
                cfg.alphas = v;
            }
            if let Some(v) = ps {
                cfg.ps = v;
            }
            if let Some(p) = csv {
                cfg.output = Some(p);
                cfg.format = OutputFormat::Csv;
            } else if let Some(p) = json {
                cfg.output = Some(p);
                cfg.format = OutputFormat::Json;
            }
            let rows = run_sweep(&cfg)?;
            let text = match cfg.format {
                OutputFormat::Csv => rows_to_csv(&rows),
                OutputFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
            };
            match &cfg.output {
                Some(p) => write(p, &text)?,
                None => print!("{text}"),
            }
            Ok(rows.iter().all(|r| r.pass))
        }
        Command::Kernel { lambda, grid, kind, x, t, csv: _ } => {
            let zs = parse_grid(&grid)?;
            let text = match kind {
                KernelKind::Dunkl => kernel_table(lambda, &zs, &QuadratureSpec::default())?,
                KernelKind::W => w_table(lambda, x, t, &zs)?,
            };
            print!("{text}");
            Ok(true)
        }
        Command::Field { family, m, y0, lambda, t, csv: _ } => {
            let spec = QuadratureSpec::default();
            let family = match family {
                FieldFamily::Poisson => {
                    print!("{}", poisson_table(lambda, t)?);
                    return Ok(true);
                }
                FieldFamily::KernelP => Family::KernelP,
                FieldFamily::KernelQ => Family::KernelQ,
                FieldFamily::KernelCauchy => Family::KernelCauchy,
                FieldFamily::Cauchy => Family::Cauchy,
                FieldFamily::Spectral => Family::Spectral,
            };
            print!("{}", field_table(&FieldSpec { family, m, y0 }, lambda, &spec)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
