mod config;
mod verify;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use config::{FileConfig, Format, GammaFlags, QuadratureArgs, RunConfig};
use toeplitz_moment::spectra::GammaTable;
use toeplitz_moment::{Error, SymbolSpec};

/// Exit status and message of a failed run.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn config(e: impl fmt::Display) -> Self {
        Failure {
            code: 2,
            msg: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Divergence(_) | Error::Quadrature(_) | Error::Degenerate(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "toeplitz-moment",
    version,
    about = "Spectral multipliers of moment-map Toeplitz operators"
)]
struct Cli {
    /// Worker threads for table and matrix computations.
    #[arg(long, global = true, env = "TOEPLITZ_MOMENT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate gamma over multi-indices (and a xi grid for qh and hyp).
    Gamma {
        /// qe, qh, hyp or qh-h0.
        #[arg(long)]
        case: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// Expression, or a name from the config's [symbols] table.
        #[arg(long)]
        symbol: Option<String>,
        /// Largest |p| tabulated.
        #[arg(long)]
        pmax: Option<u32>,
        /// xi grid as min:max:count.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// TOML file with the same keys; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Table destination. Without it the table goes to stdout and the summary to stderr.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[command(flatten)]
        quadrature: QuadratureArgs,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda: f64,
        /// Symbol for the diagonal suite; defaults to h1/(1+h1+...+hn).
        #[arg(long)]
        symbol: Option<String>,
        /// Degree cutoff of the brute-force matrix.
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Report destination instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        quadrature: QuadratureArgs,
    },
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure {
            code: 1,
            msg: e.to_string(),
        }),
    }
}

fn gamma(run: RunConfig) -> Result<(), Failure> {
    log::info!(
        "case {} n {} lambda {} symbol `{}`: {} indices x {} xi values",
        run.case,
        run.n,
        run.lambda,
        run.symbol.source(),
        run.ps.len(),
        run.xis.len().max(1)
    );
    let table = GammaTable::compute(run.case, &run.symbol, run.lambda, run.n, &run.ps, &run.xis, &run.spec)?;
    let text = match run.format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()? + "\n",
    };
    write_out(run.output.as_ref(), &text)?;
    let lo = table.entries.iter().map(|e| e.gamma_re).fold(f64::INFINITY, f64::min);
    let hi = table
        .entries
        .iter()
        .map(|e| e.gamma_re)
        .fold(f64::NEG_INFINITY, f64::max);
    let err = table.entries.iter().map(|e| e.err).fold(0.0, f64::max);
    let summary = format!(
        "{} rows, gamma in [{lo:.6e}, {hi:.6e}], max err {err:.2e}",
        table.entries.len()
    );
    match &run.output {
        Some(p) => println!("{summary}, written to {}", p.display()),
        None => eprintln!("{summary}"),
    }
    Ok(())
}

fn default_diag_symbol(n: usize) -> String {
    let sum: Vec<String> = (1..=n).map(|j| format!("h{j}")).collect();
    format!("h1/(1+{})", sum.join("+"))
}

fn real_main(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(Failure::config)?;
    }
    match cli.command {
        Command::Gamma {
            case,
            n,
            lambda,
            symbol,
            pmax,
            xi,
            config,
            output,
            format,
            quadrature,
        } => {
            let file = match config {
                Some(p) => FileConfig::load(&p)?,
                None => FileConfig::default(),
            };
            let flags = GammaFlags {
                case,
                n,
                lambda,
                symbol,
                pmax,
                xi,
                output,
                format,
                quadrature,
            };
            gamma(RunConfig::resolve(flags, file)?)
        }
        Command::Verify {
            suite,
            n,
            samples,
            lambda,
            symbol,
            degree,
            output,
            quadrature,
        } => {
            if n == 0 || samples == 0 || lambda.is_nan() || lambda <= -1.0 {
                return Err(Failure::config("need n >= 1, samples >= 1 and lambda > -1"));
            }
            let text = symbol.unwrap_or_else(|| default_diag_symbol(n));
            let symbol = SymbolSpec::parse(&text).map_err(Failure::config)?;
            symbol.check_arity(n, false).map_err(Failure::config)?;
            let opts = verify::Options {
                n,
                lambda,
                samples,
                symbol,
                degree,
                spec: quadrature.to_spec()?,
            };
            let report = verify::run(suite, &opts)?;
            let json = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
            write_out(output.as_ref(), &json)?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!(
                    "FAILED {}/{}: {:e} (tolerance {:e})",
                    c.suite, c.name, c.residual, c.tolerance
                );
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure {
                    code: 1,
                    msg: "some invariants failed".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
