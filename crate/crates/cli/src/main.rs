use std::path::PathBuf;
use std::process::ExitCode;

use abnorm_cli::commands::{self, Expect, OdeArgs};
use abnorm_cli::verify::Settings;
use abnorm_cli::{Failure, EXIT_FAILED, EXIT_USAGE};
use abnorm_core::Sign;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "abnorm", version, about = "Abnormal extremals of left-invariant sub-Finsler structures on 4-dim Lie groups")]
struct Cli {
    /// Overrides the numerical tolerance used by checks and reports.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Query the algebra catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check brackets, automorphisms and generating planes.
    Verify {
        /// `all` or a family name like `g4.5`.
        scope: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Automorphism draws per parameter point.
        #[arg(long, default_value_t = 100)]
        draws: usize,
        /// Random planes tried where no generator should exist.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify the abnormal extremals of a job.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<ExpectArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the adjoint system along the abnormal extremal.
    Ode {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated `psi1,psi2,psi3,psi4`.
        #[arg(long, allow_hyphen_values = true)]
        psi0: Option<String>,
        #[arg(short = 'T', long = "horizon")]
        horizon: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Option<Sign>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run many classify jobs concurrently.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show {
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectArg {
    Strict,
    Nonstrict,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+1" | "1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        _ => Err(format!("expected +1 or -1, got `{s}`")),
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let catalog = commands::load_catalog()?;
    match cli.command {
        Command::Catalog { action } => {
            match action {
                CatalogAction::List => print!("{}", commands::catalog_list(&catalog)),
                CatalogAction::Show { id, alpha, beta } => {
                    let family = commands::parse_family(&id)?;
                    print!("{}", commands::catalog_show(&catalog, family, alpha, beta)?);
                }
            }
            Ok(0)
        }
        Command::Verify {
            scope,
            alpha,
            beta,
            draws,
            samples,
            seed,
        } => {
            let settings = Settings {
                tol: cli.tol,
                draws,
                samples,
            };
            let (text, pass) = commands::verify(&catalog, &scope, alpha, beta, &settings, seed)?;
            print!("{text}");
            Ok(if pass { 0 } else { EXIT_FAILED })
        }
        Command::Classify { config, expect, out } => {
            let expect = expect.map(|e| match e {
                ExpectArg::Strict => Expect::Strict,
                ExpectArg::Nonstrict => Expect::NonStrict,
            });
            commands::classify(&catalog, &config, cli.tol, expect, out.as_deref())
        }
        Command::Ode {
            config,
            psi0,
            horizon,
            dt,
            sign,
            out,
        } => commands::ode(
            &catalog,
            &OdeArgs {
                config: &config,
                psi0: psi0.as_deref(),
                horizon,
                dt,
                sign,
                out: out.as_deref(),
            },
        ),
        Command::Sweep { config, out } => commands::sweep(&catalog, &config, cli.tol, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
