use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use giwa::commands::{self, Report, RunConfig};
use giwa::examples;
use giwa::Result;

/// Iwasawa invariants of ℤ_ℓ-towers of graphs.
///
/// Exit codes: 0 all checks hold, 1 a check failed, 2 bad input or unmet
/// hypotheses, 3 resource or precision limits reached.
#[derive(Debug, Parser)]
#[command(name = "giwa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// μ, λ from the characteristic series and ν from spanning-tree counts.
    Invariants {
        spec: String,
        /// Highest level n for κ(X_n); defaults to the file's "levels" or 3.
        #[arg(long)]
        levels: Option<u32>,
        /// Factor κ(X_n) by trial division.
        #[arg(long)]
        factor: bool,
        #[command(flatten)]
        opts: Options,
    },
    /// Compare invariants of a tower and its pullback along a finite ℓ-group cover.
    Kida {
        spec: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Rerun worked examples against their expected values.
    Examples {
        #[arg(required = true, value_parser = clap::builder::PossibleValuesParser::new(examples::NAMES))]
        names: Vec<String>,
        /// Level n of the SL2 quotient for `sl2`.
        #[arg(long)]
        level: Option<u32>,
        #[command(flatten)]
        opts: Options,
    },
    /// Hashimoto, Artin product and class-number identities for a graph or voltage spec.
    Checks {
        spec: String,
        #[command(flatten)]
        opts: Options,
    },
    /// h(u) and the inverse Ihara zeta function of a graph.
    Zeta {
        spec: String,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Debug, Args)]
struct Options {
    /// Print a JSON report instead of a table.
    #[arg(long)]
    json: bool,
    /// First series cap tried when reading off μ and λ.
    #[arg(long)]
    cap: Option<usize>,
    /// Work with coefficients modulo ℓ^precision.
    #[arg(long)]
    precision: Option<u32>,
    /// Largest level graph for spanning-tree counts (overrides GIWA_VERTEX_CAP).
    #[arg(long)]
    vertex_cap: Option<usize>,
}

impl Options {
    fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::default().with_env()?;
        if let Some(cap) = self.cap {
            c.cap = cap;
        }
        c.precision = self.precision;
        if let Some(v) = self.vertex_cap {
            c.vertex_cap = v;
        }
        c.validate_caps()?;
        Ok(c)
    }
}

fn emit(report: &impl Report, json: bool) -> u8 {
    if json {
        print!("{}", report.json());
    } else {
        print!("{}", report.human());
    }
    if report.passed() {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8> {
    Ok(match cli.command {
        Command::Invariants {
            spec,
            levels,
            factor,
            opts,
        } => {
            let mut config = opts.config()?;
            config.levels = levels;
            config.factor = factor;
            let spec = commands::load_tower(&spec)?;
            emit(&commands::invariants(&spec, &config)?, opts.json)
        }
        Command::Kida { spec, opts } => {
            let config = opts.config()?;
            emit(
                &commands::kida(&commands::load_tower(&spec)?, &config)?,
                opts.json,
            )
        }
        Command::Examples { names, level, opts } => {
            let config = opts.config()?;
            let mut code = 0;
            let mut reports = Vec::new();
            for name in &names {
                let report = examples::run(name, &config, level)?;
                if !report.passed() {
                    code = 1;
                }
                if !opts.json {
                    print!("{}", report.human());
                }
                reports.push(report);
            }
            if opts.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&reports).expect("reports serialize")
                );
            }
            code
        }
        Command::Checks { spec, opts } => {
            opts.config()?;
            let report = commands::checks(&commands::load_graph_input(&spec)?)?;
            let code = emit(&report, opts.json);
            if code == 0 && report.refused() {
                2
            } else {
                code
            }
        }
        Command::Zeta { spec, opts } => {
            opts.config()?;
            emit(
                &commands::zeta(&commands::load_graph_input(&spec)?)?,
                opts.json,
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("giwa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
