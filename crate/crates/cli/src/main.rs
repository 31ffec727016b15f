use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use excomp::{Limits, WeakLimitStrategy};
use excomp_cli::commands::{self, CliError, Outcome, Report, Settings, SCHEMA, VERSION};
use excomp_cli::instance::{parse_instance, Instance};
use excomp_cli::BUNDLED_INSTANCE;

#[derive(Parser)]
#[command(name = "excomp", version, about = "Exact completions of finite sets: checks, constructions and audits")]
struct Cli {
    /// Weak-limit strategy of the base: minimal or padded:<k>.
    #[arg(long, global = true, default_value = "minimal")]
    strategy: WeakLimitStrategy,
    /// Seed for randomized instance suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest carrier accepted by size-capped constructions.
    #[arg(long, global = true)]
    max_size: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Choice objects, pseudo-equivalence witnesses and weak limits of the base.
    CheckBase { instance: PathBuf },
    /// Objects and arrows of the exact completion.
    Complete { instance: PathBuf },
    /// Interpret a formula in the proof-relevant logic.
    Bhk {
        instance: PathBuf,
        #[arg(long)]
        formula: String,
        /// Free variables, as `x:X, y:Y`.
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Full family over `Y --g--> X --f--> I` and its fullness check.
    Fullness {
        instance: PathBuf,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        pair: Option<String>,
    },
    /// Universal dependent product of `g` along `f`.
    Depprod {
        instance: PathBuf,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        pair: Option<String>,
        /// Compare with the brute-force product of sections.
        #[arg(long)]
        oracle: bool,
    },
    /// Audit the CETCS axioms; the document's objects and pairs join the bundled suite.
    Cetcs { instance: Option<PathBuf> },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckBase { .. } => "check-base",
            Command::Complete { .. } => "complete",
            Command::Bhk { .. } => "bhk",
            Command::Fullness { .. } => "fullness",
            Command::Depprod { .. } => "depprod",
            Command::Cetcs { .. } => "cetcs",
        }
    }
}

fn load(path: &PathBuf) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| CliError::Usage(format!("{}:{e}", path.display())))
}

fn run(cli: &Cli, s: &Settings) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::CheckBase { instance } => commands::check_base(&load(instance)?, s),
        Command::Complete { instance } => commands::complete(&load(instance)?, s),
        Command::Bhk { instance, formula, context } => commands::bhk(&load(instance)?, s, formula, context),
        Command::Fullness { instance, f, g, pair } => {
            let inst = load(instance)?;
            let (f, g) = commands::resolve_pair(&inst, f.as_deref(), g.as_deref(), pair.as_deref())?;
            commands::fullness(&inst, s, f, g)
        }
        Command::Depprod { instance, f, g, pair, oracle } => {
            let inst = load(instance)?;
            let (f, g) = commands::resolve_pair(&inst, f.as_deref(), g.as_deref(), pair.as_deref())?;
            commands::depprod(&inst, s, f, g, *oracle)
        }
        Command::Cetcs { instance } => {
            let inst = match instance {
                Some(p) => load(p)?,
                None => parse_instance(BUNDLED_INSTANCE).map_err(|e| CliError::Runtime(e.to_string()))?,
            };
            commands::cetcs(Some(&inst), s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Some(m) = cli.max_size {
        limits.max_carrier = m;
    }
    let s = Settings {
        strategy: cli.strategy,
        seed: cli.seed,
        limits,
    };
    match run(&cli, &s) {
        Ok(out) => {
            match cli.report {
                Format::Json => {
                    let report = Report {
                        schema: SCHEMA,
                        version: VERSION,
                        command: cli.command.name().into(),
                        strategy: s.strategy,
                        seed: s.seed,
                        passed: out.passed,
                        result: out.result,
                    };
                    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
                }
                Format::Text => {
                    for line in &out.text {
                        println!("{line}");
                    }
                    println!("{}", if out.passed { "PASS" } else { "FAIL" });
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Runtime(_) => ExitCode::from(1),
            }
        }
    }
}
