use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ultragram_cli::scenario::Exponent;
use ultragram_cli::{builtins, parse_scenario, run, verify, CliError, Scenario};

#[derive(Parser)]
#[command(
    name = "ultragram",
    version,
    about = "Valuation independence scenarios over generalized power series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(clap::Args)]
struct Overrides {
    /// Precision ceiling; comma-separated coordinates for lex groups.
    #[arg(long, allow_hyphen_values = true)]
    precision_exp: Option<String>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    degree_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a builtin such as paper:notCA.
    Run {
        source: String,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Recheck every witness in the report.
        #[arg(long)]
        verify: bool,
        /// Seed for randomized witness sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recheck a saved structured report against its scenario.
    Verify {
        report: String,
        /// Scenario file or builtin the report was produced from.
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a scenario in canonical form.
    Echo { source: String },
    /// List builtin scenarios.
    List,
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn load(source: &str, o: &Overrides) -> Result<Scenario, CliError> {
    let mut s = if source.starts_with("paper:") {
        builtins::builtin(source)?
    } else {
        parse_scenario(&read(source)?)?
    };
    if let Some(e) = &o.precision_exp {
        s.precision.ceiling = if e.contains(',') {
            Exponent::Coords(e.split(',').map(|c| c.trim().to_string()).collect())
        } else {
            Exponent::Scalar(e.trim().to_string())
        };
    }
    if let Some(n) = o.max_terms {
        s.precision.max_terms = n;
    }
    if let Some(n) = o.degree_cap {
        s.precision.degree_cap = Some(n);
    }
    Ok(s)
}

fn report_checks(checks: &[ultragram_cli::Check]) -> bool {
    let mut ok = true;
    for c in checks {
        println!(
            "verify [{}] {}: {} ({})",
            c.task,
            c.claim,
            if c.ok { "confirmed" } else { "FAILED" },
            c.detail
        );
        ok &= c.ok;
    }
    ok
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run {
            source,
            overrides,
            format,
            verify: check,
            seed,
        } => {
            let s = load(&source, &overrides)?;
            let (report, ctx) = run(&s)?;
            let structured = report.structured();
            match format {
                Format::Text => print!("{}", report.text()),
                Format::Structured => println!(
                    "{}",
                    serde_json::to_string_pretty(&structured).expect("json")
                ),
            }
            if check {
                return Ok(report_checks(&verify(&s, &ctx, &structured, seed)?));
            }
            Ok(true)
        }
        Command::Verify {
            report,
            scenario,
            overrides,
            seed,
        } => {
            let s = load(&scenario, &overrides)?;
            let value: serde_json::Value =
                serde_json::from_str(&read(&report)?).map_err(|e| CliError::Parse {
                    line: e.line(),
                    column: e.column(),
                    message: e.to_string(),
                })?;
            let ctx = ultragram_cli::context::Context::new(&s)?;
            Ok(report_checks(&verify(&s, &ctx, &value, seed)?))
        }
        Command::Echo { source } => {
            let s = load(
                &source,
                &Overrides {
                    precision_exp: None,
                    max_terms: None,
                    degree_cap: None,
                },
            )?;
            println!("{}", s.echo());
            Ok(true)
        }
        Command::List => {
            for name in builtins::names() {
                let s = builtins::builtin(name)?;
                println!("{name}\t{}", s.description);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("witness verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
