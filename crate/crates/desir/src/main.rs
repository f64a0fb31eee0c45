use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use desir::commands::{bernstein_eval, bernstein_expand, bernstein_range, bernstein_raise, Output, Session};
use desir::format::{parse_assessment, parse_gamble, parse_polynomial, rational, read_json};
use desir::report::Style;
use desir::script::Script;
use desir::CliError;
use desir_core::bernstein::{BernsteinPoly, DEFAULT_CAP};
use desir_core::{Error, Gamble};
use serde_json::Value;

/// Exact reasoning with sets of desirable gambles on finite spaces.
#[derive(Parser)]
#[command(name = "desir", version)]
struct Cli {
    /// Degree cap for Bernstein searches.
    #[arg(long, global = true, env = "DESIR_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Append a decimal approximation to non-integer values (not authoritative).
    #[arg(long, global = true)]
    decimal: bool,
    /// Print verdicts without certificates.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Does the assessment avoid non-positivity?
    Check {
        assessment: PathBuf,
        #[arg(long)]
        exchangeable: bool,
    },
    /// Is the gamble in the natural extension?
    Member {
        assessment: PathBuf,
        gamble: PathBuf,
        #[arg(long)]
        exchangeable: bool,
    },
    /// Lower (or upper) prevision of a gamble.
    Lpr {
        assessment: PathBuf,
        gamble: PathBuf,
        #[arg(long)]
        upper: bool,
        #[arg(long)]
        exchangeable: bool,
    },
    /// Membership after updating on a sample, a count vector or an event.
    #[command(group(ArgGroup::new("observation").required(true).args(["sample", "counts", "event"])))]
    Update {
        assessment: PathBuf,
        gamble: PathBuf,
        /// Observed sample, e.g. `bw` or `b,w`; the gamble lives on the remaining variables.
        #[arg(long)]
        sample: Option<String>,
        /// Observed count vector, e.g. `1,0`; the gamble is a count gamble on the remaining variables.
        #[arg(long)]
        counts: Option<String>,
        /// Element of the conditioning event; repeat for each element.
        #[arg(long)]
        event: Vec<String>,
        #[arg(long)]
        exchangeable: bool,
    },
    /// Can the assessment be extended exchangeably to `k` more variables?
    ExtendFinite {
        assessment: PathBuf,
        #[arg(long = "by")]
        k: usize,
    },
    /// Can the assessment be extended to an exchangeable family of every length?
    ExtendInfinite { assessment: PathBuf },
    /// Polynomials in Bernstein form.
    #[command(subcommand)]
    Bernstein(BernsteinCommand),
    /// Run a query script.
    Run { script: PathBuf },
}

#[derive(Subcommand)]
enum BernsteinCommand {
    /// Bernstein coefficients of a sequence or count gamble.
    Expand { gamble: PathBuf },
    /// Degree-raise a polynomial.
    Raise {
        polynomial: PathBuf,
        #[arg(long)]
        to: usize,
    },
    /// Coefficient range, at the polynomial's degree or a higher one.
    Range {
        polynomial: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Evaluate at a frequency vector, e.g. `--at 1/3,2/3`.
    Eval {
        polynomial: PathBuf,
        #[arg(long)]
        at: String,
    },
}

fn load_session(path: &Path, exchangeable: bool, cli: &Cli, style: Style) -> Result<Session, CliError> {
    let assessment = parse_assessment(&read_json(path)?, "")?;
    Session::new(assessment, exchangeable, cli.cap, style)
}

fn load_gamble(path: &Path, session: Option<&Session>) -> Result<Gamble, CliError> {
    parse_gamble(&read_json(path)?, "gamble", session.map(Session::domain))
}

fn load_polynomial(path: &Path) -> Result<BernsteinPoly, CliError> {
    parse_polynomial(&read_json(path)?, "polynomial")
}

fn execute(cli: &Cli, style: Style) -> Result<Output, CliError> {
    match &cli.command {
        Command::Check {
            assessment,
            exchangeable,
        } => load_session(assessment, *exchangeable, cli, style)?.check(),
        Command::Member {
            assessment,
            gamble,
            exchangeable,
        } => {
            let s = load_session(assessment, *exchangeable, cli, style)?;
            s.member(&load_gamble(gamble, Some(&s))?)
        }
        Command::Lpr {
            assessment,
            gamble,
            upper,
            exchangeable,
        } => {
            let s = load_session(assessment, *exchangeable, cli, style)?;
            s.prevision(&load_gamble(gamble, Some(&s))?, *upper)
        }
        Command::Update {
            assessment,
            gamble,
            sample,
            counts,
            event,
            exchangeable,
        } => {
            let s = load_session(assessment, *exchangeable, cli, style)?;
            if let Some(sample) = sample {
                s.update_sample(sample, &load_gamble(gamble, None)?)
            } else if let Some(counts) = counts {
                s.update_counts(counts, &load_gamble(gamble, None)?)
            } else {
                s.update_event(event, &load_gamble(gamble, Some(&s))?)
            }
        }
        Command::ExtendFinite { assessment, k } => load_session(assessment, false, cli, style)?.extend_finite(*k),
        Command::ExtendInfinite { assessment } => load_session(assessment, false, cli, style)?.extend_infinite(),
        Command::Bernstein(b) => match b {
            BernsteinCommand::Expand { gamble } => bernstein_expand(&load_gamble(gamble, None)?, &style),
            BernsteinCommand::Raise { polynomial, to } => bernstein_raise(&load_polynomial(polynomial)?, *to, &style),
            BernsteinCommand::Range { polynomial, degree } => {
                bernstein_range(&load_polynomial(polynomial)?, *degree, &style)
            }
            BernsteinCommand::Eval { polynomial, at } => {
                let theta = at
                    .split(',')
                    .map(|t| rational(&Value::String(t.trim().to_string()), "at"))
                    .collect::<Result<Vec<_>, _>>()?;
                bernstein_eval(&load_polynomial(polynomial)?, theta, &style)
            }
        },
        Command::Run { script } => {
            let script = Script::load(script, cli.cap, style)?;
            let (report, result) = script.run();
            for line in &report {
                println!("{line}");
            }
            result.map(|code| Output { lines: Vec::new(), code })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style {
        decimal: cli.decimal,
        quiet: cli.quiet,
    };
    match execute(&cli, style) {
        Ok(out) => {
            for line in &out.lines {
                println!("{line}");
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(Error::Incoherent(witness)) = &e {
                eprintln!("non-positive combination:");
                for line in style.combination(witness) {
                    eprintln!("{line}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
