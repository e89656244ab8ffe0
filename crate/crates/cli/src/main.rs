use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use petit_cli::run::error_kind;
use petit_cli::{parse_session, run, Context, Format, Settings, COMMANDS};
use petit_core::{Error, Result};

/// Differential polynomial rings K[t; d] and their Petit algebras.
///
/// Exit codes: 0 success, 2 nothing found within the search bound, 1 error.
#[derive(Parser, Debug)]
#[command(name = "petit", version)]
struct Cli {
    /// Session file describing the tower and bindings (`-` reads stdin).
    #[arg(short, long, value_name = "FILE")]
    session: Option<String>,

    /// Emit JSON (sorted keys).
    #[arg(long, conflicts_with = "text")]
    json: bool,

    /// Emit `key: value` text.
    #[arg(long)]
    text: bool,

    /// Seed for randomized searches.
    #[arg(long)]
    seed: Option<u64>,

    /// Ansatz or search bound N. Falls back to the session's `bound`, then PETIT_BOUND.
    #[arg(long)]
    bound: Option<usize>,

    #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMMANDS))]
    command: String,

    /// Polynomials, field elements, matrix names or numbers, by command.
    /// Put arguments that start with `-` after `--`.
    args: Vec<String>,
}

fn read_session(path: &str) -> Result<String> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::TypeError(format!("cannot read session '{path}': {e}")))?;
    Ok(text)
}

fn env_bound() -> Result<Option<usize>> {
    match std::env::var("PETIT_BOUND") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::TypeError(format!("PETIT_BOUND='{v}' is not a nonnegative integer"))),
        Err(_) => Ok(None),
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let ctx = match &cli.session {
        Some(path) => Some(Context::new(parse_session(&read_session(path)?)?)?),
        None => None,
    };
    let opts = ctx.as_ref().map(|c| c.session.options.clone()).unwrap_or_default();
    let settings = Settings {
        bound: match cli.bound.or(opts.bound) {
            Some(b) => Some(b),
            None => env_bound()?,
        },
        seed: cli.seed.or(opts.seed).unwrap_or(0),
    };
    let format = output_format(cli, opts.format);
    let out = run(&cli.command, &cli.args, ctx.as_ref(), &settings)?;
    Ok((out.render(format), out.exit_code))
}

fn output_format(cli: &Cli, session: Option<Format>) -> Format {
    if cli.json {
        Format::Json
    } else if cli.text {
        Format::Text
    } else {
        session.unwrap_or(Format::Text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            if cli.json {
                let v = json!({"error": error_kind(&e), "message": e.to_string()});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
