mod commands;
mod error;
mod report;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lqs_core::exact::GaussianRational as Q;
use lqs_core::feedback::{Quadrature, SynthesisSign};
use rayon::prelude::*;
use serde_json::{json, Value};

use commands::{Common, FeedbackArgs, FeedbackMode, Outcome, ZeroKind, ZeroMethod, ZerosArgs};
use error::{exit, CliError, CliResult, EXIT_CODE_HELP};
use report::{render, Fmt, Format};

/// Poles, zeros, invertibility and coherent-feedback analysis for linear
/// quantum systems.
#[derive(Debug, Parser)]
#[command(name = "lqs", version, after_help = EXIT_CODE_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Numerical tolerance.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
    /// Seed for sample points.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// File listing one spec path per line (relative to the list file); the
    /// subcommand runs on each and reports are printed in list order.
    #[arg(long, global = true)]
    batch: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the physical realizability identities.
    Check { spec: Option<PathBuf> },
    /// Invariant or transmission zeros by one or several methods.
    Zeros {
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ZeroKind::Invariant)]
        kind: ZeroKind,
        #[arg(long, value_enum, default_value_t = ZeroMethod::Pencil)]
        method: ZeroMethod,
        /// Also compute exactly (requires rational input).
        #[arg(long)]
        exact: bool,
        /// Largest real part treated as purely imaginary.
        #[arg(long, default_value_t = 1e-8)]
        imag_tol: f64,
        /// Relative tolerance for matching spectra across methods.
        #[arg(long, default_value_t = 1e-7)]
        match_tol: f64,
    },
    /// Poles of the transfer matrix.
    Poles {
        spec: Option<PathBuf>,
        /// Also compute exactly from the Smith–McMillan form.
        #[arg(long)]
        exact: bool,
    },
    /// Exact Smith–McMillan form of the transfer matrix.
    Smf { spec: Option<PathBuf> },
    /// Kalman decomposition and hidden-mode check.
    Kalman {
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        imag_tol: f64,
    },
    /// Left-invertibility classification and inverse check.
    Invert {
        spec: Option<PathBuf>,
        /// Number of random sample points for the inverse check.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Real parts within this margin of zero are indeterminate.
        #[arg(long, default_value_t = 1e-8)]
        margin: f64,
    },
    /// Pole/zero mirror, determinant and inverse identities.
    Verify {
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1e-7)]
        match_tol: f64,
    },
    /// Single-mode coherent feedback through a beamsplitter.
    Feedback {
        plant: PathBuf,
        controller: Option<PathBuf>,
        /// Beamsplitter α as a rational such as 1/4 or 0.25.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Solve for the α that puts a zero of T at the origin on quadrature q or p.
        #[arg(long, value_parser = ["q", "p"], conflicts_with = "alpha")]
        solve_alpha: Option<String>,
        /// Synthesize a controller sharing the plant coupling; `+` targets q, `-` targets p.
        #[arg(long, allow_hyphen_values = true, value_parser = ["+", "-"], requires = "alpha")]
        synthesize: Option<String>,
        /// Frequency sweep `from:to:points` (log-spaced).
        #[arg(long)]
        sweep: Option<String>,
        /// Write the sweep to this CSV file instead of the report.
        #[arg(long, requires = "sweep")]
        csv: Option<PathBuf>,
    },
}

fn parse_sweep(s: &str) -> CliResult<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("--sweep expects from:to:points, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let from: f64 = parts[0].parse().map_err(|_| bad())?;
    let to: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    Ok((from, to, n))
}

fn parse_alpha(s: &str) -> CliResult<Q> {
    Q::parse_pair(s, "0").map_err(|_| CliError::Usage(format!("--alpha expects a rational, got `{s}`")))
}

fn run_single(cmd: &Command, path: &Path, c: &Common) -> Outcome {
    let s = spec::load(path)?;
    match cmd {
        Command::Check { .. } => commands::check(&s, c),
        Command::Zeros {
            kind,
            method,
            exact,
            imag_tol,
            match_tol,
            ..
        } => commands::zeros(
            &s,
            c,
            &ZerosArgs {
                kind: *kind,
                method: *method,
                exact: *exact,
                imag_tol: *imag_tol,
                match_tol: *match_tol,
            },
        ),
        Command::Poles { exact, .. } => commands::poles(&s, c, *exact),
        Command::Smf { .. } => commands::smf(&s, c),
        Command::Kalman { imag_tol, .. } => commands::kalman(&s, c, *imag_tol),
        Command::Invert { samples, margin, .. } => commands::invert(&s, c, *samples, *margin),
        Command::Verify { samples, match_tol, .. } => commands::verify(&s, c, *samples, *match_tol),
        Command::Feedback { .. } => unreachable!("feedback is dispatched separately"),
    }
}

fn spec_arg(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Check { spec }
        | Command::Zeros { spec, .. }
        | Command::Poles { spec, .. }
        | Command::Smf { spec }
        | Command::Kalman { spec, .. }
        | Command::Invert { spec, .. }
        | Command::Verify { spec, .. } => spec.as_ref(),
        Command::Feedback { .. } => None,
    }
}

fn run_feedback(cli: &Cli, c: &Common) -> Outcome {
    let Command::Feedback {
        plant,
        controller,
        alpha,
        solve_alpha,
        synthesize,
        sweep,
        csv,
    } = &cli.command
    else {
        unreachable!()
    };
    let mode = match (alpha, solve_alpha, synthesize) {
        (Some(a), None, Some(sign)) => FeedbackMode::Synthesize(
            parse_alpha(a)?,
            if sign == "+" {
                SynthesisSign::Plus
            } else {
                SynthesisSign::Minus
            },
        ),
        (Some(a), None, None) => FeedbackMode::Alpha(parse_alpha(a)?),
        (None, Some(q), None) => FeedbackMode::Solve(if q == "q" { Quadrature::Q } else { Quadrature::P }),
        _ => {
            return Err(CliError::Usage(
                "choose one of --alpha, --solve-alpha, or --synthesize with --alpha".into(),
            ))
        }
    };
    let plant = spec::load(plant)?;
    let controller = controller.as_deref().map(spec::load).transpose()?;
    let sweep = sweep.as_deref().map(parse_sweep).transpose()?;
    commands::feedback(
        &plant,
        controller.as_ref(),
        c,
        &FeedbackArgs {
            mode,
            sweep,
            csv: csv.as_deref(),
        },
    )
}

fn read_batch(list: &Path) -> CliResult<Vec<PathBuf>> {
    let text =
        std::fs::read_to_string(list).map_err(|e| CliError::Io(format!("cannot read {}: {e}", list.display())))?;
    let base = list.parent().unwrap_or(Path::new("."));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let p = PathBuf::from(l);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        })
        .collect())
}

fn error_value(path: Option<&Path>, e: &CliError) -> Value {
    json!({
        "path": path.map(|p| p.display().to_string()),
        "error": e.to_string(),
        "exit_code": e.exit_code(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let c = Common {
        tol: cli.tol,
        seed: cli.seed,
        fmt: Fmt {
            machine: cli.format == Format::Json,
        },
    };
    let code = match (&cli.batch, &cli.command) {
        (Some(_), Command::Feedback { .. }) => {
            eprintln!("error: --batch does not apply to feedback");
            exit::USAGE
        }
        (Some(list), cmd) => run_batch(&cli, cmd, list, &c),
        (None, Command::Feedback { .. }) => emit(run_feedback(&cli, &c), None, cli.format),
        (None, cmd) => match spec_arg(cmd) {
            Some(p) => emit(run_single(cmd, p, &c), Some(p), cli.format),
            None => {
                eprintln!("error: a spec file is required (or use --batch)");
                exit::USAGE
            }
        },
    };
    ExitCode::from(code as u8)
}

fn emit(out: Outcome, path: Option<&Path>, format: Format) -> i32 {
    match out {
        Ok((r, code)) => {
            print!("{}", render(&r.to_value(), format));
            code
        }
        Err(e) => {
            if format == Format::Json {
                print!("{}", render(&error_value(path, &e), format));
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_batch(cli: &Cli, cmd: &Command, list: &Path, c: &Common) -> i32 {
    if spec_arg(cmd).is_some() {
        eprintln!("error: give either a spec file or --batch, not both");
        return exit::USAGE;
    }
    let paths = match read_batch(list) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let results: Vec<(Value, i32)> = paths
        .par_iter()
        .map(|p| match run_single(cmd, p, c) {
            Ok((r, code)) => (r.to_value(), code),
            Err(e) => (error_value(Some(p), &e), e.exit_code()),
        })
        .collect();
    let code = results.iter().map(|r| r.1).max().unwrap_or(exit::OK);
    match cli.format {
        Format::Json => {
            let all = Value::Array(results.into_iter().map(|r| r.0).collect());
            print!("{}", render(&all, Format::Json));
        }
        Format::Text => {
            for ((v, _), p) in results.iter().zip(&paths) {
                println!("== {} ==", p.display());
                print!("{}", render(v, Format::Text));
            }
        }
    }
    code
}
