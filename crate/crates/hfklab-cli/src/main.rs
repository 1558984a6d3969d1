use clap::{Args, Parser, Subcommand};

use hfklab_cli::commands::{
    cmd_alex_check, cmd_bicomplex, cmd_check, cmd_gen, cmd_ingest, AlexMode, BicomplexAction,
    CheckMode, CommandOutput,
};
use hfklab_cli::reportfmt::Format;
use hfklab_cli::sweep::{render_sweep, torus_sweep};
use hfklab_cli::{CliResult, EXIT_CHECK_FAILED, EXIT_PASS};

/// Rank tables of knot Floer homology, periodic-knot rank inequalities,
/// double-complex decomposition tools, and a periodic knot generator.
///
/// Inputs may be file paths, `bundle:NAME` for bundled data files
/// (overridable with the HFKLAB_DATA directory), `knot:NAME` for bundled
/// knot polynomials, or `poly:<text>` for inline polynomials.
#[derive(Parser)]
#[command(name = "hfklab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, default_value = "human")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every torus double cover T(2p,q) over T(p,q) with p,q below
    /// a bound.
    TorusSweep {
        /// Exclusive upper bound for p and q.
        #[arg(long, default_value_t = 60)]
        max_pq: i64,
        #[command(flatten)]
        output: OutputArgs,
        /// Corrupt the table of the given pair "p,q" (testing hook).
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Rank inequalities between two rank tables.
    Check {
        /// Table of the periodic knot (JSON or CSV).
        #[arg(long)]
        tilde: String,
        /// Table of the quotient knot.
        #[arg(long)]
        quotient: String,
        /// Linking number of the quotient with the axis (odd).
        #[arg(long)]
        lambda: i64,
        /// rank: total ranks; filtered: Maslov-filtered, both directions.
        #[arg(long, default_value = "rank")]
        mode: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Alexander-polynomial consequences for a periodic pair.
    AlexCheck {
        /// Quotient polynomial (file, knot:NAME, or poly:TEXT).
        #[arg(long)]
        delta_q: String,
        /// Periodic-knot polynomial.
        #[arg(long)]
        delta_tilde: String,
        /// Quotient signature (defaults to the knot table's value).
        #[arg(long)]
        sigma_q: Option<i64>,
        /// Periodic-knot signature.
        #[arg(long)]
        sigma_tilde: Option<i64>,
        #[arg(long)]
        lambda: i64,
        /// alternating: coefficient and signature bounds; lspace: term
        /// count and exponent bounds.
        #[arg(long)]
        mode: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate pseudorandom 2-periodic knots as JSON lines.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        /// Operations per word.
        #[arg(long, default_value_t = 18)]
        ops: usize,
        #[arg(long, default_value_t = 5)]
        strands: usize,
        /// Suppress progress output on stderr.
        #[arg(long)]
        quiet: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Validate and summarize externally computed rank tables.
    Ingest {
        /// Table files (JSON or CSV).
        files: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Double-complex tools over JSON complexes.
    Bicomplex {
        #[command(subcommand)]
        action: BicomplexCommand,
    },
}

#[derive(Subcommand)]
enum BicomplexCommand {
    /// Split a bicomplex into squares and staircases.
    Decompose {
        #[arg(long)]
        file: String,
        /// Also write the full decomposition as JSON.
        #[arg(long)]
        decomposition_out: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decompose and check the certificate.
    Verify {
        #[arg(long)]
        file: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Total homology rank of an involution complex against its fixed
    /// subcomplex.
    Smith {
        #[arg(long)]
        file: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tail-sum homology comparison for every threshold.
    Floyd {
        #[arg(long)]
        file: String,
        /// Also show the per-grading comparison diagnostic.
        #[arg(long)]
        per_grading: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Open-top staircases in the window-truncated periodic bicomplex
    /// have length at most one.
    Lemma27 {
        #[arg(long)]
        file: String,
        /// Window width in columns (default: twice the vertical extent
        /// plus four).
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// No staircase starts with a vertical arrow and ends with a
    /// horizontal one.
    Prop55 {
        #[arg(long)]
        file: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_pair(text: &str) -> CliResult<(i64, i64)> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| hfklab_cli::CliError::input(format!("bad pair component {s:?}")))
    };
    match parts.as_slice() {
        [a, b] => Ok((parse(a)?, parse(b)?)),
        _ => Err(hfklab_cli::CliError::input(format!("expected \"p,q\", got {text:?}"))),
    }
}

fn run(cli: Cli) -> CliResult<(CommandOutput, OutputArgs)> {
    match cli.command {
        Command::TorusSweep { max_pq, output, corrupt } => {
            if max_pq < 3 {
                return Err(hfklab_cli::CliError::input("--max-pq must be at least 3".into()));
            }
            let corrupt = corrupt.as_deref().map(parse_pair).transpose()?;
            let outcome = torus_sweep(max_pq, corrupt)?;
            let text = render_sweep(&outcome, output.format);
            Ok((CommandOutput { text, passed: outcome.passed }, output))
        }
        Command::Check { tilde, quotient, lambda, mode, output } => {
            let mode = match mode.as_str() {
                "rank" => CheckMode::Rank,
                "filtered" => CheckMode::Filtered,
                other => {
                    return Err(hfklab_cli::CliError::input(format!(
                        "unknown mode {other:?} (rank, filtered)"
                    )))
                }
            };
            let out = cmd_check(&tilde, &quotient, lambda, mode, output.format)?;
            Ok((out, output))
        }
        Command::AlexCheck {
            delta_q,
            delta_tilde,
            sigma_q,
            sigma_tilde,
            lambda,
            mode,
            output,
        } => {
            let mode = match mode.as_str() {
                "alternating" => AlexMode::Alternating,
                "lspace" => AlexMode::Lspace,
                other => {
                    return Err(hfklab_cli::CliError::input(format!(
                        "unknown mode {other:?} (alternating, lspace)"
                    )))
                }
            };
            let out = cmd_alex_check(
                &delta_q,
                &delta_tilde,
                sigma_q,
                sigma_tilde,
                lambda,
                mode,
                output.format,
            )?;
            Ok((out, output))
        }
        Command::Gen { seed, count, ops, strands, quiet, output } => {
            let out = cmd_gen(seed, count, ops, strands, quiet)?;
            Ok((out, output))
        }
        Command::Ingest { files, output } => {
            if files.is_empty() {
                return Err(hfklab_cli::CliError::input("ingest needs at least one file".into()));
            }
            let out = cmd_ingest(&files, output.format)?;
            Ok((out, output))
        }
        Command::Bicomplex { action } => {
            let (action, file, window, per_grading, output, dec_out) = match action {
                BicomplexCommand::Decompose { file, decomposition_out, output } => {
                    (BicomplexAction::Decompose, file, None, false, output, decomposition_out)
                }
                BicomplexCommand::Verify { file, output } => {
                    (BicomplexAction::Verify, file, None, false, output, None)
                }
                BicomplexCommand::Smith { file, output } => {
                    (BicomplexAction::Smith, file, None, false, output, None)
                }
                BicomplexCommand::Floyd { file, per_grading, output } => {
                    (BicomplexAction::Floyd, file, None, per_grading, output, None)
                }
                BicomplexCommand::Lemma27 { file, window, output } => {
                    (BicomplexAction::Lemma27, file, window, false, output, None)
                }
                BicomplexCommand::Prop55 { file, output } => {
                    (BicomplexAction::Prop55, file, None, false, output, None)
                }
            };
            let out = cmd_bicomplex(
                action,
                &file,
                window,
                per_grading,
                output.format,
                dec_out.as_deref(),
            )?;
            Ok((out, output))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok((result, output)) => {
            if let Some(path) = output.out {
                if let Err(e) = std::fs::write(&path, &result.text) {
                    eprintln!("error: cannot write {path}: {e}");
                    std::process::exit(hfklab_cli::EXIT_INPUT);
                }
            } else {
                print!("{}", result.text);
            }
            std::process::exit(if result.passed { EXIT_PASS } else { EXIT_CHECK_FAILED });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.code);
        }
    }
}
