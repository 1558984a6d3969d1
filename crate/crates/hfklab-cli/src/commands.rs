//! Command implementations shared by the binary and the test suites.

use hfklab_core::bicomplex::{
    check_floyd, check_open_staircases, check_smith, classify_staircases, decompose,
    no_open_top_closed_bottom, per_grading_comparison, verify_decomposition_detailed, Bicomplex,
    BicomplexError, EquivariantComplex,
};
use hfklab_core::hfk::euler;
use hfklab_core::laurent::render_poly;
use hfklab_core::periodic::{
    check_alternating_consequence, check_filtered_rank, check_lspace_consequence,
    check_total_rank, PeriodicPair,
};
use hfklab_core::report::CheckReport;
use hfklab_core::tangle;

use crate::inputs::{load_poly, load_table};
use crate::reportfmt::{render_report, Format};
use crate::{CliError, CliResult};

pub struct CommandOutput {
    pub text: String,
    pub passed: bool,
}

impl CommandOutput {
    fn from_report(report: &CheckReport, format: Format) -> Self {
        Self {
            text: render_report(report, format),
            passed: report.passed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Rank,
    Filtered,
}

/// `check`: rank-inequality verification between two ingested tables.
pub fn cmd_check(
    tilde_spec: &str,
    quotient_spec: &str,
    lambda: i64,
    mode: CheckMode,
    format: Format,
) -> CliResult<CommandOutput> {
    let tilde = load_table(tilde_spec)?;
    let quotient = load_table(quotient_spec)?;
    let pair = PeriodicPair::new(tilde, quotient, lambda).map_err(CliError::from_input)?;
    let report = match mode {
        CheckMode::Rank => check_total_rank(&pair).map_err(CliError::from_internal)?,
        CheckMode::Filtered => check_filtered_rank(&pair).map_err(CliError::from_internal)?,
    };
    Ok(CommandOutput::from_report(&report, format))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlexMode {
    Alternating,
    Lspace,
}

/// `alex-check`: Alexander-polynomial consequences for a periodic pair.
pub fn cmd_alex_check(
    delta_q_spec: &str,
    delta_tilde_spec: &str,
    sigma_q: Option<i64>,
    sigma_tilde: Option<i64>,
    lambda: i64,
    mode: AlexMode,
    format: Format,
) -> CliResult<CommandOutput> {
    let dq = load_poly(delta_q_spec)?;
    let dt = load_poly(delta_tilde_spec)?;
    for input in [&dq, &dt] {
        if let Some(note) = &input.note {
            eprintln!("note: {note}");
        }
    }
    let report = match mode {
        AlexMode::Alternating => {
            let sq = sigma_q.or(dq.signature).ok_or_else(|| {
                CliError::input("alternating mode needs --sigma-q (or a knot: source)".into())
            })?;
            let st = sigma_tilde.or(dt.signature).ok_or_else(|| {
                CliError::input("alternating mode needs --sigma-tilde (or a knot: source)".into())
            })?;
            check_alternating_consequence(&dq.poly, sq, &dt.poly, st, lambda)
                .map_err(CliError::from_input)?
        }
        AlexMode::Lspace => {
            check_lspace_consequence(&dq.poly, &dt.poly, lambda).map_err(CliError::from_input)?
        }
    };
    Ok(CommandOutput::from_report(&report, format))
}

/// `gen`: the pseudorandom periodic-knot harness, one JSON record per
/// accepted word.
pub fn cmd_gen(seed: u64, count: usize, n_ops: usize, strands: usize, quiet: bool) -> CliResult<CommandOutput> {
    if count < 1 {
        return Err(CliError::input("--count must be at least 1".into()));
    }
    let (records, stats) = tangle::harness_with_progress(seed, count, n_ops, strands, |done| {
        if !quiet && done % 100 == 0 {
            eprintln!("generated {done}/{count}");
        }
    });
    let mut text = String::new();
    for r in &records {
        text.push_str(&serde_json::to_string(&r.to_json()).expect("serializes"));
        text.push('\n');
    }
    if !quiet {
        let rejected = stats.rejected_not_knot + stats.rejected_even_lambda + stats.rejected_duplicate;
        eprintln!(
            "accepted {count} of {} words ({} non-knot closures, {} even linking numbers, {} duplicates)",
            stats.attempts, stats.rejected_not_knot, stats.rejected_even_lambda, stats.rejected_duplicate
        );
        let _ = rejected;
    }
    Ok(CommandOutput { text, passed: true })
}

/// `ingest`: validate externally computed rank tables and summarize them.
pub fn cmd_ingest(specs: &[String], format: Format) -> CliResult<CommandOutput> {
    let mut text = String::new();
    let mut json_rows = Vec::new();
    for spec in specs {
        let table = load_table(spec)?;
        if table.is_empty() {
            eprintln!("warning: {spec}: empty generator list");
        }
        match format {
            Format::Json => json_rows.push(serde_json::json!({
                "source": spec,
                "table": table.to_json(),
                "total_rank": table.total_rank(),
                "euler": render_poly(&euler(&table)),
            })),
            _ => {
                let label = table.label.clone().unwrap_or_else(|| spec.clone());
                let range = table
                    .alexander_range()
                    .map_or("empty".to_string(), |(lo, hi)| format!("[{lo}, {hi}]"));
                text.push_str(&format!(
                    "{label}: {} generators, total rank {}, alexander range {}, euler {}\n",
                    table.entries().count(),
                    table.total_rank(),
                    range,
                    render_poly(&euler(&table)),
                ));
            }
        }
    }
    if format == Format::Json {
        text = serde_json::to_string_pretty(&serde_json::Value::Array(json_rows)).expect("serializes");
        text.push('\n');
    }
    Ok(CommandOutput { text, passed: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BicomplexAction {
    Decompose,
    Verify,
    Smith,
    Floyd,
    Lemma27,
    Prop55,
}

fn load_bicomplex(spec: &str) -> CliResult<Bicomplex> {
    let text = std::fs::read_to_string(spec)
        .map_err(|e| CliError::input(format!("cannot read {spec}: {e}")))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{spec}: {e}")))?;
    let b = Bicomplex::from_json(&value).map_err(CliError::from_input)?;
    b.validate().map_err(CliError::from_input)?;
    Ok(b)
}

fn load_equivariant(spec: &str) -> CliResult<EquivariantComplex> {
    let text = if let Some(name) = spec.strip_prefix("bundle:") {
        crate::data::data_text(name)?
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| CliError::input(format!("cannot read {spec}: {e}")))?
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{spec}: {e}")))?;
    let e = EquivariantComplex::from_json(&value).map_err(CliError::from_input)?;
    e.validate().map_err(CliError::from_input)?;
    Ok(e)
}

fn classify_text(d: &hfklab_core::bicomplex::Decomposition) -> String {
    let mut out = format!("{} squares\n", d.squares.len());
    for ((open_top, open_bottom, length), count) in classify_staircases(d) {
        let top = if open_top { "open" } else { "closed" };
        let bottom = if open_bottom { "open" } else { "closed" };
        out.push_str(&format!(
            "{count} staircases of length {length} ({top} top, {bottom} bottom)\n"
        ));
    }
    out
}

/// `bicomplex` subcommands over complexes supplied as JSON files.
pub fn cmd_bicomplex(
    action: BicomplexAction,
    file: &str,
    window: Option<usize>,
    per_grading: bool,
    format: Format,
    decomposition_out: Option<&str>,
) -> CliResult<CommandOutput> {
    match action {
        BicomplexAction::Decompose => {
            let b = load_bicomplex(file)?;
            let d = decompose(&b).map_err(CliError::from_internal)?;
            if let Some(path) = decomposition_out {
                let pretty =
                    serde_json::to_string_pretty(&d.to_json()).expect("serializes");
                std::fs::write(path, pretty)
                    .map_err(|e| CliError::input(format!("cannot write {path}: {e}")))?;
            }
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&d.to_json()).expect("serializes");
                    s.push('\n');
                    s
                }
                _ => classify_text(&d),
            };
            Ok(CommandOutput { text, passed: true })
        }
        BicomplexAction::Verify => {
            let b = load_bicomplex(file)?;
            let d = decompose(&b).map_err(CliError::from_internal)?;
            match verify_decomposition_detailed(&b, &d) {
                Ok(()) => Ok(CommandOutput {
                    text: "decomposition certificate: PASS\n".into(),
                    passed: true,
                }),
                Err(msg) => Ok(CommandOutput {
                    text: format!("decomposition certificate: FAIL ({msg})\n"),
                    passed: false,
                }),
            }
        }
        BicomplexAction::Smith => {
            let e = load_equivariant(file)?;
            let report = check_smith(&e).map_err(CliError::from_input)?;
            Ok(CommandOutput::from_report(&report, format))
        }
        BicomplexAction::Floyd => {
            let e = load_equivariant(file)?;
            let report = check_floyd(&e).map_err(CliError::from_input)?;
            let mut out = CommandOutput::from_report(&report, format);
            if per_grading && format == Format::Human {
                out.text.push_str("per-grading homology (complex vs fixed set):\n");
                for (i, hx, hf) in per_grading_comparison(&e).map_err(CliError::from_input)? {
                    let marker = if hx < hf { "  <- fails gradingwise" } else { "" };
                    out.text
                        .push_str(&format!("  i={i}: {hx} vs {hf}{marker}\n"));
                }
            }
            Ok(out)
        }
        BicomplexAction::Lemma27 => {
            let e = load_equivariant(file)?;
            let w = window.unwrap_or_else(|| e.default_window());
            let ok = check_open_staircases(&e, w).map_err(|err| match err {
                BicomplexError::InternalError(_) => CliError::from_internal(err),
                other => CliError::from_input(other),
            })?;
            Ok(CommandOutput {
                text: format!(
                    "open-top staircases in the {w}-column window have length <= 1: {}\n",
                    if ok { "PASS" } else { "FAIL" }
                ),
                passed: ok,
            })
        }
        BicomplexAction::Prop55 => {
            let b = load_bicomplex(file)?;
            let d = decompose(&b).map_err(CliError::from_internal)?;
            let ok = no_open_top_closed_bottom(&d);
            let mut text = classify_text(&d);
            text.push_str(&format!(
                "no staircase starts vertically and ends horizontally: {}\n",
                if ok { "PASS" } else { "FAIL" }
            ));
            Ok(CommandOutput { text, passed: ok })
        }
    }
}
