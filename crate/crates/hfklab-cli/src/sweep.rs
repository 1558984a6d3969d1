//! The torus double-cover sweep: for every coprime pair with q odd, the
//! (2p, q) torus knot is 2-periodic over the (p, q) torus knot with
//! lambda = q, and every checker must pass with exact integer arithmetic.

use rayon::prelude::*;

use hfklab_core::hfk::lspace_hfk;
use hfklab_core::laurent::LaurentPoly;
use hfklab_core::periodic::{
    check_lspace_consequence, check_torus_max_grading, check_total_rank, filtered_rank_passes,
    PeriodicPair,
};
use hfklab_core::HfkTable;

use crate::reportfmt::Format;
use crate::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub p: i64,
    pub q: i64,
    pub filtered: bool,
    pub total: bool,
    pub max_grading: bool,
    pub poly_bounds: bool,
    pub first_failure: Option<(i64, i64)>,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.filtered && self.total && self.max_grading && self.poly_bounds
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

pub fn admissible_pairs(max_pq: i64) -> Vec<(i64, i64)> {
    let mut pairs = Vec::new();
    for p in 2..max_pq {
        for q in (3..max_pq).step_by(2) {
            // q odd makes gcd(2p, q) = gcd(p, q).
            if gcd(p, q) == 1 {
                pairs.push((p, q));
            }
        }
    }
    pairs
}

/// Checks one pair; `tamper` optionally corrupts the periodic table
/// first (the failure-injection hook used by tests).
pub fn check_pair(p: i64, q: i64, tamper: Option<&dyn Fn(&mut HfkTable)>) -> CliResult<SweepRow> {
    let delta_q = LaurentPoly::torus_alexander(p, q).map_err(CliError::from_input)?;
    let delta_tilde = LaurentPoly::torus_alexander(2 * p, q).map_err(CliError::from_input)?;
    let table_q = lspace_hfk(&delta_q).map_err(CliError::from_internal)?;
    let mut table_tilde = lspace_hfk(&delta_tilde).map_err(CliError::from_internal)?;
    if let Some(tamper) = tamper {
        tamper(&mut table_tilde);
    }
    let pair = PeriodicPair::new(table_tilde, table_q, q).map_err(CliError::from_input)?;
    let (filtered, first_failure) = filtered_rank_passes(&pair).map_err(CliError::from_internal)?;
    let total = check_total_rank(&pair).map_err(CliError::from_internal)?.passed;
    let max_grading = check_torus_max_grading(p, q)
        .map_err(CliError::from_internal)?
        .passed;
    let poly_bounds = check_lspace_consequence(&delta_q, &delta_tilde, q)
        .map_err(CliError::from_internal)?
        .passed;
    Ok(SweepRow { p, q, filtered, total, max_grading, poly_bounds, first_failure })
}

pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub passed: bool,
}

/// Runs the sweep over all admissible pairs below `max_pq`. Pairs are
/// independent and evaluated in parallel; rows come back in input order.
pub fn torus_sweep(max_pq: i64, corrupt: Option<(i64, i64)>) -> CliResult<SweepOutcome> {
    let pairs = admissible_pairs(max_pq);
    let rows: Vec<CliResult<SweepRow>> = pairs
        .par_iter()
        .map(|&(p, q)| {
            let tamper: Option<Box<dyn Fn(&mut HfkTable)>> = match corrupt {
                Some((cp, cq)) if (cp, cq) == (p, q) => Some(Box::new(move |t: &mut HfkTable| {
                    // Move the topmost generator out of place.
                    if let Some((_, hi)) = t.alexander_range() {
                        let col = t.alexander_column(hi);
                        if let Some((&m, &r)) = col.iter().next_back() {
                            t.set(m, hi, 0);
                            t.set(m - 7, hi + 7, r);
                        }
                    }
                })),
                _ => None,
            };
            check_pair(p, q, tamper.as_deref())
        })
        .collect();
    let rows: Vec<SweepRow> = rows.into_iter().collect::<CliResult<_>>()?;
    let passed = rows.iter().all(SweepRow::passed);
    Ok(SweepOutcome { rows, passed })
}

pub fn render_sweep(outcome: &SweepOutcome, format: Format) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            for r in &outcome.rows {
                let verdict = |b: bool| if b { "ok" } else { "FAIL" };
                out.push_str(&format!(
                    "T({},{}) over T({},{}) lambda={}: filtered {} total {} max-grading {} poly-bounds {}",
                    2 * r.p,
                    r.q,
                    r.p,
                    r.q,
                    r.q,
                    verdict(r.filtered),
                    verdict(r.total),
                    verdict(r.max_grading),
                    verdict(r.poly_bounds),
                ));
                if let Some((a, q)) = r.first_failure {
                    out.push_str(&format!(" (first failure a={a}, q={q})"));
                }
                out.push('\n');
            }
            out.push_str(&format!(
                "{} pairs checked: {}\n",
                outcome.rows.len(),
                if outcome.passed { "all PASS" } else { "FAILURES FOUND" }
            ));
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = outcome
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "p": r.p,
                        "q": r.q,
                        "filtered": r.filtered,
                        "total": r.total,
                        "max_grading": r.max_grading,
                        "poly_bounds": r.poly_bounds,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "passed": outcome.passed,
                "pairs": rows,
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("p,q,filtered,total,max_grading,poly_bounds\n");
            for r in &outcome.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.p, r.q, r.filtered, r.total, r.max_grading, r.poly_bounds
                ));
            }
            out
        }
    }
}
