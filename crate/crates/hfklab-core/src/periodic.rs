//! Rank-inequality checkers for 2-periodic knots over their quotients.
//!
//! A periodic pair consists of the rank table of the periodic knot, the
//! rank table of the quotient, and the odd linking number of the quotient
//! with the axis. Quotient Alexander grading `a` lifts to
//! `2a + (lambda - 1)/2`, and every checker compares column sums around
//! the lifted pair of adjacent gradings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use thiserror::Error;

use crate::hfk::{lspace_hfk, HfkTable};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::report::CheckReport;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeriodicError {
    #[error("linking number must be odd, got {0}")]
    EvenLambda(i64),
    #[error("signature must be even, got {0}")]
    OddSignature(i64),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// ok means `lhs >= rhs` for `ge` rows and `lhs == rhs` for `eq_*` rows.
fn push_eq(report: &mut CheckReport, a: i64, lhs: i64, rhs: i64, side: &str) {
    report.push(crate::report::CheckRow {
        a,
        q: None,
        lhs,
        rhs,
        ok: lhs == rhs,
        side: Some(side.to_string()),
    });
}

/// A periodic knot table, its quotient table, and lambda = lk(K, A).
#[derive(Debug, Clone)]
pub struct PeriodicPair {
    pub hfk_tilde: HfkTable,
    pub hfk_q: HfkTable,
    lambda: i64,
}

impl PeriodicPair {
    pub fn new(hfk_tilde: HfkTable, hfk_q: HfkTable, lambda: i64) -> Result<Self, PeriodicError> {
        if lambda.rem_euclid(2) == 0 {
            return Err(PeriodicError::EvenLambda(lambda));
        }
        Ok(Self { hfk_tilde, hfk_q, lambda })
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn mirrored(&self) -> Self {
        Self {
            hfk_tilde: self.hfk_tilde.mirror(),
            hfk_q: self.hfk_q.mirror(),
            lambda: self.lambda,
        }
    }
}

/// Lifts a quotient Alexander grading: `2a + (lambda - 1)/2`.
pub fn lift_grading(a: i64, lambda: i64) -> Result<i64, PeriodicError> {
    if lambda.rem_euclid(2) == 0 {
        return Err(PeriodicError::EvenLambda(lambda));
    }
    Ok(2 * a + (lambda - 1) / 2)
}

fn floor_div2(n: i64) -> i64 {
    n.div_euclid(2)
}

fn ceil_div2(n: i64) -> i64 {
    -((-n).div_euclid(2))
}

/// Scan hull margins. The Alexander hull is the quotient's occupied
/// range, symmetrized (the second filtered inequality reads column `-a`)
/// and widened by `a`; the threshold hull covers the periodic knot's
/// Maslov range and twice the quotient's (the filtered comparison reads
/// the quotient at threshold `q/2`), widened by `q`. Outside these hulls
/// every row is saturated or vacuous, so enlarging the margins can never
/// flip a verdict.
#[derive(Debug, Clone, Copy)]
pub struct ScanMargins {
    pub a: i64,
    pub q: i64,
}

impl Default for ScanMargins {
    fn default() -> Self {
        Self { a: 1, q: 2 }
    }
}

/// Per-column suffix sums so threshold sums cost one binary search.
struct TableIndex {
    cols: std::collections::BTreeMap<i64, ColumnSums>,
}

struct ColumnSums {
    maslovs: Vec<i64>,
    /// suffix[i] = sum of ranks at maslovs[i..]
    suffix: Vec<u64>,
}

impl TableIndex {
    fn new(table: &HfkTable) -> Self {
        let mut cols = std::collections::BTreeMap::<i64, Vec<(i64, u64)>>::new();
        for (m, a, r) in table.entries() {
            cols.entry(a).or_default().push((m, r));
        }
        let cols = cols
            .into_iter()
            .map(|(a, mut entries)| {
                entries.sort_unstable();
                let maslovs: Vec<i64> = entries.iter().map(|&(m, _)| m).collect();
                let mut suffix: Vec<u64> = entries.iter().map(|&(_, r)| r).collect();
                for i in (0..suffix.len().saturating_sub(1)).rev() {
                    suffix[i] += suffix[i + 1];
                }
                (a, ColumnSums { maslovs, suffix })
            })
            .collect();
        Self { cols }
    }

    /// Sum of ranks in column `a` with maslov >= `q`.
    fn sum_ge(&self, a: i64, q: i64) -> u64 {
        let Some(col) = self.cols.get(&a) else { return 0 };
        let i = col.maslovs.partition_point(|&m| m < q);
        if i < col.suffix.len() {
            col.suffix[i]
        } else {
            0
        }
    }

    /// Sum of ranks in column `a` with maslov <= `q`.
    fn sum_le(&self, a: i64, q: i64) -> u64 {
        let Some(col) = self.cols.get(&a) else { return 0 };
        let total = col.suffix.first().copied().unwrap_or(0);
        total - self.sum_ge(a, q + 1)
    }

    fn column_total(&self, a: i64) -> u64 {
        self.cols
            .get(&a)
            .and_then(|c| c.suffix.first().copied())
            .unwrap_or(0)
    }
}

/// Which of the two filtered inequalities a scanned cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilteredSide {
    First,
    Second,
}

impl FilteredSide {
    pub fn as_str(self) -> &'static str {
        match self {
            FilteredSide::First => "first",
            FilteredSide::Second => "second",
        }
    }
}

/// Total rank inequality: for every Alexander grading `a` in the hull,
/// the ranks of the periodic knot at the lifted pair of gradings dominate
/// the quotient's column total.
pub fn check_total_rank(pair: &PeriodicPair) -> Result<CheckReport, PeriodicError> {
    check_total_rank_with(pair, ScanMargins::default())
}

pub fn check_total_rank_with(
    pair: &PeriodicPair,
    margins: ScanMargins,
) -> Result<CheckReport, PeriodicError> {
    let mut report = CheckReport::new("total_rank");
    let Some((a_lo, a_hi)) = pair.hfk_q.alexander_range() else {
        return Ok(report);
    };
    let tilde = TableIndex::new(&pair.hfk_tilde);
    let quot = TableIndex::new(&pair.hfk_q);
    for a in a_lo - margins.a..=a_hi + margins.a {
        let lifted = lift_grading(a, pair.lambda)?;
        let lhs = tilde.column_total(lifted) + tilde.column_total(lifted + 1);
        let rhs = quot.column_total(a);
        report.push_ge(a, None, lhs as i64, rhs as i64, None);
    }
    Ok(report)
}

/// Streams every (a, q, side, lhs, rhs) cell of the Maslov-filtered
/// inequality scan to `visit` without materializing rows.
pub fn scan_filtered_rank(
    pair: &PeriodicPair,
    margins: ScanMargins,
    mut visit: impl FnMut(i64, i64, FilteredSide, i64, i64),
) -> Result<(), PeriodicError> {
    let Some((a_lo, a_hi)) = pair.hfk_q.alexander_range() else {
        return Ok(());
    };
    let (a_lo, a_hi) = (a_lo.min(-a_hi), a_hi.max(-a_lo));
    let m_tilde = pair.hfk_tilde.maslov_range();
    let m_q = pair.hfk_q.maslov_range().map(|(lo, hi)| (2 * lo, 2 * hi));
    let (q_lo, q_hi) = match (m_tilde, m_q) {
        (Some((a, b)), Some((c, d))) => (a.min(c), b.max(d)),
        (Some(r), None) | (None, Some(r)) => r,
        (None, None) => return Ok(()),
    };
    let tilde = TableIndex::new(&pair.hfk_tilde);
    let quot = TableIndex::new(&pair.hfk_q);
    for a in a_lo - margins.a..=a_hi + margins.a {
        let lifted = lift_grading(a, pair.lambda)?;
        for q in q_lo - margins.q..=q_hi + margins.q {
            let lhs1 = tilde.sum_ge(lifted, q) + tilde.sum_ge(lifted + 1, q);
            let rhs1 = quot.sum_ge(a, ceil_div2(q + 1));
            visit(a, q, FilteredSide::First, lhs1 as i64, rhs1 as i64);
            let lhs2 = tilde.sum_le(-lifted, q) + tilde.sum_le(-lifted - 1, q);
            let rhs2 = quot.sum_le(-a, floor_div2(q - 1));
            visit(a, q, FilteredSide::Second, lhs2 as i64, rhs2 as i64);
        }
    }
    Ok(())
}

/// Maslov-filtered rank inequality, both directions, full row list.
pub fn check_filtered_rank(pair: &PeriodicPair) -> Result<CheckReport, PeriodicError> {
    check_filtered_rank_with(pair, ScanMargins::default())
}

pub fn check_filtered_rank_with(
    pair: &PeriodicPair,
    margins: ScanMargins,
) -> Result<CheckReport, PeriodicError> {
    let mut report = CheckReport::new("filtered_rank");
    scan_filtered_rank(pair, margins, |a, q, side, lhs, rhs| {
        report.push_ge(a, Some(q), lhs, rhs, Some(side.as_str()));
    })?;
    Ok(report)
}

/// Pass/fail summary of the filtered scan, cheap enough for sweeps.
pub fn filtered_rank_passes(pair: &PeriodicPair) -> Result<(bool, Option<(i64, i64)>), PeriodicError> {
    let mut first_failure = None;
    scan_filtered_rank(pair, ScanMargins::default(), |a, q, _, lhs, rhs| {
        if lhs < rhs && first_failure.is_none() {
            first_failure = Some((a, q));
        }
    })?;
    Ok((first_failure.is_none(), first_failure))
}

fn saturating_i64(v: &BigInt) -> i64 {
    v.try_into().unwrap_or(if v.is_negative() { i64::MIN } else { i64::MAX })
}

/// Alexander-polynomial consequences for an alternating periodic pair:
/// for each nonzero coefficient `a_s` of the quotient polynomial, the
/// periodic polynomial must carry enough weight on the lifted pair of
/// adjacent exponents, and the lifted exponent must satisfy the signature
/// bound. Mirror-side rows use the adjacent pair at the negated gradings.
pub fn check_alternating_consequence(
    delta_q: &LaurentPoly,
    sigma_q: i64,
    delta_tilde: &LaurentPoly,
    sigma_tilde: i64,
    lambda: i64,
) -> Result<CheckReport, PeriodicError> {
    if sigma_q.rem_euclid(2) != 0 {
        return Err(PeriodicError::OddSignature(sigma_q));
    }
    if sigma_tilde.rem_euclid(2) != 0 {
        return Err(PeriodicError::OddSignature(sigma_tilde));
    }
    let mut report = CheckReport::new("alternating");
    for (s, coeff) in delta_q.terms() {
        let lifted = lift_grading(s, lambda)?;
        let target = coeff.abs();
        let pair_weight = delta_tilde.coefficient(lifted).abs()
            + delta_tilde.coefficient(lifted + 1).abs();
        report.push_ge(
            s,
            None,
            saturating_i64(&pair_weight),
            saturating_i64(&target),
            Some("rank"),
        );
        report.push_ge(
            s,
            None,
            lifted + sigma_tilde / 2,
            2 * s + sigma_q - 1,
            Some("signature"),
        );
        let mirrored = lifted + 1;
        let mirror_weight = delta_tilde.coefficient(-mirrored).abs()
            + delta_tilde.coefficient(-mirrored + 1).abs();
        report.push_ge(
            s,
            None,
            saturating_i64(&mirror_weight),
            saturating_i64(&target),
            Some("rank_mirror"),
        );
        // Upper bound mirrored + sigma/2 <= 2s + sigma_q + 1, stored in
        // lhs >= rhs form.
        report.push_ge(
            s,
            None,
            2 * s + sigma_q + 1,
            mirrored + sigma_tilde / 2,
            Some("signature_mirror"),
        );
    }
    report.push_ge(
        0,
        None,
        delta_tilde.term_count() as i64,
        delta_q.term_count() as i64,
        Some("terms"),
    );
    Ok(report)
}

/// Alexander-polynomial consequences for an L-space periodic pair: with
/// `n` the width of the quotient polynomial, at most one term of the
/// periodic polynomial may lie above `2n + (lambda+1)/2`, at most one
/// below the mirror bound, the total term count is bounded by
/// `4n + lambda + 4`, and the periodic polynomial has at least as many
/// terms as the quotient.
pub fn check_lspace_consequence(
    delta_q: &LaurentPoly,
    delta_tilde: &LaurentPoly,
    lambda: i64,
) -> Result<CheckReport, PeriodicError> {
    if lambda.rem_euclid(2) == 0 {
        return Err(PeriodicError::EvenLambda(lambda));
    }
    let n = delta_q.width();
    let bound = 2 * n + (lambda + 1) / 2;
    let high = delta_tilde.terms().filter(|&(e, _)| e > bound).count() as i64;
    let low = delta_tilde.terms().filter(|&(e, _)| e < -bound).count() as i64;
    let total = delta_tilde.term_count() as i64;
    let mut report = CheckReport::new("lspace_bounds");
    report.push_ge(0, None, 1, high, Some("high_terms"));
    report.push_ge(0, None, 1, low, Some("low_terms"));
    report.push_ge(0, None, 4 * n + lambda + 4, total, Some("total_terms"));
    report.push_ge(0, None, total, delta_q.term_count() as i64, Some("terms"));
    Ok(report)
}

/// Torus-knot maximal-grading identity: lifting the quotient's top
/// Alexander grading with lambda = q lands exactly on the periodic
/// knot's top occupied grading, `(2p-1)(q-1)/2`, and both extremal
/// generators sit at Maslov 0. `p = 1` means an unknot quotient.
pub fn check_torus_max_grading(p: i64, q: i64) -> Result<CheckReport, PeriodicError> {
    if p < 1 || q < 2 || p.gcd(&q) != 1 || (2 * p).gcd(&q) != 1 {
        return Err(PeriodicError::Laurent(LaurentError::InvalidTorusParams { p, q }));
    }
    let delta_q = if p == 1 {
        LaurentPoly::one()
    } else {
        LaurentPoly::torus_alexander(p, q)?
    };
    let delta_tilde = LaurentPoly::torus_alexander(2 * p, q)?;
    let table_q = lspace_hfk(&delta_q).expect("torus polynomial is a staircase polynomial");
    let table_tilde = lspace_hfk(&delta_tilde).expect("torus polynomial is a staircase polynomial");

    let quot_top = table_q.alexander_range().expect("nonempty").1;
    let tilde_top = table_tilde.alexander_range().expect("nonempty").1;
    let lifted = lift_grading(quot_top, q)?;
    let formula = (2 * p - 1) * (q - 1) / 2;

    let mut report = CheckReport::new("torus_max_grading");
    push_eq(&mut report, quot_top, lifted, formula, "eq_lift_formula");
    push_eq(&mut report, tilde_top, lifted, tilde_top, "eq_max_grading");

    let top_maslov = |table: &HfkTable, a: i64| -> i64 {
        let col = table.alexander_column(a);
        debug_assert_eq!(col.len(), 1);
        col.keys().next().copied().unwrap_or(i64::MAX)
    };
    push_eq(&mut report, tilde_top, top_maslov(&table_tilde, tilde_top), 0, "eq_tilde_top_maslov");
    push_eq(&mut report, quot_top, top_maslov(&table_q, quot_top), 0, "eq_quotient_top_maslov");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfk::alternating_hfk;
    use crate::laurent::parse_poly;
    use crate::rng::SplitMix64;

    fn p(text: &str) -> LaurentPoly {
        parse_poly(text).unwrap()
    }

    fn torus_table(pp: i64, qq: i64) -> HfkTable {
        lspace_hfk(&LaurentPoly::torus_alexander(pp, qq).unwrap()).unwrap()
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_grading(0, 1).unwrap(), 0);
        assert_eq!(lift_grading(1, 1).unwrap(), 2);
        assert_eq!(lift_grading(0, 3).unwrap(), 1);
        assert_eq!(lift_grading(2, 3).unwrap(), 5);
        assert!(matches!(lift_grading(0, 2), Err(PeriodicError::EvenLambda(2))));
    }

    #[test]
    fn pair_requires_odd_lambda() {
        assert!(matches!(
            PeriodicPair::new(HfkTable::unknot(), HfkTable::unknot(), 4),
            Err(PeriodicError::EvenLambda(4))
        ));
    }

    #[test]
    fn total_rank_unknot_over_unknot() {
        let pair = PeriodicPair::new(HfkTable::unknot(), HfkTable::unknot(), 1).unwrap();
        let report = check_total_rank(&pair).unwrap();
        assert!(report.passed);
        let center = report.rows.iter().find(|r| r.a == 0).unwrap();
        assert_eq!((center.lhs, center.rhs), (1, 1));
    }

    #[test]
    fn total_rank_trefoil_over_unknot() {
        // T(2,3) is 2-periodic over the unknot with lambda = 3.
        let pair = PeriodicPair::new(torus_table(2, 3), HfkTable::unknot(), 3).unwrap();
        let report = check_total_rank(&pair).unwrap();
        assert!(report.passed);
        let center = report.rows.iter().find(|r| r.a == 0).unwrap();
        assert_eq!((center.lhs, center.rhs), (1, 1));
    }

    #[test]
    fn total_rank_designed_failure() {
        let pair = PeriodicPair::new(HfkTable::new(), HfkTable::unknot(), 1).unwrap();
        let report = check_total_rank(&pair).unwrap();
        assert!(!report.passed);
        assert_eq!(report.first_failure.as_ref().unwrap().a, 0);
    }

    #[test]
    fn filtered_trefoil_over_unknot() {
        let pair = PeriodicPair::new(torus_table(2, 3), HfkTable::unknot(), 3).unwrap();
        let report = check_filtered_rank(&pair).unwrap();
        assert!(report.passed);
        // Spot value: a = 0, q = 0, first inequality has lhs 1, rhs 0.
        let row = report
            .rows
            .iter()
            .find(|r| r.a == 0 && r.q == Some(0) && r.side.as_deref() == Some("first"))
            .unwrap();
        assert_eq!((row.lhs, row.rhs), (1, 0));
    }

    #[test]
    fn filtered_torus_double_cover_pairs() {
        for (pp, qq) in [(2, 3), (3, 5), (2, 7)] {
            let pair =
                PeriodicPair::new(torus_table(2 * pp, qq), torus_table(pp, qq), qq).unwrap();
            let (ok, _) = filtered_rank_passes(&pair).unwrap();
            assert!(ok, "filtered inequality failed for T({},{})", 2 * pp, qq);
            assert!(check_total_rank(&pair).unwrap().passed);
        }
    }

    #[test]
    fn filtered_designed_failure() {
        // A single generator pushed down to Maslov -10 starves the
        // filtered sums even though total ranks still balance.
        let mut tilde = HfkTable::new();
        tilde.set(-10, 0, 1);
        let pair = PeriodicPair::new(tilde, HfkTable::unknot(), 1).unwrap();
        let report = check_filtered_rank(&pair).unwrap();
        assert!(!report.passed);
        // The starved tail first shows at q = -9: the lifted generator at
        // Maslov -10 drops out of the sum while the quotient still counts.
        let fail = report.first_failure.as_ref().unwrap();
        assert_eq!((fail.a, fail.q), (0, Some(-9)));
        assert!(report
            .failures()
            .any(|r| r.a == 0 && r.q == Some(-1) && r.side.as_deref() == Some("first")));
        assert!(report.failures().all(|r| r.side.as_deref() == Some("first")));
        // Total ranks alone still pass.
        assert!(check_total_rank(&PeriodicPair::new(
            {
                let mut t = HfkTable::new();
                t.set(-10, 0, 1);
                t
            },
            HfkTable::unknot(),
            1
        )
        .unwrap())
        .unwrap()
        .passed);
    }

    #[test]
    fn filtered_implies_total_on_double_covers() {
        for (pp, qq) in [(2, 3), (2, 5), (3, 5), (4, 3), (5, 3)] {
            let pair =
                PeriodicPair::new(torus_table(2 * pp, qq), torus_table(pp, qq), qq).unwrap();
            let filtered = filtered_rank_passes(&pair).unwrap().0;
            let total = check_total_rank(&pair).unwrap().passed;
            assert!(!filtered || total);
        }
    }

    fn random_table(rng: &mut SplitMix64) -> HfkTable {
        let mut t = HfkTable::new();
        let n = rng.next_below(6) + 1;
        for _ in 0..n {
            let m = rng.next_below(9) as i64 - 4;
            let a = rng.next_below(7) as i64 - 3;
            t.set(m, a, rng.next_below(3) + 1);
        }
        t
    }

    #[test]
    fn mirror_exchanges_the_two_filtered_inequalities() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..50 {
            let pair = PeriodicPair::new(random_table(&mut rng), random_table(&mut rng), 3).unwrap();
            let direct = check_filtered_rank(&pair).unwrap();
            let mirrored = check_filtered_rank(&pair.mirrored()).unwrap();
            assert_eq!(direct.passed, mirrored.passed);
            // Cell-level exchange: first(a, q) of the original equals
            // second(a, -q) of the mirrored pair.
            for row in &direct.rows {
                if row.side.as_deref() != Some("first") {
                    continue;
                }
                let q = row.q.unwrap();
                if let Some(m) = mirrored.rows.iter().find(|r| {
                    r.a == row.a && r.q == Some(-q) && r.side.as_deref() == Some("second")
                }) {
                    assert_eq!((m.lhs, m.rhs), (row.lhs, row.rhs));
                }
            }
        }
    }

    #[test]
    fn enlarging_the_hull_never_flips_a_verdict() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..40 {
            let pair = PeriodicPair::new(random_table(&mut rng), random_table(&mut rng), 1).unwrap();
            let narrow = check_filtered_rank_with(&pair, ScanMargins { a: 1, q: 2 }).unwrap();
            let wide = check_filtered_rank_with(&pair, ScanMargins { a: 4, q: 6 }).unwrap();
            assert_eq!(narrow.passed, wide.passed);
            let tn = check_total_rank_with(&pair, ScanMargins { a: 1, q: 2 }).unwrap();
            let tw = check_total_rank_with(&pair, ScanMargins { a: 5, q: 2 }).unwrap();
            assert_eq!(tn.passed, tw.passed);
        }
    }

    #[test]
    fn alternating_consequence_reproduces_known_pair() {
        // 10_122 over 4_1, lambda = 1, both signatures 0.
        let delta_q = p("-t + 3 - t^-1");
        let delta_tilde = p("-2t^3 + 11t^2 - 24t + 31 - 24t^-1 + 11t^-2 - 2t^-3");
        let report =
            check_alternating_consequence(&delta_q, 0, &delta_tilde, 0, 1).unwrap();
        assert!(report.passed);
        let rank_rows: Vec<(i64, i64, i64)> = report
            .rows
            .iter()
            .filter(|r| r.side.as_deref() == Some("rank"))
            .map(|r| (r.a, r.lhs, r.rhs))
            .collect();
        assert_eq!(rank_rows, vec![(-1, 35, 1), (0, 55, 3), (1, 13, 1)]);
        let sig_rows: Vec<(i64, i64, i64)> = report
            .rows
            .iter()
            .filter(|r| r.side.as_deref() == Some("signature"))
            .map(|r| (r.a, r.lhs, r.rhs))
            .collect();
        assert_eq!(sig_rows, vec![(-1, -2, -3), (0, 0, -1), (1, 2, 1)]);
        // Consistency with the table-level check: the same pair passes
        // the total rank inequality built from the alternating tables.
        let pair = PeriodicPair::new(
            alternating_hfk(&delta_tilde, 0).unwrap(),
            alternating_hfk(&delta_q, 0).unwrap(),
            1,
        )
        .unwrap();
        assert!(check_total_rank(&pair).unwrap().passed);
        assert!(check_filtered_rank(&pair).unwrap().passed);
    }

    #[test]
    fn alternating_consequence_trivial_pair() {
        // The unknot over the unknot carries lambda = +-1; with any other
        // lambda the lifted pair of exponents misses the constant term
        // and the weight check rightly fails.
        let one = LaurentPoly::one();
        for lambda in [1, -1] {
            let report = check_alternating_consequence(&one, 0, &one, 0, lambda).unwrap();
            assert!(report.passed);
        }
        let report = check_alternating_consequence(&one, 0, &one, 0, 5).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn alternating_consequence_rejects_odd_signature() {
        let one = LaurentPoly::one();
        assert!(matches!(
            check_alternating_consequence(&one, 1, &one, 0, 1),
            Err(PeriodicError::OddSignature(1))
        ));
    }

    #[test]
    fn lspace_consequence_torus_pair() {
        let report = check_lspace_consequence(
            &LaurentPoly::torus_alexander(3, 5).unwrap(),
            &LaurentPoly::torus_alexander(6, 5).unwrap(),
            5,
        )
        .unwrap();
        assert!(report.passed);
    }

    #[test]
    fn lspace_consequence_trivial_and_failing() {
        let one = LaurentPoly::one();
        assert!(check_lspace_consequence(&one, &one, 1).unwrap().passed);
        // Two terms above the bound break the high-term count.
        let bad = p("t^100 + t^99 - 1 + t^-99 + t^-100");
        let report = check_lspace_consequence(&one, &bad, 1).unwrap();
        assert!(!report.passed);
        assert!(report
            .failures()
            .any(|r| r.side.as_deref() == Some("high_terms")));
        // One lone extreme term is allowed by the bound.
        let borderline = p("t^100 + 1 + t^-100");
        assert!(check_lspace_consequence(&one, &borderline, 1).unwrap().passed);
    }

    #[test]
    fn torus_max_grading_examples() {
        let r23 = check_torus_max_grading(2, 3).unwrap();
        assert!(r23.passed);
        let lift_row = r23
            .rows
            .iter()
            .find(|r| r.side.as_deref() == Some("eq_lift_formula"))
            .unwrap();
        assert_eq!((lift_row.lhs, lift_row.rhs), (3, 3));

        let r35 = check_torus_max_grading(3, 5).unwrap();
        assert!(r35.passed);
        let lift_row = r35
            .rows
            .iter()
            .find(|r| r.side.as_deref() == Some("eq_lift_formula"))
            .unwrap();
        assert_eq!(lift_row.lhs, 10);

        // Unknot quotient: T(2,3) over the unknot.
        let r13 = check_torus_max_grading(1, 3).unwrap();
        assert!(r13.passed);
        let lift_row = r13
            .rows
            .iter()
            .find(|r| r.side.as_deref() == Some("eq_lift_formula"))
            .unwrap();
        assert_eq!((lift_row.lhs, lift_row.rhs), (1, 1));

        assert!(check_torus_max_grading(2, 4).is_err());
    }
}
