//! Bigraded rank tables of HFK-hat over F2 and the closed-form builders
//! for alternating knots and L-space knots.
//!
//! A table stores only its nonzero ranks; absent entries read 0. The
//! Alexander polynomial is recovered as the Euler characteristic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HfkError {
    #[error("not an L-space knot polynomial: {reason}")]
    NotLSpacePolynomial { reason: LSpaceViolation },
    #[error("signature must be even, got {0}")]
    OddSignature(i64),
    #[error("polynomial is not symmetric (or is zero)")]
    AsymmetricPolynomial,
    #[error("table parse error: {0}")]
    ParseError(String),
    #[error("duplicate entry at maslov {maslov}, alexander {alexander}")]
    DuplicateEntry { maslov: i64, alexander: i64 },
    #[error("rank must be positive at maslov {maslov}, alexander {alexander}")]
    NonpositiveRank { maslov: i64, alexander: i64 },
}

/// Which precondition a candidate L-space polynomial violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LSpaceViolation {
    Zero,
    NotSymmetric,
    CoefficientNotUnit,
    SignsNotAlternating,
    TopCoefficientNotOne,
    EvenTermCount,
}

impl std::fmt::Display for LSpaceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Zero => "polynomial is zero",
            Self::NotSymmetric => "polynomial is not symmetric",
            Self::CoefficientNotUnit => "a coefficient is not +1 or -1",
            Self::SignsNotAlternating => "nonzero coefficients do not alternate in sign",
            Self::TopCoefficientNotOne => "top coefficient is not +1",
            Self::EvenTermCount => "number of nonzero terms is even",
        };
        f.write_str(s)
    }
}

/// Rank table of HFK-hat: (maslov, alexander) -> positive rank.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HfkTable {
    /// Keyed by (alexander, maslov) so serialized output sorts the way the
    /// wire format wants.
    ranks: BTreeMap<(i64, i64), u64>,
    pub label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    generators: Vec<GeneratorJson>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorJson {
    maslov: i64,
    alexander: i64,
    rank: u64,
}

impl HfkTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unknot() -> Self {
        let mut t = Self::new();
        t.set(0, 0, 1);
        t
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Sets the rank at (maslov, alexander); rank 0 removes the entry.
    pub fn set(&mut self, maslov: i64, alexander: i64, rank: u64) {
        if rank == 0 {
            self.ranks.remove(&(alexander, maslov));
        } else {
            self.ranks.insert((alexander, maslov), rank);
        }
    }

    pub fn rank_at(&self, maslov: i64, alexander: i64) -> u64 {
        self.ranks.get(&(alexander, maslov)).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> u64 {
        self.ranks.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Entries as (maslov, alexander, rank), sorted by (alexander, maslov).
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        self.ranks.iter().map(|(&(a, m), &r)| (m, a, r))
    }

    /// maslov -> rank for a fixed Alexander grading.
    pub fn alexander_column(&self, alexander: i64) -> BTreeMap<i64, u64> {
        self.ranks
            .range((alexander, i64::MIN)..=(alexander, i64::MAX))
            .map(|(&(_, m), &r)| (m, r))
            .collect()
    }

    pub fn column_total(&self, alexander: i64) -> u64 {
        self.ranks
            .range((alexander, i64::MIN)..=(alexander, i64::MAX))
            .map(|(_, &r)| r)
            .sum()
    }

    pub fn alexander_range(&self) -> Option<(i64, i64)> {
        let lo = self.ranks.keys().next()?.0;
        let hi = self.ranks.keys().next_back()?.0;
        Some((lo, hi))
    }

    pub fn maslov_range(&self) -> Option<(i64, i64)> {
        let mut it = self.ranks.keys().map(|&(_, m)| m);
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for m in it {
            lo = lo.min(m);
            hi = hi.max(m);
        }
        Some((lo, hi))
    }

    /// (maslov, alexander, rank) with gradings negated.
    pub fn mirror(&self) -> HfkTable {
        let mut out = HfkTable::new();
        out.label = self.label.clone();
        for (m, a, r) in self.entries() {
            out.set(-m, -a, r);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let generators = self
            .entries()
            .map(|(maslov, alexander, rank)| GeneratorJson { maslov, alexander, rank })
            .collect();
        serde_json::to_value(TableJson {
            label: self.label.clone(),
            generators,
        })
        .expect("table serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, HfkError> {
        let parsed: TableJson = serde_json::from_value(value.clone())
            .map_err(|e| HfkError::ParseError(e.to_string()))?;
        let mut out = HfkTable::new();
        out.label = parsed.label;
        for g in parsed.generators {
            if g.rank == 0 {
                return Err(HfkError::NonpositiveRank {
                    maslov: g.maslov,
                    alexander: g.alexander,
                });
            }
            if out.rank_at(g.maslov, g.alexander) != 0 {
                return Err(HfkError::DuplicateEntry {
                    maslov: g.maslov,
                    alexander: g.alexander,
                });
            }
            out.set(g.maslov, g.alexander, g.rank);
        }
        Ok(out)
    }

    /// CSV with header `maslov,alexander,rank`, rows sorted by
    /// (alexander, maslov).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("maslov,alexander,rank\n");
        for (m, a, r) in self.entries() {
            out.push_str(&format!("{m},{a},{r}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, HfkError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| HfkError::ParseError("empty CSV".into()))?;
        if header.trim() != "maslov,alexander,rank" {
            return Err(HfkError::ParseError(format!("bad CSV header: {header:?}")));
        }
        let mut out = HfkTable::new();
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 3 {
                return Err(HfkError::ParseError(format!(
                    "line {}: expected 3 fields",
                    lineno + 2
                )));
            }
            let parse = |s: &str| -> Result<i64, HfkError> {
                s.trim()
                    .parse()
                    .map_err(|_| HfkError::ParseError(format!("line {}: bad integer {s:?}", lineno + 2)))
            };
            let (m, a, r) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
            if r <= 0 {
                return Err(HfkError::NonpositiveRank { maslov: m, alexander: a });
            }
            if out.rank_at(m, a) != 0 {
                return Err(HfkError::DuplicateEntry { maslov: m, alexander: a });
            }
            out.set(m, a, r as u64);
        }
        Ok(out)
    }
}

/// The graded steps of an L-space knot staircase: pairs (n_i, delta_i)
/// with n strictly increasing and delta_k = 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSequence {
    steps: Vec<(i64, i64)>,
}

impl DeltaSequence {
    /// Steps as (alexander grading n_i, maslov grading delta_i), in
    /// increasing n.
    pub fn steps(&self) -> &[(i64, i64)] {
        &self.steps
    }

    pub fn min_delta(&self) -> i64 {
        self.steps.iter().map(|&(_, d)| d).min().unwrap_or(0)
    }
}

/// Validates the staircase preconditions and runs the grading recursion
/// downward from the top step: delta_k = 0, then
/// `delta_i = delta_{i+1} - 2(n_{i+1} - n_i) + 1` when k - i is odd and
/// `delta_i = delta_{i+1} - 1` when k - i > 0 is even.
pub fn delta_sequence(delta: &LaurentPoly) -> Result<DeltaSequence, HfkError> {
    let fail = |reason| Err(HfkError::NotLSpacePolynomial { reason });
    if delta.is_zero() {
        return fail(LSpaceViolation::Zero);
    }
    if !delta.is_symmetric() {
        return fail(LSpaceViolation::NotSymmetric);
    }
    let terms: Vec<(i64, BigInt)> = delta.terms().map(|(e, c)| (e, c.clone())).collect();
    if terms.iter().any(|(_, c)| !c.abs().is_one()) {
        return fail(LSpaceViolation::CoefficientNotUnit);
    }
    if terms.windows(2).any(|w| w[0].1 == w[1].1) {
        return fail(LSpaceViolation::SignsNotAlternating);
    }
    if !terms.last().unwrap().1.is_one() {
        return fail(LSpaceViolation::TopCoefficientNotOne);
    }
    if terms.len() % 2 == 0 {
        return fail(LSpaceViolation::EvenTermCount);
    }

    let exponents: Vec<i64> = terms.iter().map(|&(e, _)| e).collect();
    let count = exponents.len();
    let mut deltas = vec![0i64; count];
    // Walk from the top exponent down; j indexes `exponents`, the paper
    // index is i = j - k with k = (count - 1) / 2.
    for j in (0..count - 1).rev() {
        let dist_from_top = (count - 1 - j) as i64;
        deltas[j] = if dist_from_top % 2 == 1 {
            deltas[j + 1] - 2 * (exponents[j + 1] - exponents[j]) + 1
        } else {
            deltas[j + 1] - 1
        };
    }
    Ok(DeltaSequence {
        steps: exponents.into_iter().zip(deltas).collect(),
    })
}

/// HFK-hat of an L-space knot from its Alexander polynomial: rank 1 at
/// (delta_i, n_i) for each step and nothing else.
pub fn lspace_hfk(delta: &LaurentPoly) -> Result<HfkTable, HfkError> {
    let seq = delta_sequence(delta)?;
    let mut out = HfkTable::new();
    for &(n, d) in seq.steps() {
        out.set(d, n, 1);
    }
    Ok(out)
}

/// HFK-hat of an alternating knot from its Alexander polynomial and
/// signature: rank |a_s| at (s + sigma/2, s) for each nonzero
/// coefficient a_s.
pub fn alternating_hfk(delta: &LaurentPoly, sigma: i64) -> Result<HfkTable, HfkError> {
    if sigma % 2 != 0 {
        return Err(HfkError::OddSignature(sigma));
    }
    if delta.is_zero() || !delta.is_symmetric() {
        return Err(HfkError::AsymmetricPolynomial);
    }
    let half = sigma / 2;
    let mut out = HfkTable::new();
    for (s, c) in delta.terms() {
        let rank = c.abs();
        let rank: u64 = rank.try_into().expect("rank fits in u64");
        out.set(s + half, s, rank);
    }
    Ok(out)
}

/// Euler characteristic: sum over entries of (-1)^maslov * rank * t^alexander.
pub fn euler(table: &HfkTable) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (m, a, r) in table.entries() {
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        out = out.add(&LaurentPoly::monomial(a, BigInt::from(sign) * BigInt::from(r)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    fn p(text: &str) -> LaurentPoly {
        parse_poly(text).unwrap()
    }

    #[test]
    fn trefoil_delta_sequence() {
        let seq = delta_sequence(&p("t - 1 + t^-1")).unwrap();
        assert_eq!(seq.steps(), &[(-1, -2), (0, -1), (1, 0)]);
    }

    #[test]
    fn t34_delta_sequence_and_min_delta() {
        let seq = delta_sequence(&p("t^3 - t^2 + 1 - t^-2 + t^-3")).unwrap();
        assert_eq!(seq.steps(), &[(-3, -6), (-2, -5), (0, -2), (2, -1), (3, 0)]);
        // The minimal delta is n_{-k} - n_k, i.e. minus the width.
        assert_eq!(seq.min_delta(), -6);
    }

    #[test]
    fn unknot_delta_sequence() {
        let seq = delta_sequence(&LaurentPoly::one()).unwrap();
        assert_eq!(seq.steps(), &[(0, 0)]);
    }

    #[test]
    fn delta_sequence_rejects_bad_inputs() {
        let reason = |poly: &str| match delta_sequence(&p(poly)) {
            Err(HfkError::NotLSpacePolynomial { reason }) => reason,
            other => panic!("expected rejection, got {other:?}"),
        };
        assert_eq!(reason("t + 1 + t^-1"), LSpaceViolation::SignsNotAlternating);
        assert_eq!(reason("t - 2 + t^-1"), LSpaceViolation::CoefficientNotUnit);
        assert_eq!(reason("t - 1"), LSpaceViolation::NotSymmetric);
        assert_eq!(reason("-t + 1 - t^-1"), LSpaceViolation::TopCoefficientNotOne);
        assert_eq!(
            delta_sequence(&LaurentPoly::zero()).unwrap_err(),
            HfkError::NotLSpacePolynomial {
                reason: LSpaceViolation::Zero
            }
        );
    }

    #[test]
    fn lspace_tables() {
        let unknot = lspace_hfk(&LaurentPoly::one()).unwrap();
        assert_eq!(unknot, HfkTable::unknot());

        let trefoil = lspace_hfk(&p("t - 1 + t^-1")).unwrap();
        let expected: Vec<(i64, i64, u64)> = vec![(-2, -1, 1), (-1, 0, 1), (0, 1, 1)];
        assert_eq!(trefoil.entries().collect::<Vec<_>>(), expected);

        let t34 = lspace_hfk(&LaurentPoly::torus_alexander(3, 4).unwrap()).unwrap();
        for (m, a) in [(0, 3), (-1, 2), (-2, 0), (-5, -2), (-6, -3)] {
            assert_eq!(t34.rank_at(m, a), 1, "missing generator at ({m},{a})");
        }
        assert_eq!(t34.total_rank(), 5);
    }

    #[test]
    fn lspace_structure() {
        for (pp, qq) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (5, 7)] {
            let d = LaurentPoly::torus_alexander(pp, qq).unwrap();
            let t = lspace_hfk(&d).unwrap();
            // One generator per occupied column, all ranks 1.
            for (_, a, r) in t.entries() {
                assert_eq!(r, 1);
                assert_eq!(t.column_total(a), 1);
            }
            let width = (pp - 1) * (qq - 1);
            assert_eq!(t.alexander_range().unwrap().1, width / 2);
            assert_eq!(t.maslov_range().unwrap(), (-width, 0));
            assert_eq!(t.rank_at(0, width / 2), 1);
        }
    }

    #[test]
    fn alternating_figure_eight() {
        let t = alternating_hfk(&p("-t + 3 - t^-1"), 0).unwrap();
        assert_eq!(t.rank_at(1, 1), 1);
        assert_eq!(t.rank_at(0, 0), 3);
        assert_eq!(t.rank_at(-1, -1), 1);
        assert_eq!(t.total_rank(), 5);
    }

    #[test]
    fn alternating_unknot_and_trefoil() {
        assert_eq!(alternating_hfk(&LaurentPoly::one(), 0).unwrap(), HfkTable::unknot());
        // The trefoil is alternating with signature -2; both builders agree.
        let tre = p("t - 1 + t^-1");
        assert_eq!(
            alternating_hfk(&tre, -2).unwrap(),
            lspace_hfk(&tre).unwrap()
        );
    }

    #[test]
    fn alternating_rejects() {
        assert_eq!(
            alternating_hfk(&p("t - 1 + t^-1"), 1).unwrap_err(),
            HfkError::OddSignature(1)
        );
        assert_eq!(
            alternating_hfk(&p("t - 1"), 0).unwrap_err(),
            HfkError::AsymmetricPolynomial
        );
    }

    #[test]
    fn alternating_lies_on_one_diagonal() {
        let t = alternating_hfk(&p("2t^2 - 3t + 3 - 3t^-1 + 2t^-2"), 4).unwrap();
        for (m, a, _) in t.entries() {
            assert_eq!(m - a, 2);
        }
    }

    #[test]
    fn euler_recovers_the_polynomial() {
        for d in [
            p("t - 1 + t^-1"),
            LaurentPoly::torus_alexander(3, 4).unwrap(),
            LaurentPoly::torus_alexander(2, 7).unwrap(),
        ] {
            assert_eq!(euler(&lspace_hfk(&d).unwrap()), d);
        }
        // Alternating pairs with signatures matching the coefficient
        // signs, the shape every honest alternating knot has.
        for (d, sigma) in [
            (p("-t + 3 - t^-1"), 0),
            (p("t - 1 + t^-1"), -2),
            (p("t^2 - 3t + 5 - 3t^-1 + t^-2"), -4),
            (p("2t^2 - 3t + 5 - 3t^-1 + 2t^-2"), 0),
        ] {
            assert_eq!(euler(&alternating_hfk(&d, sigma).unwrap()), d);
        }
        assert_eq!(euler(&HfkTable::new()), LaurentPoly::zero());
    }

    #[test]
    fn accessors() {
        let t = alternating_hfk(&p("-t + 3 - t^-1"), 0).unwrap();
        assert_eq!(t.total_rank(), 5);
        assert_eq!(t.rank_at(99, 99), 0);
        let col = t.alexander_column(0);
        assert_eq!(col.get(&0), Some(&3));
        let tre = lspace_hfk(&p("t - 1 + t^-1")).unwrap();
        assert_eq!(tre.rank_at(-1, 0), 1);
    }

    #[test]
    fn mirror_is_an_involution() {
        let t = lspace_hfk(&p("t - 1 + t^-1")).unwrap();
        let m = t.mirror();
        for (mm, aa) in [(0, -1), (1, 0), (2, 1)] {
            assert_eq!(m.rank_at(mm, aa), 1);
        }
        assert_eq!(m.mirror(), t);
        assert_eq!(HfkTable::unknot().mirror(), HfkTable::unknot());
    }

    #[test]
    fn json_and_csv_round_trips() {
        let t = alternating_hfk(&p("-t + 3 - t^-1"), 0)
            .unwrap()
            .with_label("4_1");
        let j = t.to_json();
        assert_eq!(HfkTable::from_json(&j).unwrap(), t);
        let c = t.to_csv();
        let mut from_csv = HfkTable::from_csv(&c).unwrap();
        from_csv.label = t.label.clone();
        assert_eq!(from_csv, t);
    }

    #[test]
    fn json_validation() {
        let dup = serde_json::json!({"generators": [
            {"maslov": 0, "alexander": 0, "rank": 1},
            {"maslov": 0, "alexander": 0, "rank": 2}
        ]});
        assert!(matches!(
            HfkTable::from_json(&dup),
            Err(HfkError::DuplicateEntry { .. })
        ));
        let zero = serde_json::json!({"generators": [
            {"maslov": 0, "alexander": 0, "rank": 0}
        ]});
        assert!(matches!(
            HfkTable::from_json(&zero),
            Err(HfkError::NonpositiveRank { .. })
        ));
    }
}
