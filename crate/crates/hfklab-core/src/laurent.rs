//! Integer Laurent polynomials in one variable `t`.
//!
//! Coefficients are arbitrary-precision so no computation can overflow;
//! exponents are `i64`. The zero polynomial has an empty term map and
//! `width() == -1` by convention.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("not divisible: remainder is nonzero")]
    NotDivisible,
    #[error("invalid torus parameters p={p}, q={q}: require p,q >= 2 and gcd(p,q) = 1")]
    InvalidTorusParams { p: i64, q: i64 },
    #[error("parse error at byte {position}: {message}")]
    ParseError { position: usize, message: String },
    #[error("coefficient at t^{exponent} does not fit in the JSON integer range")]
    CoefficientOverflow { exponent: i64 },
}

/// A Laurent polynomial with integer coefficients. No stored coefficient
/// is zero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exponent: i64, coefficient: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        let c = coefficient.into();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Self { terms }
    }

    pub fn from_pairs<C: Into<BigInt>>(pairs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exponent: i64, coefficient: BigInt) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(BigInt::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: i64) -> BigInt {
        self.terms.get(&exponent).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// max exponent - min exponent; -1 for the zero polynomial.
    pub fn width(&self) -> i64 {
        match (self.min_exponent(), self.max_exponent()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => -1,
        }
    }

    /// coefficient(e) == coefficient(-e) for all e.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&e, c)| self.coefficient(-e) == *c)
    }

    /// Sum of all coefficients, i.e. the value at t = 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Multiplies by t^shift.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Substitutes t -> t^-1.
    pub fn reversed(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Exact division in the Laurent ring: returns `r` with `divisor * r == self`.
    ///
    /// Shifting both operands so their lowest terms sit at exponent zero
    /// reduces the problem to ordinary polynomial division over the
    /// integers, where the quotient is unique.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::NotDivisible);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let p_min = self.min_exponent().unwrap();
        let q_min = divisor.min_exponent().unwrap();
        let mut rem = self.shifted(-p_min);
        let den = divisor.shifted(-q_min);
        let den_deg = den.max_exponent().unwrap();
        let den_lead = den.coefficient(den_deg);
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let rem_deg = rem.max_exponent().unwrap();
            if rem_deg < den_deg {
                return Err(LaurentError::NotDivisible);
            }
            let rem_lead = rem.coefficient(rem_deg);
            let (c, leftover) = rem_lead.div_rem(&den_lead);
            if !leftover.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let e = rem_deg - den_deg;
            rem = rem.sub(&den.mul(&Self::monomial(e, c.clone())));
            quot.add_term(e, c);
        }
        Ok(quot.shifted(p_min - q_min))
    }

    /// The symmetrized Alexander polynomial of the (p,q) torus knot:
    /// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, recentered by
    /// `-(p-1)(q-1)/2` so that it is symmetric with top coefficient +1.
    pub fn torus_alexander(p: i64, q: i64) -> Result<Self, LaurentError> {
        if p < 2 || q < 2 || p.gcd(&q) != 1 {
            return Err(LaurentError::InvalidTorusParams { p, q });
        }
        let tm1 = |e: i64| Self::monomial(e, 1).sub(&Self::one());
        let numerator = tm1(p * q).mul(&tm1(1));
        let denominator = tm1(p).mul(&tm1(q));
        let quot = numerator.divide_exact(&denominator)?;
        // (p-1)(q-1) is even for coprime p,q >= 2.
        let half_width = (p - 1) * (q - 1) / 2;
        let out = quot.shifted(-half_width);
        debug_assert!(out.is_symmetric());
        debug_assert_eq!(out.width(), (p - 1) * (q - 1));
        debug_assert!(out.coefficient(half_width).is_one());
        Ok(out)
    }

    /// JSON form: array of `[exponent, coefficient]` pairs with strictly
    /// increasing exponents.
    pub fn to_json(&self) -> Result<serde_json::Value, LaurentError> {
        let mut arr = Vec::new();
        for (e, c) in self.terms() {
            let c: i64 = c
                .try_into()
                .map_err(|_| LaurentError::CoefficientOverflow { exponent: e })?;
            arr.push(serde_json::json!([e, c]));
        }
        Ok(serde_json::Value::Array(arr))
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, LaurentError> {
        let bad = |message: &str| LaurentError::ParseError {
            position: 0,
            message: message.to_string(),
        };
        let arr = value.as_array().ok_or_else(|| bad("expected an array of pairs"))?;
        let mut out = Self::zero();
        let mut last: Option<i64> = None;
        for item in arr {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                bad("each entry must be an [exponent, coefficient] pair")
            })?;
            let e = pair[0].as_i64().ok_or_else(|| bad("exponent must be an integer"))?;
            let c = pair[1].as_i64().ok_or_else(|| bad("coefficient must be an integer"))?;
            if last.is_some_and(|l| l >= e) {
                return Err(bad("exponents must be strictly increasing"));
            }
            last = Some(e);
            out.add_term(e, BigInt::from(c));
        }
        Ok(out)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_poly(self))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_poly(self))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                LaurentPoly::$method(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

/// Renders in canonical form: terms by decreasing exponent, ` + ` / ` - `
/// separators, coefficient 1 omitted before `t`, exponent 1 written `t`,
/// exponent 0 as a bare integer. The zero polynomial renders as `0`.
pub fn render_poly(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (&e, c)) in p.terms.iter().rev().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if e == 0 {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push('t');
            if e != 1 {
                out.push_str(&format!("^{e}"));
            }
        }
    }
    out
}

/// Parses the textual grammar: a sum of terms `[+|-] [c][t[^e]]` where the
/// optional decimal coefficient `c >= 1`, the optional `t` carries an
/// optional integer exponent (`t^-2` for negative), and a bare `c` means
/// exponent 0. `"0"` parses to the zero polynomial.
pub fn parse_poly(text: &str) -> Result<LaurentPoly, LaurentError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let err = |position: usize, message: &str| LaurentError::ParseError {
        position,
        message: message.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_uint = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return None;
        }
        text[start..*pos].parse().ok()
    };

    let mut out = LaurentPoly::zero();
    let mut first = true;
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(err(pos, "empty input"));
    }
    while pos < bytes.len() {
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err(pos, "expected '+' or '-' between terms"));
        }
        first = false;

        let coeff_start = pos;
        let coeff = read_uint(&mut pos);
        let has_t = pos < bytes.len() && bytes[pos] == b't';
        if coeff.is_none() && !has_t {
            return Err(err(pos, "expected a coefficient or 't'"));
        }
        if let Some(0) = coeff {
            if has_t {
                return Err(err(coeff_start, "zero coefficient on a t term"));
            }
        }
        let coefficient = BigInt::from(sign) * BigInt::from(coeff.unwrap_or(1));
        let mut exponent = 0i64;
        if has_t {
            pos += 1;
            exponent = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let mut esign = 1i64;
                if pos < bytes.len() && bytes[pos] == b'-' {
                    esign = -1;
                    pos += 1;
                }
                let e = read_uint(&mut pos).ok_or_else(|| err(pos, "expected exponent digits"))?;
                let e = i64::try_from(e).map_err(|_| err(pos, "exponent out of range"))?;
                exponent = esign * e;
            }
        }
        if coeff != Some(0) {
            out.add_term(exponent, coefficient);
        }
        skip_ws(&mut pos);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> LaurentPoly {
        parse_poly(text).expect("test polynomial parses")
    }

    #[test]
    fn addition_cancels() {
        assert_eq!(p("t").add(&p("-t")), LaurentPoly::zero());
        assert_eq!(p("t - 1").add(&p("1")), p("t"));
    }

    #[test]
    fn doubling_the_figure_eight_polynomial() {
        let fig8 = p("-t + 3 - t^-1");
        assert_eq!(fig8.add(&fig8), p("-2t + 6 - 2t^-1"));
    }

    #[test]
    fn products() {
        let a = p("t - 1 + t^-1");
        assert_eq!(a.mul(&LaurentPoly::one()), a);
        assert_eq!(p("t - 1").mul(&p("t + 1")), p("t^2 - 1"));
        assert_eq!(a.mul(&p("t + 1")), p("t^2 + t^-1"));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("t^2 - 1").divide_exact(&p("t - 1")).unwrap(), p("t + 1"));
        let any = p("3t^4 - 2t^-1 + 7");
        assert_eq!(any.divide_exact(&any).unwrap(), LaurentPoly::one());
        assert_eq!(
            p("t + 1").divide_exact(&p("t - 1")).unwrap_err(),
            LaurentError::NotDivisible
        );
        // Laurent units divide freely.
        assert_eq!(p("1").divide_exact(&p("t")).unwrap(), p("t^-1"));
    }

    #[test]
    fn division_oracle_for_torus_polynomials() {
        // Brute-force oracle: multiply the claimed quotient back.
        let num = p("t^12 - 1").mul(&p("t - 1"));
        let den = p("t^3 - 1").mul(&p("t^4 - 1"));
        let q = num.divide_exact(&den).unwrap();
        assert_eq!(q.mul(&den), num);
        assert_eq!(q.shifted(-3), p("t^3 - t^2 + 1 - t^-2 + t^-3"));
    }

    #[test]
    fn torus_alexander_small_cases() {
        assert_eq!(
            LaurentPoly::torus_alexander(2, 3).unwrap(),
            p("t - 1 + t^-1")
        );
        assert_eq!(
            LaurentPoly::torus_alexander(3, 4).unwrap(),
            p("t^3 - t^2 + 1 - t^-2 + t^-3")
        );
        assert_eq!(LaurentPoly::torus_alexander(5, 7).unwrap().width(), 24);
    }

    #[test]
    fn torus_alexander_rejects_bad_parameters() {
        for (pp, qq) in [(1, 3), (2, 4), (0, 5), (6, 9)] {
            assert!(matches!(
                LaurentPoly::torus_alexander(pp, qq),
                Err(LaurentError::InvalidTorusParams { .. })
            ));
        }
    }

    #[test]
    fn torus_alexander_shape() {
        for (pp, qq) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (5, 6), (7, 9)] {
            let d = LaurentPoly::torus_alexander(pp, qq).unwrap();
            assert!(d.is_symmetric());
            assert_eq!(d.width(), (pp - 1) * (qq - 1));
            assert_eq!(d.eval_at_one().abs(), BigInt::one());
            // Coefficients are +-1 and alternate in sign by increasing exponent.
            let mut prev: Option<BigInt> = None;
            for (_, c) in d.terms() {
                assert!(c.abs().is_one());
                if let Some(pc) = prev {
                    assert_eq!(pc * c, BigInt::from(-1));
                }
                prev = Some(c.clone());
            }
        }
    }

    #[test]
    fn parse_examples() {
        let fig8 = p("-t + 3 - t^-1");
        assert_eq!(fig8.coefficient(1), BigInt::from(-1));
        assert_eq!(fig8.coefficient(0), BigInt::from(3));
        assert_eq!(fig8.coefficient(-1), BigInt::from(-1));
        assert_eq!(p("0"), LaurentPoly::zero());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("t +").is_err());
        assert!(parse_poly("q^2").is_err());
    }

    #[test]
    fn render_is_canonical() {
        let text = "t^3 - t^2 + 1 - t^-2 + t^-3";
        assert_eq!(render_poly(&p(text)), text);
        assert_eq!(render_poly(&LaurentPoly::zero()), "0");
        assert_eq!(render_poly(&p("-2t^5 + t - 4 + t^-8")), "-2t^5 + t - 4 + t^-8");
    }

    #[test]
    fn json_round_trip() {
        let d = LaurentPoly::torus_alexander(3, 5).unwrap();
        let j = d.to_json().unwrap();
        assert_eq!(LaurentPoly::from_json(&j).unwrap(), d);
        assert!(LaurentPoly::from_json(&serde_json::json!([[0, 1], [0, 2]])).is_err());
    }
}
