//! BBP-type series `alpha = b^-s * sum_k b^-k * sum_j c_j / (m k + j)` and
//! digit extraction at an arbitrary position.
//!
//! Extraction multiplies the series by `b^(p-1)` and keeps only the
//! fractional part: terms with a non-negative power of `b` are reduced with
//! modular exponentiation, the rest form a rapidly vanishing tail. All sums
//! are fixed point with a rigorous error count, so a window is only returned
//! when the whole error interval agrees on it.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digits::{DigitBlock, DigitError, Enclosure};

/// Guard bits tried in turn by [`digit_extract`].
pub const GUARD_LEVELS: [u64; 3] = [64, 128, 256];

/// Longest window one extraction call returns.
pub const MAX_EXTRACT_COUNT: usize = 8;

/// An interval is ambiguous unless it clears a digit boundary by this many
/// times its own error bound.
const AMBIGUITY_FACTOR: u64 = 1 << 8;

const MAX_EVALUATE_RETRIES: u32 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BbpError {
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("position must be at least 1")]
    InvalidPosition,
    #[error("count {0} outside 1..=8")]
    InvalidCount(usize),
    #[error("carry ambiguity at position {position} persisted up to {guard_bits} guard bits")]
    CarryAmbiguity { position: u64, guard_bits: u64 },
    #[error("could not resolve {count} digits")]
    PrecisionExhausted { count: usize },
    #[error("denominator of series term {term} is not positive at k = {k}")]
    NonPositiveDenominator { term: usize, k: u64 },
    #[error(transparent)]
    Digits(#[from] DigitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbpTerm {
    pub coefficient: i64,
    /// `j` in `c_j / (m k + j)`, within `1..=m`.
    pub offset: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbpFormula {
    pub base: u32,
    pub modulus: u64,
    pub terms: Vec<BbpTerm>,
    /// The whole sum is multiplied by `base^-scale_exponent`.
    pub scale_exponent: u32,
    pub description: String,
}

impl BbpFormula {
    pub fn new(
        base: u32,
        modulus: u64,
        terms: &[(i64, u64)],
        scale_exponent: u32,
        description: &str,
    ) -> Result<Self, BbpError> {
        let f = BbpFormula {
            base,
            modulus,
            terms: terms
                .iter()
                .map(|&(coefficient, offset)| BbpTerm {
                    coefficient,
                    offset,
                })
                .collect(),
            scale_exponent,
            description: description.to_string(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), BbpError> {
        if self.base < 2 {
            return Err(BbpError::InvalidFormula(format!("base {}", self.base)));
        }
        if self.modulus == 0 {
            return Err(BbpError::InvalidFormula("modulus 0".into()));
        }
        if self.terms.is_empty() {
            return Err(BbpError::InvalidFormula("no terms".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &self.terms {
            if !(1..=self.modulus).contains(&t.offset) || !seen.insert(t.offset) {
                return Err(BbpError::InvalidFormula(format!("offset {}", t.offset)));
            }
        }
        Ok(())
    }

    fn abs_coefficient_sum(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| t.coefficient.unsigned_abs())
            .sum()
    }

    /// The same series as a list of `p(k) / q(k)` pairs.
    pub fn to_series(&self) -> PolySeries {
        PolySeries {
            base: self.base,
            scale_exponent: self.scale_exponent,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    (
                        vec![t.coefficient],
                        vec![t.offset as i64, self.modulus as i64],
                    )
                })
                .collect(),
        }
    }

    /// `sum_j c_j / j`, the `k = 0` contribution before scaling.
    pub fn first_term(&self) -> num_rational::BigRational {
        self.terms
            .iter()
            .map(|t| num_rational::BigRational::new(t.coefficient.into(), t.offset.into()))
            .sum()
    }
}

/// pi = sum 16^-k (4/(8k+1) - 2/(8k+4) - 1/(8k+5) - 1/(8k+6)).
pub fn pi_formula() -> BbpFormula {
    BbpFormula::new(
        16,
        8,
        &[(4, 1), (-2, 4), (-1, 5), (-1, 6)],
        0,
        "pi = sum 16^-k (4/(8k+1) - 2/(8k+4) - 1/(8k+5) - 1/(8k+6))",
    )
    .expect("valid formula")
}

/// log 2 = sum_{k>=1} 1/(k 2^k) = 2^-1 sum_{k>=0} 2^-k / (k+1).
pub fn log2_formula() -> BbpFormula {
    BbpFormula::new(2, 1, &[(1, 1)], 1, "log 2 = 2^-1 sum 2^-k / (k+1)").expect("valid formula")
}

/// `base^-scale_exponent * sum_k base^-k * sum_t p_t(k) / q_t(k)` with
/// polynomial coefficients listed from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeries {
    pub base: u32,
    pub scale_exponent: u32,
    pub terms: Vec<(Vec<i64>, Vec<i64>)>,
}

fn poly_at(coeffs: &[i64], k: u64) -> BigInt {
    let k = BigInt::from(k);
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| acc * &k + c)
}

impl PolySeries {
    /// log2 of an upper bound on `|sum_t p_t(k) / q_t(k)|`, using `q_t(k) >= 1`.
    fn log2_numerator_bound(&self, k: u64) -> f64 {
        let kk = (k + 1) as f64;
        let total: f64 = self
            .terms
            .iter()
            .map(|(p, _)| {
                let a: f64 = p.iter().map(|c| c.unsigned_abs() as f64).sum();
                a * kk.powi(p.len().saturating_sub(1) as i32)
            })
            .sum();
        total.max(1.0).log2()
    }

    fn max_numerator_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|(p, _)| p.len().saturating_sub(1) as u64)
            .max()
            .unwrap_or(0)
    }

    /// Fixed-point enclosure with `bits` fractional bits.
    fn enclose(&self, bits: u64) -> Result<Enclosure, BbpError> {
        if self.terms.is_empty() {
            return Err(BbpError::InvalidFormula("no terms".into()));
        }
        let log2_base = f64::from(self.base).log2();
        let degree = self.max_numerator_degree();
        // past k0 consecutive bounds shrink by at least 3/4, so the tail
        // is at most 4 times its first bound
        let k0 = 3 * degree + 2;
        let tail_ulps_log2 = |k: u64| {
            self.log2_numerator_bound(k) - (k + u64::from(self.scale_exponent)) as f64 * log2_base
                + bits as f64
                + 2.0
        };
        let mut last = k0;
        while tail_ulps_log2(last + 1) > -1.0 {
            last += 1;
        }
        let one = BigInt::one() << bits;
        let base = BigInt::from(self.base);
        let mut power = base.pow(self.scale_exponent);
        let mut sum = BigInt::zero();
        let mut floors = 0u64;
        for k in 0..=last {
            for (i, (p, q)) in self.terms.iter().enumerate() {
                let den = poly_at(q, k);
                if !den.is_positive() {
                    return Err(BbpError::NonPositiveDenominator { term: i, k });
                }
                let num = poly_at(p, k) * &one;
                sum += num.div_floor(&(den * &power));
                floors += 1;
            }
            power *= &base;
        }
        // each floor loses under one unit; the tail is below half a unit
        Ok(Enclosure {
            lo: &sum - 1,
            hi: sum + floors + 1,
            denom: BigUint::one() << bits,
        })
    }

    /// Leading fractional digits of the series in its own base.
    pub fn evaluate(&self, digit_count: usize) -> Result<DigitBlock, BbpError> {
        if digit_count == 0 {
            return Err(BbpError::Digits(DigitError::InvalidCount));
        }
        let mut guard = 64u64;
        for _ in 0..MAX_EVALUATE_RETRIES {
            let bits = (digit_count as f64 * f64::from(self.base).log2()).ceil() as u64 + guard;
            if let Some(d) = self.enclose(bits)?.fraction_digits(self.base, digit_count) {
                return Ok(DigitBlock::new(self.base, 1, d)?);
            }
            guard *= 2;
        }
        Err(BbpError::PrecisionExhausted { count: digit_count })
    }
}

/// Leading fractional digits of the formula's value.
pub fn evaluate(formula: &BbpFormula, digit_count: usize) -> Result<DigitBlock, BbpError> {
    formula.validate()?;
    formula.to_series().evaluate(digit_count)
}

/// The first `terms_through + 1` terms of the unscaled outer sum, exactly.
pub fn partial_sum(formula: &BbpFormula, terms_through: u64) -> num_rational::BigRational {
    let base = BigInt::from(formula.base);
    (0..=terms_through)
        .map(|k| {
            let scale = base.pow(k as u32);
            formula
                .terms
                .iter()
                .map(|t| {
                    num_rational::BigRational::new(
                        t.coefficient.into(),
                        BigInt::from(formula.modulus * k + t.offset) * &scale,
                    )
                })
                .sum::<num_rational::BigRational>()
        })
        .sum()
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = u128::from(modulus);
    let mut b = u128::from(base) % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Digits found by [`digit_extract_detailed`] and the guard that settled them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub block: DigitBlock,
    pub guard_bits: u64,
}

/// Fractional part of `base^(position-1) * alpha` as a fixed-point interval
/// with `bits` bits; the integer part is dropped.
fn shifted_fraction(formula: &BbpFormula, position: u64, bits: u64) -> (BigInt, u64) {
    let one = BigInt::one() << bits;
    let base = u64::from(formula.base);
    let shift = position as i64 - 1 - i64::from(formula.scale_exponent);
    let mut sum = BigInt::zero();
    let mut floors = 0u64;

    // head: base^(shift - k) is an integer, only its residue matters
    for k in 0..=shift.max(-1) {
        let k = k as u64;
        let e = shift as u64 - k;
        for t in &formula.terms {
            let q = formula.modulus * k + t.offset;
            let r = pow_mod(base, e, q);
            let num = BigInt::from(i128::from(t.coefficient) * i128::from(r)) << bits;
            sum += num.div_floor(&BigInt::from(q));
            floors += 1;
        }
        sum = sum.mod_floor(&one);
    }

    // tail: stop once every remaining term is below a unit; what is left
    // then sums to under two units
    let coeffs = BigInt::from(formula.abs_coefficient_sum()) << bits;
    let mut k = (shift + 1).max(0) as u64;
    let mut scale = BigInt::from(base).pow((k as i64 - shift) as u32);
    while coeffs >= scale {
        for t in &formula.terms {
            let q = BigInt::from(formula.modulus * k + t.offset);
            let num = BigInt::from(t.coefficient) << bits;
            sum += num.div_floor(&(q * &scale));
            floors += 1;
        }
        scale *= base;
        k += 1;
    }
    (sum.mod_floor(&one), floors + 4)
}

/// `count` digits starting at fractional position `position`, computed
/// without the preceding digits.
pub fn digit_extract(
    formula: &BbpFormula,
    position: u64,
    count: usize,
) -> Result<DigitBlock, BbpError> {
    digit_extract_detailed(formula, position, count).map(|e| e.block)
}

pub fn digit_extract_detailed(
    formula: &BbpFormula,
    position: u64,
    count: usize,
) -> Result<Extraction, BbpError> {
    formula.validate()?;
    if position == 0 {
        return Err(BbpError::InvalidPosition);
    }
    if !(1..=MAX_EXTRACT_COUNT).contains(&count) {
        return Err(BbpError::InvalidCount(count));
    }
    let digit_bits = (count as f64 * f64::from(formula.base).log2()).ceil() as u64;
    for guard in GUARD_LEVELS {
        let bits = digit_bits + guard;
        let (center, error) = shifted_fraction(formula, position, bits);
        let margin = BigInt::from(error) * AMBIGUITY_FACTOR;
        let interval = Enclosure {
            lo: &center - &margin,
            hi: &center + &margin,
            denom: BigUint::one() << bits,
        };
        if let Some(digits) = interval.fraction_digits(formula.base, count) {
            return Ok(Extraction {
                block: DigitBlock::new(formula.base, position, digits)?,
                guard_bits: guard,
            });
        }
    }
    Err(BbpError::CarryAmbiguity {
        position,
        guard_bits: *GUARD_LEVELS.last().expect("non-empty"),
    })
}

/// Approximate value of the formula as an f64, from its partial sums.
pub fn approximate(formula: &BbpFormula, terms_through: u64) -> f64 {
    let s = partial_sum(formula, terms_through);
    s.to_f64().unwrap_or(f64::NAN) / f64::from(formula.base).powi(formula.scale_exponent as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::{digits_in_base, ConstantSpec};
    use num_rational::BigRational;

    #[test]
    fn pi_formula_shape() {
        let f = pi_formula();
        assert_eq!(f.terms.len(), 4);
        assert_eq!(f.first_term(), BigRational::new(47.into(), 15.into()));
        assert_eq!(partial_sum(&f, 0), BigRational::new(47.into(), 15.into()));
    }

    #[test]
    fn invalid_formulas() {
        assert!(BbpFormula::new(16, 8, &[(1, 1), (2, 1)], 0, "dup").is_err());
        assert!(BbpFormula::new(16, 8, &[(1, 9)], 0, "range").is_err());
        assert!(BbpFormula::new(16, 8, &[], 0, "empty").is_err());
        assert!(BbpFormula::new(1, 8, &[(1, 1)], 0, "base").is_err());
    }

    #[test]
    fn evaluate_pi_and_log2() {
        assert_eq!(
            evaluate(&pi_formula(), 8).unwrap().digits,
            vec![2, 4, 3, 15, 6, 10, 8, 8]
        );
        assert_eq!(
            evaluate(&pi_formula(), 40).unwrap(),
            digits_in_base(&ConstantSpec::Pi, 16, 40).unwrap()
        );
        for n in [16, 20] {
            assert_eq!(
                evaluate(&log2_formula(), n).unwrap(),
                digits_in_base(&ConstantSpec::Log2, 2, n).unwrap()
            );
        }
    }

    #[test]
    fn log2_series_value_with_64_terms() {
        let v = approximate(&log2_formula(), 63);
        assert!(v > 0.693 && v < 0.6932, "{v}");
    }

    #[test]
    fn rational_series_digits() {
        // 1/3 = sum_{k>=0} 4^-k / 4, written in base 4 with a scale of 1
        let third = PolySeries {
            base: 4,
            scale_exponent: 1,
            terms: vec![(vec![1], vec![1])],
        };
        assert_eq!(third.evaluate(6).unwrap().digits, vec![1; 6]);
        // sum 3^-k (k+1)^2 / (k+1) = 9/4, and 1/4 = 0.020202... in base 3
        let nine_quarters = PolySeries {
            base: 3,
            scale_exponent: 0,
            terms: vec![(vec![1, 2, 1], vec![1, 1])],
        };
        assert_eq!(
            nine_quarters.evaluate(6).unwrap().digits,
            vec![0, 2, 0, 2, 0, 2]
        );
    }

    #[test]
    fn nonpositive_denominator_is_reported() {
        let s = PolySeries {
            base: 2,
            scale_exponent: 0,
            terms: vec![(vec![1], vec![-3, 1])],
        };
        assert_eq!(
            s.evaluate(4),
            Err(BbpError::NonPositiveDenominator { term: 0, k: 0 })
        );
    }

    #[test]
    fn extract_first_hex_digits() {
        let e = digit_extract_detailed(&pi_formula(), 1, 8).unwrap();
        assert_eq!(e.block.digits, vec![2, 4, 3, 15, 6, 10, 8, 8]);
        assert_eq!(e.block.start, 1);
        assert_eq!(e.guard_bits, 64);
        assert_eq!(
            digit_extract(&log2_formula(), 1, 1).unwrap().digits,
            vec![1]
        );
    }

    #[test]
    fn extract_matches_full_expansion() {
        let full = digits_in_base(&ConstantSpec::Pi, 16, 1200).unwrap();
        for p in [1u64, 2, 7, 10, 100, 101, 500, 1000, 1193] {
            let got = digit_extract(&pi_formula(), p, 8).unwrap();
            assert_eq!(got, full.slice(p, 8).unwrap(), "p={p}");
        }
        let bits = digits_in_base(&ConstantSpec::Log2, 2, 300).unwrap();
        for p in [1u64, 2, 33, 100, 290] {
            let got = digit_extract(&log2_formula(), p, 8).unwrap();
            assert_eq!(got, bits.slice(p, 8).unwrap(), "log2 p={p}");
        }
    }

    #[test]
    fn argument_checks() {
        assert_eq!(
            digit_extract(&pi_formula(), 0, 1),
            Err(BbpError::InvalidPosition)
        );
        assert_eq!(
            digit_extract(&pi_formula(), 1, 9),
            Err(BbpError::InvalidCount(9))
        );
        assert_eq!(
            digit_extract(&pi_formula(), 1, 0),
            Err(BbpError::InvalidCount(0))
        );
    }

    #[test]
    fn pow_mod_small_cases() {
        assert_eq!(pow_mod(16, 0, 7), 1);
        assert_eq!(pow_mod(16, 5, 1), 0);
        assert_eq!(pow_mod(16, 3, 1000), 96);
    }
}
