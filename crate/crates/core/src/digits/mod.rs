//! Fractional digits of constants in bases 2 through 256.
//!
//! Every digit produced here is a truncation of the true value. Irrational
//! constants are evaluated as a rational enclosure `lo/d <= x <= hi/d`; the
//! digits are only emitted when both ends of the enclosure agree on them, so a
//! digit run that cannot be resolved at the current precision triggers a retry
//! with more guard bits instead of a silently wrong answer.

mod cache;
mod cfrac;
mod concat;
mod constants;
mod convert;
mod stream;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cache::{read_cache, write_cache, CacheError, DigitCache};
pub use cfrac::{cfrac_digits, cfrac_enclosure, fibonacci_coefficients, CfracEnclosure};
pub use concat::{concat_constant_digits, primorial, ConcatDigits, PrimeSieve};
pub use convert::{base_convert, base_convert_with_guard, ConvertedDigits, DEFAULT_GUARD_DIGITS};
pub use stream::{open_stream, DigitSource, DigitStream, SliceSource};

/// Guard bits carried beyond the requested digits on the first attempt.
pub const DEFAULT_GUARD_BITS: u64 = 64;

/// Number of guard doublings attempted before giving up.
const MAX_GUARD_DOUBLINGS: u32 = 8;

pub const MIN_BASE: u32 = 2;
pub const MAX_BASE: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigitError {
    #[error("unsupported constant: {0}")]
    UnsupportedConstant(String),
    #[error("base {0} outside 2..=256")]
    InvalidBase(u32),
    #[error("digit count must be at least 1")]
    InvalidCount,
    #[error("precision budget exhausted computing {count} digits of {constant} in base {base}")]
    PrecisionExhausted {
        constant: String,
        base: u32,
        count: usize,
    },
    #[error("need at least {needed} input digits, got {got}")]
    InsufficientInputDigits { needed: usize, got: usize },
    #[error("digit {digit} at position {position} is not valid in base {base}")]
    InvalidDigit { position: u64, digit: u8, base: u32 },
    #[error("continued fraction coefficient {index} is not positive")]
    NonPositiveCoefficient { index: usize },
    #[error("independent digit pipelines disagree at position {position}")]
    PipelineMismatch { position: u64 },
}

/// A computable real whose fractional digits this crate can produce.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstantSpec {
    Pi,
    Sqrt2,
    Log2,
    E,
    /// `p/q`; the fractional part of a negative value is `x - floor(x)`.
    Rational {
        p: i64,
        q: u64,
    },
    /// Concatenated base-`base` numerals of 1, 2, 3, ...
    Champernowne {
        base: u32,
    },
    /// Concatenated decimal primes.
    CopelandErdos,
    /// Concatenated decimal Fibonacci numbers, starting with F0 = 0.
    FibonacciConcat,
    /// The continued fraction [F0; F1, F2, ...] = [0; 1, 1, 2, 3, ...].
    FibonacciCFrac,
}

impl ConstantSpec {
    pub fn rational(p: i64, q: u64) -> Self {
        ConstantSpec::Rational { p, q }
    }

    /// Stable identifier used by the CLI and in cache files.
    pub fn id(&self) -> String {
        match self {
            ConstantSpec::Pi => "pi".into(),
            ConstantSpec::Sqrt2 => "sqrt2".into(),
            ConstantSpec::Log2 => "log2".into(),
            ConstantSpec::E => "e".into(),
            ConstantSpec::Rational { p, q } => format!("rational:{p}/{q}"),
            ConstantSpec::Champernowne { base } => format!("champernowne{base}"),
            ConstantSpec::CopelandErdos => "copeland-erdos".into(),
            ConstantSpec::FibonacciConcat => "fibonacci-concat".into(),
            ConstantSpec::FibonacciCFrac => "fibonacci-cfrac".into(),
        }
    }

    pub fn validate(&self) -> Result<(), DigitError> {
        match *self {
            ConstantSpec::Rational { q: 0, .. } => Err(DigitError::UnsupportedConstant(
                "rational with zero denominator".into(),
            )),
            ConstantSpec::Champernowne { base } if !(MIN_BASE..=MAX_BASE).contains(&base) => Err(
                DigitError::UnsupportedConstant(format!("champernowne base {base}")),
            ),
            _ => Ok(()),
        }
    }

    /// The base in which the constant is defined digit by digit, if any.
    pub(crate) fn native_base(&self) -> Option<u32> {
        match *self {
            ConstantSpec::Champernowne { base } => Some(base),
            ConstantSpec::CopelandErdos | ConstantSpec::FibonacciConcat => Some(10),
            _ => None,
        }
    }
}

impl fmt::Display for ConstantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for ConstantSpec {
    type Err = DigitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let spec = match lower.as_str() {
            "pi" => ConstantSpec::Pi,
            "sqrt2" => ConstantSpec::Sqrt2,
            "log2" | "ln2" => ConstantSpec::Log2,
            "e" => ConstantSpec::E,
            "copeland-erdos" | "copelanderdos" => ConstantSpec::CopelandErdos,
            "fibonacci-concat" | "fibonacci" => ConstantSpec::FibonacciConcat,
            "fibonacci-cfrac" => ConstantSpec::FibonacciCFrac,
            other => {
                if let Some(rest) = other.strip_prefix("rational:") {
                    let (p, q) = rest
                        .split_once('/')
                        .ok_or_else(|| DigitError::UnsupportedConstant(s.to_string()))?;
                    let p = p
                        .trim()
                        .parse()
                        .map_err(|_| DigitError::UnsupportedConstant(s.to_string()))?;
                    let q = q
                        .trim()
                        .parse()
                        .map_err(|_| DigitError::UnsupportedConstant(s.to_string()))?;
                    ConstantSpec::Rational { p, q }
                } else if let Some(rest) = other.strip_prefix("champernowne") {
                    let base = if rest.is_empty() {
                        10
                    } else {
                        rest.parse()
                            .map_err(|_| DigitError::UnsupportedConstant(s.to_string()))?
                    };
                    ConstantSpec::Champernowne { base }
                } else {
                    return Err(DigitError::UnsupportedConstant(s.to_string()));
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A contiguous run of fractional digits. Position 1 is the first digit after
/// the radix point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitBlock {
    pub base: u32,
    pub start: u64,
    pub digits: Vec<u8>,
}

impl DigitBlock {
    pub fn new(base: u32, start: u64, digits: Vec<u8>) -> Result<Self, DigitError> {
        check_base(base)?;
        if start == 0 {
            return Err(DigitError::InvalidCount);
        }
        if let Some((i, &d)) = digits
            .iter()
            .enumerate()
            .find(|(_, &d)| u32::from(d) >= base)
        {
            return Err(DigitError::InvalidDigit {
                position: start + i as u64,
                digit: d,
                base,
            });
        }
        Ok(DigitBlock {
            base,
            start,
            digits,
        })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// One past the last covered position.
    pub fn end(&self) -> u64 {
        self.start + self.digits.len() as u64
    }

    /// Digit at a 1-indexed absolute position, if covered.
    pub fn get(&self, position: u64) -> Option<u8> {
        if position < self.start {
            return None;
        }
        self.digits.get((position - self.start) as usize).copied()
    }

    /// Sub-block covering `count` positions from `start`.
    pub fn slice(&self, start: u64, count: usize) -> Option<DigitBlock> {
        if start < self.start || start + count as u64 > self.end() {
            return None;
        }
        let off = (start - self.start) as usize;
        Some(DigitBlock {
            base: self.base,
            start,
            digits: self.digits[off..off + count].to_vec(),
        })
    }
}

pub(crate) fn check_base(base: u32) -> Result<(), DigitError> {
    if (MIN_BASE..=MAX_BASE).contains(&base) {
        Ok(())
    } else {
        Err(DigitError::InvalidBase(base))
    }
}

/// Closed rational interval `[lo/denom, hi/denom]` known to contain a value.
#[derive(Debug, Clone)]
pub(crate) struct Enclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub denom: BigUint,
}

impl Enclosure {
    pub fn exact(numer: BigInt, denom: BigUint) -> Self {
        Enclosure {
            lo: numer.clone(),
            hi: numer,
            denom,
        }
    }

    /// The first `count` fractional digits in `base`, when both ends agree.
    pub fn fraction_digits(&self, base: u32, count: usize) -> Option<Vec<u8>> {
        let scale = BigUint::from(base).pow(count as u32);
        let denom = BigInt::from(self.denom.clone());
        let scale_i = BigInt::from(scale.clone());
        let lo = (&self.lo * &scale_i).div_floor(&denom);
        let hi = (&self.hi * &scale_i).div_floor(&denom);
        if lo != hi {
            return None;
        }
        let frac = lo.mod_floor(&scale_i);
        Some(to_fixed_digits(&frac.magnitude().clone(), base, count))
    }
}

/// `value` as exactly `count` base-`base` digits, most significant first.
pub(crate) fn to_fixed_digits(value: &BigUint, base: u32, count: usize) -> Vec<u8> {
    let mut out = vec![0u8; count];
    if value.is_zero() {
        return out;
    }
    let raw = value.to_radix_be(base);
    debug_assert!(raw.len() <= count);
    let off = count - raw.len();
    out[off..].copy_from_slice(&raw);
    out
}

pub(crate) fn bits_for_digits(base: u32, count: usize) -> u64 {
    (count as f64 * f64::from(base).log2()).ceil() as u64 + 1
}

/// The first `count` decimal digits after the point.
pub fn decimal_digits(constant: &ConstantSpec, count: usize) -> Result<DigitBlock, DigitError> {
    digits_in_base(constant, 10, count)
}

/// The first `count` fractional digits of `constant` in `base`.
pub fn digits_in_base(
    constant: &ConstantSpec,
    base: u32,
    count: usize,
) -> Result<DigitBlock, DigitError> {
    digits_in_base_with_guard(constant, base, count, DEFAULT_GUARD_BITS)
}

/// As [`digits_in_base`], starting from `guard_bits` of extra precision.
pub fn digits_in_base_with_guard(
    constant: &ConstantSpec,
    base: u32,
    count: usize,
    guard_bits: u64,
) -> Result<DigitBlock, DigitError> {
    check_base(base)?;
    constant.validate()?;
    if count == 0 {
        return Err(DigitError::InvalidCount);
    }
    if let ConstantSpec::Rational { p, q } = *constant {
        let digits = rational_digits(p, q, base).take(count).collect();
        return Ok(DigitBlock {
            base,
            start: 1,
            digits,
        });
    }
    if constant.native_base() == Some(base) {
        let digits = ConcatDigits::new(constant)
            .expect("native base implies a concatenation constant")
            .take(count)
            .collect();
        return Ok(DigitBlock {
            base,
            start: 1,
            digits,
        });
    }

    let need = bits_for_digits(base, count);
    let mut guard = guard_bits.max(8);
    for _ in 0..=MAX_GUARD_DOUBLINGS {
        let enclosure = enclose(constant, need + guard);
        if let Some(digits) = enclosure.fraction_digits(base, count) {
            return Ok(DigitBlock {
                base,
                start: 1,
                digits,
            });
        }
        guard *= 2;
    }
    Err(DigitError::PrecisionExhausted {
        constant: constant.id(),
        base,
        count,
    })
}

/// Enclosure of an irrational or constructed constant with width about
/// `2^-bits`.
pub(crate) fn enclose(constant: &ConstantSpec, bits: u64) -> Enclosure {
    match *constant {
        ConstantSpec::Pi => constants::pi(bits),
        ConstantSpec::Sqrt2 => constants::sqrt2(bits),
        ConstantSpec::Log2 => constants::log2(bits),
        ConstantSpec::E => constants::e(bits),
        ConstantSpec::Rational { p, q } => Enclosure::exact(BigInt::from(p), BigUint::from(q)),
        ConstantSpec::Champernowne { .. }
        | ConstantSpec::CopelandErdos
        | ConstantSpec::FibonacciConcat => concat::enclose(constant, bits),
        ConstantSpec::FibonacciCFrac => cfrac::fibonacci_enclosure(bits),
    }
}

/// Fractional digits of `p/q` by long division; never terminates on its own.
pub(crate) fn rational_digits(p: i64, q: u64, base: u32) -> impl Iterator<Item = u8> {
    let q = u128::from(q);
    let mut rem = i128::from(p).rem_euclid(q as i128) as u128;
    let base = u128::from(base);
    std::iter::from_fn(move || {
        rem *= base;
        let d = rem / q;
        rem %= q;
        Some(d as u8)
    })
}

/// Digits in `base` produced by two independent routes: the direct enclosure
/// and a decimal expansion converted with [`base_convert`]. Any disagreement
/// is reported instead of returning either answer.
pub fn cross_checked_digits(
    constant: &ConstantSpec,
    base: u32,
    count: usize,
) -> Result<DigitBlock, DigitError> {
    let direct = digits_in_base(constant, base, count)?;
    let converted = digits_in_base_via_decimal(constant, base, count)?;
    if let Some(i) = direct
        .digits
        .iter()
        .zip(&converted.digits)
        .position(|(a, b)| a != b)
    {
        return Err(DigitError::PipelineMismatch {
            position: 1 + i as u64,
        });
    }
    Ok(direct)
}

/// Digits in `base` obtained by converting a decimal expansion carrying twice
/// the default guard. Fails when the conversion is not stable under guard
/// doubling or not certified by the truncation interval.
pub fn digits_in_base_via_decimal(
    constant: &ConstantSpec,
    base: u32,
    count: usize,
) -> Result<DigitBlock, DigitError> {
    check_base(base)?;
    if count == 0 {
        return Err(DigitError::InvalidCount);
    }
    let needed = convert::decimal_digits_needed(base, count) + 2 * DEFAULT_GUARD_DIGITS;
    let decimal = decimal_digits(constant, needed)?;
    let converted = base_convert(&decimal, base, count)?;
    if converted.stable != Some(true) || !converted.certified {
        return Err(DigitError::PrecisionExhausted {
            constant: constant.id(),
            base,
            count,
        });
    }
    Ok(converted.block)
}
