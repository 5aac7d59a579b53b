//! Conversion of a truncated decimal expansion to another base.

use num_bigint::BigUint;

use super::{check_base, to_fixed_digits, DigitBlock, DigitError};

/// Decimal guard digits consumed beyond the minimum.
pub const DEFAULT_GUARD_DIGITS: usize = 12;

/// Result of [`base_convert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvertedDigits {
    pub block: DigitBlock,
    /// Whether a second conversion with doubled guard agreed; `None` when the
    /// input was too short to run it.
    pub stable: Option<bool>,
    /// Whether the digits of `V` and `V + 10^-D` agree, `V` being the decimal
    /// prefix actually used. When the input digits are a truncation of some
    /// real `x`, this certifies the output digits for `x` itself.
    pub certified: bool,
}

/// Smallest `D` with `10^D >= base^count`.
pub(crate) fn decimal_digits_needed(base: u32, count: usize) -> usize {
    let target = BigUint::from(base).pow(count as u32);
    let mut d = (count as f64 * f64::from(base).log10()).floor() as usize;
    let ten = BigUint::from(10u32);
    let mut power = ten.pow(d as u32);
    while power < target {
        power *= &ten;
        d += 1;
    }
    d
}

fn convert_prefix(decimal: &[u8], base: u32, count: usize, upper: bool) -> Vec<u8> {
    let mut value = BigUint::from_radix_be(decimal, 10).expect("validated decimal digits");
    if upper {
        value += 1u32;
    }
    // floor(V * base^count / 10^D): the same digits repeated multiply-by-base
    // produces, carried out in one pass on the scaled integer.
    let scaled = value * BigUint::from(base).pow(count as u32);
    let quotient = scaled / BigUint::from(10u32).pow(decimal.len() as u32);
    let modulus = BigUint::from(base).pow(count as u32);
    to_fixed_digits(&(quotient % modulus), base, count)
}

/// First `out_count` digits in `target_base` of the value of a decimal block,
/// using the default guard.
pub fn base_convert(
    decimal: &DigitBlock,
    target_base: u32,
    out_count: usize,
) -> Result<ConvertedDigits, DigitError> {
    base_convert_with_guard(decimal, target_base, out_count, DEFAULT_GUARD_DIGITS)
}

/// As [`base_convert`] with an explicit number of decimal guard digits.
///
/// Consumes `ceil(out_count * log10(target_base)) + guard` input digits and,
/// when the block holds `guard` more, repeats the conversion to set
/// [`ConvertedDigits::stable`].
pub fn base_convert_with_guard(
    decimal: &DigitBlock,
    target_base: u32,
    out_count: usize,
    guard: usize,
) -> Result<ConvertedDigits, DigitError> {
    check_base(target_base)?;
    if out_count == 0 {
        return Err(DigitError::InvalidCount);
    }
    if decimal.base != 10 || decimal.start != 1 {
        return Err(DigitError::InvalidBase(decimal.base));
    }
    if let Some((i, &d)) = decimal.digits.iter().enumerate().find(|(_, &d)| d >= 10) {
        return Err(DigitError::InvalidDigit {
            position: 1 + i as u64,
            digit: d,
            base: 10,
        });
    }
    let needed = decimal_digits_needed(target_base, out_count) + guard;
    if decimal.len() < needed {
        return Err(DigitError::InsufficientInputDigits {
            needed,
            got: decimal.len(),
        });
    }
    let prefix = &decimal.digits[..needed];
    let digits = convert_prefix(prefix, target_base, out_count, false);
    let certified = convert_prefix(prefix, target_base, out_count, true) == digits;
    let doubled = needed + guard;
    let stable = (decimal.len() >= doubled).then(|| {
        convert_prefix(&decimal.digits[..doubled], target_base, out_count, false) == digits
    });
    Ok(ConvertedDigits {
        block: DigitBlock {
            base: target_base,
            start: 1,
            digits,
        },
        stable,
        certified,
    })
}
