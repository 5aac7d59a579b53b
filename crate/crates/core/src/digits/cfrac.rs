//! Digits of simple continued fractions via their convergents.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{check_base, DigitBlock, DigitError, Enclosure};

/// The extra target exponents tried when an enclosure straddles a digit
/// boundary.
const MAX_DEEPENING: u32 = 8;

/// Convergents p_m/q_m of [a0; a1, a2, ...], advanced one coefficient at a
/// time.
struct Convergents<I> {
    coefficients: I,
    index: usize,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
    exhausted: bool,
}

impl<I: Iterator<Item = BigInt>> Convergents<I> {
    fn new(mut coefficients: I) -> Self {
        let a0 = coefficients.next().unwrap_or_else(BigInt::zero);
        Convergents {
            coefficients,
            index: 0,
            prev: (BigInt::one(), BigInt::zero()),
            cur: (a0, BigInt::one()),
            exhausted: false,
        }
    }

    /// Pulls the next coefficient; `Ok(false)` once the expansion is finite
    /// and fully consumed.
    fn advance(&mut self) -> Result<bool, DigitError> {
        if self.exhausted {
            return Ok(false);
        }
        let Some(a) = self.coefficients.next() else {
            self.exhausted = true;
            return Ok(false);
        };
        self.index += 1;
        if !a.is_positive() {
            return Err(DigitError::NonPositiveCoefficient { index: self.index });
        }
        let p = &a * &self.cur.0 + &self.prev.0;
        let q = &a * &self.cur.1 + &self.prev.1;
        self.prev = std::mem::replace(&mut self.cur, (p, q));
        Ok(true)
    }

    /// Advances until consecutive convergents bracket the value within
    /// `1/threshold`, or the expansion ends.
    fn bracket(&mut self, threshold: &BigInt) -> Result<Enclosure, DigitError> {
        // The value lies between p_{m-1}/q_{m-1} and p_m/q_m, an interval of
        // width 1/(q_{m-1} q_m).
        loop {
            if self.index > 0 && &self.prev.1 * &self.cur.1 > *threshold {
                break;
            }
            if !self.advance()? {
                return Ok(self.exact());
            }
        }
        let (a, b) = (&self.prev.0 * &self.cur.1, &self.cur.0 * &self.prev.1);
        let denom = (&self.prev.1 * &self.cur.1)
            .to_biguint()
            .expect("convergent denominators are positive");
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Ok(Enclosure { lo, hi, denom })
    }

    fn exact(&self) -> Enclosure {
        Enclosure::exact(
            self.cur.0.clone(),
            self.cur.1.to_biguint().expect("positive denominator"),
        )
    }
}

/// Rational bracket produced by [`cfrac_enclosure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfracEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Index of the last coefficient consumed.
    pub depth: usize,
}

impl CfracEnclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

fn threshold(base: u32, exponent: usize) -> BigInt {
    BigInt::from(BigUint::from(base).pow(exponent as u32))
}

/// Brackets the continued fraction within `base^-(count+2)`.
pub fn cfrac_enclosure<I>(
    coefficients: I,
    base: u32,
    count: usize,
) -> Result<CfracEnclosure, DigitError>
where
    I: IntoIterator<Item = BigInt>,
{
    check_base(base)?;
    let mut conv = Convergents::new(coefficients.into_iter());
    let enc = conv.bracket(&threshold(base, count + 2))?;
    let d = BigInt::from(enc.denom);
    Ok(CfracEnclosure {
        lo: BigRational::new(enc.lo, d.clone()),
        hi: BigRational::new(enc.hi, d),
        depth: conv.index,
    })
}

/// The first `count` fractional digits of [a0; a1, a2, ...] in `base`.
pub fn cfrac_digits<I>(coefficients: I, base: u32, count: usize) -> Result<DigitBlock, DigitError>
where
    I: IntoIterator<Item = BigInt>,
{
    check_base(base)?;
    if count == 0 {
        return Err(DigitError::InvalidCount);
    }
    let mut conv = Convergents::new(coefficients.into_iter());
    for extra in 0..=MAX_DEEPENING {
        let exponent = count + 2 + (extra as usize) * (count + 2);
        let enc = conv.bracket(&threshold(base, exponent))?;
        if let Some(digits) = enc.fraction_digits(base, count) {
            return Ok(DigitBlock {
                base,
                start: 1,
                digits,
            });
        }
    }
    Err(DigitError::PrecisionExhausted {
        constant: "continued fraction".into(),
        base,
        count,
    })
}

/// F0, F1, F2, ... = 0, 1, 1, 2, 3, 5, ...
pub fn fibonacci_coefficients() -> impl Iterator<Item = BigInt> {
    let mut state = (BigInt::zero(), BigInt::one());
    std::iter::from_fn(move || {
        let next = &state.0 + &state.1;
        let out = std::mem::replace(&mut state.0, std::mem::replace(&mut state.1, next));
        Some(out)
    })
}

pub(super) fn fibonacci_enclosure(bits: u64) -> Enclosure {
    let mut conv = Convergents::new(fibonacci_coefficients());
    conv.bracket(&(BigInt::one() << bits))
        .expect("Fibonacci coefficients after F0 are positive")
}
