//! Constants built by concatenating the numerals of an integer sequence.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{ConstantSpec, DigitBlock, DigitError, Enclosure};

const SEGMENT: u64 = 1 << 15;

/// Unbounded prime generator backed by a segmented sieve of Eratosthenes.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    base_primes: Vec<u64>,
    segment_start: u64,
    pending: VecDeque<u64>,
}

impl Default for PrimeSieve {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeSieve {
    pub fn new() -> Self {
        PrimeSieve {
            base_primes: Vec::new(),
            segment_start: 2,
            pending: VecDeque::new(),
        }
    }

    /// Makes sure every prime up to `limit` is in `base_primes`.
    fn grow_base(&mut self, limit: u64) {
        let have = self.base_primes.last().copied().unwrap_or(1);
        if have >= limit {
            return;
        }
        let limit = limit.max(2 * have).max(64);
        let mut composite = vec![false; limit as usize + 1];
        let mut primes = Vec::new();
        for i in 2..=limit as usize {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit as usize {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        self.base_primes = primes;
    }

    fn sieve_next_segment(&mut self) {
        let lo = self.segment_start;
        let hi = lo + SEGMENT;
        let root = (hi as f64).sqrt() as u64 + 1;
        self.grow_base(root);
        let mut composite = vec![false; SEGMENT as usize];
        for &p in &self.base_primes {
            if p * p >= hi {
                break;
            }
            let mut m = (lo.div_ceil(p) * p).max(p * p);
            while m < hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        self.pending.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| lo + i as u64),
        );
        self.segment_start = hi;
    }
}

impl Iterator for PrimeSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pending.is_empty() {
            self.sieve_next_segment();
        }
        self.pending.pop_front()
    }
}

/// Product of the first `count` primes.
pub fn primorial(count: usize) -> BigUint {
    PrimeSieve::new()
        .take(count)
        .fold(BigUint::one(), |acc, p| acc * p)
}

enum Numerals {
    Naturals { next: u64 },
    Primes(PrimeSieve),
    Fibonacci { a: BigUint, b: BigUint },
}

/// Digit-by-digit iterator over a concatenation constant in its own base.
pub struct ConcatDigits {
    base: u32,
    numerals: Numerals,
    buffer: VecDeque<u8>,
}

impl ConcatDigits {
    /// `None` for constants that are not concatenations.
    pub fn new(constant: &ConstantSpec) -> Option<Self> {
        let (base, numerals) = match *constant {
            ConstantSpec::Champernowne { base } => (base, Numerals::Naturals { next: 1 }),
            ConstantSpec::CopelandErdos => (10, Numerals::Primes(PrimeSieve::new())),
            ConstantSpec::FibonacciConcat => (
                10,
                Numerals::Fibonacci {
                    a: BigUint::zero(),
                    b: BigUint::one(),
                },
            ),
            _ => return None,
        };
        Some(ConcatDigits {
            base,
            numerals,
            buffer: VecDeque::new(),
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    fn refill(&mut self) {
        let base = u64::from(self.base);
        match &mut self.numerals {
            Numerals::Naturals { next } => {
                push_numeral(&mut self.buffer, *next, base);
                *next += 1;
            }
            Numerals::Primes(sieve) => {
                let p = sieve.next().expect("primes are unbounded");
                push_numeral(&mut self.buffer, p, base);
            }
            Numerals::Fibonacci { a, b } => {
                if a.is_zero() {
                    self.buffer.push_back(0);
                } else {
                    self.buffer.extend(a.to_radix_be(self.base));
                }
                let next = &*a + &*b;
                *a = std::mem::replace(b, next);
            }
        }
    }
}

fn push_numeral(buffer: &mut VecDeque<u8>, mut value: u64, base: u64) {
    let at = buffer.len();
    loop {
        buffer.insert(at, (value % base) as u8);
        value /= base;
        if value == 0 {
            break;
        }
    }
}

impl Iterator for ConcatDigits {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        while self.buffer.is_empty() {
            self.refill();
        }
        self.buffer.pop_front()
    }
}

/// The first `count` digits of a concatenation constant in its native base.
pub fn concat_constant_digits(
    constant: &ConstantSpec,
    count: usize,
) -> Result<DigitBlock, DigitError> {
    constant.validate()?;
    if count == 0 {
        return Err(DigitError::InvalidCount);
    }
    let digits = ConcatDigits::new(constant)
        .ok_or_else(|| DigitError::UnsupportedConstant(constant.id()))?;
    let base = digits.base();
    Ok(DigitBlock {
        base,
        start: 1,
        digits: digits.take(count).collect(),
    })
}

/// `[V, V + 1] / b^D` from the first `D` native digits.
pub(super) fn enclose(constant: &ConstantSpec, bits: u64) -> Enclosure {
    let digits = ConcatDigits::new(constant).expect("concatenation constant");
    let base = digits.base();
    let count = (bits as f64 / f64::from(base).log2()).ceil() as usize + 2;
    let raw: Vec<u8> = digits.take(count).collect();
    let value = BigUint::from_radix_be(&raw, base).expect("digits are below the base");
    let lo = BigInt::from(value);
    Enclosure {
        hi: &lo + 1u32,
        lo,
        denom: BigUint::from(base).pow(count as u32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn sieve_matches_trial_division_across_segments() {
        let limit = 3 * SEGMENT + 17;
        let sieved: Vec<u64> = PrimeSieve::new().take_while(|&p| p <= limit).collect();
        assert_eq!(sieved, trial_division_primes(limit));
    }

    #[test]
    fn champernowne_decimal() {
        let b = concat_constant_digits(&ConstantSpec::Champernowne { base: 10 }, 11).unwrap();
        assert_eq!(b.digits, vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0]);
    }

    #[test]
    fn champernowne_binary() {
        // 0.1 10 11 100 101
        let b = concat_constant_digits(&ConstantSpec::Champernowne { base: 2 }, 12).unwrap();
        assert_eq!(b.digits, vec![1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1, 1]);
        assert_eq!(b.base, 2);
    }

    #[test]
    fn champernowne_other_base_uses_its_own_numerals() {
        // base 3: 1 2 10 11 12 20
        let b = concat_constant_digits(&ConstantSpec::Champernowne { base: 3 }, 10).unwrap();
        assert_eq!(b.digits, vec![1, 2, 1, 0, 1, 1, 1, 2, 2, 0]);
    }

    #[test]
    fn copeland_erdos() {
        let b = concat_constant_digits(&ConstantSpec::CopelandErdos, 7).unwrap();
        assert_eq!(b.digits, vec![2, 3, 5, 7, 1, 1, 1]);
    }

    #[test]
    fn fibonacci_concat() {
        let b = concat_constant_digits(&ConstantSpec::FibonacciConcat, 6).unwrap();
        assert_eq!(b.digits, vec![0, 1, 1, 2, 3, 5]);
        // 0 1 1 2 3 5 8 13 21 34
        let b = concat_constant_digits(&ConstantSpec::FibonacciConcat, 13).unwrap();
        assert_eq!(b.digits, vec![0, 1, 1, 2, 3, 5, 8, 1, 3, 2, 1, 3, 4]);
    }

    #[test]
    fn non_concatenation_is_rejected() {
        assert!(matches!(
            concat_constant_digits(&ConstantSpec::Pi, 3),
            Err(DigitError::UnsupportedConstant(_))
        ));
    }

    #[test]
    fn primorial_of_eleven_primes() {
        assert_eq!(primorial(11), BigUint::from(200_560_490_130u64));
    }
}
