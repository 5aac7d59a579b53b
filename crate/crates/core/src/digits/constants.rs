//! Fixed-point enclosures of pi, sqrt(2), log 2 and e.
//!
//! Each function returns `[lo, hi] / 2^bits` containing the constant. The
//! error terms are counted conservatively in units of `2^-bits`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::Enclosure;

fn pow2(bits: u64) -> BigUint {
    BigUint::one() << bits
}

fn fixed(center: BigUint, below: u64, above: u64, bits: u64) -> Enclosure {
    let c = BigInt::from(center);
    Enclosure {
        lo: &c - below,
        hi: &c + above,
        denom: pow2(bits),
    }
}

const CHUDNOVSKY_C3_OVER_24: u64 = 10_939_058_860_032_000; // 640320^3 / 24

/// Binary splitting of the Chudnovsky series over terms `a..b`.
fn chudnovsky_split(a: u64, b: u64) -> (BigInt, BigInt, BigInt) {
    if b - a == 1 {
        let (p, q) = if a == 0 {
            (BigInt::one(), BigInt::one())
        } else {
            let p = BigInt::from(6 * a - 5) * (2 * a - 1) * (6 * a - 1);
            let q = BigInt::from(a) * a * a * CHUDNOVSKY_C3_OVER_24;
            (p, q)
        };
        let mut t = &p * (13_591_409u64 + 545_140_134u64 * a);
        if a % 2 == 1 {
            t = -t;
        }
        return (p, q, t);
    }
    let m = (a + b) / 2;
    let (pa, qa, ta) = chudnovsky_split(a, m);
    let (pb, qb, tb) = chudnovsky_split(m, b);
    (&pa * &pb, &qa * &qb, ta * &qb + pa * tb)
}

pub(super) fn pi(bits: u64) -> Enclosure {
    // Each term contributes about 47.11 bits.
    let terms = bits / 47 + 2;
    let (_, q, t) = chudnovsky_split(0, terms);
    let root = (BigUint::from(10_005u32) << (2 * bits)).sqrt();
    let numer = BigInt::from(root) * q * 426_880u32;
    let center = (numer / t).to_biguint().expect("pi is positive");
    // sqrt truncation and the final division each lose under one unit;
    // the series tail is far below one unit.
    fixed(center, 3, 3, bits)
}

pub(super) fn sqrt2(bits: u64) -> Enclosure {
    let root = (BigUint::from(2u32) << (2 * bits)).sqrt();
    fixed(root, 0, 1, bits)
}

/// log 2 = 2 atanh(1/3) = sum 2 / ((2k+1) 3^(2k+1)).
pub(super) fn log2(bits: u64) -> Enclosure {
    let mut power = pow2(bits) / 3u32;
    let mut sum = BigUint::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        sum += (&power << 1u32) / (2 * k + 1);
        power /= 9u32;
        k += 1;
    }
    // Every term is truncated downwards by less than 3 units; the tail after
    // the power underflows is below one unit.
    fixed(sum, 0, 3 * k + 2, bits)
}

/// e = sum 1/k!.
pub(super) fn e(bits: u64) -> Enclosure {
    let mut term = pow2(bits);
    let mut sum = BigUint::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        sum += &term;
        k += 1;
        term /= k;
    }
    fixed(sum, 0, k + 2, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure_sits_inside_known_prefix() {
        // pi = 3.14159265358979323846264338327950288419716939937510...
        let p: BigInt = "314159265358979323846264338327950288419716939937510"
            .parse()
            .unwrap();
        let d = BigInt::from(BigUint::from(10u32).pow(50));
        let enc = pi(200);
        let den = BigInt::from(enc.denom.clone());
        assert!(&enc.lo * &d >= &p * &den);
        assert!(&enc.hi * &d <= (p + 1) * &den);
    }

    #[test]
    fn enclosures_are_narrow() {
        for bits in [64, 500, 2000] {
            for enc in [pi(bits), sqrt2(bits), log2(bits), e(bits)] {
                let width = &enc.hi - &enc.lo;
                assert!(width <= BigInt::from(8 * bits), "width {width} at {bits}");
            }
        }
    }

    #[test]
    fn sqrt2_brackets_its_square() {
        let enc = sqrt2(100);
        let two = BigInt::from(2u32) << 200u32;
        assert!(&enc.lo * &enc.lo <= two);
        assert!(&enc.hi * &enc.hi >= two);
    }
}
