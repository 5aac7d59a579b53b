//! How far into an expansion a window should first appear, and what scanning
//! that far costs.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CompiledMatcher;
use crate::digits::PrimeSieve;

/// Nanoseconds in a year, rounded up.
pub const NS_PER_YEAR: f64 = 3.2e16;

/// Age of the universe in years.
pub const UNIVERSE_AGE_YEARS: f64 = 1.35e10;

/// Above this many bits `b^L` is not expanded exactly.
const EXACT_POWER_BITS: f64 = 200_000.0;

/// A positive number `mantissa * 10^exponent` with `1 <= mantissa < 10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scientific {
    pub mantissa: f64,
    pub exponent: i64,
}

impl Scientific {
    /// Normalizes any positive finite `mantissa`.
    pub fn new(mantissa: f64, exponent: i64) -> Self {
        assert!(
            mantissa > 0.0 && mantissa.is_finite(),
            "mantissa must be positive"
        );
        let shift = mantissa.log10().floor() as i64;
        let mut m = mantissa / 10f64.powi(shift as i32);
        let mut e = exponent + shift;
        if m >= 10.0 {
            m /= 10.0;
            e += 1;
        } else if m < 1.0 {
            m *= 10.0;
            e -= 1;
        }
        Scientific {
            mantissa: m,
            exponent: e,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Scientific::new(x, 0)
    }

    pub fn scale(self, factor: f64) -> Self {
        Scientific::new(self.mantissa * factor, self.exponent)
    }

    pub fn log10(&self) -> f64 {
        self.exponent as f64 + self.mantissa.log10()
    }

    /// `None` when the value overflows an f64.
    pub fn to_f64(&self) -> Option<f64> {
        let v = self.mantissa * 10f64.powi(i32::try_from(self.exponent).ok()?);
        v.is_finite().then_some(v)
    }

    /// Renders with `sig` significant digits, e.g. `5.919e2132`.
    pub fn format(&self, sig: usize) -> String {
        let sig = sig.max(1);
        let decimals = sig - 1;
        let mut text = format!("{:.*}", decimals, self.mantissa);
        let mut exponent = self.exponent;
        if text.starts_with("10") {
            text = format!("{:.*}", decimals, self.mantissa / 10.0);
            exponent += 1;
        }
        format!("{text}e{exponent}")
    }
}

impl fmt::Display for Scientific {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(4))
    }
}

/// `base^window_length`, the mean gap between occurrences of one fixed
/// window in a normal expansion.
pub fn expected_position(base: u32, window_length: u64) -> Scientific {
    assert!(base >= 2, "base must be at least 2");
    if let Some(k) = power_of_ten(base) {
        return Scientific {
            mantissa: 1.0,
            exponent: k * window_length as i64,
        };
    }
    if window_length as f64 * f64::from(base).log2() <= EXACT_POWER_BITS {
        exact_power(base, window_length)
    } else {
        power_by_logs(base, window_length)
    }
}

fn power_of_ten(base: u32) -> Option<i64> {
    let mut b = base;
    let mut k = 0;
    while b.is_multiple_of(10) {
        b /= 10;
        k += 1;
    }
    (b == 1 && k > 0).then_some(k)
}

fn exact_power(base: u32, window_length: u64) -> Scientific {
    let exp = u32::try_from(window_length).expect("guarded by the bit budget");
    let text = BigUint::from(base).pow(exp).to_string();
    let lead = &text[..text.len().min(17)];
    let mantissa: f64 = format!("{}.{}", &lead[..1], &lead[1..])
        .parse()
        .expect("decimal digits");
    Scientific {
        mantissa,
        exponent: text.len() as i64 - 1,
    }
}

/// `ln(p/q) * 2^prec` for `p/q` in `[1, 2]`, via `2 atanh((p-q)/(p+q))`.
fn ln_ratio(p: u64, q: u64, prec: u64) -> BigInt {
    let one = BigInt::one() << prec;
    let t = (BigInt::from(p - q) << prec) / BigInt::from(p + q);
    let t2 = (&t * &t) >> prec;
    let mut power = t;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        sum += &power / (2 * k + 1);
        power = (&power * &t2) >> prec;
        k += 1;
    }
    debug_assert!(sum < one);
    sum << 1
}

fn ln_u32(b: u32, ln2: &BigInt, prec: u64) -> BigInt {
    let k = 31 - b.leading_zeros();
    ln2 * k + ln_ratio(u64::from(b), 1 << k, prec)
}

fn exp_fixed(y: &BigInt, prec: u64) -> BigInt {
    let mut term = BigInt::one() << prec;
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = ((term * y) >> prec) / k;
        sum += &term;
        k += 1;
    }
    sum
}

/// Splits `L log10 b` into integer and fractional parts in fixed point and
/// raises 10 to the fraction. Precision doubles while the fraction is too
/// close to an integer for the accumulated error to rule out a wrong floor.
fn power_by_logs(base: u32, window_length: u64) -> Scientific {
    let mut prec = 192u64 + u64::from(64 - window_length.leading_zeros());
    loop {
        let ln2 = ln_ratio(2, 1, prec);
        let ln10 = &ln2 * 3u32 + ln_ratio(10, 8, prec);
        let log10_b = (ln_u32(base, &ln2, prec) << prec) / &ln10;
        let x = log10_b * window_length;
        let integer = &x >> prec;
        let frac = &x - (&integer << prec);
        // a few units of error in log10_b, multiplied by L
        let margin = BigInt::from(window_length) * 64u32;
        let one = BigInt::one() << prec;
        if frac > margin && frac < &one - &margin {
            let mantissa_fixed = exp_fixed(&((frac * &ln10) >> prec), prec);
            let mantissa = (mantissa_fixed >> (prec - 60)).to_f64().expect("fits") / 2f64.powi(60);
            return Scientific::new(mantissa, integer.to_i64().expect("exponent fits i64"));
        }
        assert!(
            prec < 1 << 14,
            "fraction of L log10 b indistinguishable from an integer"
        );
        prec *= 2;
    }
}

/// Number of distinct windows the matcher accepts: the product of its
/// per-position set sizes. Under a uniform digit model this is how many
/// times more often the class occurs than a single fixed window.
pub fn class_frequency_gain(matcher: &CompiledMatcher) -> BigUint {
    matcher
        .sets()
        .iter()
        .map(|s| BigUint::from(s.len()))
        .product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub expected_digits: Scientific,
    pub cpu_seconds: Scientific,
    pub cpu_years: Scientific,
    pub universe_age_multiples: Scientific,
}

/// Time to examine `expected_digits` digits at `ns_per_digit` each.
pub fn cost_estimate(expected_digits: Scientific, ns_per_digit: Ratio<u64>) -> CostEstimate {
    assert!(*ns_per_digit.numer() > 0, "ns_per_digit must be positive");
    let per_digit = *ns_per_digit.numer() as f64 / *ns_per_digit.denom() as f64;
    let ns = expected_digits.scale(per_digit);
    let cpu_years = ns.scale(1.0 / NS_PER_YEAR);
    CostEstimate {
        expected_digits,
        cpu_seconds: ns.scale(1e-9),
        cpu_years,
        universe_age_multiples: cpu_years.scale(1.0 / UNIVERSE_AGE_YEARS),
    }
}

/// Product of the first `count` primes and its integer square root.
pub fn primorial_side(count: usize) -> (BigUint, BigUint) {
    let product: BigUint = PrimeSieve::new().take(count).map(BigUint::from).product();
    let side = product.sqrt();
    (product, side)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Scientific, b: Scientific, rel: f64) -> bool {
        a.exponent == b.exponent && ((a.mantissa - b.mantissa) / b.mantissa).abs() < rel
    }

    #[test]
    fn small_powers() {
        assert_eq!(
            expected_position(10, 1),
            Scientific {
                mantissa: 1.0,
                exponent: 1
            }
        );
        let p = expected_position(2, 10);
        assert_eq!(p.exponent, 3);
        assert!((p.mantissa - 1.024).abs() < 1e-12);
        assert_eq!(expected_position(100, 7).exponent, 14);
    }

    #[test]
    fn eleven_to_the_2048() {
        let p = expected_position(11, 2048);
        assert_eq!(p.exponent, 2132);
        assert_eq!(p.format(4), "5.919e2132");
    }

    #[test]
    fn log_route_agrees_with_exact_powers() {
        for (b, l) in [
            (11, 2048),
            (2, 10_000),
            (3, 4321),
            (7, 999),
            (255, 3000),
            (13, 1),
        ] {
            let exact = exact_power(b, l);
            let logs = power_by_logs(b, l);
            assert!(
                close(logs, exact, 1e-12),
                "b={b} L={l}: {logs:?} vs {exact:?}"
            );
        }
    }

    #[test]
    fn huge_window_exponent() {
        let l = 447_840u64 * 447_840;
        let p = expected_position(11, l);
        // floor(L log10 11) from f64 is accurate to about 1e-5 here
        let approx = l as f64 * 11f64.log10();
        assert!((p.exponent as f64 - approx).abs() < 1.0);
        assert!(p.exponent > 208_800_000_000 && p.exponent < 208_900_000_000);
    }

    #[test]
    fn universe_ages_for_the_novel_window() {
        let c = cost_estimate(expected_position(11, 2048), Ratio::from_integer(1));
        assert_eq!(c.universe_age_multiples.exponent, 2106);
        assert_eq!(c.universe_age_multiples.format(2), "1.4e2106");
    }

    #[test]
    fn one_year_of_nanoseconds() {
        let c = cost_estimate(Scientific::new(3.2, 16), Ratio::from_integer(1));
        assert!((c.cpu_years.to_f64().unwrap() - 1.0).abs() < 1e-12);
        let c = cost_estimate(Scientific::new(3.2, 16), Ratio::new(1, 2));
        assert!((c.cpu_years.to_f64().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn formatting_rounds_into_the_next_decade() {
        assert_eq!(Scientific::new(9.9996, 3).format(4), "1.000e4");
        assert_eq!(
            Scientific::new(0.5, 0),
            Scientific {
                mantissa: 5.0,
                exponent: -1
            }
        );
    }

    #[test]
    fn eleven_primes() {
        let (product, side) = primorial_side(11);
        assert_eq!(product, BigUint::from(200_560_490_130u64));
        assert_eq!(side, BigUint::from(447_839u32));
    }
}
