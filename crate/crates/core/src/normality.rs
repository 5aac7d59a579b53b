//! Empirical normality diagnostics: overlapping k-gram counts, chi-square
//! uniformity tests, and the exact probability of a perfectly even sample.
//!
//! Nothing here can show a number is normal. A small p-value says the first
//! `l` digits are unlikely under uniform k-gram frequencies; a large one only
//! says the sample does not contradict them.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::digits::{digits_in_base, ConstantSpec, DigitBlock, DigitError};
use crate::search::Scientific;

/// Largest counting table, in cells.
pub const MAX_TABLE_CELLS: u64 = 1 << 24;

/// Minimum expected count per cell for the chi-square approximation.
pub const DEFAULT_MIN_EXPECTED: f64 = 5.0;

/// Smallest p-value reported as a number; anything below is 0 with a flag.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-308;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalityError {
    #[error("base^k = {base}^{k} exceeds the counting table budget")]
    KTooLarge { base: u32, k: usize },
    #[error("block of {len} digits is shorter than k = {k}")]
    BlockTooShort { len: usize, k: usize },
    #[error("{windows} windows is below the {needed} needed for the chi-square test")]
    TooFewSamples { windows: u64, needed: f64 },
    #[error("trials {trials} != categories {categories} * per_category {per_category}")]
    MismatchedTotals {
        trials: u64,
        categories: u64,
        per_category: u64,
    },
    #[error(transparent)]
    Digits(#[from] DigitError),
}

/// Overlapping k-gram counts. A k-gram is indexed by its value read as a
/// base-`base` numeral.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGramCounts {
    pub base: u32,
    pub k: usize,
    pub length: u64,
    pub counts: Vec<u64>,
}

impl KGramCounts {
    pub fn windows(&self) -> u64 {
        self.length + 1 - self.k as u64
    }

    pub fn cells(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, gram: &[u8]) -> u64 {
        if gram.len() != self.k || gram.iter().any(|&d| u32::from(d) >= self.base) {
            return 0;
        }
        let index = gram
            .iter()
            .fold(0usize, |acc, &d| acc * self.base as usize + usize::from(d));
        self.counts[index]
    }
}

pub fn kgram_counts(block: &DigitBlock, k: usize) -> Result<KGramCounts, NormalityError> {
    let base = block.base;
    let cells = u32::try_from(k)
        .ok()
        .and_then(|k| u64::from(base).checked_pow(k))
        .filter(|&c| k >= 1 && c <= MAX_TABLE_CELLS)
        .ok_or(NormalityError::KTooLarge { base, k })?;
    if block.len() < k {
        return Err(NormalityError::BlockTooShort {
            len: block.len(),
            k,
        });
    }
    let cells = cells as usize;
    let mut counts = vec![0u64; cells];
    let mut index = 0usize;
    for (i, &d) in block.digits.iter().enumerate() {
        index = (index * base as usize + usize::from(d)) % cells;
        if i + 1 >= k {
            counts[index] += 1;
        }
    }
    Ok(KGramCounts {
        base,
        k,
        length: block.len() as u64,
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    /// log10 of the p-value, finite even when `p_value` underflows.
    pub log10_p_value: f64,
    pub underflow: bool,
}

pub fn chi_square_uniform(counts: &KGramCounts) -> Result<ChiSquare, NormalityError> {
    chi_square_uniform_with_min(counts, DEFAULT_MIN_EXPECTED)
}

pub fn chi_square_uniform_with_min(
    counts: &KGramCounts,
    min_expected: f64,
) -> Result<ChiSquare, NormalityError> {
    let windows = counts.windows();
    let cells = counts.cells() as f64;
    let needed = min_expected * cells;
    if (windows as f64) < needed {
        return Err(NormalityError::TooFewSamples { windows, needed });
    }
    let expected = windows as f64 / cells;
    let statistic: f64 = counts
        .counts
        .iter()
        .map(|&n| {
            let d = n as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = counts.cells() as u64 - 1;
    Ok(chi_square_tail(statistic, dof))
}

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
pub fn chi_square_tail(statistic: f64, dof: u64) -> ChiSquare {
    let ln_p = if dof == 0 {
        0.0
    } else {
        ln_gamma_q(dof as f64 / 2.0, statistic / 2.0)
    };
    let log10_p = (ln_p / std::f64::consts::LN_10).min(0.0);
    let p = ln_p.exp().min(1.0);
    let underflow = p < UNDERFLOW_THRESHOLD;
    ChiSquare {
        statistic,
        dof,
        p_value: if underflow { 0.0 } else { p },
        log10_p_value: log10_p,
        underflow,
    }
}

/// `ln Q(a, x)`, the log of the regularized upper incomplete gamma function:
/// a power series for `x < a + 1`, a Lentz continued fraction otherwise.
fn ln_gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let ln_prefix = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = a;
        for _ in 0..10_000 {
            n += 1.0;
            term *= x / n;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = (ln_prefix + sum.ln()).exp();
        (1.0 - p).max(0.0).ln()
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        ln_prefix + h.ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KRow {
    pub k: usize,
    pub cells: u64,
    pub windows: u64,
    pub chi_square: f64,
    pub dof: u64,
    pub p_value: f64,
    pub log10_p_value: f64,
    pub underflow: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub constant: String,
    pub base: u32,
    pub length: u64,
    pub rows: Vec<KRow>,
    pub verdict: String,
}

/// p-values below this are called significant in the verdict text.
const SIGNIFICANCE: f64 = 1e-6;

pub fn normality_scan(
    constant: &ConstantSpec,
    base: u32,
    length: usize,
    k_max: usize,
) -> Result<NormalityReport, NormalityError> {
    let block = digits_in_base(constant, base, length)?;
    normality_scan_block(&constant.id(), &block, k_max)
}

/// Same as [`normality_scan`] over digits already at hand.
pub fn normality_scan_block(
    constant: &str,
    block: &DigitBlock,
    k_max: usize,
) -> Result<NormalityReport, NormalityError> {
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let counts = kgram_counts(block, k)?;
        let chi = chi_square_uniform(&counts)?;
        rows.push(KRow {
            k,
            cells: counts.cells() as u64,
            windows: counts.windows(),
            chi_square: chi.statistic,
            dof: chi.dof,
            p_value: chi.p_value,
            log10_p_value: chi.log10_p_value,
            underflow: chi.underflow,
        });
    }
    let rejected: Vec<String> = rows
        .iter()
        .filter(|r| r.p_value < SIGNIFICANCE)
        .map(|r| r.k.to_string())
        .collect();
    let verdict = if rejected.is_empty() {
        format!(
            "no k-gram frequency deviation below p = 1e-6 in the first {} digits; \
             this is a finite-sample diagnostic and does not establish normality",
            block.len()
        )
    } else {
        format!(
            "uniform k-gram frequencies rejected at p < 1e-6 for k = {} in the first {} digits; \
             this is a finite-sample diagnostic, not a statement about the full expansion",
            rejected.join(", "),
            block.len()
        )
    };
    Ok(NormalityReport {
        constant: constant.to_string(),
        base: block.base,
        length: block.len() as u64,
        rows,
        verdict,
    })
}

/// The probability that `trials` uniform draws from `categories` outcomes
/// land exactly `per_category` times on each.
#[derive(Debug, Clone, PartialEq)]
pub struct EquidistributionProbability {
    /// `trials! / ((per_category!)^categories * categories^trials)`, reduced.
    pub numer: BigUint,
    pub denom: BigUint,
    pub exact: Scientific,
    pub stirling: Scientific,
}

impl EquidistributionProbability {
    /// The exact value to six significant digits.
    pub fn exact_decimal(&self) -> String {
        self.exact.format(6)
    }

    pub fn relative_error(&self) -> f64 {
        let diff = self.stirling.log10() - self.exact.log10();
        (10f64.powf(diff) - 1.0).abs()
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n)
        .map(BigUint::from)
        .product::<BigUint>()
        .max(BigUint::one())
}

/// `numer / denom` with a mantissa good to about 17 digits.
fn ratio_to_scientific(numer: &BigUint, denom: &BigUint) -> Scientific {
    const DIGITS: u32 = 17;
    let shift = denom.to_string().len() as i64 - numer.to_string().len() as i64 + DIGITS as i64;
    let scaled = if shift >= 0 {
        numer * BigUint::from(10u32).pow(shift as u32) / denom
    } else {
        numer / (denom * BigUint::from(10u32).pow((-shift) as u32))
    };
    let text = scaled.to_string();
    let lead = &text[..text.len().min(18)];
    let mantissa: f64 = format!("{}.{}", &lead[..1], &lead[1..])
        .parse()
        .expect("digits");
    Scientific::new(mantissa, text.len() as i64 - 1 - shift)
}

/// `ln n!` by Stirling's formula `sqrt(2 pi n) (n/e)^n`.
fn ln_stirling_factorial(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    0.5 * (2.0 * std::f64::consts::PI * n).ln() + n * n.ln() - n
}

pub fn exact_equidistribution_probability(
    trials: u64,
    categories: u64,
    per_category: u64,
) -> Result<EquidistributionProbability, NormalityError> {
    if trials == 0 || categories.checked_mul(per_category) != Some(trials) {
        return Err(NormalityError::MismatchedTotals {
            trials,
            categories,
            per_category,
        });
    }
    let numer = factorial(trials);
    let denom = factorial(per_category).pow(categories as u32)
        * BigUint::from(categories).pow(trials as u32);
    let g = numer.gcd(&denom);
    let (numer, denom) = (numer / &g, denom / &g);
    debug_assert!(!denom.is_zero());
    let exact = ratio_to_scientific(&numer, &denom);

    let ln_p = ln_stirling_factorial(trials)
        - categories as f64 * ln_stirling_factorial(per_category)
        - trials as f64 * (categories as f64).ln();
    let log10_p = ln_p / std::f64::consts::LN_10;
    let exponent = log10_p.floor();
    let stirling = Scientific::new(10f64.powf(log10_p - exponent), exponent as i64);

    Ok(EquidistributionProbability {
        numer,
        denom,
        exact,
        stirling,
    })
}
