use proptest::prelude::*;

use sagan::digits::{ConstantSpec, DigitBlock};
use sagan::normality::{
    chi_square_tail, exact_equidistribution_probability, kgram_counts, normality_scan,
};

#[test]
fn fibonacci_cfrac_report_is_descriptive() {
    let r = normality_scan(&ConstantSpec::FibonacciCFrac, 10, 10_000, 2).unwrap();
    assert_eq!(r.rows.len(), 2);
    for row in &r.rows {
        assert!((0.0..=1.0).contains(&row.p_value));
        assert!(row.chi_square >= 0.0);
        assert_eq!(row.dof, row.cells - 1);
    }
    assert!(r.verdict.contains("finite-sample"));
    assert!(!r.verdict.contains("proven"));
}

#[test]
fn pi_digits_look_uniform() {
    let r = normality_scan(&ConstantSpec::Pi, 10, 20_000, 2).unwrap();
    assert!(r.rows.iter().all(|row| row.p_value > 1e-6));
}

#[test]
fn hundred_categories_of_ten() {
    let p = exact_equidistribution_probability(1000, 100, 10).unwrap();
    let q = exact_equidistribution_probability(1000, 10, 100).unwrap();
    assert!(p.exact.exponent < q.exact.exponent);
    // Stirling at n = 10 is off by about 1/120 per factor, compounded 100 times
    assert!(p.relative_error() < 1.5);
    let text = p.exact_decimal();
    let (mantissa, exponent) = text.split_once('e').unwrap();
    assert_eq!(mantissa.len(), 7);
    assert_eq!(exponent.parse::<i64>().unwrap(), p.exact.exponent);
}

#[test]
fn p_values_strictly_decrease_on_a_grid() {
    for dof in [1u64, 4, 9, 99, 65_535] {
        let mut last = f64::INFINITY;
        for i in 1..200 {
            let stat = dof as f64 * i as f64 / 40.0;
            let lp = chi_square_tail(stat, dof).log10_p_value;
            assert!(
                lp < last || (lp == 0.0 && last == 0.0),
                "dof {dof} stat {stat}"
            );
            last = lp;
        }
    }
}

proptest! {
    #[test]
    fn counts_are_conserved(base in 2u32..=16, raw in proptest::collection::vec(any::<u8>(), 1..2_000), k in 1usize..=3) {
        let digits: Vec<u8> = raw.iter().map(|&d| (u32::from(d) % base) as u8).collect();
        prop_assume!(digits.len() >= k);
        let block = DigitBlock::new(base, 1, digits.clone()).unwrap();
        let c = kgram_counts(&block, k).unwrap();
        prop_assert_eq!(c.counts.iter().sum::<u64>(), (digits.len() + 1 - k) as u64);
        prop_assert_eq!(c.count(&digits[..k]) >= 1, true);
    }
}
