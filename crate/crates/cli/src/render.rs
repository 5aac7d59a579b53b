//! Text and JSON renderings of library results.

use serde::{Deserialize, Serialize};

use sagan::normality::NormalityReport;
use sagan::search::SearchResult;

/// Digit glyph: `0-9`, then `a-z` for 10 to 35, then `[d]`.
pub fn glyph(d: u8) -> String {
    match d {
        0..=9 => char::from(b'0' + d).to_string(),
        10..=35 => char::from(b'a' + d - 10).to_string(),
        _ => format!("[{d}]"),
    }
}

pub fn glyphs(digits: &[u8]) -> String {
    digits.iter().map(|&d| glyph(d)).collect()
}

/// Base-agnostic digit string for JSON: values from 10 up are `[d]`.
pub fn bracketed(digits: &[u8]) -> String {
    digits
        .iter()
        .map(|&d| {
            if d < 10 {
                d.to_string()
            } else {
                format!("[{d}]")
            }
        })
        .collect()
}

/// JSON record of one search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub constant: String,
    pub base: u32,
    pub scheme: String,
    pub n: usize,
    #[serde(rename = "P")]
    pub p: Vec<u8>,
    #[serde(rename = "Q")]
    pub q: Vec<u8>,
    pub position: Option<u64>,
    pub window: Option<String>,
    pub context_before: String,
    pub context_after: String,
    pub digits_examined: u64,
    pub limit: u64,
    pub found: bool,
}

impl SearchRecord {
    pub fn new(
        constant: &str,
        base: u32,
        scheme: &str,
        n: usize,
        p: Vec<u8>,
        q: Vec<u8>,
        result: &SearchResult,
    ) -> Self {
        SearchRecord {
            constant: constant.to_string(),
            base,
            scheme: scheme.to_string(),
            n,
            p,
            q,
            position: result.position,
            window: result.window.as_ref().map(|w| bracketed(&w.digits)),
            context_before: bracketed(&result.context_before),
            context_after: bracketed(&result.context_after),
            digits_examined: result.digits_examined,
            limit: result.limit,
            found: result.found,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

/// Position, the window as an n x n square, and the window set off in its
/// context.
pub fn search_text(n: usize, result: &SearchResult) -> String {
    let mut out = String::new();
    let Some(window) = &result.window else {
        out.push_str(&format!(
            "not found within {} digits ({} examined)\n",
            result.limit, result.digits_examined
        ));
        return out;
    };
    out.push_str(&format!("position {}\n", window.start));
    for row in window.digits.chunks(n.max(1)) {
        out.push_str(&glyphs(row));
        out.push('\n');
    }
    out.push_str(&format!(
        "context ...{}[{}]{}...\n",
        glyphs(&result.context_before),
        glyphs(&window.digits),
        glyphs(&result.context_after)
    ));
    out.push_str(&format!("digits examined {}\n", result.digits_examined));
    out
}

pub fn normality_table(report: &NormalityReport) -> String {
    let mut out = format!(
        "{} in base {}, first {} digits\n{:>3} {:>10} {:>10} {:>14} {:>10} {:>12}\n",
        report.constant, report.base, report.length, "k", "b^k", "windows", "chi2", "dof", "p"
    );
    for r in &report.rows {
        let p = if r.underflow {
            format!("<1e-308 (~1e{:.0})", r.log10_p_value)
        } else {
            format!("{:.6e}", r.p_value)
        };
        out.push_str(&format!(
            "{:>3} {:>10} {:>10} {:>14.4} {:>10} {:>12}\n",
            r.k, r.cells, r.windows, r.chi_square, r.dof, p
        ));
    }
    out.push_str(&report.verdict);
    out.push('\n');
    out
}
