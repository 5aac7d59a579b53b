//! First-occurrence search of digit-class patterns in digit streams.
//!
//! A pattern of length L is compiled into one admissible digit set per
//! window position. The scan slides over the flattened digit sequence one
//! position at a time, so overlapping candidates are all considered and the
//! reported anchor is the smallest matching one.

mod estimate;

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digits::{DigitBlock, DigitError, DigitSource};
use crate::raster::{GeneralizedPattern, RasterPattern, Scheme};

pub use estimate::{
    class_frequency_gain, cost_estimate, expected_position, primorial_side, CostEstimate,
    Scientific, NS_PER_YEAR, UNIVERSE_AGE_YEARS,
};

/// Default number of context digits kept on each side of a match.
pub const DEFAULT_CONTEXT: usize = 12;

/// Longest window handled by the bit-parallel scanner.
const BIT_PARALLEL_MAX: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("base {base} cannot hold digit {max_digit}")]
    BaseTooSmall { base: u32, max_digit: u32 },
    #[error("stream base {stream} differs from matcher base {matcher}")]
    BaseMismatch { stream: u32, matcher: u32 },
    #[error("limit {limit} is shorter than the window length {window}")]
    LimitTooSmall { limit: u64, window: usize },
    #[error("digit {digit} is not valid in base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("matcher needs at least one position with a non-empty digit set")]
    EmptyMatcher,
    #[error(transparent)]
    Digits(#[from] DigitError),
}

/// 256-bit membership set of digit values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DigitSet([u64; 4]);

impl DigitSet {
    pub fn single(d: u8) -> Self {
        let mut s = DigitSet::default();
        s.insert(d);
        s
    }

    pub fn insert(&mut self, d: u8) {
        self.0[usize::from(d >> 6)] |= 1 << (d & 63);
    }

    pub fn contains(&self, d: u8) -> bool {
        self.0[usize::from(d >> 6)] >> (d & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn max(&self) -> Option<u8> {
        (0..=255u8).rev().find(|&d| self.contains(d))
    }
}

impl FromIterator<u8> for DigitSet {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut s = DigitSet::default();
        for d in iter {
            s.insert(d);
        }
        s
    }
}

impl From<&BTreeSet<u8>> for DigitSet {
    fn from(set: &BTreeSet<u8>) -> Self {
        set.iter().copied().collect()
    }
}

/// A window template: one admissible digit set per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledMatcher {
    base: u32,
    sets: Vec<DigitSet>,
    n: Option<usize>,
    scheme: Option<Scheme>,
    /// Per digit value, the window positions admitting it (bit i = position i).
    masks: Option<Vec<u128>>,
}

impl CompiledMatcher {
    /// Builds a matcher from explicit per-position sets.
    pub fn from_sets(sets: Vec<DigitSet>, base: u32) -> Result<Self, SearchError> {
        if !(2..=256).contains(&base) {
            return Err(SearchError::Digits(DigitError::InvalidBase(base)));
        }
        if sets.is_empty() || sets.iter().any(DigitSet::is_empty) {
            return Err(SearchError::EmptyMatcher);
        }
        let max_digit = sets.iter().filter_map(DigitSet::max).max().unwrap_or(0);
        if u32::from(max_digit) >= base {
            return Err(SearchError::BaseTooSmall {
                base,
                max_digit: u32::from(max_digit),
            });
        }
        let masks = (sets.len() <= BIT_PARALLEL_MAX).then(|| {
            let mut masks = vec![0u128; 256];
            for (i, set) in sets.iter().enumerate() {
                for d in 0..=255u8 {
                    if set.contains(d) {
                        masks[usize::from(d)] |= 1 << i;
                    }
                }
            }
            masks
        });
        Ok(CompiledMatcher {
            base,
            sets,
            n: None,
            scheme: None,
            masks,
        })
    }

    /// Matcher for an exact digit string.
    pub fn literal(digits: &[u8], base: u32) -> Result<Self, SearchError> {
        Self::from_sets(digits.iter().map(|&d| DigitSet::single(d)).collect(), base)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Window length.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[DigitSet] {
        &self.sets
    }

    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn scheme(&self) -> Option<Scheme> {
        self.scheme
    }

    pub fn is_bit_parallel(&self) -> bool {
        self.masks.is_some()
    }

    /// Whether `window` (of matcher length) matches position by position.
    pub fn matches(&self, window: &[u8]) -> bool {
        window.len() == self.sets.len()
            && window.iter().zip(&self.sets).all(|(&d, s)| s.contains(d))
    }

    fn scanner(&self) -> Scanner<'_> {
        Scanner {
            matcher: self,
            state: 0,
            recent: VecDeque::with_capacity(self.len()),
        }
    }
}

/// Compiles a generalized circle: position i admits P where the shape has a
/// 1 and Q where it has a 0.
pub fn compile(pattern: &GeneralizedPattern, base: u32) -> Result<CompiledMatcher, SearchError> {
    let needed = u32::from(pattern.max_digit()) + 1;
    if base < needed.max(2) {
        return Err(SearchError::BaseTooSmall {
            base,
            max_digit: u32::from(pattern.max_digit()),
        });
    }
    let circle = DigitSet::from(pattern.circle_set());
    let background = DigitSet::from(pattern.background_set());
    let shape = pattern.shape();
    let sets = shape
        .bits()
        .iter()
        .map(|&b| if b == 1 { circle } else { background })
        .collect();
    let mut m = CompiledMatcher::from_sets(sets, base)?;
    m.n = Some(shape.n());
    m.scheme = shape.scheme();
    Ok(m)
}

/// Compiles a plain circle (1 on 0).
pub fn compile_plain(pattern: &RasterPattern, base: u32) -> Result<CompiledMatcher, SearchError> {
    compile(&GeneralizedPattern::plain(pattern.clone()), base)
}

/// Incremental matcher state over a digit sequence.
struct Scanner<'m> {
    matcher: &'m CompiledMatcher,
    state: u128,
    /// Last L digits, only kept when the window is too long for `state`.
    recent: VecDeque<u8>,
}

impl Scanner<'_> {
    /// Feeds one digit; true when a match ends at it.
    fn push(&mut self, d: u8) -> bool {
        let len = self.matcher.len();
        match &self.matcher.masks {
            Some(masks) => {
                self.state = ((self.state << 1) | 1) & masks[usize::from(d)];
                self.state >> (len - 1) & 1 == 1
            }
            None => {
                if self.recent.len() == len {
                    self.recent.pop_front();
                }
                self.recent.push_back(d);
                self.recent.len() == len
                    && self
                        .recent
                        .iter()
                        .zip(&self.matcher.sets)
                        .all(|(&d, s)| s.contains(d))
            }
        }
    }
}

/// Outcome of a first-occurrence search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub found: bool,
    /// 1-indexed anchor of the first matching window.
    pub position: Option<u64>,
    pub window: Option<DigitBlock>,
    pub context_before: Vec<u8>,
    pub context_after: Vec<u8>,
    /// Digits consumed by the scan: the end of the match, or the limit.
    pub digits_examined: u64,
    pub limit: u64,
}

/// Smallest anchor `p <= limit - L + 1` whose window matches.
pub fn find_first(
    source: &mut impl DigitSource,
    matcher: &CompiledMatcher,
    limit: u64,
) -> Result<SearchResult, SearchError> {
    find_first_with_context(source, matcher, limit, DEFAULT_CONTEXT)
}

pub fn find_first_with_context(
    source: &mut impl DigitSource,
    matcher: &CompiledMatcher,
    limit: u64,
    context: usize,
) -> Result<SearchResult, SearchError> {
    if source.base() != matcher.base() {
        return Err(SearchError::BaseMismatch {
            stream: source.base(),
            matcher: matcher.base(),
        });
    }
    let len = matcher.len();
    if limit < len as u64 {
        return Err(SearchError::LimitTooSmall { limit, window: len });
    }
    let keep = context + len;
    let mut history: VecDeque<u8> = VecDeque::with_capacity(keep + 1);
    let mut scanner = matcher.scanner();
    let mut examined = 0u64;

    loop {
        let block = source.next_block()?;
        if block.is_empty() {
            break;
        }
        for (i, &d) in block.digits.iter().enumerate() {
            let pos = block.start + i as u64;
            if pos > limit {
                return Ok(not_found(limit, limit));
            }
            examined = pos;
            if history.len() == keep {
                history.pop_front();
            }
            history.push_back(d);
            if scanner.push(d) {
                let anchor = pos + 1 - len as u64;
                let split = history.len() - len;
                let window = history.range(split..).copied().collect();
                let before = history.range(..split).copied().collect();
                let mut after: Vec<u8> = block.digits[i + 1..]
                    .iter()
                    .take(context)
                    .copied()
                    .collect();
                while after.len() < context {
                    let more = source.next_block()?;
                    if more.is_empty() {
                        break;
                    }
                    let want = context - after.len();
                    after.extend(more.digits.iter().take(want));
                }
                return Ok(SearchResult {
                    found: true,
                    position: Some(anchor),
                    window: Some(DigitBlock {
                        base: matcher.base(),
                        start: anchor,
                        digits: window,
                    }),
                    context_before: before,
                    context_after: after,
                    digits_examined: pos,
                    limit,
                });
            }
        }
    }
    Ok(not_found(examined, limit))
}

fn not_found(examined: u64, limit: u64) -> SearchResult {
    SearchResult {
        found: false,
        position: None,
        window: None,
        context_before: Vec::new(),
        context_after: Vec::new(),
        digits_examined: examined,
        limit,
    }
}

/// First position of a single digit.
pub fn find_digit(
    source: &mut impl DigitSource,
    digit: u32,
    limit: u64,
) -> Result<SearchResult, SearchError> {
    let base = source.base();
    if digit >= base {
        return Err(SearchError::DigitOutOfRange { digit, base });
    }
    let matcher = CompiledMatcher::literal(&[digit as u8], base)?;
    find_first(source, &matcher, limit)
}

/// Anchor (absolute position) of the first match fully inside
/// `block[from..to]`, both 0-indexed offsets.
fn scan_range(
    block: &DigitBlock,
    matcher: &CompiledMatcher,
    from: usize,
    to: usize,
) -> Option<u64> {
    let mut scanner = matcher.scanner();
    let len = matcher.len();
    block.digits[from..to]
        .iter()
        .enumerate()
        .find(|&(_, &d)| scanner.push(d))
        .map(|(i, _)| block.start + (from + i + 1 - len) as u64)
}

fn result_from_block(
    block: &DigitBlock,
    matcher: &CompiledMatcher,
    anchor: Option<u64>,
    limit: u64,
    context: usize,
) -> SearchResult {
    let len = matcher.len();
    let scanned_end = block.end().min(limit + 1) - 1;
    let Some(anchor) = anchor else {
        return not_found(scanned_end, limit);
    };
    let off = (anchor - block.start) as usize;
    let before_from = off.saturating_sub(context);
    let after_to = (off + len + context).min(block.len());
    SearchResult {
        found: true,
        position: Some(anchor),
        window: block.slice(anchor, len),
        context_before: block.digits[before_from..off].to_vec(),
        context_after: block.digits[off + len..after_to].to_vec(),
        digits_examined: anchor + len as u64 - 1,
        limit,
    }
}

/// Sequential search over an in-memory block, reporting positions relative
/// to the block's own numbering.
pub fn find_first_in_block(
    block: &DigitBlock,
    matcher: &CompiledMatcher,
    limit: u64,
    context: usize,
) -> Result<SearchResult, SearchError> {
    check_block(block, matcher, limit)?;
    let to = block_scan_end(block, limit);
    let anchor = scan_range(block, matcher, 0, to);
    Ok(result_from_block(block, matcher, anchor, limit, context))
}

/// Splits the block into `chunks` ranges overlapping by L - 1 digits, scans
/// them in parallel and keeps the smallest anchor. Equivalent to
/// [`find_first_in_block`].
pub fn find_first_chunked(
    block: &DigitBlock,
    matcher: &CompiledMatcher,
    limit: u64,
    context: usize,
    chunks: usize,
) -> Result<SearchResult, SearchError> {
    check_block(block, matcher, limit)?;
    let to = block_scan_end(block, limit);
    let len = matcher.len();
    let chunks = chunks.max(1);
    let step = to.div_ceil(chunks).max(1);
    let anchor = (0..to)
        .step_by(step)
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|from| scan_range(block, matcher, from, (from + step + len - 1).min(to)))
        .min();
    Ok(result_from_block(block, matcher, anchor, limit, context))
}

fn check_block(
    block: &DigitBlock,
    matcher: &CompiledMatcher,
    limit: u64,
) -> Result<(), SearchError> {
    if block.base != matcher.base() {
        return Err(SearchError::BaseMismatch {
            stream: block.base,
            matcher: matcher.base(),
        });
    }
    if limit < matcher.len() as u64 {
        return Err(SearchError::LimitTooSmall {
            limit,
            window: matcher.len(),
        });
    }
    Ok(())
}

fn block_scan_end(block: &DigitBlock, limit: u64) -> usize {
    let last = limit.min(block.end() - 1);
    last.saturating_sub(block.start - 1).min(block.len() as u64) as usize
}
