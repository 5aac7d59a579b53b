//! Digits of constants in arbitrary bases, digital n-circles, and the search
//! for the first place such a circle appears in a digit expansion.
//!
//! * [`digits`]: fractional digits of pi, sqrt 2, log 2, e, rationals and
//!   constructed constants in any base from 2 to 256.
//! * [`raster`]: digitized circles and ellipses and their symmetries.
//! * [`search`]: first-occurrence search of (generalized) circle patterns,
//!   plus the expected-position and cost estimates.
//! * [`bbp`]: digit extraction at arbitrary positions from BBP-type series.
//! * [`normality`]: k-gram frequencies and chi-square diagnostics.

pub mod bbp;
pub mod digits;
pub mod normality;
pub mod raster;
pub mod search;
