//! Digital n-circles: circles digitized onto an n x n raster and flattened
//! row-major into n² bits.
//!
//! Two digitizations are provided. [`Scheme::NaiveCrossing`] marks every
//! unit square the circle passes through. [`Scheme::CenterBoundary`] marks
//! the pixels whose centers lie inside the circle and that touch the outside
//! (or the raster edge) through one of their four sides.
//!
//! All geometric decisions are made in integer arithmetic on coordinates
//! scaled by a common denominator; no floating point is involved.

mod chessboard;
mod symmetry;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chessboard::{
    chessboard_crossed_cells, chessboard_crossed_cells_brute, chessboard_exterior_cells_brute,
    chessboard_interior_cells, chessboard_interior_cells_brute, classify_chessboard_cell,
    interior_row_count, CellClass,
};
pub use symmetry::{
    check_symmetries, extract_octant, octant_len, reconstruct_from_octant, smallest_octant_failure,
    SymmetryReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RasterError {
    #[error("raster size must be at least 1")]
    InvalidSize,
    #[error("n = {0} must be odd and at least 3")]
    EvenOrTooSmallN(usize),
    #[error("ellipse with semi-axes {a} x {b} does not fit a {width} x {height} raster")]
    EllipseOutOfRaster {
        a: String,
        b: String,
        width: usize,
        height: usize,
    },
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("pattern lacks the symmetry needed to extract an octant")]
    AsymmetricPattern,
    #[error("octant has {got} cells, expected {expected}")]
    WrongOctantLength { expected: usize, got: usize },
    #[error("pattern needs {expected} bits, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("raster bits must be 0 or 1, found {0}")]
    InvalidBit(u8),
    #[error("digit sets must be non-empty")]
    EmptyDigitSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    NaiveCrossing,
    CenterBoundary,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::NaiveCrossing => "naive",
            Scheme::CenterBoundary => "center",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" | "naive-crossing" => Ok(Scheme::NaiveCrossing),
            "center" | "center-boundary" => Ok(Scheme::CenterBoundary),
            other => Err(format!(
                "unknown scheme {other:?} (expected naive or center)"
            )),
        }
    }
}

/// An n x n bit raster, row-major, top row first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RasterPattern {
    n: usize,
    /// `None` for patterns that were not produced by a rasterizer.
    scheme: Option<Scheme>,
    bits: Vec<u8>,
}

impl RasterPattern {
    pub fn from_bits(n: usize, bits: Vec<u8>) -> Result<Self, RasterError> {
        if n == 0 {
            return Err(RasterError::InvalidSize);
        }
        if bits.len() != n * n {
            return Err(RasterError::WrongLength {
                expected: n * n,
                got: bits.len(),
            });
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(RasterError::InvalidBit(b));
        }
        Ok(RasterPattern {
            n,
            scheme: None,
            bits,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scheme(&self) -> Option<Scheme> {
        self.scheme
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Bit at 1-indexed row `r`, column `c`.
    pub fn bit(&self, r: usize, c: usize) -> u8 {
        self.bits[(r - 1) * self.n + (c - 1)]
    }

    /// Number of set bits.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Flat digit string, e.g. `111101111`.
    pub fn flat(&self) -> String {
        self.bits.iter().map(|&b| char::from(b'0' + b)).collect()
    }

    /// One line per row, `#` for 1 and `.` for 0.
    pub fn ascii(&self) -> String {
        render_rows(&self.bits, self.n, self.n, false)
    }

    /// As [`RasterPattern::ascii`] with a one-pixel frame of zeros.
    pub fn ascii_framed(&self) -> String {
        render_rows(&self.bits, self.n, self.n, true)
    }
}

/// A width x height bit raster (used for ellipses).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<u8>,
}

impl Raster {
    pub fn ascii(&self) -> String {
        render_rows(&self.bits, self.width, self.height, false)
    }
}

fn render_rows(bits: &[u8], width: usize, height: usize, frame: bool) -> String {
    let glyph = |b: u8| if b == 1 { '#' } else { '.' };
    let mut out = String::new();
    let blank: String = ".".repeat(width + 2);
    if frame {
        out.push_str(&blank);
        out.push('\n');
    }
    for row in bits.chunks(width).take(height) {
        if frame {
            out.push('.');
        }
        out.extend(row.iter().map(|&b| glyph(b)));
        if frame {
            out.push('.');
        }
        out.push('\n');
    }
    if frame {
        out.push_str(&blank);
        out.push('\n');
    }
    out
}

/// A circle of rational radius centered on an n x n raster, in integer
/// coordinates where one pixel spans `unit`.
#[derive(Debug, Clone, Copy)]
struct ScaledCircle {
    unit: i128,
    center: i128,
    radius_sq: i128,
}

impl ScaledCircle {
    /// Radius `r` centered at `(n/2, n/2)`.
    fn new(n: usize, r: Ratio<i64>) -> Self {
        let (p, q) = (i128::from(*r.numer()), i128::from(*r.denom()));
        ScaledCircle {
            unit: 2 * q,
            center: n as i128 * q,
            radius_sq: 4 * p * p,
        }
    }

    /// Squared distances from the center to the nearest and farthest points
    /// of the closed unit square with corner `(x0, y0)`.
    fn square_extent(&self, x0: usize, y0: usize) -> (i128, i128) {
        let axis = |lo: usize| {
            let a = lo as i128 * self.unit - self.center;
            let b = a + self.unit;
            let near = if a > 0 {
                a
            } else if b < 0 {
                -b
            } else {
                0
            };
            (near, a.abs().max(b.abs()))
        };
        let (nx, fx) = axis(x0);
        let (ny, fy) = axis(y0);
        (nx * nx + ny * ny, fx * fx + fy * fy)
    }

    fn crosses_square(&self, x0: usize, y0: usize) -> bool {
        let (near, far) = self.square_extent(x0, y0);
        near <= self.radius_sq && self.radius_sq <= far
    }

    /// Whether the center of pixel `(x, y)`, 1-indexed, is in the closed disk.
    fn contains_pixel_center(&self, x: usize, y: usize) -> bool {
        let d = |v: usize| (2 * v as i128 - 1) * self.unit / 2 - self.center;
        let (dx, dy) = (d(x), d(y));
        dx * dx + dy * dy <= self.radius_sq
    }
}

fn check_radius(r: Ratio<i64>) -> Result<(), RasterError> {
    if *r.numer() <= 0 {
        Err(RasterError::NonPositiveRadius)
    } else {
        Ok(())
    }
}

/// Marks every pixel whose closed square meets the circle of diameter `n`.
pub fn rasterize_naive(n: usize) -> Result<RasterPattern, RasterError> {
    if n == 0 {
        return Err(RasterError::InvalidSize);
    }
    if n == 1 {
        return Ok(RasterPattern {
            n,
            scheme: Some(Scheme::NaiveCrossing),
            bits: vec![1],
        });
    }
    let mut p = rasterize_naive_with_radius(n, Ratio::new(n as i64, 2))?;
    p.scheme = Some(Scheme::NaiveCrossing);
    Ok(p)
}

/// Naive crossing test for an arbitrary radius centered on the raster.
pub fn rasterize_naive_with_radius(
    n: usize,
    radius: Ratio<i64>,
) -> Result<RasterPattern, RasterError> {
    if n == 0 {
        return Err(RasterError::InvalidSize);
    }
    check_radius(radius)?;
    let circle = ScaledCircle::new(n, radius);
    let bits = (0..n)
        .flat_map(|row| (0..n).map(move |col| (row, col)))
        .map(|(row, col)| u8::from(circle.crosses_square(col, row)))
        .collect();
    Ok(RasterPattern {
        n,
        scheme: None,
        bits,
    })
}

/// Boundary ring of the pixels whose centers lie in the closed disk of
/// diameter `n`.
pub fn rasterize_center(n: usize) -> Result<RasterPattern, RasterError> {
    let mut p = rasterize_center_with_radius(n, Ratio::new(n as i64, 2))?;
    p.scheme = Some(Scheme::CenterBoundary);
    Ok(p)
}

/// Center-boundary scheme with an explicit radius, e.g. `(n-1)/2` for the
/// diameter `n - 1` variant.
pub fn rasterize_center_with_radius(
    n: usize,
    radius: Ratio<i64>,
) -> Result<RasterPattern, RasterError> {
    if n == 0 {
        return Err(RasterError::InvalidSize);
    }
    check_radius(radius)?;
    let circle = ScaledCircle::new(n, radius);
    let inside: Vec<bool> = (1..=n)
        .flat_map(|y| (1..=n).map(move |x| (x, y)))
        .map(|(x, y)| circle.contains_pixel_center(x, y))
        .collect();
    Ok(RasterPattern {
        n,
        scheme: None,
        bits: boundary_ring(&inside, n, n),
    })
}

/// Rasterizes with the given scheme at its default radius.
pub fn rasterize(n: usize, scheme: Scheme) -> Result<RasterPattern, RasterError> {
    match scheme {
        Scheme::NaiveCrossing => rasterize_naive(n),
        Scheme::CenterBoundary => rasterize_center(n),
    }
}

/// Inside cells that have an outside 4-neighbor or sit on the raster edge.
fn boundary_ring(inside: &[bool], width: usize, height: usize) -> Vec<u8> {
    let at = |x: isize, y: isize| -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < width
            && (y as usize) < height
            && inside[y as usize * width + x as usize]
    };
    let mut bits = vec![0u8; width * height];
    for y in 0..height as isize {
        for x in 0..width as isize {
            if !at(x, y) {
                continue;
            }
            let exposed = !at(x - 1, y) || !at(x + 1, y) || !at(x, y - 1) || !at(x, y + 1);
            bits[y as usize * width + x as usize] = u8::from(exposed);
        }
    }
    bits
}

/// Center-boundary digitization of the axis-aligned ellipse with semi-axes
/// `a` (horizontal) and `b` (vertical) centered on a `width x height` raster.
pub fn rasterize_ellipse(
    a: Ratio<i64>,
    b: Ratio<i64>,
    width: usize,
    height: usize,
) -> Result<Raster, RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::InvalidSize);
    }
    check_radius(a)?;
    check_radius(b)?;
    if a * 2 > Ratio::from_integer(width as i64) || b * 2 > Ratio::from_integer(height as i64) {
        return Err(RasterError::EllipseOutOfRaster {
            a: a.to_string(),
            b: b.to_string(),
            width,
            height,
        });
    }
    let (pa, qa) = (i128::from(*a.numer()), i128::from(*a.denom()));
    let (pb, qb) = (i128::from(*b.numer()), i128::from(*b.denom()));
    // With X = 2x - 1 - width and Y = 2y - 1 - height the test
    // (X/2a)^2 + (Y/2b)^2 <= 1 becomes integer-only after clearing denominators.
    let wx = qa * qa * pb * pb;
    let wy = qb * qb * pa * pa;
    let rhs = 4 * pa * pa * pb * pb;
    let inside: Vec<bool> = (1..=height)
        .flat_map(|y| (1..=width).map(move |x| (x, y)))
        .map(|(x, y)| {
            let dx = 2 * x as i128 - 1 - width as i128;
            let dy = 2 * y as i128 - 1 - height as i128;
            dx * dx * wx + dy * dy * wy <= rhs
        })
        .collect();
    Ok(Raster {
        width,
        height,
        bits: boundary_ring(&inside, width, height),
    })
}

/// Whether the naive-scheme circle of diameter `n` meets the corner pixel.
pub fn corner_crossed(n: usize) -> bool {
    if n <= 1 {
        return true;
    }
    ScaledCircle::new(n, Ratio::new(n as i64, 2)).crosses_square(0, 0)
}

/// Open interval of radii giving a single centered 1 in the top row under
/// the naive scheme. The upper end is irrational in general and is returned
/// as its square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadiusBounds {
    pub lower: Ratio<i64>,
    pub upper_squared: Ratio<i64>,
}

impl RadiusBounds {
    /// Whether `lower < r < sqrt(upper_squared)`.
    pub fn contains(&self, r: Ratio<i64>) -> bool {
        r > self.lower && r * r < self.upper_squared
    }
}

pub fn centered_one_radius_bounds(n: usize) -> Result<RadiusBounds, RasterError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(RasterError::EvenOrTooSmallN(n));
    }
    let lower = Ratio::new(n as i64, 2) - 1;
    Ok(RadiusBounds {
        lower,
        upper_squared: lower * lower + Ratio::new(1, 4),
    })
}

/// Which circle/background overlap a generalized pattern has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degeneracy {
    /// P and Q are disjoint.
    None,
    /// P and Q share digits but neither contains the other.
    Overlapping,
    /// P is a subset of Q (including P = Q).
    CircleWithinBackground,
    /// Q is a strict subset of P.
    BackgroundWithinCircle,
}

/// A circle traced by digits from `circle_set` in a field of digits from
/// `background_set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedPattern {
    shape: RasterPattern,
    circle_set: BTreeSet<u8>,
    background_set: BTreeSet<u8>,
    degeneracy: Degeneracy,
}

impl GeneralizedPattern {
    pub fn new(
        shape: RasterPattern,
        circle_set: BTreeSet<u8>,
        background_set: BTreeSet<u8>,
    ) -> Result<Self, RasterError> {
        if circle_set.is_empty() || background_set.is_empty() {
            return Err(RasterError::EmptyDigitSet);
        }
        let degeneracy = if circle_set.is_disjoint(&background_set) {
            Degeneracy::None
        } else if circle_set.is_subset(&background_set) {
            Degeneracy::CircleWithinBackground
        } else if background_set.is_subset(&circle_set) {
            Degeneracy::BackgroundWithinCircle
        } else {
            Degeneracy::Overlapping
        };
        Ok(GeneralizedPattern {
            shape,
            circle_set,
            background_set,
            degeneracy,
        })
    }

    /// The plain pattern: circle {1} on background {0}.
    pub fn plain(shape: RasterPattern) -> Self {
        GeneralizedPattern::new(shape, BTreeSet::from([1]), BTreeSet::from([0]))
            .expect("non-empty sets")
    }

    pub fn shape(&self) -> &RasterPattern {
        &self.shape
    }

    pub fn circle_set(&self) -> &BTreeSet<u8> {
        &self.circle_set
    }

    pub fn background_set(&self) -> &BTreeSet<u8> {
        &self.background_set
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.degeneracy
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy != Degeneracy::None
    }

    /// Largest digit appearing in either set.
    pub fn max_digit(&self) -> u8 {
        let p = self.circle_set.iter().next_back().copied().unwrap_or(0);
        let q = self.background_set.iter().next_back().copied().unwrap_or(0);
        p.max(q)
    }

    /// Whether a concrete window of n² digits belongs to the class.
    pub fn admits(&self, window: &[u8]) -> bool {
        window.len() == self.shape.bits.len()
            && window.iter().zip(&self.shape.bits).all(|(d, &bit)| {
                if bit == 1 {
                    self.circle_set.contains(d)
                } else {
                    self.background_set.contains(d)
                }
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(n: usize, bits: &[u8]) -> Vec<u8> {
        assert_eq!(bits.len(), n * n);
        bits.to_vec()
    }

    /// Direct evaluation of the pixel-center inequality with rationals,
    /// independent of the scaled-integer path.
    fn center_inside_oracle(
        x: i64,
        y: i64,
        cx: Ratio<i64>,
        cy: Ratio<i64>,
        a: Ratio<i64>,
        b: Ratio<i64>,
    ) -> bool {
        let half = Ratio::new(1, 2);
        let dx = (Ratio::from_integer(x) - half - cx) / a;
        let dy = (Ratio::from_integer(y) - half - cy) / b;
        dx * dx + dy * dy <= Ratio::from_integer(1)
    }

    fn ring_oracle(inside: &dyn Fn(i64, i64) -> bool, w: i64, h: i64) -> Vec<u8> {
        let mut out = Vec::new();
        for y in 1..=h {
            for x in 1..=w {
                let inn = |x: i64, y: i64| x >= 1 && y >= 1 && x <= w && y <= h && inside(x, y);
                let bit = inn(x, y)
                    && (!inn(x - 1, y) || !inn(x + 1, y) || !inn(x, y - 1) || !inn(x, y + 1));
                out.push(u8::from(bit));
            }
        }
        out
    }

    #[test]
    fn naive_small_circles_match_printed_strings() {
        assert_eq!(rasterize_naive(1).unwrap().bits(), &[1]);
        assert_eq!(rasterize_naive(2).unwrap().bits(), &[1, 1, 1, 1]);
        assert_eq!(
            rasterize_naive(3).unwrap().bits(),
            &pattern(3, &[1, 1, 1, 1, 0, 1, 1, 1, 1])[..]
        );
    }

    #[test]
    fn naive_seven_has_empty_corners() {
        let p = rasterize_naive(7).unwrap();
        for (r, c) in [(1, 1), (1, 7), (7, 1), (7, 7)] {
            assert_eq!(p.bit(r, c), 0);
        }
        assert_eq!(rasterize_naive(6).unwrap().bit(1, 1), 1);
    }

    #[test]
    fn center_scheme_small_cases() {
        assert_eq!(rasterize_center(1).unwrap().bits(), &[1]);
        assert_eq!(rasterize_center(2).unwrap().bits(), &[1, 1, 1, 1]);
        assert_eq!(
            rasterize_center(3).unwrap().bits(),
            &[1, 1, 1, 1, 0, 1, 1, 1, 1]
        );
    }

    #[test]
    fn center_scheme_four_against_oracle() {
        let half = Ratio::new(2, 1);
        let inside = |x: i64, y: i64| center_inside_oracle(x, y, half, half, half, half);
        let oracle = ring_oracle(&inside, 4, 4);
        assert_eq!(
            oracle,
            pattern(4, &[0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0])
        );
        assert_eq!(rasterize_center(4).unwrap().bits(), &oracle[..]);
    }

    #[test]
    fn center_scheme_matches_oracle_up_to_40() {
        for n in 1..=40i64 {
            let c = Ratio::new(n, 2);
            let inside = |x: i64, y: i64| center_inside_oracle(x, y, c, c, c, c);
            let oracle = ring_oracle(&inside, n, n);
            assert_eq!(
                rasterize_center(n as usize).unwrap().bits(),
                &oracle[..],
                "n={n}"
            );
        }
    }

    #[test]
    fn ellipse_matches_circle_when_axes_equal() {
        for n in 1..=30usize {
            let r = Ratio::new(n as i64, 2);
            let e = rasterize_ellipse(r, r, n, n).unwrap();
            assert_eq!(e.bits, rasterize_center(n).unwrap().bits);
        }
    }

    #[test]
    fn ellipse_four_by_three() {
        let (a, b) = (Ratio::from_integer(4), Ratio::from_integer(3));
        let inside = |x: i64, y: i64| {
            center_inside_oracle(x, y, Ratio::from_integer(4), Ratio::from_integer(3), a, b)
        };
        let oracle = ring_oracle(&inside, 8, 6);
        let e = rasterize_ellipse(a, b, 8, 6).unwrap();
        assert_eq!(e.bits, oracle);
        assert_eq!(
            e.ascii(),
            "..####..\n.#....#.\n#......#\n#......#\n.#....#.\n..####..\n"
        );
    }

    #[test]
    fn ellipse_unit_and_out_of_raster() {
        let h = Ratio::new(1, 2);
        assert_eq!(rasterize_ellipse(h, h, 1, 1).unwrap().bits, vec![1]);
        assert!(matches!(
            rasterize_ellipse(Ratio::from_integer(5), Ratio::from_integer(3), 8, 6),
            Err(RasterError::EllipseOutOfRaster { .. })
        ));
    }

    #[test]
    fn corner_threshold() {
        assert!(corner_crossed(1));
        for n in 2..=6 {
            assert!(corner_crossed(n), "n={n}");
        }
        for n in 7..=64 {
            assert!(!corner_crossed(n), "n={n}");
        }
    }

    #[test]
    fn radius_bounds_instances() {
        let b3 = centered_one_radius_bounds(3).unwrap();
        assert_eq!(b3.lower, Ratio::new(1, 2));
        assert_eq!(b3.upper_squared, Ratio::new(1, 2));
        let b5 = centered_one_radius_bounds(5).unwrap();
        assert_eq!(b5.lower, Ratio::new(3, 2));
        assert_eq!(b5.upper_squared, Ratio::new(10, 4));
        assert!(centered_one_radius_bounds(4).is_err());
        assert!(centered_one_radius_bounds(1).is_err());
    }

    #[test]
    fn radius_inside_bounds_gives_single_top_one() {
        let r = Ratio::new(155, 100);
        assert!(centered_one_radius_bounds(5).unwrap().contains(r));
        let p = rasterize_naive_with_radius(5, r).unwrap();
        assert_eq!(&p.bits()[..5], &[0, 0, 1, 0, 0]);
        // just above the upper bound the neighbors light up
        let p = rasterize_naive_with_radius(5, Ratio::new(159, 100)).unwrap();
        assert_eq!(&p.bits()[..5], &[0, 1, 1, 1, 0]);
    }

    #[test]
    fn default_radius_never_gives_single_top_one() {
        for n in (3..=51).step_by(2) {
            let p = rasterize_naive(n).unwrap();
            let top = &p.bits()[..n];
            assert!(top.iter().filter(|&&b| b == 1).count() > 1, "n={n}");
        }
    }

    #[test]
    fn rendering() {
        let p = rasterize_naive(3).unwrap();
        assert_eq!(p.flat(), "111101111");
        assert_eq!(p.ascii(), "###\n#.#\n###\n");
        assert_eq!(
            rasterize_naive(1).unwrap().ascii_framed(),
            "...\n.#.\n...\n"
        );
    }

    #[test]
    fn generalized_degeneracy_flags() {
        let shape = rasterize_naive(3).unwrap();
        let g = |p: &[u8], q: &[u8]| {
            GeneralizedPattern::new(
                shape.clone(),
                p.iter().copied().collect(),
                q.iter().copied().collect(),
            )
            .unwrap()
            .degeneracy()
        };
        assert_eq!(g(&[1, 7], &[0, 3]), Degeneracy::None);
        assert_eq!(g(&[1], &[0, 1]), Degeneracy::CircleWithinBackground);
        assert_eq!(g(&[1, 2], &[1, 2]), Degeneracy::CircleWithinBackground);
        assert_eq!(g(&[0, 1], &[1]), Degeneracy::BackgroundWithinCircle);
        assert_eq!(g(&[1, 2], &[2, 3]), Degeneracy::Overlapping);
        assert_eq!(
            GeneralizedPattern::new(shape, BTreeSet::new(), BTreeSet::from([0])),
            Err(RasterError::EmptyDigitSet)
        );
    }

    #[test]
    fn generalized_admits_both_printed_examples() {
        let g = GeneralizedPattern::new(
            rasterize_naive(3).unwrap(),
            BTreeSet::from([1, 7]),
            BTreeSet::from([0, 3]),
        )
        .unwrap();
        assert!(g.admits(&[1, 1, 7, 1, 3, 1, 7, 1, 7]));
        assert!(g.admits(&[7, 1, 7, 7, 0, 1, 1, 1, 7]));
        assert!(!g.admits(&[7, 1, 7, 7, 1, 1, 1, 1, 7]));
        assert_eq!(g.max_digit(), 7);
    }

    #[test]
    fn from_bits_validation() {
        assert!(RasterPattern::from_bits(2, vec![1, 0, 0]).is_err());
        assert_eq!(
            RasterPattern::from_bits(1, vec![2]),
            Err(RasterError::InvalidBit(2))
        );
        assert_eq!(
            RasterPattern::from_bits(0, vec![]),
            Err(RasterError::InvalidSize)
        );
    }
}
