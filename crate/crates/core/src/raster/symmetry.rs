//! The dihedral symmetries of a digital circle and its octant encoding.

use serde::{Deserialize, Serialize};

use super::{rasterize, RasterError, RasterPattern, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// Bit i equals bit n² + 1 - i.
    pub palindrome: bool,
    /// bit(r, c) = bit(c, r).
    pub transpose: bool,
    /// bit(r, c) = bit(r, n + 1 - c).
    pub row_mirror: bool,
    /// bit(r, c) = bit(n + 1 - r, c).
    pub column_mirror: bool,
}

impl SymmetryReport {
    pub fn all(&self) -> bool {
        self.palindrome && self.transpose && self.row_mirror && self.column_mirror
    }
}

pub fn check_symmetries(pattern: &RasterPattern) -> SymmetryReport {
    let n = pattern.n();
    let bits = pattern.bits();
    let cells = || (1..=n).flat_map(move |r| (1..=n).map(move |c| (r, c)));
    SymmetryReport {
        palindrome: bits.iter().eq(bits.iter().rev()),
        transpose: cells().all(|(r, c)| pattern.bit(r, c) == pattern.bit(c, r)),
        row_mirror: cells().all(|(r, c)| pattern.bit(r, c) == pattern.bit(r, n + 1 - c)),
        column_mirror: cells().all(|(r, c)| pattern.bit(r, c) == pattern.bit(n + 1 - r, c)),
    }
}

/// Cells in the fundamental triangle `r <= c <= ceil(n/2)`.
pub fn octant_len(n: usize) -> usize {
    let m = n.div_ceil(2);
    m * (m + 1) / 2
}

fn octant_cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    let m = n.div_ceil(2);
    (1..=m).flat_map(move |r| (r..=m).map(move |c| (r, c)))
}

/// Index in the octant of the orbit representative of cell `(r, c)`.
fn octant_index(n: usize, r: usize, c: usize) -> usize {
    let m = n.div_ceil(2);
    let fold = |v: usize| v.min(n + 1 - v);
    let (a, b) = (fold(r), fold(c));
    let (row, col) = (a.min(b), a.max(b));
    // rows before `row` hold m, m-1, ..., m-row+2 cells
    let before: usize = (1..row).map(|i| m + 1 - i).sum();
    before + (col - row)
}

/// The bits of the fundamental triangle, row-major.
pub fn extract_octant(pattern: &RasterPattern) -> Result<Vec<u8>, RasterError> {
    if !check_symmetries(pattern).all() {
        return Err(RasterError::AsymmetricPattern);
    }
    Ok(octant_cells(pattern.n())
        .map(|(r, c)| pattern.bit(r, c))
        .collect())
}

/// Rebuilds the full raster from its octant by the eight dihedral maps.
pub fn reconstruct_from_octant(octant: &[u8], n: usize) -> Result<RasterPattern, RasterError> {
    if n == 0 {
        return Err(RasterError::InvalidSize);
    }
    let expected = octant_len(n);
    if octant.len() != expected {
        return Err(RasterError::WrongOctantLength {
            expected,
            got: octant.len(),
        });
    }
    let bits = (1..=n)
        .flat_map(|r| (1..=n).map(move |c| (r, c)))
        .map(|(r, c)| octant[octant_index(n, r, c)])
        .collect();
    RasterPattern::from_bits(n, bits)
}

/// The smallest `n <= max_n` whose octant round trip fails for `scheme`, or
/// `None` when every size reconstructs.
pub fn smallest_octant_failure(scheme: Scheme, max_n: usize) -> Option<usize> {
    (1..=max_n).find(|&n| {
        let pattern = rasterize(n, scheme).expect("n >= 1");
        match extract_octant(&pattern) {
            Ok(octant) => reconstruct_from_octant(&octant, n)
                .map(|p| p.bits() != pattern.bits())
                .unwrap_or(true),
            Err(_) => true,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{rasterize_center, rasterize_naive};
    use proptest::prelude::*;

    #[test]
    fn naive_three_is_fully_symmetric() {
        assert!(check_symmetries(&rasterize_naive(3).unwrap()).all());
    }

    #[test]
    fn lone_corner_is_only_transpose_symmetric() {
        let p = RasterPattern::from_bits(2, vec![1, 0, 0, 0]).unwrap();
        let s = check_symmetries(&p);
        assert!(!s.palindrome);
        assert!(s.transpose);
        assert!(!s.row_mirror);
        assert!(!s.column_mirror);
        assert_eq!(extract_octant(&p), Err(RasterError::AsymmetricPattern));
    }

    #[test]
    fn single_bit_patterns_are_symmetric() {
        for b in [0, 1] {
            let p = RasterPattern::from_bits(1, vec![b]).unwrap();
            assert!(check_symmetries(&p).all());
        }
    }

    #[test]
    fn octants_of_small_naive_circles() {
        assert_eq!(
            extract_octant(&rasterize_naive(2).unwrap()).unwrap(),
            vec![1]
        );
        assert_eq!(
            extract_octant(&rasterize_naive(3).unwrap()).unwrap(),
            vec![1, 1, 0]
        );
    }

    #[test]
    fn round_trips() {
        for p in [rasterize_naive(5).unwrap(), rasterize_center(8).unwrap()] {
            let oct = extract_octant(&p).unwrap();
            assert_eq!(
                reconstruct_from_octant(&oct, p.n()).unwrap().bits(),
                p.bits()
            );
        }
        let zero = reconstruct_from_octant(&vec![0; octant_len(4)], 4).unwrap();
        assert_eq!(zero.bits(), &[0; 16]);
    }

    #[test]
    fn wrong_octant_length() {
        assert_eq!(
            reconstruct_from_octant(&[1, 0], 4),
            Err(RasterError::WrongOctantLength {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn no_octant_failure_up_to_64() {
        assert_eq!(smallest_octant_failure(Scheme::NaiveCrossing, 64), None);
        assert_eq!(smallest_octant_failure(Scheme::CenterBoundary, 64), None);
    }

    #[test]
    fn octant_index_covers_each_slot() {
        for n in 1..=20 {
            let mut seen = vec![false; octant_len(n)];
            for (r, c) in octant_cells(n) {
                seen[octant_index(n, r, c)] = true;
            }
            assert!(seen.iter().all(|&s| s), "n={n}");
        }
    }

    proptest! {
        #[test]
        fn reconstruction_is_symmetric_and_inverts_extraction(n in 1usize..40, seed in any::<u64>()) {
            let len = octant_len(n);
            let octant: Vec<u8> = (0..len).map(|i| ((seed >> (i % 64)) & 1) as u8).collect();
            let p = reconstruct_from_octant(&octant, n).unwrap();
            prop_assert!(check_symmetries(&p).all());
            prop_assert_eq!(extract_octant(&p).unwrap(), octant);
        }
    }
}
