//! A circle of diameter 2n - 1 drawn centered on a 2n x 2n chessboard.
//!
//! In doubled coordinates the board spans [0, 4n], the center is (2n, 2n)
//! and the radius is 2n - 1. Since r² = n² - n + 1/4 is never an integer the
//! circle passes through no lattice point, so every cell is exactly one of
//! crossed, interior or exterior.

use num_integer::Roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    Crossed,
    Interior,
    Exterior,
}

/// Classifies cell `(i, j)`, 0-indexed from a board corner, by its nearest
/// and farthest points.
pub fn classify_chessboard_cell(n: u64, i: u64, j: u64) -> CellClass {
    let center = 2 * n as i128;
    let r_sq = (2 * n as i128 - 1).pow(2);
    let axis = |k: u64| {
        let a = 2 * k as i128 - center;
        let b = a + 2;
        let near = if a > 0 {
            a
        } else if b < 0 {
            -b
        } else {
            0
        };
        (near, a.abs().max(b.abs()))
    };
    let (nx, fx) = axis(i);
    let (ny, fy) = axis(j);
    let near = nx * nx + ny * ny;
    let far = fx * fx + fy * fy;
    if far < r_sq {
        CellClass::Interior
    } else if near > r_sq {
        CellClass::Exterior
    } else {
        CellClass::Crossed
    }
}

fn count_brute(n: u64, class: CellClass) -> u64 {
    let side = 2 * n;
    (0..side)
        .flat_map(|i| (0..side).map(move |j| (i, j)))
        .filter(|&(i, j)| classify_chessboard_cell(n, i, j) == class)
        .count() as u64
}

/// Cells containing an arc of the circle, counted from its lattice-line
/// crossings: each vertical or horizontal grid line closer to the center than
/// the radius is cut twice, and a closed curve through no lattice point
/// visits one new cell per crossing.
pub fn chessboard_crossed_cells(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    // grid line k (doubled coordinate 2k) is cut iff |2k - 2n| < 2n - 1
    let cut_lines = (0..=2 * n)
        .filter(|&k| (2 * k).abs_diff(2 * n) < 2 * n - 1)
        .count() as u64;
    // the same count applies to vertical and horizontal lines
    2 * (2 * cut_lines)
}

/// Interior cells in quadrant row `k` (1-indexed outwards from the center):
/// far corner (k, j) is strictly inside iff k² + j² < (n - 1/2)², i.e.
/// k² + j² <= n² - n.
pub fn interior_row_count(n: u64, k: u64) -> u64 {
    let budget = (n * n - n).checked_sub(k * k);
    budget.map_or(0, |b| b.sqrt())
}

/// Cells entirely inside the circle: four quadrants of
/// `sum_{k=1}^{n-1} interior_row_count(n, k)`.
pub fn chessboard_interior_cells(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    4 * (1..n).map(|k| interior_row_count(n, k)).sum::<u64>()
}

pub fn chessboard_crossed_cells_brute(n: u64) -> u64 {
    count_brute(n, CellClass::Crossed)
}

pub fn chessboard_interior_cells_brute(n: u64) -> u64 {
    count_brute(n, CellClass::Interior)
}

pub fn chessboard_exterior_cells_brute(n: u64) -> u64 {
    count_brute(n, CellClass::Exterior)
}
