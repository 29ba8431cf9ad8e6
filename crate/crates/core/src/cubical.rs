//! Cubical realization of pixel sets and local systems built from windows.
//!
//! Cells live in doubled coordinates: pixel `(r, c)` is the square
//! `(2r+1, 2c+1)`, its edges and vertices sit at the neighbouring even/odd
//! positions. A coordinate is odd exactly in the directions the cell extends.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::image_io::{BinaryImage, Pixel, PixelSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Cell {
    pub const fn new(row: u32, col: u32) -> Self {
        Cell { row, col }
    }

    pub fn square(p: Pixel) -> Self {
        Cell::new(2 * p.row as u32 + 1, 2 * p.col as u32 + 1)
    }

    pub fn dim(self) -> usize {
        (self.row & 1) as usize + (self.col & 1) as usize
    }

    /// The `2 * dim` codimension-one faces.
    pub fn boundary(self) -> impl Iterator<Item = Cell> {
        let mut out = [Cell::new(0, 0); 4];
        let mut n = 0;
        if self.row & 1 == 1 {
            out[n] = Cell::new(self.row - 1, self.col);
            out[n + 1] = Cell::new(self.row + 1, self.col);
            n += 2;
        }
        if self.col & 1 == 1 {
            out[n] = Cell::new(self.row, self.col - 1);
            out[n + 1] = Cell::new(self.row, self.col + 1);
            n += 2;
        }
        out.into_iter().take(n)
    }

    /// The cell itself and all of its faces.
    pub fn closure(self) -> impl Iterator<Item = Cell> {
        let rows = if self.row & 1 == 1 {
            self.row - 1..=self.row + 1
        } else {
            self.row..=self.row
        };
        let cols = if self.col & 1 == 1 {
            self.col - 1..=self.col + 1
        } else {
            self.col..=self.col
        };
        rows.flat_map(move |r| cols.clone().map(move |c| Cell::new(r, c)))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim(), self.row, self.col).cmp(&(other.dim(), other.row, other.col))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A face-closed set of cells in canonical order with its boundary incidence.
#[derive(Debug, Clone, Default)]
pub struct CubicalComplex {
    cells: Vec<Cell>,
    dim_start: [usize; 4],
    boundary: Vec<[u32; 4]>,
    // dense index over the doubled bounding box
    grid_rows: usize,
    grid_cols: usize,
    lookup: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl CubicalComplex {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, idx: usize) -> Cell {
        self.cells[idx]
    }

    /// Global index range of the cells of dimension `q`.
    pub fn dim_range(&self, q: usize) -> std::ops::Range<usize> {
        if q > 2 {
            return self.cells.len()..self.cells.len();
        }
        self.dim_start[q]..self.dim_start[q + 1]
    }

    pub fn count(&self, q: usize) -> usize {
        self.dim_range(q).len()
    }

    pub fn index_of(&self, cell: Cell) -> Option<usize> {
        let (r, c) = (cell.row as usize, cell.col as usize);
        if r >= self.grid_rows || c >= self.grid_cols {
            return None;
        }
        match self.lookup[r * self.grid_cols + c] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.index_of(cell).is_some()
    }

    /// Global indices of the boundary cells of cell `idx`.
    pub fn boundary_of(&self, idx: usize) -> &[u32] {
        &self.boundary[idx][..2 * self.cells[idx].dim()]
    }

    pub fn is_subcomplex_of(&self, other: &CubicalComplex) -> bool {
        self.cells.iter().all(|&c| other.contains(c))
    }

    fn from_sorted_cells(cells: Vec<Cell>) -> Self {
        let grid_rows = cells.iter().map(|c| c.row as usize + 1).max().unwrap_or(0);
        let grid_cols = cells.iter().map(|c| c.col as usize + 1).max().unwrap_or(0);
        let mut lookup = vec![ABSENT; grid_rows * grid_cols];
        for (i, c) in cells.iter().enumerate() {
            lookup[c.row as usize * grid_cols + c.col as usize] = i as u32;
        }
        let mut dim_start = [cells.len(); 4];
        for q in (0..=2).rev() {
            if let Some(first) = cells.iter().position(|c| c.dim() == q) {
                dim_start[q] = first;
            } else {
                dim_start[q] = dim_start[q + 1];
            }
        }
        let boundary = cells
            .iter()
            .map(|&c| {
                let mut b = [0u32; 4];
                for (slot, f) in b.iter_mut().zip(c.boundary()) {
                    *slot = lookup[f.row as usize * grid_cols + f.col as usize];
                    debug_assert_ne!(*slot, ABSENT, "complex is not face-closed");
                }
                b
            })
            .collect();
        CubicalComplex {
            cells,
            dim_start,
            boundary,
            grid_rows,
            grid_cols,
            lookup,
        }
    }
}

/// Closed unit squares of `pixels`, with all their edges and vertices.
pub fn realize<'a>(pixels: impl IntoIterator<Item = &'a Pixel>) -> CubicalComplex {
    let mut cells: Vec<Cell> = pixels
        .into_iter()
        .flat_map(|&p| Cell::square(p).closure())
        .collect();
    cells.sort_unstable();
    cells.dedup();
    CubicalComplex::from_sorted_cells(cells)
}

/// A window rectangle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowRect {
    top: i64,
    left: i64,
    size_rows: usize,
    size_cols: usize,
}

impl WindowRect {
    pub fn new(top: i64, left: i64, size_rows: usize, size_cols: usize) -> Result<Self> {
        if size_rows < 3 || size_cols < 3 {
            return Err(Error::InvalidWindow(format!(
                "window must be at least 3x3, got {size_rows}x{size_cols}"
            )));
        }
        Ok(WindowRect {
            top,
            left,
            size_rows,
            size_cols,
        })
    }

    pub fn square(top: i64, left: i64, n: usize) -> Result<Self> {
        WindowRect::new(top, left, n, n)
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn left(&self) -> i64 {
        self.left
    }

    pub fn size_rows(&self) -> usize {
        self.size_rows
    }

    pub fn size_cols(&self) -> usize {
        self.size_cols
    }

    fn bottom(&self) -> i64 {
        self.top + self.size_rows as i64 - 1
    }

    fn right(&self) -> i64 {
        self.left + self.size_cols as i64 - 1
    }

    pub fn contains(&self, p: Pixel) -> bool {
        let (r, c) = (p.row as i64, p.col as i64);
        r >= self.top && r <= self.bottom() && c >= self.left && c <= self.right()
    }

    /// Inside the window but off its outermost ring.
    pub fn interior_contains(&self, p: Pixel) -> bool {
        let (r, c) = (p.row as i64, p.col as i64);
        r > self.top && r < self.bottom() && c > self.left && c < self.right()
    }

    pub fn fits_in(&self, width: usize, height: usize) -> bool {
        self.top >= 0
            && self.left >= 0
            && self.bottom() < height as i64
            && self.right() < width as i64
    }

    /// Pixels of the interior, clipped to the non-negative quadrant.
    pub fn interior(&self) -> impl Iterator<Item = Pixel> + '_ {
        let rows = (self.top + 1).max(0)..self.bottom();
        let cols = (self.left + 1).max(0)..self.right();
        rows.flat_map(move |r| cols.clone().map(move |c| Pixel::new(r as usize, c as usize)))
    }
}

/// The outermost ring of pixels of `w`.
pub fn boundary_band(w: &WindowRect) -> PixelSet {
    let mut band = PixelSet::new();
    for r in w.top..=w.bottom() {
        for c in w.left..=w.right() {
            let on_ring = r == w.top || r == w.bottom() || c == w.left || c == w.right();
            if on_ring && r >= 0 && c >= 0 {
                band.insert(Pixel::new(r as usize, c as usize));
            }
        }
    }
    band
}

/// Fails if some pixel of `a` is within Chebyshev distance 1 of a pixel of
/// `b`, i.e. if their closed squares meet.
pub fn check_closure_disjoint(a: &PixelSet, b: &PixelSet) -> Result<()> {
    let (small, large, swapped) = if a.len() <= b.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    for &p in small {
        if let Some(q) = std::iter::once(p)
            .chain(p.neighbors8())
            .find(|q| large.contains(q))
        {
            let (x, y) = if swapped { (q, p) } else { (p, q) };
            return Err(Error::NotClosureDisjoint(x.row, x.col, y.row, y.col));
        }
    }
    Ok(())
}

/// A triad `(X, X1, X2)` with `X1`, `X2` inside `X` and disjoint closures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSystem {
    ambient: PixelSet,
    window: Option<WindowRect>,
    x1: PixelSet,
    x2: PixelSet,
}

impl LocalSystem {
    /// Validates an arbitrary triad.
    pub fn from_parts(ambient: PixelSet, x1: PixelSet, x2: PixelSet) -> Result<Self> {
        for p in x1.iter().chain(&x2) {
            if !ambient.contains(p) {
                return Err(Error::NotInAmbient(p.row, p.col));
            }
        }
        check_closure_disjoint(&x1, &x2)?;
        Ok(LocalSystem {
            ambient,
            window: None,
            x1,
            x2,
        })
    }

    pub fn ambient(&self) -> &PixelSet {
        &self.ambient
    }

    pub fn window(&self) -> Option<&WindowRect> {
        self.window.as_ref()
    }

    pub fn x1(&self) -> &PixelSet {
        &self.x1
    }

    pub fn x2(&self) -> &PixelSet {
        &self.x2
    }

    /// The triad `(X, X2, X1)`.
    pub fn swapped(&self) -> LocalSystem {
        LocalSystem {
            ambient: self.ambient.clone(),
            window: self.window,
            x1: self.x2.clone(),
            x2: self.x1.clone(),
        }
    }
}

/// `X1 = X ∩ R̂`, `X2 = X \ R` for the window `w`.
pub fn build_local_system(img: &BinaryImage, w: &WindowRect) -> Result<LocalSystem> {
    if !w.fits_in(img.width(), img.height()) {
        return Err(Error::WindowOutOfBounds {
            top: w.top,
            left: w.left,
            rows: w.size_rows,
            cols: w.size_cols,
            height: img.height(),
            width: img.width(),
        });
    }
    let mut x1 = PixelSet::new();
    let mut x2 = PixelSet::new();
    for &p in img.black() {
        if w.interior_contains(p) {
            x1.insert(p);
        } else if !w.contains(p) {
            x2.insert(p);
        }
    }
    Ok(LocalSystem {
        ambient: img.black().clone(),
        window: Some(*w),
        x1,
        x2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::cross_with_hole_image;
    use proptest::prelude::*;

    fn px(list: &[(usize, usize)]) -> PixelSet {
        list.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn realize_counts() {
        let empty = realize(&PixelSet::new());
        assert!(empty.is_empty());

        let one = realize(&px(&[(0, 0)]));
        assert_eq!((one.count(0), one.count(1), one.count(2)), (4, 4, 1));

        let diag = realize(&px(&[(0, 0), (1, 1)]));
        assert_eq!((diag.count(0), diag.count(1), diag.count(2)), (7, 8, 2));

        let pair = realize(&px(&[(0, 0), (0, 1)]));
        assert_eq!((pair.count(0), pair.count(1), pair.count(2)), (6, 7, 2));
    }

    #[test]
    fn cell_geometry() {
        let sq = Cell::square(Pixel::new(2, 3));
        assert_eq!(sq, Cell::new(5, 7));
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.boundary().count(), 4);
        assert_eq!(sq.closure().count(), 9);
        let edge = Cell::new(4, 7);
        assert_eq!(edge.dim(), 1);
        let b: Vec<_> = edge.boundary().collect();
        assert_eq!(b, vec![Cell::new(4, 6), Cell::new(4, 8)]);
        assert_eq!(Cell::new(4, 6).boundary().count(), 0);
    }

    #[test]
    fn canonical_order_is_dimension_first() {
        let c = realize(&px(&[(1, 1), (0, 0)]));
        let dims: Vec<usize> = c.cells().iter().map(|c| c.dim()).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        assert!(c.cells().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(c.dim_range(3), c.len()..c.len());
    }

    #[test]
    fn boundary_band_sizes() {
        let w = WindowRect::square(1, 1, 4).unwrap();
        let band = boundary_band(&w);
        let mut expected = PixelSet::new();
        for i in 1..=4 {
            expected.extend([Pixel::new(1, i), Pixel::new(4, i), Pixel::new(i, 1), Pixel::new(i, 4)]);
        }
        assert_eq!(band, expected);
        assert_eq!(band.len(), 12);

        let three = boundary_band(&WindowRect::square(0, 0, 3).unwrap());
        assert_eq!(three.len(), 8);
        assert!(!three.contains(&Pixel::new(1, 1)));

        assert_eq!(boundary_band(&WindowRect::new(0, 0, 3, 5).unwrap()).len(), 12);
    }

    #[test]
    fn small_windows_rejected() {
        assert!(matches!(WindowRect::new(0, 0, 2, 5), Err(Error::InvalidWindow(_))));
        assert!(matches!(WindowRect::square(0, 0, 1), Err(Error::InvalidWindow(_))));
    }

    #[test]
    fn cross_local_system() {
        let img = cross_with_hole_image();
        let w = WindowRect::square(1, 1, 4).unwrap();
        let ls = build_local_system(&img, &w).unwrap();
        assert_eq!(ls.x1(), &px(&[(2, 2), (2, 3), (3, 3)]));
        assert_eq!(
            ls.x2(),
            &px(&[(0, 3), (2, 0), (2, 5), (3, 0), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3)])
        );
    }

    #[test]
    fn degenerate_local_systems() {
        let white = BinaryImage::white(6, 6).unwrap();
        let w = WindowRect::square(1, 1, 4).unwrap();
        let ls = build_local_system(&white, &w).unwrap();
        assert!(ls.x1().is_empty() && ls.x2().is_empty());

        let all: Vec<Pixel> = (0..6).flat_map(|r| (0..6).map(move |c| Pixel::new(r, c))).collect();
        let black = BinaryImage::new(6, 6, all).unwrap();
        let ls = build_local_system(&black, &w).unwrap();
        assert_eq!((ls.x1().len(), ls.x2().len()), (4, 20));
    }

    #[test]
    fn window_must_fit() {
        let img = cross_with_hole_image();
        let w = WindowRect::square(3, 3, 4).unwrap();
        assert!(matches!(build_local_system(&img, &w), Err(Error::WindowOutOfBounds { .. })));
        let neg = WindowRect::square(-1, 0, 3).unwrap();
        assert!(build_local_system(&img, &neg).is_err());
        // touching the image border is allowed
        let edge = WindowRect::square(0, 0, 6).unwrap();
        assert!(build_local_system(&img, &edge).is_ok());
    }

    #[test]
    fn from_parts_validates() {
        let amb = px(&[(0, 0), (0, 1), (0, 2), (0, 3)]);
        assert!(LocalSystem::from_parts(amb.clone(), px(&[(0, 0)]), px(&[(0, 2), (0, 3)])).is_ok());
        assert!(matches!(
            LocalSystem::from_parts(amb.clone(), px(&[(0, 0)]), px(&[(0, 1)])),
            Err(Error::NotClosureDisjoint(0, 0, 0, 1))
        ));
        assert!(matches!(
            LocalSystem::from_parts(amb, px(&[(5, 5)]), PixelSet::new()),
            Err(Error::NotInAmbient(5, 5))
        ));
    }

    fn arb_pixels(n: usize) -> impl Strategy<Value = PixelSet> {
        proptest::collection::btree_set((0..n, 0..n).prop_map(|(r, c)| Pixel::new(r, c)), 0..n * n)
    }

    proptest! {
        #[test]
        fn boundary_of_boundary_vanishes(set in arb_pixels(6)) {
            let c = realize(&set);
            for idx in c.dim_range(2) {
                let mut count = std::collections::HashMap::new();
                for &e in c.boundary_of(idx) {
                    for &v in c.boundary_of(e as usize) {
                        *count.entry(v).or_insert(0u32) += 1;
                    }
                }
                prop_assert!(count.values().all(|n| n % 2 == 0));
            }
        }

        #[test]
        fn face_closed(set in arb_pixels(6)) {
            let c = realize(&set);
            for cell in c.cells() {
                for f in cell.boundary() {
                    prop_assert!(c.contains(f));
                }
            }
        }

        #[test]
        fn realize_is_monotone(a in arb_pixels(5), b in arb_pixels(5)) {
            let union: PixelSet = a.union(&b).copied().collect();
            prop_assert!(realize(&a).is_subcomplex_of(&realize(&union)));
        }

        #[test]
        fn local_parts_are_separated(
            set in arb_pixels(9),
            top in 0i64..6, left in 0i64..6, rows in 3usize..9, cols in 3usize..9,
        ) {
            let img = BinaryImage::new(9, 9, set).unwrap();
            let w = WindowRect::new(top, left, rows, cols).unwrap();
            prop_assume!(w.fits_in(9, 9));
            let ls = build_local_system(&img, &w).unwrap();
            for p in ls.x1() {
                for q in ls.x2() {
                    prop_assert!(p.chebyshev(*q) >= 2);
                }
            }
            prop_assert!(check_closure_disjoint(ls.x1(), ls.x2()).is_ok());
        }
    }
}
