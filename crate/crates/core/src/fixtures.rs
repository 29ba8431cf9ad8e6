//! Small reference images used by the tests.

use crate::image_io::{parse_grayscale, BinaryImage, GrayscaleImage};

/// 6x6 grayscale grid whose sub-level sets open with the border ring at
/// level 0 and split the enclosed hole in two at level 2.
pub const GRAYSCALE_SPLIT_GRID: &str = "\
0 0 0 0 0 0
0 1 3 3 3 0
0 2 1 2 3 0
0 3 2 1 2 0
0 3 3 3 2 0
0 0 0 0 0 0
";

/// 6x6 binary image with a single hole; the 4x4 window at (1,1) cuts it
/// into three outer components and one inner one.
pub const CROSS_WITH_HOLE: &str = "\
...#..
...#..
######
#..#..
#..#..
####..
";

/// 9x9 binary image with one L-shaped hole.
pub const L_RING: &str = "\
.........
..###....
..#.#....
..#.#....
..#.#....
..#.####.
..#....#.
..######.
.........
";

pub fn split_grid_grayscale() -> GrayscaleImage {
    parse_grayscale(GRAYSCALE_SPLIT_GRID.as_bytes()).expect("fixture parses")
}

pub fn cross_with_hole_image() -> BinaryImage {
    BinaryImage::from_art(CROSS_WITH_HOLE).expect("fixture parses")
}

pub fn l_ring_image() -> BinaryImage {
    BinaryImage::from_art(L_RING).expect("fixture parses")
}
