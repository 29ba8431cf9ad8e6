#![allow(dead_code)]

use std::collections::VecDeque;

use holemap::{BinaryImage, Pixel, PixelSet, WindowRect};
use rand::Rng;

/// Square ring of the given outer size and thickness.
pub fn ring(top: usize, left: usize, size: usize, thickness: usize) -> PixelSet {
    let mut s = PixelSet::new();
    for r in top..top + size {
        for c in left..left + size {
            let dr = (r - top).min(top + size - 1 - r);
            let dc = (c - left).min(left + size - 1 - c);
            if dr < thickness || dc < thickness {
                s.insert(Pixel::new(r, c));
            }
        }
    }
    s
}

/// Rectangular ring with separate height and width.
pub fn rect_ring(top: usize, left: usize, rows: usize, cols: usize) -> PixelSet {
    let mut s = PixelSet::new();
    for r in top..top + rows {
        for c in left..left + cols {
            if r == top || r == top + rows - 1 || c == left || c == left + cols - 1 {
                s.insert(Pixel::new(r, c));
            }
        }
    }
    s
}

pub fn random_image(rng: &mut impl Rng, width: usize, height: usize, density: f64) -> BinaryImage {
    let black = (0..height)
        .flat_map(|r| (0..width).map(move |c| Pixel::new(r, c)))
        .filter(|_| rng.gen_bool(density));
    let black: Vec<Pixel> = black.collect();
    BinaryImage::new(width, height, black).unwrap()
}

pub fn random_window(rng: &mut impl Rng, width: usize, height: usize) -> WindowRect {
    let rows = rng.gen_range(3..=height);
    let cols = rng.gen_range(3..=width);
    let top = rng.gen_range(0..=height - rows) as i64;
    let left = rng.gen_range(0..=width - cols) as i64;
    WindowRect::new(top, left, rows, cols).unwrap()
}

/// 8-connected components by breadth-first flood fill.
pub fn components8(set: &PixelSet) -> Vec<PixelSet> {
    let mut seen = PixelSet::new();
    let mut out = Vec::new();
    for &start in set {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = PixelSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(p) = queue.pop_front() {
            comp.insert(p);
            for q in p.neighbors8() {
                if set.contains(&q) && seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// The image used for the multiscale size criterion: one 40x40 ring of
/// thickness 2 on the left, a 4x4 grid of 8x8 rings with pitch 20 on the
/// right. Each small ring starts one pixel past a multiple of 5, so a
/// step-5 window can hold it whole in its interior.
pub struct SizeFixture {
    pub image: BinaryImage,
    pub large: PixelSet,
    pub cluster: PixelSet,
}

pub fn size_fixture() -> SizeFixture {
    let large = ring(40, 10, 40, 2);
    let mut cluster = PixelSet::new();
    for i in 0..4 {
        for j in 0..4 {
            cluster.extend(ring(26 + 20 * i, 71 + 20 * j, 8, 1));
        }
    }
    let image = BinaryImage::new(180, 120, large.iter().chain(&cluster).copied()).unwrap();
    SizeFixture {
        image,
        large,
        cluster,
    }
}
