//! Sliding-window heatmaps for hole location and hole size.
//!
//! Every `n x n` window placed at `(i*k, j*k)` that fits in the grid yields a
//! local system; its dimension-1 merging profile turns into a deposit `M`
//! added to each pixel of the window interior. The accumulated map is masked
//! to black pixels at the end.
//!
//! * detect: `M = i_1 + o_1`
//! * size: `M = n² · (o_1 − i_1)`, negative where a window interior already
//!   encloses holes.

use rayon::prelude::*;

use crate::cubical::{build_local_system, realize, CubicalComplex, WindowRect};
use crate::error::{Error, Result};
use crate::image_io::{BinaryImage, Heatmap, Pixel};
use crate::persistence::{merging_profile, persistence, short_filtration_on, MergingProfile};
use crate::scalar::HeatValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Detect,
    Size,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorConfig {
    window_size: usize,
    step: usize,
    mode: Mode,
    scales: Option<Vec<usize>>,
}

impl DetectorConfig {
    pub fn new(window_size: usize, step: usize, mode: Mode, scales: Option<Vec<usize>>) -> Result<Self> {
        if window_size < 3 {
            return Err(Error::Config(format!("window size must be at least 3, got {window_size}")));
        }
        if step == 0 {
            return Err(Error::Config("step must be at least 1".into()));
        }
        if let Some(s) = &scales {
            validate_scales(s)?;
        }
        Ok(DetectorConfig {
            window_size,
            step,
            mode,
            scales,
        })
    }

    pub fn detect(window_size: usize, step: usize) -> Result<Self> {
        DetectorConfig::new(window_size, step, Mode::Detect, None)
    }

    pub fn size(window_size: usize, step: usize) -> Result<Self> {
        DetectorConfig::new(window_size, step, Mode::Size, None)
    }

    /// Size mode summed over several window sizes.
    pub fn multiscale(scales: Vec<usize>, step: usize) -> Result<Self> {
        validate_scales(&scales)?;
        let first = scales[0];
        DetectorConfig::new(first, step, Mode::Size, Some(scales))
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn scales(&self) -> Option<&[usize]> {
        self.scales.as_deref()
    }

    /// Runs the configured algorithm.
    pub fn run<T: HeatValue>(&self, img: &BinaryImage) -> Heatmap<T> {
        match (self.mode, &self.scales) {
            (Mode::Detect, _) => detect_holes(img, self),
            (Mode::Size, None) => estimate_sizes(img, self),
            (Mode::Size, Some(scales)) => sum_over_scales(img, scales, self.step),
        }
    }
}

fn validate_scales(scales: &[usize]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::Config("scale list is empty".into()));
    }
    if let Some(s) = scales.iter().find(|&&s| s < 3) {
        return Err(Error::Config(format!("window size must be at least 3, got {s}")));
    }
    Ok(())
}

/// Every `n x n` window at multiples of the step that fits in the image.
pub fn window_placements(img: &BinaryImage, n: usize, step: usize) -> Vec<WindowRect> {
    let fits = |len: usize| if len >= n { (len - n) / step + 1 } else { 0 };
    let (rows, cols) = (fits(img.height()), fits(img.width()));
    (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| {
            WindowRect::square((i * step) as i64, (j * step) as i64, n).expect("n >= 3 checked by caller")
        })
        .collect()
}

/// Dimension-1 profile of one window over a pre-realized ambient complex.
pub fn window_profile(img: &BinaryImage, complex: &CubicalComplex, w: &WindowRect) -> MergingProfile {
    let ls = build_local_system(img, w).expect("placements fit inside the image");
    if ls.x1().is_empty() && ls.ambient().len() == ls.x2().len() {
        // nothing of X inside the window: X1 ∪ X2 = X, every count is zero
        return MergingProfile { q: 1, ..Default::default() };
    }
    let f = short_filtration_on(complex, &ls).expect("window systems are closure-disjoint");
    merging_profile(&persistence(&f), 1).expect("short filtration levels")
}

/// Profiles of all window placements, in row-major placement order.
pub fn window_profiles(img: &BinaryImage, n: usize, step: usize) -> Vec<(WindowRect, MergingProfile)> {
    let complex = realize(img.black());
    window_placements(img, n, step)
        .into_par_iter()
        .map(|w| {
            let p = window_profile(img, &complex, &w);
            (w, p)
        })
        .collect()
}

/// Adds each window's deposit over its interior, then masks to black pixels.
pub fn accumulate<T: HeatValue>(
    img: &BinaryImage,
    profiles: &[(WindowRect, MergingProfile)],
    deposit: impl Fn(&WindowRect, &MergingProfile) -> i64,
) -> Heatmap<T> {
    let mut heat = Heatmap::<T>::zeros(img.width(), img.height());
    for (w, p) in profiles {
        let m = deposit(w, p);
        if m == 0 {
            continue;
        }
        let m = T::from_deposit(m);
        for Pixel { row, col } in w.interior() {
            heat.add_at(row, col, m);
        }
    }
    heat.mask_to_black(img);
    heat
}

pub fn detect_deposit(p: &MergingProfile) -> i64 {
    (p.i + p.o) as i64
}

pub fn size_deposit(n: usize, p: &MergingProfile) -> i64 {
    (n * n) as i64 * (p.o as i64 - p.i as i64)
}

/// Hole-location heatmap, `M = i_1 + o_1`.
pub fn detect_holes<T: HeatValue>(img: &BinaryImage, cfg: &DetectorConfig) -> Heatmap<T> {
    let profiles = window_profiles(img, cfg.window_size, cfg.step);
    accumulate(img, &profiles, |_, p| detect_deposit(p))
}

/// Hole-size heatmap, `M = n² (o_1 − i_1)`.
pub fn estimate_sizes<T: HeatValue>(img: &BinaryImage, cfg: &DetectorConfig) -> Heatmap<T> {
    size_heatmap(img, cfg.window_size, cfg.step)
}

fn size_heatmap<T: HeatValue>(img: &BinaryImage, n: usize, step: usize) -> Heatmap<T> {
    let profiles = window_profiles(img, n, step);
    accumulate(img, &profiles, |_, p| size_deposit(n, p))
}

fn sum_over_scales<T: HeatValue>(img: &BinaryImage, scales: &[usize], step: usize) -> Heatmap<T> {
    let mut total = Heatmap::<T>::zeros(img.width(), img.height());
    for &n in scales {
        total.accumulate(&size_heatmap::<T>(img, n, step));
    }
    total
}

/// Pointwise sum of size heatmaps over several window sizes.
pub fn multiscale<T: HeatValue>(img: &BinaryImage, scales: &[usize], step: usize) -> Result<Heatmap<T>> {
    validate_scales(scales)?;
    if step == 0 {
        return Err(Error::Config("step must be at least 1".into()));
    }
    Ok(sum_over_scales(img, scales, step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cross_with_hole_image, l_ring_image};
    use crate::image_io::PixelSet;
    use crate::persistence::rank_oracle_counts;

    fn ring(top: usize, left: usize, size: usize) -> PixelSet {
        let mut s = PixelSet::new();
        for i in 0..size {
            s.insert(Pixel::new(top, left + i));
            s.insert(Pixel::new(top + size - 1, left + i));
            s.insert(Pixel::new(top + i, left));
            s.insert(Pixel::new(top + i, left + size - 1));
        }
        s
    }

    #[test]
    fn config_validation() {
        assert!(DetectorConfig::detect(2, 1).is_err());
        assert!(DetectorConfig::detect(3, 0).is_err());
        assert!(DetectorConfig::multiscale(vec![], 1).is_err());
        assert!(DetectorConfig::multiscale(vec![5, 2], 1).is_err());
        let c = DetectorConfig::multiscale(vec![5, 7], 2).unwrap();
        assert_eq!(c.scales(), Some(&[5, 7][..]));
        assert_eq!(c.mode(), Mode::Size);
    }

    #[test]
    fn placements_respect_step() {
        let img = BinaryImage::white(10, 7).unwrap();
        let w = window_placements(&img, 5, 2);
        // rows: tops 0, 2 ; cols: lefts 0, 2, 4
        assert_eq!(w.len(), 6);
        assert!(w.iter().all(|w| w.fits_in(10, 7)));
        assert!(window_placements(&img, 8, 1).is_empty());
    }

    #[test]
    fn white_and_solid_images_are_cold() {
        let white = BinaryImage::white(9, 9).unwrap();
        let cfg = DetectorConfig::detect(5, 1).unwrap();
        assert!(detect_holes::<i64>(&white, &cfg).is_zero());
        assert!(estimate_sizes::<i64>(&white, &cfg).is_zero());
        assert!(multiscale::<i64>(&white, &[3, 5], 1).unwrap().is_zero());

        let solid: Vec<Pixel> = (1..8).flat_map(|r| (2..7).map(move |c| Pixel::new(r, c))).collect();
        let solid = BinaryImage::new(9, 9, solid).unwrap();
        assert!(detect_holes::<i64>(&solid, &cfg).is_zero());
    }

    #[test]
    fn l_ring_heat() {
        let img = l_ring_image();
        let cfg = DetectorConfig::detect(5, 1).unwrap();
        let h = detect_holes::<i64>(&img, &cfg);
        let support = h.support();
        assert!(support.is_subset(img.black()));
        // every black pixel touching the enclosed white region is hot
        let hole: PixelSet = [(2, 3), (3, 3), (4, 3), (5, 3), (6, 3), (6, 4), (6, 5), (6, 6)]
            .into_iter()
            .map(Pixel::from)
            .collect();
        for &p in img.black() {
            if p.neighbors8().any(|q| hole.contains(&q)) {
                assert!(h.get(p.row, p.col) > 0, "pixel {p:?} is cold");
            }
        }
        for (w, p) in window_profiles(&img, 5, 1) {
            let ls = build_local_system(&img, &w).unwrap();
            assert_eq!(p, rank_oracle_counts(&ls, 1).unwrap());
        }
    }

    #[test]
    fn small_ring_is_punished() {
        let img = BinaryImage::new(9, 9, ring(2, 2, 4)).unwrap();
        let cfg = DetectorConfig::size(7, 1).unwrap();
        let profiles = window_profiles(&img, 7, 1);
        let containing = profiles
            .iter()
            .find(|(w, _)| w.top() == 1 && w.left() == 1)
            .unwrap();
        assert_eq!((containing.1.i, containing.1.o), (1, 0));
        let h = estimate_sizes::<i64>(&img, &cfg);
        assert!(h.get(2, 2) < 0);
    }

    #[test]
    fn scalar_instantiations_agree() {
        let img = cross_with_hole_image();
        let cfg = DetectorConfig::size(3, 1).unwrap();
        let a = estimate_sizes::<i64>(&img, &cfg);
        let b = estimate_sizes::<f64>(&img, &cfg);
        let c = estimate_sizes::<f32>(&img, &cfg);
        for (i, &v) in a.values().iter().enumerate() {
            assert_eq!(v as f64, b.values()[i]);
            assert_eq!(v as f32, c.values()[i]);
        }
        assert!(!a.is_zero());
    }

    #[test]
    fn single_scale_multiscale_matches() {
        let img = l_ring_image();
        let one = multiscale::<i64>(&img, &[5], 1).unwrap();
        let cfg = DetectorConfig::size(5, 1).unwrap();
        assert_eq!(one, estimate_sizes::<i64>(&img, &cfg));
        assert_eq!(one, cfg.run::<i64>(&img));
    }
}
