use std::collections::BTreeMap;

use holemap::detector::{accumulate, detect_deposit, size_deposit, window_profiles};
use holemap::homology::{betti_numbers, induced_matrix};
use holemap::persistence::Death;
use holemap::{
    build_local_system, detect_holes, estimate_sizes, global_section_dim, global_section_dim_n,
    persistence, rank_z2, realize, BinaryImage, DetectorConfig, Filtration, IntHeatmap, NSystem,
    Pixel, PixelSet, WindowRect,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pixel_set(max_w: usize, max_h: usize) -> impl Strategy<Value = (usize, usize, PixelSet)> {
    (1..=max_w, 1..=max_h).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<bool>(), w * h).prop_map(move |bits| {
            let set = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| Pixel::new(i / w, i % w))
                .collect();
            (w, h, set)
        })
    })
}

/// `S ⊆ T ⊆ U` drawn by thinning a random set twice.
fn nested_sets() -> impl Strategy<Value = (PixelSet, PixelSet, PixelSet)> {
    (pixel_set(8, 8), any::<u64>()).prop_map(|((_, _, u), seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let thin = |s: &PixelSet, rng: &mut ChaCha8Rng| -> PixelSet {
            s.iter().filter(|_| rand::Rng::gen_bool(rng, 0.7)).copied().collect()
        };
        let t = thin(&u, &mut rng);
        let s = thin(&t, &mut rng);
        (s, t, u)
    })
}

fn image_and_window() -> impl Strategy<Value = (BinaryImage, WindowRect)> {
    pixel_set(10, 10)
        .prop_filter("room for a window", |(w, h, _)| *w >= 3 && *h >= 3)
        .prop_flat_map(|(w, h, set)| {
            let img = BinaryImage::new(w, h, set).unwrap();
            (3..=w.min(h)).prop_flat_map(move |n| {
                let img = img.clone();
                (0..=h - n, 0..=w - n).prop_map(move |(top, left)| {
                    (img.clone(), WindowRect::square(top as i64, left as i64, n).unwrap())
                })
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn no_two_dimensional_homology((_, _, s) in pixel_set(10, 10)) {
        prop_assert_eq!(betti_numbers(&realize(&s))[2], 0);
    }

    #[test]
    fn induced_maps_compose((s, t, u) in nested_sets(), q in 0usize..=1) {
        let (cs, ct, cu) = (realize(&s), realize(&t), realize(&u));
        let direct = induced_matrix(&cs, &cu, q).unwrap();
        let composed = induced_matrix(&ct, &cu, q).unwrap().mul(&induced_matrix(&cs, &ct, q).unwrap());
        prop_assert_eq!(direct, composed);
    }

    #[test]
    fn induced_rank_counts_surviving_bars((s, _, u) in nested_sets(), q in 0usize..=1) {
        let rank = rank_z2(&induced_matrix(&realize(&s), &realize(&u), q).unwrap());
        let levels: BTreeMap<Pixel, i64> =
            u.iter().map(|p| (*p, if s.contains(p) { 1 } else { 2 })).collect();
        let d = persistence(&Filtration::lower_star(&levels));
        prop_assert_eq!(rank, d.count(q, 1, Death::Infinite));
    }

    #[test]
    fn two_part_sections_specialize((img, w) in image_and_window(), q in 0usize..=1) {
        let ls = build_local_system(&img, &w).unwrap();
        let two = global_section_dim(&ls, q).unwrap();
        let n = global_section_dim_n(&NSystem::from(&ls), q).unwrap();
        prop_assert_eq!(two, n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn heat_stays_on_black_pixels((w, h, s) in pixel_set(12, 12), n in 3usize..=6, step in 1usize..=3) {
        let img = BinaryImage::new(w, h, s).unwrap();
        let cfg = DetectorConfig::detect(n, step).unwrap();
        let detect: IntHeatmap = detect_holes(&img, &cfg);
        let size: IntHeatmap = estimate_sizes(&img, &cfg);
        prop_assert!(detect.support().is_subset(img.black()));
        prop_assert!(size.support().is_subset(img.black()));
    }

    #[test]
    fn window_order_does_not_matter((w, h, s) in pixel_set(12, 12), n in 3usize..=6, seed in any::<u64>()) {
        let img = BinaryImage::new(w, h, s).unwrap();
        let mut profiles = window_profiles(&img, n, 1);
        let ordered: IntHeatmap = accumulate(&img, &profiles, |_, p| detect_deposit(p));
        let ordered_size: IntHeatmap = accumulate(&img, &profiles, |_, p| size_deposit(n, p));
        profiles.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled: IntHeatmap = accumulate(&img, &profiles, |_, p| detect_deposit(p));
        let shuffled_size: IntHeatmap = accumulate(&img, &profiles, |_, p| size_deposit(n, p));
        prop_assert_eq!(ordered, shuffled);
        prop_assert_eq!(ordered_size, shuffled_size);
    }

    #[test]
    fn detection_is_reproducible((w, h, s) in pixel_set(12, 12), n in 3usize..=6) {
        let img = BinaryImage::new(w, h, s).unwrap();
        let cfg = DetectorConfig::detect(n, 1).unwrap();
        let a: IntHeatmap = detect_holes(&img, &cfg);
        let b: IntHeatmap = detect_holes(&img, &cfg);
        prop_assert_eq!(a, b);
    }
}
