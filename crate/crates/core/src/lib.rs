//! Locating 1-dimensional holes in binary images.
//!
//! Black pixels are realized as closed unit squares. A window `R` over the
//! image splits the black set `X` into the part inside the window interior
//! (`X1`) and the part outside the window (`X2`). The persistence of the
//! three-step filtration `∅ ⊆ X1 ⊆ X1 ∪ X2 ⊆ X` counts which holes of `X`
//! are already enclosed by `X1` and which need both `X1` and `X2`. Sliding
//! the window over the image turns those counts into heatmaps.
//!
//! All homology is over Z2.

pub mod cli;
pub mod cubical;
pub mod detector;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod image_io;
pub mod persistence;
pub mod scalar;
pub mod sheaf;

pub use cubical::{build_local_system, realize, Cell, CubicalComplex, LocalSystem, WindowRect};
pub use detector::{detect_holes, estimate_sizes, multiscale, DetectorConfig, Mode};
pub use error::{Error, Result};
pub use homology::{betti, rank_z2, BitMatrix, HomologyBasis};
pub use image_io::{BinaryImage, GrayscaleImage, Heatmap, HeatmapFormat, Pixel, PixelSet};
pub use persistence::{
    merging_profile, persistence, rank_oracle_counts, short_filtration, sublevel_filtration,
    Filtration, MergingProfile, PersistenceDiagram,
};
pub use scalar::HeatValue;
pub use sheaf::{global_section_dim, global_section_dim_n, NSystem, SectionSpace};

/// Exact heat: every deposit is an integer.
pub type IntHeatmap = Heatmap<i64>;
pub type F64Heatmap = Heatmap<f64>;
pub type F32Heatmap = Heatmap<f32>;
