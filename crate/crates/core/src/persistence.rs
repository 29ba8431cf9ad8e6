//! Persistence of filtered cubical complexes: sub-level filtrations of
//! grayscale images and the three-step short filtrations of local systems.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use crate::cubical::{realize, Cell, CubicalComplex, LocalSystem};
use crate::error::{Error, Result};
use crate::homology::{betti, rank_z2, reduce_columns, AmbientHomology, SparseColumn};
use crate::image_io::{GrayscaleImage, Pixel, PixelSet};

/// Short filtration levels.
pub const LEVEL_X1: i64 = 1;
pub const LEVEL_X2: i64 = 2;
pub const LEVEL_AMBIENT: i64 = 3;

/// A cubical complex with a monotone level on every cell.
#[derive(Debug, Clone)]
pub struct Filtration<'c> {
    complex: Cow<'c, CubicalComplex>,
    levels: Vec<i64>,
}

impl<'c> Filtration<'c> {
    /// `levels[i]` is the level of cell `i` in canonical order.
    pub fn new(complex: impl Into<Cow<'c, CubicalComplex>>, levels: Vec<i64>) -> Result<Self> {
        let complex = complex.into();
        if levels.len() != complex.len() {
            return Err(Error::Dimension(format!(
                "{} levels for {} cells",
                levels.len(),
                complex.len()
            )));
        }
        for idx in 0..complex.len() {
            if complex
                .boundary_of(idx)
                .iter()
                .any(|&f| levels[f as usize] > levels[idx])
            {
                return Err(Error::NotMonotone(idx));
            }
        }
        Ok(Filtration { complex, levels })
    }

    /// Lower-star filtration: each pixel square gets its own level, every
    /// face the minimum over the squares containing it.
    pub fn lower_star(pixel_levels: &BTreeMap<Pixel, i64>) -> Filtration<'static> {
        let complex = realize(pixel_levels.keys());
        let levels = lower_star_levels(&complex, |p| pixel_levels[&p]);
        Filtration {
            complex: Cow::Owned(complex),
            levels,
        }
    }

    pub fn complex(&self) -> &CubicalComplex {
        &self.complex
    }

    pub fn level(&self, idx: usize) -> i64 {
        self.levels[idx]
    }

    pub fn level_of(&self, cell: Cell) -> Option<i64> {
        self.complex.index_of(cell).map(|i| self.levels[i])
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    /// Sorted distinct levels.
    pub fn levels_attained(&self) -> Vec<i64> {
        let mut l = self.levels.clone();
        l.sort_unstable();
        l.dedup();
        l
    }

    /// Cells with level `<= t`, as the pixel squares they contain.
    pub fn squares_up_to(&self, t: i64) -> PixelSet {
        self.complex
            .dim_range(2)
            .filter(|&i| self.levels[i] <= t)
            .map(|i| {
                let c = self.complex.cell(i);
                Pixel::new((c.row / 2) as usize, (c.col / 2) as usize)
            })
            .collect()
    }
}

fn square_pixel(c: Cell) -> Pixel {
    Pixel::new((c.row / 2) as usize, (c.col / 2) as usize)
}

fn lower_star_levels(complex: &CubicalComplex, square_level: impl Fn(Pixel) -> i64) -> Vec<i64> {
    let mut levels = vec![i64::MAX; complex.len()];
    for idx in complex.dim_range(2) {
        let sq = complex.cell(idx);
        let l = square_level(square_pixel(sq));
        for face in sq.closure() {
            let f = complex.index_of(face).expect("realized complexes are face-closed");
            levels[f] = levels[f].min(l);
        }
    }
    levels
}

/// Lower-star filtration of the whole grid by pixel value.
pub fn sublevel_filtration(g: &GrayscaleImage) -> Filtration<'static> {
    let pixel_levels: BTreeMap<Pixel, i64> = g.pixels().map(|(p, v)| (p, i64::from(v))).collect();
    Filtration::lower_star(&pixel_levels)
}

/// The filtration `∅ ⊆ X1 ⊆ X1 ∪ X2 ⊆ X` at levels 1, 2, 3.
pub fn short_filtration(ls: &LocalSystem) -> Result<Filtration<'static>> {
    let complex = realize(ls.ambient());
    let levels = short_levels(&complex, ls)?;
    Ok(Filtration {
        complex: Cow::Owned(complex),
        levels,
    })
}

/// Same as [`short_filtration`] but over an already realized ambient
/// complex, which must equal `realize(ls.ambient())`.
pub fn short_filtration_on<'c>(complex: &'c CubicalComplex, ls: &LocalSystem) -> Result<Filtration<'c>> {
    let levels = short_levels(complex, ls)?;
    Ok(Filtration {
        complex: Cow::Borrowed(complex),
        levels,
    })
}

fn short_levels(complex: &CubicalComplex, ls: &LocalSystem) -> Result<Vec<i64>> {
    crate::cubical::check_closure_disjoint(ls.x1(), ls.x2())?;
    Ok(lower_star_levels(complex, |p| {
        if ls.x1().contains(&p) {
            LEVEL_X1
        } else if ls.x2().contains(&p) {
            LEVEL_X2
        } else {
            LEVEL_AMBIENT
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(i64),
    Infinite,
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(v) => write!(f, "{v}"),
            Death::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub dim: usize,
    pub birth: i64,
    pub death: Death,
}

impl Bar {
    pub fn finite(dim: usize, birth: i64, death: i64) -> Self {
        Bar {
            dim,
            birth,
            death: Death::Finite(death),
        }
    }

    pub fn essential(dim: usize, birth: i64) -> Self {
        Bar {
            dim,
            birth,
            death: Death::Infinite,
        }
    }

    /// Alive in the sub-complex at level `t`.
    pub fn alive_at(&self, t: i64) -> bool {
        self.birth <= t
            && match self.death {
                Death::Finite(d) => d > t,
                Death::Infinite => true,
            }
    }
}

/// Multiset of bars sorted by `(dim, birth, death)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PersistenceDiagram {
    bars: Vec<Bar>,
}

impl PersistenceDiagram {
    pub fn from_bars(mut bars: Vec<Bar>) -> Self {
        bars.sort_unstable();
        PersistenceDiagram { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn in_dim(&self, q: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.dim == q)
    }

    pub fn count(&self, q: usize, birth: i64, death: Death) -> usize {
        self.in_dim(q)
            .filter(|b| b.birth == birth && b.death == death)
            .count()
    }

    pub fn count_born_at(&self, q: usize, birth: i64) -> usize {
        self.in_dim(q).filter(|b| b.birth == birth).count()
    }

    pub fn alive_at(&self, q: usize, t: i64) -> usize {
        self.in_dim(q).filter(|b| b.alive_at(t)).count()
    }

    /// One line per bar: `q birth death`, with `inf` for an infinite death.
    pub fn to_text(&self) -> String {
        self.bars
            .iter()
            .map(|b| format!("{} {} {}\n", b.dim, b.birth, b.death))
            .collect()
    }
}

/// Reduces the boundary matrix with cells ordered by `(level, canonical
/// index)`. Pairs whose two cells share a level are dropped.
pub fn persistence(f: &Filtration<'_>) -> PersistenceDiagram {
    let complex = f.complex();
    let n = complex.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&i| (f.levels[i as usize], i));
    let mut position = vec![0u32; n];
    for (pos, &idx) in order.iter().enumerate() {
        position[idx as usize] = pos as u32;
    }
    let columns: Vec<SparseColumn> = order
        .iter()
        .map(|&idx| {
            let mut col: SparseColumn = complex
                .boundary_of(idx as usize)
                .iter()
                .map(|&b| position[b as usize])
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    let red = reduce_columns(columns, n, false);

    let mut bars = Vec::new();
    for (j, col) in red.reduced.iter().enumerate() {
        let cell = order[j] as usize;
        match col.last() {
            Some(&low) => {
                let creator = order[low as usize] as usize;
                let (birth, death) = (f.levels[creator], f.levels[cell]);
                if birth != death {
                    bars.push(Bar::finite(complex.cell(creator).dim(), birth, death));
                }
            }
            None if red.low_owner[j].is_none() => {
                bars.push(Bar::essential(complex.cell(cell).dim(), f.levels[cell]));
            }
            None => {}
        }
    }
    PersistenceDiagram::from_bars(bars)
}

/// Counts read off a short-filtration diagram in one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MergingProfile {
    pub q: usize,
    /// `(2, 3)` bars: classes of `X2` that merge into classes of `X1`.
    pub m: usize,
    /// `(3, +∞)` bars: holes of `X` carried jointly by `X1` and `X2`.
    pub o: usize,
    /// `(1, +∞)` bars: holes of `X` already bounded inside `X1`.
    pub i: usize,
}

pub fn merging_profile(d: &PersistenceDiagram, q: usize) -> Result<MergingProfile> {
    let in_range = |l: i64| (LEVEL_X1..=LEVEL_AMBIENT).contains(&l);
    for b in d.bars() {
        if !in_range(b.birth) {
            return Err(Error::LevelOutOfRange(b.birth));
        }
        if let Death::Finite(l) = b.death {
            if !in_range(l) {
                return Err(Error::LevelOutOfRange(l));
            }
        }
    }
    Ok(MergingProfile {
        q,
        m: d.count(q, LEVEL_X2, Death::Finite(LEVEL_AMBIENT)),
        o: d.count(q, LEVEL_AMBIENT, Death::Infinite),
        i: d.count(q, LEVEL_X1, Death::Infinite),
    })
}

/// The same counts from ranks of induced maps alone, with
/// `a: H_q(X1) → H_q(X1 ∪ X2)` and `b: H_q(X1 ∪ X2) → H_q(X)`:
/// `m = β(X2) − rank b + rank ba`, `o = β(X) − rank b`, `i = rank ba`.
pub fn rank_oracle_counts(ls: &LocalSystem, q: usize) -> Result<MergingProfile> {
    let x1 = realize(ls.x1());
    let union: PixelSet = ls.x1().union(ls.x2()).copied().collect();
    let x12 = realize(&union);
    let x = realize(ls.ambient());

    let h12 = AmbientHomology::new(&x12, q);
    let hx = AmbientHomology::new(&x, q);
    let a = h12.induced_from(&x1)?;
    let b = hx.induced_from(&x12)?;
    let rank_b = rank_z2(&b);
    let rank_ba = rank_z2(&b.mul(&a));
    let beta_x2 = betti(&realize(ls.x2()), q);
    Ok(MergingProfile {
        q,
        m: beta_x2 + rank_ba - rank_b,
        o: hx.rank() - rank_b,
        i: rank_ba,
    })
}
