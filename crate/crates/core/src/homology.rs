//! Z2 homology of cubical complexes: ranks, Betti numbers, representative
//! cycles and the matrices of inclusion-induced maps.

use std::fmt;

use crate::cubical::{Cell, CubicalComplex};
use crate::error::{Error, Result};

/// Dense matrix over Z2 with bit-packed columns.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = rows.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; words * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds from row-major 0/1 entries; any non-zero byte is a one.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = BitMatrix::zeros(rows.len(), ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.as_ref().len(), ncols, "ragged rows");
            for (j, &v) in row.as_ref().iter().enumerate() {
                if v != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<bool>]) -> Self {
        let mut m = BitMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &b) in col.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[col * self.words + row / 64] >> (row % 64) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        let w = &mut self.data[col * self.words + row / 64];
        let bit = 1u64 << (row % 64);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn column(&self, col: usize) -> &[u64] {
        &self.data[col * self.words..(col + 1) * self.words]
    }

    pub fn column_bits(&self, col: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    /// `column[dst] += column[src]`.
    pub fn add_column(&mut self, src: usize, dst: usize) {
        assert!(src < self.cols && dst < self.cols, "index out of bounds");
        if src == dst {
            self.data[dst * self.words..(dst + 1) * self.words].fill(0);
            return;
        }
        for w in 0..self.words {
            let s = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= s;
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..rhs.rows {
                if rhs.get(k, j) {
                    for w in 0..self.words {
                        out.data[j * out.words + w] ^= self.data[k * self.words + w];
                    }
                }
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &BitMatrix) {
        for j in 0..block.cols {
            for i in 0..block.rows {
                if block.get(i, j) {
                    self.set(row + i, col + j, true);
                }
            }
        }
    }

    /// Horizontal concatenation; all parts must have the same row count.
    pub fn hstack(parts: &[&BitMatrix]) -> BitMatrix {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut at = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "row count mismatch in hstack");
            out.data[at * out.words..(at + m.cols) * out.words].copy_from_slice(&m.data);
            at += m.cols;
        }
        out
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut acc = vec![0u64; self.words];
        for (j, _) in v.iter().enumerate().filter(|(_, &b)| b) {
            for (a, &w) in acc.iter_mut().zip(self.column(j)) {
                *a ^= w;
            }
        }
        (0..self.rows).map(|r| acc[r / 64] >> (r % 64) & 1 == 1).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Rank over Z2 by column elimination.
pub fn rank_z2(m: &BitMatrix) -> usize {
    let mut work = m.clone();
    // pivot_owner[row] = column whose highest set bit is `row`
    let mut pivot_owner: Vec<Option<usize>> = vec![None; m.rows];
    let mut rank = 0;
    for j in 0..work.cols {
        while let Some(top) = highest_bit(work.column(j)) {
            match pivot_owner[top] {
                Some(k) => work.add_column(k, j),
                None => {
                    pivot_owner[top] = Some(j);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn highest_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// Sorted sparse Z2 column of row indices.
pub(crate) type SparseColumn = Vec<u32>;

/// `target += src` for sorted sparse columns.
pub(crate) fn add_sparse(target: &mut SparseColumn, src: &[u32], scratch: &mut SparseColumn) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < src.len() {
        match target[i].cmp(&src[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(src[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&src[j..]);
    std::mem::swap(target, scratch);
}

/// Result of left-to-right column reduction `R = D V`.
pub(crate) struct Reduction {
    pub reduced: Vec<SparseColumn>,
    /// Column of `V` for each input column, when tracked.
    pub v: Option<Vec<SparseColumn>>,
    /// `low_owner[row]` is the column whose lowest one sits in `row`.
    pub low_owner: Vec<Option<u32>>,
}

/// Standard reduction without the twist: columns are processed left to
/// right and each is reduced until its lowest one is unclaimed.
pub(crate) fn reduce_columns(columns: Vec<SparseColumn>, nrows: usize, track_v: bool) -> Reduction {
    let mut reduced: Vec<SparseColumn> = Vec::with_capacity(columns.len());
    let mut v: Vec<SparseColumn> = Vec::new();
    let mut low_owner = vec![None; nrows];
    let mut scratch = Vec::new();
    for (j, mut col) in columns.into_iter().enumerate() {
        let mut vj = if track_v { vec![j as u32] } else { Vec::new() };
        while let Some(&low) = col.last() {
            match low_owner[low as usize] {
                Some(k) => {
                    add_sparse(&mut col, &reduced[k as usize], &mut scratch);
                    if track_v {
                        add_sparse(&mut vj, &v[k as usize], &mut scratch);
                    }
                }
                None => {
                    low_owner[low as usize] = Some(j as u32);
                    break;
                }
            }
        }
        reduced.push(col);
        if track_v {
            v.push(vj);
        }
    }
    Reduction {
        reduced,
        v: track_v.then_some(v),
        low_owner,
    }
}

/// Columns of the boundary map from `q`-cells to `(q-1)`-cells, with rows
/// given as global cell indices.
fn boundary_columns(c: &CubicalComplex, q: usize) -> Vec<SparseColumn> {
    c.dim_range(q)
        .map(|idx| {
            let mut col: SparseColumn = c.boundary_of(idx).to_vec();
            col.sort_unstable();
            col
        })
        .collect()
}

/// Rank of the boundary map out of dimension `q`.
pub fn boundary_rank(c: &CubicalComplex, q: usize) -> usize {
    if q == 0 {
        return 0;
    }
    let red = reduce_columns(boundary_columns(c, q), c.len(), false);
    red.reduced.iter().filter(|col| !col.is_empty()).count()
}

/// `β_q = dim ker ∂_q − dim im ∂_{q+1}`.
pub fn betti(c: &CubicalComplex, q: usize) -> usize {
    let kernel = c.count(q) - boundary_rank(c, q);
    kernel - boundary_rank(c, q + 1)
}

/// Betti numbers `(β_0, β_1, β_2)`.
pub fn betti_numbers(c: &CubicalComplex) -> [usize; 3] {
    let r1 = boundary_rank(c, 1);
    let r2 = boundary_rank(c, 2);
    [c.count(0) - r1, c.count(1) - r1 - r2, c.count(2) - r2]
}

/// A Z2 chain, as a sorted list of cells.
pub type Chain = Vec<Cell>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyBasis {
    q: usize,
    representatives: Vec<Chain>,
}

impl HomologyBasis {
    pub fn dimension(&self) -> usize {
        self.q
    }

    pub fn representatives(&self) -> &[Chain] {
        &self.representatives
    }

    pub fn rank(&self) -> usize {
        self.representatives.len()
    }
}

/// Representative cycles: kernel columns of the reduced `∂_q` whose cell is
/// not the lowest one of any reduced `∂_{q+1}` column.
pub fn homology_basis(c: &CubicalComplex, q: usize) -> HomologyBasis {
    let range = c.dim_range(q);
    let cycles = reduce_columns(boundary_columns(c, q), c.len(), true);
    let killed = reduce_columns(boundary_columns(c, q + 1), c.len(), false);
    let v = cycles.v.expect("tracked");
    let representatives = range
        .clone()
        .zip(cycles.reduced.iter().zip(v))
        .filter(|(idx, (col, _))| col.is_empty() && killed.low_owner[*idx].is_none())
        .map(|(_, (_, vj))| {
            let mut chain: Chain = vj
                .iter()
                .map(|&local| c.cell(range.start + local as usize))
                .collect();
            chain.sort_unstable();
            chain
        })
        .collect();
    HomologyBasis { q, representatives }
}

fn chain_indices(c: &CubicalComplex, q: usize, chain: &[Cell]) -> Result<SparseColumn> {
    let mut idx: SparseColumn = chain
        .iter()
        .map(|&cell| {
            if cell.dim() != q {
                return Err(Error::NotACycle);
            }
            c.index_of(cell).map(|i| i as u32).ok_or(Error::NotACycle)
        })
        .collect::<Result<_>>()?;
    idx.sort_unstable();
    // a repeated cell cancels over Z2
    let mut out = SparseColumn::with_capacity(idx.len());
    for i in idx {
        if out.last() == Some(&i) {
            out.pop();
        } else {
            out.push(i);
        }
    }
    Ok(out)
}

fn is_cycle(c: &CubicalComplex, indices: &[u32]) -> bool {
    let mut faces: Vec<u32> = indices
        .iter()
        .flat_map(|&i| c.boundary_of(i as usize).iter().copied())
        .collect();
    faces.sort_unstable();
    // every face must appear an even number of times
    faces.chunk_by(|a, b| a == b).all(|run| run.len() % 2 == 0)
}

#[derive(Clone, Copy)]
enum Owner {
    Boundary(usize),
    Rep(usize),
}

/// Reduced `[∂_{q+1} | representatives]` for one complex, reusable for many
/// coordinate queries.
pub struct BasisCoordinates<'c> {
    complex: &'c CubicalComplex,
    q: usize,
    rank: usize,
    reduced: Vec<SparseColumn>,
    // coefficient vector over the representatives for each reduced column
    rep_coeffs: Vec<Vec<bool>>,
    owner: Vec<Option<Owner>>,
}

impl<'c> BasisCoordinates<'c> {
    pub fn new(complex: &'c CubicalComplex, basis: &HomologyBasis) -> Result<Self> {
        let q = basis.q;
        let rank = basis.rank();
        let mut owner: Vec<Option<Owner>> = vec![None; complex.len()];
        let mut reduced: Vec<SparseColumn> = Vec::new();
        let mut rep_coeffs: Vec<Vec<bool>> = Vec::new();
        let mut scratch = Vec::new();

        let mut columns: Vec<(SparseColumn, Vec<bool>, bool)> = boundary_columns(complex, q + 1)
            .into_iter()
            .map(|col| (col, vec![false; rank], false))
            .collect();
        for (i, rep) in basis.representatives.iter().enumerate() {
            let col = chain_indices(complex, q, rep)?;
            if !is_cycle(complex, &col) {
                return Err(Error::NotACycle);
            }
            let mut coeff = vec![false; rank];
            coeff[i] = true;
            columns.push((col, coeff, true));
        }

        for (mut col, mut coeff, is_rep) in columns {
            while let Some(&low) = col.last() {
                match owner[low as usize] {
                    Some(Owner::Boundary(k)) | Some(Owner::Rep(k)) => {
                        add_sparse(&mut col, &reduced[k], &mut scratch);
                        xor_into(&mut coeff, &rep_coeffs[k]);
                    }
                    None => {
                        let k = reduced.len();
                        owner[low as usize] =
                            Some(if is_rep { Owner::Rep(k) } else { Owner::Boundary(k) });
                        break;
                    }
                }
            }
            if is_rep && col.is_empty() {
                // representatives dependent modulo boundaries
                return Err(Error::NotExpressible);
            }
            if !col.is_empty() {
                reduced.push(col);
                rep_coeffs.push(coeff);
            }
        }
        Ok(BasisCoordinates {
            complex,
            q,
            rank,
            reduced,
            rep_coeffs,
            owner,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coordinates `λ` with `z − Σ λ_i rep_i` a boundary.
    pub fn express(&self, z: &[Cell]) -> Result<Vec<bool>> {
        let mut col = chain_indices(self.complex, self.q, z)?;
        if !is_cycle(self.complex, &col) {
            return Err(Error::NotACycle);
        }
        let mut coeff = vec![false; self.rank];
        let mut scratch = Vec::new();
        while let Some(&low) = col.last() {
            match self.owner[low as usize] {
                Some(Owner::Boundary(k)) | Some(Owner::Rep(k)) => {
                    add_sparse(&mut col, &self.reduced[k], &mut scratch);
                    xor_into(&mut coeff, &self.rep_coeffs[k]);
                }
                None => return Err(Error::NotExpressible),
            }
        }
        Ok(coeff)
    }
}

fn xor_into(a: &mut [bool], b: &[bool]) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

pub fn express_in_basis(z: &[Cell], c: &CubicalComplex, basis: &HomologyBasis) -> Result<Vec<bool>> {
    BasisCoordinates::new(c, basis)?.express(z)
}

/// Homology of an ambient complex in one dimension, prepared for building
/// many induced matrices into it.
pub struct AmbientHomology<'c> {
    basis: HomologyBasis,
    coords: BasisCoordinates<'c>,
}

impl<'c> AmbientHomology<'c> {
    pub fn new(amb: &'c CubicalComplex, q: usize) -> Self {
        let basis = homology_basis(amb, q);
        let coords = BasisCoordinates::new(amb, &basis)
            .expect("a computed basis is independent modulo boundaries");
        AmbientHomology { basis, coords }
    }

    pub fn basis(&self) -> &HomologyBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Matrix of `H_q(sub) → H_q(amb)`.
    pub fn induced_from(&self, sub: &CubicalComplex) -> Result<BitMatrix> {
        if !sub.is_subcomplex_of(self.coords.complex) {
            return Err(Error::NotSubcomplex);
        }
        let sub_basis = homology_basis(sub, self.basis.q);
        let columns = sub_basis
            .representatives
            .iter()
            .map(|rep| self.coords.express(rep))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix::from_columns(self.rank(), &columns))
    }
}

/// Matrix of the map `H_q(sub) → H_q(amb)` induced by inclusion, in the
/// deterministic bases of [`homology_basis`].
pub fn induced_matrix(sub: &CubicalComplex, amb: &CubicalComplex, q: usize) -> Result<BitMatrix> {
    if !sub.is_subcomplex_of(amb) {
        return Err(Error::NotSubcomplex);
    }
    AmbientHomology::new(amb, q).induced_from(sub)
}
