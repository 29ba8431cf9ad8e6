//! Global sections of `H_q(X_1) → H_q(X) ← ... ← H_q(X_n)`.
//!
//! Over Z2 the differences `ρ_1(s_1) − ρ_i(s_i)` are sums, so the map `φ`
//! is assembled from the induced matrices without signs.

use crate::cubical::{check_closure_disjoint, realize, LocalSystem};
use crate::error::{Error, Result};
use crate::homology::{rank_z2, AmbientHomology, BitMatrix};
use crate::image_io::PixelSet;

/// `(X, X_1, ..., X_n)` with pairwise closure-disjoint parts inside `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSystem {
    ambient: PixelSet,
    parts: Vec<PixelSet>,
}

impl NSystem {
    pub fn new(ambient: PixelSet, parts: Vec<PixelSet>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::Config(format!(
                "an n-system needs at least two parts, got {}",
                parts.len()
            )));
        }
        for part in &parts {
            if let Some(p) = part.iter().find(|p| !ambient.contains(p)) {
                return Err(Error::NotInAmbient(p.row, p.col));
            }
        }
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                check_closure_disjoint(a, b)?;
            }
        }
        Ok(NSystem { ambient, parts })
    }

    pub fn ambient(&self) -> &PixelSet {
        &self.ambient
    }

    pub fn parts(&self) -> &[PixelSet] {
        &self.parts
    }
}

impl From<&LocalSystem> for NSystem {
    fn from(ls: &LocalSystem) -> Self {
        NSystem {
            ambient: ls.ambient().clone(),
            parts: vec![ls.x1().clone(), ls.x2().clone()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionSpace {
    pub q: usize,
    pub dim_gamma: usize,
    pub phi_rank: usize,
}

/// Matrices of `ρ_i: H_q(X_i) → H_q(X)`, one per part.
pub fn section_maps(sys: &NSystem, q: usize) -> Result<Vec<BitMatrix>> {
    let x = realize(&sys.ambient);
    let hx = AmbientHomology::new(&x, q);
    sys.parts
        .iter()
        .map(|part| hx.induced_from(&realize(part)))
        .collect()
}

/// `dim Γ = β_q(X1) + β_q(X2) − rank [ρ_1 | ρ_2]`.
pub fn global_section_dim(ls: &LocalSystem, q: usize) -> Result<SectionSpace> {
    let x = realize(ls.ambient());
    let hx = AmbientHomology::new(&x, q);
    let rho1 = hx.induced_from(&realize(ls.x1()))?;
    let rho2 = hx.induced_from(&realize(ls.x2()))?;
    let phi = BitMatrix::hstack(&[&rho1, &rho2]);
    let phi_rank = rank_z2(&phi);
    Ok(SectionSpace {
        q,
        dim_gamma: rho1.cols() + rho2.cols() - phi_rank,
        phi_rank,
    })
}

/// The block map `φ: ⊕_i H_q(X_i) → ⊕_{i≥2} H_q(X)` sending
/// `(s_i)` to `(ρ_1(s_1) + ρ_i(s_i))_{i≥2}`.
pub fn phi_matrix(maps: &[BitMatrix]) -> BitMatrix {
    let target = maps.first().map_or(0, BitMatrix::rows);
    let offsets: Vec<usize> = maps
        .iter()
        .scan(0, |acc, m| {
            let at = *acc;
            *acc += m.cols();
            Some(at)
        })
        .collect();
    let total: usize = maps.iter().map(BitMatrix::cols).sum();
    let mut phi = BitMatrix::zeros(target * maps.len().saturating_sub(1), total);
    for (k, rho) in maps.iter().enumerate().skip(1) {
        let row = (k - 1) * target;
        phi.set_block(row, offsets[0], &maps[0]);
        phi.set_block(row, offsets[k], rho);
    }
    phi
}

/// `dim Γ = Σ β_q(X_i) − rank φ`, since `Γ = ker φ`.
pub fn global_section_dim_n(sys: &NSystem, q: usize) -> Result<SectionSpace> {
    let maps = section_maps(sys, q)?;
    let phi = phi_matrix(&maps);
    let phi_rank = rank_z2(&phi);
    Ok(SectionSpace {
        q,
        dim_gamma: phi.cols() - phi_rank,
        phi_rank,
    })
}
