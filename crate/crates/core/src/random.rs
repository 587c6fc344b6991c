//! Seeded random instances: states, Hermitian matrices, unitaries, channels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::Channel;
use crate::error::Result;
use crate::geometry::{DensityMatrix, Feature, HermitianMatrix};
use crate::linalg::{CMatrix, RMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng) * s, normal(rng) * s))
}

pub fn real_gaussian<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

pub fn hermitian<R: Rng>(rng: &mut R, dim: usize) -> HermitianMatrix {
    let g = ginibre(rng, dim, dim);
    HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).expect("symmetrized matrix")
}

pub fn traceless<R: Rng>(rng: &mut R, dim: usize) -> Feature {
    Feature::from_traceless_part(&hermitian(rng, dim))
}

/// Random full-rank state `(1−w)·GG†/Tr + w·I/d`; `w` bounds the spectrum
/// away from zero.
pub fn density<R: Rng>(rng: &mut R, dim: usize, identity_weight: f64) -> DensityMatrix {
    let g = ginibre(rng, dim, dim);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    let mixed = m.scale((1.0 - identity_weight) / t)
        + CMatrix::identity(dim, dim).scale(identity_weight / dim as f64);
    DensityMatrix::new(HermitianMatrix::new(mixed).expect("Hermitian by construction"))
        .expect("valid state by construction")
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    isometry(rng, dim, dim)
}

/// Random isometry `rows × cols` with `rows ≥ cols`.
pub fn isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let qr = ginibre(rng, rows, cols).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random CPTP map from a Stinespring isometry.
pub fn channel<R: Rng>(
    rng: &mut R,
    input_dim: usize,
    output_dim: usize,
    n_kraus: usize,
) -> Result<Channel> {
    let v = isometry(rng, output_dim * n_kraus, input_dim);
    let kraus = (0..n_kraus)
        .map(|m| v.rows(m * output_dim, output_dim).into_owned())
        .collect();
    Channel::from_kraus(kraus)
}
