#![allow(dead_code)]

use infogeom::geometry::{DensityMatrix, HermitianMatrix};
use infogeom::linalg::{CMatrix, C64};

/// `f(M)` for Hermitian `M` through nalgebra's eigendecomposition directly.
pub fn matrix_function(m: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|v| f(v)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

pub fn log(m: &CMatrix) -> CMatrix {
    matrix_function(m, |v| C64::new(v.ln(), 0.0))
}

pub fn power(m: &CMatrix, s: f64) -> CMatrix {
    matrix_function(m, |v| C64::new(v.powf(s), 0.0))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Composite midpoint rule on [0, 1].
pub fn midpoint(nodes: usize, f: impl Fn(f64) -> CMatrix) -> CMatrix {
    let h = 1.0 / nodes as f64;
    let mut total = f(0.5 * h);
    for k in 1..nodes {
        total += f((k as f64 + 0.5) * h);
    }
    total * C64::new(h, 0.0)
}

/// Midpoint rule with 200 and 400 nodes combined by one Richardson step.
pub fn midpoint_richardson(f: impl Fn(f64) -> CMatrix) -> CMatrix {
    let coarse = midpoint(200, &f);
    let fine = midpoint(400, &f);
    (fine * C64::new(4.0, 0.0) - coarse) * C64::new(1.0 / 3.0, 0.0)
}

/// Random full-rank state from a seed, built without the library sampler.
pub fn state_from(entries: &[f64], dim: usize) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, dim, |i, j| {
        C64::new(entries[2 * (i * dim + j)], entries[2 * (i * dim + j) + 1])
    });
    let m = &g * g.adjoint() + CMatrix::identity(dim, dim) * C64::new(0.1, 0.0);
    let t = m.trace().re;
    DensityMatrix::new(HermitianMatrix::new(m / C64::new(t, 0.0)).unwrap()).unwrap()
}

pub fn hermitian_from(entries: &[f64], dim: usize) -> HermitianMatrix {
    let g = CMatrix::from_fn(dim, dim, |i, j| {
        C64::new(entries[2 * (i * dim + j)], entries[2 * (i * dim + j) + 1])
    });
    HermitianMatrix::new((&g + g.adjoint()) * C64::new(0.5, 0.0)).unwrap()
}

/// BKM relevance of `x̂` and `p̂` for the thermal mode `(u, v)` under
/// classical displacement noise, computed in a truncated number basis.
///
/// The observable is turned into a feature by `Ω_ρ`. A `1e-9` admixture of
/// the maximally mixed state keeps both `ρ` and its image strictly positive
/// on the truncated space.
pub fn fock_position_momentum_relevance(u: f64, v: f64, sigma_x: f64, sigma_p: f64) -> (f64, f64) {
    use infogeom::fock::FockSpace;
    use infogeom::gaussian::QuadraticHamiltonianSpec;
    use infogeom::geometry::{bkm_inner, omega, thermal_state_with_bound};

    let space = FockSpace::new(60, 200).unwrap();
    let spec = QuadraticHamiltonianSpec::particle(u, v).unwrap();
    let b = spec.blocks[0];
    let h = space.quadratic_hamiltonian(b.mx, b.mp);
    let thermal = thermal_state_with_bound(&h, spec.beta, 1e4).unwrap();
    let rho = thermal.state().mixed_with_identity(1e-9).unwrap();
    let chan = space.noise_channel(sigma_x, sigma_p, 21, 5.0).unwrap();
    let out = chan.apply_state(&rho).unwrap().mixed_with_identity(1e-9).unwrap();
    let eta = |f: [f64; 2]| {
        let x = omega(&rho, &space.field(f)).unwrap();
        let ex = chan.apply(&x).unwrap();
        bkm_inner(&out, &ex, &ex).unwrap() / bkm_inner(&rho, &x, &x).unwrap()
    };
    (eta([1.0, 0.0]), eta([0.0, 1.0]))
}
