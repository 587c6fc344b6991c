//! Finite-dimensional information geometry.
//!
//! All superoperators are evaluated in the eigenbasis of the state through
//! divided-difference kernels, so no quadrature enters the production path.

use std::ops::{Add, Deref, Sub};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{self, exprel, CMatrix, C64};

pub const DEFAULT_FLOOR: f64 = 1e-12;
pub const DEFAULT_EXPONENT_BOUND: f64 = 700.0;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;

/// Complex square matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    /// Validates Hermiticity (relative to the matrix scale) and stores the
    /// exactly symmetrized matrix.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare(m.nrows(), m.ncols()));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        let defect = linalg::hermitian_defect(&m);
        if defect > HERMITIAN_TOL * linalg::max_abs(&m).max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::from_raw(m))
    }

    pub(crate) fn from_raw(m: CMatrix) -> Self {
        Self {
            m: linalg::hermitize(&m),
        }
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let v = DVector::from_iterator(d.len(), d.iter().map(|&x| C64::new(x, 0.0)));
        Self {
            m: CMatrix::from_diagonal(&v),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.m).re
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            m: self.m.scale(c),
        }
    }

    /// Hilbert–Schmidt pairing `Re Tr(A B)`.
    pub fn hs_inner(&self, other: &HermitianMatrix) -> f64 {
        self.m
            .iter()
            .zip(other.m.transpose().iter())
            .map(|(a, b)| (a * b).re)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.m)
    }

    /// `self − (Tr self / d)·I`.
    pub fn traceless_part(&self) -> Self {
        let d = self.dim();
        let t = self.trace() / d as f64;
        Self {
            m: &self.m - CMatrix::identity(d, d).scale(t),
        }
    }

    pub fn eigen(&self) -> Result<(DVector<f64>, CMatrix)> {
        linalg::hermitian_eigen(&self.m)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { m: &self.m - &rhs.m }
    }
}

/// Traceless Hermitian tangent vector at a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Feature(HermitianMatrix);

impl Feature {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let t = h.trace();
        if t.abs() > TRACE_TOL * h.max_abs().max(1.0) * h.dim() as f64 {
            return Err(Error::InvalidTrace {
                expected: 0.0,
                got: t,
            });
        }
        Ok(Self(h))
    }

    /// Projects onto the traceless subspace.
    pub fn from_traceless_part(h: &HermitianMatrix) -> Self {
        Self(h.traceless_part())
    }

    pub fn into_inner(self) -> HermitianMatrix {
        self.0
    }
}

impl Deref for Feature {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// Hermitian covector; constants are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(HermitianMatrix);

impl Observable {
    pub fn new(h: HermitianMatrix) -> Self {
        Self(h)
    }

    pub fn into_inner(self) -> HermitianMatrix {
        self.0
    }
}

impl Deref for Observable {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix with its cached spectrum.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    base: HermitianMatrix,
    values: DVector<f64>,
    logs: DVector<f64>,
    vectors: CMatrix,
    floor: f64,
}

impl DensityMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        Self::with_floor(h, DEFAULT_FLOOR)
    }

    /// Like [`DensityMatrix::new`] with a custom strict-positivity floor.
    pub fn with_floor(h: HermitianMatrix, floor: f64) -> Result<Self> {
        let t = h.trace();
        if (t - 1.0).abs() > TRACE_TOL * (h.dim() as f64).max(1.0) {
            return Err(Error::InvalidTrace {
                expected: 1.0,
                got: t,
            });
        }
        let (values, vectors) = h.eigen()?;
        let min = values[0];
        if min < -HERMITIAN_TOL {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        let logs = values.map(|v| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY });
        Ok(Self {
            base: h,
            values,
            logs,
            vectors,
            floor,
        })
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(p))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let p = vec![1.0 / dim as f64; dim];
        Self::from_diagonal(&p).expect("uniform distribution is a valid state")
    }

    /// `(1−δ)ρ + δ·I/d`.
    pub fn mixed_with_identity(&self, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("mixing weight {delta}")));
        }
        let d = self.dim();
        let m = self.base.matrix().scale(1.0 - delta)
            + CMatrix::identity(d, d).scale(delta / d as f64);
        Self::with_floor(HermitianMatrix::from_raw(m), self.floor)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.values[0]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values[0] > self.floor
    }

    pub fn require_strict(&self) -> Result<()> {
        if self.is_strictly_positive() {
            Ok(())
        } else {
            Err(Error::NotStrictlyPositive {
                min: self.values[0],
                floor: self.floor,
            })
        }
    }

    /// `Tr(ρA)`.
    pub fn expectation(&self, a: &HermitianMatrix) -> f64 {
        self.base.hs_inner(a)
    }

    /// Matrix logarithm from the cached spectrum.
    pub fn log(&self) -> Result<HermitianMatrix> {
        self.require_strict()?;
        let diag = CMatrix::from_diagonal(&self.logs.map(|l| C64::new(l, 0.0)));
        Ok(HermitianMatrix::from_raw(
            &self.vectors * diag * self.vectors.adjoint(),
        ))
    }

    fn kernel_apply<K>(&self, y: &HermitianMatrix, kernel: K) -> Result<CMatrix>
    where
        K: Fn(usize, usize) -> f64,
    {
        self.require_strict()?;
        y.check_dim(self.dim())?;
        Ok(linalg::apply_spectral_kernel(&self.vectors, y.matrix(), kernel))
    }
}

/// Umegaki relative entropy `Tr ρ(log ρ − log σ)`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.require_strict()?;
    sigma.require_strict()?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let d = rho.dim();
    let overlap = rho.vectors.adjoint() * &sigma.vectors;
    let mut total = 0.0;
    for i in 0..d {
        let li = rho.values[i];
        let mut cross = 0.0;
        for k in 0..d {
            cross += overlap[(i, k)].norm_sqr() * sigma.logs[k];
        }
        total += li * (rho.logs[i] - cross);
    }
    Ok(total.max(0.0))
}

/// Fréchet derivative of the logarithm at ρ in direction `y`.
pub fn omega_inv(rho: &DensityMatrix, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (v, l) = (&rho.values, &rho.logs);
    let m = rho.kernel_apply(y, |i, j| 1.0 / (v[j] * exprel(l[i] - l[j])))?;
    Ok(HermitianMatrix::from_raw(m))
}

/// `∫₀¹ ρ^s A ρ^{1−s} ds`, the inverse of [`omega_inv`].
pub fn omega(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (v, l) = (&rho.values, &rho.logs);
    let m = rho.kernel_apply(a, |i, j| v[j] * exprel(l[i] - l[j]))?;
    Ok(HermitianMatrix::from_raw(m))
}

/// `∫₀¹ ρ^s A ρ^{−s} ds`.
///
/// The result is not Hermitian in general, so the raw matrix is returned.
pub fn theta_op(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<CMatrix> {
    let l = &rho.logs;
    rho.kernel_apply(a, |i, j| exprel(l[i] - l[j]))
}

/// BKM inner product `Tr(X Ω_ρ⁻¹(Y))`.
pub fn bkm_inner(rho: &DensityMatrix, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    x.check_dim(rho.dim())?;
    Ok(x.hs_inner(&omega_inv(rho, y)?))
}

/// Dual metric `Tr(A Ω_ρ(B))`.
pub fn dual_inner(rho: &DensityMatrix, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    a.check_dim(rho.dim())?;
    Ok(a.hs_inner(&omega(rho, b)?))
}

/// Dual metric through `Tr(ρ A Θ_ρ(B))`.
pub fn dual_inner_theta(
    rho: &DensityMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<f64> {
    a.check_dim(rho.dim())?;
    let t = theta_op(rho, b)?;
    Ok(linalg::trace(&(rho.matrix() * a.matrix() * t)).re)
}

/// Gibbs state `e^{−βH}/Z` with its Hamiltonian data.
#[derive(Debug, Clone)]
pub struct ThermalModel {
    pub hamiltonian: HermitianMatrix,
    pub beta: f64,
    pub partition: f64,
    state: DensityMatrix,
}

impl ThermalModel {
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }
}

pub fn thermal_state(h: &HermitianMatrix, beta: f64) -> Result<ThermalModel> {
    thermal_state_with_bound(h, beta, DEFAULT_EXPONENT_BOUND)
}

/// Thermal state, refusing spectra where `|βE|` exceeds `bound`.
pub fn thermal_state_with_bound(h: &HermitianMatrix, beta: f64, bound: f64) -> Result<ThermalModel> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta = {beta}")));
    }
    let (energies, vectors) = h.eigen()?;
    let worst = energies.iter().fold(0.0f64, |a, e| a.max((beta * e).abs()));
    if worst > bound {
        return Err(Error::Overflow {
            value: worst,
            bound,
        });
    }
    let weights = energies.map(|e| (-beta * e).exp());
    let z: f64 = weights.sum();
    let probs = weights / z;
    let diag = CMatrix::from_diagonal(&probs.map(|p| C64::new(p, 0.0)));
    let rho = HermitianMatrix::from_raw(&vectors * diag * vectors.adjoint());
    Ok(ThermalModel {
        hamiltonian: h.clone(),
        beta,
        partition: z,
        state: DensityMatrix::new(rho)?,
    })
}

/// `Tr e^{−H+εA}` with `A` centered at the thermal state of `H` (β = 1), so
/// the first-order term vanishes.
pub fn partition_first_order(h: &HermitianMatrix, a: &HermitianMatrix, eps: f64) -> Result<f64> {
    let model = thermal_state(h, 1.0)?;
    let mean = model.state().expectation(a);
    let centered = a - &HermitianMatrix::identity(a.dim()).scaled(mean);
    partition_perturbed(h, &centered, eps)
}

/// `Tr e^{−H+εA}` without centering.
pub fn partition_perturbed(h: &HermitianMatrix, a: &HermitianMatrix, eps: f64) -> Result<f64> {
    a.check_dim(h.dim())?;
    let shifted = h - &a.scaled(eps);
    Ok(thermal_state(&shifted, 1.0)?.partition)
}

/// BKM kernel `θ(x) = (x−1)/log x`.
pub fn bkm_kernel(x: f64) -> f64 {
    exprel(x.ln())
}

/// Symmetric-logarithmic-derivative kernel `θ(x) = (1+x)/2`.
pub fn sld_kernel(x: f64) -> f64 {
    0.5 * (1.0 + x)
}

const KERNEL_PROBES: [f64; 5] = [0.1, 0.5, 1.0, 3.0, 17.0];

/// Metric from an operator-monotone kernel: `Σ conj(X̃_ij) Ỹ_ij / (θ(λ_i/λ_j) λ_j)`
/// in the eigenbasis of ρ.
pub fn monotone_metric<F>(
    theta: F,
    rho: &DensityMatrix,
    x: &HermitianMatrix,
    y: &HermitianMatrix,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    rho.require_strict()?;
    x.check_dim(rho.dim())?;
    y.check_dim(rho.dim())?;
    for t in KERNEL_PROBES {
        let (a, b) = (theta(t), t * theta(1.0 / t));
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidKernel(format!("θ({t}) = {a}")));
        }
        if (a - b).abs() > 1e-9 * a.abs() {
            return Err(Error::InvalidKernel(format!("θ({t}) ≠ {t}·θ(1/{t})")));
        }
    }
    let u = &rho.vectors;
    let xt = u.adjoint() * x.matrix() * u;
    let yt = u.adjoint() * y.matrix() * u;
    let v = &rho.values;
    let mut total = 0.0;
    for j in 0..rho.dim() {
        for i in 0..rho.dim() {
            let k = theta(v[i] / v[j]);
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidKernel(format!("θ({}) = {k}", v[i] / v[j])));
            }
            total += (xt[(i, j)].conj() * yt[(i, j)]).re / (k * v[j]);
        }
    }
    Ok(total)
}
