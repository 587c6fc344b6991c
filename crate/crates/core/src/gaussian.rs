//! Bosonic Gaussian states and channels on phase space.
//!
//! Phase-space vectors are ordered `(x₁, p₁, x₂, p₂, …)` and the field
//! operator is `Φ̂_f = Σ f_x x̂ + f_p p̂`. Bilinear (not sesquilinear) forms are
//! used throughout, so complex test vectors enter analytically.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{LatticeSpec, ModeId, ModeKind};
use crate::linalg::{self, CMatrix, RMatrix, C64};
use crate::quadrature;

const PSD_TOL: f64 = 1e-12;
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Symplectic vector space with form `σ(f, g) = (f, Δg)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpace {
    n_modes: usize,
    delta: RMatrix,
}

impl PhaseSpace {
    /// Canonical form with 2×2 blocks `[[0, 1], [−1, 0]]`.
    pub fn canonical(n_modes: usize) -> Self {
        let mut delta = RMatrix::zeros(2 * n_modes, 2 * n_modes);
        for m in 0..n_modes {
            delta[(2 * m, 2 * m + 1)] = 1.0;
            delta[(2 * m + 1, 2 * m)] = -1.0;
        }
        Self { n_modes, delta }
    }

    pub fn new(delta: RMatrix) -> Result<Self> {
        let n = delta.nrows();
        if delta.ncols() != n || n % 2 != 0 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "symplectic form must be even-dimensional and square, got {}x{}",
                n,
                delta.ncols()
            )));
        }
        if (&delta + delta.transpose()).amax() > 1e-14 {
            return Err(Error::InvalidParameter("form is not antisymmetric".into()));
        }
        if delta.determinant().abs() < 1e-12 {
            return Err(Error::InvalidParameter("form is degenerate".into()));
        }
        Ok(Self {
            n_modes: n / 2,
            delta,
        })
    }

    /// Commutative limit `Δ = 0`, where the formalism reduces to the
    /// classical one. Not a symplectic space; useful for limit checks.
    pub fn commutative(n_modes: usize) -> Self {
        Self {
            n_modes,
            delta: RMatrix::zeros(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn delta(&self) -> &RMatrix {
        &self.delta
    }

    fn check<T>(&self, v: &[T]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    fn check_matrix(&self, m: &RMatrix) -> Result<()> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: m.nrows(),
            });
        }
        Ok(())
    }
}

fn bilinear(f: &[C64], m: &CMatrix, g: &[C64]) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    for (i, fi) in f.iter().enumerate() {
        for (j, gj) in g.iter().enumerate() {
            total += fi * m[(i, j)] * gj;
        }
    }
    total
}

fn real_bilinear(f: &[f64], m: &RMatrix, g: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, fi) in f.iter().enumerate() {
        for (j, gj) in g.iter().enumerate() {
            total += fi * m[(i, j)] * gj;
        }
    }
    total
}

/// `A + (i/2)Δ`.
fn quantum_form(cov: &RMatrix, delta: &RMatrix) -> CMatrix {
    CMatrix::from_fn(cov.nrows(), cov.ncols(), |i, j| {
        C64::new(cov[(i, j)], 0.5 * delta[(i, j)])
    })
}

fn min_hermitian_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(linalg::hermitian_eigen(m)?.0[0])
}

/// Phase `e^{−(i/2)(f,Δg)}` in `W_f W_g = e^{−(i/2)(f,Δg)} W_{f+g}`.
pub fn weyl_phase(space: &PhaseSpace, f: &[f64], g: &[f64]) -> Result<C64> {
    space.check(f)?;
    space.check(g)?;
    Ok((-0.5 * I * real_bilinear(f, &space.delta, g)).exp())
}

/// Centered Gaussian state with covariance `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    space: PhaseSpace,
    cov: RMatrix,
}

impl GaussianState {
    /// Requires `A` symmetric with `A + (i/2)Δ ≥ 0`.
    pub fn new(space: PhaseSpace, cov: RMatrix) -> Result<Self> {
        space.check_matrix(&cov)?;
        if (&cov - cov.transpose()).amax() > 1e-12 * cov.amax().max(1.0) {
            return Err(Error::InvalidParameter("covariance is not symmetric".into()));
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        let min = min_hermitian_eigenvalue(&quantum_form(&cov, &space.delta))?;
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(Self { space, cov })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn cov(&self) -> &RMatrix {
        &self.cov
    }
}

/// `Tr(ρ W_f) = e^{−½ fᵀAf}`.
pub fn char_value(state: &GaussianState, f: &[C64]) -> Result<C64> {
    state.space.check(f)?;
    Ok((-0.5 * bilinear(f, &linalg::to_complex(&state.cov), f)).exp())
}

/// `Tr(ρ Φ̂_f Φ̂_g) = fᵀ(A + (i/2)Δ)g`.
pub fn two_point(state: &GaussianState, f: &[C64], g: &[C64]) -> Result<C64> {
    state.space.check(f)?;
    state.space.check(g)?;
    Ok(bilinear(f, &quantum_form(&state.cov, &state.space.delta), g))
}

/// Channel `W_f ↦ W_{Xf} e^{−½(f,Yf)}`, acting on covariances as `XᵀAX + Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    x: RMatrix,
    y: RMatrix,
}

impl GaussianChannel {
    /// Requires `Y` symmetric and `Y − (i/2)XᵀΔX + (i/2)Δ ≥ 0`.
    pub fn new(space: &PhaseSpace, x: RMatrix, y: RMatrix) -> Result<Self> {
        space.check_matrix(&x)?;
        space.check_matrix(&y)?;
        if (&y - y.transpose()).amax() > 1e-12 * y.amax().max(1.0) {
            return Err(Error::InvalidParameter("noise matrix is not symmetric".into()));
        }
        let skew = &space.delta - x.transpose() * &space.delta * &x;
        let m = quantum_form(&y, &skew);
        let min = min_hermitian_eigenvalue(&m)?;
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(Self { x, y })
    }

    /// Additive classical noise `X = I`, `Y = noise`.
    pub fn classical_noise(space: &PhaseSpace, noise: RMatrix) -> Result<Self> {
        Self::new(space, RMatrix::identity(space.dim(), space.dim()), noise)
    }

    pub fn x(&self) -> &RMatrix {
        &self.x
    }

    pub fn y(&self) -> &RMatrix {
        &self.y
    }
}

pub fn evolve_covariance(state: &GaussianState, chan: &GaussianChannel) -> Result<GaussianState> {
    state.space.check_matrix(&chan.x)?;
    let cov = chan.x.transpose() * &state.cov * &chan.x + &chan.y;
    GaussianState::new(state.space.clone(), cov)
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// One decoupled mode of `H = ½(m_x x̂² + m_p p̂²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBlock {
    pub mx: f64,
    pub mp: f64,
    /// `coth(βω/2)`, kept separately so the ground-state limit stays finite.
    pub coth_half: f64,
}

impl ModeBlock {
    pub fn omega(&self) -> f64 {
        (self.mx * self.mp).sqrt()
    }
}

/// Mode-diagonal quadratic Hamiltonian at inverse temperature `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonianSpec {
    pub blocks: Vec<ModeBlock>,
    pub beta: f64,
}

impl QuadraticHamiltonianSpec {
    /// Single particle with thermal covariance
    /// `diag(½coth(β/2)u/v, ½coth(β/2)v/u)` where `coth(β/2) = uv`.
    pub fn particle(u: f64, v: f64) -> Result<Self> {
        if !(u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("u={u}, v={v}")));
        }
        let uv = u * v;
        if uv < 1.0 {
            return Err(Error::InvalidParameter(format!("uv = {uv} < 1")));
        }
        let beta = if uv == 1.0 {
            f64::INFINITY
        } else {
            ((uv + 1.0) / (uv - 1.0)).ln()
        };
        Ok(Self {
            blocks: vec![ModeBlock {
                mx: v / u,
                mp: u / v,
                coth_half: uv,
            }],
            beta,
        })
    }

    /// Free scalar field modes with `ω_k = √(k² + m²)`.
    pub fn field_modes(ks: &[f64], mass: f64, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {beta}")));
        }
        let blocks = ks
            .iter()
            .map(|&k| {
                let w2 = k * k + mass * mass;
                if !(w2 > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "mode k={k} has zero frequency"
                    )));
                }
                Ok(ModeBlock {
                    mx: w2,
                    mp: 1.0,
                    coth_half: coth(0.5 * beta * w2.sqrt()),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { blocks, beta })
    }

    pub fn n_modes(&self) -> usize {
        self.blocks.len()
    }

    pub fn space(&self) -> PhaseSpace {
        PhaseSpace::canonical(self.n_modes())
    }

    /// Block-diagonal `M` with `H = ½ rᵀMr`.
    pub fn generator(&self) -> RMatrix {
        let mut m = RMatrix::zeros(2 * self.n_modes(), 2 * self.n_modes());
        for (i, b) in self.blocks.iter().enumerate() {
            m[(2 * i, 2 * i)] = b.mx;
            m[(2 * i + 1, 2 * i + 1)] = b.mp;
        }
        m
    }

    /// Thermal covariance, per mode `(coth(βω/2)/2ω)·diag(m_p, m_x)`.
    pub fn thermal_covariance(&self) -> RMatrix {
        let mut a = RMatrix::zeros(2 * self.n_modes(), 2 * self.n_modes());
        for (i, b) in self.blocks.iter().enumerate() {
            let c = b.coth_half / (2.0 * b.omega());
            a[(2 * i, 2 * i)] = c * b.mp;
            a[(2 * i + 1, 2 * i + 1)] = c * b.mx;
        }
        a
    }

    pub fn thermal_state(&self) -> Result<GaussianState> {
        GaussianState::new(self.space(), self.thermal_covariance())
    }

    fn finite_beta(&self) -> Result<f64> {
        if self.beta.is_finite() {
            Ok(self.beta)
        } else {
            Err(Error::InvalidParameter(
                "ground state (uv = 1) has no finite inverse temperature".into(),
            ))
        }
    }
}

/// `s = arccoth(uv)` for the particle parametrization.
pub fn particle_s(u: f64, v: f64) -> Result<f64> {
    let uv = u * v;
    if !(uv > 1.0) {
        return Err(Error::InvalidParameter(format!("uv = {uv} must exceed 1")));
    }
    Ok(0.5 * ((uv + 1.0) / (uv - 1.0)).ln())
}

/// `R^A_s = exp(−i sβ MΔ)`, the imaginary-time canonical transformation
/// with `e^{−sβH} W_f e^{sβH} = W_{R_s f}`.
///
/// Per mode `(MΔ)² = −ω²`, so the exponential is
/// `cosh(sβω) − i sinh(sβω)/ω · MΔ`.
pub fn rs_matrix(spec: &QuadraticHamiltonianSpec, s: f64) -> Result<CMatrix> {
    let beta = spec.finite_beta()?;
    let n = spec.n_modes();
    let mut r = CMatrix::zeros(2 * n, 2 * n);
    for (i, b) in spec.blocks.iter().enumerate() {
        let w = b.omega();
        let t = s * beta * w;
        let (ch, sh) = (t.cosh(), t.sinh() / w);
        let (x, p) = (2 * i, 2 * i + 1);
        r[(x, x)] = C64::new(ch, 0.0);
        r[(p, p)] = C64::new(ch, 0.0);
        // MΔ = [[0, m_x], [−m_p, 0]]
        r[(x, p)] = -I * sh * b.mx;
        r[(p, x)] = I * sh * b.mp;
    }
    Ok(r)
}

const GEN_TOL: f64 = 1e-12;

/// `⟨⟨G_f, G_g⟩⟩_ρ = ∫₀¹ exp(fᵀ(A + (i/2)Δ)R_s g) ds` at the thermal state of `spec`.
pub fn gen_inner(spec: &QuadraticHamiltonianSpec, f: &[f64], g: &[f64]) -> Result<C64> {
    let space = spec.space();
    space.check(f)?;
    space.check(g)?;
    spec.finite_beta()?;
    let form = quantum_form(&spec.thermal_covariance(), space.delta());
    let fc: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
    let gc: Vec<C64> = g.iter().map(|&v| C64::new(v, 0.0)).collect();
    quadrature::integrate(
        |s: f64| {
            let r = rs_matrix(spec, s).expect("finite beta checked");
            let rg: Vec<C64> = (0..gc.len())
                .map(|i| (0..gc.len()).map(|j| r[(i, j)] * gc[j]).sum())
                .collect();
            bilinear(&fc, &form, &rg).exp()
        },
        0.0,
        1.0,
        GEN_TOL,
        0.0,
    )
}

/// Same inner product for an arbitrary covariance, quadratic generator and
/// (possibly commutative) phase space; `R_s` via the matrix exponential.
pub fn gen_inner_general(
    space: &PhaseSpace,
    cov: &RMatrix,
    generator: &RMatrix,
    beta: f64,
    f: &[f64],
    g: &[f64],
) -> Result<C64> {
    space.check(f)?;
    space.check(g)?;
    space.check_matrix(cov)?;
    space.check_matrix(generator)?;
    let form = quantum_form(cov, space.delta());
    let md = linalg::to_complex(&(generator * space.delta()));
    let fc: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
    let gc: Vec<C64> = g.iter().map(|&v| C64::new(v, 0.0)).collect();
    quadrature::integrate(
        |s: f64| {
            let r = (&md * (-I * s * beta)).exp();
            let rg: Vec<C64> = (0..gc.len())
                .map(|i| (0..gc.len()).map(|j| r[(i, j)] * gc[j]).sum())
                .collect();
            bilinear(&fc, &form, &rg).exp()
        },
        0.0,
        1.0,
        GEN_TOL,
        0.0,
    )
}

/// Position/momentum relevances of a single mode under additive classical
/// noise `Y = diag(σ_x, σ_p)`, by three closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleRelevance {
    /// Per-mode H-operator value `(1 + σ/A)⁻¹`.
    pub h_formula: (f64, f64),
    /// `1/(1 + 2vσ_x/coth(β/2))` and its momentum analogue.
    pub printed_formula: (f64, f64),
    /// Kubo–Mori ratio for a mean-shift direction,
    /// `(A/B)·f(ν_B)/f(ν_A)` with `f(ν) = ν ln((2ν+1)/(2ν−1))`.
    pub kubo_mori: (f64, f64),
}

fn kubo_mori_weight(nu: f64) -> f64 {
    if nu <= 0.5 {
        f64::INFINITY
    } else {
        nu * ((2.0 * nu + 1.0) / (2.0 * nu - 1.0)).ln()
    }
}

pub fn particle_mode_relevance(u: f64, v: f64, sigma_x: f64, sigma_p: f64) -> Result<ParticleRelevance> {
    let spec = QuadraticHamiltonianSpec::particle(u, v)?;
    if !(sigma_x >= 0.0 && sigma_p >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise variances {sigma_x}, {sigma_p} must be nonnegative"
        )));
    }
    let a = spec.thermal_covariance();
    let (ax, ap) = (a[(0, 0)], a[(1, 1)]);
    let (bx, bp) = (ax + sigma_x, ap + sigma_p);
    let coth_half = u * v;
    let (nu_a, nu_b) = ((ax * ap).sqrt(), (bx * bp).sqrt());
    let km = if sigma_x == 0.0 && sigma_p == 0.0 {
        1.0
    } else {
        kubo_mori_weight(nu_b) / kubo_mori_weight(nu_a)
    };
    Ok(ParticleRelevance {
        h_formula: (1.0 / (1.0 + sigma_x / ax), 1.0 / (1.0 + sigma_p / ap)),
        printed_formula: (
            1.0 / (1.0 + 2.0 * v * sigma_x / coth_half),
            1.0 / (1.0 + 2.0 * u * sigma_p / coth_half),
        ),
        kubo_mori: (ax / bx * km, ap / bp * km),
    })
}

/// `(η(Φ_k), η(Π_k))` of a free-field mode under smearing `σ` and field /
/// momentum noise `y_Φ`, `y_Π`.
pub fn field_mode_relevance(
    k: f64,
    mass: f64,
    beta: f64,
    y_phi: f64,
    y_pi: f64,
    sigma: f64,
) -> Result<(f64, f64)> {
    let omega = (k * k + mass * mass).sqrt();
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!("ω_k = 0 at k = {k}")));
    }
    if !(beta > 0.0 && y_phi >= 0.0 && y_pi >= 0.0 && sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "beta={beta}, y_phi={y_phi}, y_pi={y_pi}, sigma={sigma}"
        )));
    }
    let c = coth(0.5 * beta * omega);
    let smear = (k * k * sigma * sigma).exp();
    Ok((
        c / (c + 2.0 * omega * y_phi * smear),
        c / (c + 2.0 / omega * y_pi * smear),
    ))
}

/// Comparison of the thermal states of two momentum-cutoff Hamiltonians.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffReport {
    /// Modes present in both Hamiltonians (`|k| < 1/σ`).
    pub shared: Vec<(ModeId, f64)>,
    /// Modes present only in the regulator Hamiltonian (`1/σ ≤ |k| < 1/ε`).
    pub differing: Vec<(ModeId, f64)>,
    pub max_two_point_diff: f64,
    /// Largest difference over all Wick-ordered products up to the
    /// requested order.
    pub max_n_point_diff: f64,
}

pub const MAX_RELEVANT_ORDER: usize = 4;

fn wick(ops: &[usize], two: &CMatrix) -> C64 {
    if ops.len() % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let Some((&first, rest)) = ops.split_first() else {
        return C64::new(1.0, 0.0);
    };
    let mut total = C64::new(0.0, 0.0);
    for (pos, &other) in rest.iter().enumerate() {
        let mut remaining = rest.to_vec();
        remaining.remove(pos);
        total += two[(first, other)] * wick(&remaining, two);
    }
    total
}

fn combinations(n: usize, order: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if !prefix.is_empty() {
        out.push(prefix.clone());
    }
    if prefix.len() == order {
        return;
    }
    for k in start..n {
        prefix.push(k);
        combinations(n, order, k, prefix, out);
        prefix.pop();
    }
}

/// Compares the thermal states of `H_ε` (modes `|k| < 1/ε`) and `H_σ`
/// (modes `|k| < 1/σ`) on a free massive lattice field.
pub fn cutoff_equivalence(
    lattice: &LatticeSpec,
    mass: f64,
    beta: f64,
    sigma: f64,
    eps_cut: f64,
    relevant_order: usize,
) -> Result<CutoffReport> {
    if !(eps_cut > 0.0 && eps_cut <= sigma) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < eps_cut ≤ sigma, got eps_cut={eps_cut}, sigma={sigma}"
        )));
    }
    if relevant_order == 0 || relevant_order > MAX_RELEVANT_ORDER {
        return Err(Error::InvalidParameter(format!(
            "relevant_order {relevant_order} outside 1..={MAX_RELEVANT_ORDER}"
        )));
    }
    let modes = lattice.modes();
    let in_eps: Vec<_> = modes.iter().filter(|m| m.k_norm < 1.0 / eps_cut).collect();
    let sigma_ids: BTreeSet<&ModeId> = modes
        .iter()
        .filter(|m| m.k_norm < 1.0 / sigma)
        .map(|m| &m.id)
        .collect();
    let shared: Vec<_> = in_eps.iter().filter(|m| sigma_ids.contains(&m.id)).collect();
    let differing = in_eps
        .iter()
        .filter(|m| !sigma_ids.contains(&m.id))
        .map(|m| (m.id.clone(), m.k_norm))
        .collect();

    let two_point_for = |cut: f64| -> Result<CMatrix> {
        let included: Vec<f64> = modes
            .iter()
            .filter(|m| m.k_norm < 1.0 / cut)
            .map(|m| m.k_norm)
            .collect();
        let spec = QuadraticHamiltonianSpec::field_modes(&included, mass, beta)?;
        let form = quantum_form(&spec.thermal_covariance(), spec.space().delta());
        // Every retained mode of either Hamiltonian sorts first, so the
        // shared modes occupy the leading blocks of both matrices.
        let n = 2 * shared.len();
        Ok(form.view((0, 0), (n, n)).into_owned())
    };
    let two_eps = two_point_for(eps_cut)?;
    let two_sigma = two_point_for(sigma)?;
    let max_two_point_diff = linalg::max_abs(&(&two_eps - &two_sigma));

    let mut tuples = Vec::new();
    combinations(2 * shared.len(), relevant_order, 0, &mut Vec::new(), &mut tuples);
    let max_n_point_diff = tuples
        .iter()
        .map(|t| (wick(t, &two_eps) - wick(t, &two_sigma)).norm())
        .fold(0.0, f64::max);

    Ok(CutoffReport {
        shared: shared.iter().map(|m| (m.id.clone(), m.k_norm)).collect(),
        differing,
        max_two_point_diff,
        max_n_point_diff,
    })
}

/// Real mode kind label for reports.
pub fn mode_label(id: &ModeId) -> String {
    let kind = match id.kind {
        ModeKind::Cos => "cos",
        ModeKind::Sin => "sin",
    };
    let idx: Vec<String> = id.index.iter().map(|v| v.to_string()).collect();
    format!("{kind}[{}]", idx.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn weyl_phase_values() {
        let s = PhaseSpace::canonical(1);
        let f = [1.0, 0.0];
        let g = [0.0, 1.0];
        assert!((weyl_phase(&s, &f, &f).unwrap() - 1.0).norm() < 1e-16);
        let expect = C64::new(0.0, -0.5).exp();
        assert!((weyl_phase(&s, &f, &g).unwrap() - expect).norm() < 1e-16);
        assert!(weyl_phase(&s, &f, &[1.0]).is_err());
    }

    #[test]
    fn state_validity() {
        let s = PhaseSpace::canonical(1);
        assert!(GaussianState::new(s.clone(), RMatrix::identity(2, 2) * 0.5).is_ok());
        assert!(matches!(
            GaussianState::new(s, RMatrix::identity(2, 2) * 0.4),
            Err(Error::NotPositiveSemidefinite(_))
        ));
    }

    #[test]
    fn two_point_symmetries() {
        let spec = QuadraticHamiltonianSpec::particle(2.0, 1.0).unwrap();
        let st = spec.thermal_state().unwrap();
        let f = c(&[0.3, -1.2]);
        let g = c(&[0.7, 0.4]);
        let ff = two_point(&st, &f, &f).unwrap();
        assert!(ff.im.abs() < 1e-15 && ff.re > 0.0);
        let fg = two_point(&st, &f, &g).unwrap();
        let gf = two_point(&st, &g, &f).unwrap();
        assert!((fg - gf.conj()).norm() < 1e-15);
        assert!((char_value(&st, &c(&[0.0, 0.0])).unwrap() - 1.0).norm() < 1e-16);
    }

    #[test]
    fn noiseless_and_additive_channels() {
        let s = PhaseSpace::canonical(1);
        let st = GaussianState::new(s.clone(), RMatrix::identity(2, 2) * 0.8).unwrap();
        let id = GaussianChannel::new(&s, RMatrix::identity(2, 2), RMatrix::zeros(2, 2)).unwrap();
        assert_eq!(evolve_covariance(&st, &id).unwrap().cov(), st.cov());
        let add = GaussianChannel::classical_noise(&s, RMatrix::identity(2, 2) * 0.3).unwrap();
        let out = evolve_covariance(&st, &add).unwrap();
        assert!((out.cov() - RMatrix::identity(2, 2) * 1.1).amax() < 1e-15);
        // Pure attenuation without noise violates the uncertainty principle.
        assert!(GaussianChannel::new(&s, RMatrix::identity(2, 2) * 0.5, RMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn particle_spec_parameters() {
        let spec = QuadraticHamiltonianSpec::particle(2.0, 1.0).unwrap();
        assert!((spec.beta - 3f64.ln()).abs() < 1e-15);
        let a = spec.thermal_covariance();
        assert!((a[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((a[(1, 1)] - 0.5).abs() < 1e-15);
        assert!(QuadraticHamiltonianSpec::particle(0.5, 1.0).is_err());
        let ground = QuadraticHamiltonianSpec::particle(1.0, 1.0).unwrap();
        assert!(rs_matrix(&ground, 0.5).is_err());
    }

    #[test]
    fn rs_identity_at_zero() {
        let spec = QuadraticHamiltonianSpec::particle(2.0, 1.0).unwrap();
        let r = rs_matrix(&spec, 0.0).unwrap();
        assert!(linalg::max_abs(&(r - CMatrix::identity(2, 2))) < 1e-16);
    }

    #[test]
    fn gen_inner_at_zero() {
        let spec = QuadraticHamiltonianSpec::particle(2.0, 1.0).unwrap();
        let v = gen_inner(&spec, &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn particle_relevance_forms() {
        let r = particle_mode_relevance(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((r.printed_formula.0 - 0.5).abs() < 1e-15);
        assert!((r.h_formula.0 - 2.0 / 3.0).abs() < 1e-15);
        let none = particle_mode_relevance(2.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(none.h_formula, (1.0, 1.0));
        assert_eq!(none.printed_formula, (1.0, 1.0));
        assert_eq!(none.kubo_mori, (1.0, 1.0));
        assert!(particle_mode_relevance(0.5, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn field_mode_values() {
        let (phi, pi) = field_mode_relevance(0.0, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let c = coth(0.5);
        assert!((phi - c / (c + 2.0)).abs() < 1e-15);
        assert_eq!(pi, 1.0);
        assert_eq!(field_mode_relevance(0.4, 1.0, 2.0, 0.0, 0.0, 1.0).unwrap(), (1.0, 1.0));
        assert!(field_mode_relevance(0.0, 0.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn cutoff_identical_when_equal() {
        let lat = LatticeSpec::new(1, 16, 1.0).unwrap();
        let r = cutoff_equivalence(&lat, 1.0, 1.0, 0.5, 0.5, 2).unwrap();
        assert!(r.differing.is_empty());
        assert_eq!(r.max_two_point_diff, 0.0);
        assert!(cutoff_equivalence(&lat, 1.0, 1.0, 0.5, 0.6, 2).is_err());
        assert!(cutoff_equivalence(&lat, 1.0, 1.0, 0.5, 0.2, 5).is_err());
    }

    #[test]
    fn wick_two_and_four_point() {
        let two = CMatrix::from_fn(2, 2, |i, j| C64::new((i + j + 1) as f64, 0.0));
        assert_eq!(wick(&[0, 1], &two), two[(0, 1)]);
        let four = wick(&[0, 0, 1, 1], &two);
        let expect = two[(0, 0)] * two[(1, 1)] + two[(0, 1)] * two[(0, 1)] * 2.0;
        assert!((four - expect).norm() < 1e-14);
        assert_eq!(wick(&[0, 1, 1], &two), C64::new(0.0, 0.0));
    }
}
