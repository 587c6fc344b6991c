//! Gaussian prior on a line, Gaussian-convolution noise, its Hermite
//! eigenrelevance spectrum, and the two first-order flows of the quartic
//! model.

use std::f64::consts::{PI, SQRT_2};

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix};
use crate::quadrature;

pub const MAX_HERMITE_ORDER: usize = 30;
const MASS_TOL: f64 = 1e-6;

/// Uniform grid on `[lo, hi]` with `n` points, used with trapezoid weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl LineGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 3 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid [{lo}, {hi}] with {n} points"
            )));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }

    /// Trapezoid integral of sampled values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights().iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.points().into_iter().map(f).collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Centered Gaussian density of width `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPrior {
    pub tau: f64,
}

impl GaussianPrior {
    pub fn new(tau: f64) -> Result<Self> {
        check_positive("tau", tau)?;
        Ok(Self { tau })
    }

    pub fn density(&self, x: f64) -> f64 {
        std_normal_pdf(x / self.tau) / self.tau
    }

    pub fn sample(&self, grid: &LineGrid) -> Vec<f64> {
        grid.sample(|x| self.density(x))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

/// Convolution of a sampled density with a centered Gaussian of width `sigma`.
///
/// Widths below the grid spacing integrate the piecewise-linear interpolant
/// of `p` exactly, so the narrow-kernel limit reproduces `p`.
pub fn convolve(grid: &LineGrid, p: &[f64], sigma: f64) -> Result<Vec<f64>> {
    check_positive("sigma", sigma)?;
    grid.check_len(p.len())?;
    if p.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidParameter("density has negative entries".into()));
    }
    let mass = grid.integrate(p);
    if (mass - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidParameter(format!("density mass {mass} ≠ 1")));
    }
    let xs = grid.points();
    let w = grid.weights();
    let loss: f64 = (0..grid.n)
        .map(|j| {
            let inside = std_normal_cdf((grid.hi - xs[j]) / sigma)
                - std_normal_cdf((grid.lo - xs[j]) / sigma);
            w[j] * p[j] * (1.0 - inside)
        })
        .sum();
    if loss > MASS_TOL {
        return Err(Error::GridTooNarrow(loss));
    }
    let h = grid.spacing();
    if sigma >= h {
        let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
        Ok((0..grid.n)
            .map(|i| {
                (0..grid.n)
                    .map(|j| {
                        let z = (xs[i] - xs[j]) / sigma;
                        w[j] * p[j] * norm * (-0.5 * z * z).exp()
                    })
                    .sum()
            })
            .collect())
    } else {
        let reach = (40.0 * sigma / h).ceil() as usize + 1;
        Ok((0..grid.n)
            .map(|i| {
                let first = i.saturating_sub(reach);
                let last = (i + reach).min(grid.n - 1);
                (first..last)
                    .map(|j| {
                        let slope = (p[j + 1] - p[j]) / h;
                        let a = p[j] + slope * (xs[i] - xs[j]);
                        let (t0, t1) = ((xs[j] - xs[i]) / sigma, (xs[j + 1] - xs[i]) / sigma);
                        a * (std_normal_cdf(t1) - std_normal_cdf(t0))
                            + slope * sigma * (std_normal_pdf(t0) - std_normal_pdf(t1))
                    })
                    .sum()
            })
            .collect())
    }
}

/// Ratio `α = (σ² + τ²)/τ²`.
pub fn alpha(tau: f64, sigma: f64) -> f64 {
    (sigma * sigma + tau * tau) / (tau * tau)
}

fn log_kernel(tau: f64, sigma: f64) -> impl Fn(f64, f64) -> f64 {
    let a = alpha(tau, sigma);
    let s2 = tau * tau * (a * a - 1.0);
    let log_norm = a.ln() - 0.5 * (2.0 * PI * s2).ln();
    move |x, y| {
        let d = x - a * y;
        log_norm - d * d / (2.0 * s2)
    }
}

/// Applies `E*R*`, the integral kernel
/// `α/(√(2π(α²−1))τ) · exp(−(x−αy)²/(2τ²(α²−1)))`, by trapezoid quadrature.
pub fn estar_rstar(grid: &LineGrid, a: &[f64], tau: f64, sigma: f64) -> Result<Vec<f64>> {
    check_positive("tau", tau)?;
    check_positive("sigma", sigma)?;
    grid.check_len(a.len())?;
    let lk = log_kernel(tau, sigma);
    let xs = grid.points();
    let w = grid.weights();
    Ok(xs
        .iter()
        .map(|&x| {
            xs.iter()
                .zip(&w)
                .zip(a)
                .map(|((&y, &wy), &ay)| {
                    let l = lk(x, y);
                    if l < -745.0 {
                        0.0
                    } else {
                        wy * l.exp() * ay
                    }
                })
                .sum()
        })
        .collect())
}

/// Largest kernel mass that falls outside the grid, over all grid points.
pub fn kernel_truncation(grid: &LineGrid, tau: f64, sigma: f64) -> f64 {
    let a = alpha(tau, sigma);
    let width = tau * (a * a - 1.0).sqrt() / a;
    grid.points()
        .iter()
        .map(|&x| {
            let c = x / a;
            1.0 - (std_normal_cdf((grid.hi - c) / width) - std_normal_cdf((grid.lo - c) / width))
        })
        .fold(0.0, f64::max)
}

/// Normalized probabilists' Hermite polynomial `He_n(x/τ)/√(n!)`.
pub fn hermite_value(n: usize, tau: f64, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::InvalidParameter(format!(
            "Hermite order {n} exceeds {MAX_HERMITE_ORDER}"
        )));
    }
    check_positive("tau", tau)?;
    let z = x / tau;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = (z * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

pub fn hermite_observable(grid: &LineGrid, n: usize, tau: f64) -> Result<Vec<f64>> {
    grid.points()
        .into_iter()
        .map(|x| hermite_value(n, tau, x))
        .collect()
}

/// Hermite generating function `exp(xt/τ − t²/2)`.
pub fn generating_function(grid: &LineGrid, t: f64, tau: f64) -> Vec<f64> {
    grid.sample(|x| (x * t / tau - 0.5 * t * t).exp())
}

/// Closed-form relevances `α^{−n}` for `n = 0..=n_max`.
pub fn relevance_spectrum(tau: f64, sigma: f64, n_max: usize) -> Result<Vec<(usize, f64)>> {
    check_positive("tau", tau)?;
    check_positive("sigma", sigma)?;
    if n_max > MAX_HERMITE_ORDER {
        return Err(Error::InvalidParameter(format!(
            "n_max {n_max} exceeds {MAX_HERMITE_ORDER}"
        )));
    }
    let a = alpha(tau, sigma);
    Ok((0..=n_max).map(|n| (n, a.powi(-(n as i32)))).collect())
}

/// Leading eigenpairs of the discretized kernel, with the overlap of each
/// eigenvector against the matching weighted Hermite observable.
#[derive(Debug, Clone)]
pub struct KernelSpectrum {
    pub eigenvalues: Vec<f64>,
    pub overlaps: Vec<f64>,
}

/// Numerical route to the spectrum: the kernel matrix conjugated by
/// `√(p(x)·w)` is symmetric, and its eigenvectors are `√(p w)·A_n`.
pub fn kernel_spectrum(grid: &LineGrid, tau: f64, sigma: f64, count: usize) -> Result<KernelSpectrum> {
    check_positive("tau", tau)?;
    check_positive("sigma", sigma)?;
    if count == 0 || count > MAX_HERMITE_ORDER + 1 {
        return Err(Error::InvalidParameter(format!("eigenpair count {count}")));
    }
    let xs = grid.points();
    let w = grid.weights();
    let lk = log_kernel(tau, sigma);
    let log_p: Vec<f64> = xs.iter().map(|x| -x * x / (2.0 * tau * tau)).collect();
    let s = RMatrix::from_fn(grid.n, grid.n, |i, j| {
        let l = 0.5 * (log_p[i] - log_p[j]) + lk(xs[i], xs[j]);
        if l < -745.0 {
            0.0
        } else {
            (w[i] * w[j]).sqrt() * l.exp()
        }
    });
    let s = (&s + s.transpose()) * 0.5;
    let (values, vectors) = linalg::top_symmetric_eigenpairs(&s, count)?;
    let prior = GaussianPrior::new(tau)?;
    let mut overlaps = Vec::with_capacity(count);
    for n in 0..count {
        let u: Vec<f64> = xs
            .iter()
            .zip(&w)
            .map(|(&x, &wx)| Ok((prior.density(x) * wx).sqrt() * hermite_value(n, tau, x)?))
            .collect::<Result<_>>()?;
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dot: f64 = u.iter().zip(vectors.column(n).iter()).map(|(a, b)| a * b).sum();
        overlaps.push(dot.abs() / norm);
    }
    Ok(KernelSpectrum {
        eigenvalues: values,
        overlaps,
    })
}

/// Thermal density `e^{−H}` with `H = x²/2τ² + λx⁴/τ⁴ + εx⁶/τ⁶`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticModel {
    pub tau: f64,
    pub lam: f64,
    pub eps: f64,
}

impl QuarticModel {
    /// Rejects Hamiltonians that are unbounded below.
    pub fn new(tau: f64, lam: f64, eps: f64) -> Result<Self> {
        check_positive("tau", tau)?;
        if eps < 0.0 {
            return Err(Error::NonNormalizable(format!("sextic coupling {eps} < 0")));
        }
        if eps == 0.0 && lam < 0.0 {
            return Err(Error::NonNormalizable(format!(
                "quartic coupling {lam} < 0 without a regulator"
            )));
        }
        Ok(Self { tau, lam, eps })
    }

    pub fn gaussian(tau: f64) -> Result<Self> {
        Self::new(tau, 0.0, 0.0)
    }

    /// Hamiltonian in the scaled variable `z = x/τ`.
    fn reduced(&self, z: f64) -> f64 {
        let z2 = z * z;
        z2 * (0.5 + z2 * (self.lam + z2 * self.eps))
    }

    pub fn hamiltonian(&self, x: f64) -> f64 {
        self.reduced(x / self.tau)
    }

    /// Expectation of `f(x)` under `e^{−H}/Z`, for even-symmetric weight.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let reach = self.support_bound();
        let tau = self.tau;
        let weight = |z: f64| (-self.reduced(z)).exp();
        let den: f64 = quadrature::integrate(|z: f64| 2.0 * weight(z), 0.0, reach, 1e-300, 1e-14)?;
        // Absolute target relative to the normalization, so expectations
        // that are close to zero still converge.
        let num: f64 = quadrature::integrate(
            |z: f64| (f(z * tau) + f(-z * tau)) * weight(z),
            0.0,
            reach,
            1e-15 * den,
            1e-14,
        )?;
        Ok(num / den)
    }

    /// Scaled radius beyond which `z^{30} e^{−H}` is negligible.
    fn support_bound(&self) -> f64 {
        let mut z: f64 = 1.0;
        while z < 1e4 {
            let tail = self.reduced(z) - 30.0 * z.ln();
            let slope = z * (1.0 + z * z * (4.0 * self.lam + 6.0 * self.eps * z * z)) - 30.0 / z;
            if tail > 80.0 && slope > 0.0 {
                return z;
            }
            z += 0.5;
        }
        z
    }
}

/// `⟨x^k⟩` under the model's thermal density.
pub fn moment(model: &QuarticModel, k: u32) -> Result<f64> {
    if k % 2 == 1 {
        return Err(Error::InvalidParameter(format!("odd moment order {k}")));
    }
    model.expectation(|x| x.powi(k as i32))
}

/// Statistical-physics step `τ₁ = (1 − 6λ)τ`.
pub fn stat_flow(tau: f64, lam: f64) -> f64 {
    (1.0 - 6.0 * lam) * tau
}

/// Couplings small enough for the first-order flows to be meaningful.
pub fn first_order_regime(lam: f64, eps: f64) -> bool {
    lam.abs() <= 0.05 && eps.abs() <= 0.05
}

/// One point of the regulator flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowPoint {
    pub eps: f64,
    pub tau: f64,
    pub lam: f64,
}

/// First-order regulator flow `λ(ε) = λ_phys − 15ε`,
/// `τ(ε) = τ_phys(1 + 6λ_phys − 45ε)`.
pub fn qft_flow(tau_phys: f64, lam_phys: f64, eps: f64) -> FlowPoint {
    FlowPoint {
        eps,
        tau: tau_phys * (1.0 + 6.0 * lam_phys - 45.0 * eps),
        lam: lam_phys - 15.0 * eps,
    }
}

/// A flow point with the drift of `⟨A₂⟩` and `⟨A₄⟩` (observables at
/// `τ_phys`) relative to the unregulated model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSample {
    pub point: FlowPoint,
    pub drift_a2: f64,
    pub drift_a4: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub tau_phys: f64,
    pub lam_phys: f64,
    pub samples: Vec<FlowSample>,
}

fn relevant_expectations(point: &FlowPoint, tau_phys: f64) -> Result<(f64, f64)> {
    let model = QuarticModel::new(point.tau, point.lam, point.eps)?;
    let a2 = model.expectation(|x| hermite_value(2, tau_phys, x).unwrap_or(f64::NAN))?;
    let a4 = model.expectation(|x| hermite_value(4, tau_phys, x).unwrap_or(f64::NAN))?;
    Ok((a2, a4))
}

/// Follows the regulator flow over `eps_grid`, measuring expectation drift.
pub fn qft_flow_trajectory(tau_phys: f64, lam_phys: f64, eps_grid: &[f64]) -> Result<FlowResult> {
    check_positive("tau_phys", tau_phys)?;
    let (base2, base4) = relevant_expectations(&qft_flow(tau_phys, lam_phys, 0.0), tau_phys)?;
    let samples = eps_grid
        .iter()
        .map(|&eps| {
            let point = qft_flow(tau_phys, lam_phys, eps);
            let (a2, a4) = relevant_expectations(&point, tau_phys)?;
            Ok(FlowSample {
                point,
                drift_a2: a2 - base2,
                drift_a4: a4 - base4,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FlowResult {
        tau_phys,
        lam_phys,
        samples,
    })
}
