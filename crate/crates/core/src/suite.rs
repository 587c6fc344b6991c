//! Randomized sweep of the metric identities on small states and channels.

use rand::Rng;

use crate::channels;
use crate::error::Result;
use crate::geometry::{self, DensityMatrix, HermitianMatrix};
use crate::random;

/// Step used for the second-order expansion of the relative entropy.
pub const EXPANSION_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub instances: usize,
    /// Largest `D(E(ρ),E(σ)) − D(ρ,σ)`; monotonicity wants this `≤ 0`.
    pub max_monotonicity_violation: f64,
    pub min_relevance: f64,
    pub max_relevance: f64,
    /// Largest `|Ω(Ω⁻¹(Y)) − Y|`, relative to `|Y|`.
    pub max_inverse_residual: f64,
    /// Largest relative gap between the BKM inner product and the
    /// monotone-metric form with `θ(x) = (x−1)/log x`.
    pub max_metric_gap: f64,
    /// Measured `D(ρ+εX, ρ)/(ε²⟨X,X⟩_ρ)`, symmetrized in `±ε`.
    pub expansion_constants: Vec<f64>,
}

impl SuiteReport {
    pub fn expansion_mean(&self) -> f64 {
        self.expansion_constants.iter().sum::<f64>() / self.expansion_constants.len() as f64
    }

    /// `(max − min)/mean` of the expansion constants.
    pub fn expansion_spread(&self) -> f64 {
        let (lo, hi) = self
            .expansion_constants
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &c| (a.min(c), b.max(c)));
        (hi - lo) / self.expansion_mean()
    }
}

fn shifted(rho: &DensityMatrix, x: &HermitianMatrix, eps: f64) -> Result<DensityMatrix> {
    DensityMatrix::new(rho.hermitian() + &x.scaled(eps))
}

/// Runs `instances` random cases with dimensions in 2..=4.
pub fn run(instances: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = random::rng(seed);
    let mut report = SuiteReport {
        instances,
        max_monotonicity_violation: f64::NEG_INFINITY,
        min_relevance: f64::INFINITY,
        max_relevance: f64::NEG_INFINITY,
        max_inverse_residual: 0.0,
        max_metric_gap: 0.0,
        expansion_constants: Vec::with_capacity(instances),
    };
    for _ in 0..instances {
        let d = rng.random_range(2..=4);
        let d_out = rng.random_range(2..=4);
        let n_kraus = rng.random_range(2..=4);
        let rho = random::density(&mut rng, d, 0.2);
        let sigma = random::density(&mut rng, d, 0.2);
        let e = random::channel(&mut rng, d, d_out, n_kraus)?;

        let before = geometry::relative_entropy(&rho, &sigma)?;
        let after = geometry::relative_entropy(&e.apply_state(&rho)?, &e.apply_state(&sigma)?)?;
        report.max_monotonicity_violation = report.max_monotonicity_violation.max(after - before);

        let x = random::traceless(&mut rng, d);
        let eta = channels::relevance(&e, &rho, &x)?;
        report.min_relevance = report.min_relevance.min(eta);
        report.max_relevance = report.max_relevance.max(eta);

        let y = random::hermitian(&mut rng, d);
        let back = geometry::omega(&rho, &geometry::omega_inv(&rho, &y)?)?;
        report.max_inverse_residual = report
            .max_inverse_residual
            .max((&back - &y).max_abs() / y.max_abs());

        let z = random::traceless(&mut rng, d);
        let bkm = geometry::bkm_inner(&rho, &x, &z)?;
        let mono = geometry::monotone_metric(geometry::bkm_kernel, &rho, &x, &z)?;
        let scale = geometry::bkm_inner(&rho, &x, &x)?.max(geometry::bkm_inner(&rho, &z, &z)?);
        report.max_metric_gap = report.max_metric_gap.max((bkm - mono).abs() / scale);

        // Unit operator norm keeps ρ ± εX well inside the positive cone.
        let (vals, _) = x.eigen()?;
        let unit = x.scaled(1.0 / vals.amax());
        let h = EXPANSION_STEP;
        let plus = geometry::relative_entropy(&shifted(&rho, &unit, h)?, &rho)?;
        let minus = geometry::relative_entropy(&shifted(&rho, &unit, -h)?, &rho)?;
        let norm = geometry::bkm_inner(&rho, &unit, &unit)?;
        report
            .expansion_constants
            .push((plus + minus) / (2.0 * h * h * norm));
    }
    Ok(report)
}
