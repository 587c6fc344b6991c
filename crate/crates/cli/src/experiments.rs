//! One function per experiment. Each reads a validated config and returns
//! a result table.

use infogeom::channels::{build_channel, eigenrelevance, ChannelKind, Subsystem};
use infogeom::field::{self, covariance_massive, FieldChannel, LatticeSpec};
use infogeom::fock::FockSpace;
use infogeom::gaussian::{self, cutoff_equivalence, mode_label, QuadraticHamiltonianSpec};
use infogeom::geometry::{bkm_inner, omega, thermal_state_with_bound, DensityMatrix};
use infogeom::linalg::RMatrix;
use infogeom::particle::{self, LineGrid, QuarticModel};
use infogeom::{random, suite};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Context, Result};
use crate::table::ResultTable;

fn grid(c: &ExperimentConfig) -> Result<LineGrid> {
    LineGrid::new(c.real("grid_lo"), c.real("grid_hi"), c.usize("grid_points")).context("grid")
}

fn lattice(c: &ExperimentConfig) -> Result<LatticeSpec> {
    LatticeSpec::new(c.usize("d"), c.usize("n_per_side"), c.real("spacing")).context("lattice")
}

pub fn particle_spectrum(c: &ExperimentConfig) -> Result<ResultTable> {
    let (tau, sigma) = (c.real("tau"), c.real("sigma"));
    let count = c.usize("n_max");
    if count > particle::MAX_HERMITE_ORDER + 1 {
        return Err(CliError::config(
            Some("n_max"),
            format!("at most {} eigenpairs", particle::MAX_HERMITE_ORDER + 1),
        ));
    }
    let closed = particle::relevance_spectrum(tau, sigma, count - 1).context("closed-form spectrum")?;
    let numeric = particle::kernel_spectrum(&grid(c)?, tau, sigma, count).context("kernel eigensolve")?;
    let mut t = ResultTable::new(&["n", "eta_closed", "eta_numeric", "overlap"]);
    for (n, eta) in closed {
        t.push(vec![n.into(), eta.into(), numeric.eigenvalues[n].into(), numeric.overlaps[n].into()]);
    }
    Ok(t)
}

pub fn ptrace_relevance(c: &ExperimentConfig) -> Result<ResultTable> {
    let dims = (c.usize("dim_a"), c.usize("dim_b"));
    let traced = match c.choice("traced") {
        "A" => Subsystem::A,
        _ => Subsystem::B,
    };
    let e = build_channel(ChannelKind::PartialTrace { dims, traced }).context("partial trace")?;
    let rho = DensityMatrix::maximally_mixed(dims.0 * dims.1);
    let spec = eigenrelevance(&e, &rho).context("eigenrelevance")?;
    let mut t = ResultTable::new(&["eigenvalue", "multiplicity"]);
    for (v, m) in spec.multiplicities(c.real("tol")) {
        t.push(vec![v.into(), m.into()]);
    }
    Ok(t)
}

pub fn qft_flow(c: &ExperimentConfig) -> Result<ResultTable> {
    let res = particle::qft_flow_trajectory(c.real("tau_phys"), c.real("lam_phys"), c.list("eps"))
        .context("flow trajectory")?;
    let mut t = ResultTable::new(&["eps", "tau", "lam", "drift_A2", "drift_A4"]);
    for s in res.samples {
        t.push(vec![
            s.point.eps.into(),
            s.point.tau.into(),
            s.point.lam.into(),
            s.drift_a2.into(),
            s.drift_a4.into(),
        ]);
    }
    Ok(t)
}

pub fn stat_flow(c: &ExperimentConfig) -> Result<ResultTable> {
    let tau = c.real("tau");
    let mut t = ResultTable::new(&["lam", "m2_quartic", "m2_first_order", "tau_flowed", "m2_flowed"]);
    for &lam in c.list("lam") {
        let quartic = QuarticModel::new(tau, lam, 0.0).context("quartic model")?;
        let m2 = particle::moment(&quartic, 2).context("quartic moment")?;
        let tau1 = particle::stat_flow(tau, lam);
        let flowed = QuarticModel::gaussian(tau1).context("flowed Gaussian")?;
        let g2 = particle::moment(&flowed, 2).context("Gaussian moment")?;
        t.push(vec![
            lam.into(),
            m2.into(),
            ((1.0 - 12.0 * lam) * tau * tau).into(),
            tau1.into(),
            g2.into(),
        ]);
    }
    Ok(t)
}

pub fn generating_function(c: &ExperimentConfig) -> Result<ResultTable> {
    let (tau, sigma) = (c.real("tau"), c.real("sigma"));
    let g = grid(c)?;
    let alpha = particle::alpha(tau, sigma);
    let mut t = ResultTable::new(&["t", "alpha", "max_abs_error"]);
    for &s in c.list("t") {
        let out = particle::estar_rstar(&g, &particle::generating_function(&g, s, tau), tau, sigma)
            .context("kernel application")?;
        let expect = particle::generating_function(&g, s / alpha, tau);
        let err = out.iter().zip(&expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        t.push(vec![s.into(), alpha.into(), err.into()]);
    }
    Ok(t)
}

fn field_setup(c: &ExperimentConfig) -> Result<(field::FieldCovariance, FieldChannel)> {
    let lat = lattice(c)?;
    let cov = covariance_massive(c.real("beta"), c.real("mass"), &lat, c.real("mass") == 0.0)
        .context("field covariance")?;
    let chan = FieldChannel::new(c.real("sigma"), c.real("h")).context("field channel")?;
    Ok((cov, chan))
}

pub fn field_mode_relevance(c: &ExperimentConfig) -> Result<ResultTable> {
    let (cov, chan) = field_setup(c)?;
    let n = c.usize("degree");
    if n > particle::MAX_HERMITE_ORDER {
        return Err(CliError::config(Some("degree"), "degree too large"));
    }
    let mut t = ResultTable::new(&["mode", "k_norm", "a_k", "eta", "eta_particle"]);
    for (m, &a) in cov.modes.iter().zip(&cov.a) {
        let eta = field::mode_relevance(a, chan.h, chan.sigma, m.k_norm, n as u32);
        let s = chan.h * (0.5 * m.k_norm * m.k_norm * chan.sigma * chan.sigma).exp();
        let reduced = particle::relevance_spectrum(1.0 / a.sqrt(), s, n).context("particle spectrum")?[n].1;
        t.push(vec![mode_label(&m.id).into(), m.k_norm.into(), a.into(), eta.into(), reduced.into()]);
    }
    Ok(t)
}

pub fn quadratic_relevance(c: &ExperimentConfig) -> Result<ResultTable> {
    let (cov, chan) = field_setup(c)?;
    let q = field::quadratic_observable_relevance(&cov, &chan);
    let mut t = ResultTable::new(&["modes", "ratio", "numerator", "denominator"]);
    t.push(vec![cov.modes.len().into(), q.ratio.into(), q.numerator.into(), q.denominator.into()]);
    Ok(t)
}

pub fn h_operator(c: &ExperimentConfig) -> Result<ResultTable> {
    let n = c.usize("n");
    let mut rng = random::rng(c.int("seed") as u64);
    let mut positive = || {
        let g = random::real_gaussian(&mut rng, n, n);
        &g * g.transpose() + RMatrix::identity(n, n) * 0.1
    };
    let mut t = ResultTable::new(&["instance", "symmetry_defect", "orthonormality_defect", "eta_min", "eta_max"]);
    for i in 0..c.usize("instances") {
        let (a, x, y) = (positive(), positive(), positive());
        let op = field::h_operator(&a, &x, &y).context("H-operator")?;
        let sym = (&a * &op.h - op.h.transpose() * &a).amax();
        let ortho = (op.basis.transpose() * &a * &op.basis - RMatrix::identity(n, n)).amax();
        let lo = op.eta.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = op.eta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        t.push(vec![i.into(), sym.into(), ortho.into(), lo.into(), hi.into()]);
    }
    Ok(t)
}

/// Fock-basis BKM relevance of `x̂` and `p̂`; the feature is `Ω_ρ` of the
/// observable and `mixing` of the maximally mixed state keeps the truncated
/// states strictly positive.
fn fock_relevance(c: &ExperimentConfig, spec: &QuadraticHamiltonianSpec) -> Result<(f64, f64)> {
    let space = FockSpace::new(c.usize("fock_levels"), c.usize("fock_work")).context("Fock space")?;
    let b = spec.blocks[0];
    let h = space.quadratic_hamiltonian(b.mx, b.mp);
    let mixing = c.real("mixing");
    let thermal = thermal_state_with_bound(&h, spec.beta, 1e4).context("Fock thermal state")?;
    let rho = thermal.state().mixed_with_identity(mixing).context("mixing")?;
    let chan = space
        .noise_channel(c.real("sigma_x"), c.real("sigma_p"), c.usize("grid_nodes"), c.real("grid_span"))
        .context("displacement channel")?;
    let out = chan
        .apply_state(&rho)
        .and_then(|s| s.mixed_with_identity(mixing))
        .context("channel output")?;
    let eta = |f: [f64; 2]| -> infogeom::Result<f64> {
        let x = omega(&rho, &space.field(f))?;
        let ex = chan.apply(&x)?;
        Ok(bkm_inner(&out, &ex, &ex)? / bkm_inner(&rho, &x, &x)?)
    };
    Ok((eta([1.0, 0.0]).context("x relevance")?, eta([0.0, 1.0]).context("p relevance")?))
}

pub fn quantum_particle(c: &ExperimentConfig) -> Result<ResultTable> {
    let (u, v) = (c.real("u"), c.real("v"));
    let r = gaussian::particle_mode_relevance(u, v, c.real("sigma_x"), c.real("sigma_p")).context("closed forms")?;
    let spec = QuadraticHamiltonianSpec::particle(u, v).context("particle spec")?;
    let fock = fock_relevance(c, &spec)?;
    let tol = c.real("match_tol");
    let mut t = ResultTable::new(&["observable", "h_formula", "printed_formula", "kubo_mori", "fock", "matches"]);
    let rows = [
        ("x", r.h_formula.0, r.printed_formula.0, r.kubo_mori.0, fock.0),
        ("p", r.h_formula.1, r.printed_formula.1, r.kubo_mori.1, fock.1),
    ];
    for (name, hf, pf, km, fk) in rows {
        let hit = |v: f64| (v - fk).abs() < tol;
        let matches = match (hit(hf), hit(pf)) {
            (true, false) => "h_formula",
            (false, true) => "printed_formula",
            (true, true) => "both",
            (false, false) => "neither",
        };
        t.push(vec![name.into(), hf.into(), pf.into(), km.into(), fk.into(), matches.into()]);
    }
    t.note("beta", spec.beta);
    t.note("s", gaussian::particle_s(u, v).unwrap_or(f64::INFINITY));
    Ok(t)
}

pub fn quantum_field_mode(c: &ExperimentConfig) -> Result<ResultTable> {
    let (mass, beta) = (c.real("mass"), c.real("beta"));
    let mut t = ResultTable::new(&["k", "omega", "eta_phi", "eta_pi"]);
    for &k in c.list("k") {
        let (phi, pi) =
            gaussian::field_mode_relevance(k, mass, beta, c.real("y_phi"), c.real("y_pi"), c.real("sigma"))
                .context("field mode relevance")?;
        t.push(vec![k.into(), (k * k + mass * mass).sqrt().into(), phi.into(), pi.into()]);
    }
    Ok(t)
}

pub fn cutoff(c: &ExperimentConfig) -> Result<ResultTable> {
    let lat = lattice(c)?;
    let rep = cutoff_equivalence(
        &lat,
        c.real("mass"),
        c.real("beta"),
        c.real("sigma"),
        c.real("eps_cut"),
        c.usize("relevant_order"),
    )
    .context("cutoff equivalence")?;
    let mut t = ResultTable::new(&["mode", "k_norm", "set"]);
    for (id, k) in &rep.shared {
        t.push(vec![mode_label(id).into(), (*k).into(), "shared".into()]);
    }
    for (id, k) in &rep.differing {
        t.push(vec![mode_label(id).into(), (*k).into(), "differing".into()]);
    }
    t.note("max_two_point_diff", rep.max_two_point_diff);
    t.note("max_n_point_diff", rep.max_n_point_diff);
    Ok(t)
}

pub fn metric_suite(c: &ExperimentConfig) -> Result<ResultTable> {
    let rep = suite::run(c.usize("instances"), c.int("seed") as u64).context("metric suite")?;
    let mut t = ResultTable::new(&[
        "instances",
        "max_monotonicity_violation",
        "min_relevance",
        "max_relevance",
        "max_inverse_residual",
        "max_metric_gap",
        "expansion_mean",
        "expansion_spread",
    ]);
    t.push(vec![
        rep.instances.into(),
        rep.max_monotonicity_violation.into(),
        rep.min_relevance.into(),
        rep.max_relevance.into(),
        rep.max_inverse_residual.into(),
        rep.max_metric_gap.into(),
        rep.expansion_mean().into(),
        rep.expansion_spread().into(),
    ]);
    Ok(t)
}
