use infogeom::field::*;
use infogeom::linalg::RMatrix;
use infogeom::particle;
use infogeom::random;
use proptest::prelude::*;

fn lattice_1d(n: usize) -> LatticeSpec {
    LatticeSpec::new(1, n, 1.0).unwrap()
}

fn random_positive(r: &mut impl rand::Rng, n: usize) -> RMatrix {
    let g = random::real_gaussian(r, n, n);
    &g * g.transpose() + RMatrix::identity(n, n) * 0.3
}

#[test]
fn massive_covariance_values() {
    let lat = lattice_1d(8);
    let cov = covariance_massive(1.0, 1.0, &lat, false).unwrap();
    assert_eq!(cov.modes.len(), 8);
    assert_eq!(cov.modes[0].k_norm, 0.0);
    assert!((cov.a[0] - 1.0).abs() < 1e-15);
    let hot = covariance_massive(2.0, 1.0, &lat, false).unwrap();
    for (a, b) in cov.a.iter().zip(&hot.a) {
        assert!((2.0 * a - b).abs() < 1e-14);
    }
    for (m, a) in cov.modes.iter().zip(&cov.a) {
        assert!((a - (m.k_norm * m.k_norm + 1.0)).abs() < 1e-14);
    }
}

#[test]
fn massless_zero_mode_policy() {
    let lat = LatticeSpec::new(2, 4, 0.5).unwrap();
    assert!(covariance_massive(1.0, 0.0, &lat, false).is_err());
    let cov = covariance_massive(1.0, 0.0, &lat, true).unwrap();
    assert_eq!(cov.modes.len(), lat.mode_count() - 1);
    assert!(cov.a.iter().all(|&a| a > 0.0));
}

#[test]
fn lattice_modes_are_real_fourier_basis() {
    for n in [2, 5, 8] {
        let lat = LatticeSpec::new(2, n, 1.0).unwrap();
        let modes = lat.modes();
        assert_eq!(modes.len(), lat.mode_count());
        for w in modes.windows(2) {
            assert!(w[0].k_norm <= w[1].k_norm);
        }
    }
}

#[test]
fn smearing_matches_grid_convolution() {
    assert_eq!(smearing_eigenvalue(0.0, 0.7), 1.0);
    assert!((smearing_eigenvalue(2.0, 0.5) - (-0.5f64).exp()).abs() < 1e-15);
    let (k, sigma) = (1.7, 0.6);
    let h = 1e-3;
    let nodes: Vec<f64> = (-12000..=12000).map(|i| i as f64 * h).collect();
    let kernel = |u: f64| (-u * u / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    for x in [-1.3, 0.0, 0.4, 2.2] {
        let conv: f64 = nodes.iter().map(|&u| kernel(u) * (k * (x - u)).cos()).sum::<f64>() * h;
        let expect = smearing_eigenvalue(k, sigma) * (k * x).cos();
        assert!((conv - expect).abs() < 1e-8);
    }
}

#[test]
fn mode_relevance_examples() {
    // a h² e^{k²σ²} = 1
    let (k, sigma): (f64, f64) = (0.5, 1.2);
    let a = 1.0 / (0.25 * (k * k * sigma * sigma).exp());
    for n in 1..6 {
        let v = mode_relevance(a, 0.5, sigma, k, n);
        assert!((v - 0.5f64.powi(n as i32)).abs() < 1e-14);
    }
    assert_eq!(mode_relevance(3.0, 0.2, 0.4, 1.0, 0), 1.0);
}

#[test]
fn mode_relevance_reduces_to_particle() {
    let lat = lattice_1d(64);
    let cov = covariance_massive(1.3, 0.7, &lat, false).unwrap();
    let (h, sigma) = (0.4, 0.9);
    for (m, &a) in cov.modes.iter().zip(&cov.a) {
        let tau = 1.0 / a.sqrt();
        let s = h * (0.5 * m.k_norm * m.k_norm * sigma * sigma).exp();
        let spec = particle::relevance_spectrum(tau, s, 6).unwrap();
        for (n, eta) in spec {
            let v = mode_relevance(a, h, sigma, m.k_norm, n as u32);
            assert!((v - eta).abs() < 1e-12);
        }
    }
}

#[test]
fn product_relevance_examples() {
    let lat = lattice_1d(16);
    let cov = covariance_massive(1.0, 1.0, &lat, false).unwrap();
    let chan = FieldChannel::new(0.5, 0.8).unwrap();
    let (m1, m2) = (&cov.modes[1], &cov.modes[5]);
    let single = ModeObservable::new(vec![m1.id.clone()], vec![2]).unwrap();
    let direct1 = mode_relevance(cov.a[1], 0.8, 0.5, m1.k_norm, 2);
    assert_eq!(product_relevance(&single, &cov, &chan).unwrap(), direct1);
    let twice = ModeObservable::new(vec![m1.id.clone(), m1.id.clone()], vec![2, 2]).unwrap();
    assert!((product_relevance(&twice, &cov, &chan).unwrap() - direct1 * direct1).abs() < 1e-15);
    let mixed = ModeObservable::new(vec![m1.id.clone(), m2.id.clone()], vec![1, 3]).unwrap();
    let direct = mode_relevance(cov.a[1], 0.8, 0.5, m1.k_norm, 1)
        * mode_relevance(cov.a[5], 0.8, 0.5, m2.k_norm, 3);
    assert!((product_relevance(&mixed, &cov, &chan).unwrap() - direct).abs() < 1e-14);

    let other = covariance_massive(1.0, 1.0, &lattice_1d(4), false).unwrap();
    let far = cov.modes.last().unwrap().id.clone();
    let obs = ModeObservable::new(vec![far], vec![1]).unwrap();
    assert!(product_relevance(&obs, &other, &chan).is_err());
}

#[test]
fn quadratic_relevance_examples() {
    let lat = lattice_1d(64);
    let cov = covariance_massive(1.0, 1.0, &lat, false).unwrap();
    let chan = FieldChannel::new(0.5, 1.0).unwrap();
    let q = quadratic_observable_relevance(&cov, &chan);
    let (mut num, mut den) = (0.0, 0.0);
    for (m, &a) in cov.modes.iter().zip(&cov.a) {
        let eta = 1.0 / (1.0 + a * (m.k_norm * 0.5).powi(2).exp()).powi(2);
        num += eta / (a * a);
        den += 1.0 / (a * a);
    }
    assert!((q.ratio - num / den).abs() < 1e-12);
    assert!((q.numerator - num).abs() < 1e-12 * num);
    assert!((q.denominator - den).abs() < 1e-12 * den);

    let quiet = quadratic_observable_relevance(&cov, &FieldChannel::new(0.5, 1e-8).unwrap());
    assert!((quiet.ratio - 1.0).abs() < 1e-6);

    let one = FieldCovariance::new(vec![cov.modes[3].clone()], vec![cov.a[3]]).unwrap();
    let single = quadratic_observable_relevance(&one, &chan);
    let expect = mode_relevance(cov.a[3], 1.0, 0.5, cov.modes[3].k_norm, 2);
    assert!((single.ratio - expect).abs() < 1e-15);
}

#[test]
fn h_operator_diagonal_case() {
    let (a, s) = (vec![0.5, 1.0, 2.5], 0.8);
    let ks = [0.0, 0.7, 1.9];
    let x: Vec<f64> = ks.iter().map(|&k| smearing_eigenvalue(k, s)).collect();
    let y = vec![0.3, 0.3, 0.3];
    let eta = h_operator_diagonal(&a, &x, &y).unwrap();
    for i in 0..3 {
        let expect = 1.0 / (1.0 + (ks[i] * ks[i] * s * s).exp() * y[i] / a[i]);
        assert!((eta[i] - expect).abs() < 1e-15);
    }
    let dense = h_operator(
        &RMatrix::from_diagonal(&a.clone().into()),
        &RMatrix::from_diagonal(&x.clone().into()),
        &RMatrix::from_diagonal(&y.clone().into()),
    )
    .unwrap();
    let mut sorted = eta.clone();
    sorted.sort_by(|p, q| q.total_cmp(p));
    for (p, q) in dense.eta.iter().zip(&sorted) {
        assert!((p - q).abs() < 1e-13);
    }
    assert!(h_operator_diagonal(&a, &[1.0, 0.0, 1.0], &y).is_err());
}

#[test]
fn noiseless_h_is_identity() {
    let mut r = random::rng(1);
    let a = random_positive(&mut r, 4);
    let x = random_positive(&mut r, 4);
    let op = h_operator(&a, &x, &RMatrix::zeros(4, 4)).unwrap();
    assert!((&op.h - RMatrix::identity(4, 4)).amax() < 1e-12);
    assert!(op.eta.iter().all(|e| (e - 1.0).abs() < 1e-12));
    assert!(h_operator(&a, &RMatrix::zeros(4, 4), &a).is_err());
}

#[test]
fn random_h_operator_identities() {
    let mut r = random::rng(2);
    for _ in 0..20 {
        let a = random_positive(&mut r, 4);
        let x = random_positive(&mut r, 4);
        let y = random_positive(&mut r, 4);
        let op = h_operator(&a, &x, &y).unwrap();
        assert!((&a * &op.h - op.h.transpose() * &a).amax() < 1e-10);
        let gram = op.basis.transpose() * &a * &op.basis;
        assert!((gram - RMatrix::identity(4, 4)).amax() < 1e-8);
        for k in 0..4 {
            let f = op.basis.column(k);
            assert!((&op.h * f - f * op.eta[k]).amax() < 1e-9);
        }
    }
}

#[test]
fn eigencheck_orders() {
    let mut r = random::rng(3);
    let a = random_positive(&mut r, 3);
    let x = random_positive(&mut r, 3);
    let y = random_positive(&mut r, 3);
    let op = h_operator(&a, &x, &y).unwrap();
    let zero = functional_derivative_eigencheck(&a, &x, &y, 0).unwrap();
    assert_eq!(zero.entries.len(), 1);
    assert_eq!(zero.entries[0].expected, 1.0);
    for order in 1..=3 {
        let rep = functional_derivative_eigencheck(&a, &x, &y, order).unwrap();
        assert!(rep.max_residual < 1e-9, "order {order}: {}", rep.max_residual);
        for e in &rep.entries {
            let expect: f64 = e.directions.iter().map(|&k| op.eta[k]).product();
            assert!((e.expected - expect).abs() < 1e-15);
        }
    }
    let diag = functional_derivative_eigencheck(&a, &x, &y, 2).unwrap();
    let same = diag.entries.iter().find(|e| e.directions == vec![1, 1]).unwrap();
    assert!((same.expected - op.eta[1] * op.eta[1]).abs() < 1e-15);
    assert!(functional_derivative_eigencheck(&a, &x, &y, 4).is_err());
}

#[test]
fn relevance_acts_as_momentum_cutoff() {
    let (a, h, sigma) = (1.0, 0.5, 0.8);
    let ks: Vec<f64> = (0..60).map(|i| i as f64 * 0.1).collect();
    for n in 1..4 {
        let v: Vec<f64> = ks.iter().map(|&k| mode_relevance(a, h, sigma, k, n)).collect();
        for w in v.windows(2) {
            assert!(w[1] < w[0]);
        }
        // Well past 1/σ the relevance is negligible.
        assert!(mode_relevance(a, h, sigma, 4.0 / sigma, n) < 1e-3);
    }
}

#[test]
fn massless_relevance_loses_degree_dependence_at_small_k() {
    let (beta, h, sigma) = (1.0, 0.5, 0.8);
    let spread = |k: f64| {
        let a = beta * k * k;
        mode_relevance(a, h, sigma, k, 1) - mode_relevance(a, h, sigma, k, 5)
    };
    assert!(spread(1e-1) < 5e-2);
    assert!(spread(1e-3) < 1e-5);
    assert!(spread(1e-3) < spread(1e-2) && spread(1e-2) < spread(1e-1));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_relevance_factorizes(
        idx in prop::collection::vec(0usize..32, 1..5),
        extra in prop::collection::vec(0usize..32, 1..5),
        h in 0.1..2.0f64,
        sigma in 0.1..2.0f64,
    ) {
        let cov = covariance_massive(1.0, 0.5, &lattice_1d(32), false).unwrap();
        let chan = FieldChannel::new(sigma, h).unwrap();
        let make = |ix: &[usize]| {
            let ids = ix.iter().map(|&i| cov.modes[i].id.clone()).collect::<Vec<_>>();
            let deg = ix.iter().map(|&i| 1 + (i % 3) as u32).collect::<Vec<_>>();
            ModeObservable::new(ids, deg).unwrap()
        };
        let joint: Vec<usize> = idx.iter().chain(&extra).copied().collect();
        let lhs = product_relevance(&make(&joint), &cov, &chan).unwrap();
        let rhs = product_relevance(&make(&idx), &cov, &chan).unwrap()
            * product_relevance(&make(&extra), &cov, &chan).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-14);
        prop_assert!(lhs > 0.0 && lhs < 1.0);
    }

    #[test]
    fn h_operator_symmetry_on_random_triples(seed in 0u64..100_000, n in 2usize..6) {
        let mut r = random::rng(seed);
        let a = random_positive(&mut r, n);
        let x = random_positive(&mut r, n);
        let y = random_positive(&mut r, n);
        let op = h_operator(&a, &x, &y).unwrap();
        prop_assert!((&a * &op.h - op.h.transpose() * &a).amax() < 1e-9 * a.amax());
        prop_assert!(op.eta.iter().all(|&e| e > 0.0 && e <= 1.0 + 1e-12));
    }
}
