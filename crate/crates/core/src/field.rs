//! Lattice classical scalar field: per-mode relevance under smearing and
//! field noise, and the dense H-operator of the Gaussian generating
//! functional.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix};

const MAX_MODES: usize = 1 << 20;

/// Periodic hypercubic lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub d: usize,
    pub n_per_side: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeKind {
    Cos,
    Sin,
}

/// Identifies a real mode by its (centered) integer wave vector and parity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub index: Vec<i64>,
    pub kind: ModeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMode {
    pub id: ModeId,
    pub k: Vec<f64>,
    pub k_norm: f64,
}

impl LatticeSpec {
    pub fn new(d: usize, n_per_side: usize, spacing: f64) -> Result<Self> {
        if d == 0 || n_per_side < 2 || !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lattice d={d}, n_per_side={n_per_side}, spacing={spacing}"
            )));
        }
        let total = (n_per_side as f64).powi(d as i32);
        if total > MAX_MODES as f64 {
            return Err(Error::InvalidParameter(format!("{total} lattice modes")));
        }
        Ok(Self {
            d,
            n_per_side,
            spacing,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.n_per_side.pow(self.d as u32)
    }

    fn center(&self, j: i64) -> i64 {
        let n = self.n_per_side as i64;
        let j = j.rem_euclid(n);
        if 2 * j > n {
            j - n
        } else {
            j
        }
    }

    /// Real Fourier modes: a cosine and a sine for every conjugate pair of
    /// wave vectors, a cosine alone for self-conjugate ones. Sorted by
    /// ascending `|k|`.
    pub fn modes(&self) -> Vec<LatticeMode> {
        let n = self.n_per_side;
        let scale = 2.0 * PI / (n as f64 * self.spacing);
        let mut out = Vec::with_capacity(self.mode_count());
        for flat in 0..self.mode_count() {
            let mut rest = flat;
            let mut v = Vec::with_capacity(self.d);
            for _ in 0..self.d {
                v.push(self.center((rest % n) as i64));
                rest /= n;
            }
            let neg: Vec<i64> = v.iter().map(|&c| self.center(-c)).collect();
            let k: Vec<f64> = v.iter().map(|&c| c as f64 * scale).collect();
            let k_norm = k.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut push = |kind| {
                out.push(LatticeMode {
                    id: ModeId {
                        index: v.clone(),
                        kind,
                    },
                    k: k.clone(),
                    k_norm,
                })
            };
            if neg == v {
                push(ModeKind::Cos);
            } else if v > neg {
                push(ModeKind::Cos);
                push(ModeKind::Sin);
            }
        }
        out.sort_by(|a, b| a.k_norm.total_cmp(&b.k_norm).then_with(|| a.id.cmp(&b.id)));
        out
    }
}

/// Diagonal Gaussian state: precision `a_k` per lattice mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldCovariance {
    pub modes: Vec<LatticeMode>,
    pub a: Vec<f64>,
}

impl FieldCovariance {
    pub fn new(modes: Vec<LatticeMode>, a: Vec<f64>) -> Result<Self> {
        if modes.len() != a.len() {
            return Err(Error::DimensionMismatch {
                expected: modes.len(),
                got: a.len(),
            });
        }
        if let Some(bad) = a.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter(format!("mode eigenvalue {bad} ≤ 0")));
        }
        Ok(Self { modes, a })
    }

    pub fn find(&self, id: &ModeId) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| &m.id == id)
            .ok_or_else(|| Error::UnknownMode(format!("{:?} {:?}", id.index, id.kind)))
    }
}

/// `a_k = β(|k|² + m²)` on every lattice mode. At zero mass the zero mode
/// must be dropped explicitly with `exclude_zero_mode`.
pub fn covariance_massive(
    beta: f64,
    mass: f64,
    lattice: &LatticeSpec,
    exclude_zero_mode: bool,
) -> Result<FieldCovariance> {
    if !(beta > 0.0 && beta.is_finite()) || !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta={beta}, mass={mass}")));
    }
    let mut modes = Vec::new();
    let mut a = Vec::new();
    for m in lattice.modes() {
        let ak = beta * (m.k_norm * m.k_norm + mass * mass);
        if ak == 0.0 {
            if exclude_zero_mode {
                continue;
            }
            return Err(Error::InvalidParameter(
                "massless zero mode has a_k = 0; exclude it explicitly".into(),
            ));
        }
        modes.push(m);
        a.push(ak);
    }
    FieldCovariance::new(modes, a)
}

/// Eigenvalue `e^{−k²σ²/2}` of Gaussian smearing on a plane wave.
pub fn smearing_eigenvalue(k: f64, sigma: f64) -> f64 {
    (-0.5 * k * k * sigma * sigma).exp()
}

/// Distance precision `sigma` and field-value precision `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldChannel {
    pub sigma: f64,
    pub h: f64,
}

impl FieldChannel {
    pub fn new(sigma: f64, h: f64) -> Result<Self> {
        if !(sigma > 0.0 && h > 0.0 && sigma.is_finite() && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma={sigma}, h={h}")));
        }
        Ok(Self { sigma, h })
    }
}

/// `(1 + a_k h² e^{k²σ²})^{−n}`.
pub fn mode_relevance(a_k: f64, h: f64, sigma: f64, k: f64, n: u32) -> f64 {
    (1.0 + a_k * h * h * (k * k * sigma * sigma).exp()).powi(-(n as i32))
}

/// Product of Hermite degrees over distinct modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeObservable {
    pub modes: Vec<ModeId>,
    pub degrees: Vec<u32>,
}

impl ModeObservable {
    pub fn new(modes: Vec<ModeId>, degrees: Vec<u32>) -> Result<Self> {
        if modes.is_empty() || modes.len() != degrees.len() {
            return Err(Error::InvalidParameter(format!(
                "{} modes with {} degrees",
                modes.len(),
                degrees.len()
            )));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidParameter("degrees must be positive".into()));
        }
        Ok(Self { modes, degrees })
    }
}

pub fn product_relevance(
    obs: &ModeObservable,
    cov: &FieldCovariance,
    chan: &FieldChannel,
) -> Result<f64> {
    let mut eta = 1.0;
    for (id, &n) in obs.modes.iter().zip(&obs.degrees) {
        let i = cov.find(id)?;
        eta *= mode_relevance(cov.a[i], chan.h, chan.sigma, cov.modes[i].k_norm, n);
    }
    Ok(eta)
}

/// Relevance of `B − B₀` with its numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticRelevance {
    pub ratio: f64,
    pub numerator: f64,
    pub denominator: f64,
}

/// `Σ a_k^{−2} η_{k,2} / Σ a_k^{−2}`, summed in ascending `|k|`.
pub fn quadratic_observable_relevance(cov: &FieldCovariance, chan: &FieldChannel) -> QuadraticRelevance {
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for (m, &a) in cov.modes.iter().zip(&cov.a) {
        let w = 1.0 / (a * a);
        numerator += w * mode_relevance(a, chan.h, chan.sigma, m.k_norm, 2);
        denominator += w;
    }
    QuadraticRelevance {
        ratio: numerator / denominator,
        numerator,
        denominator,
    }
}

/// `H = (I + A⁻¹X⁻ᵀYX⁻¹)⁻¹` with its `A`-orthonormal eigenbasis.
#[derive(Debug, Clone)]
pub struct HOperator {
    pub h: RMatrix,
    /// Eigenvalues in descending order.
    pub eta: Vec<f64>,
    /// Columns `f_k` with `H f_k = η_k f_k` and `(f_k, A f_l) = δ_kl`.
    pub basis: RMatrix,
}

fn check_square(m: &RMatrix, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.nrows(),
        });
    }
    Ok(())
}

pub fn h_operator(a: &RMatrix, x: &RMatrix, y: &RMatrix) -> Result<HOperator> {
    let n = a.nrows();
    check_square(a, n)?;
    check_square(x, n)?;
    check_square(y, n)?;
    let a_inv = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("A is not positive definite".into()))?
        .inverse();
    let x_inv = x.clone().try_inverse().ok_or(Error::NotInvertible("X"))?;
    let noise = x_inv.transpose() * y * &x_inv;
    let m = RMatrix::identity(n, n) + &a_inv * noise;
    let h = m.try_inverse().ok_or(Error::NotInvertible("I + A⁻¹X⁻ᵀYX⁻¹"))?;
    let ah = a * &h;
    let ah = (&ah + ah.transpose()) * 0.5;
    let (eta, basis) = linalg::generalized_symmetric_eigen(&ah, a)?;
    Ok(HOperator { h, eta, basis })
}

/// Per-mode eigenvalues `(1 + y/(a x²))⁻¹` when `A`, `X`, `Y` are diagonal.
pub fn h_operator_diagonal(a: &[f64], x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if a.len() != x.len() || a.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: x.len().min(y.len()),
        });
    }
    a.iter()
        .zip(x)
        .zip(y)
        .map(|((&a, &x), &y)| {
            if x == 0.0 {
                Err(Error::NotInvertible("X"))
            } else {
                Ok(1.0 / (1.0 + y / (a * x * x)))
            }
        })
        .collect()
}

/// Sparse real polynomial: exponent vector to coefficient.
type Poly = BTreeMap<Vec<u8>, f64>;

fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in p {
        for (eb, cb) in q {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
            *out.entry(e).or_insert(0.0) += ca * cb;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Poly, p: &Poly, c: f64) {
    for (e, v) in p {
        *acc.entry(e.clone()).or_insert(0.0) += c * v;
    }
}

fn constant(nvars: usize, c: f64) -> Poly {
    let mut p = Poly::new();
    p.insert(vec![0; nvars], c);
    p
}

fn linear(coeffs: &[f64], nvars: usize, offset: usize) -> Poly {
    let mut p = Poly::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0.0 {
            let mut e = vec![0u8; nvars];
            e[offset + i] = 1;
            p.insert(e, c);
        }
    }
    p
}

/// Sum over partial pairings of `items`, each pair contributing `pair(a, b)`
/// and each singleton `single(b)`.
fn pairings<P, S>(items: &[usize], pair: &P, single: &S, nvars: usize) -> Poly
where
    P: Fn(usize, usize) -> f64,
    S: Fn(usize) -> Poly,
{
    let Some((&first, rest)) = items.split_first() else {
        return constant(nvars, 1.0);
    };
    let mut out = poly_mul(&single(first), &pairings(rest, pair, single, nvars));
    for (pos, &other) in rest.iter().enumerate() {
        let mut remaining = rest.to_vec();
        remaining.remove(pos);
        let sub = pairings(&remaining, pair, single, nvars);
        poly_add_scaled(&mut out, &sub, pair(first, other));
    }
    out
}

/// Gaussian moment `E[ν_{i1}⋯ν_{im}]` by Isserlis' theorem.
fn isserlis(indices: &[usize], cov: &RMatrix) -> f64 {
    let Some((&first, rest)) = indices.split_first() else {
        return 1.0;
    };
    let mut total = 0.0;
    for (pos, &other) in rest.iter().enumerate() {
        let c = cov[(first, other)];
        if c != 0.0 {
            let mut remaining = rest.to_vec();
            remaining.remove(pos);
            total += c * isserlis(&remaining, cov);
        }
    }
    total
}

/// `P ↦ E_ν[P(Mφ + ν)]`, `ν ~ N(0, Σ)`, on polynomials in `φ`.
fn push_through(p: &Poly, m: &RMatrix, noise: &RMatrix) -> Poly {
    let n = m.nrows();
    let images: Vec<Poly> = (0..n)
        .map(|i| {
            let mut l = linear(&m.row(i).iter().copied().collect::<Vec<_>>(), 2 * n, 0);
            let mut e = vec![0u8; 2 * n];
            e[n + i] = 1;
            l.insert(e, 1.0);
            l
        })
        .collect();
    let mut expanded = Poly::new();
    for (e, &c) in p {
        let mut term = constant(2 * n, c);
        for (i, &power) in e.iter().enumerate() {
            for _ in 0..power {
                term = poly_mul(&term, &images[i]);
            }
        }
        poly_add_scaled(&mut expanded, &term, 1.0);
    }
    let mut out = Poly::new();
    for (e, c) in expanded {
        let indices: Vec<usize> = (0..n)
            .flat_map(|i| std::iter::repeat_n(i, e[n + i] as usize))
            .collect();
        let moment = isserlis(&indices, noise);
        if moment != 0.0 {
            *out.entry(e[..n].to_vec()).or_insert(0.0) += c * moment;
        }
    }
    out
}

/// One derivative direction set and its eigen-residual.
#[derive(Debug, Clone, PartialEq)]
pub struct EigencheckEntry {
    pub directions: Vec<usize>,
    pub expected: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigencheckReport {
    pub entries: Vec<EigencheckEntry>,
    pub max_residual: f64,
}

pub const MAX_EIGENCHECK_ORDER: usize = 3;

fn multisets(n: usize, order: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == order {
        out.push(prefix.clone());
        return;
    }
    for k in start..n {
        prefix.push(k);
        multisets(n, order, k, prefix, out);
        prefix.pop();
    }
}

/// Checks that `E*R*` maps the order-`n` functional derivatives of the
/// generating functional `exp((f,φ) − ½(f,Af))` along H-eigendirections to
/// themselves scaled by the product of eigenvalues.
///
/// The prior is `φ ~ N(0, A)` and the channel `ψ = Xᵀφ + ξ`, `ξ ~ N(0, Y)`;
/// the composite map is evaluated by exact polynomial algebra.
pub fn functional_derivative_eigencheck(
    a: &RMatrix,
    x: &RMatrix,
    y: &RMatrix,
    order: usize,
) -> Result<EigencheckReport> {
    if order > MAX_EIGENCHECK_ORDER {
        return Err(Error::InvalidParameter(format!(
            "derivative order {order} exceeds {MAX_EIGENCHECK_ORDER}"
        )));
    }
    let op = h_operator(a, x, y)?;
    let n = a.nrows();
    let b = x.transpose() * a * x + y;
    let b_inv = b
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("XᵀAX + Y is not positive definite".into()))?
        .inverse();
    let gain = a * x * &b_inv;
    let posterior = a - &gain * x.transpose() * a;
    let noise = &gain * y * gain.transpose() + posterior;
    let noise = (&noise + noise.transpose()) * 0.5;
    let map = &gain * x.transpose();

    let dirs: Vec<Vec<f64>> = (0..n).map(|k| op.basis.column(k).iter().copied().collect()).collect();
    let mut sets = Vec::new();
    multisets(n, order, 0, &mut Vec::new(), &mut sets);
    let mut entries = Vec::with_capacity(sets.len());
    let mut max_residual = 0.0f64;
    for set in sets {
        let pair = |i: usize, j: usize| {
            let (gi, gj) = (&dirs[set[i]], &dirs[set[j]]);
            let mut c = 0.0;
            for r in 0..n {
                for s in 0..n {
                    c += gi[r] * a[(r, s)] * gj[s];
                }
            }
            -c
        };
        let single = |i: usize| linear(&dirs[set[i]], n, 0);
        let items: Vec<usize> = (0..set.len()).collect();
        let derivative = pairings(&items, &pair, &single, n);
        let image = push_through(&derivative, &map, &noise);
        let expected: f64 = set.iter().map(|&k| op.eta[k]).product();
        let mut residual = 0.0f64;
        let keys: std::collections::BTreeSet<&Vec<u8>> =
            derivative.keys().chain(image.keys()).collect();
        for e in keys {
            let lhs = image.get(e).copied().unwrap_or(0.0);
            let rhs = expected * derivative.get(e).copied().unwrap_or(0.0);
            residual = residual.max((lhs - rhs).abs());
        }
        max_residual = max_residual.max(residual);
        entries.push(EigencheckEntry {
            directions: set,
            expected,
            residual,
        });
    }
    Ok(EigencheckReport {
        entries,
        max_residual,
    })
}
