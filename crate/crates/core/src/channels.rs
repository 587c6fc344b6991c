//! Quantum channels in operator-sum form, their adjoints, and relevance.

use crate::error::{Error, Result};
use crate::geometry::{
    bkm_inner, omega, omega_inv, relative_entropy, DensityMatrix, Feature, HermitianMatrix,
    Observable,
};
use crate::linalg::{self, CMatrix, RMatrix, C64};

const TP_TOL: f64 = 1e-10;

/// Which factor of a bipartite system a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Debug, Clone)]
pub enum ChannelKind {
    /// Trace over one factor of a `dims.0 ⊗ dims.1` system.
    PartialTrace { dims: (usize, usize), traced: Subsystem },
    /// `ρ ↦ (1−p)ρ + p·Tr(ρ)·I/d`.
    Depolarizing { dim: usize, p: f64 },
    /// `ρ ↦ (1−p)ρ + p·Σ_k P_k ρ P_k` for the projectors onto the columns of `basis`.
    Dephasing { basis: CMatrix, p: f64 },
    Unitary(CMatrix),
    Kraus(Vec<CMatrix>),
}

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    input_dim: usize,
    output_dim: usize,
}

impl Channel {
    /// Validates shapes and `Σ K†K = I` within 1e-10.
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
        let (output_dim, input_dim) = first.shape();
        let mut sum = CMatrix::zeros(input_dim, input_dim);
        for k in &kraus {
            if k.shape() != (output_dim, input_dim) {
                return Err(Error::DimensionMismatch {
                    expected: output_dim * input_dim,
                    got: k.nrows() * k.ncols(),
                });
            }
            sum += k.adjoint() * k;
        }
        let defect = linalg::max_abs(&(sum - CMatrix::identity(input_dim, input_dim)));
        if defect > TP_TOL {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self {
            kraus,
            input_dim,
            output_dim,
        })
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    /// `Σ K X K†`.
    pub fn apply(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        if x.dim() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                got: x.dim(),
            });
        }
        let mut out = CMatrix::zeros(self.output_dim, self.output_dim);
        for k in &self.kraus {
            out += k * x.matrix() * k.adjoint();
        }
        Ok(HermitianMatrix::from_raw(out))
    }

    /// Channel output as a state, keeping the input's positivity floor.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::with_floor(self.apply(rho.hermitian())?, rho.floor())
    }

    pub fn apply_feature(&self, x: &Feature) -> Result<Feature> {
        Ok(Feature::from_traceless_part(&self.apply(x)?))
    }

    /// Hilbert–Schmidt adjoint `Σ K† A K`.
    pub fn hs_adjoint(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        if a.dim() != self.output_dim {
            return Err(Error::DimensionMismatch {
                expected: self.output_dim,
                got: a.dim(),
            });
        }
        let mut out = CMatrix::zeros(self.input_dim, self.input_dim);
        for k in &self.kraus {
            out += k.adjoint() * a.matrix() * k;
        }
        Ok(HermitianMatrix::from_raw(out))
    }
}

pub fn build_channel(kind: ChannelKind) -> Result<Channel> {
    match kind {
        ChannelKind::PartialTrace { dims, traced } => partial_trace(dims, traced),
        ChannelKind::Depolarizing { dim, p } => depolarizing(dim, p),
        ChannelKind::Dephasing { basis, p } => dephasing(&basis, p),
        ChannelKind::Unitary(u) => {
            if !u.is_square() {
                return Err(Error::NotSquare(u.nrows(), u.ncols()));
            }
            Channel::from_kraus(vec![u])
        }
        ChannelKind::Kraus(list) => Channel::from_kraus(list),
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
    }
}

fn basis_vector(dim: usize, m: usize) -> CMatrix {
    let mut v = CMatrix::zeros(1, dim);
    v[(0, m)] = C64::new(1.0, 0.0);
    v
}

fn partial_trace(dims: (usize, usize), traced: Subsystem) -> Result<Channel> {
    let (da, db) = dims;
    if da == 0 || db == 0 {
        return Err(Error::InvalidParameter("zero subsystem dimension".into()));
    }
    let kraus = match traced {
        Subsystem::B => (0..db)
            .map(|m| linalg::kron(&CMatrix::identity(da, da), &basis_vector(db, m)))
            .collect(),
        Subsystem::A => (0..da)
            .map(|m| linalg::kron(&basis_vector(da, m), &CMatrix::identity(db, db)))
            .collect(),
    };
    Channel::from_kraus(kraus)
}

/// Weyl–Heisenberg displacement `X^a Z^b` on `C^d`.
fn clock_shift(dim: usize, a: usize, b: usize) -> CMatrix {
    let w = 2.0 * std::f64::consts::PI / dim as f64;
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        m[((j + a) % dim, j)] = C64::from_polar(1.0, w * (b * j) as f64);
    }
    m
}

fn depolarizing(dim: usize, p: f64) -> Result<Channel> {
    check_probability(p)?;
    if dim == 0 {
        return Err(Error::InvalidParameter("zero dimension".into()));
    }
    let mut kraus = vec![CMatrix::identity(dim, dim).scale((1.0 - p).sqrt())];
    let c = p.sqrt() / dim as f64;
    for a in 0..dim {
        for b in 0..dim {
            kraus.push(clock_shift(dim, a, b).scale(c));
        }
    }
    Channel::from_kraus(kraus)
}

fn dephasing(basis: &CMatrix, p: f64) -> Result<Channel> {
    check_probability(p)?;
    let d = basis.nrows();
    if !basis.is_square() {
        return Err(Error::NotSquare(d, basis.ncols()));
    }
    let defect = linalg::max_abs(&(basis.adjoint() * basis - CMatrix::identity(d, d)));
    if defect > TP_TOL {
        return Err(Error::InvalidParameter(format!(
            "dephasing basis is not orthonormal (defect {defect:e})"
        )));
    }
    let mut kraus = vec![CMatrix::identity(d, d).scale((1.0 - p).sqrt())];
    for k in 0..d {
        let u = basis.column(k);
        kraus.push((u * u.adjoint()).scale(p.sqrt()));
    }
    Channel::from_kraus(kraus)
}

/// Hilbert–Schmidt orthonormal basis of the traceless Hermitian matrices
/// (generalized Gell-Mann matrices), `d² − 1` elements.
pub fn gell_mann_basis(dim: usize) -> Vec<HermitianMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(dim * dim - 1);
    for j in 0..dim {
        for k in j + 1..dim {
            let mut sym = CMatrix::zeros(dim, dim);
            sym[(j, k)] = C64::new(s, 0.0);
            sym[(k, j)] = C64::new(s, 0.0);
            out.push(HermitianMatrix::from_raw(sym));
            let mut anti = CMatrix::zeros(dim, dim);
            anti[(j, k)] = C64::new(0.0, -s);
            anti[(k, j)] = C64::new(0.0, s);
            out.push(HermitianMatrix::from_raw(anti));
        }
    }
    for l in 1..dim {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; dim];
        for v in diag.iter_mut().take(l) {
            *v = 1.0 / norm;
        }
        diag[l] = -(l as f64) / norm;
        out.push(HermitianMatrix::from_real_diagonal(&diag));
    }
    out
}

fn strict_output(e: &Channel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    rho.require_strict()?;
    let sigma = e.apply_state(rho)?;
    sigma.require_strict()?;
    Ok(sigma)
}

/// BKM adjoint `R_ρ = Ω_ρ E* Ω⁻¹_{E(ρ)}`.
pub fn bkm_adjoint(e: &Channel, rho: &DensityMatrix, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    let sigma = strict_output(e, rho)?;
    omega(rho, &e.hs_adjoint(&omega_inv(&sigma, y)?)?)
}

/// `⟨E(X),E(X)⟩_{E(ρ)} / ⟨X,X⟩_ρ`.
pub fn relevance(e: &Channel, rho: &DensityMatrix, x: &HermitianMatrix) -> Result<f64> {
    let sigma = strict_output(e, rho)?;
    if x.max_abs() == 0.0 {
        return Err(Error::ZeroFeature);
    }
    let before = bkm_inner(rho, x, x)?;
    if before <= 0.0 {
        return Err(Error::ZeroFeature);
    }
    let ex = e.apply(x)?;
    Ok(bkm_inner(&sigma, &ex, &ex)? / before)
}

#[derive(Debug, Clone)]
pub struct RelevancePair {
    pub eta: f64,
    pub feature: Feature,
    pub observable: Observable,
}

/// Eigenrelevance pairs sorted by descending η. Pairs before `cutoff_index`
/// are the relevant ones.
#[derive(Debug, Clone)]
pub struct RelevanceSpectrum {
    pub pairs: Vec<RelevancePair>,
    pub cutoff_index: usize,
}

impl RelevanceSpectrum {
    pub fn etas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.eta).collect()
    }

    pub fn with_top_n(mut self, n: usize) -> Self {
        self.cutoff_index = n.min(self.pairs.len());
        self
    }

    pub fn with_threshold(mut self, eta_min: f64) -> Self {
        self.cutoff_index = self.pairs.iter().take_while(|p| p.eta >= eta_min).count();
        self
    }

    pub fn relevant(&self) -> &[RelevancePair] {
        &self.pairs[..self.cutoff_index]
    }

    pub fn irrelevant(&self) -> &[RelevancePair] {
        &self.pairs[self.cutoff_index..]
    }

    /// Groups eigenvalues that agree within `tol` into `(value, multiplicity)`.
    pub fn multiplicities(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut groups: Vec<(f64, usize)> = Vec::new();
        for eta in self.etas() {
            match groups.last_mut() {
                Some((v, n)) if (*v - eta).abs() <= tol => {
                    *v = (*v * *n as f64 + eta) / (*n + 1) as f64;
                    *n += 1;
                }
                _ => groups.push((eta, 1)),
            }
        }
        groups
    }
}

/// Solves `R_ρ E (X) = η X` on the traceless Hermitian matrices.
///
/// The superoperator is materialized in the Gell-Mann basis and solved as a
/// symmetric-definite problem against the BKM Gram matrix.
pub fn eigenrelevance(e: &Channel, rho: &DensityMatrix) -> Result<RelevanceSpectrum> {
    let sigma = strict_output(e, rho)?;
    let basis = gell_mann_basis(rho.dim());
    let n = basis.len();
    let mut images = Vec::with_capacity(n);
    let mut image_duals = Vec::with_capacity(n);
    let mut duals = Vec::with_capacity(n);
    for b in &basis {
        let eb = e.apply(b)?;
        image_duals.push(omega_inv(&sigma, &eb)?);
        images.push(eb);
        duals.push(omega_inv(rho, b)?);
    }
    let mut m = RMatrix::zeros(n, n);
    let mut g = RMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = images[i].hs_inner(&image_duals[j]);
            g[(i, j)] = basis[i].hs_inner(&duals[j]);
        }
    }
    let m = (&m + m.transpose()) * 0.5;
    let g = (&g + g.transpose()) * 0.5;
    let (values, vectors) = linalg::generalized_symmetric_eigen(&m, &g)?;
    let d = rho.dim();
    let mut pairs = Vec::with_capacity(n);
    for (col, &eta) in values.iter().enumerate() {
        let mut x = CMatrix::zeros(d, d);
        let mut a = CMatrix::zeros(d, d);
        for i in 0..n {
            let c = vectors[(i, col)];
            x += basis[i].matrix().scale(c);
            a += duals[i].matrix().scale(c);
        }
        pairs.push(RelevancePair {
            eta: eta.max(0.0),
            feature: Feature::from_traceless_part(&HermitianMatrix::from_raw(x)),
            observable: Observable::new(HermitianMatrix::from_raw(a)),
        });
    }
    let cutoff_index = pairs.len();
    Ok(RelevanceSpectrum {
        pairs,
        cutoff_index,
    })
}

/// True iff every relevant observable has the same expectation within `tol`.
pub fn first_order_equivalent(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    relevant: &[Observable],
    tol: f64,
) -> Result<bool> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            got: rho2.dim(),
        });
    }
    for a in relevant {
        if a.dim() != rho1.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho1.dim(),
                got: a.dim(),
            });
        }
        if (rho1.expectation(a) - rho2.expectation(a)).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Slack absorbing roundoff when two outputs agree exactly in exact arithmetic.
pub const EQUIVALENCE_ROUNDOFF: f64 = 1e-14;

/// `D(E(ρ), E(σ)) ≤ eps`, up to [`EQUIVALENCE_ROUNDOFF`].
pub fn approx_equivalent(
    e: &Channel,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    eps: f64,
) -> Result<bool> {
    let a = e.apply_state(rho)?;
    let b = e.apply_state(sigma)?;
    Ok(relative_entropy(&a, &b)? <= eps + EQUIVALENCE_ROUNDOFF)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli(which: char) -> HermitianMatrix {
        let (o, i) = (C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        let z = C64::new(0.0, 0.0);
        let m = match which {
            'x' => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            'y' => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            _ => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        };
        HermitianMatrix::new(m).unwrap()
    }

    #[test]
    fn gell_mann_is_orthonormal_and_traceless() {
        for d in 2..5 {
            let b = gell_mann_basis(d);
            assert_eq!(b.len(), d * d - 1);
            for (i, x) in b.iter().enumerate() {
                assert!(x.trace().abs() < 1e-15);
                for (j, y) in b.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((x.hs_inner(y) - expect).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn unitary_identity_channel() {
        let e = build_channel(ChannelKind::Unitary(CMatrix::identity(2, 2))).unwrap();
        assert_eq!(e.kraus().len(), 1);
        let x = pauli('y');
        assert_eq!(e.apply(&x).unwrap(), x);
    }

    #[test]
    fn depolarizing_scales_traceless() {
        for d in [2, 3] {
            let e = depolarizing(d, 0.3).unwrap();
            let x = gell_mann_basis(d)[0].clone();
            let out = e.apply(&x).unwrap();
            assert!(linalg::max_abs(&(out.matrix() - x.matrix().scale(0.7))) < 1e-14);
            let mixed = DensityMatrix::maximally_mixed(d);
            let fixed = e.apply(mixed.hermitian()).unwrap();
            assert!(linalg::max_abs(&(fixed.matrix() - mixed.matrix())) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_bell_projector() {
        let e = build_channel(ChannelKind::PartialTrace {
            dims: (2, 2),
            traced: Subsystem::B,
        })
        .unwrap();
        let h = C64::new(0.5, 0.0);
        let z = C64::new(0.0, 0.0);
        let bell = CMatrix::from_row_slice(
            4,
            4,
            &[h, z, z, h, z, z, z, z, z, z, z, z, h, z, z, h],
        );
        let out = e.apply(&HermitianMatrix::new(bell).unwrap()).unwrap();
        assert!(linalg::max_abs(&(out.matrix() - CMatrix::identity(2, 2).scale(0.5))) < 1e-15);
    }

    #[test]
    fn dephasing_kills_coherences() {
        let e = build_channel(ChannelKind::Dephasing {
            basis: CMatrix::identity(2, 2),
            p: 1.0,
        })
        .unwrap();
        let out = e.apply(&pauli('x')).unwrap();
        assert!(out.max_abs() < 1e-15);
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = CMatrix::identity(2, 2).scale(0.9);
        assert!(matches!(
            Channel::from_kraus(vec![k]),
            Err(Error::NotTracePreserving(_))
        ));
        assert!(depolarizing(2, 1.5).is_err());
    }

    #[test]
    fn depolarized_qubit_relevance() {
        let p = 0.35;
        let e = depolarizing(2, p).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let eta = relevance(&e, &rho, &pauli('x')).unwrap();
        assert!((eta - (1.0 - p) * (1.0 - p)).abs() < 1e-13);
        let spec = eigenrelevance(&e, &rho).unwrap();
        for v in spec.etas() {
            assert!((v - (1.0 - p) * (1.0 - p)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_feature_is_rejected() {
        let e = depolarizing(2, 0.1).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            relevance(&e, &rho, &HermitianMatrix::zeros(2)),
            Err(Error::ZeroFeature)
        ));
    }

    #[test]
    fn cutoff_selection() {
        let e = build_channel(ChannelKind::PartialTrace {
            dims: (2, 2),
            traced: Subsystem::B,
        })
        .unwrap();
        let spec = eigenrelevance(&e, &DensityMatrix::maximally_mixed(4)).unwrap();
        assert_eq!(spec.clone().with_threshold(0.5).relevant().len(), 3);
        assert_eq!(spec.clone().with_top_n(5).irrelevant().len(), 10);
        let groups = spec.multiplicities(1e-9);
        assert_eq!(groups.len(), 2);
        assert_eq!((groups[0].1, groups[1].1), (3, 12));
    }

    #[test]
    fn first_order_equivalence_on_qubit() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::from_diagonal(&[0.6, 0.4]).unwrap();
        let sx = Observable::new(pauli('x'));
        let sz = Observable::new(pauli('z'));
        assert!(first_order_equivalent(&a, &b, &[sx], 1e-3).unwrap());
        assert!(!first_order_equivalent(&a, &b, &[sz], 1e-3).unwrap());
        assert!(first_order_equivalent(&a, &b, &[], 1e-3).unwrap());
    }

    #[test]
    fn approx_equivalence_threshold() {
        let e = depolarizing(2, 0.5).unwrap();
        let a = DensityMatrix::from_diagonal(&[0.9, 0.1]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.2, 0.8]).unwrap();
        let (pa, pb): (f64, f64) = (0.5 * 0.9 + 0.25, 0.5 * 0.2 + 0.25);
        let kl = pa * (pa / pb).ln() + (1.0 - pa) * ((1.0 - pa) / (1.0 - pb)).ln();
        assert!(approx_equivalent(&e, &a, &b, kl + 1e-12).unwrap());
        assert!(!approx_equivalent(&e, &a, &b, kl - 1e-9).unwrap());
        let full = depolarizing(2, 1.0).unwrap();
        assert!(approx_equivalent(&full, &a, &b, 0.0).unwrap());
    }
}
