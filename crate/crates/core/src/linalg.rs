//! Dense linear-algebra helpers shared by the geometry, channel and field modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

/// `expm1(d) / d`, continuous at zero.
pub fn exprel(d: f64) -> f64 {
    if d.abs() < 1e-8 {
        1.0 + d / 2.0 + d * d / 6.0
    } else {
        d.exp_m1() / d
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest elementwise deviation of `m` from its conjugate transpose.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(DVector<f64>, CMatrix)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::NotSquare(n, m.ncols()));
    }
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Real symmetric eigendecomposition, eigenvalues ascending.
pub fn symmetric_eigen(m: &RMatrix) -> Result<(DVector<f64>, RMatrix)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::NotSquare(n, m.ncols()));
    }
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = RMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Applies a divided-difference kernel in the eigenbasis `vectors`:
/// `V (K ∘ (V† Y V)) V†`.
pub fn apply_spectral_kernel<K>(vectors: &CMatrix, y: &CMatrix, kernel: K) -> CMatrix
where
    K: Fn(usize, usize) -> f64,
{
    let mut inner = vectors.adjoint() * y * vectors;
    let n = inner.nrows();
    for j in 0..n {
        for i in 0..n {
            inner[(i, j)] *= kernel(i, j);
        }
    }
    vectors * inner * vectors.adjoint()
}

/// Solves the symmetric-definite problem `M v = η G v`.
///
/// Eigenvalues are returned in descending order; the eigenvectors (columns)
/// are `G`-orthonormal.
pub fn generalized_symmetric_eigen(m: &RMatrix, g: &RMatrix) -> Result<(Vec<f64>, RMatrix)> {
    let n = m.nrows();
    if g.nrows() != n || g.ncols() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.nrows(),
        });
    }
    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::EigenFailure("Gram matrix is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or(Error::NotInvertible("Cholesky factor"))?;
    let reduced = &l_inv * m * l_inv.transpose();
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let (values, w) = symmetric_eigen(&reduced)?;
    let vectors = l_inv.transpose() * w;
    let mut out_vals = Vec::with_capacity(n);
    let mut out_vecs = RMatrix::zeros(n, n);
    for (col, i) in (0..n).rev().enumerate() {
        out_vals.push(values[i]);
        out_vecs.set_column(col, &vectors.column(i));
    }
    Ok((out_vals, out_vecs))
}

/// Leading `k` eigenpairs of a symmetric matrix by block subspace iteration
/// with Rayleigh–Ritz. Eigenvalues come back in descending order.
pub fn top_symmetric_eigenpairs(s: &RMatrix, k: usize) -> Result<(Vec<f64>, RMatrix)> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::NotSquare(n, s.ncols()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs of a {n}x{n} matrix"
        )));
    }
    let block = (2 * k).max(k + 6).min(n);
    // Deterministic, well-spread start block.
    let mut q = RMatrix::from_fn(n, block, |i, j| {
        let x = (i as f64 + 0.5) / n as f64;
        ((j + 1) as f64 * std::f64::consts::PI * x).sin() + 1e-3 * ((i * (j + 3)) % 7) as f64
    });
    q = q.qr().q();
    let mut previous = vec![f64::INFINITY; k];
    for _ in 0..2000 {
        let z = s * &q;
        q = z.qr().q();
        let small = q.transpose() * s * &q;
        let small = (&small + small.transpose()) * 0.5;
        let (vals, vecs) = symmetric_eigen(&small)?;
        let ritz: Vec<f64> = (0..k).map(|i| vals[block - 1 - i]).collect();
        let scale = ritz[0].abs().max(f64::MIN_POSITIVE);
        let converged = ritz
            .iter()
            .zip(&previous)
            .all(|(a, b)| (a - b).abs() <= 1e-13 * scale);
        previous = ritz;
        if converged {
            let mut out = RMatrix::zeros(n, k);
            for i in 0..k {
                let v = &q * vecs.column(block - 1 - i);
                out.set_column(i, &v);
            }
            return Ok((previous, out));
        }
    }
    Err(Error::EigenFailure(
        "subspace iteration did not converge".into(),
    ))
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
