//! Truncated Fock-space reference implementation of one bosonic mode.
//!
//! Used to cross-check the phase-space formulas against direct matrix
//! computations. Operators are built on a larger working space and projected
//! onto the first `levels` number states, which keeps the low-lying matrix
//! elements free of truncation error.

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::geometry::HermitianMatrix;
use crate::linalg::{self, CMatrix, RMatrix, C64};

#[derive(Debug, Clone)]
pub struct FockSpace {
    levels: usize,
    work: usize,
    x_values: Vec<f64>,
    x_vectors: RMatrix,
}

/// Truncated `a` on `n` levels.
pub fn annihilation(n: usize) -> RMatrix {
    let mut a = RMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = (k as f64).sqrt();
    }
    a
}

fn position_real(n: usize) -> RMatrix {
    let a = annihilation(n);
    (&a + a.transpose()) * std::f64::consts::FRAC_1_SQRT_2
}

impl FockSpace {
    /// `levels` retained states, operators evaluated on `work ≥ levels` states.
    pub fn new(levels: usize, work: usize) -> Result<Self> {
        if levels == 0 || work < levels {
            return Err(Error::InvalidParameter(format!(
                "need 0 < levels ≤ work, got {levels}, {work}"
            )));
        }
        let (vals, vecs) = linalg::symmetric_eigen(&position_real(work))?;
        Ok(Self {
            levels,
            work,
            x_values: vals.iter().copied().collect(),
            x_vectors: vecs,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    fn project(&self, m: &CMatrix) -> CMatrix {
        m.view((0, 0), (self.levels, self.levels)).into_owned()
    }

    fn work_annihilation(&self) -> CMatrix {
        linalg::to_complex(&annihilation(self.work))
    }

    /// `Φ̂_f = f_x x̂ + f_p p̂` with `x̂ = (a+a†)/√2`, `p̂ = (a−a†)/(i√2)`.
    fn work_field(&self, f: [f64; 2]) -> CMatrix {
        let a = self.work_annihilation();
        let ad = a.adjoint();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = (&a + &ad) * C64::new(s, 0.0);
        let p = (&a - &ad) * C64::new(0.0, -s);
        x * C64::new(f[0], 0.0) + p * C64::new(f[1], 0.0)
    }

    pub fn field(&self, f: [f64; 2]) -> HermitianMatrix {
        HermitianMatrix::new(self.project(&self.work_field(f))).expect("field operator is Hermitian")
    }

    /// Projected product `Φ̂_f Φ̂_g`.
    pub fn field_product(&self, f: [f64; 2], g: [f64; 2]) -> CMatrix {
        self.project(&(self.work_field(f) * self.work_field(g)))
    }

    /// `½(m_x x̂² + m_p p̂²)` with the quadratures squared on the working space.
    pub fn quadratic_hamiltonian(&self, mx: f64, mp: f64) -> HermitianMatrix {
        let x = self.work_field([1.0, 0.0]);
        let p = self.work_field([0.0, 1.0]);
        let h = (&x * &x * C64::new(mx, 0.0) + &p * &p * C64::new(mp, 0.0)) * C64::new(0.5, 0.0);
        HermitianMatrix::new(self.project(&h)).expect("Hermitian by construction")
    }

    /// `e^{c·Φ̂_f}` for complex `c`, with `Φ̂_f` rotated onto `x̂` by a
    /// number-operator phase and `x̂` diagonalized on the working space.
    fn field_exponential(&self, f: [f64; 2], c: C64) -> CMatrix {
        let r = f[0].hypot(f[1]);
        let theta = (-f[1]).atan2(f[0]);
        let (n, w) = (self.levels, self.work);
        let v = self.x_vectors.view((0, 0), (n, w));
        let left = CMatrix::from_fn(n, w, |i, j| {
            (c * r * self.x_values[j]).exp() * v[(i, j)]
        });
        let ex = left * linalg::to_complex(&v.transpose());
        CMatrix::from_fn(n, n, |i, j| {
            ex[(i, j)] * C64::new(0.0, theta * (j as f64 - i as f64)).exp()
        })
    }

    /// Weyl operator `W_f = exp(iΦ̂_f)`.
    pub fn weyl(&self, f: [f64; 2]) -> CMatrix {
        self.field_exponential(f, C64::new(0.0, 1.0))
    }

    /// `exp(Φ̂_f)`.
    pub fn exp_field(&self, f: [f64; 2]) -> HermitianMatrix {
        HermitianMatrix::from_raw(self.field_exponential(f, C64::new(1.0, 0.0)))
    }

    /// Random displacement by a centered Gaussian with variances
    /// `(σ_x, σ_p)`, discretized on a `nodes × nodes` grid spanning
    /// `±span` standard deviations. The probability that leaks past the
    /// truncation is returned by a completion Kraus operator.
    pub fn noise_channel(&self, sigma_x: f64, sigma_p: f64, nodes: usize, span: f64) -> Result<Channel> {
        if !(sigma_x >= 0.0 && sigma_p >= 0.0) || nodes == 0 {
            return Err(Error::InvalidParameter("noise variances and node count".into()));
        }
        let axis = |var: f64| -> Vec<(f64, f64)> {
            if var == 0.0 || nodes == 1 {
                return vec![(0.0, 1.0)];
            }
            let sd = var.sqrt();
            let step = 2.0 * span / (nodes - 1) as f64;
            let raw: Vec<(f64, f64)> = (0..nodes)
                .map(|i| {
                    let t = -span + step * i as f64;
                    (t * sd, (-0.5 * t * t).exp())
                })
                .collect();
            let total: f64 = raw.iter().map(|p| p.1).sum();
            raw.into_iter().map(|(x, w)| (x, w / total)).collect()
        };
        let mut kraus = Vec::new();
        for &(dx, wx) in &axis(sigma_x) {
            for &(dp, wp) in &axis(sigma_p) {
                // Shifts x̂ by dx and p̂ by dp.
                let u = self.weyl([dp, -dx]);
                kraus.push(u * C64::new((wx * wp).sqrt(), 0.0));
            }
        }
        let n = self.levels;
        let mut sum = CMatrix::zeros(n, n);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let rest = linalg::hermitize(&(CMatrix::identity(n, n) - sum));
        let (vals, vecs) = linalg::hermitian_eigen(&rest)?;
        let root = CMatrix::from_diagonal(&vals.map(|v| C64::new(v.max(0.0).sqrt(), 0.0)));
        kraus.push(&vecs * root * vecs.adjoint());
        Channel::from_kraus(kraus)
    }
}
