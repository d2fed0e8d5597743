//! Dense complex matrices for two-qubit numerics.
//!
//! Everything in this crate works on 2×2 and 4×4 complex matrices (states,
//! Kraus operators, Choi matrices), so the implementation is a plain
//! row-major `Vec<Complex64>` with no sparsity or dimension genericity.
//! Hermitian eigenvalues come from a cyclic Jacobi sweep, which converges
//! unconditionally at these sizes and keeps the crate dependency-free on
//! the linear-algebra side.

pub use num_complex::Complex64;
use thiserror::Error;

/// Numerical tolerances shared across the crate.
///
/// `eps_herm` bounds the entrywise residual `|M - M†|` accepted as
/// Hermitian, `eps_psd` is the eigenvalue floor accepted as positive
/// semidefinite, and `eps_tp` bounds the entrywise residual of
/// `Σ Kᵢ†Kᵢ - I` accepted as trace preserving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps_herm: f64,
    pub eps_psd: f64,
    pub eps_tp: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_herm: 1e-12,
            eps_psd: 1e-10,
            eps_tp: 1e-10,
        }
    }
}

impl Tolerance {
    /// Tolerance with the PSD and TP thresholds overridden, e.g. from a
    /// `--tol` command-line flag. The Hermiticity threshold stays at its
    /// default; it guards exact structural symmetry, not channel data.
    pub fn with_eps(eps: f64) -> Result<Self, MatError> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(MatError::BadTolerance(eps));
        }
        Ok(Self {
            eps_psd: eps,
            eps_tp: eps,
            ..Self::default()
        })
    }
}

#[derive(Debug, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("operation requires a {expected}x{expected} matrix, got {got}x{got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("non-finite entry at ({0},{1})")]
    NonFinite(usize, usize),
    #[error("Jacobi eigensolver did not converge")]
    NoConvergence,
    #[error("tolerance must be finite and positive, got {0}")]
    BadTolerance(f64),
}

/// Which tensor factor of a two-qubit matrix to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

/// σ_x.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_data(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

/// σ_y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_data(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

/// σ_z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_data(
        2,
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ],
    )
}

/// The Pauli triple (σ_x, σ_y, σ_z) in index order 0, 1, 2.
pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from a row-major entry list; `data.len()` must be `dim²`.
    pub fn from_data(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim, "entry count must be dim^2");
        Self { dim, data }
    }

    /// Builds a 2×2 matrix from rows.
    pub fn from_rows2(rows: [[Complex64; 2]; 2]) -> Self {
        Self::from_data(2, vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]])
    }

    /// 2×2 diagonal matrix.
    pub fn diag2(a: Complex64, b: Complex64) -> Self {
        Self::from_rows2([
            [a, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), b],
        ])
    }

    /// 2×2 antidiagonal matrix `[[0, top], [bottom, 0]]`.
    pub fn antidiag2(top: Complex64, bottom: Complex64) -> Self {
        Self::from_rows2([
            [Complex64::new(0.0, 0.0), top],
            [bottom, Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn all_finite(&self) -> Result<(), MatError> {
        for r in 0..self.dim {
            for c in 0..self.dim {
                let v = self.get(r, c);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(MatError::NonFinite(r, c));
                }
            }
        }
        Ok(())
    }

    /// Matrix product; both operands must be square of the same dimension.
    pub fn mul(&self, other: &Self) -> Result<Self, MatError> {
        if self.dim != other.dim {
            return Err(MatError::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose M†.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.conj();
        }
        out
    }

    /// Kronecker product with `self` on subsystem A (left factor).
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for ar in 0..n {
            for ac in 0..n {
                let a = self.get(ar, ac);
                for br in 0..m {
                    for bc in 0..m {
                        out.set(ar * m + br, ac * m + bc, a * other.get(br, bc));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatError> {
        if self.dim != other.dim {
            return Err(MatError::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatError> {
        if self.dim != other.dim {
            return Err(MatError::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= k;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise |aᵢⱼ - bᵢⱼ|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise residual against M†.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.hermiticity_residual() <= eps
    }

    /// Reduced 2×2 matrix of a two-qubit (4×4) matrix; the trace is
    /// preserved.
    pub fn partial_trace(&self, keep: Subsystem) -> Result<Self, MatError> {
        if self.dim != 4 {
            return Err(MatError::WrongDimension {
                expected: 4,
                got: self.dim,
            });
        }
        let mut out = Self::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                let v = match keep {
                    // index (a b) = 2a + b; trace out B
                    Subsystem::A => self.get(2 * i, 2 * j) + self.get(2 * i + 1, 2 * j + 1),
                    // trace out A
                    Subsystem::B => self.get(i, j) + self.get(2 + i, 2 + j),
                };
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Transpose of the B indices of a two-qubit matrix. Hermiticity is
    /// preserved; positivity is not, which is the point of the PPT test.
    pub fn partial_transpose(&self) -> Result<Self, MatError> {
        if self.dim != 4 {
            return Err(MatError::WrongDimension {
                expected: 4,
                got: self.dim,
            });
        }
        let mut out = Self::zeros(4);
        for ia in 0..2 {
            for ib in 0..2 {
                for ja in 0..2 {
                    for jb in 0..2 {
                        out.set(2 * ia + ib, 2 * ja + jb, self.get(2 * ia + jb, 2 * ja + ib));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Eigenvalues of a Hermitian matrix, descending.
    pub fn hermitian_eigenvalues(&self, tol: &Tolerance) -> Result<Vec<f64>, MatError> {
        self.hermitian_eigensystem(tol).map(|(vals, _)| vals)
    }

    /// Eigenvalues (descending) and the unitary of eigenvectors in matching
    /// column order, via cyclic Jacobi rotations. Iteration stops when the
    /// off-diagonal Frobenius mass drops below 1e-14 of the matrix norm.
    pub fn hermitian_eigensystem(&self, tol: &Tolerance) -> Result<(Vec<f64>, Self), MatError> {
        let residual = self.hermiticity_residual();
        if residual > tol.eps_herm {
            return Err(MatError::NotHermitian { residual });
        }
        self.all_finite()?;
        let n = self.dim;

        // Symmetrize exactly so roundoff in the input cannot leak into the
        // rotations.
        let mut a = Self::zeros(n);
        for r in 0..n {
            a.set(r, r, Complex64::new(self.get(r, r).re, 0.0));
            for c in (r + 1)..n {
                let v = (self.get(r, c) + self.get(c, r).conj()) * 0.5;
                a.set(r, c, v);
                a.set(c, r, v.conj());
            }
        }

        let mut v = Self::identity(n);
        let fro = a.frobenius_norm();
        if fro == 0.0 {
            return Ok((vec![0.0; n], v));
        }
        let thresh = 1e-14 * fro;

        let mut converged = false;
        for _sweep in 0..60 {
            if a.offdiag_norm() <= thresh {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let r = apq.norm();
                    if r <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let alpha = apq / r; // unit phase of the pivot
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let theta = (aqq - app) / (2.0 * r);
                    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // A <- J† A J with J = [[c, s·α], [-s·α*, c]] on (p,q).
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, akp * c - akq * (s * alpha.conj()));
                        a.set(k, q, akp * (s * alpha) + akq * c);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, apk * c - aqk * (s * alpha));
                        a.set(q, k, apk * (s * alpha.conj()) + aqk * c);
                    }
                    a.set(p, q, Complex64::new(0.0, 0.0));
                    a.set(q, p, Complex64::new(0.0, 0.0));
                    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, vkp * c - vkq * (s * alpha.conj()));
                        v.set(k, q, vkp * (s * alpha) + vkq * c);
                    }
                }
            }
        }
        if !converged && a.offdiag_norm() > thresh {
            return Err(MatError::NoConvergence);
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
        let vals: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
        let mut vecs = Self::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for k in 0..n {
                vecs.set(k, new_col, v.get(k, old_col));
            }
        }
        Ok((vals, vecs))
    }

    fn offdiag_norm(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    s += self.get(r, c).norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

/// Checks the density-matrix preconditions (Hermitian within `eps_herm`,
/// unit trace within 1e-10, eigenvalues ≥ -eps_psd) and returns the
/// eigenvalues clamped into [0, 1], descending.
pub fn state_eigenvalues(rho: &ComplexMatrix, tol: &Tolerance) -> Result<Vec<f64>, MatError> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(MatError::NotDensityMatrix(format!(
            "trace {:.12} + {:.3e}i is not 1",
            tr.re, tr.im
        )));
    }
    let eigs = rho.hermitian_eigenvalues(tol)?;
    let mut clamped = Vec::with_capacity(eigs.len());
    for e in eigs {
        if e < -tol.eps_psd {
            return Err(MatError::NotDensityMatrix(format!(
                "eigenvalue {e:.3e} below -eps_psd"
            )));
        }
        clamped.push(e.clamp(0.0, 1.0));
    }
    Ok(clamped)
}

/// Von Neumann entropy in bits, -Σ eᵢ log₂ eᵢ with 0·log 0 = 0.
///
/// Eigenvalues in [-eps_psd, 0) are clamped to zero before the logarithm;
/// channels on the positivity boundary land there routinely.
pub fn von_neumann_entropy(rho: &ComplexMatrix, tol: &Tolerance) -> Result<f64, MatError> {
    Ok(shannon_bits(&state_eigenvalues(rho, tol)?))
}

/// Shannon entropy in bits of a clamped spectrum.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}
