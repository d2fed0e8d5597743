//! Qubit-channel representations and the conversions among them.
//!
//! Three representations are supported: a Kraus operator set, the affine
//! (Bloch) form with signed singular values λ and shift τ, and the Choi
//! matrix obtained by acting with the channel on one half of a maximally
//! entangled pair. The reference entangled state used everywhere is the
//! singlet written as ¼(I⊗I − Σ σᵢ⊗σᵢ); every closed form in
//! [`crate::coherence`] is derived from that choice, so it is load-bearing
//! and lives only here.

use crate::mat::{paulis, ComplexMatrix, MatError, Subsystem, Tolerance};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("Kraus set must be nonempty")]
    EmptyKrausSet,
    #[error("Kraus operator {index} is {got}x{got}, expected 2x2")]
    WrongKrausDimension { index: usize, got: usize },
    #[error("trace preservation violated: max |ΣKᵢ†Kᵢ - I| = {residual:.3e} > {eps:.1e}")]
    NotTracePreserving { residual: f64, eps: f64 },
    #[error("affine map is not in canonical diagonal form: |M[{r}][{c}]| = {value:.3e}")]
    NotDiagonal { r: usize, c: usize, value: f64 },
    #[error("imaginary residue {residual:.3e} in the affine image; channel is not Hermiticity-preserving")]
    ImaginaryResidue { residual: f64 },
    #[error("affine parameter {name} = {value} outside [-1, 1]")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("non-finite affine parameter {name}")]
    NonFiniteParameter { name: &'static str },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Provenance of a Choi matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiSource {
    Kraus,
    Affine,
}

/// The singlet state ¼(I⊗I − Σ σᵢ⊗σᵢ) = |Ψ⁻⟩⟨Ψ⁻|.
pub fn singlet() -> ComplexMatrix {
    let id4 = ComplexMatrix::identity(4);
    let mut m = id4;
    for p in paulis() {
        m = m.sub(&p.kron(&p)).expect("4x4");
    }
    m.scale(Complex64::new(0.25, 0.0))
}

/// A CPTP map given by Kraus operators, Φ(ρ) = Σ KᵢρKᵢ†.
///
/// Construction validates trace preservation Σ Kᵢ†Kᵢ = I entrywise within
/// `eps_tp`. The operator count is unbounded here; the canonical incoherent
/// constructors in [`crate::families`] emit at most five.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<Self, ChannelError> {
        if ops.is_empty() {
            return Err(ChannelError::EmptyKrausSet);
        }
        for (index, k) in ops.iter().enumerate() {
            if k.dim() != 2 {
                return Err(ChannelError::WrongKrausDimension {
                    index,
                    got: k.dim(),
                });
            }
            k.all_finite()?;
        }
        let mut sum = ComplexMatrix::zeros(2);
        for k in &ops {
            sum = sum.add(&k.dagger().mul(k)?)?;
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(2));
        if residual > tol.eps_tp {
            return Err(ChannelError::NotTracePreserving {
                residual,
                eps: tol.eps_tp,
            });
        }
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Φ(ρ) = Σ KᵢρKᵢ†.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
        let mut out = ComplexMatrix::zeros(rho.dim());
        for k in &self.ops {
            out = out.add(&k.mul(rho)?.mul(&k.dagger())?)?;
        }
        Ok(out)
    }

    /// Choi matrix Σᵢ (Kᵢ⊗I)·|Ψ⁻⟩⟨Ψ⁻|·(Kᵢ⊗I)†.
    pub fn to_choi(&self) -> ChoiMatrix {
        let id2 = ComplexMatrix::identity(2);
        let psi = singlet();
        let mut rho = ComplexMatrix::zeros(4);
        for k in &self.ops {
            let kk = k.kron(&id2);
            let term = kk
                .mul(&psi)
                .and_then(|m| m.mul(&kk.dagger()))
                .expect("4x4 product");
            rho = rho.add(&term).expect("4x4 sum");
        }
        ChoiMatrix {
            rho,
            source: ChoiSource::Kraus,
        }
    }

    /// Affine image: M[i][j] = ½Tr(σᵢ·Φ(σⱼ)), τ[i] = ½Tr(σᵢ·Φ(I)).
    ///
    /// Both are real for any Hermiticity-preserving map; an imaginary
    /// residue above 1e-10 is rejected.
    pub fn to_affine(&self) -> Result<GeneralAffine, ChannelError> {
        let sigmas = paulis();
        let mut m = [[0.0; 3]; 3];
        let mut tau = [0.0; 3];
        let mut worst_im = 0.0f64;

        let phi_id = self.apply(&ComplexMatrix::identity(2))?;
        for (i, si) in sigmas.iter().enumerate() {
            let t = si.mul(&phi_id)?.trace();
            tau[i] = 0.5 * t.re;
            worst_im = worst_im.max(0.5 * t.im.abs());
        }
        for (j, sj) in sigmas.iter().enumerate() {
            let img = self.apply(sj)?;
            for (i, si) in sigmas.iter().enumerate() {
                let t = si.mul(&img)?.trace();
                m[i][j] = 0.5 * t.re;
                worst_im = worst_im.max(0.5 * t.im.abs());
            }
        }
        if worst_im > 1e-10 {
            return Err(ChannelError::ImaginaryResidue { residual: worst_im });
        }
        Ok(GeneralAffine { m, tau })
    }
}

/// Raw affine image of a channel: Bloch map r ↦ M·r + τ with a general
/// real 3×3 M. Produced by [`KrausChannel::to_affine`]; conversion and
/// diagnostics only. Closed-form metrics require the canonical diagonal
/// form and refuse anything else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralAffine {
    pub m: [[f64; 3]; 3],
    pub tau: [f64; 3],
}

impl GeneralAffine {
    /// Extracts the canonical form if M is already diagonal (off-diagonal
    /// magnitudes ≤ 1e-10). Callers hitting `NotDiagonal` must fall back to
    /// Choi-based metrics.
    pub fn diagonal(&self) -> Result<AffineChannel, ChannelError> {
        for r in 0..3 {
            for c in 0..3 {
                if r != c && self.m[r][c].abs() > 1e-10 {
                    return Err(ChannelError::NotDiagonal {
                        r,
                        c,
                        value: self.m[r][c].abs(),
                    });
                }
            }
        }
        AffineChannel::new(
            [self.m[0][0], self.m[1][1], self.m[2][2]],
            self.tau,
        )
    }

    pub fn max_offdiagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..3 {
            for c in 0..3 {
                if r != c {
                    worst = worst.max(self.m[r][c].abs());
                }
            }
        }
        worst
    }
}

/// Canonical affine qubit channel: signed singular values λ = (λx, λy, λz)
/// and shift τ = (τx, τy, τz); the Bloch action is rᵢ ↦ λᵢrᵢ + τᵢ.
///
/// Complete positivity is *not* required: non-CP parameter points are
/// routinely probed and classified by [`crate::classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineChannel {
    pub lambda: [f64; 3],
    pub tau: [f64; 3],
}

impl AffineChannel {
    pub fn new(lambda: [f64; 3], tau: [f64; 3]) -> Result<Self, ChannelError> {
        const NAMES_L: [&str; 3] = ["lambda_x", "lambda_y", "lambda_z"];
        const NAMES_T: [&str; 3] = ["tau_x", "tau_y", "tau_z"];
        // tiny slack so exact-boundary values built from trig round-off pass
        const SLACK: f64 = 1e-9;
        for (vals, names) in [(&lambda, &NAMES_L), (&tau, &NAMES_T)] {
            for (v, name) in vals.iter().zip(names.iter()) {
                if !v.is_finite() {
                    return Err(ChannelError::NonFiniteParameter { name });
                }
                if v.abs() > 1.0 + SLACK {
                    return Err(ChannelError::ParameterOutOfRange {
                        name,
                        value: *v,
                    });
                }
            }
        }
        Ok(Self { lambda, tau })
    }

    pub fn unital(lambda: [f64; 3]) -> Result<Self, ChannelError> {
        Self::new(lambda, [0.0; 3])
    }

    pub fn is_unital(&self) -> bool {
        self.tau.iter().all(|t| *t == 0.0)
    }

    /// The same channel with the shift removed.
    pub fn unital_part(&self) -> Self {
        Self {
            lambda: self.lambda,
            tau: [0.0; 3],
        }
    }

    /// r′ᵢ = λᵢrᵢ + τᵢ.
    pub fn apply_bloch(&self, r: [f64; 3]) -> [f64; 3] {
        [
            self.lambda[0] * r[0] + self.tau[0],
            self.lambda[1] * r[1] + self.tau[1],
            self.lambda[2] * r[2] + self.tau[2],
        ]
    }

    /// Choi matrix ¼((I + τ·σ)⊗I − Σᵢ λᵢ σᵢ⊗σᵢ).
    pub fn to_choi(&self) -> ChoiMatrix {
        let sigmas = paulis();
        let id2 = ComplexMatrix::identity(2);
        let mut a = ComplexMatrix::identity(2);
        for (t, s) in self.tau.iter().zip(sigmas.iter()) {
            a = a.add(&s.scale(Complex64::new(*t, 0.0))).expect("2x2");
        }
        let mut rho = a.kron(&id2);
        for (l, s) in self.lambda.iter().zip(sigmas.iter()) {
            rho = rho
                .sub(&s.kron(s).scale(Complex64::new(*l, 0.0)))
                .expect("4x4");
        }
        ChoiMatrix {
            rho: rho.scale(Complex64::new(0.25, 0.0)),
            source: ChoiSource::Affine,
        }
    }
}

/// A channel in whichever representation it was built in.
#[derive(Debug, Clone)]
pub enum BuiltChannel {
    Kraus(KrausChannel),
    Affine(AffineChannel),
}

impl BuiltChannel {
    pub fn to_choi(&self) -> ChoiMatrix {
        match self {
            BuiltChannel::Kraus(k) => k.to_choi(),
            BuiltChannel::Affine(a) => a.to_choi(),
        }
    }

    /// Canonical affine view when one exists: direct for affine channels,
    /// via the Bloch image for Kraus channels with a diagonal M.
    pub fn affine_view(&self) -> Option<AffineChannel> {
        match self {
            BuiltChannel::Affine(a) => Some(*a),
            BuiltChannel::Kraus(k) => k.to_affine().ok()?.diagonal().ok(),
        }
    }
}

/// The 4×4 two-qubit state (Φ⊗I)(|Ψ⁻⟩⟨Ψ⁻|) together with its provenance.
///
/// Hermitian and unit-trace by construction; positive semidefinite exactly
/// when the source channel is completely positive.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    rho: ComplexMatrix,
    source: ChoiSource,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn source(&self) -> ChoiSource {
        self.source
    }

    /// Reduced state of subsystem A; equals ½(I + τ·σ) for affine sources.
    pub fn subsystem_a(&self) -> ComplexMatrix {
        self.rho
            .partial_trace(Subsystem::A)
            .expect("Choi matrices are 4x4")
    }

    pub fn eigenvalues(&self, tol: &Tolerance) -> Result<Vec<f64>, MatError> {
        self.rho.hermitian_eigenvalues(tol)
    }

    pub fn min_eigenvalue(&self, tol: &Tolerance) -> Result<f64, MatError> {
        Ok(*self
            .eigenvalues(tol)?
            .last()
            .expect("4x4 spectrum is nonempty"))
    }

    pub fn is_psd(&self, tol: &Tolerance) -> Result<bool, MatError> {
        Ok(self.min_eigenvalue(tol)? >= -tol.eps_psd)
    }
}
