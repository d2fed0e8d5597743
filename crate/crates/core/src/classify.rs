//! Complete-positivity tests in affine coordinates and boolean channel
//! classifiers.
//!
//! The CP tests work directly on (λ, τ) without building the Choi matrix.
//! For unital channels the four quantities q_ij = 1 ± λx ± λy ± λz are the
//! (unnormalized) Choi eigenvalues; for shifts the bound τ² ≤ u − √(u²−q)
//! is evaluated in the equivalent polynomial form τ² ≤ u and
//! τ⁴ − 2uτ² + q ≥ 0 — the latter expression equals 256·det(Choi), so no
//! square root of a roundoff-sized radicand enters the comparison.
//! Channels such as amplitude damping sit exactly on u² = q, where the
//! square-root form loses half the available precision.

use crate::channel::{AffineChannel, ChoiMatrix, KrausChannel};
use crate::mat::{ComplexMatrix, MatError, Tolerance};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("degradability is undefined on the cos 2φ = 0 boundary")]
    DegradabilityBoundary,
    #[error("angle {name} = {value} outside [0, π]")]
    AngleOutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// CP witness for a unital channel: q_ij = 1 + (−1)^i λx + (−1)^{i+j} λy
/// + (−1)^j λz, indexed (00, 01, 10, 11). Σ q_ij = 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitalCpWitness {
    pub q: [f64; 4],
}

impl UnitalCpWitness {
    pub fn min_q(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// CP witness for a shifted channel. `n_hat` is the unit shift direction,
/// undefined (`None`) when τ = 0. `radicand_clamped` records that
/// u² − q came out negative and was treated as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonunitalCpWitness {
    pub q: [f64; 4],
    pub u: f64,
    pub qprod: f64,
    pub tau_norm_sq: f64,
    pub n_hat: Option<[f64; 3]>,
    pub radicand_clamped: bool,
}

fn q_values(lambda: [f64; 3]) -> [f64; 4] {
    let [lx, ly, lz] = lambda;
    [
        1.0 + lx + ly + lz,
        1.0 + lx - ly - lz,
        1.0 - lx - ly + lz,
        1.0 - lx + ly - lz,
    ]
}

/// CP test for a unital channel: all q_ij ≥ −eps_psd. The feasible set is
/// the tetrahedron with the four Pauli unitaries at its corners.
pub fn unital_cp(lambda: [f64; 3], tol: &Tolerance) -> (bool, UnitalCpWitness) {
    let w = UnitalCpWitness {
        q: q_values(lambda),
    };
    (w.min_q() >= -tol.eps_psd, w)
}

/// CP test for a general (λ, τ) channel.
///
/// Verdict: q_ij ≥ −eps and τ² ≤ u − √(u² − q), the latter evaluated as
/// τ² ≤ u together with τ⁴ − 2uτ² + q ≥ 0. When τ is numerically zero the
/// shift bound is vacuous and the unital test decides.
pub fn nonunital_cp(lambda: [f64; 3], tau: [f64; 3], tol: &Tolerance) -> (bool, NonunitalCpWitness) {
    let q = q_values(lambda);
    let qprod: f64 = q.iter().product();
    let tau_norm_sq: f64 = tau.iter().map(|t| t * t).sum();

    if tau_norm_sq < 1e-30 {
        let (ok, _) = unital_cp(lambda, tol);
        return (
            ok,
            NonunitalCpWitness {
                q,
                u: 1.0 - lambda.iter().map(|l| l * l).sum::<f64>(),
                qprod,
                tau_norm_sq,
                n_hat: None,
                radicand_clamped: false,
            },
        );
    }

    let tau_norm = tau_norm_sq.sqrt();
    let n_hat = [tau[0] / tau_norm, tau[1] / tau_norm, tau[2] / tau_norm];
    let l2: f64 = lambda.iter().map(|l| l * l).sum();
    let ln2: f64 = lambda
        .iter()
        .zip(n_hat.iter())
        .map(|(l, n)| l * l * n * n)
        .sum();
    let u = 1.0 - l2 + 2.0 * ln2;

    let q_ok = q.iter().all(|&v| v >= -tol.eps_psd);
    // τ⁴ − 2uτ² + q = 256·det(Choi); ≥ 0 together with τ² ≤ u is the
    // square-root bound without the square root.
    let det_like = tau_norm_sq * tau_norm_sq - 2.0 * u * tau_norm_sq + qprod;
    let shift_ok = tau_norm_sq <= u + tol.eps_psd && det_like >= -tol.eps_psd;

    (
        q_ok && shift_ok,
        NonunitalCpWitness {
            q,
            u,
            qprod,
            tau_norm_sq,
            n_hat: Some(n_hat),
            radicand_clamped: u * u < qprod,
        },
    )
}

/// Unitality in Kraus form: Σ KᵢKᵢ† = I within eps_tp.
pub fn is_unital(ch: &KrausChannel, tol: &Tolerance) -> bool {
    let mut sum = ComplexMatrix::zeros(2);
    for k in ch.ops() {
        sum = sum
            .add(&k.mul(&k.dagger()).expect("2x2"))
            .expect("2x2");
    }
    sum.max_abs_diff(&ComplexMatrix::identity(2)) <= tol.eps_tp
}

/// A canonical-form channel breaks coherence exactly when λx = λy = 0 and
/// τx = τy = 0; its Choi matrix is then diagonal.
pub fn is_coherence_breaking(ch: &AffineChannel) -> bool {
    ch.lambda[0].abs() <= 1e-12
        && ch.lambda[1].abs() <= 1e-12
        && ch.tau[0].abs() <= 1e-12
        && ch.tau[1].abs() <= 1e-12
}

/// Entanglement breaking via the PPT criterion, exact in 2⊗2: the channel
/// is entanglement breaking iff the partial transpose of its Choi matrix
/// stays positive semidefinite.
pub fn is_entanglement_breaking(choi: &ChoiMatrix, tol: &Tolerance) -> Result<bool, ClassifyError> {
    let pt = choi.matrix().partial_transpose()?;
    let eigs = pt.hermitian_eigenvalues(tol)?;
    Ok(*eigs.last().expect("4x4 spectrum") >= -tol.eps_psd)
}

/// Incoherent Kraus form: every column of every Kᵢ has at most one entry
/// of magnitude above 1e-12, so each Kᵢ maps basis states to (scaled)
/// basis states.
pub fn is_incoherent_kraus(ch: &KrausChannel) -> bool {
    ch.ops().iter().all(|k| {
        (0..2).all(|col| {
            (0..2)
                .filter(|&row| k.get(row, col).norm() > 1e-12)
                .count()
                <= 1
        })
    })
}

/// Strictly incoherent: both {Kᵢ} and {Kᵢ†} are in incoherent form.
pub fn is_strictly_incoherent_kraus(ch: &KrausChannel) -> bool {
    if !is_incoherent_kraus(ch) {
        return false;
    }
    ch.ops().iter().all(|k| {
        let kd = k.dagger();
        (0..2).all(|col| {
            (0..2)
                .filter(|&row| kd.get(row, col).norm() > 1e-12)
                .count()
                <= 1
        })
    })
}

/// Degradability of the two-parameter Kraus family K₁ = diag(cos θ, cos φ),
/// K₂ = antidiag(sin φ; sin θ): degradable iff cos 2θ / cos 2φ ≥ 0,
/// anti-degradable otherwise. The criterion is proven only for this
/// family; arbitrary channels are not classified.
pub fn is_degradable_family(theta: f64, phi: f64) -> Result<bool, ClassifyError> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(ClassifyError::AngleOutOfRange {
            name: "theta",
            value: theta,
        });
    }
    if !(0.0..=std::f64::consts::PI).contains(&phi) {
        return Err(ClassifyError::AngleOutOfRange {
            name: "phi",
            value: phi,
        });
    }
    let c2p = (2.0 * phi).cos();
    if c2p.abs() < 1e-12 {
        return Err(ClassifyError::DegradabilityBoundary);
    }
    Ok((2.0 * theta).cos() / c2p >= 0.0)
}
