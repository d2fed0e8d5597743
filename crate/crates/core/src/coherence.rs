//! Coherence and purity measures on states and channels.
//!
//! All coherence quantities use the computational basis as the reference
//! basis, and entropies are in bits; with those conventions the singlet has
//! ℓ₁ coherence 1 and relative entropy of coherence exactly 1.

use crate::channel::{AffineChannel, ChoiMatrix};
use crate::mat::{
    pauli_y, shannon_bits, state_eigenvalues, ComplexMatrix, MatError, Tolerance,
};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoherenceError {
    #[error("input must be Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// ℓ₁-norm coherence: Σ_{i≠j} |ρᵢⱼ|.
pub fn l1_coherence(rho: &ComplexMatrix, tol: &Tolerance) -> Result<f64, CoherenceError> {
    let residual = rho.hermiticity_residual();
    if residual > tol.eps_herm {
        return Err(CoherenceError::NotHermitian { residual });
    }
    let n = rho.dim();
    let mut sum = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                sum += rho.get(r, c).norm();
            }
        }
    }
    Ok(sum)
}

/// Relative entropy of coherence: S(ρ^D) − S(ρ), where ρ^D keeps only the
/// diagonal. Nonnegative; floating-point dust below zero is clamped.
pub fn rel_entropy_coherence(rho: &ComplexMatrix, tol: &Tolerance) -> Result<f64, CoherenceError> {
    let spectrum = state_eigenvalues(rho, tol)?;
    let diag: Vec<f64> = (0..rho.dim())
        .map(|i| rho.get(i, i).re.clamp(0.0, 1.0))
        .collect();
    Ok((shannon_bits(&diag) - shannon_bits(&spectrum)).max(0.0))
}

/// Purity Tr(ρ²).
pub fn purity(rho: &ComplexMatrix) -> f64 {
    let n = rho.dim();
    // Tr(ρ²) = Σᵢⱼ ρᵢⱼ ρⱼᵢ = Σᵢⱼ |ρᵢⱼ|² for Hermitian ρ
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 0..n {
        for c in 0..n {
            sum += rho.get(r, c) * rho.get(c, r);
        }
    }
    sum.re
}

/// Channel ℓ₁ coherence in closed form for the canonical affine
/// representation: ½(|λx+λy| + |λx−λy| + 2√(τx²+τy²)).
///
/// Independent of λz and τz.
pub fn channel_l1_closed(ch: &AffineChannel) -> f64 {
    let [lx, ly, _] = ch.lambda;
    let [tx, ty, _] = ch.tau;
    0.5 * ((lx + ly).abs() + (lx - ly).abs()) + (tx * tx + ty * ty).sqrt()
}

/// Channel purity in closed form: ¼(1 + |λ|² + |τ|²).
pub fn channel_purity_closed(ch: &AffineChannel) -> f64 {
    let l2: f64 = ch.lambda.iter().map(|v| v * v).sum();
    let t2: f64 = ch.tau.iter().map(|v| v * v).sum();
    0.25 * (1.0 + l2 + t2)
}

/// Coherence induced in subsystem A of the Choi matrix: the ℓ₁ coherence
/// of ½(I + τ·σ), which is √(τx² + τy²). Zero for every unital channel.
pub fn subsystem_coherence(ch: &AffineChannel) -> f64 {
    (ch.tau[0] * ch.tau[0] + ch.tau[1] * ch.tau[1]).sqrt()
}

/// Residual of the exact decomposition C(Φ) = C(Φ with τ=0) + C(ρ_A):
/// |C(Φ) − C(unital part) − subsystem coherence|. Contractually zero.
pub fn decomposition_residual(ch: &AffineChannel) -> f64 {
    (channel_l1_closed(ch) - channel_l1_closed(&ch.unital_part()) - subsystem_coherence(ch)).abs()
}

/// Wootters concurrence of a two-qubit state.
///
/// The spin-flipped product ρ·(σy⊗σy)ρ*(σy⊗σy) is non-Hermitian, so its
/// spectrum is taken from the similar Hermitian matrix √ρ·ρ̃·√ρ; both steps
/// run on the Hermitian Jacobi solver. Eigenvalues are clamped at zero.
pub fn concurrence(rho: &ComplexMatrix, tol: &Tolerance) -> Result<f64, CoherenceError> {
    if rho.dim() != 4 {
        return Err(CoherenceError::Mat(MatError::WrongDimension {
            expected: 4,
            got: rho.dim(),
        }));
    }
    // validates Hermitian / PSD / unit trace
    let _ = state_eigenvalues(rho, tol)?;

    let yy = pauli_y().kron(&pauli_y());
    let rho_tilde = yy.mul(&rho.conj())?.mul(&yy)?;

    let (vals, vecs) = rho.hermitian_eigensystem(tol)?;
    let mut sqrt_rho = ComplexMatrix::zeros(4);
    for (k, &e) in vals.iter().enumerate() {
        let root = e.max(0.0).sqrt();
        // √ρ = Σ √eₖ |vₖ⟩⟨vₖ|
        for r in 0..4 {
            for c in 0..4 {
                let v = sqrt_rho.get(r, c)
                    + vecs.get(r, k) * vecs.get(c, k).conj() * Complex64::new(root, 0.0);
                sqrt_rho.set(r, c, v);
            }
        }
    }
    let h = sqrt_rho.mul(&rho_tilde)?.mul(&sqrt_rho)?;
    // symmetrize roundoff before eigensolving
    let h = h.add(&h.dagger())?.scale(Complex64::new(0.5, 0.0));
    let eigs = h.hermitian_eigenvalues(tol)?;
    let roots: Vec<f64> = eigs.iter().map(|e| e.max(0.0).sqrt()).collect();
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Bundled coherence metrics of a channel's Choi matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceReport {
    pub c_l1: f64,
    pub c_rel: f64,
    pub purity: f64,
    /// ℓ₁ coherence of the reduced subsystem-A state; `None` when the
    /// report is for a raw state rather than a channel.
    pub c_subsystem: Option<f64>,
}

/// Full metrics for a channel given as a Choi matrix.
pub fn report_for_choi(choi: &ChoiMatrix, tol: &Tolerance) -> Result<CoherenceReport, CoherenceError> {
    let rho = choi.matrix();
    Ok(CoherenceReport {
        c_l1: l1_coherence(rho, tol)?,
        c_rel: rel_entropy_coherence(rho, tol)?,
        purity: purity(rho),
        c_subsystem: Some(l1_coherence(&choi.subsystem_a(), tol)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::singlet;
    use crate::classify::nonunital_cp;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_plus() -> ComplexMatrix {
        // |++⟩⟨++| : all 16 entries ¼
        ComplexMatrix::from_data(4, vec![c(0.25, 0.0); 16])
    }

    #[test]
    fn l1_examples() {
        let tol = Tolerance::default();
        let mut d = ComplexMatrix::zeros(4);
        for i in 0..4 {
            d.set(i, i, c(0.25, 0.0));
        }
        assert_eq!(l1_coherence(&d, &tol).unwrap(), 0.0);
        assert!((l1_coherence(&singlet(), &tol).unwrap() - 1.0).abs() < 1e-14);
        assert!((l1_coherence(&plus_plus(), &tol).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rel_entropy_examples() {
        let tol = Tolerance::default();
        let mut d = ComplexMatrix::zeros(2);
        d.set(0, 0, c(0.25, 0.0));
        d.set(1, 1, c(0.75, 0.0));
        assert!(rel_entropy_coherence(&d, &tol).unwrap().abs() < 1e-12);
        assert!((rel_entropy_coherence(&singlet(), &tol).unwrap() - 1.0).abs() < 1e-12);
        assert!((rel_entropy_coherence(&plus_plus(), &tol).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&ComplexMatrix::identity(4).scale(c(0.25, 0.0))) - 0.25).abs() < 1e-15);
        assert!((purity(&singlet()) - 1.0).abs() < 1e-14);
        let lam = [0.3, -0.6, 0.2];
        let ch = AffineChannel::unital(lam).unwrap();
        let want = 0.25 * (1.0 + lam.iter().map(|v| v * v).sum::<f64>());
        assert!((purity(ch.to_choi().matrix()) - want).abs() < 1e-14);
    }

    #[test]
    fn closed_form_examples() {
        let id = AffineChannel::unital([1.0, 1.0, 1.0]).unwrap();
        assert!((channel_l1_closed(&id) - 1.0).abs() < 1e-15);
        assert_eq!(channel_purity_closed(&id), 1.0);

        let shift = AffineChannel::new([0.0; 3], [1.0, 0.0, 0.0]).unwrap();
        assert!((channel_l1_closed(&shift) - 1.0).abs() < 1e-15);

        let u = AffineChannel::unital([0.3, 0.7, 0.9]).unwrap();
        assert!((channel_l1_closed(&u) - 0.7).abs() < 1e-15);

        let depol = AffineChannel::unital([0.0; 3]).unwrap();
        assert_eq!(channel_purity_closed(&depol), 0.25);

        // AD closed forms: λ=(√η,√η,η), τz=1−η → C=√η, P=(1+η²)/2
        let eta: f64 = 0.49;
        let ad = AffineChannel::new([eta.sqrt(), eta.sqrt(), eta], [0.0, 0.0, 1.0 - eta]).unwrap();
        assert!((channel_l1_closed(&ad) - 0.7).abs() < 1e-15);
        assert!((channel_purity_closed(&ad) - (1.0 + eta * eta) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn subsystem_and_decomposition() {
        let u = AffineChannel::unital([0.4, 0.1, -0.9]).unwrap();
        assert_eq!(subsystem_coherence(&u), 0.0);
        assert_eq!(decomposition_residual(&u), 0.0);

        let ch = AffineChannel::new([0.0; 3], [0.6, 0.8, 0.0]).unwrap();
        assert!((subsystem_coherence(&ch) - 1.0).abs() < 1e-15);

        let zshift = AffineChannel::new([0.2, 0.2, 0.2], [0.0, 0.0, 0.5]).unwrap();
        assert_eq!(subsystem_coherence(&zshift), 0.0);

        let nu = AffineChannel::new([0.2, 0.1, 0.0], [0.3, 0.1, 0.2]).unwrap();
        assert!(decomposition_residual(&nu) <= 1e-12);

        // AD has τx=τy=0, so the two extra terms vanish
        let eta: f64 = 0.3;
        let ad = AffineChannel::new([eta.sqrt(), eta.sqrt(), eta], [0.0, 0.0, 1.0 - eta]).unwrap();
        assert!(decomposition_residual(&ad) <= 1e-12);
    }

    // The closed-form decomposition must also hold on the matrix route:
    // l1(Choi(λ,τ)) = l1(Choi(λ,0)) + l1(subsystem A).
    #[test]
    fn decomposition_holds_on_the_choi_route() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut done = 0;
        while done < 300 {
            let lam = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let tau = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if !nonunital_cp(lam, tau, &tol).0 {
                continue;
            }
            done += 1;
            let ch = AffineChannel::new(lam, tau).unwrap();
            let full = l1_coherence(ch.to_choi().matrix(), &tol).unwrap();
            let unital = l1_coherence(ch.unital_part().to_choi().matrix(), &tol).unwrap();
            let sub = l1_coherence(&ch.to_choi().subsystem_a(), &tol).unwrap();
            assert!((full - unital - sub).abs() < 1e-12);
        }
    }

    #[test]
    fn concurrence_examples() {
        let tol = Tolerance::default();
        assert!((concurrence(&singlet(), &tol).unwrap() - 1.0).abs() < 1e-9);

        // product state
        let mut p = ComplexMatrix::zeros(2);
        p.set(0, 0, c(1.0, 0.0));
        let prod = p.kron(&ComplexMatrix::identity(2).scale(c(0.5, 0.0)));
        assert!(concurrence(&prod, &tol).unwrap() < 1e-9);

        // decoherence channel at t/T = 0.5: concurrence e^{-1/2}
        let s = (-0.5f64).exp();
        let ch = AffineChannel::unital([s, s, 1.0]).unwrap();
        let got = concurrence(ch.to_choi().matrix(), &tol).unwrap();
        assert!((got - s).abs() < 1e-9, "got {got}, want {s}");
    }

    #[test]
    fn concurrence_rejects_non_states() {
        let tol = Tolerance::default();
        assert!(concurrence(&ComplexMatrix::identity(4), &tol).is_err());
    }

    // Closed forms agree with the Choi oracle across random CP channels.
    #[test]
    fn closed_forms_match_choi_oracle() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut done = 0;
        let mut worst_c = 0.0f64;
        let mut worst_p = 0.0f64;
        while done < 2000 {
            let lam = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let tau = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if !nonunital_cp(lam, tau, &tol).0 {
                continue;
            }
            done += 1;
            let ch = AffineChannel::new(lam, tau).unwrap();
            let choi = ch.to_choi();
            worst_c = worst_c
                .max((channel_l1_closed(&ch) - l1_coherence(choi.matrix(), &tol).unwrap()).abs());
            worst_p = worst_p.max((channel_purity_closed(&ch) - purity(choi.matrix())).abs());
        }
        assert!(worst_c <= 1e-9, "coherence delta {worst_c}");
        assert!(worst_p <= 1e-9, "purity delta {worst_p}");
    }

    proptest! {
        // λz/τz independence and the unital monotone bound.
        #[test]
        fn lz_tz_do_not_move_the_closed_form(
            lx in -1.0f64..1.0, ly in -1.0f64..1.0,
            lz in -1.0f64..1.0, lz2 in -1.0f64..1.0,
            tz in -1.0f64..1.0, tz2 in -1.0f64..1.0,
        ) {
            let a = AffineChannel::new([lx, ly, lz], [0.1, 0.05, tz]).unwrap();
            let b = AffineChannel::new([lx, ly, lz2], [0.1, 0.05, tz2]).unwrap();
            prop_assert!((channel_l1_closed(&a) - channel_l1_closed(&b)).abs() < 1e-14);
            // nonunital with fixed λ is at least the unital value
            prop_assert!(channel_l1_closed(&a) >= channel_l1_closed(&a.unital_part()) - 1e-14);
        }

        #[test]
        fn c_l1_and_c_rel_vanish_together_on_diagonal_states(
            p0 in 0.0f64..1.0, p1 in 0.0f64..1.0, p2 in 0.0f64..1.0,
        ) {
            let tol = Tolerance::default();
            let total = p0 + p1 + p2 + 1.0;
            let mut d = ComplexMatrix::zeros(4);
            for (i, v) in [p0, p1, p2, 1.0].iter().enumerate() {
                d.set(i, i, c(v / total, 0.0));
            }
            prop_assert_eq!(l1_coherence(&d, &tol).unwrap(), 0.0);
            prop_assert!(rel_entropy_coherence(&d, &tol).unwrap().abs() < 1e-12);
        }
    }
}
