//! Cross-module invariants: representation round trips, CP-test agreement
//! with the Choi spectrum, and closed-form/oracle consistency at scale.

use copu_core::channel::{AffineChannel, BuiltChannel, KrausChannel};
use copu_core::classify::{nonunital_cp, unital_cp};
use copu_core::coherence::{channel_l1_closed, channel_purity_closed, l1_coherence, purity};
use copu_core::explore::{sample_family, sample_unital};
use copu_core::families::{draw_family, Family};
use copu_core::mat::{pauli_x, pauli_y, pauli_z, Complex64, ComplexMatrix, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

// Both Choi routes agree entrywise for every constructor whose Bloch
// matrix is diagonal, across >= 1e4 parameter draws.
#[test]
fn choi_round_trip_across_diagonal_families() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut checked = 0usize;

    let kraus_families = [
        Family::TwoParam,
        Family::AmplitudeDamping,
        Family::BitFlip,
        Family::BitPhaseFlip,
        Family::PhaseFlip,
        Family::Pio1,
        Family::Pio2,
        Family::Pio3,
        Family::Pio4,
    ];
    for _ in 0..1000 {
        for family in kraus_families {
            let (fc, _) = draw_family(family, &mut rng, &tol).unwrap();
            let BuiltChannel::Kraus(ch) = &fc.channel else {
                unreachable!()
            };
            let direct = ch.to_choi();
            let aff = ch
                .to_affine()
                .expect("TP")
                .diagonal()
                .expect("these families have diagonal Bloch matrices");
            worst = worst.max(direct.matrix().max_abs_diff(aff.to_choi().matrix()));
            checked += 1;
        }
        // random Pauli mixtures have diagonal M as well
        let mut p = [0.0f64; 4];
        let mut norm = 0.0;
        for v in &mut p {
            *v = rng.gen_range(0.0..1.0);
            norm += *v;
        }
        let ops = vec![
            ComplexMatrix::identity(2).scale(cr((p[0] / norm).sqrt())),
            pauli_x().scale(cr((p[1] / norm).sqrt())),
            pauli_y().scale(cr((p[2] / norm).sqrt())),
            pauli_z().scale(cr((p[3] / norm).sqrt())),
        ];
        let ch = KrausChannel::new(ops, &tol).unwrap();
        let aff = ch.to_affine().unwrap().diagonal().unwrap();
        worst = worst.max(ch.to_choi().matrix().max_abs_diff(aff.to_choi().matrix()));
        checked += 1;
    }
    assert!(checked >= 10_000, "only {checked} draws");
    assert!(worst <= 1e-9, "round-trip residual {worst:.3e}");
}

// The affine CP verdict never disagrees with Choi positivity.
#[test]
fn cp_formula_matches_choi_psd_at_scale() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    for i in 0..100_000 {
        let lam: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let tau: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let formula = nonunital_cp(lam, tau, &tol).0;
        let psd = AffineChannel::new(lam, tau)
            .unwrap()
            .to_choi()
            .is_psd(&tol)
            .unwrap();
        assert_eq!(formula, psd, "draw {i}: λ={lam:?} τ={tau:?}");
    }
}

// Closed forms match the matrix route over CP draws; unital Choi spectra
// are the q_ij/4 multiset.
#[test]
fn closed_forms_and_unital_spectra() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(512);
    let mut done = 0;
    while done < 10_000 {
        let lam: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let tau: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if !nonunital_cp(lam, tau, &tol).0 {
            continue;
        }
        done += 1;
        let ch = AffineChannel::new(lam, tau).unwrap();
        let rho = ch.to_choi();
        let dc = (channel_l1_closed(&ch) - l1_coherence(rho.matrix(), &tol).unwrap()).abs();
        let dp = (channel_purity_closed(&ch) - purity(rho.matrix())).abs();
        assert!(dc <= 1e-9 && dp <= 1e-9, "ΔC={dc:.3e} ΔP={dp:.3e}");
    }

    for _ in 0..2000 {
        let lam: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let (ok, w) = unital_cp(lam, &tol);
        if !ok {
            continue;
        }
        let ch = AffineChannel::unital(lam).unwrap();
        let mut eigs = ch.to_choi().eigenvalues(&tol).unwrap();
        let mut qs: Vec<f64> = w.q.iter().map(|q| q / 4.0).collect();
        eigs.sort_by(f64::total_cmp);
        qs.sort_by(f64::total_cmp);
        for (e, q) in eigs.iter().zip(&qs) {
            assert!((e - q).abs() <= 1e-10, "spectrum {eigs:?} vs q/4 {qs:?}");
        }
    }
}

// Unital sampling: acceptance rate near the tetrahedron volume fraction,
// every sample within the coherence bound, subsystem A untouched.
#[test]
fn unital_sampler_statistics() {
    let tol = Tolerance::default();
    let set = sample_unital(100_000, 77, 8, &tol);
    let rate = set.acceptance_rate();
    assert!(
        (rate - 1.0 / 3.0).abs() <= 0.02,
        "acceptance rate {rate:.4} vs 1/3"
    );
    for s in &set.samples {
        assert!(s.c_l1 <= 1.0 + 1e-12);
        assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&s.purity));
    }
}

// At a million accepted draws the sampled coherence climbs to within 0.05
// of the √2 supremum, always from below.
#[test]
fn nonunital_max_coherence_approaches_sqrt2() {
    let tol = Tolerance::default();
    let set = sample_family(Family::NonunitalRandom, 1_000_000, 42, 8, &tol).unwrap();
    let max_c = set.samples.iter().map(|s| s.c_l1).fold(0.0f64, f64::max);
    assert!(max_c < std::f64::consts::SQRT_2, "max C = {max_c}");
    assert!(
        max_c >= std::f64::consts::SQRT_2 - 0.05,
        "max C = {max_c} stayed too far from sqrt(2)"
    );
}

// Nonunital sampling: the decomposition into unital part plus subsystem
// coherence holds sample by sample, and C > 1 needs a transverse shift.
#[test]
fn nonunital_sampler_decomposition() {
    let tol = Tolerance::default();
    let set = sample_family(Family::NonunitalRandom, 20_000, 99, 8, &tol).unwrap();
    for s in &set.samples {
        let get = |key: &str| s.params.iter().find(|(k, _)| *k == key).unwrap().1;
        let lam = [get("lambda_x"), get("lambda_y"), get("lambda_z")];
        let tau = [get("tau_x"), get("tau_y"), get("tau_z")];
        let ch = AffineChannel::new(lam, tau).unwrap();
        let unital_c = channel_l1_closed(&ch.unital_part());
        let sub = (tau[0] * tau[0] + tau[1] * tau[1]).sqrt();
        assert!((s.c_l1 - unital_c - sub).abs() <= 1e-12);
        if s.c_l1 > 1.0 + 1e-12 {
            assert!(sub > 0.0);
        }
    }
}
