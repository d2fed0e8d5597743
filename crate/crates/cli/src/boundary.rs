//! Boundary curves for the coherence-purity plane.
//!
//! One-parameter families have exact curves (decoherence 2𝒫−C²=1,
//! depolarizing 4𝒫−3C²=1, amplitude damping C⁴=2𝒫−1); the unital region
//! boundary comes from the λ-grid search oracle.

use anyhow::{bail, Result};
use copu_core::explore::{unital_boundary_grid, PurityBin, RegionCurve, MIN_BIN_COUNT};
use copu_core::families::Family;

fn curve_from_fn(
    label: &str,
    p_lo: f64,
    p_hi: f64,
    bins: usize,
    f: impl Fn(f64) -> f64,
) -> RegionCurve {
    let bins = bins.max(1);
    let width = (p_hi - p_lo) / bins as f64;
    RegionCurve {
        label: label.to_string(),
        bins: (0..bins)
            .map(|i| {
                let lo = p_lo + i as f64 * width;
                let hi = lo + width;
                let c = f(0.5 * (lo + hi));
                PurityBin {
                    lo,
                    hi,
                    c_min: c,
                    c_max: c,
                    count: MIN_BIN_COUNT,
                }
            })
            .collect(),
    }
}

/// The boundary curve of `family`, or an error for families without an
/// analytic relation or grid oracle.
pub fn boundary(family: Family, bins: usize, jobs: usize) -> Result<RegionCurve> {
    match family {
        Family::Decoherence | Family::PhaseFlip => Ok(curve_from_fn(
            family.name(),
            0.5,
            1.0,
            bins,
            |p| (2.0 * p - 1.0).max(0.0).sqrt(),
        )),
        Family::Depolarizing => Ok(curve_from_fn(family.name(), 0.25, 1.0, bins, |p| {
            ((4.0 * p - 1.0) / 3.0).max(0.0).sqrt()
        })),
        Family::AmplitudeDamping => Ok(curve_from_fn(family.name(), 0.5, 1.0, bins, |p| {
            (2.0 * p - 1.0).max(0.0).powf(0.25)
        })),
        Family::Gio | Family::Fio3 | Family::Fio4 => Ok(curve_from_fn(
            family.name(),
            0.5,
            1.0,
            bins,
            |p| (2.0 * p - 1.0).max(0.0).sqrt(),
        )),
        Family::UnitalRandom => Ok(unital_boundary_grid(bins, 1e-3, jobs)),
        other => bail!(
            "no boundary curve for family {other}; supported: decoherence, depolarizing, \
             phase_flip, amplitude_damping, gio, fio3, fio4, unital_random"
        ),
    }
}

/// Homogenization trajectory (ω, T₁, T₂) sampled on a time grid, as a
/// curve in the coherence-purity plane ordered by purity.
pub fn homogenization_trajectory(
    t1: f64,
    t2: f64,
    omega: f64,
    points: usize,
    tol: &copu_core::mat::Tolerance,
) -> Result<RegionCurve> {
    let points = points.max(2);
    let mut rows: Vec<(f64, f64)> = Vec::new();
    let t_max = 6.0 * t1.max(t2);
    for i in 0..points {
        let t = t_max * i as f64 / (points - 1) as f64;
        match copu_core::families::homogenization(t, t1, t2, omega, tol) {
            Ok((_, pred)) => rows.push((pred.purity, pred.c_l1)),
            Err(copu_core::families::FamilyError::NotCompletelyPositive(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    if rows.is_empty() {
        bail!("homogenization with T1={t1}, T2={t2}, ω={omega} is nowhere completely positive");
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(RegionCurve {
        label: format!("homogenization(T2/T1={:.2},omega={omega:.2})", t2 / t1),
        bins: rows
            .iter()
            .map(|(p, c)| PurityBin {
                lo: *p,
                hi: *p,
                c_min: *c,
                c_max: *c,
                count: MIN_BIN_COUNT,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_curves() {
        let dec = boundary(Family::Decoherence, 10, 1).unwrap();
        for b in &dec.bins {
            assert!((b.c_min - (2.0 * b.mid() - 1.0).max(0.0).sqrt()).abs() < 1e-12);
        }
        let dep = boundary(Family::Depolarizing, 10, 1).unwrap();
        assert!((dep.bins[0].lo - 0.25).abs() < 1e-12);
        assert!(boundary(Family::Cmc, 10, 1).is_err());
    }

    #[test]
    fn unital_grid_boundary_hits_one_at_full_purity() {
        let curve = boundary(Family::UnitalRandom, 64, 0).unwrap();
        let last = curve.bins.last().unwrap();
        assert!((last.c_max - 1.0).abs() <= 0.01, "c_max {}", last.c_max);
    }

    #[test]
    fn homogenization_trajectory_matches_ad_when_t2_is_2t1() {
        let tol = copu_core::mat::Tolerance::default();
        let traj = homogenization_trajectory(1.0, 2.0, 1.0, 50, &tol).unwrap();
        for b in &traj.bins {
            // the T₂ = 2T₁, ω = 1 trajectory lies on C = (2P-1)^{1/4}
            assert!((b.c_min - (2.0 * b.lo - 1.0).max(0.0).powf(0.25)).abs() < 1e-9);
        }
    }
}
