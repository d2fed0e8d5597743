//! Monte Carlo exploration of coherence-purity regions.
//!
//! Samplers draw family parameters with a seedable, per-index ChaCha
//! stream: sample `i` always consumes stream `i` of the seed, so the
//! output is byte-identical no matter how many worker threads run the
//! draw. Envelopes bin the (purity, coherence) cloud; the duality fit
//! solves ϖ𝒫 − φC² = 1 in least squares.

use crate::channel::BuiltChannel;
use crate::coherence::{
    channel_l1_closed, channel_purity_closed, l1_coherence, purity, rel_entropy_coherence,
};
use crate::families::{draw_family, Family, FamilyError};
use crate::mat::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Bins with fewer samples than this are excluded from containment and
/// boundary assertions.
pub const MIN_BIN_COUNT: usize = 10;

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("degenerate design matrix: samples are collinear in (purity, C²)")]
    DegenerateFit,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// One (purity, coherence) point with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct CoPuSample {
    pub family: Family,
    pub purity: f64,
    pub c_l1: f64,
    pub c_rel: f64,
    pub params: Vec<(&'static str, f64)>,
}

/// A deterministic sampling run: the samples in index order plus the total
/// number of parameter draws (for acceptance-rate accounting).
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub samples: Vec<CoPuSample>,
    pub attempts: u64,
}

impl SampleSet {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            return 0.0;
        }
        self.samples.len() as f64 / self.attempts as f64
    }
}

fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn sample_at_index(
    family: Family,
    seed: u64,
    index: usize,
    tol: &Tolerance,
) -> Result<(CoPuSample, u64), ExploreError> {
    let mut rng = stream_rng(seed, index as u64);
    let (fc, attempts) = draw_family(family, &mut rng, tol)?;
    let sample = match &fc.channel {
        BuiltChannel::Kraus(_) => {
            let rho = fc.channel.to_choi();
            CoPuSample {
                family: fc.family,
                purity: purity(rho.matrix()),
                c_l1: l1_coherence(rho.matrix(), tol).expect("Choi is Hermitian"),
                c_rel: rel_entropy_coherence(rho.matrix(), tol).expect("Choi is a state"),
                params: fc.params,
            }
        }
        BuiltChannel::Affine(aff) => {
            let rho = aff.to_choi();
            let c_l1 = channel_l1_closed(aff);
            let p = channel_purity_closed(aff);
            // closed forms against the matrix route on a 1% subsample
            if index.is_multiple_of(100) {
                let c_o = l1_coherence(rho.matrix(), tol).expect("Choi is Hermitian");
                let p_o = purity(rho.matrix());
                assert!(
                    (c_l1 - c_o).abs() <= 1e-9 && (p - p_o).abs() <= 1e-9,
                    "closed form drifted from the Choi oracle at index {index}: \
                     ΔC = {:.3e}, ΔP = {:.3e}",
                    (c_l1 - c_o).abs(),
                    (p - p_o).abs()
                );
            }
            CoPuSample {
                family: fc.family,
                purity: p,
                c_l1,
                c_rel: rel_entropy_coherence(rho.matrix(), tol).expect("Choi is a state"),
                params: fc.params,
            }
        }
    };
    Ok((sample, attempts))
}

/// Draws `n` members of `family`. `jobs` only splits the work; the result
/// is identical for any worker count.
pub fn sample_family(
    family: Family,
    n: usize,
    seed: u64,
    jobs: usize,
    tol: &Tolerance,
) -> Result<SampleSet, ExploreError> {
    let jobs = jobs.max(1).min(n.max(1));
    let mut slots: Vec<Option<CoPuSample>> = Vec::new();
    slots.resize_with(n, || None);
    let chunk_len = n.div_ceil(jobs).max(1);

    let mut total_attempts = 0u64;
    let mut first_err: Option<ExploreError> = None;
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (chunk_idx, chunk) in slots.chunks_mut(chunk_len).enumerate() {
            let base = chunk_idx * chunk_len;
            handles.push(scope.spawn(move || -> Result<u64, ExploreError> {
                let mut attempts = 0u64;
                for (offset, slot) in chunk.iter_mut().enumerate() {
                    let (sample, used) = sample_at_index(family, seed, base + offset, tol)?;
                    attempts += used;
                    *slot = Some(sample);
                }
                Ok(attempts)
            }));
        }
        for handle in handles {
            match handle.join().expect("sampler thread panicked") {
                Ok(attempts) => total_attempts += attempts,
                Err(e) => first_err = Some(first_err.take().unwrap_or(e)),
            }
        }
    });
    if let Some(e) = first_err {
        return Err(e);
    }

    Ok(SampleSet {
        samples: slots.into_iter().map(|s| s.expect("slot filled")).collect(),
        attempts: total_attempts,
    })
}

/// Uniform-λ rejection sampling of the unital tetrahedron.
pub fn sample_unital(n: usize, seed: u64, jobs: usize, tol: &Tolerance) -> SampleSet {
    sample_family(Family::UnitalRandom, n, seed, jobs, tol).expect("unital sampling is total")
}

/// Uniform-(λ, τ) rejection sampling of the CP region.
pub fn sample_nonunital(n: usize, seed: u64, jobs: usize, tol: &Tolerance) -> SampleSet {
    sample_family(Family::NonunitalRandom, n, seed, jobs, tol).expect("nonunital sampling is total")
}

/// One purity bin of a region envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityBin {
    pub lo: f64,
    pub hi: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub count: usize,
}

impl PurityBin {
    pub fn well_covered(&self) -> bool {
        self.count >= MIN_BIN_COUNT
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Binned coherence envelope of a sample cloud over its purity range.
#[derive(Debug, Clone)]
pub struct RegionCurve {
    pub label: String,
    pub bins: Vec<PurityBin>,
}

impl RegionCurve {
    /// The bin containing purity `p`, if it is inside the binned range.
    pub fn bin_for(&self, p: f64) -> Option<&PurityBin> {
        if self.bins.is_empty() {
            return None;
        }
        let lo = self.bins[0].lo;
        let hi = self.bins[self.bins.len() - 1].hi;
        if p < lo || p > hi {
            return None;
        }
        let width = (hi - lo) / self.bins.len() as f64;
        if width <= 0.0 {
            return self.bins.first();
        }
        let idx = (((p - lo) / width) as usize).min(self.bins.len() - 1);
        Some(&self.bins[idx])
    }
}

/// Envelope over the observed purity range of `samples`.
pub fn region_envelope(
    samples: &[CoPuSample],
    bin_count: usize,
) -> Result<RegionCurve, ExploreError> {
    if samples.len() < 100 {
        return Err(ExploreError::TooFewSamples {
            need: 100,
            got: samples.len(),
        });
    }
    let lo = samples.iter().map(|s| s.purity).fold(f64::INFINITY, f64::min);
    let hi = samples
        .iter()
        .map(|s| s.purity)
        .fold(f64::NEG_INFINITY, f64::max);
    envelope_over(samples, bin_count, lo, hi)
}

/// Envelope over a fixed purity range; samples outside the range are
/// ignored. Useful for aligning bins across sample sets.
pub fn envelope_over(
    samples: &[CoPuSample],
    bin_count: usize,
    lo: f64,
    hi: f64,
) -> Result<RegionCurve, ExploreError> {
    if samples.is_empty() {
        return Err(ExploreError::TooFewSamples { need: 1, got: 0 });
    }
    let bin_count = bin_count.max(1);
    let label = samples[0].family.name().to_string();
    if hi <= lo {
        // degenerate range: a single point bin
        let cs: Vec<f64> = samples.iter().map(|s| s.c_l1).collect();
        return Ok(RegionCurve {
            label,
            bins: vec![PurityBin {
                lo,
                hi,
                c_min: cs.iter().copied().fold(f64::INFINITY, f64::min),
                c_max: cs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                count: samples.len(),
            }],
        });
    }
    let width = (hi - lo) / bin_count as f64;
    let mut bins: Vec<PurityBin> = (0..bin_count)
        .map(|i| PurityBin {
            lo: lo + i as f64 * width,
            hi: lo + (i + 1) as f64 * width,
            c_min: f64::INFINITY,
            c_max: f64::NEG_INFINITY,
            count: 0,
        })
        .collect();
    for s in samples {
        if s.purity < lo || s.purity > hi {
            continue;
        }
        let idx = (((s.purity - lo) / width) as usize).min(bin_count - 1);
        let b = &mut bins[idx];
        b.c_min = b.c_min.min(s.c_l1);
        b.c_max = b.c_max.max(s.c_l1);
        b.count += 1;
    }
    Ok(RegionCurve { label, bins })
}

/// Least-squares parameters of the duality relation ϖ𝒫 − φC² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityFit {
    pub varpi: f64,
    pub varphi: f64,
    pub residual_max: f64,
}

/// Fits ϖ𝒫ᵢ − φCᵢ² = 1 over the samples and reports the worst residual.
pub fn duality_fit(samples: &[CoPuSample]) -> Result<DualityFit, ExploreError> {
    if samples.len() < 2 {
        return Err(ExploreError::TooFewSamples {
            need: 2,
            got: samples.len(),
        });
    }
    // normal equations for the design (𝒫, −C²) against the constant 1
    let (mut spp, mut spc, mut scc, mut sp, mut sc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for s in samples {
        let p = s.purity;
        let c2 = s.c_l1 * s.c_l1;
        spp += p * p;
        spc += p * c2;
        scc += c2 * c2;
        sp += p;
        sc += c2;
    }
    let det = spp * scc - spc * spc;
    let scale = (spp * scc).max(1.0);
    if det.abs() <= 1e-12 * scale {
        return Err(ExploreError::DegenerateFit);
    }
    // det > 0 forces scc > 0 by Cauchy-Schwarz, so the division is safe
    let varpi = (sp * scc - sc * spc) / det;
    let varphi = (varpi * spc - sc) / scc;
    let residual_max = samples
        .iter()
        .map(|s| (varpi * s.purity - varphi * s.c_l1 * s.c_l1 - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(DualityFit {
        varpi,
        varphi,
        residual_max,
    })
}

/// Worst light-cone margin max(C/√𝒫 − √(ϖ/φ)) over the samples; at most
/// ~0 when every point sits inside the cone. Requires ϖ, φ > 0.
pub fn lightcone_margin(samples: &[CoPuSample], fit: &DualityFit) -> Option<f64> {
    if fit.varpi <= 0.0 || fit.varphi <= 0.0 {
        return None;
    }
    let bound = (fit.varpi / fit.varphi).sqrt();
    Some(
        samples
            .iter()
            .map(|s| s.c_l1 / s.purity.max(f64::MIN_POSITIVE).sqrt() - bound)
            .fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Grid-search oracle for the unital coherence envelope: scans λ on a
/// cubic grid restricted to the CP tetrahedron and records the maximal
/// C = max(|λx|, |λy|) per purity bin over [¼, 1].
///
/// The (λx, λy) → (−λx, −λy) symmetry halves the grid: λx ≥ 0 loses no
/// feasible (C, 𝒫) pair.
pub fn unital_boundary_grid(bin_count: usize, step: f64, jobs: usize) -> RegionCurve {
    let bin_count = bin_count.max(1);
    let nx = (1.0 / step).round() as usize + 1;
    let nyz = (2.0 / step).round() as usize + 1;
    let jobs = jobs.max(1);
    let tol = Tolerance::default();

    let merge = |acc: &mut Vec<f64>, other: &[f64]| {
        for (a, b) in acc.iter_mut().zip(other) {
            *a = a.max(*b);
        }
    };

    let slice_max = |ix_range: std::ops::Range<usize>| -> Vec<f64> {
        let mut c_max = vec![f64::NEG_INFINITY; bin_count];
        for ix in ix_range {
            let lx = ix as f64 * step;
            for iy in 0..nyz {
                let ly = -1.0 + iy as f64 * step;
                for iz in 0..nyz {
                    let lz = -1.0 + iz as f64 * step;
                    if !crate::classify::unital_cp([lx, ly, lz], &tol).0 {
                        continue;
                    }
                    let p = 0.25 * (1.0 + lx * lx + ly * ly + lz * lz);
                    let c = lx.abs().max(ly.abs());
                    let idx = (((p - 0.25) / 0.75 * bin_count as f64) as usize)
                        .min(bin_count - 1);
                    if c > c_max[idx] {
                        c_max[idx] = c;
                    }
                }
            }
        }
        c_max
    };

    let mut c_max = vec![f64::NEG_INFINITY; bin_count];
    if jobs == 1 {
        c_max = slice_max(0..nx);
    } else {
        let chunk = nx.div_ceil(jobs).max(1);
        let partials: Vec<Vec<f64>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            let mut start = 0;
            while start < nx {
                let end = (start + chunk).min(nx);
                handles.push(scope.spawn(move || slice_max(start..end)));
                start = end;
            }
            handles.into_iter().map(|h| h.join().expect("grid worker")).collect()
        });
        for partial in &partials {
            merge(&mut c_max, partial);
        }
    }

    let width = 0.75 / bin_count as f64;
    RegionCurve {
        label: "unital".to_string(),
        bins: (0..bin_count)
            .map(|i| PurityBin {
                lo: 0.25 + i as f64 * width,
                hi: 0.25 + (i + 1) as f64 * width,
                c_min: 0.0,
                c_max: c_max[i],
                count: if c_max[i].is_finite() { MIN_BIN_COUNT } else { 0 },
            })
            .collect(),
    }
}

/// Golden-section maximization of a unimodal scalar on [lo, hi] to the
/// given abscissa tolerance. Used to pin asserted maxima such as the CNC
/// peak at θ = φ = π/4.
pub fn refine_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c1 = b - phi * (b - a);
    let mut c2 = a + phi * (b - a);
    let (mut f1, mut f2) = (f(c1), f(c2));
    while (b - a).abs() > xtol {
        if f1 < f2 {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + phi * (b - a);
            f2 = f(c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - phi * (b - a);
            f1 = f(c1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
