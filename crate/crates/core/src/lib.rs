//! Coherence and purity of qubit channels through the Choi representation.
//!
//! A qubit channel is mapped to its Choi matrix — the two-qubit state
//! obtained by acting on one half of a singlet — and quantified by the
//! ℓ₁-norm coherence, the relative entropy of coherence, and the purity of
//! that state. The crate provides:
//!
//! - [`mat`]: small dense complex matrices, a Hermitian Jacobi eigensolver,
//!   entropies;
//! - [`channel`]: Kraus, affine (Bloch) and Choi representations with
//!   validated conversions;
//! - [`coherence`]: state and channel coherence/purity measures, closed
//!   forms for the canonical affine family, Wootters concurrence;
//! - [`classify`]: complete-positivity tests in affine coordinates and
//!   channel classifiers (unital, coherence breaking, entanglement
//!   breaking, incoherent, degradable family split);
//! - [`families`]: constructors for the named channel families with their
//!   closed-form coherence/purity predictions;
//! - [`explore`]: deterministic seeded samplers, region envelopes, duality
//!   fits;
//! - [`chanspec`]: the JSON channel-spec document format used by the CLI.

pub mod channel;
pub mod chanspec;
pub mod classify;
pub mod coherence;
pub mod explore;
pub mod families;
pub mod mat;

pub use channel::{AffineChannel, BuiltChannel, ChoiMatrix, GeneralAffine, KrausChannel};
pub use coherence::CoherenceReport;
pub use explore::{CoPuSample, DualityFit, RegionCurve, SampleSet};
pub use families::{Family, FamilyChannel, Prediction};
pub use mat::{ComplexMatrix, Tolerance};
