//! The channel-spec document format.
//!
//! A channel is described by a JSON object with exactly one of three keys:
//!
//! ```json
//! {"kraus": [[[[0,0],[1,0]],[[1,0],[0,0]]]]}
//! {"affine": {"lambda": [1,1,1], "tau": [0,0,0]}}
//! {"family": {"name": "amplitude_damping", "params": {"eta": 0.5}}}
//! ```
//!
//! Kraus operators are 2×2 matrices of `[re, im]` pairs. Family names and
//! parameter keys are the vocabulary of [`crate::families`].

use crate::channel::{AffineChannel, BuiltChannel, KrausChannel};
use crate::families::{
    amplitude_damping, cmc, cnc_full_rank, cnc_incoherent, cpo, decoherence, depolarizing, fio,
    homogenization, io_canonical, pauli_like, pio, sio_canonical, two_param_family, Family,
    FamilyChannel, FamilyError, PauliFlipKind, Prediction,
};
use crate::mat::{ComplexMatrix, Tolerance};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid channel spec: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("channel spec must contain exactly one of \"kraus\", \"affine\", \"family\"")]
    NotExactlyOne,
    #[error("non-finite number in channel spec")]
    NonFinite,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} is missing parameter {key:?}")]
    MissingParam { family: Family, key: &'static str },
    #[error("family {family} does not take parameter {key:?}")]
    UnexpectedParam { family: Family, key: String },
    #[error("family {0} is sampling-only; use the sample command instead of analyze")]
    SamplingOnly(Family),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Channel(#[from] crate::channel::ChannelError),
}

/// One Kraus operator on the wire: 2×2 of [re, im].
pub type KrausEntry = [[[f64; 2]; 2]; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineDoc {
    pub lambda: [f64; 3],
    pub tau: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

/// Parsed form of a channel-spec document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpecDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<KrausEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine: Option<AffineDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDoc>,
}

/// A built channel together with the prediction when it came from a family.
#[derive(Debug, Clone)]
pub struct BuiltSpec {
    pub channel: BuiltChannel,
    pub family: Option<Family>,
    pub prediction: Option<Prediction>,
}

impl ChannelSpecDoc {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let doc: ChannelSpecDoc = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), SpecError> {
        let set = [
            self.kraus.is_some(),
            self.affine.is_some(),
            self.family.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if set != 1 {
            return Err(SpecError::NotExactlyOne);
        }
        if let Some(ops) = &self.kraus {
            for op in ops {
                for row in op {
                    for entry in row {
                        if !entry[0].is_finite() || !entry[1].is_finite() {
                            return Err(SpecError::NonFinite);
                        }
                    }
                }
            }
        }
        if let Some(aff) = &self.affine {
            if aff.lambda.iter().chain(aff.tau.iter()).any(|v| !v.is_finite()) {
                return Err(SpecError::NonFinite);
            }
        }
        if let Some(fam) = &self.family {
            if fam.params.values().any(|v| !v.is_finite()) {
                return Err(SpecError::NonFinite);
            }
        }
        Ok(())
    }

    pub fn build(&self, tol: &Tolerance) -> Result<BuiltSpec, SpecError> {
        self.validate()?;
        if let Some(ops) = &self.kraus {
            let mats = ops
                .iter()
                .map(|op| {
                    ComplexMatrix::from_rows2([
                        [
                            Complex64::new(op[0][0][0], op[0][0][1]),
                            Complex64::new(op[0][1][0], op[0][1][1]),
                        ],
                        [
                            Complex64::new(op[1][0][0], op[1][0][1]),
                            Complex64::new(op[1][1][0], op[1][1][1]),
                        ],
                    ])
                })
                .collect();
            let ch = KrausChannel::new(mats, tol)?;
            return Ok(BuiltSpec {
                channel: BuiltChannel::Kraus(ch),
                family: None,
                prediction: None,
            });
        }
        if let Some(aff) = &self.affine {
            let ch = AffineChannel::new(aff.lambda, aff.tau)?;
            return Ok(BuiltSpec {
                channel: BuiltChannel::Affine(ch),
                family: None,
                prediction: None,
            });
        }
        let fam = self.family.as_ref().expect("validated");
        let family: Family = fam
            .name
            .parse()
            .map_err(|_| SpecError::UnknownFamily(fam.name.clone()))?;
        let built = build_family(family, &fam.params, tol)?;
        Ok(BuiltSpec {
            channel: built.channel,
            family: Some(family),
            prediction: Some(built.prediction),
        })
    }
}

struct Params<'a> {
    family: Family,
    map: &'a BTreeMap<String, f64>,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn new(family: Family, map: &'a BTreeMap<String, f64>) -> Self {
        Self {
            family,
            map,
            used: Vec::new(),
        }
    }

    fn get(&mut self, key: &'static str) -> Result<f64, SpecError> {
        self.used.push(key);
        self.map.get(key).copied().ok_or(SpecError::MissingParam {
            family: self.family,
            key,
        })
    }

    fn get_or(&mut self, key: &'static str, default: f64) -> f64 {
        self.used.push(key);
        self.map.get(key).copied().unwrap_or(default)
    }

    fn complex(&mut self, re: &'static str, im: &'static str) -> Result<Complex64, SpecError> {
        Ok(Complex64::new(self.get(re)?, self.get(im)?))
    }

    fn finish(self) -> Result<(), SpecError> {
        for key in self.map.keys() {
            if !self.used.contains(&key.as_str()) {
                return Err(SpecError::UnexpectedParam {
                    family: self.family,
                    key: key.clone(),
                });
            }
        }
        Ok(())
    }
}

fn build_family(
    family: Family,
    map: &BTreeMap<String, f64>,
    tol: &Tolerance,
) -> Result<FamilyChannel, SpecError> {
    let mut p = Params::new(family, map);
    let params: Vec<(&'static str, f64)> = Vec::new();
    let (channel, prediction) = match family {
        Family::Fio | Family::Fio1 | Family::Fio2 => {
            let variant = match family {
                Family::Fio => p.get("variant")? as u8,
                Family::Fio1 => 1,
                _ => 2,
            };
            if variant <= 2 {
                let a1 = p.complex("a1_re", "a1_im")?;
                let b1 = p.complex("b1_re", "b1_im")?;
                let a2 = p.complex("a2_re", "a2_im")?;
                let b2 = p.complex("b2_re", "b2_im")?;
                p.finish()?;
                let (ch, pred) = fio(variant, [a1, a2], [b1, b2], tol)?;
                (BuiltChannel::Kraus(ch), pred)
            } else {
                let c1 = p.complex("c1_re", "c1_im")?;
                let c2 = p.complex("c2_re", "c2_im")?;
                let d1 = p.complex("d1_re", "d1_im")?;
                let d2 = p.complex("d2_re", "d2_im")?;
                p.finish()?;
                let (ch, pred) = fio(variant, [c1, c2], [d1, d2], tol)?;
                (BuiltChannel::Kraus(ch), pred)
            }
        }
        Family::Fio3 | Family::Fio4 | Family::Gio => {
            let c1 = p.complex("c1_re", "c1_im")?;
            let c2 = p.complex("c2_re", "c2_im")?;
            let d1 = p.complex("d1_re", "d1_im")?;
            let d2 = p.complex("d2_re", "d2_im")?;
            p.finish()?;
            let variant = if family == Family::Fio3 { 3 } else { 4 };
            let (ch, pred) = fio(variant, [c1, c2], [d1, d2], tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::Io => {
            let a = [
                p.get("a1")?,
                p.get("a2")?,
                p.get("a3")?,
                p.get("a4")?,
                p.get("a5")?,
            ];
            let b = [
                p.complex("b1_re", "b1_im")?,
                p.complex("b2_re", "b2_im")?,
                p.complex("b3_re", "b3_im")?,
                p.complex("b4_re", "b4_im")?,
            ];
            p.finish()?;
            let (ch, pred) = io_canonical(a, b, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::Sio => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?, p.get("a4")?];
            let b = [
                p.complex("b1_re", "b1_im")?,
                p.complex("b2_re", "b2_im")?,
            ];
            p.finish()?;
            let (ch, pred) = sio_canonical(a, b, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::Pio
        | Family::Pio1
        | Family::Pio2
        | Family::Pio3
        | Family::Pio4
        | Family::Pio5
        | Family::Pio6 => {
            let variant = match family {
                Family::Pio => p.get("variant")? as u8,
                Family::Pio1 => 1,
                Family::Pio2 => 2,
                Family::Pio3 => 3,
                Family::Pio4 => 4,
                Family::Pio5 => 5,
                _ => 6,
            };
            let phases = [p.get("phase1")?, p.get("phase2")?];
            p.finish()?;
            let (ch, pred) = pio(variant, phases, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::Cpo => {
            let swap = p.get_or("swap", 0.0) != 0.0;
            let phases = [p.get("phi1")?, p.get("phi2")?];
            p.finish()?;
            let (ch, pred) = cpo(swap, phases, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::CncFull => {
            let (theta, phi) = (p.get("theta")?, p.get("phi")?);
            let (xi, eta) = (p.get_or("xi", 0.0), p.get_or("eta", 0.0));
            p.finish()?;
            let (ch, pred, _) = cnc_full_rank(theta, phi, xi, eta, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::CncInc => {
            let (theta, phi) = (p.get("theta")?, p.get("phi")?);
            let chi = p.get_or("chi", 0.0);
            p.finish()?;
            let (ch, pred) = cnc_incoherent(theta, phi, chi, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::Cmc => {
            let args = (
                p.get("theta1")?,
                p.get("theta2")?,
                p.get("phi1")?,
                p.get("phi2")?,
            );
            p.finish()?;
            let (ch, pred) = cmc(args.0, args.1, args.2, args.3, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::TwoParam => {
            let (theta, phi) = (p.get("theta")?, p.get("phi")?);
            p.finish()?;
            let (ch, pred) = two_param_family(theta, phi, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::AmplitudeDamping => {
            let eta = p.get("eta")?;
            p.finish()?;
            let (ch, pred) = amplitude_damping(eta, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::BitFlip | Family::BitPhaseFlip | Family::PhaseFlip => {
            let kind = match family {
                Family::BitFlip => PauliFlipKind::BitFlip,
                Family::BitPhaseFlip => PauliFlipKind::BitPhaseFlip,
                _ => PauliFlipKind::PhaseFlip,
            };
            let theta = p.get("theta")?;
            p.finish()?;
            let (ch, pred) = pauli_like(kind, theta, tol)?;
            (BuiltChannel::Kraus(ch), pred)
        }
        Family::Decoherence | Family::Depolarizing => {
            let t = p.get("t_over_T")?;
            p.finish()?;
            let (ch, pred) = if family == Family::Decoherence {
                decoherence(t)?
            } else {
                depolarizing(t)?
            };
            (BuiltChannel::Affine(ch), pred)
        }
        Family::Homogenization => {
            let args = (p.get("t")?, p.get("t1")?, p.get("t2")?, p.get("omega")?);
            p.finish()?;
            let (ch, pred) = homogenization(args.0, args.1, args.2, args.3, tol)?;
            (BuiltChannel::Affine(ch), pred)
        }
        Family::UnitalRandom | Family::NonunitalRandom => {
            return Err(SpecError::SamplingOnly(family))
        }
    };
    Ok(FamilyChannel {
        family,
        params,
        channel,
        prediction,
    })
}
