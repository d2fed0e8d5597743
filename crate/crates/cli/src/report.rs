//! Channel analysis reports: metrics, classifier verdicts and
//! prediction-vs-oracle deltas for a parsed channel spec.

use copu_core::channel::BuiltChannel;
use copu_core::chanspec::{ChannelSpecDoc, SpecError};
use copu_core::classify::{
    is_coherence_breaking, is_entanglement_breaking, is_incoherent_kraus,
    is_strictly_incoherent_kraus, is_unital, nonunital_cp,
};
use copu_core::coherence::{concurrence, l1_coherence, purity, rel_entropy_coherence};
use copu_core::mat::Tolerance;
use serde_json::{json, Value};
use std::fmt::Write as _;

#[derive(Debug)]
pub struct AnalyzeOutput {
    pub text: String,
    pub json: Value,
    pub completely_positive: bool,
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.12}"),
        None => "n/a".to_string(),
    }
}

fn fmt_opt_bool(v: Option<bool>) -> String {
    match v {
        Some(true) => "true".to_string(),
        Some(false) => "false".to_string(),
        None => "n/a".to_string(),
    }
}

pub fn analyze(doc: &ChannelSpecDoc, tol: &Tolerance) -> Result<AnalyzeOutput, SpecError> {
    let built = doc.build(tol)?;
    let choi = built.channel.to_choi();
    let rho = choi.matrix();

    let affine = built.channel.affine_view();
    let cp = match (&built.channel, &affine) {
        (_, Some(aff)) => nonunital_cp(aff.lambda, aff.tau, tol).0,
        (BuiltChannel::Kraus(_), None) => choi.is_psd(tol).expect("Choi is Hermitian"),
        (BuiltChannel::Affine(_), None) => unreachable!("affine channels view themselves"),
    };

    let c_l1 = l1_coherence(rho, tol).expect("Choi is Hermitian");
    let p = purity(rho);
    let c_sub = l1_coherence(&choi.subsystem_a(), tol).expect("reduction is Hermitian");
    let (c_rel, conc) = if cp {
        (
            Some(rel_entropy_coherence(rho, tol).expect("CP Choi is a state")),
            Some(concurrence(rho, tol).expect("CP Choi is a state")),
        )
    } else {
        (None, None)
    };

    let unital = match &built.channel {
        BuiltChannel::Kraus(k) => is_unital(k, tol),
        BuiltChannel::Affine(a) => a.tau.iter().all(|t| t.abs() <= tol.eps_tp),
    };
    let coh_breaking = affine.as_ref().map(is_coherence_breaking);
    let ent_breaking = is_entanglement_breaking(&choi, tol).expect("Choi is Hermitian");
    let (incoherent, strictly) = match &built.channel {
        BuiltChannel::Kraus(k) => (
            Some(is_incoherent_kraus(k)),
            Some(is_strictly_incoherent_kraus(k)),
        ),
        BuiltChannel::Affine(_) => (None, None),
    };

    let mut text = String::new();
    match (&built.family, doc.family.as_ref()) {
        (Some(f), Some(fd)) => {
            let params: Vec<String> = fd.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(text, "channel: family {f} ({})", params.join(", "));
        }
        _ if doc.kraus.is_some() => {
            let n = doc.kraus.as_ref().map(|k| k.len()).unwrap_or(0);
            let _ = writeln!(text, "channel: {n} Kraus operator(s)");
        }
        _ => {
            let _ = writeln!(text, "channel: affine");
        }
    }
    let _ = writeln!(
        text,
        "tolerances: eps_herm={:.1e} eps_psd={:.1e} eps_tp={:.1e}",
        tol.eps_herm, tol.eps_psd, tol.eps_tp
    );

    text.push_str("\nrepresentation\n");
    match &affine {
        Some(aff) => {
            let _ = writeln!(
                text,
                "  lambda = ({:+.12}, {:+.12}, {:+.12})",
                aff.lambda[0], aff.lambda[1], aff.lambda[2]
            );
            let _ = writeln!(
                text,
                "  tau    = ({:+.12}, {:+.12}, {:+.12})",
                aff.tau[0], aff.tau[1], aff.tau[2]
            );
        }
        None => {
            text.push_str("  Bloch matrix is not diagonal; closed forms unavailable,\n");
            text.push_str("  metrics below come from the Choi matrix directly\n");
        }
    }

    text.push_str("\ncoherence and purity of the Choi matrix\n");
    let _ = writeln!(text, "  c_l1        = {c_l1:.12}");
    let _ = writeln!(text, "  c_rel       = {} (bits)", fmt_opt(c_rel));
    let _ = writeln!(text, "  purity      = {p:.12}");
    let _ = writeln!(text, "  c_subsystem = {c_sub:.12}");
    let _ = writeln!(text, "  concurrence = {}", fmt_opt(conc));

    text.push_str("\nclassifiers\n");
    let _ = writeln!(
        text,
        "  completely_positive   = {cp} (eps_psd={:.1e})",
        tol.eps_psd
    );
    let _ = writeln!(text, "  unital                = {unital} (eps_tp={:.1e})", tol.eps_tp);
    let _ = writeln!(
        text,
        "  coherence_breaking    = {}",
        fmt_opt_bool(coh_breaking)
    );
    let _ = writeln!(
        text,
        "  entanglement_breaking = {ent_breaking} (PPT, eps_psd={:.1e})",
        tol.eps_psd
    );
    let _ = writeln!(
        text,
        "  incoherent_kraus      = {}",
        fmt_opt_bool(incoherent)
    );
    let _ = writeln!(
        text,
        "  strictly_incoherent   = {}",
        fmt_opt_bool(strictly)
    );

    let mut prediction_json = Value::Null;
    if let Some(pred) = &built.prediction {
        text.push_str("\nprediction vs oracle\n");
        let _ = writeln!(
            text,
            "  c_l1:   predicted {:.12}, oracle {c_l1:.12}, |delta| = {:.3e}",
            pred.c_l1,
            (pred.c_l1 - c_l1).abs()
        );
        let _ = writeln!(
            text,
            "  purity: predicted {:.12}, oracle {p:.12}, |delta| = {:.3e}",
            pred.purity,
            (pred.purity - p).abs()
        );
        let _ = writeln!(text, "  basis:  {}", pred.basis);
        if let Some(claim) = &pred.claimed {
            let _ = writeln!(
                text,
                "  reported-but-untrusted form ({}): C = {}, P = {}",
                claim.note,
                fmt_opt(claim.c_l1),
                fmt_opt(claim.purity)
            );
        }
        prediction_json = json!({
            "c_l1": pred.c_l1,
            "purity": pred.purity,
            "basis": pred.basis,
            "delta_c_l1": (pred.c_l1 - c_l1).abs(),
            "delta_purity": (pred.purity - p).abs(),
            "claimed": pred.claimed.as_ref().map(|c| json!({
                "c_l1": c.c_l1,
                "purity": c.purity,
                "note": c.note,
            })),
        });
    }
    if !cp {
        text.push_str("\nnote: channel is NOT completely positive; state-only metrics withheld\n");
    }

    let json = json!({
        "tolerances": {
            "eps_herm": tol.eps_herm,
            "eps_psd": tol.eps_psd,
            "eps_tp": tol.eps_tp,
        },
        "family": built.family.map(|f| f.name()),
        "affine": affine.as_ref().map(|a| json!({"lambda": a.lambda, "tau": a.tau})),
        "metrics": {
            "c_l1": c_l1,
            "c_rel": c_rel,
            "purity": p,
            "c_subsystem": c_sub,
            "concurrence": conc,
        },
        "classifiers": {
            "completely_positive": cp,
            "unital": unital,
            "coherence_breaking": coh_breaking,
            "entanglement_breaking": ent_breaking,
            "incoherent_kraus": incoherent,
            "strictly_incoherent": strictly,
        },
        "prediction": prediction_json,
    });

    Ok(AnalyzeOutput {
        text,
        json,
        completely_positive: cp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_amplitude_damping() {
        let doc = ChannelSpecDoc::parse(
            r#"{"family": {"name": "amplitude_damping", "params": {"eta": 0.25}}}"#,
        )
        .unwrap();
        let out = analyze(&doc, &Tolerance::default()).unwrap();
        assert!(out.completely_positive);
        assert!(out.text.contains("c_l1        = 0.5000000000"));
        let c = out.json["metrics"]["c_l1"].as_f64().unwrap();
        assert!((c - 0.5).abs() < 1e-12);
        let p = out.json["metrics"]["purity"].as_f64().unwrap();
        assert!((p - (1.0 + 0.0625) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn analyze_identity_affine() {
        let doc =
            ChannelSpecDoc::parse(r#"{"affine": {"lambda": [1,1,1], "tau": [0,0,0]}}"#).unwrap();
        let out = analyze(&doc, &Tolerance::default()).unwrap();
        assert!(out.completely_positive);
        assert_eq!(out.json["classifiers"]["unital"], true);
        let c = out.json["metrics"]["c_l1"].as_f64().unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analyze_coherence_breaking() {
        let doc = ChannelSpecDoc::parse(r#"{"affine": {"lambda": [0,0,0.5], "tau": [0,0,0.2]}}"#)
            .unwrap();
        let out = analyze(&doc, &Tolerance::default()).unwrap();
        assert_eq!(out.json["classifiers"]["coherence_breaking"], true);
        assert!(out.json["metrics"]["c_l1"].as_f64().unwrap() <= 1e-12);
    }

    #[test]
    fn analyze_non_cp_channel() {
        let doc = ChannelSpecDoc::parse(r#"{"affine": {"lambda": [1,1,1], "tau": [0.1,0,0]}}"#)
            .unwrap();
        let out = analyze(&doc, &Tolerance::default()).unwrap();
        assert!(!out.completely_positive);
        assert!(out.text.contains("NOT completely positive"));
        assert!(out.json["metrics"]["c_rel"].is_null());
    }
}
