//! CSV emission and parsing plus atomic file writes.
//!
//! Numbers are printed with 17 significant digits and a dot decimal so
//! that repeated runs diff cleanly and round-trip exactly through f64.

use anyhow::{bail, Context, Result};
use copu_core::explore::{CoPuSample, RegionCurve};
use std::fs;
use std::path::Path;

/// 17 significant digits, locale-free.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to `path` atomically (temp file + rename).
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = {
        let mut name = path
            .file_name()
            .context("output path has no file name")?
            .to_os_string();
        name.push(format!(".tmp.{}", std::process::id()));
        match dir {
            Some(d) => d.join(name),
            None => name.into(),
        }
    };
    fs::write(&tmp, contents)
        .with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("cannot move output into place at {}", path.display()))?;
    Ok(())
}

/// Renders a sample set as CSV: `family,purity,c_l1,c_rel` followed by the
/// family's parameter columns (taken from the first sample).
pub fn samples_to_csv(samples: &[CoPuSample]) -> String {
    let mut out = String::from("family,purity,c_l1,c_rel");
    let param_keys: Vec<&str> = samples
        .first()
        .map(|s| s.params.iter().map(|(k, _)| *k).collect())
        .unwrap_or_default();
    for key in &param_keys {
        out.push(',');
        out.push_str(key);
    }
    out.push('\n');
    for s in samples {
        out.push_str(s.family.name());
        out.push(',');
        out.push_str(&fmt_f64(s.purity));
        out.push(',');
        out.push_str(&fmt_f64(s.c_l1));
        out.push(',');
        out.push_str(&fmt_f64(s.c_rel));
        for key in &param_keys {
            out.push(',');
            match s.params.iter().find(|(k, _)| k == key) {
                Some((_, v)) => out.push_str(&fmt_f64(*v)),
                None => out.push_str("nan"),
            }
        }
        out.push('\n');
    }
    out
}

/// Renders a boundary/envelope curve as CSV of (purity, c_min, c_max) rows.
pub fn curve_to_csv(curve: &RegionCurve) -> String {
    let mut out = String::from("family,purity,c_min,c_max\n");
    for bin in curve.bins.iter().filter(|b| b.count > 0) {
        out.push_str(&curve.label);
        out.push(',');
        out.push_str(&fmt_f64(bin.mid()));
        out.push(',');
        out.push_str(&fmt_f64(bin.c_min));
        out.push(',');
        out.push_str(&fmt_f64(bin.c_max));
        out.push('\n');
    }
    out
}

/// A parsed CSV series for plotting: either scatter points or a boundary
/// band.
#[derive(Debug, Clone)]
pub enum Series {
    Points { label: String, xy: Vec<(f64, f64)> },
    Band {
        label: String,
        lo: Vec<(f64, f64)>,
        hi: Vec<(f64, f64)>,
    },
}

impl Series {
    pub fn label(&self) -> &str {
        match self {
            Series::Points { label, .. } | Series::Band { label, .. } => label,
        }
    }

    pub fn max_y(&self) -> f64 {
        match self {
            Series::Points { xy, .. } => xy.iter().map(|p| p.1).fold(0.0, f64::max),
            Series::Band { hi, .. } => hi.iter().map(|p| p.1).fold(0.0, f64::max),
        }
    }
}

/// Parses a CSV produced by the sample or boundary commands. The series
/// label is the caller-provided name (the plot legend uses file stems).
pub fn parse_csv(text: &str, label: &str) -> Result<Series> {
    let mut lines = text.lines();
    let header = lines.next().context("empty CSV")?;
    let cols: Vec<&str> = header.split(',').collect();
    let find = |name: &str| cols.iter().position(|c| *c == name);

    let p_idx = find("purity").context("CSV lacks a purity column")?;
    let parse_row = |line: &str, idx: usize, row_no: usize| -> Result<f64> {
        let fields: Vec<&str> = line.split(',').collect();
        let field = fields
            .get(idx)
            .with_context(|| format!("row {row_no}: missing column {idx}"))?;
        field
            .parse::<f64>()
            .with_context(|| format!("row {row_no}: bad number {field:?}"))
    };

    let label = label.to_string();
    if let (Some(c_idx), true) = (find("c_l1"), find("c_min").is_none()) {
        let mut xy = Vec::new();
        for (row_no, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            xy.push((parse_row(line, p_idx, row_no)?, parse_row(line, c_idx, row_no)?));
        }
        if xy.is_empty() {
            bail!("CSV has no data rows");
        }
        return Ok(Series::Points { label, xy });
    }

    let lo_idx = find("c_min").context("CSV lacks c_l1 and c_min columns")?;
    let hi_idx = find("c_max").context("boundary CSV lacks a c_max column")?;
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for (row_no, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p = parse_row(line, p_idx, row_no)?;
        lo.push((p, parse_row(line, lo_idx, row_no)?));
        hi.push((p, parse_row(line, hi_idx, row_no)?));
    }
    if lo.is_empty() {
        bail!("CSV has no data rows");
    }
    Ok(Series::Band { label, lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use copu_core::explore::sample_family;
    use copu_core::families::Family;
    use copu_core::mat::Tolerance;

    #[test]
    fn sample_csv_round_trips() {
        let set = sample_family(Family::AmplitudeDamping, 50, 1, 1, &Tolerance::default()).unwrap();
        let csv = samples_to_csv(&set.samples);
        let series = parse_csv(&csv, "ad_run").unwrap();
        let Series::Points { label, xy } = series else {
            panic!("expected points");
        };
        assert_eq!(label, "ad_run");
        assert_eq!(xy.len(), 50);
        for (s, (p, c)) in set.samples.iter().zip(&xy) {
            assert_eq!(s.purity.to_bits(), p.to_bits());
            assert_eq!(s.c_l1.to_bits(), c.to_bits());
        }
    }

    #[test]
    fn seventeen_digit_format_is_lossless() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::SQRT_2, 1e-300, 12345.6789] {
            let parsed: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn rejects_malformed_csv() {
        assert!(parse_csv("", "x").is_err());
        assert!(parse_csv("nope,nope2\n1,2\n", "x").is_err());
        assert!(parse_csv("family,purity,c_l1,c_rel\nad,0.5,zzz,0\n", "x").is_err());
    }
}
