use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Deserialize;

use super::EvalReport;
use crate::error::{Error, Result};

/// Fixed-point (or scientific for extreme magnitudes) with 12 significant
/// digits.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.1}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        format!("{:.*}", (11 - exp).max(1) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub const ROW_HEADER: [&str; 9] = [
    "id",
    "orig_w",
    "orig_h",
    "target_w",
    "target_h",
    "area_ratio",
    "ssd",
    "excluded",
    "seconds",
];

impl EvalReport {
    /// Per-image rows as CSV.
    pub fn write_rows_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let to_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(ROW_HEADER).map_err(to_err)?;
        for r in &self.rows {
            w.write_record([
                r.id.clone(),
                r.orig_w.to_string(),
                r.orig_h.to_string(),
                r.target_w.to_string(),
                r.target_h.to_string(),
                opt(r.area_ratio),
                opt(r.ssd),
                r.excluded.clone(),
                opt(r.seconds),
            ])
            .map_err(to_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn rows_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_rows_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Dataset-level summary of one evaluation run.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Aggregate {
    pub source: String,
    pub n_images: usize,
    pub n_excluded: usize,
    pub mar: Option<f64>,
    pub mssd: Option<f64>,
}

impl Aggregate {
    pub fn to_json(&self) -> String {
        let num = |x: Option<f64>| x.map(format_float).unwrap_or_else(|| "null".into());
        let mut s = String::from("{\n");
        let _ = writeln!(
            s,
            "  \"source\": {},",
            serde_json::to_string(&self.source).expect("string serializes")
        );
        let _ = writeln!(s, "  \"n_images\": {},", self.n_images);
        let _ = writeln!(s, "  \"n_excluded\": {},", self.n_excluded);
        let _ = writeln!(s, "  \"mar\": {},", num(self.mar));
        let _ = writeln!(s, "  \"mssd\": {}", num(self.mssd));
        s.push_str("}\n");
        s
    }
}

pub fn read_aggregate(path: impl AsRef<Path>) -> Result<Aggregate> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
