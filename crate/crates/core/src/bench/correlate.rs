use std::fmt;
use std::path::Path;

use super::report::Aggregate;
use crate::error::{Error, Result};
use crate::metrics::pearson_cc;

/// Dataset-level scores of one importance method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodScores {
    pub method: String,
    pub mar: f64,
    pub mssd: f64,
}

impl TryFrom<Aggregate> for MethodScores {
    type Error = Error;

    fn try_from(agg: Aggregate) -> Result<Self> {
        match (agg.mar, agg.mssd) {
            (Some(mar), Some(mssd)) => Ok(Self {
                method: agg.source,
                mar,
                mssd,
            }),
            _ => Err(Error::Dataset(format!(
                "aggregate for `{}` has no MAR/MSSD (all rows excluded)",
                agg.source
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    /// Row-major, `labels.len()` square.
    pub values: Vec<f64>,
    /// Number of methods each coefficient was computed over.
    pub samples: usize,
}

impl CorrelationMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.labels.len() + col]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Table text with `precision` decimals.
    pub fn render(&self, precision: usize) -> String {
        let width = self
            .labels
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max(precision + 3);
        let mut out = format!("{:width$}", "");
        for l in &self.labels {
            out.push_str(&format!("  {l:>width$}"));
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{l:width$}"));
            for j in 0..self.labels.len() {
                out.push_str(&format!("  {:>width$.precision$}", self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for CorrelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(3))
    }
}

/// Pairwise Pearson coefficients of equally long, labelled columns. The
/// diagonal is exactly 1 and the matrix exactly symmetric.
pub fn correlation_matrix(columns: &[(&str, &[f64])]) -> Result<CorrelationMatrix> {
    let k = columns.len();
    let samples = columns.first().map(|c| c.1.len()).unwrap_or(0);
    let mut values = vec![0.0; k * k];
    for i in 0..k {
        pearson_cc(columns[i].1, columns[i].1)?;
        values[i * k + i] = 1.0;
        for j in i + 1..k {
            let r = pearson_cc(columns[i].1, columns[j].1)?;
            values[i * k + j] = r;
            values[j * k + i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: columns.iter().map(|c| c.0.to_string()).collect(),
        values,
        samples,
    })
}

/// Correlates per-method ratings with MAR and negated MSSD (so that higher
/// is better in every column). Methods are joined by name and must match
/// one-to-one.
pub fn correlate_reports(scores: &[MethodScores], ratings: &[(String, f64)]) -> Result<CorrelationMatrix> {
    if scores.len() != ratings.len() {
        return Err(Error::Dataset(format!(
            "{} rated methods but {} scored methods",
            ratings.len(),
            scores.len()
        )));
    }
    let mut rating_col = Vec::with_capacity(ratings.len());
    let mut mar_col = Vec::with_capacity(ratings.len());
    let mut neg_mssd_col = Vec::with_capacity(ratings.len());
    for (i, (method, rating)) in ratings.iter().enumerate() {
        if ratings[..i].iter().any(|(m, _)| m == method) {
            return Err(Error::Dataset(format!("method `{method}` rated twice")));
        }
        let mut found = scores.iter().filter(|s| &s.method == method);
        let s = found
            .next()
            .ok_or_else(|| Error::Dataset(format!("no scores for rated method `{method}`")))?;
        if found.next().is_some() {
            return Err(Error::Dataset(format!("method `{method}` scored twice")));
        }
        rating_col.push(*rating);
        mar_col.push(s.mar);
        neg_mssd_col.push(-s.mssd);
    }
    correlation_matrix(&[
        ("ratings", &rating_col),
        ("MAR", &mar_col),
        ("-MSSD", &neg_mssd_col),
    ])
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |msg: String| Error::Parse(format!("{}: {msg}", path.display()));
    let found: Vec<String> = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if found != header {
        return Err(bad(format!(
            "expected header `{}`, got `{}`",
            header.join(","),
            found.join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(rows)
}

fn number(path: &Path, field: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::Parse(format!("{}: `{field}` is not a number", path.display())))
}

/// Reads `method,rating` rows.
pub fn read_ratings(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>> {
    let path = path.as_ref();
    read_rows(path, &["method", "rating"])?
        .into_iter()
        .map(|r| Ok((r[0].clone(), number(path, &r[1])?)))
        .collect()
}

/// Reads `method,mar,mssd` rows.
pub fn read_metric_table(path: impl AsRef<Path>) -> Result<Vec<MethodScores>> {
    let path = path.as_ref();
    read_rows(path, &["method", "mar", "mssd"])?
        .into_iter()
        .map(|r| {
            Ok(MethodScores {
                method: r[0].clone(),
                mar: number(path, &r[1])?,
                mssd: number(path, &r[2])?,
            })
        })
        .collect()
}
