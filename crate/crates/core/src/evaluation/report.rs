use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::ScoreReport;

/// One evaluated (dataset, method, seed) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub dataset: String,
    pub method: String,
    pub eta: usize,
    pub seed: u64,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

impl ScoreRecord {
    pub fn new(dataset: &str, method: &str, eta: usize, seed: u64, score: &ScoreReport) -> Self {
        ScoreRecord {
            dataset: dataset.to_string(),
            method: method.to_string(),
            eta,
            seed,
            precision: score.precision,
            recall: score.recall,
            f: score.f,
        }
    }
}

pub fn write_records<W: Write>(records: &[ScoreRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "dataset,method,eta,seed,precision,recall,f")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.dataset, r.method, r.eta, r.seed, r.precision, r.recall, r.f
        )?;
    }
    Ok(())
}

/// Mean and sample standard deviation of f per (method, eta).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub method: String,
    pub eta: usize,
    pub runs: usize,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f: f64,
    pub std_f: f64,
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

pub fn aggregate(records: &[ScoreRecord]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, usize), Vec<&ScoreRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.method.clone(), r.eta)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((method, eta), rows)| {
            let f: Vec<f64> = rows.iter().map(|r| r.f).collect();
            let (mean_f, std_f) = mean_std(&f);
            let n = rows.len() as f64;
            AggregateRow {
                method,
                eta,
                runs: rows.len(),
                mean_precision: rows.iter().map(|r| r.precision).sum::<f64>() / n,
                mean_recall: rows.iter().map(|r| r.recall).sum::<f64>() / n,
                mean_f,
                std_f,
            }
        })
        .collect()
}

pub fn write_aggregate<W: Write>(rows: &[AggregateRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "method,eta,runs,mean_precision,mean_recall,mean_f,std_f")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.method, r.eta, r.runs, r.mean_precision, r.mean_recall, r.mean_f, r.std_f
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregates_by_method_and_eta() {
        let mk = |m: &str, eta, f| ScoreRecord {
            dataset: "d".into(),
            method: m.into(),
            eta,
            seed: 0,
            precision: f,
            recall: f,
            f,
        };
        let rows = aggregate(&[mk("a", 2, 0.5), mk("a", 2, 0.7), mk("b", 2, 1.0), mk("a", 3, 0.2)]);
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[0].method.as_str(), rows[0].eta, rows[0].runs), ("a", 2, 2));
        assert!((rows[0].mean_f - 0.6).abs() < 1e-12);
        assert!((rows[0].std_f - 0.02f64.sqrt()).abs() < 1e-12);
        assert_eq!(rows[2].std_f, 0.0);
    }
}
