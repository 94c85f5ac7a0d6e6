//! Report emission: one machine-readable file per suite with a fixed column
//! schema, plus a human-readable summary. Numeric fields carry 17
//! significant digits so parsing them back reproduces the doubles bit for
//! bit. `wall_ms` is the only timing column and is excluded from
//! determinism comparisons.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::suites::ResultRecord;

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 8] =
    ["suite", "case_id", "parameters", "measured", "bound", "margin", "pass", "wall_ms"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// 17 significant digits: one before the point, sixteen after.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(records: &[ResultRecord]) -> String {
    let mut out = String::new();
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for r in records {
        debug_assert!(
            !r.parameters.contains([',', '"', '\n']),
            "parameters must stay CSV-safe: {}",
            r.parameters
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.suite,
            r.case_id,
            r.parameters,
            fmt_f64(r.measured),
            fmt_f64(r.bound),
            fmt_f64(r.margin),
            r.pass,
            fmt_f64(r.wall_ms),
        ));
    }
    out
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    suite: &'a str,
    case_id: &'a str,
    parameters: &'a str,
    measured: f64,
    bound: f64,
    margin: f64,
    pass: bool,
    wall_ms: f64,
}

pub fn to_json(records: &[ResultRecord]) -> Result<String> {
    let rows: Vec<JsonRecord> = records
        .iter()
        .map(|r| JsonRecord {
            suite: &r.suite,
            case_id: &r.case_id,
            parameters: &r.parameters,
            measured: r.measured,
            bound: r.bound,
            margin: r.margin,
            pass: r.pass,
            wall_ms: r.wall_ms,
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)?)
}

pub fn summary(records: &[ResultRecord]) -> String {
    let total = records.len();
    let failed: Vec<&ResultRecord> = records.iter().filter(|r| !r.pass).collect();
    let wall: f64 = records.iter().map(|r| r.wall_ms).sum();
    let mut out = String::new();
    if let Some(first) = records.first() {
        out.push_str(&format!("suite: {}\n", first.suite));
    }
    out.push_str(&format!(
        "cases: {total}, passed: {}, failed: {}, wall: {:.1} ms\n",
        total - failed.len(),
        failed.len(),
        wall
    ));
    if let Some(worst) = records.iter().min_by(|a, b| a.margin.total_cmp(&b.margin)) {
        out.push_str(&format!("smallest margin: {:.6e} at {}\n", worst.margin, worst.case_id));
    }
    for r in &failed {
        out.push_str(&format!(
            "FAIL {}: measured = {:.6e}, bound = {:.6e}, margin = {:.6e}\n",
            r.case_id, r.measured, r.bound, r.margin
        ));
    }
    out
}

/// Writes `<suite>.<ext>` and `<suite>_summary.txt` into `dir`, returning
/// the written paths.
pub fn emit_report(
    suite: &str,
    records: &[ResultRecord],
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let mut written = Vec::new();
    let data_path = match format {
        ReportFormat::Csv => {
            let p = dir.join(format!("{suite}.csv"));
            std::fs::write(&p, to_csv(records))?;
            p
        }
        ReportFormat::Json => {
            let p = dir.join(format!("{suite}.json"));
            std::fs::write(&p, to_json(records)?)?;
            p
        }
    };
    written.push(data_path);
    let summary_path = dir.join(format!("{suite}_summary.txt"));
    std::fs::write(&summary_path, summary(records))?;
    written.push(summary_path);
    Ok(written)
}

/// Parses a CSV report back into records; used by the parse-back checks.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    anyhow::ensure!(
        headers.iter().collect::<Vec<_>>() == CSV_COLUMNS,
        "unexpected CSV header {headers:?}"
    );
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        out.push(ResultRecord {
            suite: row[0].to_string(),
            case_id: row[1].to_string(),
            parameters: row[2].to_string(),
            measured: row[3].parse()?,
            bound: row[4].parse()?,
            margin: row[5].parse()?,
            pass: row[6].parse()?,
            wall_ms: row[7].parse()?,
        });
    }
    Ok(out)
}

/// Drops the timing column so reruns can be compared byte for byte.
pub fn strip_wall_ms(csv_text: &str) -> String {
    csv_text
        .lines()
        .map(|line| match line.rfind(',') {
            Some(idx) => &line[..idx],
            None => line,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_records() -> Vec<ResultRecord> {
        vec![
            ResultRecord {
                suite: "inequalities".into(),
                case_id: "a-case".into(),
                parameters: "sigma=0.5;K=2".into(),
                measured: 1.0 / 3.0,
                bound: 0.75,
                margin: 0.75 - 1.0 / 3.0,
                pass: true,
                wall_ms: 12.5,
            },
            ResultRecord {
                suite: "inequalities".into(),
                case_id: "b-case".into(),
                parameters: "sigma=0.9;K=10".into(),
                measured: f64::MIN_POSITIVE,
                bound: -1.234567890123456e-7,
                margin: -3.0,
                pass: false,
                wall_ms: 0.25,
            },
        ]
    }

    #[test]
    fn csv_roundtrip_is_bit_exact() {
        let records = sample_records();
        let text = to_csv(&records);
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.len(), records.len());
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(a.case_id, b.case_id);
            assert_eq!(a.measured.to_bits(), b.measured.to_bits());
            assert_eq!(a.bound.to_bits(), b.bound.to_bits());
            assert_eq!(a.margin.to_bits(), b.margin.to_bits());
            assert_eq!(a.pass, b.pass);
            assert_eq!(a.wall_ms.to_bits(), b.wall_ms.to_bits());
        }
    }

    #[test]
    fn json_keys_match_csv_header() {
        let records = sample_records();
        let json = to_json(&records).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let obj = parsed[0].as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        let mut expect = CSV_COLUMNS.to_vec();
        expect.sort_unstable();
        assert_eq!(keys, expect);
        // json numbers round-trip exactly through serde_json
        assert_eq!(parsed[0]["measured"].as_f64().unwrap().to_bits(), (1.0f64 / 3.0).to_bits());
    }

    #[test]
    fn wall_ms_strip_drops_only_the_last_column() {
        let records = sample_records();
        let text = to_csv(&records);
        let stripped = strip_wall_ms(&text);
        assert!(stripped.lines().next().unwrap().ends_with("pass"));
        assert_eq!(stripped.lines().count(), text.lines().count());
        assert!(!stripped.contains("wall_ms"));
    }

    #[test]
    fn summary_reports_failures() {
        let records = sample_records();
        let s = summary(&records);
        assert!(s.contains("cases: 2, passed: 1, failed: 1"));
        assert!(s.contains("FAIL b-case"));
    }
}
