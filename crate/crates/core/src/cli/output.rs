use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenarios::{EventRecord, Outcome, ScenarioResult};

use super::config::RunConfig;
use super::CliError;

/// Columns written as integers.
pub fn is_flag_column(name: &str) -> bool {
    name.ends_with("_flag") || name == "feasible"
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: RunConfig,
    pub version: String,
    pub wall_time_s: f64,
}

/// Contents of `events.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventsFile {
    pub metadata: Metadata,
    pub outcome: Outcome,
    pub events: Vec<EventRecord>,
    pub diagnostics: std::collections::BTreeMap<String, f64>,
}

/// JSON form of a full run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub metadata: Metadata,
    pub result: ScenarioResult,
}

pub fn format_value(name: &str, v: f64) -> String {
    if is_flag_column(name) {
        format!("{}", v as i64)
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_csv(path: &Path, result: &ScenarioResult) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(io)?;
    w.write_record(result.columns.iter().map(|c| c.name.as_str())).map_err(io)?;
    for r in 0..result.rows() {
        w.write_record(result.columns.iter().map(|c| format_value(&c.name, c.values[r]))).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Header and rows of a CSV file written by [`write_csv`].
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut r = csv::Reader::from_path(path).map_err(io)?;
        let header = r.headers().map_err(io)?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(io)?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| CliError::Schema(format!("{}: bad number {s:?}: {e}", path.display()))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            let s = format_value("x", v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            assert_eq!(s.split('e').next().unwrap().trim_start_matches('-').replace('.', "").len(), 17);
        }
        assert_eq!(format_value("singular_flag", 1.0), "1");
    }

    #[test]
    fn csv_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = ScenarioResult::new("x");
        r.push("t", vec![0.0, 0.1]);
        r.push("singular_flag", vec![0.0, 1.0]);
        let path = dir.path().join("x.csv");
        write_csv(&path, &r).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.starts_with("t,singular_flag\n"));
        let t = Table::read(&path).unwrap();
        assert_eq!(t.rows, vec![vec![0.0, 0.0], vec![0.1, 1.0]]);
    }
}
