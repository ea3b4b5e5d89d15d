use std::fmt;
use std::path::Path;

use super::output::Table;
use super::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct ColumnDiff {
    pub file: String,
    pub column: String,
    pub max_abs_diff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegressReport {
    pub tol: f64,
    pub diffs: Vec<ColumnDiff>,
    pub rows_compared: usize,
}

impl RegressReport {
    pub fn passed(&self) -> bool {
        self.diffs.iter().all(|d| d.max_abs_diff <= self.tol)
    }

    pub fn max_diff(&self) -> f64 {
        self.diffs.iter().map(|d| d.max_abs_diff).fold(0.0, f64::max)
    }
}

impl fmt::Display for RegressReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.diffs {
            let mark = if d.max_abs_diff <= self.tol { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {}:{} max_abs_diff={:.3e}", d.file, d.column, d.max_abs_diff)?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict}: {} rows, max diff {:.3e}, tol {:.3e}", self.rows_compared, self.max_diff(), self.tol)
    }
}

fn csv_files(dir: &Path) -> Result<Vec<String>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    Ok(names)
}

/// Row of `fresh` at time `t`, if the grids line up there.
fn matching_row(fresh_t: &[f64], t: f64, dt: f64) -> Option<usize> {
    let k = fresh_t.partition_point(|&x| x < t - 0.5 * dt);
    [k.checked_sub(1), Some(k), Some(k + 1)]
        .into_iter()
        .flatten()
        .filter(|&i| i < fresh_t.len())
        .find(|&i| (fresh_t[i] - t).abs() <= 1e-9 * t.abs().max(1.0))
}

fn flagged(table: &Table, row: usize) -> bool {
    table.column("singular_flag").is_some_and(|c| table.rows[row][c] != 0.0)
}

/// Compares every CSV in `golden` against the same file in `fresh`, matching
/// rows by `t` so that a finer fresh grid is sampled at the golden times.
/// Rows flagged singular in either file are skipped.
pub fn regress(golden: &Path, fresh: &Path, tol: f64) -> Result<RegressReport, CliError> {
    let names = csv_files(golden)?;
    if names.is_empty() {
        return Err(CliError::Schema(format!("{}: no CSV files", golden.display())));
    }
    let mut diffs = Vec::new();
    let mut rows_compared = 0;
    for name in names {
        let g = Table::read(&golden.join(&name))?;
        let fresh_path = fresh.join(&name);
        if !fresh_path.exists() {
            return Err(CliError::Schema(format!("{name}: missing from {}", fresh.display())));
        }
        let f = Table::read(&fresh_path)?;
        if g.header != f.header {
            return Err(CliError::Schema(format!("{name}: column headers differ")));
        }
        let tc = g.column("t").ok_or_else(|| CliError::Schema(format!("{name}: no t column")))?;
        let fresh_t: Vec<f64> = f.rows.iter().map(|r| r[tc]).collect();
        let golden_dt = if g.rows.len() > 1 { g.rows[1][tc] - g.rows[0][tc] } else { 1.0 };
        let mut worst = vec![0.0f64; g.header.len()];
        for (i, row) in g.rows.iter().enumerate() {
            let j = matching_row(&fresh_t, row[tc], golden_dt).ok_or_else(|| CliError::Schema(format!("{name}: no fresh row at t = {}", row[tc])))?;
            if flagged(&g, i) || flagged(&f, j) {
                continue;
            }
            rows_compared += 1;
            for (c, w) in worst.iter_mut().enumerate() {
                let d = (row[c] - f.rows[j][c]).abs();
                *w = if d.is_nan() { f64::INFINITY } else { w.max(d) };
            }
        }
        for (c, w) in worst.into_iter().enumerate() {
            if c != tc {
                diffs.push(ColumnDiff { file: name.clone(), column: g.header[c].clone(), max_abs_diff: w });
            }
        }
    }
    Ok(RegressReport { tol, diffs, rows_compared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::output::write_csv;
    use crate::scenarios::ScenarioResult;

    fn table(dir: &Path, dt: f64, n: usize, bump: f64) {
        let mut r = ScenarioResult::new("s");
        r.push("t", (0..n).map(|k| k as f64 * dt).collect());
        r.push("v_1", (0..n).map(|k| (k as f64 * dt).sin() + bump).collect());
        r.push("singular_flag", vec![0.0; n]);
        write_csv(&dir.join("s.csv"), &r).unwrap();
    }

    #[test]
    fn identical_dirs_pass_with_zero_diff() {
        let d = tempfile::tempdir().unwrap();
        table(d.path(), 0.1, 11, 0.0);
        let rep = regress(d.path(), d.path(), 0.0).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.max_diff(), 0.0);
    }

    #[test]
    fn finer_fresh_grid_is_sampled_at_golden_times() {
        let (g, f) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        table(g.path(), 0.1, 11, 0.0);
        table(f.path(), 0.05, 21, 0.0);
        let rep = regress(g.path(), f.path(), 1e-15).unwrap();
        assert_eq!(rep.rows_compared, 11);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn perturbation_fails() {
        let (g, f) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        table(g.path(), 0.1, 11, 0.0);
        table(f.path(), 0.1, 11, 1e-3);
        assert!(!regress(g.path(), f.path(), 1e-5).unwrap().passed());
    }

    #[test]
    fn header_mismatch_is_schema_error() {
        let (g, f) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        table(g.path(), 0.1, 11, 0.0);
        let mut r = ScenarioResult::new("s");
        r.push("t", vec![0.0]);
        write_csv(&f.path().join("s.csv"), &r).unwrap();
        assert!(matches!(regress(g.path(), f.path(), 1.0), Err(CliError::Schema(_))));
    }
}
