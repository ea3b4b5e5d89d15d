//! End-to-end runs of the `fastforward` binary.

use std::path::Path;
use std::process::{Command, Output};

use fastforward::cli::{EventsFile, JsonReport, Table};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fastforward"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn events(dir: &Path) -> EventsFile {
    serde_json::from_str(&std::fs::read_to_string(dir.join("events.json")).unwrap()).unwrap()
}

fn value_at(table: &Table, column: &str, t: f64) -> f64 {
    let (tc, c) = (table.column("t").unwrap(), table.column(column).unwrap());
    table.rows.iter().find(|r| (r[tc] - t).abs() < 1e-9).unwrap()[c]
}

#[test]
fn two_level_defaults_clamp_node_and_finish_spin_up() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--scenario", "two-level", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let table = Table::read(&dir.path().join("two-level.csv")).unwrap();
    let expected = "t,alpha,lambda,phi_1,phidot_1,v0,v_1,V_up,V_down,pop_up_unscaled,pop_up_analytic,pop_up_driven,singular_flag";
    assert_eq!(table.header.join(","), expected);
    assert!((value_at(&table, "pop_up_driven", 10.0) - 1.0).abs() <= 1e-6);
    let ev = events(dir.path());
    assert_eq!(ev.events.len(), 1);
    assert_eq!(ev.metadata.version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn two_spin_defaults_reach_entangled_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--scenario", "two-spin", "--out", dir.path().to_str().unwrap()]);
    // The target has exact nodes at t0, so the potential is clamped there.
    assert_eq!(code(&o), 3);
    let table = Table::read(&dir.path().join("two-spin.csv")).unwrap();
    assert!((value_at(&table, "overlap_final", 10.0) - 1.0).abs() <= 1e-6);
    for name in ["phi_1", "phi_2", "phi_3", "v_1", "v_2", "v_3", "overlap_initial", "overlap_final"] {
        assert!(table.column(name).is_some(), "{name}");
    }
}

#[test]
fn increasing_field_reports_first_infeasible_time() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--scenario", "decreasing-field", "--field", "linear", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let ev = events(dir.path());
    assert!(matches!(ev.events[0], fastforward::scenarios::EventRecord::Infeasible { time, .. } if (time - 1e-3).abs() < 1e-12));
    assert!(dir.path().join("decreasing-field.csv").exists());
}

#[test]
fn fast_decreasing_field_is_feasible() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--scenario", "decreasing-field", "--field", "power", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(code(&run(&["--alpha-bar", "0.5"])), 64);
    assert_eq!(code(&run(&["--dt", "-1"])), 64);
    assert_eq!(code(&run(&["--scenario", "three-level"])), 64);
    assert_eq!(code(&run(&["--bogus"])), 64);
    assert_eq!(code(&run(&["--config", "/nonexistent/config.json"])), 66);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn config_file_precedence_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, format!(r#"{{"scenario": "decreasing-field", "alpha_bar": 3.0, "field": "power", "output_dir": {:?}}}"#, out)).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "--alpha-bar", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ev = events(&out);
    assert_eq!(ev.metadata.config.alpha_bar, 2.0);
    assert_eq!(ev.metadata.config.t0, 10.0);

    std::fs::write(&cfg, r#"{"alpha": 2.0}"#).unwrap();
    assert_eq!(code(&run(&["--config", cfg.to_str().unwrap()])), 64);
}

#[test]
fn repeated_runs_write_identical_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        run(&["--scenario", "decreasing-field", "--field", "exp", "--out", d.path().to_str().unwrap()]);
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("decreasing-field.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn json_output_round_trips_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--scenario", "decreasing-field", "--field", "power", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(dir.path().join("decreasing-field.json")).unwrap();
    let report: JsonReport = serde_json::from_str(&text).unwrap();
    assert!(report.result.is_rectangular());
    let again: JsonReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn regress_subcommand_exit_codes() {
    let root = tempfile::tempdir().unwrap();
    let (golden, fine, other) = (root.path().join("g"), root.path().join("f"), root.path().join("o"));
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    assert_eq!(code(&run(&["--scenario", "two-level", "--out", &s(&golden)])), 3);
    assert_eq!(code(&run(&["--scenario", "two-level", "--dt", "5e-4", "--out", &s(&fine)])), 3);
    assert_eq!(code(&run(&["regress", &s(&golden), &s(&golden)])), 0);
    let o = run(&["regress", &s(&golden), &s(&fine), "--tol", "1e-5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    let mut t = Table::read(&golden.join("two-level.csv")).unwrap();
    let c = t.column("v_1").unwrap();
    t.rows.iter_mut().for_each(|r| r[c] += 1e-3);
    std::fs::create_dir_all(&other).unwrap();
    let text: String = std::iter::once(t.header.join(","))
        .chain(t.rows.iter().map(|r| {
            r.iter().zip(&t.header).map(|(v, h)| fastforward::cli::format_value(h, *v)).collect::<Vec<_>>().join(",")
        }))
        .map(|l| l + "\n")
        .collect();
    std::fs::write(other.join("two-level.csv"), text).unwrap();
    assert_eq!(code(&run(&["regress", &s(&golden), &s(&other), "--tol", "1e-5"])), 1);

    let schema = root.path().join("schema");
    assert_eq!(code(&run(&["--scenario", "decreasing-field", "--field", "power", "--out", &s(&schema)])), 0);
    std::fs::rename(schema.join("decreasing-field.csv"), schema.join("two-level.csv")).unwrap();
    assert_eq!(code(&run(&["regress", &s(&golden), &s(&schema)])), 65);
}
