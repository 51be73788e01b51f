//! End-to-end tests of the config-driven command layer: round-trips,
//! deterministic reports, flag precedence, exit codes and batch runs.

use std::fs;
use std::path::PathBuf;

use tsent::cli::{
    self, build_system, parse_config, Command, Flags, Format, EXIT_INVALID, EXIT_NO_CERTIFICATE,
    EXIT_NO_CONVERGENCE, EXIT_OK,
};
use tsent::LogBase;

const FIB_HOM: &str = r#"{
    "generators": ["s1", "s2"],
    "K": [[1, 1], [1, 0]],
    "alphabet": ["0", "1"],
    "A": [[[1, 1], [1, 0]], [[1, 1], [1, 0]]],
    "options": { "log_base": "10" }
}"#;

const FREE_GROUP_AUTO: &str = r#"{
    "generators": ["a", "b"],
    "alphabet": ["0", "1"],
    "A": [[[0, 1], [1, 1]], [[1, 1], [1, 0]]],
    "options": { "auto_inverse_transpose": true, "log_base": "10" }
}"#;

fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn config_round_trip_preserves_system() {
    let cfg = parse_config(FIB_HOM).unwrap();
    let reserialized = serde_json::to_string(&cfg).unwrap();
    let reparsed = parse_config(&reserialized).unwrap();
    assert_eq!(cfg, reparsed);

    let (sys_a, opts_a) = build_system(&cfg).unwrap();
    let (sys_b, opts_b) = build_system(&reparsed).unwrap();
    assert_eq!(sys_a, sys_b);
    assert_eq!(opts_a.base, opts_b.base);
}

#[test]
fn repeated_json_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "fib.json", FIB_HOM);
    let flags = Flags {
        format: Format::Json,
        ..Default::default()
    };
    for command in [Command::Analyze, Command::Stem, Command::Top, Command::Certify] {
        let first = cli::run(command, &path, &flags);
        let second = cli::run(command, &path, &flags);
        assert_eq!(first.stdout, second.stdout, "{command:?} output drifted");
        assert_eq!(first.exit_code, EXIT_OK);
    }
}

#[test]
fn stem_report_contains_expected_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "fib.json", FIB_HOM);
    let out = cli::run(Command::Stem, &path, &Flags::default());
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.stdout.contains("0.2178219813166"), "{}", out.stdout);
    assert!(out.stdout.contains("log base 10"), "{}", out.stdout);
}

#[test]
fn auto_inverse_transpose_matches_explicit_listing() {
    let explicit = r#"{
        "generators": ["a", "b", "a^-1", "b^-1"],
        "K": [[1, 1, 0, 1], [1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 1, 1]],
        "alphabet": ["0", "1"],
        "A": [
            [[0, 1], [1, 1]], [[1, 1], [1, 0]],
            [[0, 1], [1, 1]], [[1, 1], [1, 0]]
        ],
        "options": { "log_base": "10" }
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let auto_path = write_config(&dir, "auto.json", FREE_GROUP_AUTO);
    let explicit_path = write_config(&dir, "explicit.json", explicit);
    let flags = Flags::default();
    let auto_out = cli::run(Command::Stem, &auto_path, &flags);
    let explicit_out = cli::run(Command::Stem, &explicit_path, &flags);
    assert_eq!(auto_out.exit_code, EXIT_OK);
    assert_eq!(auto_out.stdout, explicit_out.stdout);
    assert!(auto_out.stdout.contains("0.126188137200"), "{}", auto_out.stdout);
}

#[test]
fn csv_trace_has_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "fib.json", FIB_HOM);
    let flags = Flags {
        format: Format::Csv,
        ..Default::default()
    };
    let out = cli::run(Command::Stem, &path, &flags);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("n,h_s1,h_s2,envelope"));
    assert!(lines.count() > 5);
}

#[test]
fn flag_override_emits_one_warning() {
    let with_eps = r#"{
        "generators": ["s1", "s2"],
        "K": [[1, 1], [1, 0]],
        "alphabet": ["0", "1"],
        "A": [[[1, 1], [1, 0]], [[1, 1], [1, 0]]],
        "options": { "eps": 1e-10 }
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "fib.json", with_eps);
    let flags = Flags {
        eps: Some(1e-12),
        iters: Some(400),
        ..Default::default()
    };
    let out = cli::run(Command::Stem, &path, &flags);
    assert_eq!(out.exit_code, EXIT_OK);
    // eps is set in both places, iters only on the command line.
    assert_eq!(out.warnings.len(), 1, "{:?}", out.warnings);
    assert!(out.warnings[0].contains("--eps"), "{:?}", out.warnings);
}

#[test]
fn invalid_config_exits_with_code_1() {
    let dir = tempfile::tempdir().unwrap();
    let dead_row = write_config(
        &dir,
        "dead.json",
        r#"{
            "generators": ["s1", "s2"],
            "K": [[1, 1], [0, 0]],
            "alphabet": ["0"],
            "A": [[[1]], [[1]]]
        }"#,
    );
    let out = cli::run(Command::Stem, &dead_row, &Flags::default());
    assert_eq!(out.exit_code, EXIT_INVALID);
    assert!(out.stdout.is_empty());
    assert!(out.warnings.iter().any(|w| w.contains("K:")), "{:?}", out.warnings);

    let garbage = write_config(&dir, "garbage.json", "{ not json");
    let out = cli::run(Command::Stem, &garbage, &Flags::default());
    assert_eq!(out.exit_code, EXIT_INVALID);
}

#[test]
fn certify_without_certificates_exits_with_code_2() {
    // Reducible relation and identity transitions: the graph representation
    // is not strongly connected and no sufficient condition applies.
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        "uncertified.json",
        r#"{
            "generators": ["s1", "s2"],
            "K": [[1, 1], [0, 1]],
            "alphabet": ["0", "1"],
            "A": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]
        }"#,
    );
    let out = cli::run(Command::Certify, &path, &Flags::default());
    assert_eq!(out.exit_code, EXIT_NO_CERTIFICATE);
    assert!(out.stdout.contains("no certificate applies"), "{}", out.stdout);
}

#[test]
fn exhausted_budget_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "fib.json", FIB_HOM);
    let flags = Flags {
        iters: Some(3),
        ..Default::default()
    };
    let out = cli::run(Command::Stem, &path, &flags);
    assert_eq!(out.exit_code, EXIT_NO_CONVERGENCE);
    assert!(out.stdout.contains("did not converge"), "{}", out.stdout);
}

#[test]
fn oracle_passes_on_table_system() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "fib.json", FIB_HOM);
    let flags = Flags {
        depth: Some(4),
        ..Default::default()
    };
    let out = cli::run(Command::Oracle, &path, &flags);
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.stdout.trim_end().ends_with("PASS"), "{}", out.stdout);
}

#[test]
fn log_base_flag_rescales_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "fib.json", FIB_HOM);
    let flags = Flags {
        log_base: Some(LogBase::E),
        ..Default::default()
    };
    let out = cli::run(Command::Stem, &path, &flags);
    assert_eq!(out.exit_code, EXIT_OK);
    let expected = 0.2178219813166 * 10f64.ln();
    assert!(
        out.stdout.contains(&format!("{expected:.10}")[..10]),
        "{}",
        out.stdout
    );
    // log_base came only from the flag; the config sets it too, so one
    // warning is expected here.
    assert_eq!(out.warnings.len(), 1, "{:?}", out.warnings);
}

#[test]
fn batch_runs_in_name_order_with_worst_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    write_config(&dir, "b_fib.json", FIB_HOM);
    write_config(
        &dir,
        "a_uncertified.json",
        r#"{
            "generators": ["s1", "s2"],
            "K": [[1, 1], [0, 1]],
            "alphabet": ["0", "1"],
            "A": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]
        }"#,
    );
    write_config(&dir, "notes.txt", "ignored");
    let out = cli::run_batch(Command::Certify, dir.path(), &Flags::default());
    let first = out.stdout.find("== a_uncertified.json ==").unwrap();
    let second = out.stdout.find("== b_fib.json ==").unwrap();
    assert!(first < second, "{}", out.stdout);
    assert_eq!(out.exit_code, EXIT_NO_CERTIFICATE);
}
