use std::process::{Command, Output};

use hamming_witness::cli::parse_certificate;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamming-witness"))
        .args(args)
        .env_remove("HW_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in output"))
}

#[test]
fn witness_h22_worked_instance() {
    let out = run(&["witness", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "x_counts"), "1,0");
    assert_eq!(field(&text, "y_counts"), "1,2");
    assert_eq!(field(&text, "size"), "3");
    assert_eq!(field(&text, "delta_observed"), "2");
    parse_certificate(&text).unwrap();
}

#[test]
fn witness_h93() {
    let out = run(&["witness", "--n", "9", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "delta_bound"), "3");
    assert_eq!(field(&text, "mode"), "exhaustive");
    assert!(field(&text, "checks").starts_with("size_gt_alpha:pass,"));
}

#[test]
fn witness_counts_only_at_scale() {
    let out = run(&["witness", "--n", "1000000", "--k", "7", "--mode", "counts-only"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = parse_certificate(&stdout(&out)).unwrap();
    assert_eq!(cert.spec.partition().q(), 1000);
    assert_eq!(cert.delta_observed, None);
    assert!(cert.size > cert.alpha);
    assert!(cert.passed());
}

#[test]
fn auto_mode_threshold() {
    let text = stdout(&run(&["witness", "--n", "12", "--k", "3", "--limit", "1000000"]));
    assert_eq!(field(&text, "mode"), "exhaustive");
    let text = stdout(&run(&["witness", "--n", "12", "--k", "3", "--limit", "1000"]));
    assert_eq!(field(&text, "mode"), "counts-only");
}

#[test]
fn sampled_mode_records_seed() {
    let out = run(&["witness", "--n", "12", "--k", "3", "--mode", "sampled", "--samples", "500", "--seed", "99"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "mode"), "sampled");
    assert_eq!(field(&text, "seed"), "99");
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.txt");
    let out = run(&["witness", "--n", "6", "--k", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout(&run(&["witness", "--n", "6", "--k", "3"])));
}

#[test]
fn all_pairs_goes_to_stderr() {
    let out = run(&["witness", "--n", "4", "--k", "2", "--all-pairs"]);
    assert_eq!(out.status.code(), Some(0));
    let notes = String::from_utf8(out.stderr).unwrap();
    assert_eq!(notes.lines().count(), 4);
    assert!(notes.contains("pair i1=1 i2=1 size=") && notes.contains("delta_observed=0"));
}

#[test]
fn bruteforce_examples() {
    for (n, k, f) in [(2u32, 3u32, "1"), (3, 2, "2"), (2, 2, "2")] {
        let out = run(&["bruteforce", "--n", &n.to_string(), "--k", &k.to_string()]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert_eq!(field(&text, "f"), f, "H({n},{k})");
        assert_eq!(field(&text, "exhausted"), "true");
        let witness = field(&text, "witness");
        assert_eq!(witness.split(',').count(), k.pow(n - 1) as usize + 1);
        assert!(witness.split(',').all(|w| w.len() == n as usize));
    }
}

#[test]
fn isoper_examples() {
    let text = stdout(&run(&["isoper", "--n", "4", "--k", "2"]));
    assert_eq!(field(&text, "mode"), "exhaustive");
    assert_eq!(field(&text, "violations"), "0");

    let out = run(&["isoper", "--n", "4", "--k", "3", "--samples", "10000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "mode"), "sampled");
    assert_eq!(field(&text, "subsets"), "10000");
    assert_eq!(field(&text, "violations"), "0");

    let text = stdout(&run(&["isoper", "--n", "2", "--k", "2"]));
    assert_eq!(field(&text, "min_margin"), "0.000000000000");
    assert_eq!(field(&text, "min_margin_witness"), "00,10,01,11");
}

#[test]
fn dot_export() {
    let text = stdout(&run(&["export-dot", "--n", "2", "--k", "2"]));
    assert_eq!(text.lines().filter(|l| l.contains("[side=")).count(), 3);
    assert_eq!(text.lines().filter(|l| l.contains(" -- ")).count(), 2);

    let text = stdout(&run(&["export-dot", "--n", "3", "--k", "3", "--i1", "2", "--i2", "2"]));
    assert!(text.lines().any(|l| l.contains("[side=")));
    assert!(!text.contains(" -- "));

    // node count equals the certificate's size
    for (n, k) in [(4, 3), (6, 2), (2, 5)] {
        let (n, k) = (n.to_string(), k.to_string());
        let dot = stdout(&run(&["export-dot", "--n", &n, "--k", &k]));
        let cert = stdout(&run(&["witness", "--n", &n, "--k", &k]));
        let nodes = dot.lines().filter(|l| l.contains("[side=")).count();
        assert_eq!(nodes.to_string(), field(&cert, "size"));
    }
}

#[test]
fn usage_and_guard_errors_exit_2() {
    for args in [
        &["witness", "--n", "3", "--k", "1"][..],
        &["witness", "--n", "0", "--k", "3"],
        &["witness", "--n", "3"],
        &["witness", "--n", "3", "--k", "3", "--mode", "fast"],
        &["witness", "--n", "20", "--k", "3", "--mode", "exhaustive", "--limit", "1000"],
        &["witness", "--n", "4", "--k", "2", "--blocks", "1;2;3;4"],
        &["bruteforce", "--n", "3", "--k", "5"],
        &["export-dot", "--n", "7", "--k", "3"],
        &["export-dot", "--n", "2", "--k", "2", "--i1", "0"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn bad_thread_variable_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_hamming-witness"))
        .args(["witness", "--n", "2", "--k", "2"])
        .env("HW_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_2() {
    let out = run(&["witness", "--n", "2", "--k", "2", "--out", "/nonexistent-dir/cert.txt"]);
    assert_eq!(out.status.code(), Some(2));
}
