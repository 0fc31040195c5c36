use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qcplx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcplx"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Value of `key=` in a space-separated metrics line.
fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|w| w.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no `{key}` in {line}"))
}

#[test]
fn compile_bell_state() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bell.state"),
        "qubits 2\n0 0.7071067811865476 0\n3 0.7071067811865476 0\n",
    )
    .unwrap();
    let out = stdout(&qcplx(dir.path(), &["compile", "--state", "bell.state", "--epsilon", "1e-3"]));
    let fidelity: f64 = field(&out, "fidelity").parse().unwrap();
    assert!(fidelity >= 0.999);
    let circuit = fs::read_to_string(dir.path().join("bell.circuit")).unwrap();
    assert!(circuit.starts_with("qubits 2\nbasis standard\n"));
}

#[test]
fn compile_triangle_graph() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("triangle.g"), "vertices 3\nedge 0 1\nedge 1 2\nedge 0 2\n").unwrap();
    let out = stdout(&qcplx(dir.path(), &["compile", "--graph", "triangle.g", "--exact-cz"]));
    assert_eq!(field(&out, "gates"), "6");
    // each CZ expands to H CNOT H
    assert_eq!(field(&out, "expanded_gates"), "12");
    assert_eq!(field(&out, "basis"), "standard");
}

#[test]
fn compile_classical_bits() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&qcplx(dir.path(), &["compile", "--bits", "10110100"]));
    assert!(out.contains("string=\"N L I L N L N L I L N L I L I L\""), "{out}");
    assert_eq!(field(&out, "fidelity"), "1.000000000000");
}

#[test]
fn weighted_graph_is_compiled() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("w.g"), "vertices 2\nedge 0 1 0.7\n").unwrap();
    let out = stdout(&qcplx(dir.path(), &["compile", "--graph", "w.g", "--epsilon", "0.01"]));
    assert!(field(&out, "fidelity").parse::<f64>().unwrap() >= 0.99);
}

#[test]
fn estimate_rows_and_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let zero = stdout(&qcplx(dir.path(), &["estimate", "--family", "zero:4"]));
    let first = zero.lines().next().unwrap();
    assert_eq!(field(first, "winner"), "empty");
    assert_eq!(field(first, "method"), "min_over_candidates");
    let header: f64 = field(first, "header_bits").parse().unwrap();
    assert!(field(first, "bits").parse::<f64>().unwrap() <= header + 16.0);

    let ghz = stdout(&qcplx(dir.path(), &["estimate", "--family", "ghz:3"]));
    let first = ghz.lines().next().unwrap();
    let bits: f64 = field(first, "bits").parse().unwrap();
    let general: f64 = field(first, "general_bound").parse().unwrap();
    assert!(bits < general / 2.0, "{first}");

    let csv = fs::read_to_string(dir.path().join("estimates.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "state_id,N,epsilon,method,bits,basis,code,candidate_count,compressor_id");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("zero_4,4,0.01,min_over_candidates,"));
    assert!(lines[1].ends_with(",cm"));
}

#[test]
fn bounds_table() {
    let dir = tempfile::tempdir().unwrap();
    let total = |args: &[&str]| -> f64 {
        let out = stdout(&qcplx(dir.path(), args));
        let last = out.lines().last().unwrap();
        assert!(last.contains(",total,"), "{last}");
        last.rsplit(',').next().unwrap().parse().unwrap()
    };
    assert_eq!(total(&["bounds", "general", "2", "0.25"]), 32.0);
    assert_eq!(total(&["bounds", "graph_exact", "5"]), 15.0);
    assert!((total(&["bounds", "copies", "1", "2", "0.1"]) - 8.64).abs() < 0.005);
    let census = stdout(&qcplx(dir.path(), &["bounds", "census", "12"]));
    assert!(census.contains("census,12,holds,true"));
}

#[test]
fn source_experiment_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fair.src"), "bernoulli 0.5\n").unwrap();
    let run = |out: &str| {
        stdout(&qcplx(
            dir.path(),
            &["source-exp", "fair.src", "--m", "1000,100000", "--trials", "4", "--seed", "3", "--out", out],
        ))
    };
    let text = run("a");
    run("b");
    let a = fs::read(dir.path().join("a/fair.source_exp.csv")).unwrap();
    let b = fs::read(dir.path().join("b/fair.source_exp.csv")).unwrap();
    assert_eq!(a, b);
    let last = text.lines().find(|l| l.contains("m=100000")).unwrap();
    let rate: f64 = field(last, "mean_bits_per_emission").parse().unwrap();
    assert!((rate - 1.0).abs() < 0.05, "{last}");
}

#[test]
fn deterministic_and_quantum_sources() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("det.src"), "kind letters\nword a 1.0\n").unwrap();
    let out = stdout(&qcplx(dir.path(), &["source-exp", "det.src", "--m", "100,10000", "--trials", "2"]));
    let last = out.lines().find(|l| l.contains("m=10000")).unwrap();
    assert!(field(last, "mean_bits_per_emission").parse::<f64>().unwrap() <= 0.05);

    fs::write(
        dir.path().join("q.src"),
        "kind states\nqubits 1\nstate 0.5\n0 1 0\nstate 0.5\n0 0.7071067811865476 0\n1 0.7071067811865476 0\n",
    )
    .unwrap();
    let out = stdout(&qcplx(
        dir.path(),
        &["source-exp", "q.src", "--m", "100,1000", "--trials", "2", "--epsilon", "0.1"],
    ));
    let sw = out.lines().find(|l| l.starts_with("stateword")).expect(&out);
    assert!((field(sw, "S").parse::<f64>().unwrap() - 0.6009).abs() < 1e-3);
    assert_eq!(out.lines().filter(|l| l.starts_with("state ")).count(), 2);
}

#[test]
fn embed_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&qcplx(dir.path(), &["embed", "1011010011110000"]));
    let first = out.lines().next().unwrap();
    assert_eq!(field(first, "exact"), "true");
    assert_eq!(field(first, "raw_bits"), "64");
    stdout(&qcplx(dir.path(), &["estimate", "--family", "plus:2"]));
    let report = stdout(&qcplx(dir.path(), &["report"]));
    assert!(report.contains("estimates method=min_over_candidates rows=1"), "{report}");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "epsilon=0.2\ncompressor=deflate\nout=res\n").unwrap();
    stdout(&qcplx(dir.path(), &["estimate", "--family", "plus:1", "--config", "run.cfg", "--epsilon", "0.05"]));
    let csv = fs::read_to_string(dir.path().join("res/estimates.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("plus_1,1,0.05,"), "{row}");
    assert!(row.ends_with(",deflate"), "{row}");
}

#[test]
fn errors_are_one_machine_readable_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], &str)] = &[
        (&["compile", "--state", "missing.state"], "domain"),
        (&["bounds", "general", "2", "1.5"], "precision"),
        (&["estimate", "--family", "zero:2", "--compressor", "zip"], "unknown_compressor"),
        (&["compile", "--family", "random:2", "--sk-depth", "0", "--epsilon", "1e-6"], "budget_infeasible"),
        (&["estimate", "--family", "zero:2", "--generators", ""], "no_candidate"),
    ];
    fs::write(dir.path().join("bad.state"), "qubits 1\n0 1 0\n7 0 0\n").unwrap();
    for (args, kind) in cases.iter().copied().chain([(&["compile", "--state", "bad.state"][..], "parse")]) {
        let o = qcplx(dir.path(), args);
        assert!(!o.status.success(), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        let lines: Vec<&str> = err.lines().collect();
        assert_eq!(lines.len(), 1, "{err}");
        assert!(lines[0].starts_with(&format!("error kind={kind} msg=")), "{args:?}: {err}");
    }
}
