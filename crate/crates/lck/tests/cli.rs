//! Integration tests for the `lck` binary: commands, exit codes, document
//! round trips, determinism, and the backend environment toggles.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

/// Fresh command for the compiled binary, with the backend environment
/// cleared so each test states its own configuration.
fn lck() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lck"));
    cmd.env_remove("LCK_BACKEND").env_remove("LCK_TOL");
    cmd
}

fn run(cmd: &mut Command) -> (Option<i32>, String, String) {
    let out = cmd.output().expect("binary spawns");
    (
        out.status.code(),
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    )
}

/// Run and demand success, returning stdout.
fn run_ok(args: &[&str]) -> String {
    let (code, stdout, stderr) = run(lck().args(args));
    assert_eq!(code, Some(0), "args {args:?} failed\nstderr: {stderr}");
    stdout
}

/// Run and demand a specific failure code, returning stderr.
fn run_err(args: &[&str], expected: i32) -> String {
    let (code, _, stderr) = run(lck().args(args));
    assert_eq!(code, Some(expected), "args {args:?}\nstderr: {stderr}");
    stderr
}

/// Per-test scratch directory under the system temp root.
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lck-cli-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).expect("fixture writes");
}

/// The flag line of a text report, e.g. `kahler          no   witness …`.
fn flag_line<'a>(report: &'a str, name: &str) -> &'a str {
    report
        .lines()
        .find(|line| line.split_whitespace().next() == Some(name))
        .unwrap_or_else(|| panic!("report has no '{name}' line:\n{report}"))
}

/// Abelian plane with the standard metric and complex structure, in the
/// on-disk document format.
const PLANE: &str = r#"{
  "dim": 2,
  "basis": ["x", "Jx"],
  "brackets": [],
  "metric": [["1", "0"], ["0", "1"]],
  "J": [["0", "-1"], ["1", "0"]]
}"#;

#[test]
fn check_prints_the_structure_report_and_exits_zero() {
    let dir = scratch("check");
    let doc = dir.join("d4.json");
    run_ok(&["example", "d4", "-o", doc.to_str().unwrap()]);

    let text = run_ok(&["check", doc.to_str().unwrap()]);
    assert!(text.contains("dim = 4"), "{text}");
    for (name, verdict) in [
        ("hermitian", "yes"),
        ("lck", "yes"),
        ("integrable_lck", "yes"),
        ("unimodular", "yes"),
        ("solvable", "yes"),
    ] {
        let line = flag_line(&text, name);
        assert!(line.contains(verdict), "{line}");
    }
    let kahler = flag_line(&text, "kahler");
    assert!(kahler.contains("no"), "{kahler}");
    assert!(
        kahler.contains("(0, 2, 3)") && kahler.contains("-1"),
        "the witness triple and residual should be printed exactly: {kahler}"
    );
    assert!(flag_line(&text, "vaisman").contains("no"));
    assert!(text.contains("derived series dims: 4 3 1 0"), "{text}");

    let json_text = run_ok(&["check", doc.to_str().unwrap(), "--report", "json"]);
    let report: Value = serde_json::from_str(&json_text).expect("JSON report parses");
    assert_eq!(report["dim"], 4);
    assert_eq!(report["n"], 1);
    assert_eq!(report["flags"]["hermitian"]["status"], "holds");
    assert_eq!(report["flags"]["kahler"]["status"], "fails");
    assert_eq!(report["flags"]["lck"]["status"], "holds");
    assert_eq!(report["flags"]["vaisman"]["status"], "fails");
    assert_eq!(report["flags"]["unimodular"]["status"], "holds");
    assert_eq!(report["derived_series"], serde_json::json!([4, 3, 1, 0]));
}

#[test]
fn parse_and_invariant_failures_use_distinct_exit_codes() {
    let dir = scratch("codes");

    let garbage = dir.join("garbage.json");
    write(&garbage, "{ this is not json");
    let stderr = run_err(&["check", garbage.to_str().unwrap()], 2);
    assert!(!stderr.is_empty());

    let missing = dir.join("does-not-exist.json");
    run_err(&["check", missing.to_str().unwrap()], 2);

    // A well-formed document whose bracket data breaks the Jacobi identity
    // is a mathematical failure, not a parse failure.
    let valid = run_ok(&["example", "d4"]);
    let mut doc: Value = serde_json::from_str(&valid).expect("document parses");
    doc["brackets"][0]["terms"][0]["coeff"] = Value::String("2".into());
    let corrupt = dir.join("corrupt.json");
    write(&corrupt, &doc.to_string());
    let stderr = run_err(&["check", corrupt.to_str().unwrap()], 3);
    assert!(stderr.contains("Jacobi"), "{stderr}");
}

#[test]
fn example_validates_flags_and_file_output_matches_stdout() {
    run_err(&["example", "gb"], 2);
    run_err(&["example", "gb", "--n", "2", "--b", "1"], 2);
    run_err(&["example", "d4", "--b", "1"], 2);
    run_err(&["example", "dim", "--n", "0"], 2);
    run_err(&["example", "dim", "--b", "3"], 2);

    // Deterministic output, and -o writes exactly what stdout carries.
    let first = run_ok(&["example", "gb", "--b", "-2"]);
    let second = run_ok(&["example", "gb", "--b", "-2"]);
    assert_eq!(first, second);

    let dir = scratch("example");
    let file = dir.join("gb.json");
    run_ok(&["example", "gb", "--b", "-2", "-o", file.to_str().unwrap()]);
    let on_disk = std::fs::read_to_string(&file).expect("output file exists");
    assert_eq!(on_disk, first);

    // Emitted documents validate, in every dimension the builder covers.
    let dim3 = dir.join("dim3.json");
    run_ok(&["example", "dim", "--n", "3", "-o", dim3.to_str().unwrap()]);
    let text = run_ok(&["check", dim3.to_str().unwrap()]);
    assert!(text.contains("dim = 8"), "{text}");
    assert!(flag_line(&text, "integrable_lck").contains("yes"));
    assert!(flag_line(&text, "unimodular").contains("yes"));
}

#[test]
fn classify_reads_triple_documents() {
    let dir = scratch("classify");
    for (b, expected) in [("-2", "gb b=-2"), ("7/2", "gb b=7/2"), ("0", "gb b=0")] {
        let file = dir.join(format!("gb{}.json", b.replace('/', "_")));
        run_ok(&["example", "gb", "--b", b, "--triple", "-o", file.to_str().unwrap()]);
        let verdict = run_ok(&["classify4", file.to_str().unwrap()]);
        assert_eq!(verdict.trim(), expected);
    }
    let d4 = dir.join("d4.json");
    run_ok(&["example", "d4", "--triple", "-o", d4.to_str().unwrap()]);
    assert_eq!(run_ok(&["classify4", d4.to_str().unwrap()]).trim(), "D4");
}

#[test]
fn semidirect_builds_products_from_inline_matrices() {
    let dir = scratch("semidirect");
    let plane = dir.join("plane.json");
    write(&plane, PLANE);

    // u = −(1/2)Id, v = 0, c = 1 is precisely the family member at b = 0,
    // so the two commands must emit byte-identical documents.
    let built = run_ok(&[
        "semidirect",
        "--c",
        "1",
        "--h",
        plane.to_str().unwrap(),
        "--u",
        r#"[["-1/2", "0"], ["0", "-1/2"]]"#,
        "--v",
        r#"[["0", "0"], ["0", "0"]]"#,
    ]);
    let reference = run_ok(&["example", "gb", "--b", "0"]);
    assert_eq!(built, reference);

    // A matrix of the wrong shape is a parse failure.
    let stderr = run_err(
        &[
            "semidirect",
            "--c",
            "1",
            "--h",
            plane.to_str().unwrap(),
            "--u",
            r#"[["1"]]"#,
            "--v",
            r#"[["0", "0"], ["0", "0"]]"#,
        ],
        2,
    );
    assert!(!stderr.is_empty());

    // [u, v] = c·v is the Jacobi identity of the product: violate it and the
    // product is not a Lie algebra at all.
    let stderr = run_err(
        &[
            "semidirect",
            "--c",
            "1",
            "--h",
            plane.to_str().unwrap(),
            "--u",
            r#"[["0", "0"], ["0", "0"]]"#,
            "--v",
            r#"[["1", "0"], ["0", "1"]]"#,
        ],
        3,
    );
    assert!(stderr.contains("Jacobi"), "{stderr}");
}

#[test]
fn correspond_round_trips_by_file() {
    let dir = scratch("correspond");
    let start = dir.join("b72.json");
    run_ok(&["example", "gb", "--b", "7/2", "--triple", "-o", start.to_str().unwrap()]);

    let moved = dir.join("at5.json");
    run_ok(&[
        "correspond",
        "--to-c",
        "5",
        start.to_str().unwrap(),
        "-o",
        moved.to_str().unwrap(),
    ]);
    let moved_doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&moved).expect("moved file exists"))
            .expect("triple document parses");
    assert_eq!(moved_doc["c"], "5");

    let back = dir.join("back.json");
    run_ok(&[
        "correspond",
        "--to-c",
        "1",
        moved.to_str().unwrap(),
        "-o",
        back.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read_to_string(&start).expect("start file exists"),
        std::fs::read_to_string(&back).expect("round-trip file exists"),
        "the correspondence round trip must reproduce the document byte-for-byte"
    );

    // Negative targets parse; the excluded parameter 0 is a mathematical
    // failure, not a usage failure.
    run_ok(&[
        "correspond",
        "--to-c",
        "-1",
        start.to_str().unwrap(),
        "-o",
        dir.join("neg.json").to_str().unwrap(),
    ]);
    run_err(&["correspond", "--to-c", "0", start.to_str().unwrap()], 3);
}

#[test]
fn search_is_deterministic_and_labels_its_output() {
    let args = [
        "search", "--n", "1", "--c", "5/3", "--samples", "30", "--seed", "7",
    ];
    let first = run_ok(&args);
    let second = run_ok(&args);
    assert_eq!(first, second, "fixed seed must reproduce the output exactly");

    let payload: Value = serde_json::from_str(&first).expect("search payload parses");
    assert_eq!(payload["samples"], 30);
    assert!(payload["space_dim"].as_u64().is_some());
    let count = payload["count"].as_u64().expect("count is a number");
    let triples = payload["triples"].as_array().expect("triples array");
    assert_eq!(count as usize, triples.len());
    assert!(count >= 1, "thirty samples find at least one member");
    for t in triples {
        assert_eq!(t["c"], "5/3", "members carry the requested class parameter");
        assert_eq!(t["n"], 1);
    }
}

#[test]
fn verify_paper_filters_sections_and_rejects_unknown_keys() {
    let stdout = run_ok(&["verify-paper", "--only", "section6"]);
    assert!(stdout.contains("[ ok ] section6"), "{stdout}");
    assert!(!stdout.contains("[FAIL]"), "{stdout}");
    assert!(stdout.contains("0 failed"), "{stdout}");

    let stderr = run_err(&["verify-paper", "--only", "section99"], 2);
    assert!(stderr.contains("section2"), "should list the valid keys: {stderr}");
}

#[test]
fn backend_environment_toggles_are_validated_and_honoured() {
    let dir = scratch("backend");
    let triple = dir.join("gb.json");
    run_ok(&["example", "gb", "--b", "-2", "--triple", "-o", triple.to_str().unwrap()]);

    // Unknown backend name and malformed tolerances are usage failures.
    let (code, _, stderr) = run(lck()
        .env("LCK_BACKEND", "bogus")
        .args(["verify-paper", "--only", "section6"]));
    assert_eq!(code, Some(2));
    assert!(stderr.contains("LCK_BACKEND"), "{stderr}");

    for bad_tol in ["abc", "-1", "0"] {
        let (code, _, stderr) = run(lck()
            .env("LCK_BACKEND", "float")
            .env("LCK_TOL", bad_tol)
            .args(["classify4", triple.to_str().unwrap()]));
        assert_eq!(code, Some(2), "LCK_TOL={bad_tol}\nstderr: {stderr}");
        assert!(stderr.contains("LCK_TOL"), "{stderr}");
    }

    // The float backend classifies the same member, and an explicit exact
    // backend matches the default.
    let (code, stdout, stderr) = run(lck()
        .env("LCK_BACKEND", "float")
        .env("LCK_TOL", "1e-9")
        .args(["classify4", triple.to_str().unwrap()]));
    assert_eq!(code, Some(0), "stderr: {stderr}");
    assert_eq!(stdout.trim(), "gb b=-2");

    let (code, stdout, _) = run(lck()
        .env("LCK_BACKEND", "exact")
        .args(["classify4", triple.to_str().unwrap()]));
    assert_eq!(code, Some(0));
    assert_eq!(stdout.trim(), "gb b=-2");

    // A tolerance set without the float backend is ignored by design.
    let (code, stdout, _) = run(lck()
        .env("LCK_TOL", "not-a-number")
        .args(["classify4", triple.to_str().unwrap()]));
    assert_eq!(code, Some(0));
    assert_eq!(stdout.trim(), "gb b=-2");
}
