//! End-to-end runs of the `lpinf` binary on the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn lpinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpinf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let o = lpinf(args);
    (
        o.status.code().expect("exit code"),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn without_timing(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lpinf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_accepts_every_fixture() {
    for f in [
        "sl2.toml",
        "abelian.toml",
        "arrow.toml",
        "pairing.toml",
        "lie_pair.toml",
        "leibniz_xx.toml",
        "fibration.toml",
    ] {
        let (code, out, err) = run(&["validate", &path(f)]);
        assert_eq!(code, 0, "{f}: {out}{err}");
        assert!(out.contains("status = \"certificate\""));
    }
}

#[test]
fn three_way_agreement_on_the_two_cocycle_fixture() {
    let (code, out, _) = run(&[
        "leibniz",
        &path("pairing.toml"),
        "--arity",
        "4",
        "--method",
        "all",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("arity 4: 256 tuples"));
    assert!(out.contains("recursive, closed, trees agree"));
    for m in ["recursive", "closed", "trees"] {
        let (code, _, _) = run(&[
            "leibniz",
            &path("sl2.toml"),
            "--arity",
            "3",
            "--method",
            m,
            "--identities",
        ]);
        assert_eq!(code, 0, "{m}");
    }
}

#[test]
fn homotopy_certificates() {
    for (doc, cert) in [
        ("pairing.toml", "pairing_homotopy.toml"),
        ("lie_pair.toml", "lie_pair_homotopy.toml"),
    ] {
        let (code, out, _) = run(&["homotopy", &path(doc), "--certificate", &path(cert)]);
        assert_eq!(code, 0, "{out}");
    }
}

#[test]
fn corrupted_homotopy_is_a_violation_with_witness() {
    let text = std::fs::read_to_string(fixture("pairing_homotopy.toml")).unwrap();
    assert!(text.contains("\"-1\""));
    let bad = temp_file("bad_h.toml", &text.replacen("\"-1\"", "\"-2\"", 1));
    let (code, out, err) = run(&[
        "homotopy",
        &path("pairing.toml"),
        "--certificate",
        &bad.to_string_lossy(),
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("status = \"violation\""));
    assert!(
        out.contains("witness = ") && out.contains("discrepancy"),
        "{out}"
    );
    assert!(err.contains("violation"));
}

#[test]
fn corrupted_inputs_exit_2_with_location() {
    let text = std::fs::read_to_string(fixture("sl2.toml")).unwrap();
    let cases = [
        (
            "zero_denominator.toml",
            text.replacen("\"-2\"", "\"1/0\"", 1),
            "line 3, column",
        ),
        (
            "unknown_name.toml",
            text.replacen("[\"e\", \"f\", \"h\"", "[\"e\", \"z\", \"h\"", 1),
            "line 3, column",
        ),
        (
            "syntax.toml",
            text.replacen("basis = [", "basis = [[", 1),
            "line ",
        ),
        (
            "wrong_type.toml",
            text.replacen("[\"h\", 0]", "[\"h\", \"0\"]", 1),
            "line 2, column",
        ),
    ];
    for (name, bad, loc) in cases {
        let p = temp_file(name, &bad);
        let (code, out, err) = run(&["validate", &p.to_string_lossy()]);
        assert_eq!(code, 2, "{name}: {out}");
        assert!(err.contains(loc), "{name}: {err}");
        assert!(out.contains("status = \"input-error\""));
    }
    let (code, _, _) = run(&["validate", "/nonexistent/file.toml"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&[
        "leibniz",
        &path("sl2.toml"),
        "--arity",
        "2",
        "--method",
        "sideways",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn jacobi_failure_is_a_violation() {
    let text = std::fs::read_to_string(fixture("sl2.toml")).unwrap();
    let p = temp_file(
        "jacobi.toml",
        &text.replacen(
            "[\"h\", \"e\", \"e\", \"2\"]",
            "[\"h\", \"e\", \"e\", \"3\"]",
            1,
        ),
    );
    let (code, out, _) = run(&["validate", &p.to_string_lossy()]);
    assert_eq!(code, 1);
    assert!(out.contains("Jacobi"), "{out}");
}

#[test]
fn tree_dump_has_one_line_per_class() {
    let (code, out, _) = run(&["trees", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("n = 4: 6 classes"));
    assert_eq!(out.matches("parents [").count(), 6);
    let sizes: usize = out
        .lines()
        .filter_map(|l| l.split(" size ").nth(1))
        .map(|s| s.trim_end_matches(['"', ',']).parse::<usize>().unwrap())
        .sum();
    let monotonic: usize = lpinf::trees::RootedTree::all(4)
        .iter()
        .map(|t| t.labelings().iter().filter(|l| t.is_monotonic(l)).count())
        .sum();
    assert_eq!(sizes, monotonic);
}

#[test]
fn reports_are_deterministic() {
    let args = ["leibniz", &path("lie_pair.toml"), "--arity", "2"];
    let a = run(&args).1;
    let b = run(&args).1;
    assert_eq!(without_timing(&a), without_timing(&b));
    assert!(a.starts_with("command = \"leibniz\"\ninput_digest = \"sha256:"));
}

#[test]
fn model_structure_commands() {
    let fib = path("fibration.toml");
    let (code, out, _) = run(&["strictify", &fib, "--morphism", "p"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("[output.morphisms.strict]"));
    let (code, out, _) = run(&["pullback", &fib, "--fibration", "p", "--along", "q"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("projection to P: ") && out.contains("fibration"));
    let (code, out, _) = run(&["path", &path("sl2.toml")]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["strictify", &path("pairing.toml"), "--morphism", "f"]);
    assert_eq!(code, 1, "{out}");
    let (code, _, _) = run(&["pullback", &fib, "--fibration", "missing", "--along", "q"]);
    assert_eq!(code, 2);
}

#[test]
fn total_cohomology_is_prefix_stable() {
    let stabilized = |w: usize| -> Vec<String> {
        let (code, out, _) = run(&[
            "cohomology",
            &path("sl2.toml"),
            "--total",
            "--weight-cutoff",
            &w.to_string(),
        ]);
        assert_eq!(code, 0);
        out.lines()
            .filter(|l| l.contains("(stabilized)"))
            .map(str::to_string)
            .collect()
    };
    for w in 1..4 {
        let a = stabilized(w);
        let b = stabilized(w + 1);
        assert_eq!(a[..], b[..a.len()]);
    }
    let (_, out, _) = run(&[
        "cohomology",
        &path("arrow.toml"),
        "--total",
        "--weight-cutoff",
        "2",
    ]);
    assert!(out.contains("warning:"));
    let (code, out, _) = run(&[
        "cohomology",
        &path("fibration.toml"),
        "--tangent",
        "--module",
        "B",
    ]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = run(&["cohomology", &path("sl2.toml")]);
    assert_eq!(code, 2);
}

#[test]
fn leibniz_layer_commands() {
    let (code, out, _) = run(&["quotient-lie", &path("leibniz_xx.toml")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Leibniz kernel: dimension 1"));
    for f in ["sl2.toml", "pairing.toml", "lie_pair.toml"] {
        let (code, out, _) = run(&["htan-check", &path(f)]);
        assert_eq!(code, 0, "{f}: {out}");
    }
}

#[test]
fn fixture_directory_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_lpinf"))
        .args(["validate", "sl2"])
        .env("LPINF_FIXTURES", fixture(""))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
