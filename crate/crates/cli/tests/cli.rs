use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn kgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn normalize_appendix_listing() {
    let path = fixture("assoc3_leibniz_expansion.txt");
    let a = kgraph(&["normalize", path.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(stdout(&a).lines().count(), 39);
    let b = kgraph(&["normalize", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn normalize_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.txt", "");
    let o = kgraph(&["normalize", &empty]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let pair = write(
        dir.path(),
        "pair.txt",
        "3 2 1   0 1 2 3    1\n3 2 1   0 2 1 3    1\n3 2 1   1 0 2 3    1\n",
    );
    let o = kgraph(&["normalize", &pair]);
    assert_eq!(stdout(&o).lines().count(), 1);
    let bad = write(dir.path(), "bad.txt", "3 2 1   0 1 2\n");
    let o = kgraph(&["normalize", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn associator_counts_and_order_bounds() {
    let o = kgraph(&["associator", "--order", "2"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = kgraph(&["associator", "--order", "1"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(
        kgraph(&["associator", "--order", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kgraph(&["associator", "--order", "8"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kgraph(&["associator", "--order", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn associator_pipes_into_factorize() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a3.txt");
    let o = kgraph(&["associator", "--order", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let weights = fixture("leibniz_weights_3.txt");
    let o = kgraph(&[
        "factorize",
        out.to_str().unwrap(),
        "--weights",
        weights.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# order 3: basis 24, support 13, nullspace 0, residual 0"));
    assert!(text.contains("# c_3 = 1/2"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn factorize_order_two_as_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a2.txt");
    kgraph(&["associator", "--order", "2", "--out", out.to_str().unwrap()]);
    let weights = fixture("leibniz_weights_2.txt");
    let o = kgraph(&[
        "factorize",
        out.to_str().unwrap(),
        "--weights",
        weights.to_str().unwrap(),
        "--report",
        "tsv",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("[012]\t2/3\t2/3\ttrue"));
}

#[test]
fn factorize_flags_wrong_weights() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a2.txt");
    kgraph(&["associator", "--order", "2", "--out", out.to_str().unwrap()]);
    let weights = write(dir.path(), "w.txt", "[012] 1/3\n");
    let o = kgraph(&["factorize", out.to_str().unwrap(), "--weights", &weights]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn eval_graphs_on_bivectors() {
    let dir = tempfile::tempdir().unwrap();
    let wedge = write(dir.path(), "w.txt", "2 1 1   0 1    1\n");
    let args = write(dir.path(), "args.txt", "x1\nx2\n");
    let sym = fixture("symplectic.txt");
    let o = kgraph(&[
        "eval",
        &wedge,
        "--bivector",
        sym.to_str().unwrap(),
        "--args",
        &args,
    ]);
    assert_eq!(stdout(&o), "1\n");

    let jac = write(
        dir.path(),
        "jac.txt",
        "3 2 1   0 1 3 2\n3 2 1   1 2 3 0\n3 2 1   2 0 3 1\n",
    );
    let args3 = write(dir.path(), "args3.txt", "x1^2*x2\nx2*x3 + x1\nx3^3\n");
    let rot = fixture("rotation.txt");
    let o = kgraph(&[
        "eval",
        &jac,
        "--bivector",
        rot.to_str().unwrap(),
        "--args",
        &args3,
        "--expect-zero",
    ]);
    assert!(o.status.success());
    let quad = fixture("quadratic.txt");
    let o = kgraph(&[
        "eval",
        &jac,
        "--bivector",
        quad.to_str().unwrap(),
        "--args",
        &args3,
        "--expect-zero",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn associativity_on_bivectors() {
    let dir = tempfile::tempdir().unwrap();
    let args = write(
        dir.path(),
        "args.txt",
        "x1^2*x2 + x3\nx2*x3^2 - x1\nx1*x3 + x2^2\n",
    );
    let rot = fixture("rotation.txt");
    let o = kgraph(&[
        "assoc",
        "--order",
        "3",
        "--bivector",
        rot.to_str().unwrap(),
        "--args",
        &args,
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0\t0\n1\t0\n2\t0\n3\t0\n");
    let quad = fixture("quadratic.txt");
    let o = kgraph(&[
        "assoc",
        "--order",
        "2",
        "--bivector",
        quad.to_str().unwrap(),
        "--args",
        &args,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("0\t0\n1\t0\n2\t"));
}

#[test]
fn verify_paper_exit_status() {
    let o = kgraph(&["verify-paper", "--order", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = kgraph(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL order 4"));
}

#[test]
fn missing_input_is_reported() {
    let o = kgraph(&["normalize", "/nonexistent/graphs.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no such file"));
}
