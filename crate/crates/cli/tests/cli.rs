//! End-to-end runs of the binary against the checked-in fixture documents.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    path.to_str().expect("utf-8 path").to_string()
}

fn degenp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degenp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_accepts_the_fixtures() {
    for name in [
        "tail_p3.json",
        "ramified_pair_p3.json",
        "ramified_pair_concrete_f9.json",
        "bridge_p3.json",
        "bridge_pair_p3.json",
        "genus_two_global_p3.json",
        "genus_two_global_p5.json",
        "genus_two_global_marked_p3.json",
        "genus_two_global_split_p3.json",
        "cover_line_p3.json",
        "fiber_genus_two_p3.json",
    ] {
        let out = degenp(&["validate", &fixture(name)]);
        assert!(out.status.success(), "{name}: {}", stdout(&out));
    }
}

#[test]
fn validate_rejects_and_names_the_axiom() {
    let out = degenp(&["validate", &fixture("bridge_pair_mismatched_p3.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("A5"), "{text}");
    assert!(text.contains("Fail"), "{text}");
}

#[test]
fn validate_rejects_malformed_input() {
    let dir = std::env::temp_dir().join("degenp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"payload\": 3}").unwrap();
    let out = degenp(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = degenp(&["validate", "/nonexistent/nothing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn realize_prints_dot() {
    let out = degenp(&["realize", &fixture("bridge_pair_p3.json"), "--dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("b1=2"), "{text}");
    assert_eq!(text.matches("label=").count(), 4, "{text}");
    assert_eq!(text.matches("\"v0\" -- \"v1\"").count(), 3, "{text}");

    let out = degenp(&["realize", &fixture("genus_two_global_p3.json"), "--dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("total_genus=10"), "{text}");
    assert_eq!(text.matches("label=").count(), 7, "{text}");
}

#[test]
fn realize_rejects_invalid_data() {
    let out = degenp(&["realize", &fixture("bridge_pair_mismatched_p3.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn realize_emits_a_fiber_document() {
    let out = degenp(&["realize", &fixture("genus_two_global_p3.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"total_genus\": 10"), "{text}");
    assert!(text.contains("\"fiber\""), "{text}");
}

#[test]
fn enumerate_is_deterministic() {
    let args = ["enumerate", "--p", "3", "--vertices", "1", "--max-m", "4"];
    let first = degenp(&args);
    let second = degenp(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first).lines().count(), 12);

    let out = degenp(&["enumerate", "--p", "3", "--vertices", "0", "--count"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn orbit_of_concrete_coefficients() {
    let out = degenp(&["orbit", &fixture("ramified_pair_concrete_f9.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("orbit size 2"), "{}", stdout(&out));
}

#[test]
fn equivariance_of_the_line_cover() {
    let out = degenp(&["equivariance", &fixture("cover_line_p3.json")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "equivariant");
}

#[test]
fn render_draws_any_document() {
    let out = degenp(&["render", &fixture("tail_p3.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("graph fragment {"), "{text}");
    assert!(text.contains("shape=diamond"), "{text}");

    let out = degenp(&["render", &fixture("fiber_genus_two_p3.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("total_genus=10"));
}
