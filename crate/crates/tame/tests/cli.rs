use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tame")).args(args).env_remove("TAME_RENDER_STYLE").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn arrange_stats_for_four_generic_circles() {
    let f = scratch("four.txt");
    std::fs::write(&f, "1 0 0\n0 1 0\n0 0 1\n1 1 1\n").unwrap();
    let o = tame(&["arrange", s(&f), "--stats"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "V=12 E=24 F=14 triangles=8 quads=6");
}

#[test]
fn check_and_certify_exit_codes() {
    let f = scratch("simplex3.json");
    assert_eq!(tame(&["gen", "simplex", "--n", "3", "-o", s(&f)]).status.code(), Some(0));
    assert_eq!(tame(&["check", "--m", "3", s(&f)]).status.code(), Some(0));
    let o = tame(&["check", "--m", "4", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "not-tame");
    assert_eq!(tame(&["certify", s(&f)]).status.code(), Some(0));
}

#[test]
fn uncertified_region_reports_finding() {
    let f = scratch("hemi-part.json");
    let text = r#"{"format": "tame-region/1", "n": 3, "components": [{"open": true, "hrep": [["1","0","0"],["0","1","0"],["0","0","1"]]}]}"#;
    std::fs::write(&f, text).unwrap();
    let o = tame(&["certify", s(&f)]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn input_errors_carry_position() {
    let f = scratch("bad.json");
    std::fs::write(&f, "{\n  \"format\": \"tame-region/1\",\n  \"dim\": x\n}").unwrap();
    let o = tame(&["check", "--m", "3", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(tame(&["check", s(&f)]).status.code(), Some(2));
    assert_eq!(tame(&["check", "--m", "3", "/nonexistent/region.json"]).status.code(), Some(2));
    let c = scratch("bad-circles.txt");
    std::fs::write(&c, "1 0 0\n0 1 q\n").unwrap();
    let o = tame(&["arrange", s(&c)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 5"));
}

#[test]
fn gen_and_render_are_deterministic() {
    let a = tame(&["gen", "family-a", "--k", "1"]);
    let b = tame(&["gen", "family-a", "--k", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let f = scratch("fa1.json");
    std::fs::write(&f, &a.stdout).unwrap();
    let (x, y) = (scratch("fa1-a.svg"), scratch("fa1-b.svg"));
    assert_eq!(tame(&["render", s(&f), "-o", s(&x)]).status.code(), Some(0));
    assert_eq!(tame(&["render", s(&f), "-o", s(&y)]).status.code(), Some(0));
    let (sx, sy) = (std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap());
    assert_eq!(sx, sy);
    assert!(String::from_utf8_lossy(&sx).starts_with("<svg") || String::from_utf8_lossy(&sx).starts_with("<?xml"));
}

#[test]
fn render_style_variable_changes_palette() {
    let f = scratch("s2.json");
    assert_eq!(tame(&["gen", "simplex", "--n", "3", "-o", s(&f)]).status.code(), Some(0));
    let (plain, colour) = (scratch("plain.svg"), scratch("colour.svg"));
    tame(&["render", s(&f), "-o", s(&plain)]);
    let o = Command::new(env!("CARGO_BIN_EXE_tame"))
        .args(["render", s(&f), "-o", s(&colour)])
        .env("TAME_RENDER_STYLE", "color")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let (p, c) = (std::fs::read_to_string(&plain).unwrap(), std::fs::read_to_string(&colour).unwrap());
    assert_ne!(p, c);
    assert!(c.contains("#3b7dd8"));
}

#[test]
fn complete_certifies_and_reduce_checks_component_count() {
    let f = scratch("cap.json");
    let text = r#"{"format": "tame-region/1", "n": 3, "components": [{"open": true, "hrep": [["1","0","0"],["0","1","0"],["0","0","1"]]}]}"#;
    std::fs::write(&f, text).unwrap();
    let out = scratch("cap-done.json");
    let o = tame(&["complete", s(&f), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(tame(&["certify", s(&out)]).status.code(), Some(0));
    let o = tame(&["reduce", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected 5 components"));
}

#[test]
fn s1_parities_and_even_rejection() {
    assert_eq!(tame(&["gen", "s1", "--k", "3"]).status.code(), Some(0));
    assert_eq!(tame(&["gen", "s1", "--k", "3", "--flip"]).status.code(), Some(0));
    assert_eq!(tame(&["gen", "s1", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn oracle_finds_no_witness_on_tame_input() {
    let f = scratch("oracle.json");
    assert_eq!(tame(&["gen", "simplex", "--n", "2", "-o", s(&f)]).status.code(), Some(0));
    let o = tame(&["oracle", s(&f), "--m", "2", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no-witness"));
    assert_eq!(tame(&["oracle", s(&f), "--m", "3", "--samples", "2000"]).status.code(), Some(1));
}
