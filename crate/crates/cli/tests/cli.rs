use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../golden")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn ppdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppdiv")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let test = std::thread::current().name().unwrap_or("main").replace("::", "-");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(test);
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn base_changed(name: &str, d: &str) -> String {
    let out = scratch(&format!("{d}-{name}"));
    let o = ppdiv(&["basechange", &golden(name), "--d", d, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out.to_string_lossy().into_owned()
}

#[test]
fn validate_reports_properness() {
    let o = ppdiv(&["validate", &golden("a3.ppdiv")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("kind: ppdivisor"));
    assert!(text.contains("proper: yes"));
}

#[test]
fn validate_accepts_other_document_kinds() {
    for name in ["blowup.dginput", "swap.action"] {
        let o = ppdiv(&["validate", &golden(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(stdout(&o).contains("valid"));
    }
}

#[test]
fn wrong_tail_is_a_validation_error() {
    let o = ppdiv(&["validate", &golden("wrong-tail.ppdiv")]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("1 validation error(s)"), "{err}");
    assert!(
        err.contains("entry 1 ({t=1}): tail cone cone((1,0)) differs from the divisor tail"),
        "{err}"
    );
}

#[test]
fn trivial_coefficient_divisor_is_not_big() {
    let o = ppdiv(&["proper", &golden("trivial-coefficient.ppdiv")]);
    assert!(stdout(&o).contains("big: no"), "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_prints_the_divisor() {
    let o = ppdiv(&["eval", &golden("a3.ppdiv"), "--m", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "D((2,3)) = 2*{inf}");
    let o = ppdiv(&["eval", &golden("a3.ppdiv"), "--m", "-1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("outside the weight cone"));
}

#[test]
fn hilbert_tables() {
    let o = ppdiv(&["hilbert", &golden("a3.ppdiv"), "--box", "0..2,0..2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a\\b 0 1 2\n  0 1 1 1\n  1 1 2 2\n  2 1 2 3\n");

    let o = ppdiv(&["hilbert", &golden("a3.ppdiv"), "--box", "0..1,0..1", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["1,1"], 2);
    assert_eq!(json["0,1"], 1);

    let o = ppdiv(&["hilbert", &golden("sl2.ppdiv"), "--box", "-1..1,-1..1", "--colength"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a\\b -1 0 1\n -1  2 1 2\n  0  1 0 1\n  1  2 1 2\n");
}

#[test]
fn x3y4zw_hilbert_row() {
    let o = ppdiv(&["hilbert", &golden("x3y4zw.ppdiv"), "--box", "12..12,-1..0", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["12,0"], 2);
    assert_eq!(json["12,-1"], 1);
}

#[test]
fn downgrade_of_the_blowup() {
    let out = scratch("blowup.ppdiv");
    let o = ppdiv(&[
        "downgrade",
        &golden("blowup.dginput"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("fan rays: (1,0) (1,1) (0,1)"), "{text}");
    assert!(text.contains("conv((1)) at ray (1,0)"));
    assert!(text.contains("conv((0), (1)) at ray (1,1)"));
    assert!(text.contains("conv((0)) at ray (0,1)"));

    let o = ppdiv(&["validate", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = ppdiv(&["hilbert", out.to_str().unwrap(), "--box", "0..1"]);
    assert_eq!(o.status.code(), Some(4));
    let o = ppdiv(&[
        "hilbert",
        out.to_str().unwrap(),
        "--box",
        "0..1",
        "--fine",
        "--ubox",
        "0..1,0..1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(0): 4\n(1): 4\n");
}

#[test]
fn downgrade_of_the_identity_has_a_point_base() {
    let o = ppdiv(&["downgrade", &golden("identity.dginput")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("fan rays: none"));
    assert!(text.contains("base: a point over Q"));
}

#[test]
fn action_needs_a_matching_field() {
    let o = ppdiv(&["check-action", &golden("a3.ppdiv"), &golden("swap.action")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Q(sqrt -1)"));
}

#[test]
fn swap_action_passes() {
    let a3 = base_changed("a3.ppdiv", "-1");
    let o = ppdiv(&["check-action", &a3, &golden("swap.action")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for line in [
        "group: Z/2 (pass)",
        "automorphism equality: pass",
        "square law: pass",
        "gillard identity (a): pass",
        "gillard identity (b): pass",
    ] {
        assert!(text.contains(line), "{text}");
    }
}

#[test]
fn broken_action_names_the_failing_weight() {
    let a3 = base_changed("a3.ppdiv", "-1");
    for name in ["broken.action", "swap-moebius.action"] {
        let o = ppdiv(&["check-action", &a3, &golden(name)]);
        assert_eq!(o.status.code(), Some(3), "{name}");
        let text = stdout(&o);
        assert!(text.contains("automorphism equality: FAIL"), "{text}");
        assert!(text.contains("at m = (1,1) on {t=0}: pulled back 1 vs 0"), "{text}");
        assert!(text.contains("gillard identity (a): FAIL"), "{text}");
    }
}

#[test]
fn descent_table() {
    let a3 = base_changed("a3.ppdiv", "-1");
    let o = ppdiv(&["descend", &a3, &golden("swap.action"), "--box", "0..2,0..2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("orbit"));
    let row = |orbit: &str| {
        text.lines()
            .find(|l| l.starts_with(orbit))
            .map(|l| l.split_whitespace().rev().take(2).collect::<Vec<_>>())
            .unwrap_or_else(|| panic!("no row for {orbit}: {text}"))
    };
    assert_eq!(row("{(0,1) (1,0)}"), ["2", "2"]);
    assert_eq!(row("{(1,2) (2,1)}"), ["4", "4"]);
    assert_eq!(row("{(2,2)}"), ["3", "3"]);

    let o = ppdiv(&["descend", &a3, &golden("broken.action"), "--box", "0..1,0..1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reflection_action_on_x3y4zw() {
    let x = base_changed("x3y4zw.ppdiv", "-1");
    let o = ppdiv(&["check-action", &x, &golden("x3y4zw-reflection.action")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = ppdiv(&[
        "descend",
        &x,
        &golden("x3y4zw-reflection.action"),
        "--box",
        "12..13,-1..0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("{(12,-1) (0,1)}") && l.ends_with(" 2")));
}

#[test]
fn basechange_prints_a_document() {
    let o = ppdiv(&["basechange", &golden("a3.ppdiv"), "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["base"]["field"], "Q(sqrt 2)");
    let o = ppdiv(&["basechange", &golden("a3.ppdiv"), "--d", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(ppdiv(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        ppdiv(&["hilbert", &golden("a3.ppdiv"), "--box", "0:2"]).status.code(),
        Some(1)
    );
    assert_eq!(ppdiv(&["--help"]).status.code(), Some(0));
    assert!(Path::new(&golden("a3.ppdiv")).exists());
}
