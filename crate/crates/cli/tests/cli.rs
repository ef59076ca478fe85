use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tendency(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tendency"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.scenario"))
        .to_string_lossy()
        .into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn compare_from_the_shell() {
    let o = tendency(&["compare", "C1", "C1 & C2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "left > right (witness: C1=1, C2=0)\n");
    assert_eq!(tendency(&["compare", "C1 &", "C2"]).status.code(), Some(2));
}

#[test]
fn simulate_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = tendency(&[
        "--out",
        out.to_str().unwrap(),
        "simulate",
        &scenario("satiation"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert_eq!(stdout(&o), report);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/golden/satiation");
    for name in ["report.txt", "thirst.trace", "drinking.trace"] {
        assert_eq!(
            fs::read(out.join(name)).unwrap(),
            fs::read(golden.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn max_steps_overrides_the_guard() {
    let o = tendency(&["--max-steps", "2", "wish", &scenario("present")]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(text.contains("max steps 2"));
    assert!(text.contains("[1] wait present\n  still waiting after 2 steps"));
}

#[test]
fn laws_over_a_scenario() {
    let o = tendency(&["laws", &scenario("hunger")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("4 desires, 16 ordered pairs, 0 violations"));
    assert!(text.contains("very_hungry > dieting"));
}

#[test]
fn wish_compares_every_pair() {
    let o = tendency(&["wish", &scenario("present")]);
    let text = stdout(&o);
    assert!(text.contains("stopped at t=9: stop_checking"));
    assert!(text.contains("compare_wishes present fair_weather"));
    assert!(text.contains("compare_wishes impatient football"));
    assert_eq!(text.matches("compare_wishes").count(), 6);
}

#[test]
fn observe_a_log() {
    let dir = tempfile::tempdir().unwrap();
    let log = write(
        dir.path(),
        "tray.log",
        "t=0 trigger{support=1} outcome=falls:0\nt=3 trigger{support=0} outcome=falls:1\n",
    );
    let o = tendency(&["observe", log.to_str().unwrap(), "!support", "falls"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "whenever !support then falls: unrefuted, support 1\n"
    );
    let empty = write(dir.path(), "moon.log", "");
    let o = tendency(&["observe", empty.to_str().unwrap(), "look", "see"]);
    assert_eq!(stdout(&o), "whenever look then see: unrefuted, support 0\n");
    let bad = write(dir.path(), "bad.log", "t=x\n");
    assert_eq!(
        tendency(&["observe", bad.to_str().unwrap(), "look", "see"])
            .status
            .code(),
        Some(2)
    );
    // trigger atom missing from the facts
    let o = tendency(&["observe", log.to_str().unwrap(), "hand", "falls"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let invalid = write(
        dir.path(),
        "bad.scenario",
        "scenario bad\n[atoms]\na\n[tendencies]\nt: b => act\n",
    );
    let o = tendency(&["simulate", invalid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 5: undeclared atom `b`"), "{err}");

    let failing = write(
        dir.path(),
        "fail.scenario",
        "scenario fail\n[atoms]\na\n[families]\nf: a => eat\n[directives]\nsatiate f\n",
    );
    let o = tendency(&["simulate", failing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("error: no positive effect"));

    assert_eq!(
        tendency(&["simulate", "/nonexistent.scenario"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(tendency(&["bogus"]).status.code(), Some(2));
}

#[test]
fn catalog_is_complete() {
    let o = tendency(&["catalog"]);
    let text = stdout(&o);
    for name in [
        "hunger", "thirst", "itch", "fear", "love", "regret", "hate", "pain", "pleasure", "beauty",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn every_shipped_scenario_runs() {
    for name in [
        "gallery",
        "horse",
        "hunger",
        "moon",
        "present",
        "satiation",
        "tray",
    ] {
        let o = tendency(&["run", &scenario(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}");
    }
}
