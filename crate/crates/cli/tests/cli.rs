use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitsolve")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("splitsolve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_both_modes_agree_on_split_demo() {
    let o = run(&["solve", "gallery:split-demo", "--mode", "both", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["status"], "solved");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["solve", "gallery:horn", "--payoff", "simple-parity"])), 3);
    assert_eq!(code(&run(&["solve", "gallery:overtaking", "--mode", "oracle"])), 3);
    assert_eq!(code(&run(&["solve", "gallery:no-such-entry"])), 2);
    assert_eq!(code(&run(&["split", "gallery:split-demo", "--state", "nowhere"])), 2);
    assert_eq!(code(&run(&["solve", "gallery:split-demo", "--payoff", "discounted:3/2"])), 2);
    assert_eq!(code(&run(&["verify", "gallery:split-demo"])), 2);
    assert_eq!(code(&run(&["verify", "gallery:split-demo", "--max", "s=a", "--min", "ω=a"])), 0);
    assert_eq!(code(&run(&["verify", "gallery:split-demo", "--max", "s=b", "--min", "ω=a"])), 3);
}

#[test]
fn float_probabilities_are_rejected() {
    let path = scratch("float.json");
    let text = run(&["gallery", "export", "one-loop"]);
    let bad = stdout(&text).replace("\"1/1\"", "\"1.0\"");
    std::fs::write(&path, bad).unwrap();
    let o = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn split_output_parses_and_solves() {
    let out = scratch("demo-split.json");
    let o = run(&["split", "gallery:split-demo", "--state", "ω", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.with_extension("dot").exists());
    let s = run(&["solve", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&s), 0);
}

#[test]
fn splitting_a_single_loop_is_an_isomorphism() {
    let o = run(&["split", "gallery:one-loop", "--state", "q"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), stdout(&run(&["gallery", "export", "one-loop"])));
}

#[test]
fn props_output_is_deterministic() {
    let a = run(&["props", "--payoff", "liminf-mean", "--samples", "200", "--seed", "7"]);
    let b = run(&["props", "--payoff", "liminf-mean", "--samples", "200", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn every_gallery_entry_runs() {
    let list = stdout(&run(&["gallery", "list"]));
    let names: Vec<&str> = list.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert!(names.len() >= 4);
    for name in names {
        let o = run(&["gallery", "run", name]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
}

#[test]
fn oracle_agrees_on_a_small_batch() {
    let o = run(&["oracle", "--count", "10", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("MISMATCH"));
}
