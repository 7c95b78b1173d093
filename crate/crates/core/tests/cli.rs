use std::io::Write;
use std::process::{Command, Output, Stdio};

const ALPHA4: &str = r#"{"n": 2,
  "A": [[[4,0],[0,0]],[[0,0],[0.25,0]]],
  "X": [[[1,0],[0,0]],[[0,0],[1,0]]],
  "B": [[[0.25,0],[0,0]],[[0,0],[4,0]]]}"#;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_blockrange"))
        .args(args)
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alpha.json");
    std::fs::write(&path, ALPHA4).unwrap();
    let from_file = run(&["verify", path.to_str().unwrap()], None);
    assert_eq!(code(&from_file), 0, "{}", String::from_utf8_lossy(&from_file.stderr));
    let from_stdin = run(&["verify", "-"], Some(ALPHA4));
    assert_eq!(code(&from_stdin), 0);
    let v = json(&from_stdin);
    assert_eq!(v["config"]["m"], 720);
    assert!(v.to_string().contains("\"verdict\""));
    assert!((v["reports"][0]["digest"]["d_lower"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["all_hold"], true);
}

#[test]
fn range_reports_the_jordan_disk() {
    let text = r#"{"n": 2, "X": [[[0,0],[1,0]],[[0,0],[0,0]]]}"#;
    let out = run(&["range", "-", "--format", "csv"], Some(text));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().count() >= 2);
    let out = run(&["range", "-", "--boundary"], Some(text));
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["contains_zero"], "yes");
}

#[test]
fn exit_codes() {
    let non_psd = r#"{"n": 1, "A": [[[1,0]]], "X": [[[3,0]]], "B": [[[1,0]]]}"#;
    assert_eq!(code(&run(&["verify", "-"], Some(non_psd))), 4);
    let wrong_rows = r#"{"n": 2, "A": [[[1,0]]], "X": [[[0,0]]], "B": [[[1,0]]]}"#;
    let out = run(&["verify", "-"], Some(wrong_rows));
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`A`"));
    assert_eq!(code(&run(&["verify", "-"], Some("not json"))), 2);
    assert_eq!(code(&run(&["sweep", "--count", "0"], None)), 2);
    assert_eq!(code(&run(&["sweep", "--count", "2", "--m", "7"], None)), 2);
    assert_eq!(code(&run(&["no-such-verb"], None)), 2);
}

#[test]
fn sweep_is_reproducible_and_threads_do_not_matter() {
    let args = [
        "sweep",
        "--count",
        "12",
        "--family",
        "segment-offdiag",
        "--n",
        "3",
        "--seed",
        "40",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_blockrange"))
        .args(args)
        .env("BLOCKRANGE_THREADS", "1")
        .output()
        .unwrap();
    let many = run(&args, None);
    assert_eq!(code(&one), 0);
    assert_eq!(code(&many), 0);
    let (a, b) = (json(&one), json(&many));
    assert_eq!(a["instances"], b["instances"]);
    assert_eq!(a["count"], 12);
    assert_eq!(a["failures"], 0);
}

#[test]
fn demo_alpha_rows() {
    let out = run(&["demo-alpha", "--alpha", "2,4"], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.25"), "{text}");
}
