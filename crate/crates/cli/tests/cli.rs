use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const GHZ: &str = "1 1 1 0\n1 2 2 1\n2 1 2 1\n2 2 1 1\n";
const PAIR: &str = "1 1 1 0\n1 1 1 1\n";
const CHSH: &str = "1 1 1\n2 1 0\n1 2 0\n2 2 0\n";

fn pxor(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pxor"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let input = stdin.unwrap_or("").to_string();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(input.as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn ghz_is_perfect_with_half_phases() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "ghz.txt", GHZ);
    let cert = dir.path().join("c.json");
    let o = pxor(&["decide", &g, "--out", cert.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PERFECT\n"));
    let c: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["kind"], "merp");
    for row in c["phi"].as_array().unwrap() {
        for p in row.as_array().unwrap() {
            assert!(p == "0/1" || p == "1/2", "{p}");
        }
    }
    let v = pxor(&["verify", cert.to_str().unwrap(), &g], None);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("PASS"));
    let s = pxor(&["simulate", &g, "--certificate", cert.to_str().unwrap()], None);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).contains("simulated 1.000000000000"));
}

#[test]
fn contradictory_pair_is_refuted_from_stdin() {
    let o = pxor(&["decide"], Some(PAIR));
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("NOT_PERFECT\n"));
    let json = &out[out.find('{').unwrap()..];
    let c: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(c["sigma_word"].as_array().unwrap().len(), 2);
}

#[test]
fn chsh_is_inconclusive() {
    let o = pxor(&["decide", "-", "--format", "json"], Some(CHSH));
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "NO_PERFECT_MERP_INCONCLUSIVE");
    assert_eq!(v["certificate"]["z"], serde_json::json!([1, -1, -1, 1]));
}

#[test]
fn classical_value_of_ghz() {
    let o = pxor(&["classical"], Some(GHZ));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("3/4"));
}

#[test]
fn tampered_certificates_fail() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "ghz.txt", GHZ);
    let good = stdout(&pxor(&["decide", "--format", "json"], Some(GHZ)));
    let v: serde_json::Value = serde_json::from_str(&good).unwrap();
    let mut cert = v["certificate"].clone();
    cert["phi"][0][1] = "0/1".into();
    let c = write(dir.path(), "bad.json", &cert.to_string());
    let o = pxor(&["verify", &c, &g], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));

    let p = write(dir.path(), "pair.txt", PAIR);
    let good = stdout(&pxor(&["decide", "--format", "json"], Some(PAIR)));
    let v: serde_json::Value = serde_json::from_str(&good).unwrap();
    let mut cert = v["certificate"].clone();
    cert["sigma_word"] = serde_json::json!([1, 1]);
    let c = write(dir.path(), "bad2.json", &cert.to_string());
    assert_eq!(pxor(&["verify", &c, &p], None).status.code(), Some(1));
}

#[test]
fn mismatched_certificate_has_its_own_code() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "ghz.txt", GHZ);
    let cert = dir.path().join("c.json");
    pxor(&["decide", "--out", cert.to_str().unwrap()], Some(PAIR));
    assert_eq!(pxor(&["verify", cert.to_str().unwrap(), &g], None).status.code(), Some(3));
}

#[test]
fn dot_export_names_vertices() {
    let o = pxor(&["export-graph", "--format", "dot"], Some(GHZ));
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("graph"));
    assert!(dot.contains("\"x1^1\"") && dot.contains("\"x2^3\""));
    let o = pxor(&["export-graph", "--pair", "2,3"], Some(GHZ));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("color=red"));
}

#[test]
fn gen_then_decide_is_stable() {
    let a = pxor(&["gen", "--seed", "7"], None);
    let b = pxor(&["gen", "--seed", "7"], None);
    assert_eq!(a.stdout, b.stdout);
    let game = stdout(&a);
    let d1 = pxor(&["decide"], Some(&game));
    let d2 = pxor(&["decide"], Some(&game));
    assert_eq!(d1.stdout, d2.stdout);
    assert_eq!(d1.status.code(), d2.status.code());
}

#[test]
fn canon_worked_example() {
    assert_eq!(stdout(&pxor(&["canon", "zgabcdefzz"], None)), "abcdefzg\n");
    assert_eq!(stdout(&pxor(&["canon", "3", "1", "2"], None)), "2 1 3\n");
}

#[test]
fn error_exit_codes() {
    assert_eq!(pxor(&["nonsense"], None).status.code(), Some(64));
    assert_eq!(pxor(&["decide"], Some("1 1 x\n")).status.code(), Some(65));
    assert_eq!(pxor(&["decide", "/nonexistent/game.txt"], None).status.code(), Some(66));
    assert_eq!(pxor(&["classical", "--max-len", "8", "--cap", "3"], Some(GHZ)).status.code(), Some(70));
    assert_eq!(pxor(&["--help"], None).status.code(), Some(0));
}
