use std::io::Write;
use std::process::{Command, Output, Stdio};

const LOEB: &str = "[](([]p -> p)) => []p";

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_circprove"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn code(args: &[&str], stdin: Option<&str>) -> i32 {
    run(args, stdin).status.code().unwrap()
}

fn stdout(args: &[&str], stdin: Option<&str>) -> String {
    let out = run(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn loeb_proof() -> String {
    stdout(&["prove", "--calculus", "k4", "--mode", "circular", "--format", "interchange", LOEB], None)
}

#[test]
fn prove_exit_codes() {
    assert_eq!(code(&["prove", "--calculus", "k4", "--mode", "circular", LOEB], None), 0);
    assert_eq!(code(&["prove", "--calculus", "k4", "--mode", "standard", LOEB], None), 1);
    assert_eq!(code(&["prove", "--calculus", "gl", "--mode", "standard", "=> p"], None), 1);
    assert_eq!(code(&["prove", "--calculus", "gl", "p =>> p"], None), 2);
    assert_eq!(code(&["prove", "--calculus", "nope", "p => p"], None), 2);
    assert_eq!(code(&["prove", "--calculus", "gl", "-"], Some("p => p\n")), 0);
}

#[test]
fn text_proof_is_indented() {
    let text = stdout(&["prove", "-c", "k4", "-m", "circular", LOEB], None);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].ends_with("[RK4]"));
    assert!(lines[2].starts_with("    ") && lines[2].ends_with("[circular]"));
}

#[test]
fn check_exit_codes() {
    let proof = loeb_proof();
    assert_eq!(code(&["check", "-c", "k4", "-m", "circular", "-"], Some(&proof)), 0);
    assert_eq!(code(&["check", "-c", "k4", "-m", "standard", "-"], Some(&proof)), 1);
    let truncated = &proof[..proof.len() / 2];
    assert_eq!(code(&["check", "-c", "k4", "-m", "circular", "-"], Some(truncated)), 2);
    assert_eq!(code(&["check", "-c", "k4", "/nonexistent/proof.json"], None), 2);
}

#[test]
fn translations() {
    let gl = stdout(&["prove", "-c", "gl", "--format", "interchange", LOEB], None);
    let circular = stdout(&["translate", "--from", "gl", "--to", "circular-k4", "-"], Some(&gl));
    assert_eq!(code(&["check", "-c", "k4", "-m", "circular", "-"], Some(&circular)), 0);
    let back = stdout(&["translate", "--from", "circular-k4", "--to", "gl", "-"], Some(&circular));
    assert_eq!(code(&["check", "-c", "gl", "-"], Some(&back)), 0);

    let grz = stdout(&["prove", "-c", "grz", "--format", "interchange", "[]p => [][]p"], None);
    let s4 = stdout(&["translate", "--from", "grz", "--to", "circular-s4", "-"], Some(&grz));
    assert_eq!(code(&["check", "-c", "s4", "-m", "circular", "-"], Some(&s4)), 0);

    let proof = loeb_proof();
    assert_eq!(code(&["translate", "--from", "circular-s4", "--to", "grz", "-"], Some(&proof)), 2);
    // a circular proof is not a standard GL proof
    assert_eq!(code(&["translate", "--from", "gl", "--to", "circular-k4", "-"], Some(&proof)), 1);
}

#[test]
fn corpus_reports() {
    let out = stdout(&["corpus", "--atoms", "1", "--max-size", "4", "--pair", "gl/circular-k4"], None);
    assert!(out.contains("disagreements: 0"));
    let out = stdout(&["corpus", "--max-size", "3", "--pair", "k4/k4"], None);
    assert!(out.contains("disagreements: 0"));
    // => [](F -> F) needs a box rule
    let out = run(&["corpus", "--max-size", "4", "--pair", "g3p/k4"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("disagreement: => [](F -> F)"));
    assert_eq!(code(&["corpus", "--max-size", "3", "--pair", "gl"], None), 2);
}

#[test]
fn countermodels() {
    let out = stdout(&["countermodel", "--frame", "k4", "--max-worlds", "1", LOEB], None);
    assert!(out.contains("access: {(w0, w0)}"));
    assert_eq!(code(&["countermodel", "--frame", "s4", "p => p"], None), 1);
    assert_eq!(code(&["countermodel", "--frame", "t", "p => p"], None), 2);
}
