//! End-to-end runs of the binary.

use std::process::Command;

fn reltoa(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_reltoa")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn table1_to_stdout() {
    let (code, out, _) = reltoa(&["table1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("k0 (1/length),V_o (energy),R_direct (L/c)"));
    assert!(lines[1].starts_with("2.00000000000e0,2.00000000000e-1,1.3244207"));
}

#[test]
fn output_file_and_config() {
    let dir = std::env::temp_dir().join(format!("reltoa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let out = dir.join("point.csv");
    std::fs::write(&cfg, "vo = 0.2\nsigma = 0.5\nko = 2\n").unwrap();
    let (code, stdout, _) = reltoa(&["point", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("tau_trav,1.3244207")));
    let (code, again, _) = reltoa(&["point", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(again, text);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(reltoa(&["point", "--vo", "1.0"]).0, 1);
    assert_eq!(reltoa(&["scan", "--steps", "1"]).0, 1);
    assert_eq!(reltoa(&["nonsense"]).0, 1);
    assert_eq!(reltoa(&["point", "--config", "/nonexistent/reltoa.cfg"]).0, 1);
    assert_eq!(reltoa(&["limits"]).0, 0);
    assert_eq!(reltoa(&["--help"]).0, 0);
}

#[test]
fn limits_lists_residue_check() {
    let (_, out, _) = reltoa(&["limits"]);
    let line = out.lines().find(|l| l.contains("(a,b)=(1,1)")).unwrap();
    assert!(line.contains("6.50645142284e-1") && line.ends_with("pass"));
}
