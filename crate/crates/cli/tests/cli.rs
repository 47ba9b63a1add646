use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_theta-lab"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("theta-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str], out: &PathBuf) -> (i32, String) {
    let o = bin().args(args).arg("--out").arg(out).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn run_writes_identical_reports() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    let args = ["run", "--suite", "all", "--genus", "3", "--seed", "42"];
    let (code, stdout) = run(&args, &a);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("[PASS] bertram/projective-dimension: expected 7, got 7"));
    let mut par = args.to_vec();
    par.push("--parallel");
    assert_eq!(run(&par, &b).0, 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let json = std::fs::read_to_string(&a).unwrap();
    theta_lab::harness::validate_report(&json).unwrap();
}

#[test]
fn unsupported_combination_exits_one() {
    let out = scratch("bad.json");
    let (code, _) = run(&["run", "--suite", "kumar-g3", "--genus", "5"], &out);
    assert_eq!(code, 1);
    assert!(!out.exists());
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = scratch("none.json");
    let (code, _) = run(&["run", "--suite", "nope", "--genus", "3"], &out);
    assert_eq!(code, 2);
}

#[test]
fn figure_command_exports_valid_data() {
    let out = scratch("gamma.json");
    let (code, stdout) = run(&["figure", "--genus", "3", "--seed", "5"], &out);
    assert_eq!(code, 0, "{stdout}");
    let d = theta_lab::harness::figure::validate_figure(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.genus, 3);
}
