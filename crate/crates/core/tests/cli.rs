use std::process::Command;

use haarwell::cli::{run, EXIT_CAP, EXIT_OK, EXIT_POLE, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["haarwell", "--no-cache"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value(args: &[&str]) -> String {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out.trim_end().to_string()
}

#[test]
fn wg_examples() {
    assert_eq!(value(&["wg", "unitary", "2", "(1 2)", "--symbolic"]), "-1/(n^3-n)");
    assert_eq!(value(&["wg", "unitary", "2", "e", "--n", "5"]), "1/24");
    assert_eq!(value(&["wg", "free", "4", "{1,2}{3,4}|{1,4}{2,3}", "--n", "3"]), "-1/24");
    assert_eq!(value(&["wg", "unitary", "3", "[2,1]"]), value(&["wg", "unitary", "3", "(1 3)"]));
    assert_eq!(value(&["wg", "orthogonal", "4", "[2]"]), "-1/(n^3+n^2-2n)");
    assert_eq!(
        value(&["wg", "orthogonal", "4", "{1,2}{3,4}|{1,3}{2,4}"]),
        value(&["wg", "orthogonal", "4", "[2]"])
    );
}

#[test]
fn integrate_examples() {
    assert_eq!(value(&["integrate", "unitary", "u[1,1] ~u[1,1]", "--symbolic"]), "1/n");
    assert_eq!(
        value(&["integrate", "orthogonal", "u[1,1] u[1,1] u[1,1] u[1,1]", "--symbolic"]),
        "3/(n^2+2n)"
    );
    assert_eq!(value(&["integrate", "unitary", "u[1,1]", "--n", "7"]), "0");
    assert_eq!(value(&["integrate", "unitary", "u[1,1] u[2,2] ~u[1,2] ~u[2,1]", "--n", "10"]), "-1/990");
}

#[test]
fn method_cross_check() {
    let (code, out, _) = call(&[
        "wg", "unitary", "4", "--all-classes", "--n", "12", "--method", "gram", "--method", "character",
        "--method", "series:5",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.ends_with("PASS\n"));
    assert_eq!(out.lines().filter(|l| l.contains(" character ")).count(), 5);
    for line in out.lines().filter(|l| l.contains(" character ")) {
        assert!(line.ends_with("  0"), "{line}");
    }
}

#[test]
fn verify_examples() {
    let (code, out, _) = call(&["verify", "three-path", "--k", "4", "--symbolic"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("PASS\n"));
    let (code, out, _) = call(&["verify", "bounds", "--k", "3", "--n", "25"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("PASS\n"));
    let (code, out, _) = call(&["verify", "recursion", "--k", "4"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out, _) = call(&["verify", "mc:20000", "--k", "2", "--n", "10", "--seed", "42"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("-1/990"));
}

#[test]
fn verify_argument_errors() {
    let (code, _, err) = call(&["verify", "bounds", "--k", "3"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
    assert_eq!(call(&["verify", "nothing"]).0, EXIT_USAGE);
    assert_eq!(call(&["wg", "unitary", "2", "e", "--method", "series:3"]).0, EXIT_USAGE);
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["wg", "unitary", "9", "e"]).0, EXIT_CAP);
    assert_eq!(call(&["integrate", "unitary", "u[1,1] ~u[1,1]", "--n", "0"]).0, EXIT_POLE);
    assert_eq!(call(&["wg", "unitary", "2", "(1 2 3)"]).0, EXIT_USAGE);
    assert_eq!(call(&["wg", "nonsense", "2", "e"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify", "mc:100", "--k", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["channel", "--n", "10"]).0, EXIT_USAGE);
    assert_eq!(call(&["integrate", "free", "u[1,1] u[1,1]", "--n", "1/2"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
    assert_eq!(call(&["--version"]).0, EXIT_OK);
}

#[test]
fn json_and_csv() {
    let (code, out, _) = call(&["--format", "json", "integrate", "unitary", "u[1,1] ~u[1,1]", "--n", "4"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "1/4");
    assert_eq!(v["n"], "4");
    let (_, out, _) = call(&["--json", "verify", "clt:2000", "--n", "10", "--seed", "1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["moments"].as_array().unwrap().len(), 4);
    assert!(v.get("passed").is_some());
    let (_, out, _) = call(&["--format", "csv", "table", "unitary", "2"]);
    assert_eq!(out, "key,value\n\"[1,1]\",1/(n^2-1)\n[2],-1/(n^3-n)\n");
}

#[test]
fn monte_carlo_reports_are_deterministic() {
    let args = ["--json", "verify", "mc:3000", "--k", "1", "--n", "4", "--seed", "9"];
    assert_eq!(call(&args).1, call(&args).1);
    let a = call(&["channel", "--n", "6", "--k", "2", "--seed", "3"]).1;
    let b = call(&["channel", "--n", "6", "--k", "2", "--seed", "3"]).1;
    assert_eq!(a, b);
}

#[test]
fn cache_round_trip_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_haarwell");
    let answer = || {
        let out = Command::new(bin)
            .env("HAARWELL_CACHE", dir.path())
            .args(["table", "orthogonal", "6"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let first = answer();
    let file = dir.path().join("orthogonal-k6-symbolic.json");
    assert!(file.exists());
    let stamp = std::fs::metadata(&file).unwrap().modified().unwrap();
    let second = answer();
    assert_eq!(first, second);
    assert_eq!(std::fs::metadata(&file).unwrap().modified().unwrap(), stamp);

    let path = Command::new(bin)
        .env("HAARWELL_CACHE", dir.path())
        .args(["cache", "path"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(path.stdout).unwrap().trim(), dir.path().display().to_string());

    std::fs::write(&file, std::fs::read_to_string(&file).unwrap().replace("-1", "-2")).unwrap();
    let tampered = Command::new(bin)
        .env("HAARWELL_CACHE", dir.path())
        .args(["table", "orthogonal", "6"])
        .output()
        .unwrap();
    assert_eq!(tampered.status.code(), Some(5));
}
