use std::fs;
use std::process::Command;

fn nilprod(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilprod")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn write_manifest(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("nilprod-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_success_writes_json() {
    let path = write_manifest("ok.nil", "[fgab a] factors = [4]\n[fgab b] factors = [6]\n[commands]\ntensor fgab a b\n");
    let json = format!("{path}.json");
    let (code, stdout) = nilprod(&["run", &path, "--seed", "5", "--json", &json]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["schema"], "nilprod.result/1");
    assert_eq!(doc["seed"], 5);
    assert_eq!(doc["results"][0]["output"]["display"], "Z/2");
    assert_eq!(fs::read_to_string(json).unwrap(), stdout.trim_end());
}

#[test]
fn failing_command_exits_one() {
    let src = "[lie h] preset = heisenberg\n[central c]\nalgebra = h\nspan = e1\n[commands]\nganea h c\n";
    let (code, stdout) = nilprod(&["run", &write_manifest("bad.nil", src)]);
    assert_eq!(code, 1);
    assert!(stdout.contains("\"passed\": false"));
}

#[test]
fn parse_errors_exit_two() {
    let (code, _) = nilprod(&["run", &write_manifest("syntax.nil", "[lie h]\ndim = [1, x]\n")]);
    assert_eq!(code, 2);
    let (code, _) = nilprod(&["run", &write_manifest("unresolved.nil", "[commands]\nlcs nowhere\n")]);
    assert_eq!(code, 2);
    let (code, _) = nilprod(&["table1", "--ring", "R", "--dims", "2", "3"]);
    assert_eq!(code, 2);
    let (code, _) = nilprod(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn table1_and_check() {
    let (code, stdout) = nilprod(&["table1", "--ring", "Q", "--dims", "2", "3"]);
    assert_eq!(code, 0);
    let t: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let leib = t["rows"].as_array().unwrap().iter().find(|r| r["variety"] == "Leib").unwrap();
    assert_eq!(leib["computed"], "Q^12");
    let (code, _) = nilprod(&["table1", "--ring", "Fp", "--prime", "7", "--dims", "1", "2"]);
    assert_eq!(code, 0);
    let (code, stdout) = nilprod(&["check", "symmetry", "kronecker", "--cases", "3", "--seed", "9"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);
}
