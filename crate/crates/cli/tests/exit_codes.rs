use std::path::PathBuf;
use std::process::{Command, Output};

fn ncforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncforms")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("ncforms-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn passing_presets_exit_zero() {
    for args in [
        vec!["verify", "preset:qplane"],
        vec!["invert-sigma", "preset:sl2-3d", "--max-len", "4"],
        vec!["sphere", "verify"],
        vec!["matrix", "verify", "--n", "2"],
        vec!["iso-check", "preset:podles-sphere"],
        vec!["integral", "preset:sl2", "--degree", "0"],
        vec!["preset", "list"],
    ] {
        let o = ncforms(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn failed_checks_exit_one() {
    let (_, text) = ncforms::frontend::load_source("preset:qplane").unwrap();
    let bad = text.replace("sigma y = [q*y, (p - 1)*x;", "sigma y = [q*y, (1 - p)*x;");
    assert_ne!(bad, text);
    let p = scratch("bad.ncf", &bad);
    let o = ncforms(&["invert-sigma", p.to_str().unwrap(), "--format", "json"]);
    std::fs::remove_file(&p).ok();
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["summary"]["fail"].as_u64().unwrap() > 0);
}

#[test]
fn bad_inputs_exit_two() {
    let p = scratch("syntax.ncf", "[algebra]\nname = t\ngenerators = x, y\nrelation: y*x = q^-1 *\n");
    let o = ncforms(&["verify", p.to_str().unwrap()]);
    std::fs::remove_file(&p).ok();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4, column 23"));

    for args in [
        vec!["verify", "nosuchfile.ncf"],
        vec!["verify", "preset:nosuch"],
        vec!["nabla", "preset:matrix-m2"],
        vec!["nabla", "preset:qplane", "--hom", "dx := "],
        vec!["matrix", "verify", "--n", "3"],
    ] {
        assert_eq!(code(&ncforms(&args)), 2, "{args:?}");
    }
}

#[test]
fn json_is_reproducible_across_job_counts() {
    let a = ncforms(&["verify", "preset:sl2-3d", "--format", "json", "--jobs", "1", "--cases", "20"]);
    let b = ncforms(&["verify", "preset:sl2-3d", "--format", "json", "--jobs", "4", "--cases", "20"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
