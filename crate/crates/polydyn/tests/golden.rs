//! Report golden files; regenerate with `UPDATE_GOLDEN=1 cargo test -p polydyn --test golden`.

use std::path::{Path, PathBuf};
use std::process::Command;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn check(name: &str, args: &[&str]) {
    let maps = Path::new(env!("CARGO_MANIFEST_DIR")).join("maps");
    let args: Vec<String> = args.iter().map(|a| a.replace("@maps", maps.to_str().unwrap())).collect();
    let o = Command::new(env!("CARGO_BIN_EXE_polydyn"))
        .args(&args)
        .args(["--format", "report", "--out", "-"])
        .output()
        .unwrap();
    assert!(o.status.code().unwrap() < 2, "{name}: {}", String::from_utf8_lossy(&o.stderr));
    let actual = String::from_utf8(o.stdout).unwrap();
    let path = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "{name} differs from {}", path.display());
}

#[test]
fn degseq() {
    check("degseq", &["degseq", "--map", "@maps/gamma3.map", "--n", "12"]);
}

#[test]
fn classify() {
    check("classify", &["classify", "--map", "@maps/henon.map", "--n", "8"]);
}

#[test]
fn orbit() {
    check("orbit", &["orbit", "--n", "8"]);
}

#[test]
fn contract() {
    check("contract", &["contract", "--samples", "12", "--seed", "1"]);
}

#[test]
fn jacobian() {
    check("jacobian", &["jacobian", "--map", "@maps/gamma3.map"]);
}

#[test]
fn eigen() {
    check("eigen", &["eigen", "--gamma-d", "4"]);
}

#[test]
fn resonance() {
    check("resonance", &["resonance", "--map", "@maps/resonant.map", "--order", "6"]);
}

#[test]
fn linearize() {
    check("linearize", &["linearize", "--trunc", "4"]);
}

#[test]
fn verify_linearize() {
    check("verify-linearize", &["verify-linearize", "--samples", "5", "--n", "10"]);
}

#[test]
fn demo() {
    check("demo-theorem-4-3", &["demo-theorem-4-3", "--d", "3", "--n", "10", "--trunc", "5"]);
}

#[test]
fn map_record() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("maps/gamma3.map")).unwrap();
    let map = polydyn::parse_map(&text).unwrap().to_map().unwrap();
    let actual = polydyn::serialize::map_json(&map) + "\n";
    let path = golden_dir().join("gamma3-map.json");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    assert_eq!(actual, std::fs::read_to_string(path).unwrap());
}
