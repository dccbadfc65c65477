use std::path::Path;
use std::process::Command;

use nanofiber::cli::run;

fn call(out: &Path, args: &[&str]) -> i32 {
    let mut v = vec!["nanofiber".to_string(), "--out".into(), out.display().to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(v)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn spectrum_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(call(dir.path(), &["--seed", "7", "spectrum", "simulate"]), 0);
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(csv.starts_with("# "));
    assert!(csv.contains("detuning_Hz,counts,reference_counts"));
    assert_eq!(call(dir.path(), &["spectrum", "fit"]), 0);
    let fit = json(&dir.path().join("spectrum_fit.json"));
    let s = fit["splitting_Hz"].as_f64().unwrap();
    assert!((s - 78.37e6).abs() < 0.3e6, "{s}");
    assert_eq!(fit["config"]["spectrum.gamma"], "8.3 MHz");

    let again = tempfile::tempdir().unwrap();
    assert_eq!(call(again.path(), &["--seed", "7", "spectrum", "simulate"]), 0);
    assert_eq!(std::fs::read(again.path().join("spectrum.csv")).unwrap(), csv.into_bytes());
}

#[test]
fn mw_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(call(dir.path(), &["mw", "simulate"]), 0);
    assert_eq!(call(dir.path(), &["mw", "fit"]), 0);
    let fit = json(&dir.path().join("mw_fit.json"));
    let s = fit["splitting_Hz"].as_f64().unwrap();
    assert!((s - 60.7e3).abs() < 0.9e3, "{s}");
}

#[test]
fn untilted_blue_has_no_fictitious_field() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(call(dir.path(), &["bfict", "--scheme", "tilt", "--phi-b", "0"]), 0);
    let out = json(&dir.path().join("bfict.json"));
    for key in ["Bfict_upper_G", "Bfict_lower_G"] {
        assert!(out[key].as_array().unwrap().iter().all(|v| v.as_f64().unwrap().abs() < 1e-12), "{}", out[key]);
    }
    assert!(out["mw_splitting_minus3_Hz"].as_f64().unwrap().abs() < 1e-6);
    assert_eq!(out["scheme"], "tilt");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_nanofiber");
    let status =
        |args: &[&str]| Command::new(bin).args(args).arg("--out").arg(dir.path()).output().unwrap().status.code();
    assert_eq!(status(&["tuneout"]), Some(0));
    assert!(json(&dir.path().join("tuneout.json"))["config"].is_object());
    assert_eq!(status(&["--set", "no.such=1", "tuneout"]), Some(2));
    assert_eq!(status(&["--config", "/nonexistent/run.cfg", "tuneout"]), Some(2));
    assert_eq!(status(&["spectrum", "fit", "--input", "/nonexistent.csv"]), Some(2));
    assert_eq!(status(&["frobnicate"]), Some(2));
    // a trap with no blue light has no minimum
    assert_eq!(status(&["--set", "blue.power=0 mW", "trap"]), Some(3));
}
