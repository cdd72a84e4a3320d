use std::path::{Path, PathBuf};
use std::process::Command;

use rootflow::cli::{load_manifest, run, sha256_hex, ExperimentConfig, Mode, Overrides, EXIT_NONCONVERGENCE, EXIT_OK};
use serde_json::Value;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str, out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::load(&configs_dir().join(name)).unwrap();
    cfg.apply(Overrides { out: Some(out.to_path_buf()), ..Overrides::default() });
    cfg
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rootflow"))
}

#[test]
fn every_sample_config_resolves() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let cfg = ExperimentConfig::load(&path).unwrap();
        cfg.resolve().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn schema_lists_every_law_kind() {
    let text = std::fs::read_to_string(configs_dir().join("../docs/config-schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let kinds: Vec<&str> = schema["$defs"]["law"]["oneOf"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["properties"]["kind"]["const"].as_str().unwrap())
        .collect();
    for k in [
        "circleMixture",
        "powerRadial",
        "intervalUniform",
        "ellipticRadial",
        "hyperbolicRadial",
        "intervalMixture",
        "atoms",
        "arcsine",
        "coefficients",
    ] {
        assert!(kinds.contains(&k), "{k}");
    }
    let modes = schema["properties"]["mode"]["enum"].as_array().unwrap();
    for m in modes {
        assert!(Mode::parse(m.as_str().unwrap()).is_some());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = run(load("weyl_coefficients.json", a.path())).unwrap().manifest;
    let mb = run(load("weyl_coefficients.json", b.path())).unwrap().manifest;
    assert_eq!(ma.artifacts.len(), mb.artifacts.len());
    for (x, y) in ma.artifacts.iter().zip(&mb.artifacts) {
        assert_eq!(x.name, y.name);
        assert_eq!(x.sha256, y.sha256, "{}", x.name);
        let bytes = std::fs::read(a.path().join(&x.name)).unwrap();
        assert_eq!(sha256_hex(&bytes), x.sha256);
    }
}

#[test]
fn manifest_reproduces_the_run() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let m1 = run(load("kac_compare.json", first.path())).unwrap().manifest;
    let status = binary()
        .arg("compare")
        .arg("--config")
        .arg(first.path().join("manifest.json"))
        .arg("--out")
        .arg(second.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    let m2 = load_manifest(&second.path().join("manifest.json")).unwrap();
    let h1: Vec<_> = m1.artifacts.iter().map(|a| (&a.name, &a.sha256)).collect();
    let h2: Vec<_> = m2.artifacts.iter().map(|a| (&a.name, &a.sha256)).collect();
    assert_eq!(h1, h2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"nn": 1}"#).unwrap();
    let code = |args: &[&str]| binary().args(args).output().unwrap().status.code();
    assert_eq!(code(&["bogus"]), Some(2));
    assert_eq!(code(&["theory", "--config", bad.to_str().unwrap()]), Some(2));
    // compare has no theory for the hyperbolic family
    let hyp = dir.path().join("hyp.json");
    std::fs::write(&hyp, r#"{"law": {"kind": "coefficients", "family": "hyperbolic"}, "n": 50, "t": [0.5]}"#).unwrap();
    assert_eq!(code(&["compare", "--config", hyp.to_str().unwrap()]), Some(2));

    let capped = dir.path().join("capped.json");
    std::fs::write(
        &capped,
        r#"{"law": {"kind": "coefficients", "family": "weyl"}, "n": 200, "t": [0.3], "tolerances": {"maxIter": 1}}"#,
    )
    .unwrap();
    let out = dir.path().join("capped");
    assert_eq!(
        code(&["simulate", "--config", capped.to_str().unwrap(), "--out", out.to_str().unwrap()]),
        Some(EXIT_NONCONVERGENCE)
    );
    let m = load_manifest(&out.join("manifest.json")).unwrap();
    assert!(!m.converged);
}

#[test]
fn pde_check_passes_on_the_catalogue() {
    let dir = tempfile::tempdir().unwrap();
    let out = binary().args(["pde-check", "--out", dir.path().to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let r = report(dir.path());
    assert_eq!(r["passed"], Value::Bool(true));
    let rows = r["solutions"].as_array().unwrap();
    assert!(rows.len() >= 10);
    for row in rows {
        assert!(row["maxResidual"].as_f64().unwrap() < 1e-6, "{row}");
    }
}

#[test]
fn two_atom_theory_on_its_time_grid() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = load("two_atom_theory.json", dir.path());
    let ts: Vec<f64> = (1..150).map(|k| k as f64 / 30.0).collect();
    cfg.apply(Overrides { t: Some(ts.clone()), ..Overrides::default() });
    let o = run(cfg).unwrap();
    assert_eq!(o.exit_code, EXIT_OK);
    let r = report(dir.path());
    let curves = r["curves"].as_array().unwrap();
    assert_eq!(curves.len(), ts.len());
    for c in curves {
        let t = c["t"].as_f64().unwrap();
        let atoms = c["atoms"].as_array().unwrap().len();
        let expected = if t < 1.0 - 1e-12 {
            2
        } else if t < 4.0 - 1e-12 {
            1
        } else {
            0
        };
        assert_eq!(atoms, expected, "t = {t}");
        assert!((c["mass"].as_f64().unwrap() - (5.0 - t)).abs() < 1e-12);
    }
}

#[test]
fn kac_compare_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(load("kac_compare.json", dir.path())).unwrap();
    assert_eq!(o.exit_code, EXIT_OK);
    let names: Vec<_> = o.manifest.artifacts.iter().map(|a| a.name.as_str()).collect();
    for f in ["roots.csv", "theory.csv", "histogram.csv", "report.json"] {
        assert!(names.contains(&f), "{f}");
    }
    assert!(names.iter().any(|n| n.ends_with(".svg")));
    let ks = report(dir.path())["reports"][0]["ks_distance"].as_f64().unwrap();
    assert!(ks < 0.07, "ks = {ks}");
}
