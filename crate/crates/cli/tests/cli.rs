//! End-to-end runs of the batch runner, through the library and the binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use quenchlab::config::{Kind, Model};
use quenchlab::{load_config, output, parse_config, run, RunError, PLOT_FILE, REPORT_FILE, SERIES_FILE};

fn template(kind: Kind) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("templates")
        .join(format!("{kind}.conf"))
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn every_template_loads() {
    for kind in Kind::ALL {
        let cfg = load_config(&template(kind)).unwrap_or_else(|e| panic!("{kind}: {e}"));
        assert_eq!(cfg.kind, kind);
    }
}

#[test]
fn fermion_template_row_count() {
    let cfg = load_config(&template(Kind::FermionQuench)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run(&cfg, dir.path(), false).unwrap();
    let csv = read(dir.path(), SERIES_FILE);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(output::CSV_HEADER));
    assert_eq!(lines.count(), cfg.time.points);
    assert!(!dir.path().join(PLOT_FILE).exists());
}

#[test]
fn identical_runs_are_byte_identical() {
    for kind in [Kind::FermionQuench, Kind::Negativity, Kind::Eikonal] {
        let cfg = load_config(&template(kind)).unwrap();
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        run(&cfg, a.path(), true).unwrap();
        run(&cfg, b.path(), true).unwrap();
        for name in [SERIES_FILE, REPORT_FILE, PLOT_FILE] {
            assert_eq!(read(a.path(), name), read(b.path(), name), "{kind}/{name}");
        }
    }
}

#[test]
fn seed_changes_random_inputs() {
    let text = std::fs::read_to_string(template(Kind::FermionQuench))
        .unwrap()
        .replace("lattice.disorder = 0", "lattice.disorder = 0.5")
        .replace("lattice.L = 200", "lattice.L = 40")
        .replace("quench.cut = 100", "quench.cut = 20")
        .replace("block.end = 100", "block.end = 20");
    let mut cfg = parse_config(&text, None).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(&cfg, a.path(), false).unwrap();
    cfg.seed += 1;
    run(&cfg, b.path(), false).unwrap();
    assert_ne!(read(a.path(), SERIES_FILE), read(b.path(), SERIES_FILE));
}

#[test]
fn report_kind_populates_regime_fields() {
    let cfg = load_config(&template(Kind::Report)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run(&cfg, dir.path(), false).unwrap();
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), REPORT_FILE)).unwrap();
    let regime = &report["report"]["regime"];
    for field in ["suppression", "otoc_behavior", "scrambling_detected"] {
        assert!(!regime[field].is_null(), "missing {field}: {regime}");
    }
    assert_eq!(regime["otoc_behavior"], "exponential_decay");
    assert!(regime["lyapunov"].as_f64().unwrap() > 0.0);
}

#[test]
fn plot_has_one_polyline_per_series() {
    let cfg = load_config(&template(Kind::Eikonal)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run(&cfg, dir.path(), true).unwrap();
    let svg = read(dir.path(), PLOT_FILE);
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<polyline").count(), 3);
    assert_eq!(svg.matches("<svg").count(), svg.matches("</svg>").count());
}

#[test]
fn failed_write_leaves_nothing_behind() {
    let cfg = load_config(&template(Kind::Eikonal)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    // a directory where report.json should go makes the second write fail
    std::fs::create_dir(dir.path().join(REPORT_FILE)).unwrap();
    let err = run(&cfg, dir.path(), false).unwrap_err();
    assert!(matches!(err, RunError::Io { .. }));
    assert!(!dir.path().join(SERIES_FILE).exists());
}

#[test]
fn exit_code_mapping() {
    let cfg_err = RunError::from(parse_config("seed = 1", None).unwrap_err());
    assert_eq!(cfg_err.exit_code(), 2);
    let num = RunError::Numerical {
        kind: Kind::Otoc,
        source: quenchlab_core::Error::InvalidSeries("empty".into()),
    };
    assert_eq!(num.exit_code(), 3);
}

#[test]
fn spin_model_defaults_are_chaotic() {
    let cfg = parse_config(
        "kind = otoc\ntime.end = 1\ntime.points = 3\nspin.L = 4\n",
        None,
    )
    .unwrap();
    let Model::Otoc(o) = cfg.model else { panic!() };
    assert_eq!(o.model.transverse_field, 1.05);
    assert_eq!(o.model.longitudinal_field, 0.5);
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quenchlab"))
}

#[test]
fn binary_success_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = binary()
        .args(["eikonal", "--config"])
        .arg(template(Kind::Eikonal))
        .arg("--out")
        .arg(&out)
        .args(["--seed", "9", "--plot"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(out.join(PLOT_FILE).exists());
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 9);

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "time.end = 5\ntime.points = 6\nlattice.L = 0\nquench.protocol = join_halves\n").unwrap();
    let res = binary().args(["fermion_quench", "--config"]).arg(&bad).arg("--out").arg(dir.path().join("x")).output().unwrap();
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("lattice.L"));
    assert!(!dir.path().join("x").exists());

    std::fs::write(&bad, "time.end = 5\ntime.points = 6\nlattice.L = 8\nquench.protocol = join_halves\nfoo = 1\n").unwrap();
    let res = binary().args(["fermion_quench", "--config"]).arg(&bad).arg("--out").arg(dir.path().join("x")).output().unwrap();
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("foo"));

    let res = binary().args(["otoc", "--config"]).arg(template(Kind::Eikonal)).arg("--out").arg(dir.path().join("x")).output().unwrap();
    assert_eq!(res.status.code(), Some(2));
}
