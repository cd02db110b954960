use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn hybrid(args: &[&str], config: &Path, out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hybrid"));
    cmd.args(args).arg("--config").arg(config).env("RUST_LOG", "off").env_remove("HYBRID_CONSTANTS");
    if let Some(o) = out {
        cmd.arg("--out").arg(o);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.ini");
    std::fs::write(&p, text).unwrap();
    p
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

#[test]
fn jaynes_cummings_swap_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("jc.csv");
    let o = hybrid(&["evolve"], &configs().join("evolve_jc.ini"), Some(&out));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,P_e,n,excitation,sigma_z,sigma_x,provenance\n"));
    assert!(*column(&csv, "P_e").last().unwrap() < 1e-4);
    for e in column(&csv, "excitation") {
        assert!((e - 1.0).abs() < 1e-10);
    }
}

#[test]
fn sidecar_records_inputs_and_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = hybrid(&["couplings"], &configs().join("couplings_ion.ini"), Some(&out));
    assert_eq!(o.status.code(), Some(0));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.csv.meta")).unwrap()).unwrap();
    assert_eq!(meta["command"], "couplings");
    assert_eq!(meta["constants_version"], "codata2018");
    assert!(meta["config_text"].as_str().unwrap().contains("ion_direct"));
    assert!(meta["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(meta["constants"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn csv_goes_to_stdout_without_an_output_path() {
    let o = hybrid(&["table"], &configs().join("table.ini"), None);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("name,mechanism,"));
}

#[test]
fn sweep_is_linear_in_epsilon_and_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let cfg = configs().join("sweep_ion_epsilon.ini");
    assert_eq!(hybrid(&["sweep"], &cfg, Some(&out)).status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lam = column(&csv, "lambda_direct");
    assert_eq!(lam[0], 0.0);
    assert!((lam[1] - 0.5 * lam[2]).abs() < 1e-12 * lam[2]);

    let cfg = configs().join("sweep_sympathetic.ini");
    let a = hybrid(&["sweep", "--workers", "1"], &cfg, None);
    let b = hybrid(&["sweep", "--workers", "3"], &cfg, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_errors_exit_2_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[run]\ncommand = couplings\nscenario = ion_direct\n\n[params]\nomega_at = 70 MHz\n");
    let o = hybrid(&["couplings"], &cfg, None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"), "{}", String::from_utf8_lossy(&o.stderr));

    let cfg = write_config(dir.path(), "[run]\ncommand = couplings\nscenario = ion_direct\ncolour = blue\n");
    let o = hybrid(&["couplings"], &cfg, None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let o = hybrid(&["steady"], &configs().join("couplings_ion.ini"), None);
    assert_eq!(o.status.code(), Some(2), "command mismatch");
}

#[test]
fn invalid_physics_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[run]\ncommand = couplings\nscenario = ion_direct\n\n[params]\nm_eff = -1 kg\n");
    assert_eq!(hybrid(&["couplings"], &cfg, None).status.code(), Some(3));
}

#[test]
fn missing_steady_state_exits_4() {
    let o = hybrid(&["steady"], &configs().join("steady_unstable.ini"), None);
    assert_eq!(o.status.code(), Some(4));
    assert!(o.stdout.is_empty());
}

#[test]
fn truncation_failure_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = hybrid(&["evolve", "--dims", "4x4"], &configs().join("evolve_membrane.ini"), Some(&out));
    assert_eq!(o.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncation"));
    assert!(!out.exists());
}

#[test]
fn unknown_constants_table_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_hybrid"))
        .args(["table"])
        .env("HYBRID_CONSTANTS", "codata2014")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("codata2018"));
}
