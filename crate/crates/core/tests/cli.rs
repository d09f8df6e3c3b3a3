use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn jcm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcm")).args(args).arg("--out").arg(dir).output().expect("spawn jcm")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn pnd_outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["pnd", "--tau", "0,pi/8,pi/8-pi/24000,pi/4,pi/2"];
    ok(&jcm(a.path(), &args));
    ok(&jcm(b.path(), &args));
    for slug in ["0", "1pi_8", "2999pi_24000", "1pi_4", "1pi_2"] {
        let name = format!("pnd_tau_{slug}.csv");
        let x = fs::read(a.path().join(&name)).unwrap();
        let y = fs::read(b.path().join(&name)).unwrap();
        assert_eq!(x, y, "{name}");
        assert!(!x.contains(&b'\r'));
    }
}

#[test]
fn pnd_at_zero_is_poisson() {
    let dir = tempfile::tempdir().unwrap();
    ok(&jcm(dir.path(), &["pnd", "--tau", "0"]));
    let text = fs::read_to_string(dir.path().join("pnd_tau_0.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p"));
    let rows: Vec<(usize, f64)> = lines
        .map(|l| {
            let (n, p) = l.split_once(',').unwrap();
            (n.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 257);
    let mut poisson = (-50f64).exp();
    for (n, p) in rows {
        assert!((p - poisson).abs() < 1e-12, "n={n}");
        poisson *= 50.0 / (n + 1) as f64;
    }
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["pnd", "--tau", "pi/"][..],
        &["pnd", "--tau", "0", "--mode", "cubic"],
        &["pnd", "--tau", "0", "--k", "2"],
        &["pnd", "--tau", "0", "--cutoff", "60"],
        &["catcheck", "--r", "2"],
        &["qfunc", "--tau", "0", "--window", "1,-1,0,1"],
        &["inversion", "--steps", "1"],
    ] {
        let out = jcm(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    fs::write(&config, r#"{"nbar": 10, "cutoff": 80, "mode": "exact"}"#).unwrap();
    let cfg = config.to_str().unwrap();
    ok(&jcm(dir.path(), &["pnd", "--tau", "0", "--config", cfg, "--cutoff", "90"]));
    let text = fs::read_to_string(dir.path().join("pnd_tau_0.csv")).unwrap();
    assert_eq!(text.lines().count(), 92);

    fs::write(&config, r#"{"nbar": 10, "colour": "red"}"#).unwrap();
    assert_eq!(jcm(dir.path(), &["pnd", "--tau", "0", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn entropy_and_inversion_tables() {
    let dir = tempfile::tempdir().unwrap();
    ok(&jcm(dir.path(), &["entropy", "--steps", "9"]));
    let text = fs::read_to_string(dir.path().join("entropy.csv")).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(text.lines().next(), Some("tau,entropy"));
    assert_eq!(rows.len(), 9);
    // tau = 0, pi/2, pi are exact grid points here.
    for i in [0, 4, 8] {
        assert!(rows[i][1] < 1e-6, "row {i}: {:?}", rows[i]);
    }
    assert!((rows[2][1] - std::f64::consts::LN_2).abs() < 0.01);
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("entropy.json")).unwrap()).unwrap();
    assert_eq!(sidecar["schema_version"], 1);

    ok(&jcm(dir.path(), &["inversion", "--from", "0", "--to", "pi/2", "--steps", "3"]));
    let text = fs::read_to_string(dir.path().join("inversion.csv")).unwrap();
    let w: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(w.len(), 3);
    assert!((w[0] - 1.0).abs() < 1e-12);
    assert!((w[2] + 1.0).abs() < 1e-10);
}

#[test]
fn dip_window_annotates_gridlines() {
    let dir = tempfile::tempdir().unwrap();
    ok(&jcm(dir.path(), &["entropy", "--dip-window", "--steps", "241"]));
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("entropy_dip.json")).unwrap()).unwrap();
    let rs: Vec<i64> = sidecar["gridlines"].as_array().unwrap().iter().map(|g| g["r"].as_i64().unwrap()).collect();
    assert_eq!(rs, vec![-5, -3, -1, 1, 3, 5]);
    assert!((sidecar["delta_1"].as_f64().unwrap() - std::f64::consts::PI / 800.0).abs() < 1e-15);
}

#[test]
fn qfunc_reports_components() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&jcm(dir.path(), &["qfunc", "--tau", "pi/2", "--resolution", "121"]));
    assert!(stdout.contains("components: 2"), "{stdout}");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("qfunc_tau_1pi_2.json")).unwrap()).unwrap();
    assert_eq!(json["components"]["count"], 2);
    let csv = fs::read_to_string(dir.path().join("qfunc_tau_1pi_2.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 121 * 121);
}

#[test]
fn catcheck_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&jcm(dir.path(), &["catcheck", "--r", "-1"]));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("catcheck_r-1.json")).unwrap()).unwrap();
    assert!(stdout.contains("\"schema_version\": 1"));
    assert_eq!(report["schema_version"], 1);
    assert!(report["kerr_half_period"]["fidelity"].as_f64().unwrap() > 1.0 - 1e-8);
    assert!(report["coherent_recurrence"]["fidelity"].as_f64().unwrap() > 1.0 - 1e-8);
    let dips = report["dips"].as_array().unwrap();
    assert_eq!(dips.len(), 2);
    assert_eq!(dips[0]["r"], -1);
    assert_eq!(dips[1]["r"], 1);
}
