use std::path::Path;
use std::process::{Command, Output};

fn nscool(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nscool"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (String, Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let schema = lines.next().unwrap().to_string();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (schema, header, rows)
}

#[test]
fn default_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let o = nscool(dir.path(), &["simulate", "--svg"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (schema, header, rows) = csv_rows(&dir.path().join("trajectory.csv"));
    assert!(schema.starts_with("# nscool-csv v1 trajectory config="));
    assert_eq!(
        header,
        ["t_us", "pop_psi0", "pop_psif", "pop_perp", "pop_reservoir", "pop_1P1_total", "pop_1D2_total", "pop_6s"]
    );
    assert_eq!(rows.len(), 201);
    let s = json(&dir.path().join("trajectory_summary.json"));
    let f = s["fidelity"].as_f64().unwrap();
    assert!((f - 0.9996).abs() < 3e-4, "{f}");
    let hash = s["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(schema.ends_with(hash));
    assert!(s["wall_clock_s"].as_f64().is_some());
    assert!((s["dressed"]["overlap_up"].as_f64().unwrap() - 0.99409).abs() < 5e-4);
    let svg = std::fs::read_to_string(dir.path().join("trajectory.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn summary_input_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let o = nscool(dir.path(), &["simulate", "--set", "t_final=1", "--set", "samples=11", "--set", "delta=0"]);
    assert!(o.status.success());
    let s = json(&dir.path().join("trajectory_summary.json"));
    let cfg: String = s["input"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| format!("{k} = {}\n", v.as_str().unwrap()))
        .collect();
    let cfg_path = dir.path().join("echo.cfg");
    std::fs::write(&cfg_path, cfg).unwrap();
    let again = dir.path().join("again");
    let o = nscool(&again, &["simulate", "--config", cfg_path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read(dir.path().join("trajectory.csv")).unwrap(),
        std::fs::read(again.join("trajectory.csv")).unwrap()
    );
    assert_eq!(json(&again.join("trajectory_summary.json"))["config_hash"], s["config_hash"]);
}

#[test]
fn minimal_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = nscool(dir.path(), &["simulate", "--set", "samples=2"]);
    assert!(o.status.success());
    let (_, header, rows) = csv_rows(&dir.path().join("trajectory.csv"));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.len() == header.len()));
    assert!(rows[0][0] < rows[1][0]);
    assert_eq!(rows[1][0], 20.0);
}

#[test]
fn byte_identical_reruns() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(nscool(d.path(), &["reproduce", "fig3"]).status.success());
        assert!(nscool(d.path(), &["simulate", "--set", "t_final=2", "--set", "samples=21"]).status.success());
    }
    for f in ["fig3.csv", "fig3_summary.json", "trajectory.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn balance_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert!(nscool(dir.path(), &["balance"]).status.success());
    let s = json(&dir.path().join("balance.json"));
    assert!((s["balanced_omega_pd_mhz"].as_f64().unwrap() - 144.27).abs() < 0.05);
    assert!((s["recommended_delta_mhz"].as_f64().unwrap() - 3.8826).abs() < 0.01);

    assert!(nscool(dir.path(), &["balance", "--set", "delta_pd=-1750"]).status.success());
    let s = json(&dir.path().join("balance.json"));
    assert!((s["configured_imbalance_mhz"].as_f64().unwrap().abs() - 0.42).abs() < 0.02);
}

#[test]
fn levels_table() {
    let dir = tempfile::tempdir().unwrap();
    assert!(nscool(dir.path(), &["reproduce", "levels"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("levels.csv")).unwrap();
    let d2: Vec<f64> = text
        .lines()
        .filter(|l| l.starts_with("5s15d"))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    for (got, want) in d2.iter().zip([-1765.0, -463.0, 604.0, 1453.0, 2100.0]) {
        assert!((got - want).abs() <= 1.0, "{got} vs {want}");
    }
    assert_eq!(d2.len(), 5);
}

#[test]
fn appendix_a_table() {
    let dir = tempfile::tempdir().unwrap();
    assert!(nscool(dir.path(), &["reproduce", "appendixA"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("appendixA.csv")).unwrap();
    let get = |q: &str| -> f64 {
        text.lines().find(|l| l.starts_with(&format!("{q},"))).unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    for (q, want) in [("d_1S0_1P1", 5.38), ("d_1P1_6s", 2.09), ("power_ps", 0.21), ("power_pd", 25.1)] {
        assert!((get(q) / want - 1.0).abs() < 0.02, "{q}");
    }
}

#[test]
fn lasercalc_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = nscool(dir.path(), &["lasercalc", "--rabi", "144.27", "--dipole", "0.092"]);
    assert!(o.status.success());
    let s = json(&dir.path().join("lasercalc.json"));
    assert!((s["power_mw"].as_f64().unwrap() / 25.1 - 1.0).abs() < 0.02);
}

#[test]
fn config_errors_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let bad_cfg = dir.path().join("bad.cfg");
    std::fs::write(&bad_cfg, "omega_pd = 144\nnot_a_key = 1\n").unwrap();
    let cases: [&[&str]; 6] = [
        &["simulate", "--config", bad_cfg.to_str().unwrap()],
        &["simulate", "--set", "delta=abc"],
        &["simulate", "--set", "samples=1"],
        &["simulate", "--set", "alpha=0", "--set", "beta=0"],
        &["balance", "--set", "balance_lo=200", "--set", "balance_hi=100"],
        &["reproduce", "nonsense"],
    ];
    for args in cases {
        let o = nscool(&out, args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
    }
    assert!(!out.exists());
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = nscool(dir.path(), &["simulate", "--set", "method=dopri", "--set", "max_step=1e-20"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
