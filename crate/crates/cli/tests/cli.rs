use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gnrstep::output::parse_xyz;

const SMALL: &str = "n_a = 7\nn_cells_channel = 12\n";
const FIG2_SMALL: &str = "n_a = 7\nn_cells_channel = 12\nstep_height = 0.78\ncurvature_radius = 0.40\nbend_angle_deg = 90.0\n";

fn gnrstep(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("run.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_gnrstep"))
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

#[test]
fn flat_build_has_one_plane() {
    let dir = tempfile::tempdir().unwrap();
    let out = gnrstep(dir.path(), "build", "n_a = 7\nn_cells_channel = 1\nn_cells_lead = 0\n", &[]);
    // zero lead cells are invalid
    assert_eq!(out.status.code(), Some(2));

    let out = gnrstep(dir.path(), "build", SMALL, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (comment, pos) = parse_xyz(&read(dir.path(), "geometry.xyz")).unwrap();
    assert!(comment.contains("n_a=7"));
    assert_eq!(pos.len(), 14 * 14);
    assert!(pos.iter().all(|p| p[1] == pos[0][1]));
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "geometry.json")).unwrap();
    assert_eq!(json["n_atoms"], 196);
    assert!(json["profile"].is_null());
}

#[test]
fn single_cell_xyz_lists_fourteen_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let out = gnrstep(dir.path(), "build", "n_a = 7\nn_cells_channel = 1\n", &[]);
    assert!(out.status.success());
    let text = read(dir.path(), "geometry.xyz");
    // one channel cell plus one lead cell on each side
    assert_eq!(text.lines().next(), Some("42"));
}

#[test]
fn bent_build_warns_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = gnrstep(dir.path(), "build", FIG2_SMALL, &[]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.lines().any(|l| l.contains("theta_eff")), "{stderr}");
    let (comment, pos) = parse_xyz(&read(dir.path(), "geometry.xyz")).unwrap();
    assert!(comment.contains("theta_eff="));
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "geometry.json")).unwrap();
    let sites = json["sites"].as_array().unwrap();
    for (p, s) in pos.iter().zip(sites) {
        for k in 0..3 {
            let exact = s["position_nm"][k].as_f64().unwrap();
            assert!((p[k] - exact).abs() * 10.0 < 1e-6);
        }
    }
    let ys: Vec<f64> = pos.iter().map(|p| p[1]).collect();
    let span = ys.iter().cloned().fold(f64::MIN, f64::max) - ys.iter().cloned().fold(f64::MAX, f64::min);
    assert!((span - 0.78).abs() < 1e-6);
}

#[test]
fn config_errors_exit_with_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let out = gnrstep(dir.path(), "build", "n_cells_channel = 4\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_a"));

    let out = gnrstep(dir.path(), "build", "n_a = 7\nn_cells_channel = 4\nbogus = 1\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_gnrstep"))
        .args(["build", "--config", "/nonexistent/run.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/run.toml"));
}

#[test]
fn decimation_failure_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{SMALL}n_points = 2\ndecimation_max_iter = 1\n");
    let out = gnrstep(dir.path(), "transmission", &cfg, &[]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn transmission_file_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{SMALL}n_points = 5\nbiases = [0.0, 0.3]\n");
    let out = gnrstep(dir.path(), "transmission", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["T_vb0.csv", "T_vb300.csv"] {
        let text = read(dir.path(), name);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], "energy_ev,transmission");
        let energies: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert!(energies.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn ldos_layout_and_tags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{FIG2_SMALL}ldos_n_points = 4\nldos_atoms = [3, 40, 90]\n");
    let out = gnrstep(dir.path(), "ldos", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(dir.path(), "ldos.csv");
    assert_eq!(text.lines().count(), 13);
    assert_eq!(text.lines().next(), Some("atom_index,energy_ev,ldos_per_ev"));
    let tags: serde_json::Value = serde_json::from_str(&read(dir.path(), "ldos_sampling.json")).unwrap();
    assert!(tags["arc_atom"].is_u64());
    assert!(tags["far_atom"].is_u64());

    let flat_cfg = format!("{SMALL}ldos_n_points = 4\n");
    let out = gnrstep(dir.path(), "ldos", &flat_cfg, &[]);
    assert!(out.status.success());
    let tags: serde_json::Value = serde_json::from_str(&read(dir.path(), "ldos_sampling.json")).unwrap();
    assert!(tags["arc_atom"].is_null());
}

#[test]
fn zero_bias_iv_is_a_single_zero_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = gnrstep(dir.path(), "iv", &format!("{SMALL}biases = [0.0]\n"), &[]);
    assert!(out.status.success());
    assert_eq!(read(dir.path(), "iv.csv"), "bias_v,current_a\n0.000000000e0,0.000000000e0\n");
}

#[test]
fn unsorted_biases_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = gnrstep(dir.path(), "iv", &format!("{SMALL}biases = [0.2, 0.1]\n"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("biases"));
}

#[test]
fn sweep_json_reports_deviation_field_and_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "n_a = 5\nn_cells_channel = 8\nbiases = [0.0, 0.4]\n\
               sweep_h_values = [0.4, 0.6]\nsweep_h_curvature_radius = 0.4\nsweep_h_bend_angle_deg = 60.0\n\
               sweep_cr_values = [0.4, 0.6]\nsweep_cr_step_height = 0.5\nsweep_cr_bend_angle_deg = 60.0\n\
               sweep_theta_values = [45.0, 60.0]\nsweep_theta_step_height = 0.5\nsweep_theta_curvature_radius = 0.4\n";
    let out = gnrstep(dir.path(), "sweep", cfg, &["--linear-response"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "sweep.json")).unwrap();
    assert_eq!(json["field_v_per_nm"].as_array().unwrap().len(), 2);
    let length = json["channel_length_nm"].as_f64().unwrap();
    assert!((json["field_v_per_nm"][1].as_f64().unwrap() - 0.4 / length).abs() < 1e-15);
    for s in json["sweeps"].as_array().unwrap() {
        assert_eq!(s["deviation"].as_array().unwrap().len(), 2);
    }
    let ordering: Vec<&str> = json["ordering"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let mut sorted = ordering.clone();
    sorted.sort();
    assert_eq!(sorted, ["CR", "H", "theta"]);
    assert!(json["linear_response"].as_bool().unwrap());
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = gnrstep::RunConfig::load(&path).unwrap();
        cfg.geometry().unwrap();
        cfg.biases().unwrap();
        if cfg.sweep_h_values.is_some() || cfg.sweep_cr_values.is_some() || cfg.sweep_theta_values.is_some() {
            cfg.sweeps().unwrap();
        }
        count += 1;
    }
    assert!(count >= 7);
}
