use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &str = r#"
ns_split = [2, 2]
snr_db = [10, -10, 0]
schemes = ["digital-uniform", "digital-wf", "asymptotic-hybrid", "omp-hybrid", "phase-extract"]
rotation_deg = [10, 0]
aperture_scale = [0.5, 1.0]

[tx]
n_v = 4
n_h = 4
[rx]
n_v = 4
n_h = 4
"#;

fn losmimo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_losmimo")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

fn summary(csv: &str, key: &str) -> String {
    let prefix = format!("# {key},");
    csv.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no {key} in\n{csv}")).to_string()
}

#[test]
fn validate_passes_and_lists_invariants() {
    let o = losmimo(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn injected_dt_sign_flip_exits_one() {
    let o = losmimo(&["validate", "--inject-fault", "dt-sign"]);
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<_> = stdout(&o).lines().filter(|l| l.starts_with("FAIL")).map(str::to_string).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("fresnel-recomposition"));
}

#[test]
fn rate_sweep_rows_are_ordered_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "small.toml", SMALL);
    let a = losmimo(&["rate-sweep", "--config", &cfg, "--threads", "1"]);
    let b = losmimo(&["rate-sweep", "--config", &cfg, "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);

    let text = stdout(&a);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scheme,snr_db,rotation_deg,rate_bps_hz,digital_gap_ratio,wall_time_ms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5 * 3 * 2);
    let keys: Vec<(&str, &str, &str)> = rows.iter().map(|r| (r[0], r[1], r[2])).collect();
    assert_eq!(&keys[..6], &[
        ("digital-uniform", "-10", "0"),
        ("digital-uniform", "-10", "10"),
        ("digital-uniform", "0", "0"),
        ("digital-uniform", "0", "10"),
        ("digital-uniform", "10", "0"),
        ("digital-uniform", "10", "10"),
    ]);
    assert_eq!(rows[6][0], "digital-wf");
    for r in &rows {
        let ratio: f64 = r[4].parse().unwrap();
        if r[0] == "digital-uniform" {
            assert_eq!(r[4], "1");
        }
        if r[0] != "digital-wf" {
            assert!(ratio <= 1.0 + 1e-9, "{r:?}");
        }
        assert_eq!(r[5], "0");
    }
}

#[test]
fn empty_rotation_list_gives_a_single_rotation() {
    let dir = TempDir::new().unwrap();
    let body = SMALL.replace("rotation_deg = [10, 0]", "rotation_deg = []");
    let o = losmimo(&["rate-sweep", "--config", &write(&dir, "r.toml", &body)]);
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    assert_eq!(rows.len(), 5 * 3);
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("0")));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "small.toml", SMALL);
    let out = dir.path().join("aperture.csv");
    let o = losmimo(&["aperture-sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scale,l_t,l_r,product,feasible,rate_bps_hz");
    assert_eq!(lines.len(), 3);
    let rate = |l: &str| l.rsplit(',').next().unwrap().parse::<f64>().unwrap();
    assert!(rate(lines[1]) < 0.9 * rate(lines[2]));
}

#[test]
fn output_path_from_config_is_honoured() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("from-config.csv");
    let body = format!("output_path = {:?}\n{SMALL}", target.to_str().unwrap());
    let o = losmimo(&["spectrum", "--config", &write(&dir, "c.toml", &body)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(Path::new(&target).exists());
}

#[test]
fn rotation_sweep_reports_fresnel_error() {
    let dir = TempDir::new().unwrap();
    let body = SMALL.replace("rotation_deg = [10, 0]", "").replace(
        r#"schemes = ["digital-uniform", "digital-wf", "asymptotic-hybrid", "omp-hybrid", "phase-extract"]"#,
        r#"schemes = ["digital-uniform"]"#,
    );
    let o = losmimo(&["rotation-sweep", "--config", &write(&dir, "r.toml", &body)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("scheme,snr_db,rotation_deg,rate_bps_hz,digital_gap_ratio,wall_time_ms,fresnel_error\n"));
    let rotations: Vec<&str> = text.lines().skip(1).take(5).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(rotations, ["0", "10", "20", "30", "40"]);
    assert_eq!(text.lines().count(), 1 + 3 * 5);
}

#[test]
fn spectrum_of_single_elements() {
    let dir = TempDir::new().unwrap();
    let body = "ns = 1\nspacing_mode = \"half-wavelength\"\n[tx]\nn_v = 1\nn_h = 1\n[rx]\nn_v = 1\nn_h = 1\n";
    let o = losmimo(&["spectrum", "--config", &write(&dir, "one.toml", body)]);
    let text = stdout(&o);
    assert!(text.starts_with("index,raw_value,normalized_value\n0,1,1\n"), "{text}");
    assert_eq!(summary(&text, "count_near_one"), "1");
}

#[test]
fn half_wavelength_spacing_is_rank_deficient() {
    let dir = TempDir::new().unwrap();
    let body = "ns_split = [4, 4]\nspacing_mode = \"half-wavelength\"\n[tx]\nn_v = 16\nn_h = 16\n[rx]\nn_v = 16\nn_h = 16\n";
    let o = losmimo(&["spectrum", "--config", &write(&dir, "hw.toml", body)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 256);
    assert!(summary(&text, "count_near_one").parse::<usize>().unwrap() < 16);
}

#[test]
fn config_errors_exit_two_with_a_line() {
    let dir = TempDir::new().unwrap();
    let body = SMALL.replace("ns_split = [2, 2]", "ns_split = [3, 2]");
    let o = losmimo(&["rate-sweep", "--config", &write(&dir, "bad.toml", &body)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("ns_split"), "{err}");

    let o = losmimo(&["spectrum", "--config", &write(&dir, "typo.toml", &format!("{SMALL}\n[tx.extra]\n"))]);
    assert_eq!(o.status.code(), Some(2));

    let o = losmimo(&["spectrum", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_three_and_name_the_point() {
    let dir = TempDir::new().unwrap();
    let body = SMALL.replacen("n_h = 4\n", "n_h = 4\ntheta_deg = 90\n", 1);
    let o = losmimo(&["rate-sweep", "--config", &write(&dir, "flat.toml", &body)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rotation"));
}
