//! Behavior of the command-line surface: exit codes, file formats, and
//! override precedence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_islsim"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("islsim_cli_tests").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

/// Small fast run: full sample floor, single SNR point.
const QUICK: &str = r#"{"n_samples": 10000, "tau_t_s": 0.1, "snr_db": "10:10:5"}"#;

#[test]
fn presets_lists_all_builtins() {
    let out = run_ok(&["presets"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["case1", "case2", "case3", "case4", "angle_sweep", "fig4_state_trace"] {
        assert!(text.contains(name), "missing preset {name}");
    }
}

#[test]
fn run_without_inputs_is_a_config_error() {
    assert_eq!(exit_code(&["run"]), 2);
}

#[test]
fn unknown_preset_is_a_config_error() {
    assert_eq!(exit_code(&["run", "--preset", "case9"]), 2);
}

#[test]
fn parse_error_is_a_config_error() {
    let dir = tmp("parse_error");
    let cfg = write_config(&dir, "bad.json", "{ not json");
    let out = bin()
        .args(["run", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error"), "stderr: {err}");
    // serde reports the offending position.
    assert!(err.contains("line"), "stderr: {err}");
}

#[test]
fn negative_sample_count_is_a_config_error() {
    let dir = tmp("neg_samples");
    let cfg = write_config(&dir, "bad.json", r#"{"n_samples": -1}"#);
    let out = bin()
        .args(["run", "--preset", "case1", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_samples"));
}

#[test]
fn unwritable_output_dir_is_a_runtime_error() {
    let dir = tmp("unwritable");
    // A file where the output directory should go.
    let blocker = dir.join("blocked");
    fs::write(&blocker, "x").unwrap();
    let dest = blocker.join("out");
    let dir_cfg = write_config(&dir, "quick.json", QUICK);
    let code = exit_code(&[
        "run",
        "--preset",
        "case1",
        "--config",
        dir_cfg.to_str().unwrap(),
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
}

#[test]
fn missing_output_dir_is_created() {
    let dir = tmp("created");
    let dest = dir.join("deep").join("nested").join("out");
    let cfg = write_config(&dir, "quick.json", QUICK);
    run_ok(&[
        "run",
        "--preset",
        "case1",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert!(dest.join("results.csv").exists());
    assert!(dest.join("state_trace.csv").exists());
    assert!(dest.join("allocation.csv").exists());
    assert!(dest.join("metadata.json").exists());
}

#[test]
fn csv_schemas_match_contract() {
    let dir = tmp("schemas");
    let cfg = write_config(&dir, "quick.json", QUICK);
    let dest = dir.join("out");
    run_ok(&[
        "run",
        "--preset",
        "case2",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dest.to_str().unwrap(),
    ]);

    let check = |file: &str, header: &str| {
        let text = fs::read_to_string(dest.join(file)).unwrap();
        let mut lines = text.lines();
        let mut meta = 0;
        let mut first_data_header = None;
        for line in lines.by_ref() {
            if line.starts_with('#') {
                meta += 1;
                continue;
            }
            first_data_header = Some(line.to_string());
            break;
        }
        assert!(meta >= 4, "{file}: expected metadata lines before the header");
        assert_eq!(first_data_header.as_deref(), Some(header), "{file} header");
        text
    };

    let results = check("results.csv", "snr_db,ber,ber_ci95,op,capacity_bps_hz,mode,case_id");
    assert!(results.contains(",conventional,II"));
    assert!(results.contains(",sbpa,II"));
    assert!(results.contains("# seed = "));
    assert!(results.contains("# config = {"));

    check("state_trace.csv", "step,t_s,state_index,state_label,omega");
    check("allocation.csv", "state_label,priority,tau_s,alpha,power_dbm,mean_rate");
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tmp("seed_override");
    let cfg = write_config(&dir, "quick.json", QUICK);
    let dest = dir.join("out");
    run_ok(&[
        "run",
        "--preset",
        "case1",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "777",
        "--out",
        dest.to_str().unwrap(),
    ]);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dest.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 777);
    assert_eq!(meta["config"]["seed"], 777);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tmp("repeat");
    let cfg = write_config(&dir, "quick.json", QUICK);
    let (a, b) = (dir.join("a"), dir.join("b"));
    for dest in [&a, &b] {
        run_ok(&[
            "run",
            "--preset",
            "case3",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dest.to_str().unwrap(),
        ]);
    }
    for file in ["results.csv", "state_trace.csv", "allocation.csv", "metadata.json"] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file} differs across identical runs"
        );
    }
}

#[test]
fn sbpa_flag_selects_modes() {
    let dir = tmp("sbpa_flag");
    let cfg = write_config(&dir, "quick.json", QUICK);
    for (mode, expect, absent) in [("off", "conventional", ",sbpa,"), ("on", "sbpa", ",conventional,")] {
        let dest = dir.join(mode);
        run_ok(&[
            "run",
            "--preset",
            "case2",
            "--config",
            cfg.to_str().unwrap(),
            "--sbpa",
            mode,
            "--out",
            dest.to_str().unwrap(),
        ]);
        let text = fs::read_to_string(dest.join("results.csv")).unwrap();
        assert!(text.contains(&format!(",{expect},")), "mode {mode}");
        assert!(!text.contains(absent), "mode {mode} must not contain {absent}");
    }
}

#[test]
fn waveform_dump_formats() {
    let dir = tmp("waveform");
    let cfg = write_config(&dir, "quick.json", QUICK);
    let dest = dir.join("out");
    run_ok(&[
        "run",
        "--preset",
        "case1",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dest.to_str().unwrap(),
        "--dump-waveform",
    ]);
    // Binary: interleaved little-endian f32 pairs, 8 bytes per sample.
    let bin = fs::read(dest.join("waveform.bin")).unwrap();
    assert_eq!(bin.len(), 10_000 * 8);
    // The first sample belongs to a unit-magnitude line-of-sight path
    // scaled by the initial state's gain.
    let re = f32::from_le_bytes(bin[0..4].try_into().unwrap());
    let im = f32::from_le_bytes(bin[4..8].try_into().unwrap());
    assert!(((re * re + im * im).sqrt() - 30f32.sqrt()).abs() < 1e-3);

    let csv = fs::read_to_string(dest.join("waveform.csv")).unwrap();
    let mut lines = csv.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next(), Some("t_s,re,im,abs"));
    assert_eq!(lines.count(), 10_000);
}

#[test]
fn sweep_writes_combined_table() {
    let dir = tmp("sweep");
    let cfg = write_config(
        &dir,
        "quick.json",
        r#"{"n_samples": 10000, "tau_t_s": 0.1, "snr_db": "0:10:10",
            "angle_min_deg": -1.0, "angle_max_deg": 1.0, "angle_step_deg": 1.0}"#,
    );
    let dest = dir.join("out");
    run_ok(&[
        "sweep",
        "--preset",
        "angle_sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dest.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(dest.join("sweep_results.csv")).unwrap();
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap();
    assert_eq!(
        header,
        "phi_deg,m,k_factor,snr_db,ber,ber_ci95,op,capacity_bps_hz,mode,case_id"
    );
    // 3 angles x 2 SNR points.
    let rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .count();
    assert_eq!(rows - 1, 6);
    // Inside the eclipse band the index is 1 and the K-factor is 0.
    assert!(text.contains("0,1,0,"));
}

#[test]
fn sweep_without_angles_is_a_config_error() {
    assert_eq!(exit_code(&["sweep", "--preset", "case1"]), 2);
}
