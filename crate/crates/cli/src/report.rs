//! CSV and metadata writers.
//!
//! Every CSV starts with '#'-prefixed metadata lines (config echo, seed,
//! thresholds, version) before the header row. Output is fully
//! deterministic: no timestamps, sorted JSON keys, and default float
//! formatting throughout.

use crate::config::RunSetup;
use crate::CliError;
use islsim_core::geometry;
use islsim_core::sim::{AngleSweepPoint, LinkRunResult};
use islsim_core::solar::{path_loss_with_exponent, thermal_noise_floor};
use islsim_core::Complex64;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Derived link-budget quantities echoed into every output.
pub struct Derived {
    pub d_s_km: f64,
    pub f_dop_hz: f64,
    pub path_loss_db: f64,
    pub noise_floor_w: f64,
    pub noise_floor_dbm: f64,
}

pub fn derive(setup: &RunSetup) -> Result<Derived, CliError> {
    let d_s_km = geometry::distance_at_angle(&setup.cfg.geometry)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let f_mhz = setup.cfg.carrier_hz / 1e6;
    let path_loss_db = path_loss_with_exponent(f_mhz, d_s_km, setup.cfg.pathloss_exp)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let noise_floor_w = thermal_noise_floor(&setup.noise);
    Ok(Derived {
        d_s_km,
        f_dop_hz: geometry::max_doppler(&setup.cfg.geometry),
        path_loss_db,
        noise_floor_w,
        noise_floor_dbm: 10.0 * (noise_floor_w / 1e-3).log10(),
    })
}

fn metadata_lines(setup: &RunSetup, derived: &Derived, result: Option<&LinkRunResult>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# version = {VERSION}");
    let _ = writeln!(s, "# case_id = {}", setup.case.case_id);
    let _ = writeln!(s, "# seed = {}", setup.cfg.seed);
    let _ = writeln!(
        s,
        "# config = {}",
        serde_json::to_string(&Value::Object(setup.resolved.clone())).unwrap()
    );
    let _ = writeln!(s, "# d_s_km = {}", derived.d_s_km);
    let _ = writeln!(s, "# f_dop_hz = {}", derived.f_dop_hz);
    let _ = writeln!(s, "# path_loss_db = {}", derived.path_loss_db);
    let _ = writeln!(
        s,
        "# noise_floor_w = {} ({} dBm)",
        derived.noise_floor_w, derived.noise_floor_dbm
    );
    let _ = writeln!(
        s,
        "# rate_thresholds_bpshz = [{}]",
        setup
            .cfg
            .states
            .iter()
            .map(|d| d.rate_threshold.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    if let Some(r) = result {
        let _ = writeln!(s, "# block_samples = {}", r.block_samples);
        let _ = writeln!(
            s,
            "# omega_thresholds = [{}]",
            r.omega_thresholds
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        if let Some(a) = &r.alloc {
            let _ = writeln!(
                s,
                "# alpha = [{}]",
                a.alpha.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            );
        }
    }
    s
}

/// Results CSV: one row per (mode, SNR point).
pub fn write_results_csv(
    path: &Path,
    setup: &RunSetup,
    derived: &Derived,
    runs: &[(&str, &LinkRunResult)],
) -> Result<(), CliError> {
    let mut s = metadata_lines(setup, derived, runs.first().map(|(_, r)| *r));
    s.push_str("snr_db,ber,ber_ci95,op,capacity_bps_hz,mode,case_id\n");
    for (mode, result) in runs {
        for p in &result.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                p.snr_db, p.ber, p.ber_ci95, p.outage_probability, p.capacity_bps_hz, mode,
                setup.case.case_id
            );
        }
    }
    write_text(path, &s)
}

/// State-trace CSV: the Markov trajectory with per-block channel gain.
pub fn write_state_trace_csv(
    path: &Path,
    setup: &RunSetup,
    derived: &Derived,
    result: &LinkRunResult,
) -> Result<(), CliError> {
    let mut s = metadata_lines(setup, derived, Some(result));
    s.push_str("step,t_s,state_index,state_label,omega\n");
    let dt = result.state_series.step_duration_s();
    for (step, &state) in result.state_series.states.iter().enumerate() {
        let omega = result.omega_series.get(step).copied().unwrap_or(0.0);
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            step,
            step as f64 * dt,
            state,
            setup.cfg.states[state].label,
            omega
        );
    }
    write_text(path, &s)
}

/// Allocation report CSV: per-state priorities, durations, factors,
/// powers, and mean measured rates (averaged over the whole SNR grid).
pub fn write_allocation_csv(
    path: &Path,
    setup: &RunSetup,
    derived: &Derived,
    result: &LinkRunResult,
) -> Result<(), CliError> {
    let mut s = metadata_lines(setup, derived, Some(result));
    s.push_str("state_label,priority,tau_s,alpha,power_dbm,mean_rate\n");
    let k = setup.cfg.states.len();
    let uniform_priorities = vec![1.0; k];
    let priorities = setup.cfg.priorities.as_ref().unwrap_or(&uniform_priorities);
    for state in &setup.cfg.states {
        let i = state.index;
        let (alpha, power_dbm) = match &result.alloc {
            Some(a) => (a.alpha[i], a.power_dbm[i]),
            None => (1.0, 10.0 * setup.cfg.rho_mw.log10()),
        };
        let priority = if result.alloc.is_some() { priorities[i] } else { 1.0 };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            state.label,
            priority,
            result.state_series.dwell_s(i),
            alpha,
            power_dbm,
            result.per_state_mean_rate[i]
        );
    }
    write_text(path, &s)
}

/// Sweep CSV: the per-run result columns prefixed by the SEP angle and
/// its scintillation parameters.
pub fn write_sweep_csv(
    path: &Path,
    setup: &RunSetup,
    derived: &Derived,
    points: &[AngleSweepPoint],
) -> Result<(), CliError> {
    let mut s = metadata_lines(setup, derived, None);
    s.push_str("phi_deg,m,k_factor,snr_db,ber,ber_ci95,op,capacity_bps_hz,mode,case_id\n");
    for point in points {
        for p in &point.result.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},conventional,{}",
                point.phi_deg,
                point.m,
                point.k_factor,
                p.snr_db,
                p.ber,
                p.ber_ci95,
                p.outage_probability,
                p.capacity_bps_hz,
                setup.case.case_id
            );
        }
    }
    write_text(path, &s)
}

/// Full machine-readable run record.
pub fn write_metadata_json(
    path: &Path,
    setup: &RunSetup,
    derived: &Derived,
    runs: &[(&str, &LinkRunResult)],
) -> Result<(), CliError> {
    let mut modes = Map::new();
    for (mode, result) in runs {
        let mut entry = Map::new();
        entry.insert(
            "received_sinr_db".into(),
            json!(result.points.iter().map(|p| p.received_sinr_db).collect::<Vec<_>>()),
        );
        entry.insert("block_samples".into(), json!(result.block_samples));
        entry.insert("omega_thresholds".into(), json!(result.omega_thresholds));
        entry.insert(
            "state_transitions".into(),
            json!(result.state_series.transition_count()),
        );
        if let Some(a) = &result.alloc {
            entry.insert("alpha".into(), json!(a.alpha));
            entry.insert("power_dbm".into(), json!(a.power_dbm));
        }
        modes.insert((*mode).into(), Value::Object(entry));
    }
    let doc = json!({
        "version": VERSION,
        "case_id": setup.case.case_id,
        "seed": setup.cfg.seed,
        "config": Value::Object(setup.resolved.clone()),
        "derived": {
            "d_s_km": derived.d_s_km,
            "f_dop_hz": derived.f_dop_hz,
            "path_loss_db": derived.path_loss_db,
            "noise_floor_w": derived.noise_floor_w,
            "noise_floor_dbm": derived.noise_floor_dbm,
        },
        "modes": Value::Object(modes),
    });
    write_text(path, &serde_json::to_string_pretty(&doc).unwrap())
}

/// Binary waveform dump: little-endian f32 (re, im) pairs per sample.
pub fn write_waveform_bin(path: &Path, samples: &[Complex64]) -> Result<(), CliError> {
    let mut file = fs::File::create(path)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))?;
    let mut buf = Vec::with_capacity(samples.len() * 8);
    for s in samples {
        buf.extend_from_slice(&(s.re as f32).to_le_bytes());
        buf.extend_from_slice(&(s.im as f32).to_le_bytes());
    }
    file.write_all(&buf)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// CSV waveform dump with columns t_s, re, im, abs.
pub fn write_waveform_csv(
    path: &Path,
    setup: &RunSetup,
    samples: &[Complex64],
) -> Result<(), CliError> {
    let mut s = String::with_capacity(samples.len() * 48);
    let _ = writeln!(s, "# version = {VERSION}");
    let _ = writeln!(s, "# case_id = {}", setup.case.case_id);
    let _ = writeln!(s, "# seed = {}", setup.cfg.seed);
    let _ = writeln!(
        s,
        "# config = {}",
        serde_json::to_string(&Value::Object(setup.resolved.clone())).unwrap()
    );
    s.push_str("t_s,re,im,abs\n");
    for (i, z) in samples.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            i as f64 * setup.cfg.sample_period_s,
            z.re,
            z.im,
            z.norm()
        );
    }
    write_text(path, &s)
}
