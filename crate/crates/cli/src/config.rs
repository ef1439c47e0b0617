//! Run configuration: presets, JSON loading, merging, and validation.
//!
//! Configurations are flat JSON documents. A preset provides the base
//! key set, an optional config file overrides preset keys, and explicit
//! command-line flags override both.

use crate::CliError;
use islsim_core::fading::RicianChannelParams;
use islsim_core::geometry::{self, SepGeometry};
use islsim_core::markov::{StateDef, TransitionMatrix};
use islsim_core::sim::{CaseSpec, LinkConfig, Modulation};
use islsim_core::solar::{
    k_factor_at_angle, KFactor, NoiseModel, ScintillationParams,
};
use serde_json::{json, Map, Value};
use std::path::Path;

pub const PRESET_NAMES: &[&str] = &[
    "case1",
    "case2",
    "case3",
    "case4",
    "angle_sweep",
    "fig4_state_trace",
];

/// Ready-to-run setup assembled from a merged configuration.
#[derive(Debug, Clone)]
pub struct RunSetup {
    pub cfg: LinkConfig,
    pub case: CaseSpec,
    /// SEP angle grid for sweep runs, in degrees.
    pub angles: Vec<f64>,
    pub noise: NoiseModel,
    /// The fully resolved flat configuration, echoed into outputs.
    pub resolved: Map<String, Value>,
}

fn common_defaults() -> Map<String, Value> {
    json_map(json!({
        "modulation": "4QAM",
        "n_samples": 1_000_000,
        "bandwidth_hz": 1e6,
        "frequency_ghz": 10.0,
        "t_cmb_k": 2.7255,
        "sample_time_s": 1e-5,
        "pathloss_exp": 2.0,
        "kappa": 0.05,
        "elevation_deg": 0.0,
        "s_csee_var": 0.0,
        "snr_db": "0:30:5",
        "seed": 42,
        "n_sinusoids": 32,
        "a1": 1.14,
        "a2": 0.02,
        "theta0_deg": 1.3,
        "xi_deg": 3.0,
        "rho_mw": 1.0,
        "k_states": 3,
        "omega_states": [1.0, 4.0, 30.0],
        "priorities": [2.0, 1.0, 0.5],
        "transition_matrix": [
            [0.05, 0.25, 0.70],
            [0.20, 0.30, 0.50],
            [0.10, 0.10, 0.80],
        ],
        "initial_state": 2,
        "rate_threshold_bpshz": 2.0,
        "d1_km": 60.0,
        "nu_kms": 2.0,
        "phi_deg": 30.0,
        "gamma": "inf",
        "tau_t_s": 10.0,
        "case_id": "custom",
    }))
}

/// The common parameter block used when no preset is named.
pub fn defaults() -> Map<String, Value> {
    common_defaults()
}

/// Returns the preset key set by name, already merged over the common
/// defaults.
pub fn preset(name: &str) -> Result<Map<String, Value>, CliError> {
    let mut map = common_defaults();
    let specific = match name {
        "case1" => json!({
            "case_id": "I",
            "nu_kms": 2.0, "phi_deg": 30.0, "gamma": "inf", "tau_t_s": 10.0,
        }),
        "case2" => json!({
            "case_id": "II",
            "nu_kms": 2.0, "phi_deg": 2.0, "gamma": 8.6193, "tau_t_s": 10.0,
        }),
        "case3" => json!({
            "case_id": "III",
            "nu_kms": 2.0, "phi_deg": 0.0, "gamma": 0.0, "tau_t_s": 10.0,
        }),
        "case4" => json!({
            "case_id": "IV",
            "nu_kms": 4.0, "phi_deg": 30.0, "gamma": "inf", "tau_t_s": 10.0,
        }),
        "angle_sweep" => json!({
            "case_id": "angle_sweep",
            "k_states": 1,
            "omega_states": [1.0],
            "priorities": [1.0],
            "transition_matrix": [[1.0]],
            "initial_state": 0,
            "d1_km": 10.0,
            "nu_kms": 0.1,
            "phi_deg": 0.0,
            "gamma": "auto",
            "tau_t_s": 10.0,
            "angle_min_deg": -3.0,
            "angle_max_deg": 3.0,
            "angle_step_deg": 0.5,
        }),
        "fig4_state_trace" => json!({
            "case_id": "fig4",
            "nu_kms": 2.0, "phi_deg": 2.0, "gamma": 8.6193,
            "tau_t_s": 100.0,
            "n_samples": 10_000_000,
            "snr_db": "15:15:5",
        }),
        other => {
            return Err(CliError::Config(format!(
                "unknown preset '{other}' (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    merge(&mut map, json_map(specific));
    Ok(map)
}

fn json_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("preset literals are objects"),
    }
}

/// Overlays `over` onto `base`, key by key.
pub fn merge(base: &mut Map<String, Value>, over: Map<String, Value>) {
    for (k, v) in over {
        base.insert(k, v);
    }
}

/// Loads a flat JSON config file.
pub fn load_file(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: parse error: {e}", path.display())))?;
    match value {
        Value::Object(m) => Ok(m),
        _ => Err(CliError::Config(format!(
            "{}: top level must be a flat JSON object",
            path.display()
        ))),
    }
}

const KNOWN_KEYS: &[&str] = &[
    "modulation",
    "n_samples",
    "bandwidth_hz",
    "frequency_ghz",
    "t_cmb_k",
    "sample_time_s",
    "pathloss_exp",
    "kappa",
    "elevation_deg",
    "s_csee_var",
    "snr_db",
    "seed",
    "n_sinusoids",
    "a1",
    "a2",
    "theta0_deg",
    "xi_deg",
    "rho_mw",
    "k_states",
    "omega_states",
    "priorities",
    "transition_matrix",
    "initial_state",
    "rate_threshold_bpshz",
    "d1_km",
    "nu_kms",
    "phi_deg",
    "gamma",
    "tau_t_s",
    "case_id",
    "block_samples",
    "angle_min_deg",
    "angle_max_deg",
    "angle_step_deg",
];

fn get_f64(map: &Map<String, Value>, key: &str) -> Result<f64, CliError> {
    map.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| CliError::Config(format!("missing or non-numeric key '{key}'")))
}

fn get_u64(map: &Map<String, Value>, key: &str) -> Result<u64, CliError> {
    let v = map
        .get(key)
        .ok_or_else(|| CliError::Config(format!("missing key '{key}'")))?;
    v.as_u64().ok_or_else(|| {
        CliError::Config(format!("key '{key}' must be a non-negative integer (got {v})"))
    })
}

fn get_str<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a str, CliError> {
    map.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Config(format!("missing or non-string key '{key}'")))
}

fn get_f64_array(map: &Map<String, Value>, key: &str) -> Result<Vec<f64>, CliError> {
    let arr = map
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Config(format!("missing or non-array key '{key}'")))?;
    arr.iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| CliError::Config(format!("'{key}' must contain numbers")))
        })
        .collect()
}

/// Parses an SNR grid: either "start:stop:step" (inclusive) or an array.
pub fn parse_snr_grid(v: &Value) -> Result<Vec<f64>, CliError> {
    match v {
        Value::String(s) => {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(CliError::Config(format!(
                    "snr_db string must be start:stop:step (got '{s}')"
                )));
            }
            let nums: Vec<f64> = parts
                .iter()
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Config(format!("bad snr_db component '{p}'")))
                })
                .collect::<Result<_, _>>()?;
            let (start, stop, step) = (nums[0], nums[1], nums[2]);
            if !(step > 0.0) {
                return Err(CliError::Config("snr_db step must be > 0".into()));
            }
            let mut grid = Vec::new();
            let mut i = 0;
            loop {
                let x = start + i as f64 * step;
                if x > stop + 1e-9 {
                    break;
                }
                grid.push(x);
                i += 1;
            }
            if grid.is_empty() {
                return Err(CliError::Config("snr_db grid is empty".into()));
            }
            Ok(grid)
        }
        Value::Array(_) => {
            let grid = get_f64_array(&{
                let mut m = Map::new();
                m.insert("snr_db".into(), v.clone());
                m
            }, "snr_db")?;
            if grid.is_empty() {
                return Err(CliError::Config("snr_db grid is empty".into()));
            }
            Ok(grid)
        }
        other => Err(CliError::Config(format!(
            "snr_db must be a string or array (got {other})"
        ))),
    }
}

fn parse_gamma(map: &Map<String, Value>, phi_deg: f64, scint: &ScintillationParams) -> Result<KFactor, CliError> {
    match map.get("gamma") {
        Some(Value::String(s)) => match s.as_str() {
            "inf" | "Inf" | "INF" | "infinity" | "Infinity" => Ok(KFactor::Infinite),
            "auto" => k_factor_at_angle(phi_deg, scint)
                .map_err(|e| CliError::Config(format!("gamma: {e}"))),
            other => Err(CliError::Config(format!(
                "gamma must be a number, 'inf', or 'auto' (got '{other}')"
            ))),
        },
        Some(v) => {
            let g = v.as_f64().ok_or_else(|| {
                CliError::Config(format!("gamma must be a number, 'inf', or 'auto' (got {v})"))
            })?;
            Ok(KFactor::Finite(g))
        }
        None => Err(CliError::Config("missing key 'gamma'".into())),
    }
}

fn state_labels(k: usize) -> Vec<String> {
    match k {
        1 => vec!["SINGLE".into()],
        3 => vec!["BAD".into(), "MODERATE".into(), "GOOD".into()],
        _ => (0..k).map(|i| format!("S{i}")).collect(),
    }
}

/// Builds the run setup from a fully merged key set.
pub fn build(map: &Map<String, Value>) -> Result<RunSetup, CliError> {
    for key in map.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("unknown configuration key '{key}'")));
        }
    }

    let modulation = match get_str(map, "modulation")? {
        "4QAM" | "QPSK" => Modulation::Qam4,
        other => return Err(CliError::Config(format!("unsupported modulation '{other}'"))),
    };

    let n_samples_raw = map
        .get("n_samples")
        .ok_or_else(|| CliError::Config("missing key 'n_samples'".into()))?;
    let n_samples = n_samples_raw.as_i64().ok_or_else(|| {
        CliError::Config(format!("n_samples must be an integer (got {n_samples_raw})"))
    })?;
    if n_samples < 10_000 {
        return Err(CliError::Config(format!(
            "n_samples must be >= 10^4 for statistical output (got {n_samples})"
        )));
    }
    let n_samples = n_samples as usize;

    let scint = ScintillationParams {
        a1: get_f64(map, "a1")?,
        a2: get_f64(map, "a2")?,
        theta0_deg: get_f64(map, "theta0_deg")?,
        xi_deg: get_f64(map, "xi_deg")?,
    };

    let phi_deg = get_f64(map, "phi_deg")?;
    let nu_kms = get_f64(map, "nu_kms")?;
    let carrier_hz = get_f64(map, "frequency_ghz")? * 1e9;
    let geometry = SepGeometry {
        phi_deg,
        d1_km: get_f64(map, "d1_km")?,
        nu_kms,
        carrier_hz,
        elevation_deg: get_f64(map, "elevation_deg")?,
    };

    let k_states = get_u64(map, "k_states")? as usize;
    let rows_value = map
        .get("transition_matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Config("missing or non-array key 'transition_matrix'".into()))?;
    let mut rows = Vec::with_capacity(rows_value.len());
    for row in rows_value {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::Config("transition_matrix rows must be arrays".into()))?;
        rows.push(
            row.iter()
                .map(|v| {
                    v.as_f64()
                        .ok_or_else(|| CliError::Config("transition_matrix must contain numbers".into()))
                })
                .collect::<Result<Vec<f64>, _>>()?,
        );
    }
    let chain = TransitionMatrix::validate(rows)
        .map_err(|e| CliError::Config(format!("transition_matrix: {e}")))?;
    if chain.k() != k_states {
        return Err(CliError::Config(format!(
            "k_states ({k_states}) disagrees with the transition matrix ({} states)",
            chain.k()
        )));
    }

    let omegas = get_f64_array(map, "omega_states")?;
    if omegas.len() != k_states {
        return Err(CliError::Config(format!(
            "omega_states needs one entry per state ({k_states})"
        )));
    }
    let gamma = parse_gamma(map, phi_deg, &scint)?;
    let rate_threshold = get_f64(map, "rate_threshold_bpshz")?;
    let f_dop_hz = geometry::max_doppler(&geometry);
    let labels = state_labels(k_states);

    let states: Vec<StateDef> = (0..k_states)
        .map(|k| {
            // Static classification boundaries between neighboring mean
            // gains; the run result reports realized-percentile ones.
            let omega_threshold = if k == 0 {
                0.0
            } else {
                (omegas[k - 1] * omegas[k]).sqrt()
            };
            StateDef {
                index: k,
                label: labels[k].clone(),
                channel: RicianChannelParams {
                    omega: omegas[k],
                    k_factor: gamma,
                    f_dop_hz,
                    phi_deg,
                },
                omega_threshold,
                rate_threshold,
            }
        })
        .collect();

    let priorities = if map.contains_key("priorities") {
        let p = get_f64_array(map, "priorities")?;
        if p.len() != k_states {
            return Err(CliError::Config(format!(
                "priorities needs one entry per state ({k_states})"
            )));
        }
        Some(p)
    } else {
        None
    };

    let sample_period_s = get_f64(map, "sample_time_s")?;
    let tau_t_s = match map.get("tau_t_s") {
        Some(v) => v
            .as_f64()
            .ok_or_else(|| CliError::Config("tau_t_s must be a number".into()))?,
        None => n_samples as f64 * sample_period_s,
    };
    let span = n_samples as f64 * sample_period_s;
    if (span - tau_t_s).abs() > 1e-6 * tau_t_s.max(1.0) {
        return Err(CliError::Config(format!(
            "tau_t_s ({tau_t_s}) must equal n_samples * sample_time_s ({span})"
        )));
    }

    let block_samples = match map.get("block_samples") {
        Some(Value::Null) | None => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| {
            CliError::Config(format!("block_samples must be a positive integer (got {v})"))
        })? as usize),
    };

    let snr_db = parse_snr_grid(
        map.get("snr_db")
            .ok_or_else(|| CliError::Config("missing key 'snr_db'".into()))?,
    )?;

    let cfg = LinkConfig {
        modulation,
        n_samples,
        bandwidth_hz: get_f64(map, "bandwidth_hz")?,
        carrier_hz,
        sample_period_s,
        kappa: get_f64(map, "kappa")?,
        pathloss_exp: get_f64(map, "pathloss_exp")?,
        snr_db,
        geometry,
        scint,
        chain,
        states,
        priorities,
        s_csee_var: get_f64(map, "s_csee_var")?,
        rho_mw: get_f64(map, "rho_mw")?,
        n_sinusoids: get_u64(map, "n_sinusoids")? as usize,
        block_samples,
        seed: get_u64(map, "seed")?,
    };
    cfg.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;

    let d_s_km = geometry::distance_at_angle(&cfg.geometry)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let case = CaseSpec {
        case_id: get_str(map, "case_id")?.to_string(),
        nu_kms,
        phi_deg,
        d_s_km,
        gamma,
        tau_t_s,
        initial_state: get_u64(map, "initial_state")? as usize,
        rate_threshold,
    };
    case.validate_against(&cfg)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let angles = if map.contains_key("angle_min_deg") {
        let lo = get_f64(map, "angle_min_deg")?;
        let hi = get_f64(map, "angle_max_deg")?;
        let step = get_f64(map, "angle_step_deg")?;
        if !(step > 0.0 && hi >= lo) {
            return Err(CliError::Config("angle grid must have positive step and max >= min".into()));
        }
        let mut angles = Vec::new();
        let mut i = 0;
        loop {
            let a = lo + i as f64 * step;
            if a > hi + 1e-9 {
                break;
            }
            angles.push(a);
            i += 1;
        }
        angles
    } else {
        Vec::new()
    };

    let noise = NoiseModel {
        t_cmb_k: get_f64(map, "t_cmb_k")?,
        bandwidth_hz: cfg.bandwidth_hz,
        kappa: cfg.kappa,
        boltzmann: islsim_core::solar::BOLTZMANN_J_PER_K,
    };
    noise
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;

    Ok(RunSetup {
        cfg,
        case,
        angles,
        noise,
        resolved: map.clone(),
    })
}
