//! Parallel execution of prepared runs.
//!
//! Units are mapped over a rayon pool and folded in unit order, so the
//! result is bit-identical for any worker count.

use crate::CliError;
use islsim_core::sim::{
    angle_case, AngleSweepPoint, CaseSpec, LinkConfig, LinkRunResult, TimeVaryingRun, UnitStats,
};
use islsim_core::solar::scintillation_index;
use rayon::prelude::*;

fn pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot build worker pool: {e}")))
}

/// Runs one time-varying scenario on `workers` threads (0 = all cores).
pub fn run_case(
    cfg: &LinkConfig,
    case: &CaseSpec,
    use_sbpa: bool,
    workers: usize,
) -> Result<LinkRunResult, CliError> {
    let run = TimeVaryingRun::prepare(cfg, case, use_sbpa)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let stats: Vec<UnitStats> = pool(workers)?.install(|| {
        (0..run.unit_count())
            .into_par_iter()
            .map(|u| run.simulate_unit(u))
            .collect()
    });
    Ok(run.finalize(&stats))
}

/// Runs the SEP-angle sweep, parallelizing within each angle.
pub fn run_sweep(
    cfg: &LinkConfig,
    angles: &[f64],
    workers: usize,
) -> Result<Vec<AngleSweepPoint>, CliError> {
    let mut out = Vec::with_capacity(angles.len());
    for (i, &phi) in angles.iter().enumerate() {
        let (point_cfg, case) =
            angle_case(cfg, phi, i).map_err(|e| CliError::Runtime(e.to_string()))?;
        let result = run_case(&point_cfg, &case, false, workers)?;
        out.push(AngleSweepPoint {
            phi_deg: phi,
            m: scintillation_index(phi, &cfg.scint),
            k_factor: case.gamma,
            result,
        });
    }
    Ok(out)
}

/// The state-switched channel series of a scenario, for waveform dumps.
pub fn channel_series(cfg: &LinkConfig, case: &CaseSpec) -> Result<Vec<islsim_core::Complex64>, CliError> {
    let run = TimeVaryingRun::prepare(cfg, case, false)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(run.channel_gain_series())
}
