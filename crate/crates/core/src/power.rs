//! State-based power allocation.
//!
//! Transmit power is redistributed across channel states in proportion to
//! a priority weight per state, normalized over the measured state
//! durations so the total energy of a run is unchanged:
//! alpha_k = P_k tau_total / sum_j P_j tau_j.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::math::FloatExt;

/// A power allocation policy: one priority and one measured duration per
/// state, plus the baseline transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct SbpaPolicy {
    /// Priority weight per state (dimensionless, > 0).
    pub priorities: Vec<f64>,
    /// Measured duration per state in seconds.
    pub durations_s: Vec<f64>,
    /// Total duration in seconds; must equal the sum of `durations_s`.
    pub total_s: f64,
    /// Baseline transmit power rho (linear, interpreted in mW for dBm).
    pub rho: f64,
}

impl SbpaPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.priorities.len() != self.durations_s.len() {
            return Err(Error::Invalid(format!(
                "priorities ({}) and durations ({}) must have one entry per state",
                self.priorities.len(),
                self.durations_s.len()
            )));
        }
        if self.priorities.is_empty() {
            return Err(Error::Invalid("policy needs at least one state".into()));
        }
        if self.priorities.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::Invalid("all priorities must be > 0".into()));
        }
        if self.durations_s.iter().any(|&d| !(d >= 0.0)) {
            return Err(Error::Invalid("durations must be >= 0".into()));
        }
        let sum: f64 = self.durations_s.iter().sum();
        if (sum - self.total_s).abs() > 1e-9 * self.total_s.max(1.0) {
            return Err(Error::Invalid(format!(
                "total_s ({}) must equal the sum of durations ({sum})",
                self.total_s
            )));
        }
        Ok(())
    }
}

/// Per-state scale factors alpha_k = P_k tau_total / sum_j P_j tau_j.
///
/// The factors conserve energy over the run: sum_k alpha_k tau_k equals
/// tau_total as an algebraic identity. Fails when every duration is zero.
pub fn allocate(p: &SbpaPolicy) -> Result<Vec<f64>> {
    p.validate()?;
    let weighted: f64 = p
        .priorities
        .iter()
        .zip(&p.durations_s)
        .map(|(pr, d)| pr * d)
        .sum();
    if !(weighted > 0.0) {
        return Err(Error::DegenerateDurations);
    }
    Ok(p.priorities.iter().map(|pr| pr * p.total_s / weighted).collect())
}

/// Per-state transmit power in dBm: 10 log10(alpha_k rho) with rho in mW.
pub fn state_power_dbm(alpha_k: f64, rho_mw: f64) -> Result<f64> {
    let p = alpha_k * rho_mw;
    if !(p > 0.0) {
        return Err(Error::Domain("power must be positive for a dBm value"));
    }
    Ok(10.0 * p.log10())
}

/// Achievable rate of a state in bits/s/Hz: log2(1 + alpha rho omega / sigma2).
///
/// Base-2 logarithm so the result is commensurate with rate thresholds in
/// bits. `sigma2` must be positive.
pub fn state_rate(alpha_k: f64, rho: f64, omega_k: f64, sigma2: f64) -> f64 {
    (1.0 + alpha_k * rho * omega_k / sigma2).log2()
}

/// Full allocation report: scale factors, per-state dBm power, and the
/// nominal per-state rate at the given noise power.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub alpha: Vec<f64>,
    pub power_dbm: Vec<f64>,
    pub rate: Vec<f64>,
}

impl AllocationResult {
    /// Energy conservation residual |sum alpha_k tau_k - tau_total| / tau_total.
    pub fn conservation_residual(&self, p: &SbpaPolicy) -> f64 {
        let spent: f64 = self.alpha.iter().zip(&p.durations_s).map(|(a, d)| a * d).sum();
        (spent - p.total_s).abs() / p.total_s.max(f64::MIN_POSITIVE)
    }
}

/// Computes the allocation and evaluates power and nominal rate per state.
pub fn allocation_report(p: &SbpaPolicy, omegas: &[f64], sigma2: f64) -> Result<AllocationResult> {
    if omegas.len() != p.priorities.len() {
        return Err(Error::Invalid("one omega per state is required".into()));
    }
    let alpha = allocate(p)?;
    let power_dbm = alpha
        .iter()
        .map(|&a| state_power_dbm(a, p.rho))
        .collect::<Result<Vec<f64>>>()?;
    let rate = alpha
        .iter()
        .zip(omegas)
        .map(|(&a, &w)| state_rate(a, p.rho, w, sigma2))
        .collect();
    Ok(AllocationResult { alpha, power_dbm, rate })
}
