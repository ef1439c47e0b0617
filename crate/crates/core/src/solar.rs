//! Solar scintillation and deterministic link-budget terms.
//!
//! When the line of sight between two satellites passes close to the Sun,
//! charged solar plasma scatters the carrier and the received intensity
//! fluctuates. The strength of the effect is summarized by the
//! scintillation index m in [0, 1]: m = 1 inside the eclipse band around
//! the Sun line, decaying exponentially with angular distance outside it.
//! The index maps one-to-one onto the Rician K-factor of the fading
//! envelope, so the whole solar geometry collapses into a single fading
//! parameter per SEP angle.
//!
//! The module also carries the deterministic budget terms: free-space path
//! loss and the thermal noise floor against the cosmic microwave
//! background.

use crate::error::{Error, Result};
use alloc::format;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::math::FloatExt;

/// Boltzmann constant in J/K (exact).
pub const BOLTZMANN_J_PER_K: f64 = 1.380_649e-23;

/// Mean cosmic microwave background temperature in kelvin.
pub const CMB_TEMPERATURE_K: f64 = 2.7255;

/// Coefficients of the angular scintillation profile.
///
/// `theta0_deg` is stored as a magnitude: the profile is even in the SEP
/// angle and the knee sits at |phi| = theta0 on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct ScintillationParams {
    /// Decay coefficient a1 (nominal 1.14, uncertainty +-0.09).
    pub a1: f64,
    /// Correction coefficient a2 (nominal 0.02, uncertainty +-0.02).
    pub a2: f64,
    /// Knee angle magnitude theta0 in degrees (nominal 1.3).
    pub theta0_deg: f64,
    /// Half-width of the affected angular band in degrees.
    pub xi_deg: f64,
}

impl Default for ScintillationParams {
    fn default() -> Self {
        ScintillationParams {
            a1: 1.14,
            a2: 0.02,
            theta0_deg: 1.3,
            xi_deg: 3.0,
        }
    }
}

impl ScintillationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a1 > self.a2 && self.a2 >= 0.0) {
            return Err(Error::Invalid(format!(
                "scintillation requires a1 > a2 >= 0 (got a1 = {}, a2 = {})",
                self.a1, self.a2
            )));
        }
        if !(self.theta0_deg > 0.0) {
            return Err(Error::Invalid("theta0_deg must be a positive magnitude".into()));
        }
        Ok(())
    }
}

/// Scintillation index m at SEP angle `phi_deg`.
///
/// m = 1 for |phi| <= theta0 and exp(-(a1 - a2)(|phi| - theta0)) beyond,
/// with the angle difference in degrees. The result is clamped to [0, 1];
/// it is even in phi, continuous at the knee, and non-increasing in |phi|.
pub fn scintillation_index(phi_deg: f64, p: &ScintillationParams) -> f64 {
    let excess = phi_deg.abs() - p.theta0_deg;
    if excess <= 0.0 {
        return 1.0;
    }
    (-(p.a1 - p.a2) * excess).exp().clamp(0.0, 1.0)
}

/// Rician K-factor: ratio of line-of-sight power to diffuse power.
///
/// `Infinite` marks a pure line-of-sight channel with no diffuse component;
/// downstream fading code branches to the deterministic path for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KFactor {
    Finite(f64),
    Infinite,
}

impl KFactor {
    pub fn is_infinite(&self) -> bool {
        matches!(self, KFactor::Infinite)
    }

    /// The linear value for finite factors.
    pub fn linear(&self) -> Option<f64> {
        match self {
            KFactor::Finite(k) => Some(*k),
            KFactor::Infinite => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KFactor::Finite(k) if !(*k >= 0.0) => {
                Err(Error::Invalid(format!("k-factor must be >= 0 (got {k})")))
            }
            _ => Ok(()),
        }
    }
}

impl core::fmt::Display for KFactor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KFactor::Finite(k) => write!(f, "{k}"),
            KFactor::Infinite => write!(f, "inf"),
        }
    }
}

/// K-factor from the scintillation index: sqrt(1 - m^2) / (1 - sqrt(1 - m^2)).
///
/// m = 1 (strongest scintillation) gives 0, a pure Rayleigh channel; m = 0
/// gives the infinite sentinel, a pure line-of-sight channel.
pub fn k_factor_from_m(m: f64) -> Result<KFactor> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain("scintillation index must lie in [0, 1]"));
    }
    if m == 0.0 {
        return Ok(KFactor::Infinite);
    }
    // s / (1 - s) with s = sqrt(1 - m^2), expanded as s (1 + s) / m^2 to
    // avoid the cancellation in 1 - s at small m.
    let s = ((1.0 - m) * (1.0 + m)).sqrt();
    Ok(KFactor::Finite(s * (1.0 + s) / (m * m)))
}

/// K-factor at a SEP angle: the composition of [`scintillation_index`]
/// and [`k_factor_from_m`].
pub fn k_factor_at_angle(phi_deg: f64, p: &ScintillationParams) -> Result<KFactor> {
    k_factor_from_m(scintillation_index(phi_deg, p))
}

/// Scintillation index from a K-factor; inverse of [`k_factor_from_m`].
pub fn m_from_k_factor(k: KFactor) -> f64 {
    match k {
        KFactor::Infinite => 0.0,
        // sqrt(1 - (g/(1+g))^2) = sqrt(1 + 2g) / (1 + g), which stays
        // accurate for large g.
        KFactor::Finite(g) => (1.0 + 2.0 * g).sqrt() / (1.0 + g),
    }
}

/// Free-space path loss in dB: 32.45 + 20 log10(f_MHz) + 20 log10(d_km).
pub fn free_space_path_loss(f_mhz: f64, d_km: f64) -> Result<f64> {
    if !(f_mhz > 0.0 && d_km > 0.0) {
        return Err(Error::Domain("path loss needs positive frequency and distance"));
    }
    Ok(32.45 + 20.0 * f_mhz.log10() + 20.0 * d_km.log10())
}

/// Path loss with a configurable distance exponent eta; eta = 2 recovers
/// [`free_space_path_loss`].
pub fn path_loss_with_exponent(f_mhz: f64, d_km: f64, eta: f64) -> Result<f64> {
    if !(f_mhz > 0.0 && d_km > 0.0) {
        return Err(Error::Domain("path loss needs positive frequency and distance"));
    }
    Ok(32.45 + 20.0 * f_mhz.log10() + 10.0 * eta * d_km.log10())
}

/// Receiver noise description: CMB floor plus hardware distortion level.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    /// Mean CMB temperature in kelvin.
    pub t_cmb_k: f64,
    /// Bandwidth B in Hz.
    pub bandwidth_hz: f64,
    /// Hardware noise level kappa (dimensionless).
    pub kappa: f64,
    /// Boltzmann constant in J/K, kept explicit for configuration echo.
    pub boltzmann: f64,
}

impl NoiseModel {
    pub fn new(bandwidth_hz: f64, kappa: f64) -> Self {
        NoiseModel {
            t_cmb_k: CMB_TEMPERATURE_K,
            bandwidth_hz,
            kappa,
            boltzmann: BOLTZMANN_J_PER_K,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_cmb_k > 0.0) {
            return Err(Error::Invalid("t_cmb_k must be > 0".into()));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::Invalid("bandwidth_hz must be > 0".into()));
        }
        if !(self.kappa >= 0.0) {
            return Err(Error::Invalid("kappa must be >= 0".into()));
        }
        Ok(())
    }
}

/// Thermal noise floor k_B T B in watts.
pub fn thermal_noise_floor(n: &NoiseModel) -> f64 {
    n.boltzmann * n.t_cmb_k * n.bandwidth_hz
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn index_is_one_inside_eclipse_band() {
        let p = ScintillationParams::default();
        assert_eq!(scintillation_index(0.0, &p), 1.0);
        assert_eq!(scintillation_index(1.3, &p), 1.0);
        assert_eq!(scintillation_index(-1.0, &p), 1.0);
    }

    #[test]
    fn index_decays_outside_band() {
        let p = ScintillationParams::default();
        // (a1 - a2)(2 - 1.3) = 1.12 * 0.7
        let m = scintillation_index(2.0, &p);
        assert_relative_eq!(m, (-1.12f64 * 0.7).exp(), max_relative = 1e-12);
        assert!((m - 0.4566).abs() < 1e-4);
        // Far from the Sun line scintillation is negligible.
        let far = scintillation_index(30.0, &p);
        assert!(far < 1e-13, "{far}");
    }

    #[test]
    fn index_even_and_continuous_at_knee() {
        let p = ScintillationParams::default();
        for phi in [0.3, 1.7, 2.9, 14.0] {
            assert_eq!(scintillation_index(phi, &p), scintillation_index(-phi, &p));
        }
        let just_in = scintillation_index(1.3 - 1e-9, &p);
        let just_out = scintillation_index(1.3 + 1e-9, &p);
        assert!((just_in - just_out).abs() < 1e-8);
    }

    #[test]
    fn k_factor_endpoints() {
        assert_eq!(k_factor_from_m(1.0).unwrap(), KFactor::Finite(0.0));
        assert_eq!(k_factor_from_m(0.0).unwrap(), KFactor::Infinite);
        assert!(k_factor_from_m(1.5).is_err());
        assert!(k_factor_from_m(-0.1).is_err());
    }

    #[test]
    fn k_factor_reference_point() {
        // m = 0.44397 corresponds to a K-factor of 8.6193.
        let k = k_factor_from_m(0.44397).unwrap().linear().unwrap();
        assert!((k - 8.6193).abs() < 1e-3, "{k}");
        // Invert: gamma / (1 + gamma) = 0.89604 recovers m.
        let m = m_from_k_factor(KFactor::Finite(8.6193));
        assert!((m - 0.44397).abs() < 1e-5, "{m}");
    }

    #[test]
    fn k_factor_round_trip_ten_digits() {
        // Below about 0.01 the index saturates so close to 1 that f64
        // cannot carry the round trip; the physical range is covered.
        for &g in &[0.01, 0.1, 1.0, 8.6193, 100.0, 1e6] {
            let m = m_from_k_factor(KFactor::Finite(g));
            let back = k_factor_from_m(m).unwrap().linear().unwrap();
            assert_relative_eq!(back, g, max_relative = 1e-10);
        }
    }

    #[test]
    fn k_factor_monotone_in_angle() {
        let p = ScintillationParams::default();
        let mut last = -1.0;
        for i in 0..=60 {
            let phi = i as f64 * 0.1;
            let k = match k_factor_from_m(scintillation_index(phi, &p)).unwrap() {
                KFactor::Finite(k) => k,
                KFactor::Infinite => f64::INFINITY,
            };
            assert!(k >= last, "k-factor must not decrease with |phi|");
            last = k;
        }
    }

    #[test]
    fn path_loss_values() {
        assert_relative_eq!(free_space_path_loss(1.0, 1.0).unwrap(), 32.45);
        let pl = free_space_path_loss(10_000.0, 60.0).unwrap();
        assert!((pl - 148.01).abs() < 0.01, "{pl}");
        let pl = free_space_path_loss(10_000.0, 69.28).unwrap();
        assert!((pl - 149.26).abs() < 0.01, "{pl}");
        assert!(free_space_path_loss(0.0, 60.0).is_err());
        assert!(free_space_path_loss(10.0, -1.0).is_err());
    }

    #[test]
    fn path_loss_doubling_rule() {
        let base = free_space_path_loss(5_000.0, 42.0).unwrap();
        let df = free_space_path_loss(10_000.0, 42.0).unwrap();
        let dd = free_space_path_loss(5_000.0, 84.0).unwrap();
        assert_relative_eq!(df - base, 6.0206, max_relative = 1e-4);
        assert_relative_eq!(dd - base, 6.0206, max_relative = 1e-4);
    }

    #[test]
    fn exponent_generalization_matches_at_two() {
        let a = free_space_path_loss(10_000.0, 60.0).unwrap();
        let b = path_loss_with_exponent(10_000.0, 60.0, 2.0).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
    }

    #[test]
    fn noise_floor_reference() {
        let n = NoiseModel::new(1e6, 0.05);
        let w = thermal_noise_floor(&n);
        assert!((w - 3.763e-17).abs() < 1e-20, "{w}");
        // About -134.24 dBm.
        let dbm = 10.0 * (w / 1e-3).log10();
        assert!((dbm + 134.24).abs() < 0.01, "{dbm}");
    }

    #[test]
    fn noise_floor_edge_cases() {
        let mut n = NoiseModel::new(0.0, 0.0);
        assert_eq!(thermal_noise_floor(&n), 0.0);
        // Linear in temperature: the stated uncertainty spreads the floor
        // by less than 5e-4 relative.
        n.bandwidth_hz = 1e6;
        n.t_cmb_k = 2.7261;
        let hi = thermal_noise_floor(&n);
        n.t_cmb_k = 2.7249;
        let lo = thermal_noise_floor(&n);
        assert!((hi - lo) / hi < 5e-4);
    }

    #[test]
    fn validation() {
        assert!(ScintillationParams::default().validate().is_ok());
        let bad = ScintillationParams {
            a1: 0.01,
            a2: 0.02,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ScintillationParams {
            theta0_deg: -1.3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(NoiseModel::new(1e6, 0.05).validate().is_ok());
        assert!(NoiseModel::new(-1.0, 0.05).validate().is_err());
        assert!(KFactor::Finite(-1.0).validate().is_err());
        assert!(KFactor::Infinite.validate().is_ok());
    }
}
