//! Satellite pair geometry, relativistic Doppler, and the Jakes spectrum.
//!
//! Two satellites fly in formation with a constant relative speed. The
//! line-of-sight angle toward the Sun (the SEP angle, phi) sets the pair
//! separation through `distance_at_angle`, and the relative motion sets the
//! Doppler shift of the carrier. The Doppler spread produces the classical
//! U-shaped Jakes power spectral density used by the fading generator.

use crate::error::{Error, Result};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::math::FloatExt;

/// Speed of light in m/s (exact).
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Geometry of a satellite pair link.
///
/// All angles are accepted in degrees at the API boundary and converted to
/// radians internally. `nu_kms` is the magnitude of the relative speed,
/// identical in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SepGeometry {
    /// SEP angle phi in degrees.
    pub phi_deg: f64,
    /// Closest-approach distance D1 in km.
    pub d1_km: f64,
    /// Relative speed magnitude in km/s.
    pub nu_kms: f64,
    /// Emitted carrier frequency in Hz.
    pub carrier_hz: f64,
    /// Elevation angle in degrees. Fixed to zero in every stock run; kept
    /// for configuration echo only.
    pub elevation_deg: f64,
}

impl SepGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.d1_km > 0.0) {
            return Err(Error::Invalid("d1_km must be > 0".into()));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(Error::Invalid("carrier_hz must be > 0".into()));
        }
        if !(self.nu_kms >= 0.0) {
            return Err(Error::Invalid("nu_kms must be >= 0".into()));
        }
        if !(self.phi_deg.abs() < 90.0) {
            return Err(Error::Invalid(
                "phi_deg magnitude must be < 90 (separation degenerates at 90 degrees)".into(),
            ));
        }
        Ok(())
    }

    fn nu_ms(&self) -> f64 {
        self.nu_kms * 1_000.0
    }
}

/// Pair separation D_s = D1 / cos(phi) in km.
///
/// D1 is the closest approach, reached when the pair is aligned with the
/// Sun (phi = 0); the separation grows toward the edge of the coverage arc.
pub fn distance_at_angle(g: &SepGeometry) -> Result<f64> {
    if g.phi_deg.abs() >= 90.0 {
        return Err(Error::Domain("separation is undefined for |phi| >= 90 degrees"));
    }
    Ok(g.d1_km / g.phi_deg.to_radians().cos())
}

/// Carrier frequency observed at the receiving satellite.
///
/// During approach the source closes at nu and the observed frequency is
/// f c / (c - nu); during recession it is f c / (c + nu).
pub fn observed_frequency(g: &SepGeometry, approach: bool) -> Result<f64> {
    let nu = g.nu_ms();
    if nu >= SPEED_OF_LIGHT_M_S {
        return Err(Error::Domain("relative speed must be below c"));
    }
    let denom = if approach {
        SPEED_OF_LIGHT_M_S - nu
    } else {
        SPEED_OF_LIGHT_M_S + nu
    };
    Ok(g.carrier_hz * SPEED_OF_LIGHT_M_S / denom)
}

/// Which reading of the transverse Doppler correction to use.
///
/// The squared-speed form feeds nu^2 cos(pi/2 - phi) into the velocity slot
/// of the longitudinal shift. It is dimensionally odd (m^2/s^2 where m/s is
/// expected) but kept selectable; `VelocityLinear` replaces it with
/// nu cos(pi/2 - phi), which is the consistent reading and the default in
/// the stock configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransverseModel {
    SquaredSpeed,
    VelocityLinear,
}

/// Observed frequency with the transverse (angular) correction, using the
/// squared-speed reading. See [`transverse_observed_frequency_with`].
pub fn transverse_observed_frequency(g: &SepGeometry, approach: bool) -> Result<f64> {
    transverse_observed_frequency_with(g, approach, TransverseModel::SquaredSpeed)
}

/// Observed frequency with the transverse correction under the chosen model.
///
/// The effective closing speed is nu^2 cos(pi/2 - phi) or
/// nu cos(pi/2 - phi); at phi = 0 the geometry is purely transverse and the
/// first-order shift vanishes.
pub fn transverse_observed_frequency_with(
    g: &SepGeometry,
    approach: bool,
    model: TransverseModel,
) -> Result<f64> {
    let nu = g.nu_ms();
    if nu >= SPEED_OF_LIGHT_M_S {
        return Err(Error::Domain("relative speed must be below c"));
    }
    let angular = (core::f64::consts::FRAC_PI_2 - g.phi_deg.to_radians()).cos();
    let effective = match model {
        TransverseModel::SquaredSpeed => nu * nu * angular,
        TransverseModel::VelocityLinear => nu * angular,
    };
    if effective.abs() >= SPEED_OF_LIGHT_M_S {
        return Err(Error::Domain("effective closing speed reaches c"));
    }
    let denom = if approach {
        SPEED_OF_LIGHT_M_S - effective
    } else {
        SPEED_OF_LIGHT_M_S + effective
    };
    Ok(g.carrier_hz * SPEED_OF_LIGHT_M_S / denom)
}

/// Maximum Doppler shift nu f / c in Hz.
pub fn max_doppler(g: &SepGeometry) -> f64 {
    g.nu_ms() * g.carrier_hz / SPEED_OF_LIGHT_M_S
}

/// Jakes power spectral density S(f) = 1 / sqrt(1 - (f / f_max)^2).
///
/// Defined on the open interval |f| < f_max; diverges at the band edge.
pub fn jakes_psd(f_hz: f64, f_dop_max_hz: f64) -> Result<f64> {
    if !(f_dop_max_hz > 0.0) {
        return Err(Error::Domain("jakes psd needs a positive maximum Doppler"));
    }
    let r = f_hz / f_dop_max_hz;
    if r.abs() >= 1.0 {
        return Err(Error::Domain("jakes psd support is |f| < f_dop_max"));
    }
    Ok(1.0 / (1.0 - r * r).sqrt())
}

/// Doppler band of a link: the extreme shifts and the spectral density
/// between them.
#[derive(Debug, Clone, PartialEq)]
pub struct DopplerSpec {
    /// Maximum Doppler shift, reached entering the coverage arc, in Hz.
    pub f_dop_max_hz: f64,
    /// Minimum Doppler shift, reached at closest approach, in Hz.
    pub f_dop_min_hz: f64,
}

impl DopplerSpec {
    /// Derives the band from the pair geometry. With a constant speed
    /// magnitude the maximum is nu f / c and the minimum is zero: at
    /// closest approach the motion is purely transverse, so the
    /// first-order shift vanishes.
    pub fn from_geometry(g: &SepGeometry) -> Self {
        DopplerSpec {
            f_dop_max_hz: max_doppler(g),
            f_dop_min_hz: 0.0,
        }
    }

    /// S(f) on the open support |f| < f_dop_max.
    pub fn psd(&self, f_hz: f64) -> Result<f64> {
        jakes_psd(f_hz, self.f_dop_max_hz)
    }
}
