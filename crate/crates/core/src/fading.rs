//! Time-correlated Rician fading via the sum-of-sinusoids method.
//!
//! Each quadrature of the diffuse component is a sum of N cosines whose
//! angular rates are spread over a quadrant so that the process acquires
//! the Jakes spectrum; the autocorrelation converges to J0(2 pi f_max tau).
//! A deterministic line-of-sight phasor rotating at the Doppler shift is
//! mixed in according to the Rician K-factor, and the whole coefficient is
//! scaled so its mean power equals the configured path gain.
//!
//! Generators are pure functions of time once their phases are drawn, so
//! a fader can be evaluated at any instant from any worker. For tight
//! per-sample loops [`RicianFader::block_at`] returns a stepper that
//! advances the sinusoid phasors by complex rotation instead of calling
//! the trigonometric functions every sample.

use crate::error::{Error, Result};
use crate::math::sinc;
use crate::rng::{domain, Substream};
use crate::solar::KFactor;
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::math::FloatExt;

use core::f64::consts::PI;

/// Default number of sinusoids per quadrature.
pub const DEFAULT_SINUSOIDS: usize = 32;

/// Quadrature selector for the raw sum-of-sinusoids waveform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    InPhase,
    Quadrature,
}

/// Sum-of-sinusoids generator configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SosConfig {
    /// Sinusoids per quadrature. Fewer than 8 gives a visibly non-Gaussian
    /// envelope; `validate` enforces the floor, direct construction does not.
    pub n_sinusoids: usize,
    /// Maximum Doppler shift shaping the spectrum, in Hz.
    pub f_dop_max_hz: f64,
    /// Sample period in seconds.
    pub sample_period_s: f64,
    /// Root seed for phase draws.
    pub seed: u64,
}

impl SosConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sinusoids < 8 {
            return Err(Error::Invalid(format!(
                "n_sinusoids must be >= 8 (got {})",
                self.n_sinusoids
            )));
        }
        if !(self.sample_period_s > 0.0) {
            return Err(Error::Invalid("sample_period_s must be > 0".into()));
        }
        if !(self.f_dop_max_hz >= 0.0) {
            return Err(Error::Invalid("f_dop_max_hz must be >= 0".into()));
        }
        Ok(())
    }
}

/// A drawn sum-of-sinusoids process: two independent quadratures with
/// fixed angular rates and phases.
#[derive(Debug, Clone)]
pub struct SosGenerator {
    n: usize,
    /// Angular rates, in-phase quadrature then quadrature component.
    omega: Vec<f64>,
    /// Initial phases, same layout.
    psi: Vec<f64>,
}

impl SosGenerator {
    /// Draws phases and arrival angles from the substream identified by
    /// `(cfg.seed, label)`. The arrival angles of quadrature i are
    /// (2 pi n - pi + phi_i) / (4 N) for n = 1..N with one random rotation
    /// phi_i per quadrature, which tiles a quadrant and yields the J0
    /// autocorrelation; every sinusoid runs at f_max scaled by the cosine
    /// of its angle.
    pub fn new(cfg: &SosConfig, label: &[u64]) -> Self {
        let mut stream_label = Vec::with_capacity(label.len() + 1);
        stream_label.push(domain::FADING);
        stream_label.extend_from_slice(label);
        let mut rng = Substream::new(cfg.seed, &stream_label);

        let n = cfg.n_sinusoids;
        let mut omega = Vec::with_capacity(2 * n);
        let mut psi = Vec::with_capacity(2 * n);
        for _ in 0..2 {
            let rotation = rng.phase();
            for k in 1..=n {
                let theta = (2.0 * PI * k as f64 - PI + rotation) / (4.0 * n as f64);
                omega.push(2.0 * PI * cfg.f_dop_max_hz * theta.cos());
            }
            for _ in 0..n {
                psi.push(rng.phase());
            }
        }
        SosGenerator { n, omega, psi }
    }

    /// Raw waveform z_i(t) = sqrt(2/N) sum cos(omega_n t + psi_n).
    ///
    /// Each quadrature has unit mean power.
    pub fn waveform(&self, q: Quadrature, t: f64) -> f64 {
        let off = match q {
            Quadrature::InPhase => 0,
            Quadrature::Quadrature => self.n,
        };
        let mut acc = 0.0;
        for k in 0..self.n {
            acc += (self.omega[off + k] * t + self.psi[off + k]).cos();
        }
        (2.0 / self.n as f64).sqrt() * acc
    }

    /// Unit-power complex envelope (z1 + j z2) / sqrt(2).
    pub fn complex_envelope(&self, t: f64) -> Complex64 {
        let z1 = self.waveform(Quadrature::InPhase, t);
        let z2 = self.waveform(Quadrature::Quadrature, t);
        Complex64::new(z1, z2) * core::f64::consts::FRAC_1_SQRT_2
    }
}

/// Convenience form of the raw waveform: draws the generator once from the
/// configuration and evaluates it.
pub fn sos_waveform(cfg: &SosConfig, t: f64, q: Quadrature) -> f64 {
    SosGenerator::new(cfg, &[]).waveform(q, t)
}

/// Parameters of one Rician channel path.
#[derive(Debug, Clone, PartialEq)]
pub struct RicianChannelParams {
    /// Average path gain (linear power).
    pub omega: f64,
    /// Rician K-factor.
    pub k_factor: KFactor,
    /// Line-of-sight Doppler shift in Hz.
    pub f_dop_hz: f64,
    /// SEP angle this path belongs to, in degrees.
    pub phi_deg: f64,
}

impl RicianChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(Error::Invalid(format!("omega must be > 0 (got {})", self.omega)));
        }
        self.k_factor.validate()
    }
}

/// A Rician fading process: drawn diffuse component plus deterministic
/// line-of-sight phasor.
#[derive(Debug, Clone)]
pub struct RicianFader {
    sos: Option<SosGenerator>,
    n: usize,
    /// Per-phasor diffuse amplitude sqrt(omega / ((k + 1) N)).
    amp_diffuse: f64,
    /// Line-of-sight amplitude sqrt(omega k / (k + 1)).
    amp_los: f64,
    omega_los: f64,
}

impl RicianFader {
    /// Builds the fader for one path. The diffuse phases come from the
    /// substream `(cfg.seed, label)`; an infinite K-factor skips the
    /// diffuse component entirely.
    pub fn new(params: &RicianChannelParams, cfg: &SosConfig, label: &[u64]) -> Self {
        let omega_los = 2.0 * PI * params.f_dop_hz;
        match params.k_factor {
            KFactor::Infinite => RicianFader {
                sos: None,
                n: 0,
                amp_diffuse: 0.0,
                amp_los: params.omega.sqrt(),
                omega_los,
            },
            KFactor::Finite(k) => {
                let sos = SosGenerator::new(cfg, label);
                RicianFader {
                    n: sos.n,
                    amp_diffuse: (params.omega / ((k + 1.0) * sos.n as f64)).sqrt(),
                    amp_los: (params.omega * k / (k + 1.0)).sqrt(),
                    sos: Some(sos),
                    omega_los,
                }
            }
        }
    }

    /// Channel coefficient h(t) by direct evaluation.
    pub fn gain(&self, t: f64) -> Complex64 {
        let (s, c) = (self.omega_los * t).sin_cos();
        let mut h = Complex64::new(c, s) * self.amp_los;
        if let Some(sos) = &self.sos {
            // sqrt(omega/(k+1)) * (z1 + j z2)/sqrt(2) with the sinusoid
            // scale sqrt(2/N) folded into amp_diffuse.
            let z1 = sos.waveform(Quadrature::InPhase, t);
            let z2 = sos.waveform(Quadrature::Quadrature, t);
            let quad_scale = (self.n as f64 / 2.0).sqrt();
            h += Complex64::new(z1, z2) * (self.amp_diffuse * quad_scale);
        }
        h
    }

    /// Stepper producing gains at t0, t0 + dt, t0 + 2 dt, ... by phasor
    /// rotation. Agrees with [`RicianFader::gain`] to rounding error.
    pub fn block_at(&self, t0: f64, dt: f64) -> FaderBlock {
        let mut phasor = Vec::with_capacity(2 * self.n);
        let mut rot = Vec::with_capacity(2 * self.n);
        if let Some(sos) = &self.sos {
            for k in 0..2 * self.n {
                let (s, c) = (sos.omega[k] * t0 + sos.psi[k]).sin_cos();
                phasor.push(Complex64::new(c, s));
                let (s, c) = (sos.omega[k] * dt).sin_cos();
                rot.push(Complex64::new(c, s));
            }
        }
        let (s, c) = (self.omega_los * t0).sin_cos();
        let los = Complex64::new(c, s);
        let (s, c) = (self.omega_los * dt).sin_cos();
        FaderBlock {
            n: self.n,
            phasor,
            rot,
            los,
            los_rot: Complex64::new(c, s),
            amp_diffuse: self.amp_diffuse,
            amp_los: self.amp_los,
        }
    }
}

/// See [`RicianFader::block_at`].
#[derive(Debug, Clone)]
pub struct FaderBlock {
    n: usize,
    phasor: Vec<Complex64>,
    rot: Vec<Complex64>,
    los: Complex64,
    los_rot: Complex64,
    amp_diffuse: f64,
    amp_los: f64,
}

impl FaderBlock {
    /// Gain at the current instant, then advance one sample.
    pub fn next_gain(&mut self) -> Complex64 {
        let mut z1 = 0.0;
        let mut z2 = 0.0;
        for k in 0..self.n {
            z1 += self.phasor[k].re;
            z2 += self.phasor[self.n + k].re;
        }
        let h = Complex64::new(z1, z2) * self.amp_diffuse + self.los * self.amp_los;
        for (p, r) in self.phasor.iter_mut().zip(&self.rot) {
            *p *= *r;
        }
        self.los *= self.los_rot;
        h
    }
}

/// Rician channel coefficient at time `t` for a one-shot evaluation.
pub fn rician_cir(params: &RicianChannelParams, cfg: &SosConfig, t: f64) -> Complex64 {
    RicianFader::new(params, cfg, &[]).gain(t)
}

/// A band-limited tapped delay line with a common fractional path delay.
///
/// Tap d sits at delay d T_s + tau_p; the fractional part is realized by
/// sinc interpolation over the window [-N1, N2] around the output sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FirChannel {
    /// Complex tap gains, one per integer delay starting at zero.
    pub taps: Vec<Complex64>,
    /// Common path delay tau_p in seconds.
    pub path_delay_s: f64,
    /// Interpolation window (N1, N2): samples ahead and behind the output.
    pub window: (usize, usize),
    /// Input sample period T_s in seconds.
    pub sample_period_s: f64,
}

impl FirChannel {
    pub fn validate(&self) -> Result<()> {
        if self.taps.is_empty() {
            return Err(Error::Invalid("fir channel needs at least one tap".into()));
        }
        if !(self.sample_period_s > 0.0) {
            return Err(Error::Invalid("sample_period_s must be > 0".into()));
        }
        Ok(())
    }
}

/// Output sample y_i of the FIR channel applied to `samples`.
///
/// y_i = sum over n in [-N1, N2] of s_{i-n} times the interpolated tap
/// weight sum_d h_d sinc(d + tau_p / T_s - n). Requires the stream to
/// cover [i - N2, i + N1].
pub fn fir_apply(ch: &FirChannel, samples: &[Complex64], i: usize) -> Result<Complex64> {
    let (n1, n2) = ch.window;
    if i + n1 >= samples.len() || i < n2 {
        return Err(Error::WindowOutOfRange {
            index: i,
            len: samples.len(),
        });
    }
    let frac = ch.path_delay_s / ch.sample_period_s;
    let mut y = Complex64::new(0.0, 0.0);
    for n in -(n1 as i64)..=(n2 as i64) {
        let mut w = Complex64::new(0.0, 0.0);
        for (d, h) in ch.taps.iter().enumerate() {
            w += h * sinc(d as f64 + frac - n as f64);
        }
        y += samples[(i as i64 - n) as usize] * w;
    }
    Ok(y)
}

/// FIR taps whose magnitude response approximates the square root of the
/// Jakes spectrum, for shaping white Gaussian sequences into a fading
/// process as an alternative to the sum of sinusoids.
///
/// The power spectrum is averaged over each DFT bin (the band-edge
/// singularity integrates to a finite bin energy), the zero-phase square
/// root is transformed back, and the taps are centered and normalized to
/// unit energy so white noise keeps its power. Averaging on the same grid
/// the taps live on makes the filter's autocorrelation match the band's
/// exactly up to bin smoothing, with no truncation tail.
pub fn doppler_filter_taps(
    f_dop_max_hz: f64,
    sample_period_s: f64,
    n_taps: usize,
) -> Result<Vec<f64>> {
    if !(sample_period_s > 0.0) {
        return Err(Error::Precondition("sample period must be positive"));
    }
    if n_taps == 0 {
        return Err(Error::Precondition("need at least one tap"));
    }
    if !(f_dop_max_hz >= 0.0) {
        return Err(Error::Precondition("maximum Doppler must be non-negative"));
    }
    if f_dop_max_hz == 0.0 {
        return Ok(alloc::vec![1.0]);
    }
    if f_dop_max_hz >= 0.5 / sample_period_s {
        return Err(Error::Precondition("maximum Doppler must stay below Nyquist"));
    }

    let m = n_taps;
    let df = 1.0 / (m as f64 * sample_period_s);
    // Bin-averaged Jakes spectrum amplitude on the DFT grid;
    // integral of S over [lo, hi] is f_max (asin(hi/f_max) - asin(lo/f_max)).
    let mut amp = Vec::with_capacity(m / 2 + 1);
    for i in 0..=m / 2 {
        let f = i as f64 * df;
        let lo = (f - 0.5 * df).clamp(0.0, f_dop_max_hz);
        let hi = (f + 0.5 * df).clamp(0.0, f_dop_max_hz);
        let energy = f_dop_max_hz * (asin(hi / f_dop_max_hz) - asin(lo / f_dop_max_hz));
        amp.push((energy / df).sqrt());
    }
    // Zero-phase inverse transform of the even spectrum, centered.
    let shift = (m / 2) as i64;
    let mut taps = Vec::with_capacity(m);
    for j in 0..m {
        let n = j as i64 - shift;
        let mut acc = amp[0];
        for (i, &a) in amp.iter().enumerate().skip(1) {
            let w = if i == m - i { 1.0 } else { 2.0 };
            acc += w * a * (2.0 * PI * (i as i64 * n) as f64 / m as f64).cos();
        }
        taps.push(acc / m as f64);
    }
    let energy: f64 = taps.iter().map(|c| c * c).sum();
    let norm = energy.sqrt();
    for tap in &mut taps {
        *tap /= norm;
    }
    Ok(taps)
}

#[inline]
fn asin(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.asin()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::asin(x)
    }
}
