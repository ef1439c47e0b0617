//! End-to-end Monte Carlo link simulation.
//!
//! A run sweeps a grid of SNR points over one channel scenario: 4QAM
//! symbols pass through the state-dependent Rician channel with hardware
//! distortion and thermal noise, a zero-forcing detector with perfect
//! instantaneous CSI recovers the bits, and the harness measures bit error
//! rate, outage probability, and mean achievable rate per SNR point.
//!
//! Transmit power is held at the unit baseline and the SNR axis sweeps the
//! noise power, so state-based power allocation scales cleanly per state
//! and distortion keeps a fixed ratio to signal power. The free-space path
//! loss is a deterministic dB offset and is reported in run metadata
//! rather than folded into the axis.
//!
//! The sample space is partitioned into (SNR point, coherence block)
//! units. Every unit derives its own random substreams from the root seed
//! and its indices, so units can be simulated in any order on any number
//! of workers with bit-identical results. Fading substreams are labeled by
//! state only, and bit, noise, and distortion substreams by unit only:
//! runs that differ only in power allocation therefore see identical
//! channel realizations and identical draws, making allocation
//! comparisons paired.

use crate::error::{Error, Result};
use crate::fading::{RicianChannelParams, RicianFader, SosConfig};
use crate::geometry::{self, SepGeometry};
use crate::markov::{
    self, generate_sequence, StateDef, StateSequence, TransitionMatrix,
};
use crate::power::{allocate, state_power_dbm, AllocationResult, SbpaPolicy};
use crate::rng::{domain, mix_seed, Substream};
use crate::solar::{k_factor_at_angle, KFactor, ScintillationParams};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::math::FloatExt;

use core::f64::consts::FRAC_1_SQRT_2;

/// Channel gains below this magnitude are treated as erasures by the
/// detector and counted at the random-guess error rate.
pub const ERASURE_GAIN: f64 = 1e-12;

/// Reference block length in samples at the reference relative speed.
const BLOCK_REF_SAMPLES: f64 = 1_000.0;
const BLOCK_REF_SPEED_KMS: f64 = 2.0;

/// Modulation scheme. The simulator is built around Gray-mapped 4QAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Qam4,
}

#[inline]
fn qam4_symbol(b0: u8, b1: u8) -> Complex64 {
    let re = if b0 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    let im = if b1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    Complex64::new(re, im)
}

#[inline]
fn qam4_decide(y: Complex64) -> (u8, u8) {
    (u8::from(y.re < 0.0), u8::from(y.im < 0.0))
}

/// Maps a bit stream onto unit-energy Gray-mapped 4QAM symbols.
///
/// Dibit 00 maps to (+1+j)/sqrt(2); the first bit selects the real sign,
/// the second the imaginary sign, so neighboring symbols differ in one bit.
pub fn qam4_modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    if bits.len() % 2 != 0 {
        return Err(Error::OddBitCount(bits.len()));
    }
    Ok(bits
        .chunks_exact(2)
        .map(|d| qam4_symbol(d[0], d[1]))
        .collect())
}

/// Hard-decision Gray demapping of 4QAM symbols.
pub fn qam4_demodulate(symbols: &[Complex64]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(symbols.len() * 2);
    for &s in symbols {
        let (b0, b1) = qam4_decide(s);
        bits.push(b0);
        bits.push(b1);
    }
    bits
}

/// Passes symbols through the channel: y = sqrt(rho) h (x + eta) + w with
/// hardware distortion eta ~ CN(0, kappa^2 rho) and additive noise
/// w ~ CN(0, noise_power). Streams must be aligned sample for sample.
pub fn transmit(
    x: &[Complex64],
    h: &[Complex64],
    rho: f64,
    kappa: f64,
    noise_power: f64,
    rng: &mut Substream,
) -> Vec<Complex64> {
    assert_eq!(x.len(), h.len(), "symbol and channel streams must be aligned");
    let sqrt_rho = rho.sqrt();
    let dist_var = kappa * kappa * rho;
    x.iter()
        .zip(h)
        .map(|(&xi, &hi)| {
            let eta = rng.complex_gaussian(dist_var);
            let w = rng.complex_gaussian(noise_power);
            hi * (xi + eta) * sqrt_rho + w
        })
        .collect()
}

/// Output of the zero-forcing detector.
#[derive(Debug, Clone, PartialEq)]
pub struct Detected {
    pub bits: Vec<u8>,
    /// Bits whose channel gain was numerically zero; they carry a 0.5
    /// error contribution each instead of a decision.
    pub erased_bits: usize,
}

/// One-tap zero-forcing equalization with perfect instantaneous CSI,
/// followed by minimum-distance 4QAM decisions.
pub fn equalize_and_detect(y: &[Complex64], h: &[Complex64], rho: f64) -> Detected {
    assert_eq!(y.len(), h.len(), "received and channel streams must be aligned");
    let sqrt_rho = rho.sqrt();
    let mut bits = Vec::with_capacity(y.len() * 2);
    let mut erased = 0;
    for (&yi, &hi) in y.iter().zip(h) {
        if hi.norm_sqr() < ERASURE_GAIN * ERASURE_GAIN {
            bits.push(0);
            bits.push(0);
            erased += 2;
            continue;
        }
        let (b0, b1) = qam4_decide(yi / (hi * sqrt_rho));
        bits.push(b0);
        bits.push(b1);
    }
    Detected {
        bits,
        erased_bits: erased,
    }
}

/// Fraction of entries strictly below the threshold.
pub fn measure_outage(rates: &[f64], threshold: f64) -> f64 {
    assert!(!rates.is_empty(), "outage needs a non-empty rate series");
    rates.iter().filter(|&&r| r < threshold).count() as f64 / rates.len() as f64
}

/// Full configuration of one link simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub modulation: Modulation,
    /// Total channel uses per SNR point.
    pub n_samples: usize,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    pub sample_period_s: f64,
    /// Hardware noise level kappa.
    pub kappa: f64,
    /// Path loss distance exponent, reported in the link budget.
    pub pathloss_exp: f64,
    /// SNR grid in dB; the axis is baseline transmit power over noise power.
    pub snr_db: Vec<f64>,
    pub geometry: SepGeometry,
    pub scint: ScintillationParams,
    pub chain: TransitionMatrix,
    /// Per-state definitions ordered by index (worst first).
    pub states: Vec<StateDef>,
    /// Allocation priorities per state; `None` restricts the run to
    /// uniform power.
    pub priorities: Option<Vec<f64>>,
    /// Variance of the synthetic transition-matrix estimation error.
    pub s_csee_var: f64,
    /// Baseline transmit power in mW, used for dBm reporting.
    pub rho_mw: f64,
    pub n_sinusoids: usize,
    /// Coherence block length override in samples.
    pub block_samples: Option<usize>,
    pub seed: u64,
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 10_000 {
            return Err(Error::Invalid(format!(
                "n_samples must be >= 10^4 for statistical output (got {})",
                self.n_samples
            )));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Invalid("snr_db grid must be non-empty".into()));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::Invalid("bandwidth_hz must be > 0".into()));
        }
        if !(self.sample_period_s > 0.0) {
            return Err(Error::Invalid("sample_period_s must be > 0".into()));
        }
        if !(self.kappa >= 0.0) {
            return Err(Error::Invalid("kappa must be >= 0".into()));
        }
        if !(self.rho_mw > 0.0) {
            return Err(Error::Invalid("rho_mw must be > 0".into()));
        }
        if !(self.s_csee_var >= 0.0) {
            return Err(Error::Invalid("s_csee_var must be >= 0".into()));
        }
        self.geometry.validate()?;
        if (self.carrier_hz - self.geometry.carrier_hz).abs() > 1e-6 * self.carrier_hz.abs() {
            return Err(Error::Invalid(
                "carrier_hz must match the geometry carrier".into(),
            ));
        }
        self.scint.validate()?;
        markov::validate_states(&self.states)?;
        if self.chain.k() != self.states.len() {
            return Err(Error::Invalid(format!(
                "transition matrix has {} states but {} state definitions were given",
                self.chain.k(),
                self.states.len()
            )));
        }
        if let Some(p) = &self.priorities {
            if p.len() != self.states.len() {
                return Err(Error::Invalid("one priority per state is required".into()));
            }
            if p.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::Invalid("priorities must be > 0".into()));
            }
        }
        SosConfig {
            n_sinusoids: self.n_sinusoids,
            f_dop_max_hz: 0.0,
            sample_period_s: self.sample_period_s,
            seed: self.seed,
        }
        .validate()?;
        if let Some(b) = self.block_samples {
            if b == 0 {
                return Err(Error::Invalid("block_samples must be > 0".into()));
            }
        }
        Ok(())
    }

    /// Coherence block length: faster relative motion shortens the block,
    /// so the same wall-clock span carries more Markov steps.
    pub fn block_len(&self) -> usize {
        if let Some(b) = self.block_samples {
            return b;
        }
        let nu = self.geometry.nu_kms;
        let len = if nu > 0.0 {
            (BLOCK_REF_SAMPLES * BLOCK_REF_SPEED_KMS / nu).round() as usize
        } else {
            BLOCK_REF_SAMPLES as usize
        };
        len.clamp(50, 50_000).min(self.n_samples.max(1))
    }
}

/// Scenario description for one time-varying run.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub case_id: String,
    pub nu_kms: f64,
    pub phi_deg: f64,
    pub d_s_km: f64,
    pub gamma: KFactor,
    pub tau_t_s: f64,
    pub initial_state: usize,
    pub rate_threshold: f64,
}

impl CaseSpec {
    /// Checks that the scenario is consistent with the link configuration.
    pub fn validate_against(&self, cfg: &LinkConfig) -> Result<()> {
        if self.initial_state >= cfg.states.len() {
            return Err(Error::Invalid(format!(
                "initial_state {} out of range for {} states",
                self.initial_state,
                cfg.states.len()
            )));
        }
        if (self.phi_deg - cfg.geometry.phi_deg).abs() > 1e-9 {
            return Err(Error::Invalid("case phi_deg disagrees with geometry".into()));
        }
        if (self.nu_kms - cfg.geometry.nu_kms).abs() > 1e-9 {
            return Err(Error::Invalid("case nu_kms disagrees with geometry".into()));
        }
        let d_s = geometry::distance_at_angle(&cfg.geometry)?;
        if (d_s - self.d_s_km).abs() > 0.01 {
            return Err(Error::Invalid(format!(
                "case d_s_km ({}) disagrees with the geometry separation ({d_s:.3})",
                self.d_s_km
            )));
        }
        let span = cfg.n_samples as f64 * cfg.sample_period_s;
        if (span - self.tau_t_s).abs() > 1e-6 * self.tau_t_s.max(1.0) {
            return Err(Error::Invalid(format!(
                "tau_t_s ({}) must equal n_samples * sample_period ({span})",
                self.tau_t_s
            )));
        }
        Ok(())
    }
}

/// Stable numeric label for a scenario, mixed into substream derivation.
pub fn case_label(case_id: &str) -> u64 {
    let mut words = Vec::with_capacity(case_id.len() / 8 + 1);
    let mut acc = 0u64;
    for (i, b) in case_id.bytes().enumerate() {
        acc = (acc << 8) | b as u64;
        if i % 8 == 7 {
            words.push(acc);
            acc = 0;
        }
    }
    words.push(acc);
    words.push(case_id.len() as u64);
    mix_seed(0x6c61_6265_6c00_0000, &words)
}

/// Measurements at one SNR grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrPointResult {
    pub snr_db: f64,
    pub ber: f64,
    /// Half-width of the 95 percent binomial confidence interval.
    pub ber_ci95: f64,
    pub outage_probability: f64,
    pub capacity_bps_hz: f64,
    /// Measured received SNR including distortion, in dB.
    pub received_sinr_db: f64,
}

/// Result of one link run.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkRunResult {
    pub points: Vec<SnrPointResult>,
    pub state_series: StateSequence,
    /// Mean channel gain per coherence block.
    pub omega_series: Vec<f64>,
    /// Gain classification boundaries derived from the realized gain
    /// distribution (lower edge per state).
    pub omega_thresholds: Vec<f64>,
    /// Allocation in effect, present for state-based power runs.
    pub alloc: Option<AllocationResult>,
    /// Mean measured rate per state, averaged over the whole grid.
    pub per_state_mean_rate: Vec<f64>,
    pub block_samples: usize,
}

/// Statistics of one (SNR point, block) unit.
#[derive(Debug, Clone, Default)]
pub struct UnitStats {
    pub snr_idx: usize,
    pub block_idx: usize,
    pub state: usize,
    pub bit_errors: f64,
    pub bits: u64,
    pub erased_bits: u64,
    pub outage_samples: u64,
    pub samples: u64,
    pub sum_rate: f64,
    pub sum_gain: f64,
    pub sum_signal: f64,
    pub sum_signal_sq: f64,
}

/// A prepared time-varying run.
///
/// `simulate_unit` is a pure function of the prepared state and the unit
/// index; units may be evaluated in any order and on any number of
/// workers, and `finalize` folds them in index order so the result is
/// identical regardless of scheduling.
pub struct TimeVaryingRun {
    cfg: LinkConfig,
    case: CaseSpec,
    label: u64,
    sequence: StateSequence,
    alpha: Vec<f64>,
    faders: Vec<RicianFader>,
    sigma2: Vec<f64>,
    alloc: Option<AllocationResult>,
    block_len: usize,
    n_blocks: usize,
}

impl TimeVaryingRun {
    pub fn prepare(cfg: &LinkConfig, case: &CaseSpec, use_sbpa: bool) -> Result<Self> {
        cfg.validate()?;
        case.validate_against(cfg)?;
        case.gamma.validate()?;

        let label = case_label(&case.case_id);
        let block_len = cfg.block_len();
        let n_blocks = cfg.n_samples.div_ceil(block_len);
        let step_s = block_len as f64 * cfg.sample_period_s;

        // Physical state trajectory.
        let mut state_rng = Substream::new(cfg.seed, &[domain::STATES, label]);
        let sequence = generate_sequence(&cfg.chain, case.initial_state, n_blocks, step_s, &mut state_rng);

        let (alpha, alloc) = if use_sbpa {
            let priorities = cfg
                .priorities
                .clone()
                .ok_or_else(|| Error::Invalid("state-based power needs priorities".into()))?;
            // Calibration pass: the transmitter estimates the chain, walks
            // it over the same horizon, and measures state durations. With
            // zero estimation error the estimate equals the true chain and
            // the calibration trajectory is the physical one.
            let mut est_rng = Substream::new(cfg.seed, &[domain::ESTIMATION, label]);
            let estimated = markov::with_estimation_error(&cfg.chain, cfg.s_csee_var, &mut est_rng)?;
            let mut cal_rng = Substream::new(cfg.seed, &[domain::STATES, label]);
            let calibration =
                generate_sequence(&estimated, case.initial_state, n_blocks, step_s, &mut cal_rng);
            let policy = SbpaPolicy {
                priorities,
                durations_s: (0..cfg.states.len()).map(|k| calibration.dwell_s(k)).collect(),
                total_s: calibration.total_s(),
                rho: 1.0,
            };
            let alpha = allocate(&policy)?;
            let power_dbm = alpha
                .iter()
                .map(|&a| state_power_dbm(a, cfg.rho_mw))
                .collect::<Result<Vec<f64>>>()?;
            let alloc = AllocationResult {
                alpha: alpha.clone(),
                power_dbm,
                rate: vec![0.0; alpha.len()],
            };
            (alpha, Some(alloc))
        } else {
            (vec![1.0; cfg.states.len()], None)
        };

        let faders = cfg
            .states
            .iter()
            .map(|s| {
                let sos = SosConfig {
                    n_sinusoids: cfg.n_sinusoids,
                    f_dop_max_hz: s.channel.f_dop_hz,
                    sample_period_s: cfg.sample_period_s,
                    seed: cfg.seed,
                };
                RicianFader::new(&s.channel, &sos, &[label, s.index as u64])
            })
            .collect();

        let sigma2 = cfg
            .snr_db
            .iter()
            .map(|&db| crate::math::db_to_linear(-db))
            .collect();

        Ok(TimeVaryingRun {
            cfg: cfg.clone(),
            case: case.clone(),
            label,
            sequence,
            alpha,
            faders,
            sigma2,
            alloc,
            block_len,
            n_blocks,
        })
    }

    pub fn unit_count(&self) -> usize {
        self.cfg.snr_db.len() * self.n_blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn state_sequence(&self) -> &StateSequence {
        &self.sequence
    }

    pub fn config(&self) -> &LinkConfig {
        &self.cfg
    }

    pub fn case(&self) -> &CaseSpec {
        &self.case
    }

    /// The state-switched channel coefficient series for the whole run
    /// horizon, one value per sample.
    pub fn channel_gain_series(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.cfg.n_samples);
        for b in 0..self.n_blocks {
            let state = self.sequence.states[b];
            let start = b * self.block_len;
            let len = self.block_len.min(self.cfg.n_samples - start);
            let t0 = start as f64 * self.cfg.sample_period_s;
            let mut fader = self.faders[state].block_at(t0, self.cfg.sample_period_s);
            for _ in 0..len {
                out.push(fader.next_gain());
            }
        }
        out
    }

    /// Simulates one (SNR point, block) unit.
    pub fn simulate_unit(&self, unit: usize) -> UnitStats {
        let snr_idx = unit / self.n_blocks;
        let block_idx = unit % self.n_blocks;
        let state = self.sequence.states[block_idx];
        let def = &self.cfg.states[state];
        let rho = self.alpha[state];
        let sqrt_rho = rho.sqrt();
        let sigma2 = self.sigma2[snr_idx];
        let dist_var = self.cfg.kappa * self.cfg.kappa * rho;
        let threshold = def.rate_threshold;

        let unit = |dom: u64| {
            Substream::new(
                self.cfg.seed,
                &[dom, self.label, snr_idx as u64, block_idx as u64],
            )
        };
        let mut bit_rng = unit(domain::BITS);
        let mut dist_rng = unit(domain::DISTORTION);
        let mut noise_rng = unit(domain::NOISE);

        let start = block_idx * self.block_len;
        let len = self.block_len.min(self.cfg.n_samples - start);
        let t0 = start as f64 * self.cfg.sample_period_s;
        let mut fader = self.faders[state].block_at(t0, self.cfg.sample_period_s);

        let mut stats = UnitStats {
            snr_idx,
            block_idx,
            state,
            ..UnitStats::default()
        };

        let mut bit_cache: u64 = 0;
        let mut bits_left = 0u32;
        for _ in 0..len {
            if bits_left < 2 {
                bit_cache = bit_rng.next_u64();
                bits_left = 64;
            }
            let b0 = (bit_cache & 1) as u8;
            let b1 = ((bit_cache >> 1) & 1) as u8;
            bit_cache >>= 2;
            bits_left -= 2;

            let x = qam4_symbol(b0, b1);
            let h = fader.next_gain();
            let eta = dist_rng.complex_gaussian(dist_var);
            let w = noise_rng.complex_gaussian(sigma2);
            let y = h * (x + eta) * sqrt_rho + w;

            let g = h.norm_sqr();
            if g < ERASURE_GAIN * ERASURE_GAIN {
                stats.bit_errors += 1.0;
                stats.erased_bits += 2;
            } else {
                let (d0, d1) = qam4_decide(y / (h * sqrt_rho));
                stats.bit_errors += f64::from(u8::from(d0 != b0) + u8::from(d1 != b1));
            }
            stats.bits += 2;

            let rate = (1.0 + rho * g / sigma2).log2();
            stats.sum_rate += rate;
            if rate < threshold {
                stats.outage_samples += 1;
            }
            stats.samples += 1;
            stats.sum_gain += g;
            stats.sum_signal += rho * g;
            stats.sum_signal_sq += rho * rho * g;
        }
        stats
    }

    /// Folds unit statistics (in unit order) into the run result.
    pub fn finalize(&self, stats: &[UnitStats]) -> LinkRunResult {
        let n_snr = self.cfg.snr_db.len();
        let k = self.cfg.states.len();
        let mut errors = vec![0.0; n_snr];
        let mut bits = vec![0u64; n_snr];
        let mut outage = vec![0u64; n_snr];
        let mut samples = vec![0u64; n_snr];
        let mut rate = vec![0.0; n_snr];
        let mut signal = vec![0.0; n_snr];
        let mut signal_sq = vec![0.0; n_snr];
        let mut omega_series = vec![0.0; self.n_blocks];
        let mut state_rate = vec![0.0; k];
        let mut state_samples = vec![0u64; k];

        for s in stats {
            errors[s.snr_idx] += s.bit_errors;
            bits[s.snr_idx] += s.bits;
            outage[s.snr_idx] += s.outage_samples;
            samples[s.snr_idx] += s.samples;
            rate[s.snr_idx] += s.sum_rate;
            signal[s.snr_idx] += s.sum_signal;
            signal_sq[s.snr_idx] += s.sum_signal_sq;
            if s.snr_idx == 0 && s.samples > 0 {
                omega_series[s.block_idx] = s.sum_gain / s.samples as f64;
            }
            state_rate[s.state] += s.sum_rate;
            state_samples[s.state] += s.samples;
        }

        let points = (0..n_snr)
            .map(|i| {
                let n_bits = bits[i].max(1) as f64;
                let ber = errors[i] / n_bits;
                let n = samples[i].max(1) as f64;
                let sigma2 = self.sigma2[i];
                let dist = self.cfg.kappa * self.cfg.kappa * signal_sq[i];
                let sinr = signal[i] / (n * sigma2 + dist);
                SnrPointResult {
                    snr_db: self.cfg.snr_db[i],
                    ber,
                    ber_ci95: 1.96 * (ber * (1.0 - ber) / n_bits).sqrt(),
                    outage_probability: outage[i] as f64 / n,
                    capacity_bps_hz: rate[i] / n,
                    received_sinr_db: crate::math::linear_to_db(sinr),
                }
            })
            .collect();

        let per_state_mean_rate = state_rate
            .iter()
            .zip(&state_samples)
            .map(|(&r, &n)| if n > 0 { r / n as f64 } else { 0.0 })
            .collect();

        let mut alloc = self.alloc.clone();
        if let Some(a) = &mut alloc {
            a.rate = state_rate
                .iter()
                .zip(&state_samples)
                .map(|(&r, &n)| if n > 0 { r / n as f64 } else { 0.0 })
                .collect();
        }

        LinkRunResult {
            points,
            state_series: self.sequence.clone(),
            omega_thresholds: gain_thresholds(&omega_series, k),
            omega_series,
            alloc,
            per_state_mean_rate,
            block_samples: self.block_len,
        }
    }
}

/// Classification boundaries from the realized block-gain distribution:
/// the worst state opens at zero and the boundaries sit at the 10th and
/// 40th percentiles for three states, or at evenly spaced quantiles
/// otherwise.
pub fn gain_thresholds(omega_series: &[f64], k: usize) -> Vec<f64> {
    if k == 0 || omega_series.is_empty() {
        return Vec::new();
    }
    let mut sorted = omega_series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quantile = |q: f64| {
        let idx = (q * (sorted.len() - 1) as f64).round() as usize;
        sorted[idx]
    };
    let mut thresholds = Vec::with_capacity(k);
    thresholds.push(0.0);
    if k == 3 {
        thresholds.push(quantile(0.10));
        thresholds.push(quantile(0.40));
    } else {
        for i in 1..k {
            thresholds.push(quantile(i as f64 / k as f64));
        }
    }
    thresholds
}

/// Runs one time-varying scenario sequentially.
pub fn run_time_varying(cfg: &LinkConfig, case: &CaseSpec, use_sbpa: bool) -> Result<LinkRunResult> {
    let run = TimeVaryingRun::prepare(cfg, case, use_sbpa)?;
    let stats: Vec<UnitStats> = (0..run.unit_count()).map(|u| run.simulate_unit(u)).collect();
    Ok(run.finalize(&stats))
}

/// One angle of a SEP-angle sweep.
#[derive(Debug, Clone)]
pub struct AngleSweepPoint {
    pub phi_deg: f64,
    pub m: f64,
    pub k_factor: KFactor,
    pub result: LinkRunResult,
}

/// Builds the single-state configuration and scenario for one sweep angle.
pub fn angle_case(cfg: &LinkConfig, phi_deg: f64, index: usize) -> Result<(LinkConfig, CaseSpec)> {
    let mut point_cfg = cfg.clone();
    point_cfg.geometry.phi_deg = phi_deg;
    let k_factor = k_factor_at_angle(phi_deg, &cfg.scint)?;
    let base = cfg
        .states
        .first()
        .ok_or_else(|| Error::Invalid("sweep needs a state definition".into()))?;
    point_cfg.chain = TransitionMatrix::validate(vec![vec![1.0]])?;
    point_cfg.states = vec![StateDef {
        index: 0,
        label: "SINGLE".into(),
        channel: RicianChannelParams {
            omega: base.channel.omega,
            k_factor,
            f_dop_hz: geometry::max_doppler(&point_cfg.geometry),
            phi_deg,
        },
        omega_threshold: 0.0,
        rate_threshold: base.rate_threshold,
    }];
    point_cfg.priorities = None;
    let case = CaseSpec {
        case_id: format!("angle_{index}"),
        nu_kms: point_cfg.geometry.nu_kms,
        phi_deg,
        d_s_km: geometry::distance_at_angle(&point_cfg.geometry)?,
        gamma: k_factor,
        tau_t_s: point_cfg.n_samples as f64 * point_cfg.sample_period_s,
        initial_state: 0,
        rate_threshold: base.rate_threshold,
    };
    Ok((point_cfg, case))
}

/// Sweeps the SEP angle over `angles`, running a single-state link per
/// angle with the scintillation-derived K-factor, sequentially.
pub fn run_angle_sweep(cfg: &LinkConfig, angles: &[f64]) -> Result<Vec<AngleSweepPoint>> {
    let mut out = Vec::with_capacity(angles.len());
    for (i, &phi) in angles.iter().enumerate() {
        let (point_cfg, case) = angle_case(cfg, phi, i)?;
        let result = run_time_varying(&point_cfg, &case, false)?;
        out.push(AngleSweepPoint {
            phi_deg: phi,
            m: crate::solar::scintillation_index(phi, &cfg.scint),
            k_factor: case.gamma,
            result,
        });
    }
    Ok(out)
}
