//! Finite-state Markov channel dynamics.
//!
//! Channel quality is quantized into K states, each carrying its own
//! Rician parameter set, and the state index evolves as a homogeneous
//! Markov chain. The canonical instantiation is the three-state
//! BAD / MODERATE / GOOD model with state indices 0, 1, 2.

use crate::error::{Error, Result};
use crate::fading::RicianChannelParams;
use crate::rng::Substream;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::math::FloatExt;

/// Tolerance for accepting a row sum as 1 before renormalizing.
const ROW_SUM_SLACK: f64 = 1e-9;

/// A validated K x K row-stochastic transition matrix.
///
/// Construction validates; the matrix is immutable afterwards, so
/// row-stochasticity holds for its entire lifetime.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    k: usize,
    rows: Vec<f64>,
}

impl TransitionMatrix {
    /// Validates `rows` as a probability matrix and returns it.
    ///
    /// Rows whose sum is off by less than 1e-9 are renormalized; anything
    /// worse is rejected with the offending row.
    pub fn validate(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::Invalid("transition matrix must be non-empty".into()));
        }
        let mut flat = Vec::with_capacity(k * k);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Invalid(format!(
                    "row {j} has {} entries, expected {k} (matrix must be square)",
                    row.len()
                )));
            }
            let mut sum = 0.0;
            for &p in row {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::NotStochastic { row: j, sum: p });
                }
                sum += p;
            }
            if (sum - 1.0).abs() >= ROW_SUM_SLACK {
                return Err(Error::NotStochastic { row: j, sum });
            }
            flat.extend(row.iter().map(|&p| p / sum));
        }
        Ok(TransitionMatrix { k, rows: flat })
    }

    /// Number of states K.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Transition probability from state `j` to state `k`.
    pub fn prob(&self, j: usize, k: usize) -> f64 {
        self.rows[j * self.k + k]
    }

    /// One row as a slice.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.rows[j * self.k..(j + 1) * self.k]
    }

    /// True when every state can reach every other through positive-
    /// probability transitions.
    fn is_irreducible(&self) -> bool {
        let reach = |transpose: bool| {
            let mut seen = vec![false; self.k];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(j) = stack.pop() {
                for t in 0..self.k {
                    let p = if transpose { self.prob(t, j) } else { self.prob(j, t) };
                    if p > 0.0 && !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(false) && reach(true)
    }
}

/// Stationary distribution p with p = p T and sum(p) = 1.
///
/// Solved directly by Gaussian elimination on the balance equations with
/// the normalization constraint substituted for the last equation. Fails
/// with [`Error::Reducible`] when the chain does not communicate or the
/// system is singular.
pub fn stationary_distribution(t: &TransitionMatrix) -> Result<Vec<f64>> {
    let k = t.k();
    if k == 1 {
        return Ok(vec![1.0]);
    }
    if !t.is_irreducible() {
        return Err(Error::Reducible);
    }
    // Rows of (T' - I) x = 0, last row replaced by sum(x) = 1.
    let mut a = vec![0.0; k * (k + 1)];
    let cols = k + 1;
    for r in 0..k - 1 {
        for c in 0..k {
            a[r * cols + c] = t.prob(c, r) - if r == c { 1.0 } else { 0.0 };
        }
    }
    for c in 0..k {
        a[(k - 1) * cols + c] = 1.0;
    }
    a[(k - 1) * cols + k] = 1.0;

    // Gaussian elimination with partial pivoting.
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| {
                a[i * cols + col]
                    .abs()
                    .partial_cmp(&a[j * cols + col].abs())
                    .unwrap()
            })
            .unwrap();
        if a[pivot * cols + col].abs() < 1e-12 {
            return Err(Error::Reducible);
        }
        if pivot != col {
            for c in 0..cols {
                a.swap(col * cols + c, pivot * cols + c);
            }
        }
        let diag = a[col * cols + col];
        for r in 0..k {
            if r == col {
                continue;
            }
            let factor = a[r * cols + col] / diag;
            if factor != 0.0 {
                for c in col..cols {
                    a[r * cols + c] -= factor * a[col * cols + c];
                }
            }
        }
    }
    let mut p: Vec<f64> = (0..k).map(|r| a[r * cols + k] / a[r * cols + r]).collect();
    let sum: f64 = p.iter().sum();
    for x in &mut p {
        *x /= sum;
    }
    // Residual check: the solution must satisfy the balance equations.
    for c in 0..k {
        let balance: f64 = (0..k).map(|j| p[j] * t.prob(j, c)).sum();
        if (balance - p[c]).abs() > 1e-10 || !(p[c] >= 0.0) {
            return Err(Error::Reducible);
        }
    }
    Ok(p)
}

/// One channel state: label, per-state Rician parameters, and the
/// thresholds used for gain classification and outage.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDef {
    /// State index; 0 is the worst state.
    pub index: usize,
    /// Human-readable label such as BAD, MODERATE, GOOD.
    pub label: String,
    /// Fading parameters active while the chain sits in this state.
    pub channel: RicianChannelParams,
    /// Lower gain boundary of this state's classification interval.
    pub omega_threshold: f64,
    /// Outage rate threshold in bits/s/Hz.
    pub rate_threshold: f64,
}

/// Validates a full state set: indices must be a permutation of 0..K-1 and
/// classification boundaries strictly increasing with state quality.
pub fn validate_states(defs: &[StateDef]) -> Result<()> {
    let k = defs.len();
    if k == 0 {
        return Err(Error::Invalid("at least one state is required".into()));
    }
    let mut seen = vec![false; k];
    for d in defs {
        if d.index >= k || seen[d.index] {
            return Err(Error::Invalid(format!(
                "state indices must be a permutation of 0..{k}"
            )));
        }
        seen[d.index] = true;
        d.channel.validate()?;
    }
    for w in defs.windows(2) {
        if !(w[1].omega_threshold > w[0].omega_threshold) {
            return Err(Error::Invalid(
                "omega thresholds must increase strictly with state quality".into(),
            ));
        }
    }
    Ok(())
}

/// A realized state trajectory with per-state dwell accounting.
///
/// Dwell times are stored as step counts so the identity
/// sum_k dwell_k = total holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSequence {
    /// State index at each step.
    pub states: Vec<usize>,
    dwell_steps: Vec<u64>,
    step_duration_s: f64,
}

impl StateSequence {
    pub fn n_steps(&self) -> usize {
        self.states.len()
    }

    pub fn step_duration_s(&self) -> f64 {
        self.step_duration_s
    }

    /// Accumulated duration in state `k`, in seconds.
    pub fn dwell_s(&self, k: usize) -> f64 {
        self.dwell_steps[k] as f64 * self.step_duration_s
    }

    /// Dwell step counts per state.
    pub fn dwell_steps(&self) -> &[u64] {
        &self.dwell_steps
    }

    /// Total duration in seconds.
    pub fn total_s(&self) -> f64 {
        self.states.len() as f64 * self.step_duration_s
    }

    /// Number of steps that changed state.
    pub fn transition_count(&self) -> usize {
        self.states.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Generates `n_steps` states of the memoryless homogeneous chain,
/// starting from `initial` (which is the state at step 0).
pub fn generate_sequence(
    t: &TransitionMatrix,
    initial: usize,
    n_steps: usize,
    step_duration_s: f64,
    rng: &mut Substream,
) -> StateSequence {
    assert!(initial < t.k(), "initial state out of range");
    let mut states = Vec::with_capacity(n_steps);
    let mut dwell = vec![0u64; t.k()];
    let mut current = initial;
    for _ in 0..n_steps {
        states.push(current);
        dwell[current] += 1;
        let u = rng.uniform();
        let row = t.row(current);
        let mut acc = 0.0;
        let mut next = t.k() - 1;
        for (s, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                next = s;
                break;
            }
        }
        current = next;
    }
    StateSequence {
        states,
        dwell_steps: dwell,
        step_duration_s,
    }
}

/// Mean sojourn of state `k` in steps: 1 / (1 - t_kk).
pub fn mean_sojourn(t: &TransitionMatrix, k: usize) -> Result<f64> {
    let stay = t.prob(k, k);
    if stay >= 1.0 {
        return Err(Error::Absorbing { state: k });
    }
    Ok(1.0 / (1.0 - stay))
}

/// Classifies a channel gain into a state by its threshold interval.
///
/// State k covers [omega_threshold_k, omega_threshold_{k+1}); gains below
/// the lowest boundary fall into state 0 and boundary values resolve
/// upward, so the intervals tile (0, infinity).
pub fn classify_gain(omega: f64, defs: &[StateDef]) -> usize {
    let mut state = 0;
    for d in defs {
        if omega >= d.omega_threshold {
            state = d.index;
        }
    }
    state
}

/// Applies synthetic estimation error to a known transition matrix:
/// independent zero-mean Gaussian perturbations of variance `sigma2` on
/// each entry, clamped to [0, 1] and renormalized per row. With
/// `sigma2 = 0` the matrix is returned unchanged.
pub fn with_estimation_error(
    t: &TransitionMatrix,
    sigma2: f64,
    rng: &mut Substream,
) -> Result<TransitionMatrix> {
    if sigma2 == 0.0 {
        return Ok(t.clone());
    }
    let sd = sigma2.sqrt();
    let k = t.k();
    let mut rows = Vec::with_capacity(k);
    for j in 0..k {
        let mut row = Vec::with_capacity(k);
        for c in 0..k {
            let (g, _) = rng.gaussian_pair();
            row.push((t.prob(j, c) + sd * g).clamp(0.0, 1.0));
        }
        let sum: f64 = row.iter().sum();
        if sum <= 0.0 {
            return Err(Error::NotStochastic { row: j, sum });
        }
        for p in &mut row {
            *p /= sum;
        }
        rows.push(row);
    }
    TransitionMatrix::validate(rows)
}
