//! Closed-form oracles shared by the statistical test suites. Everything
//! here is independent of the simulation path it checks.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Complementary error function (Abramowitz-Stegun 7.1.26 rational
/// approximation, absolute error below 1.5e-7).
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    poly * (-x * x).exp()
}

/// Gaussian tail Q(x) = 0.5 erfc(x / sqrt(2)).
pub fn q_func(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Bessel J0 by series for small arguments and the asymptotic expansion
/// beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 8.0 {
        let mut sum = 1.0;
        let mut term = 1.0;
        let x2 = x * x / 4.0;
        for k in 1..40 {
            term *= -x2 / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-16 {
                break;
            }
        }
        sum
    } else {
        let z = 8.0 / ax;
        let z2 = z * z;
        let p0 = 1.0 - 0.1098628627e-2 * z2 + 0.2734510407e-4 * z2 * z2;
        let q0 = -0.1562499995e-1 * z + 0.1430488765e-3 * z * z2;
        let xx = ax - PI / 4.0;
        (2.0 / (PI * ax)).sqrt() * (xx.cos() * p0 - xx.sin() * q0)
    }
}

/// Exponentially scaled modified Bessel I0: I0(x) e^{-x} for x >= 0.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    if x < 3.75 {
        let t = x / 3.75;
        let t2 = t * t;
        let i0 = 1.0
            + t2 * (3.5156229
                + t2 * (3.0899424
                    + t2 * (1.2067492 + t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))));
        i0 * (-x).exp()
    } else {
        let t = 3.75 / x;
        let poly = 0.39894228
            + t * (0.01328592
                + t * (0.00225319
                    + t * (-0.00157565
                        + t * (0.00916281
                            + t * (-0.02057706
                                + t * (0.02635537 + t * (-0.01647633 + t * 0.00392377)))))));
        poly / x.sqrt()
    }
}

/// Rice envelope pdf for mean power omega and K-factor k, evaluated
/// stably through the scaled I0.
pub fn rice_pdf(r: f64, k: f64, omega: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    let sigma2 = omega / (2.0 * (k + 1.0));
    let nu2 = omega * k / (k + 1.0);
    let nu = nu2.sqrt();
    let z = r * nu / sigma2;
    (r / sigma2) * (-(r - nu) * (r - nu) / (2.0 * sigma2)).exp() * bessel_i0_scaled(z)
}

/// Rice CDF on an ascending grid, by cumulative trapezoid integration of
/// the pdf. The grid must start at 0 and be fine enough for the target
/// accuracy; values are clamped to [0, 1].
pub fn rice_cdf_grid(grid: &[f64], k: f64, omega: f64) -> Vec<f64> {
    let mut cdf = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    let mut prev_r = grid[0];
    let mut prev_f = rice_pdf(prev_r, k, omega);
    cdf.push(0.0);
    for &r in &grid[1..] {
        let f = rice_pdf(r, k, omega);
        acc += 0.5 * (f + prev_f) * (r - prev_r);
        cdf.push(acc.clamp(0.0, 1.0));
        prev_r = r;
        prev_f = f;
    }
    cdf
}

/// Rayleigh BER of Gray 4QAM at average per-bit SNR g:
/// 0.5 (1 - sqrt(g / (1 + g))).
pub fn rayleigh_ber(g: f64) -> f64 {
    0.5 * (1.0 - (g / (1.0 + g)).sqrt())
}

/// Rayleigh outage probability of the rate threshold gamma at noise
/// power sigma2, transmit power rho, and mean gain omega.
pub fn rayleigh_outage(gamma: f64, sigma2: f64, rho: f64, omega: f64) -> f64 {
    1.0 - (-(2f64.powf(gamma) - 1.0) * sigma2 / (rho * omega)).exp()
}

/// Stationary distribution by damped power iteration on the row-stochastic
/// matrix; an independent route from the library's direct solve.
pub fn stationary_by_power_iteration(rows: &[Vec<f64>], tol: f64) -> Vec<f64> {
    let k = rows.len();
    let mut p = vec![1.0 / k as f64; k];
    for _ in 0..200_000 {
        let mut next = vec![0.0; k];
        for j in 0..k {
            for c in 0..k {
                next[c] += p[j] * rows[j][c];
            }
        }
        // Lazy step keeps periodic chains convergent without moving the
        // fixed point.
        for c in 0..k {
            next[c] = 0.5 * (next[c] + p[c]);
        }
        let diff: f64 = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if diff < tol {
            break;
        }
    }
    p
}

/// Kolmogorov-Smirnov distance between sorted samples and a reference CDF
/// sampled on `grid` (ascending). Evaluates the empirical CDF at the grid
/// points, which bounds the true statistic to within the largest
/// per-cell probability mass.
pub fn ks_distance_on_grid(sorted: &[f64], grid: &[f64], cdf: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mut idx = 0usize;
    let mut worst: f64 = 0.0;
    for (&r, &f) in grid.iter().zip(cdf) {
        while idx < sorted.len() && sorted[idx] <= r {
            idx += 1;
        }
        let emp = idx as f64 / n;
        worst = worst.max((emp - f).abs());
    }
    worst
}
