//! Small statistics helpers for the Monte Carlo harness.

use serde::{Deserialize, Serialize};

/// A point estimate with a two-sided interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// Standard error used to build the interval.
    pub sigma: f64,
}

/// Wilson score interval for `successes / trials` at `z` standard deviations.
///
/// `sigma` is reported as half the interval width divided by `z`, so
/// "within k sigma" comparisons line up with the interval at `z = k`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> Estimate {
    if trials == 0 {
        return Estimate { value: 0.0, lo: 0.0, hi: 1.0, sigma: 0.5 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) / n) + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = (center - half).max(0.0);
    let hi = (center + half).min(1.0);
    Estimate { value: p, lo, hi, sigma: if z > 0.0 { half / z } else { 0.0 } }
}

/// Mean with a normal-approximation interval of `z` standard errors.
pub fn mean_interval(values: &[f64], z: f64) -> Estimate {
    if values.is_empty() {
        return Estimate { value: 0.0, lo: 0.0, hi: 0.0, sigma: 0.0 };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let se = (var / n).sqrt();
    Estimate { value: mean, lo: mean - z * se, hi: mean + z * se, sigma: se }
}

/// One-sided sign test: probability of at least `positive` successes out of
/// `positive + negative` fair coin flips. Ties must be dropped by the caller.
pub fn sign_test_p(positive: u64, negative: u64) -> f64 {
    let n = positive + negative;
    if n == 0 {
        return 1.0;
    }
    // Sum of binomial pmf in log space to stay accurate for n in the hundreds.
    let ln_half_n = -(n as f64) * std::f64::consts::LN_2;
    let mut total = 0.0;
    for k in positive..=n {
        total += (ln_choose(n, k) + ln_half_n).exp();
    }
    total.min(1.0)
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_factorial(n: u64) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}
