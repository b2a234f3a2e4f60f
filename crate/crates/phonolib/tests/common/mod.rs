//! Shared helpers for the integration test suites.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal deviate (Box–Muller).
pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-15);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Two-point log–log slope between the curve values at `t_lo` and `t_hi`.
pub fn loglog_slope(y_lo: f64, y_hi: f64, t_lo: f64, t_hi: f64) -> f64 {
    (y_hi / y_lo).ln() / (t_hi / t_lo).ln()
}

/// Ordinary-least-squares slope of ln y vs ln x.
pub fn regression_loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let us: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let vs: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let um = us.iter().sum::<f64>() / n;
    let vm = vs.iter().sum::<f64>() / n;
    let sxy: f64 = us.iter().zip(&vs).map(|(u, v)| (u - um) * (v - vm)).sum();
    let sxx: f64 = us.iter().map(|u| (u - um) * (u - um)).sum();
    sxy / sxx
}

/// Path of the repository-level data directory.
pub fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .canonicalize()
        .expect("data directory exists")
}
