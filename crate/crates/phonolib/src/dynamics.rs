//! Classical rate-equation simulator for multi-level optical pumping
//! experiments: pump–probe fluorescence traces, peak-height recovery
//! (orbital T₁), and steady-state polarisation contrast.
//!
//! Populations evolve under `ṗ = G·p` with a piecewise-constant generator
//! (laser on/off); propagation is exact through the matrix exponential
//! (scaling-and-squaring Padé). Coherences are not propagated — the
//! observables here are population-only.

use crate::error::{Error, Result};
use crate::exec;
use crate::fit::{fit_model, Dataset, FitOptions, FitResult, Model};
use crate::rates::{t1_rate, T1Params};
use crate::units::{boltzmann_x, thermal_ratio};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Optical pump channel: `from → to` at `rate_per_ns` while the laser is on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PumpChannel {
    pub from: usize,
    pub to: usize,
    pub rate_per_ns: f64,
}

/// N electronic states with phonon/decay rates, optical pump channels, and
/// per-state fluorescence yields.
///
/// `rate_matrix[(i, j)]` is the always-on rate j → i (1/ns); the generator
/// adds the pump channels when the laser is on and sets the diagonal so
/// every column sums to zero (probability conservation).
#[derive(Debug, Clone)]
pub struct LevelSystem {
    labels: Vec<String>,
    rate_matrix: DMatrix<f64>,
    pump_channels: Vec<PumpChannel>,
    emission_weights: Vec<f64>,
}

impl LevelSystem {
    pub fn new(
        labels: Vec<String>,
        rate_matrix: DMatrix<f64>,
        pump_channels: Vec<PumpChannel>,
        emission_weights: Vec<f64>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Usage("level system needs at least one state".into()));
        }
        if rate_matrix.nrows() != n || rate_matrix.ncols() != n {
            return Err(Error::Usage(format!(
                "rate matrix must be {n}x{n}, got {}x{}",
                rate_matrix.nrows(),
                rate_matrix.ncols()
            )));
        }
        for i in 0..n {
            if rate_matrix[(i, i)] != 0.0 {
                return Err(Error::Usage(
                    "rate matrix diagonal must be zero; the generator fills it".into(),
                ));
            }
            for j in 0..n {
                if i != j && !(rate_matrix[(i, j)] >= 0.0) {
                    return Err(Error::Usage(format!(
                        "off-diagonal rate ({i},{j}) must be non-negative"
                    )));
                }
            }
        }
        if emission_weights.len() != n {
            return Err(Error::Usage("emission weights must match state count".into()));
        }
        if emission_weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Usage("emission weights must be non-negative".into()));
        }
        for ch in &pump_channels {
            if ch.from >= n || ch.to >= n || ch.from == ch.to {
                return Err(Error::Usage(format!(
                    "pump channel {} -> {} out of range",
                    ch.from, ch.to
                )));
            }
            if !(ch.rate_per_ns >= 0.0) {
                return Err(Error::Usage("pump rate must be non-negative".into()));
            }
        }
        Ok(Self {
            labels,
            rate_matrix,
            pump_channels,
            emission_weights,
        })
    }

    pub fn n_states(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn emission_weights(&self) -> &[f64] {
        &self.emission_weights
    }

    /// Generator with zero column sums; pump channels included when
    /// `laser_on`.
    pub fn generator(&self, laser_on: bool) -> DMatrix<f64> {
        let n = self.n_states();
        let mut g = self.rate_matrix.clone();
        if laser_on {
            for ch in &self.pump_channels {
                g[(ch.to, ch.from)] += ch.rate_per_ns;
            }
        }
        for j in 0..n {
            let col_sum: f64 = (0..n).filter(|&i| i != j).map(|i| g[(i, j)]).sum();
            g[(j, j)] = -col_sum;
        }
        g
    }

    /// Fluorescence rate for a population vector.
    pub fn intensity(&self, populations: &[f64]) -> f64 {
        self.emission_weights
            .iter()
            .zip(populations)
            .map(|(w, p)| w * p)
            .sum()
    }
}

fn check_simplex(p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::Usage(format!(
            "population vector has {} entries for {n} states",
            p.len()
        )));
    }
    if p.iter().any(|v| *v < -1e-12 || !v.is_finite()) {
        return Err(Error::Usage("populations must be non-negative".into()));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Usage(format!(
            "populations must sum to 1 (got {sum:.12})"
        )));
    }
    Ok(())
}

/// Matrix exponential of `g * t` with columns renormalised to unit sum.
/// The exact propagator of a zero-column-sum generator is column
/// stochastic, so the normalisation only removes floating-point drift
/// (which otherwise accumulates through the scaling-and-squaring stages
/// for stiff generators over long spans).
fn propagator(g: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    let mut m = (g * t).exp();
    let n = m.ncols();
    for j in 0..n {
        let s: f64 = (0..n).map(|i| m[(i, j)]).sum();
        if s.is_finite() && (s - 1.0).abs() < 1e-6 {
            for i in 0..n {
                m[(i, j)] /= s;
            }
        }
    }
    m
}

/// Propagate a population vector for `duration_ns` under the constant
/// generator (laser on or off). Exact up to the matrix-exponential
/// tolerance; the population sum is preserved to well below 1e-12 even
/// over 10⁶ ns.
pub fn evolve(
    system: &LevelSystem,
    initial: &[f64],
    duration_ns: f64,
    laser_on: bool,
) -> Result<Vec<f64>> {
    check_simplex(initial, system.n_states())?;
    if duration_ns < 0.0 {
        return Err(Error::Usage("duration must be non-negative".into()));
    }
    if duration_ns == 0.0 {
        return Ok(initial.to_vec());
    }
    let step = propagator(&system.generator(laser_on), duration_ns);
    let p = step * DVector::from_column_slice(initial);
    Ok(p.iter().copied().collect())
}

/// A pulse sequence: laser-on/off segments and the output sampling step.
#[derive(Debug, Clone)]
pub struct PulseSequence {
    pub segments: Vec<(f64, bool)>,
    pub time_resolution_ns: f64,
}

impl PulseSequence {
    pub fn new(segments: Vec<(f64, bool)>, time_resolution_ns: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Usage("pulse sequence needs at least one segment".into()));
        }
        if segments.iter().any(|&(d, _)| !(d > 0.0)) {
            return Err(Error::Usage("segment durations must be positive".into()));
        }
        let shortest = segments.iter().map(|&(d, _)| d).fold(f64::INFINITY, f64::min);
        if !(time_resolution_ns > 0.0) || time_resolution_ns > shortest / 10.0 {
            return Err(Error::Usage(format!(
                "time resolution must be positive and <= shortest segment / 10 \
                 ({:.4} ns), got {time_resolution_ns} ns",
                shortest / 10.0
            )));
        }
        Ok(Self {
            segments,
            time_resolution_ns,
        })
    }
}

/// Sampled photoluminescence trace.
#[derive(Debug, Clone, Serialize)]
pub struct FluorescenceTrace {
    pub times_ns: Vec<f64>,
    pub intensity: Vec<f64>,
    /// Sample index at which each segment starts.
    pub segment_marks: Vec<usize>,
}

impl FluorescenceTrace {
    fn segment_range(&self, k: usize) -> Option<(usize, usize)> {
        let start = *self.segment_marks.get(k)?;
        let end = self
            .segment_marks
            .get(k + 1)
            .copied()
            .unwrap_or(self.intensity.len());
        (start < end).then_some((start, end))
    }

    /// Maximum intensity within segment `k`.
    pub fn segment_peak(&self, k: usize) -> Option<f64> {
        let (start, end) = self.segment_range(k)?;
        self.intensity[start..end].iter().copied().reduce(f64::max)
    }

    /// Sample offset (within segment `k`) of the segment's maximum.
    pub fn segment_argmax(&self, k: usize) -> Option<usize> {
        let (start, end) = self.segment_range(k)?;
        self.intensity[start..end]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
    }

    /// Intensity at a fixed sample offset into segment `k`.
    pub fn segment_sample(&self, k: usize, offset: usize) -> Option<f64> {
        let (start, end) = self.segment_range(k)?;
        (start + offset < end).then(|| self.intensity[start + offset])
    }
}

/// Simulate a pulse sequence, sampling the fluorescence rate on the
/// requested grid. Segment-relative sample times are identical for every
/// segment, so traces from different sequences are directly comparable.
pub fn simulate_pulse_sequence(
    system: &LevelSystem,
    sequence: &PulseSequence,
    initial: &[f64],
) -> Result<FluorescenceTrace> {
    check_simplex(initial, system.n_states())?;
    let res = sequence.time_resolution_ns;
    let mut p = DVector::from_column_slice(initial);
    let mut t_abs = 0.0;
    let mut times = Vec::new();
    let mut intensity = Vec::new();
    let mut marks = Vec::new();

    for &(duration, laser_on) in &sequence.segments {
        marks.push(times.len());
        let gen = system.generator(laser_on);
        let step = propagator(&gen, res);
        let n_steps = (duration / res).floor() as usize;
        let mut t_local = 0.0;
        times.push(t_abs);
        intensity.push(system.intensity(p.as_slice()));
        for _ in 0..n_steps {
            p = &step * &p;
            t_local += res;
            times.push(t_abs + t_local);
            intensity.push(system.intensity(p.as_slice()));
        }
        let rem = duration - t_local;
        if rem > 1e-12 * duration {
            p = propagator(&gen, rem) * &p;
        }
        t_abs += duration;
    }
    Ok(FluorescenceTrace {
        times_ns: times,
        intensity,
        segment_marks: marks,
    })
}

/// Result of a pump–probe recovery scan.
#[derive(Debug, Clone, Serialize)]
pub struct Recovery {
    pub tau_ns: Vec<f64>,
    pub peak_heights: Vec<f64>,
    pub fitted_t1_ns: f64,
    pub fit: FitResult,
}

/// Exponential recovery `h(τ) = h∞ − a·exp(−τ/T₁)` used to refit traces.
struct RecoveryModel;

impl Model for RecoveryModel {
    fn name(&self) -> &str {
        "exponential_recovery"
    }
    fn param_names(&self) -> &[&'static str] {
        &["h_inf", "amplitude", "t1_ns"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        th[0] - th[1] * (-x / th[2]).exp()
    }
    fn jacobian(&self, x: f64, th: &[f64], out: &mut [f64]) {
        let e = (-x / th[2]).exp();
        out[0] = 1.0;
        out[1] = -e;
        out[2] = -th[1] * e * x / (th[2] * th[2]);
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let h_inf = data.points.last().unwrap().y;
        let h0 = data.points[0].y;
        let span = data.points.last().unwrap().x - data.points[0].x;
        vec![h_inf, h_inf - h0, (span / 3.0).max(1e-3)]
    }
    fn default_bounds(&self, data: &Dataset) -> Vec<(f64, f64)> {
        let span = data.points.last().unwrap().x - data.points[0].x;
        vec![
            (f64::NEG_INFINITY, f64::INFINITY),
            (f64::NEG_INFINITY, f64::INFINITY),
            (1e-6, span * 1e3),
        ]
    }
}

/// Pump–probe scan: for each wait time τ simulate pump(pulse) → dark(τ) →
/// probe(pulse) and extract the probe's leading-edge peak height `h(τ)`,
/// then refit the single-exponential recovery.
///
/// `h(0)` is the steady pumped level (no recovery). The exponential refit
/// uses only points with `τ ≥ settle_ns`: below that the residual excited
/// population from the pump cycle still feeds the ground block and the
/// recovery is not yet single-exponential. A few multiples of the excited
/// lifetime is enough; the full `h(τ)` series is reported regardless.
/// τ points run in parallel; ordering and results are deterministic.
pub fn peak_height_recovery(
    system: &LevelSystem,
    initial: &[f64],
    pulse_ns: f64,
    resolution_ns: f64,
    tau_grid: &[f64],
    settle_ns: f64,
) -> Result<Recovery> {
    if tau_grid.len() < 4 {
        return Err(Error::Usage("tau grid needs at least 4 points".into()));
    }
    let span = tau_grid.iter().fold(0.0f64, |a, &b| a.max(b));
    if span <= 0.0 {
        return Err(Error::Usage("tau grid must span positive wait times".into()));
    }
    if tau_grid.iter().any(|&t| t < 0.0) {
        return Err(Error::Usage("wait times must be non-negative".into()));
    }

    let heights = exec::try_map(tau_grid, |&tau| -> Result<f64> {
        if tau < resolution_ns * 1e-9 {
            // probe continues the pump: its leading edge is the pumped
            // steady state
            let p_end = evolve(system, initial, pulse_ns, true)?;
            return Ok(system.intensity(&p_end));
        }
        let seq = PulseSequence::new(
            vec![(pulse_ns, true), (tau, false), (pulse_ns, true)],
            resolution_ns.min(tau / 10.0),
        )?;
        let trace = simulate_pulse_sequence(system, &seq, initial)?;
        // read the probe at the pump pulse's peak latency: a fixed sample
        // offset keeps h(tau) a single linear functional of the probe-start
        // state, so the recovery is exactly single-exponential
        let peak_offset = trace
            .segment_argmax(0)
            .ok_or_else(|| Error::Numerical("empty pump segment in trace".into()))?;
        trace
            .segment_sample(2, peak_offset)
            .ok_or_else(|| Error::Numerical("probe segment missing from trace".into()))
    })?;

    let fit_taus: Vec<f64> = tau_grid
        .iter()
        .zip(&heights)
        .filter(|(&t, _)| t >= settle_ns)
        .map(|(&t, _)| t)
        .collect();
    let fit_heights: Vec<f64> = tau_grid
        .iter()
        .zip(&heights)
        .filter(|(&t, _)| t >= settle_ns)
        .map(|(_, &h)| h)
        .collect();
    if fit_taus.len() < 4 {
        return Err(Error::Usage(format!(
            "only {} tau points at or beyond the settle window {settle_ns} ns; \
             need at least 4 for the recovery fit",
            fit_taus.len()
        )));
    }

    let data = Dataset::new(&fit_taus, &fit_heights, None)?;
    let model = RecoveryModel;
    let init = model.default_init(&data);
    let bounds = model.default_bounds(&data);
    let fit = fit_model(
        &model,
        &data,
        &init,
        &FitOptions {
            bounds: Some(bounds),
            ..Default::default()
        },
    )?;
    let t1 = fit.param("t1_ns").expect("recovery model has t1");
    Ok(Recovery {
        tau_ns: tau_grid.to_vec(),
        peak_heights: heights,
        fitted_t1_ns: t1,
        fit,
    })
}

/// Standard Λ-configuration preset: two ground states (bright is pumped)
/// sharing one excited state.
///
/// The excited state decays at `1/excited_decay_ns` with an even branch
/// into the two ground states by default (the branching is not an
/// observable of the recovery protocol). Ground-block thermalization comes
/// from the measured T₁ law: total rate `1/T₁(T)`, split by detailed
/// balance at the working temperature.
#[derive(Debug, Clone)]
pub struct LambdaPreset {
    pub pump_rate_per_ns: f64,
    pub excited_decay_ns: f64,
    /// Fraction of excited decay landing in the dark ground state.
    pub branching_to_dark: f64,
    pub ground_splitting_ghz: f64,
    pub pulse_ns: f64,
    pub resolution_ns: f64,
}

impl Default for LambdaPreset {
    fn default() -> Self {
        Self {
            pump_rate_per_ns: 1.0,
            excited_decay_ns: 1.7,
            branching_to_dark: 0.5,
            ground_splitting_ghz: 50.0,
            pulse_ns: 80.0,
            resolution_ns: 0.5,
        }
    }
}

/// State ordering of the Λ preset.
pub const LAMBDA_DARK: usize = 0;
pub const LAMBDA_BRIGHT: usize = 1;
pub const LAMBDA_EXCITED: usize = 2;

impl LambdaPreset {
    /// Build the three-level system with ground thermalization rates
    /// `γ₊ + γ₋ = total_rate`, split by detailed balance at `temperature_k`.
    /// The bright state is the upper orbital branch (the pumped transition).
    pub fn system_with_thermalization(
        &self,
        total_rate_per_ns: f64,
        temperature_k: f64,
    ) -> Result<LevelSystem> {
        if !(total_rate_per_ns >= 0.0) {
            return Err(Error::Usage("thermalization rate must be >= 0".into()));
        }
        let ratio = thermal_ratio(self.ground_splitting_ghz, temperature_k)?;
        // gamma_down / gamma_up = ratio; bright (upper) -> dark (lower) is "down"
        let (gamma_up, gamma_down) = if ratio.is_infinite() {
            (0.0, total_rate_per_ns)
        } else {
            let up = total_rate_per_ns / (1.0 + ratio);
            (up, total_rate_per_ns - up)
        };
        let decay = 1.0 / self.excited_decay_ns;
        let n = 3;
        let mut m = DMatrix::zeros(n, n);
        m[(LAMBDA_BRIGHT, LAMBDA_DARK)] = gamma_up;
        m[(LAMBDA_DARK, LAMBDA_BRIGHT)] = gamma_down;
        m[(LAMBDA_DARK, LAMBDA_EXCITED)] = decay * self.branching_to_dark;
        m[(LAMBDA_BRIGHT, LAMBDA_EXCITED)] = decay * (1.0 - self.branching_to_dark);
        LevelSystem::new(
            vec!["dark".into(), "bright".into(), "excited".into()],
            m,
            vec![PumpChannel {
                from: LAMBDA_BRIGHT,
                to: LAMBDA_EXCITED,
                rate_per_ns: self.pump_rate_per_ns,
            }],
            vec![0.0, 0.0, decay],
        )
    }

    /// System whose ground-block relaxation time is exactly `t1_ns`.
    pub fn system_with_t1(&self, t1_ns: f64, temperature_k: f64) -> Result<LevelSystem> {
        if !(t1_ns > 0.0) {
            return Err(Error::Usage("T1 must be positive".into()));
        }
        self.system_with_thermalization(1.0 / t1_ns, temperature_k)
    }

    /// Settle window for recovery refits: by 8 excited lifetimes the
    /// optical cycle's fast transient is down to ~3e-4 of its amplitude.
    pub fn settle_ns(&self) -> f64 {
        8.0 * self.excited_decay_ns
    }

    /// Thermal ground-block population (no laser), Boltzmann-weighted
    /// between the two orbital branches.
    pub fn thermal_populations(&self, temperature_k: f64) -> Result<Vec<f64>> {
        let x = boltzmann_x(self.ground_splitting_ghz, temperature_k);
        let w_upper = (-x).exp();
        let z = 1.0 + w_upper;
        Ok(vec![1.0 / z, w_upper / z, 0.0])
    }
}

/// One temperature of a polarisation-contrast scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContrastRow {
    pub temperature_k: f64,
    /// Residual bright population after pumping, `h(0)/2a`.
    pub bright_population: f64,
    /// Polarisation contrast `1 − h(0)/2a`: 1 for complete pumping, 1/2
    /// when thermalization beats the pump entirely.
    pub contrast: f64,
}

/// Steady-state polarisation contrast over a temperature grid, with
/// thermalization rates calibrated from the measured T₁ law.
pub fn steady_state_contrast(
    preset: &LambdaPreset,
    temps_k: &[f64],
    calib: &T1Params,
) -> Result<Vec<ContrastRow>> {
    if temps_k.is_empty() {
        return Err(Error::Usage("temperature grid is empty".into()));
    }
    exec::try_map(temps_k, |&t| -> Result<ContrastRow> {
        let total = t1_rate(calib, t)?;
        let system = preset.system_with_thermalization(total, t)?;
        let initial = preset.thermal_populations(t)?;
        // first-pulse peak: thermal start
        let seq = PulseSequence::new(vec![(preset.pulse_ns, true)], preset.resolution_ns)?;
        let trace = simulate_pulse_sequence(&system, &seq, &initial)?;
        let a = trace
            .segment_peak(0)
            .ok_or_else(|| Error::Numerical("empty first-pulse trace".into()))?;
        // h(0): steady pumped level
        let p_end = evolve(&system, &initial, preset.pulse_ns, true)?;
        let h0 = system.intensity(&p_end);
        if a <= 0.0 {
            return Err(Error::Numerical("vanishing first-pulse peak".into()));
        }
        let bright = h0 / (2.0 * a);
        Ok(ContrastRow {
            temperature_k: t,
            bright_population: bright,
            contrast: 1.0 - bright,
        })
    })
}
