//! Temperature-dependent energy shifts: the T² reduction of the spin-orbit
//! splittings, the ~T³ optical line-position shift (numerical quadrature),
//! the thermal-expansion shift, and the Mott–Seitz non-radiative lifetime.

use crate::error::{Error, Result};
use crate::numeric::{integrate, MonotoneCubic};
use crate::rates::OrbitalDoublet;
use crate::units::{constants::*, PhononBath};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Second-order splitting shift, split into its observable thermal part and
/// the unobservable static renormalisation.
///
/// `total = static + thermal` with `thermal ∝ T²` exactly. Only temperature
/// differentials of the splitting are measurable, so consumers normally
/// want `thermal`; `total` (negative — the splitting always shrinks) is
/// kept for completeness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplittingShift {
    pub total_ghz: f64,
    pub thermal_ghz: f64,
    pub static_ghz: f64,
}

/// Splitting shift `δΔ(T) = −χρ·Δ·(Ω² + (2π²/3)(k_B T/h)²)` in GHz.
///
/// Linear in Δ, so `δΔ/Δ` is a property of the bath alone; the thermal part
/// is exactly quadratic in temperature.
pub fn splitting_shift(doublet: &OrbitalDoublet, bath: &PhononBath) -> Result<SplittingShift> {
    bath.require_second_order_scale(doublet.splitting_ghz)?;
    if bath.temperature_k < 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be >= 0, got {} K",
            bath.temperature_k
        )));
    }
    let omega = bath.debye_cutoff_ghz();
    let kt_ghz = GHZ_PER_KELVIN * bath.temperature_k;
    let static_ghz = -bath.chi_rho * doublet.splitting_ghz * omega * omega;
    let thermal_ghz =
        -bath.chi_rho * doublet.splitting_ghz * (2.0 * PI * PI / 3.0) * kt_ghz * kt_ghz;
    Ok(SplittingShift {
        total_ghz: static_ghz + thermal_ghz,
        thermal_ghz,
        static_ghz,
    })
}

/// Thermal part of the polar-basis line-position integrand, `g(x) − 2`,
/// where `g(x) = 2eˣ(e²ˣ+3) / ((eˣ−1)(eˣ+1)²)` and the constant 2 is the
/// `x → ∞` limit whose integral is the temperature-independent part of the
/// shift.
///
/// Series below `x = 1e-4` avoids the cancellation in the denominator:
/// `g(x) − 2 = 2/x − 2 + x/6 + x²/4 + O(x³)`.
fn line_shift_integrand_thermal(x: f64) -> f64 {
    if x < 1e-4 {
        2.0 / x - 2.0 + x / 6.0 + x * x / 4.0
    } else if x > 120.0 {
        // asymptotic tail ~ -2 e^{-x}; avoids overflow of e^{3x}
        -2.0 * (-x).exp()
    } else {
        let ex = x.exp();
        2.0 * (-ex * ex + 4.0 * ex + 1.0) / ((ex - 1.0) * (ex + 1.0) * (ex + 1.0))
    }
}

/// Thermal integral `I(T) = ∫₀^Ω [g(hν/k_BT) − 2] ν² dν` in GHz³
/// (negative), evaluated by adaptive quadrature to 1e-12 absolute /
/// 1e-10 relative tolerance.
pub fn line_shift_thermal_integral(bath: &PhononBath, temperature_k: f64) -> Result<f64> {
    if temperature_k < 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be >= 0, got {temperature_k} K"
        )));
    }
    if temperature_k == 0.0 {
        return Ok(0.0);
    }
    let omega = bath.debye_cutoff_ghz();
    let a = KELVIN_PER_GHZ / temperature_k; // x = a * nu
    let q = integrate(
        |nu| {
            if nu <= 0.0 {
                0.0
            } else {
                line_shift_integrand_thermal(a * nu) * nu * nu
            }
        },
        0.0,
        omega,
        1e-12,
        1e-10,
    )?;
    Ok(q.value)
}

/// Optical line-position shift relative to the T = 0 line, in meV.
///
/// `δE(T) = 2·χρ·I(T)·(h in meV/GHz)`; returns 0 at T = 0 exactly and is
/// negative (towards lower energy) for T > 0, matching the observed
/// redshift. Close to a pure T³ law for `k_BT ≪ hΩ`, softening slightly as
/// the Debye cutoff truncates the mode sum.
pub fn line_position_shift(bath: &PhononBath, temperature_k: f64) -> Result<f64> {
    let integral = line_shift_thermal_integral(bath, temperature_k)?;
    Ok(2.0 * bath.chi_rho * integral * MEV_PER_GHZ)
}

/// Mott–Seitz parameters: `τ(T) = τ₀ / (1 + α·exp(−ΔE/k_BT))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MottSeitzParams {
    /// Lifetime at T = 0 (ns).
    pub tau0_ns: f64,
    /// Non-radiative branching amplitude (dimensionless).
    pub alpha: f64,
    /// Activation energy (meV).
    pub activation_mev: f64,
}

impl MottSeitzParams {
    pub fn new(tau0_ns: f64, alpha: f64, activation_mev: f64) -> Result<Self> {
        if !(tau0_ns > 0.0) {
            return Err(Error::Domain(format!("tau0 must be positive, got {tau0_ns}")));
        }
        if !(alpha >= 0.0) {
            return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(activation_mev > 0.0) {
            return Err(Error::Domain(format!(
                "activation energy must be positive, got {activation_mev}"
            )));
        }
        Ok(Self {
            tau0_ns,
            alpha,
            activation_mev,
        })
    }
}

/// Thermally activated fluorescence lifetime (ns): τ₀ at T = 0, strictly
/// decreasing, with asymptote `τ₀/(1+α)`.
pub fn mott_seitz_lifetime(params: &MottSeitzParams, temperature_k: f64) -> Result<f64> {
    if temperature_k < 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be >= 0, got {temperature_k} K"
        )));
    }
    if temperature_k == 0.0 {
        return Ok(params.tau0_ns);
    }
    let beta = params.activation_mev / (BOLTZMANN_MEV_PER_K * temperature_k);
    Ok(params.tau0_ns / (1.0 + params.alpha * (-beta).exp()))
}

/// Thermal-expansion shift model `δE(T) = A·P(T)` with
/// `P(T) = −B·∫₀ᵀ e(x) dx`, where `e(T)` is the tabulated bulk expansion
/// coefficient interpolated shape-preservingly.
#[derive(Debug, Clone)]
pub struct ExpansionModel {
    /// Hydrostatic pressure shift of the transition (meV/GPa).
    pub pressure_coeff_mev_per_gpa: f64,
    /// Bulk modulus (GPa).
    pub bulk_modulus_gpa: f64,
    table: MonotoneCubic,
}

impl ExpansionModel {
    /// Build from `(temperature_k, alpha_per_k)` rows. The table must start
    /// at or below any queried temperature, be strictly increasing in T,
    /// and have `e ≥ 0`.
    pub fn new(
        pressure_coeff_mev_per_gpa: f64,
        bulk_modulus_gpa: f64,
        rows: &[(f64, f64)],
    ) -> Result<Self> {
        if !(bulk_modulus_gpa > 0.0) {
            return Err(Error::Domain(format!(
                "bulk modulus must be positive, got {bulk_modulus_gpa}"
            )));
        }
        if rows.iter().any(|&(_, e)| e < 0.0) {
            return Err(Error::Domain(
                "expansion coefficients must be non-negative".into(),
            ));
        }
        let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
        Ok(Self {
            pressure_coeff_mev_per_gpa,
            bulk_modulus_gpa,
            table: MonotoneCubic::new(xs, ys)?,
        })
    }

    /// Parse the CSV table format: header `temperature_k,alpha_per_k`,
    /// `#` comment lines carrying provenance.
    pub fn from_csv_str(
        pressure_coeff_mev_per_gpa: f64,
        bulk_modulus_gpa: f64,
        csv: &str,
    ) -> Result<Self> {
        let mut rows = Vec::new();
        let mut header_seen = false;
        for (lineno, raw) in csv.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols != ["temperature_k", "alpha_per_k"] {
                    return Err(Error::Parse(format!(
                        "expansion table header must be 'temperature_k,alpha_per_k', \
                         got '{line}' at line {}",
                        lineno + 1
                    )));
                }
                header_seen = true;
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 2 {
                return Err(Error::Parse(format!(
                    "expansion table row at line {} must have 2 columns",
                    lineno + 1
                )));
            }
            let t: f64 = cols[0].parse().map_err(|_| {
                Error::Parse(format!("bad temperature '{}' at line {}", cols[0], lineno + 1))
            })?;
            let e: f64 = cols[1].parse().map_err(|_| {
                Error::Parse(format!("bad coefficient '{}' at line {}", cols[1], lineno + 1))
            })?;
            rows.push((t, e));
        }
        if !header_seen {
            return Err(Error::Parse("expansion table has no header row".into()));
        }
        Self::new(pressure_coeff_mev_per_gpa, bulk_modulus_gpa, &rows)
    }

    /// Negative pressure of thermal expansion `P(T) = −B·∫₀ᵀ e(x) dx` (GPa).
    /// The integral runs from the first table knot, which must be 0 (or the
    /// caller accepts the clipped lower limit).
    pub fn negative_pressure_gpa(&self, temperature_k: f64) -> Result<f64> {
        Ok(-self.bulk_modulus_gpa * self.table.integral_from_start(temperature_k)?)
    }
}

/// Thermal-expansion contribution to the line shift, `A·P(T)` in meV.
/// `P(0) = 0` and P decreases with temperature, so for positive `A` the
/// shift is a redshift growing roughly like T⁴ at low temperature.
pub fn thermal_expansion_shift(model: &ExpansionModel, temperature_k: f64) -> Result<f64> {
    Ok(model.pressure_coeff_mev_per_gpa * model.negative_pressure_gpa(temperature_k)?)
}
