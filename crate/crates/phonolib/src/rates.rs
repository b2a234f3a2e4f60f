//! Phonon-induced transition and dephasing rate laws, plus the composite
//! observable models (optical linewidth, orbital T₁, coherence budget)
//! built from them.
//!
//! The microscopic picture is a linear coupling between an orbital doublet
//! split by Δ and an acoustic bath with mode density ∝ ω². First order in
//! the coupling gives resonant one-phonon relaxation,
//!
//! ```text
//! γ₊ = 2π χρ Δ³ n(Δ,T)      γ₋ = 2π χρ Δ³ [n(Δ,T) + 1]
//! ```
//!
//! second order gives elastic two-phonon scattering that only dephases,
//! with a T³ rate, and a splitting-quadratic prefactor. All rates are in
//! 1/ns for Δ in GHz; the calibration constant `χρ` carries the remaining
//! dimensions (see [`crate::units::PhononBath`]).

use crate::error::{Error, Result};
use crate::exec;
use crate::fit::{fit_weighted_linear_basis, Dataset};
use crate::shifts::MottSeitzParams;
use crate::units::{bose_occupation, boltzmann_x, constants::*, rate_to_fwhm_mhz, PhononBath};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Which electronic level a doublet belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Ground,
    Excited,
}

/// A two-level orbital subsystem split by `splitting_ghz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalDoublet {
    pub splitting_ghz: f64,
    pub branch: Branch,
}

impl OrbitalDoublet {
    pub fn new(splitting_ghz: f64, branch: Branch) -> Result<Self> {
        if !(splitting_ghz > 0.0) {
            return Err(Error::Domain(format!(
                "doublet splitting must be positive, got {splitting_ghz} GHz"
            )));
        }
        Ok(Self {
            splitting_ghz,
            branch,
        })
    }

    pub fn ground(splitting_ghz: f64) -> Result<Self> {
        Self::new(splitting_ghz, Branch::Ground)
    }

    pub fn excited(splitting_ghz: f64) -> Result<Self> {
        Self::new(splitting_ghz, Branch::Excited)
    }
}

/// The rate triple of a doublet coupled to the bath: upward and downward
/// population transfer plus pure dephasing, all in 1/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSet {
    pub gamma_up: f64,
    pub gamma_down: f64,
    pub gamma_dephase: f64,
}

/// Resonant single-phonon absorption/emission rates. `gamma_dephase` is 0;
/// one-phonon processes only transfer population.
///
/// Detailed balance holds exactly: `gamma_down / gamma_up = exp(hΔ/k_BT)`,
/// and `gamma_down → 2π χρ Δ³ > 0` at `T = 0` (spontaneous emission).
pub fn single_phonon_rates(doublet: &OrbitalDoublet, bath: &PhononBath) -> Result<RateSet> {
    bath.require_single_phonon_scale(doublet.splitting_ghz)?;
    let d3 = doublet.splitting_ghz.powi(3);
    let n = bose_occupation(doublet.splitting_ghz, bath.temperature_k)?;
    let scale = TAU * bath.chi_rho * d3;
    Ok(RateSet {
        gamma_up: scale * n,
        gamma_down: scale * (n + 1.0),
        gamma_dephase: 0.0,
    })
}

/// High-temperature limit of the one-phonon rate: a single relaxation rate
/// linear in T, `γ ≈ 2π χρ Δ² (k_B/h) T`.
///
/// Valid for `T > hΔ/k_B` (error below); the deviation from the exact rate
/// drops below 10% once `T ≳ 5.4·hΔ/k_B`.
pub fn single_phonon_linear_approx(doublet: &OrbitalDoublet, bath: &PhononBath) -> Result<f64> {
    bath.require_single_phonon_scale(doublet.splitting_ghz)?;
    let t_thermal = KELVIN_PER_GHZ * doublet.splitting_ghz;
    if bath.temperature_k <= t_thermal {
        return Err(Error::Precondition(format!(
            "linear approximation needs T > h*Delta/kB = {t_thermal:.4} K, got {} K",
            bath.temperature_k
        )));
    }
    Ok(TAU * bath.chi_rho * doublet.splitting_ghz.powi(2) * GHZ_PER_KELVIN * bath.temperature_k)
}

/// Elastic two-phonon (Raman-type) scattering rate, the lowest-order-in-Δ
/// result `γ_d = (2π³/3) (χρ)² Δ² (k_B T/h)³`. Pure dephasing: populations
/// are untouched.
///
/// The closed form assumes `hΔ ≪ k_B T ≪ hΩ`; use
/// [`two_phonon_in_validity`] to check the factor-of-5 margins. Outside
/// them the value is still returned (the law is exact cubic by
/// construction) — only `T = 0` and scale violations error.
pub fn two_phonon_dephasing_rate(doublet: &OrbitalDoublet, bath: &PhononBath) -> Result<f64> {
    bath.require_second_order_scale(doublet.splitting_ghz)?;
    if bath.temperature_k <= 0.0 {
        return Err(Error::Domain(
            "two-phonon dephasing is undefined at T = 0 (no thermal phonons)".into(),
        ));
    }
    let kt_ghz = GHZ_PER_KELVIN * bath.temperature_k;
    Ok((2.0 * PI.powi(3) / 3.0)
        * bath.chi_rho.powi(2)
        * doublet.splitting_ghz.powi(2)
        * kt_ghz.powi(3))
}

/// Whether `(doublet, bath)` sits inside the two-phonon law's validity
/// window `5·hΔ ≤ k_B T ≤ hΩ/5`.
pub fn two_phonon_in_validity(doublet: &OrbitalDoublet, bath: &PhononBath) -> bool {
    let t = bath.temperature_k;
    t >= 5.0 * KELVIN_PER_GHZ * doublet.splitting_ghz && t <= bath.debye_temp_k / 5.0
}

/// High-strain inelastic Raman relaxation, a pure `prefactor · T⁵` scaling
/// law. The prefactor is a free parameter; the microscopic model only
/// fixes the exponent.
pub fn raman_rate_scaling(prefactor_per_ns_k5: f64, temperature_k: f64) -> Result<f64> {
    if !(prefactor_per_ns_k5 >= 0.0) {
        return Err(Error::Domain(format!(
            "Raman prefactor must be non-negative, got {prefactor_per_ns_k5}"
        )));
    }
    if temperature_k < 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature_k}"
        )));
    }
    Ok(prefactor_per_ns_k5 * temperature_k.powi(5))
}

/// Parameters of the orbital-T₁ law `1/T₁ = C · n(Δ, T − T_off)`.
///
/// `temp_offset_k` is an empirical fit device with no microscopic meaning;
/// leave it 0 for predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct T1Params {
    /// C (1/ns): equals `2π χρ_g Δ³` of the ground doublet.
    pub prefactor_per_ns: f64,
    pub splitting_ghz: f64,
    pub temp_offset_k: f64,
}

impl T1Params {
    pub fn new(prefactor_per_ns: f64, splitting_ghz: f64, temp_offset_k: f64) -> Result<Self> {
        if !(prefactor_per_ns > 0.0) {
            return Err(Error::Domain(format!(
                "T1 prefactor must be positive, got {prefactor_per_ns}"
            )));
        }
        if !(splitting_ghz > 0.0) {
            return Err(Error::Domain(format!(
                "T1 splitting must be positive, got {splitting_ghz}"
            )));
        }
        if !(temp_offset_k >= 0.0) {
            return Err(Error::Domain(format!(
                "T1 temperature offset must be >= 0, got {temp_offset_k}"
            )));
        }
        Ok(Self {
            prefactor_per_ns,
            splitting_ghz,
            temp_offset_k,
        })
    }

    /// Implied bath coupling `χρ = C / (2π Δ³)`.
    pub fn chi_rho(&self) -> f64 {
        self.prefactor_per_ns / (TAU * self.splitting_ghz.powi(3))
    }
}

/// Orbital relaxation rate `1/T₁(T) = C · n(Δ, T − T_off)` in 1/ns.
pub fn t1_rate(params: &T1Params, temperature_k: f64) -> Result<f64> {
    if temperature_k <= params.temp_offset_k {
        return Err(Error::Domain(format!(
            "T1 model undefined at T = {temperature_k} K <= offset {} K",
            params.temp_offset_k
        )));
    }
    Ok(params.prefactor_per_ns
        * bose_occupation(params.splitting_ghz, temperature_k - params.temp_offset_k)?)
}

/// Orbital relaxation time `T₁(T)` in ns; strictly decreasing in T and
/// divergent as `T → T_off⁺`.
pub fn t1_model(params: &T1Params, temperature_k: f64) -> Result<f64> {
    Ok(1.0 / t1_rate(params, temperature_k)?)
}

/// Inputs of the composite optical-linewidth model
/// `Γ(T) = γ_r + γ_nr(T) + γ₊ᵘ(T) + γ_d(T)`, reported as a FWHM in MHz
/// with every rate contributing `rate/2π`.
///
/// The one-phonon term uses `bath.chi_rho`; the dephasing term uses
/// `dephasing_chi_rho` when given. The two amplitudes are independent
/// calibrations in practice: a single shared scalar cannot reproduce both
/// measured regime coefficients of a real centre at a fixed Δ, and nothing
/// in the model couples their absolute scales.
#[derive(Debug, Clone)]
pub struct LinewidthParams {
    /// Radiative decay rate (1/ns); sets the lifetime-limited floor
    /// together with any T=0 non-radiative rate folded into it.
    pub gamma_r_per_ns: f64,
    /// Thermally activated non-radiative channel; contributes
    /// `γ_r · α · exp(−ΔE/k_BT)` so that the floor at T = 0 is exactly
    /// `γ_r`. `None` disables the channel.
    pub nr_model: Option<MottSeitzParams>,
    /// Excited-state doublet whose upward relaxation broadens the line.
    pub doublet_u: OrbitalDoublet,
    /// Bath; `chi_rho` drives the single-phonon term. The bath temperature
    /// field is ignored here — the model takes T explicitly.
    pub bath: PhononBath,
    /// Independent amplitude for the two-phonon dephasing term; defaults
    /// to `bath.chi_rho`.
    pub dephasing_chi_rho: Option<f64>,
}

impl LinewidthParams {
    fn validate(&self) -> Result<()> {
        if !(self.gamma_r_per_ns > 0.0) {
            return Err(Error::Domain(format!(
                "radiative rate must be positive, got {}",
                self.gamma_r_per_ns
            )));
        }
        Ok(())
    }

    /// Lifetime-limited floor contribution in MHz at temperature `t_k`.
    pub fn floor_mhz(&self, t_k: f64) -> f64 {
        let activation = match &self.nr_model {
            Some(ms) => ms.alpha * (-ms.activation_mev / (BOLTZMANN_MEV_PER_K * t_k)).exp(),
            None => 0.0,
        };
        let act = if t_k > 0.0 { activation } else { 0.0 };
        rate_to_fwhm_mhz(self.gamma_r_per_ns * (1.0 + act))
    }

    /// Single-phonon (upward) contribution in MHz.
    pub fn single_phonon_mhz(&self, t_k: f64) -> Result<f64> {
        let bath = self.bath.at_temperature(t_k)?;
        Ok(rate_to_fwhm_mhz(
            single_phonon_rates(&self.doublet_u, &bath)?.gamma_up,
        ))
    }

    /// Two-phonon dephasing contribution in MHz (0 at T = 0).
    pub fn dephasing_mhz(&self, t_k: f64) -> Result<f64> {
        if t_k == 0.0 {
            return Ok(0.0);
        }
        let mut bath = self.bath.at_temperature(t_k)?;
        if let Some(chi) = self.dephasing_chi_rho {
            bath.chi_rho = chi;
        }
        Ok(rate_to_fwhm_mhz(two_phonon_dephasing_rate(
            &self.doublet_u,
            &bath,
        )?))
    }
}

/// Composite homogeneous linewidth Γ(T) in MHz (FWHM).
///
/// The crossover between the linear-ish and cubic regimes is emergent from
/// summing the mechanisms — there is no switch or blending parameter. At
/// `T = 0` the value reduces exactly to the lifetime-limited floor.
pub fn linewidth_model(params: &LinewidthParams, t_k: f64) -> Result<f64> {
    params.validate()?;
    if t_k < 0.0 {
        return Err(Error::Domain(format!("temperature must be >= 0, got {t_k} K")));
    }
    if t_k == 0.0 {
        return Ok(params.floor_mhz(0.0));
    }
    Ok(params.floor_mhz(t_k) + params.single_phonon_mhz(t_k)? + params.dephasing_mhz(t_k)?)
}

/// Two-regime calibration of the composite linewidth model, mirroring how
/// such data is measured: a floor + single-phonon fit on the
/// low-temperature window and a floor + cubic fit on the high-temperature
/// window.
///
/// Both regime fits are linear least-squares problems (the Bose shape at
/// fixed Δ_u is a known basis function), so the calibration is exact and
/// deterministic.
#[derive(Debug, Clone)]
pub struct LinewidthCalibration {
    pub params: LinewidthParams,
    /// Fitted floor (MHz), taken from the low-temperature window where the
    /// floor is actually observable.
    pub floor_mhz: f64,
    /// Fitted amplitude of the Bose term, `A = 1000·χρ_u·Δ_u³` (MHz).
    pub single_phonon_amp_mhz: f64,
    /// Fitted cubic coefficient (MHz/K³).
    pub dephasing_coeff_mhz_per_k3: f64,
    /// Floor recovered by the high-window fit (diagnostic only; weakly
    /// constrained there).
    pub high_window_floor_mhz: f64,
}

impl LinewidthCalibration {
    /// Fit the two windows. `low` should span the linear-looking regime
    /// (≲ 20 K), `high` the cubic regime (≳ 70 K).
    pub fn fit_two_regime(
        low: &Dataset,
        high: &Dataset,
        doublet_u: OrbitalDoublet,
        debye_temp_k: f64,
    ) -> Result<Self> {
        if low.points.len() < 3 || high.points.len() < 3 {
            return Err(Error::Usage(
                "two-regime calibration needs at least 3 points per window".into(),
            ));
        }
        // low window: y = F + A * n(Delta_u, T)
        let (lo, _) = fit_weighted_linear_basis(low, &[
            Box::new(|_t: f64| 1.0),
            Box::new(move |t: f64| 1.0 / boltzmann_x(doublet_u.splitting_ghz, t).exp_m1()),
        ])?;
        let (floor_mhz, amp_mhz) = (lo[0], lo[1]);
        // high window: y = F_hi + D * T^3
        let (hi, _) = fit_weighted_linear_basis(high, &[
            Box::new(|_t: f64| 1.0),
            Box::new(|t: f64| t.powi(3)),
        ])?;
        let (high_floor, cubic) = (hi[0], hi[1]);
        if amp_mhz <= 0.0 || cubic <= 0.0 || floor_mhz <= 0.0 {
            return Err(Error::FitFailed(format!(
                "two-regime calibration produced non-physical coefficients: \
                 floor {floor_mhz:.3} MHz, amplitude {amp_mhz:.3} MHz, cubic {cubic:.5} MHz/K^3"
            )));
        }

        let chi_rho_u = amp_mhz / (1e3 * doublet_u.splitting_ghz.powi(3));
        // invert D = 1000*(pi^2/3)*(chi_d)^2*Delta^2*(kB/h)^3  [MHz/K^3]
        let chi_d = (cubic
            / (1e3 * (PI * PI / 3.0) * doublet_u.splitting_ghz.powi(2) * GHZ_PER_KELVIN.powi(3)))
        .sqrt();
        let params = LinewidthParams {
            gamma_r_per_ns: floor_mhz * 1e-3 * TAU,
            nr_model: None,
            doublet_u,
            bath: PhononBath::new(chi_rho_u, debye_temp_k, 0.0)?,
            dephasing_chi_rho: Some(chi_d),
        };
        Ok(Self {
            params,
            floor_mhz,
            single_phonon_amp_mhz: amp_mhz,
            dephasing_coeff_mhz_per_k3: cubic,
            high_window_floor_mhz: high_floor,
        })
    }

    /// Floor + single-phonon part only — the model's low-regime branch.
    pub fn low_branch_mhz(&self, t_k: f64) -> Result<f64> {
        Ok(self.params.floor_mhz(t_k) + self.params.single_phonon_mhz(t_k)?)
    }

    /// The full composite (floor + single-phonon + dephasing).
    pub fn composite_mhz(&self, t_k: f64) -> Result<f64> {
        linewidth_model(&self.params, t_k)
    }
}

/// Local log–log slope `d ln f / d ln T` of a positive curve, by central
/// differencing in log space.
pub fn local_log_slope<F: Fn(f64) -> Result<f64>>(f: F, t: f64) -> Result<f64> {
    let h = 1e-4;
    let up = f(t * (1.0 + h))?;
    let dn = f(t * (1.0 - h))?;
    if up <= 0.0 || dn <= 0.0 {
        return Err(Error::Numerical("log-log slope of non-positive values".into()));
    }
    Ok((up / dn).ln() / (((1.0 + h) / (1.0 - h)) as f64).ln())
}

/// Two-point log–log slope of a positive curve between `t_lo` and `t_hi`.
pub fn log_slope_between<F: Fn(f64) -> Result<f64>>(f: F, t_lo: f64, t_hi: f64) -> Result<f64> {
    let lo = f(t_lo)?;
    let hi = f(t_hi)?;
    if lo <= 0.0 || hi <= 0.0 {
        return Err(Error::Numerical("log-log slope of non-positive values".into()));
    }
    Ok((hi / lo).ln() / (t_hi / t_lo).ln())
}

/// One row of the coherence-budget table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BudgetRow {
    pub delta_ghz: f64,
    pub temperature_k: f64,
    pub inv_gamma_up_ns: f64,
    pub inv_gamma_down_ns: f64,
    pub t1_ns: f64,
    /// Orbital-limited coherence ceiling `2/(γ₊+γ₋)`. An upper bound: the
    /// microscopic model does not pin whether T₂* saturates it.
    pub t2_star_upper_ns: f64,
}

/// Coherence-budget table over a (Δ, T) grid.
///
/// The bath coupling is fixed once from `calib` (the measured T₁ law
/// anchors `χρ = C/(2πΔ_cal³)`) and each row rescales the one-phonon law by
/// `Δ³ n(Δ,T)`. Rows evaluate in parallel when the `parallel` feature is
/// active; ordering is deterministic (Δ-major).
pub fn coherence_budget(
    bath_template: &PhononBath,
    deltas_ghz: &[f64],
    temps_k: &[f64],
    calib: &T1Params,
) -> Result<Vec<BudgetRow>> {
    if deltas_ghz.is_empty() || temps_k.is_empty() {
        return Err(Error::Usage("coherence budget needs non-empty grids".into()));
    }
    let chi_rho = calib.chi_rho();
    let points: Vec<(f64, f64)> = deltas_ghz
        .iter()
        .flat_map(|&d| temps_k.iter().map(move |&t| (d, t)))
        .collect();
    exec::try_map(&points, |&(delta, t)| {
        let doublet = OrbitalDoublet::ground(delta)?;
        let bath = PhononBath::new(chi_rho, bath_template.debye_temp_k, t)?;
        let rates = single_phonon_rates(&doublet, &bath)?;
        let total = rates.gamma_up + rates.gamma_down;
        Ok(BudgetRow {
            delta_ghz: delta,
            temperature_k: t,
            inv_gamma_up_ns: 1.0 / rates.gamma_up,
            inv_gamma_down_ns: 1.0 / rates.gamma_down,
            t1_ns: 1.0 / total,
            t2_star_upper_ns: 2.0 / total,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::thermal_ratio;
    use approx::assert_relative_eq;

    fn bath(chi_rho: f64, t: f64) -> PhononBath {
        PhononBath::new(chi_rho, DIAMOND_DEBYE_TEMP_K, t).unwrap()
    }

    /// chi-rho anchored so that 1/gamma+ = 101*(e^x - 1) ns at 50 GHz.
    fn calibrated_chi_rho() -> f64 {
        1.0 / (101.0 * TAU * 50.0f64.powi(3))
    }

    #[test]
    fn zero_temperature_rates() {
        let d = OrbitalDoublet::ground(50.0).unwrap();
        let b = bath(3e-9, 0.0);
        let r = single_phonon_rates(&d, &b).unwrap();
        assert_eq!(r.gamma_up, 0.0);
        assert_relative_eq!(r.gamma_down, TAU * 3e-9 * 50.0f64.powi(3), max_relative = 1e-14);
        assert_eq!(r.gamma_dephase, 0.0);
    }

    #[test]
    fn detailed_balance_is_exact() {
        let d = OrbitalDoublet::ground(50.0).unwrap();
        let b = bath(3e-9, 4.0);
        let r = single_phonon_rates(&d, &b).unwrap();
        assert_relative_eq!(
            r.gamma_down / r.gamma_up,
            thermal_ratio(50.0, 4.0).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn high_temperature_delta_squared_scaling() {
        // gamma+(2D)/gamma+(D) at T = 1e4 * (h*50GHz/kB): frozen oracle value
        // 3.9998000000001667; the Eq-(6) limit is exactly 4.
        let t = 1e4 * 50.0 * KELVIN_PER_GHZ;
        let b = bath(3e-9, t);
        let g1 = single_phonon_rates(&OrbitalDoublet::ground(50.0).unwrap(), &b)
            .unwrap()
            .gamma_up;
        let g2 = single_phonon_rates(&OrbitalDoublet::ground(100.0).unwrap(), &b)
            .unwrap()
            .gamma_up;
        assert_relative_eq!(g2 / g1, 3.999_800_000_000_166_7, max_relative = 1e-9);
        assert!((g2 / g1 - 4.0).abs() < 1e-3);
    }

    #[test]
    fn paper_anchor_one_microsecond_at_one_kelvin() {
        // 1/gamma+ = 101*(e^{2.3996/T} - 1) ns at 1 K -> 1011.92 ns
        let d = OrbitalDoublet::ground(50.0).unwrap();
        let b = bath(calibrated_chi_rho(), 1.0);
        let r = single_phonon_rates(&d, &b).unwrap();
        assert_relative_eq!(1.0 / r.gamma_up, 1011.919_535_51, max_relative = 1e-9);
        assert!((1.0 / r.gamma_up - 1012.0).abs() < 1.0);
    }

    #[test]
    fn linear_approx_accuracy_profile() {
        let d = OrbitalDoublet::ground(50.0).unwrap();
        let t0 = 50.0 * KELVIN_PER_GHZ;
        // frozen oracle deviations: 10.70% at 5*t0, 1.007% at 50*t0
        for (mult, expect) in [(5.0, 0.107_013_79), (50.0, 0.010_067_00)] {
            let b = bath(3e-9, mult * t0);
            let lin = single_phonon_linear_approx(&d, &b).unwrap();
            let exact = single_phonon_rates(&d, &b).unwrap().gamma_up;
            assert_relative_eq!((lin - exact) / exact, expect, max_relative = 1e-5);
        }
        // < 10% holds from 5.4*t0 up
        for mult in [5.4, 6.0, 10.0, 100.0] {
            let b = bath(3e-9, mult * t0);
            let lin = single_phonon_linear_approx(&d, &b).unwrap();
            let exact = single_phonon_rates(&d, &b).unwrap().gamma_up;
            assert!((lin - exact) / exact < 0.10, "deviation too big at {mult}x");
        }
    }

    #[test]
    fn linear_approx_scalings_are_exact() {
        let d1 = OrbitalDoublet::ground(50.0).unwrap();
        let d2 = OrbitalDoublet::ground(100.0).unwrap();
        let b1 = bath(3e-9, 100.0);
        let b2 = bath(3e-9, 200.0);
        let g = single_phonon_linear_approx(&d1, &b1).unwrap();
        assert_relative_eq!(
            single_phonon_linear_approx(&d1, &b2).unwrap() / g,
            2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            single_phonon_linear_approx(&d2, &b1).unwrap() / g,
            4.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn linear_approx_rejects_low_temperature() {
        let d = OrbitalDoublet::ground(50.0).unwrap();
        let b = bath(3e-9, 1.0);
        assert!(single_phonon_linear_approx(&d, &b).is_err());
    }

    #[test]
    fn two_phonon_scaling_laws() {
        let d = OrbitalDoublet::excited(260.0).unwrap();
        let g = |t: f64| two_phonon_dephasing_rate(&d, &bath(3e-9, t)).unwrap();
        assert_relative_eq!(g(200.0) / g(100.0), 8.0, max_relative = 1e-12);
        let d_half = OrbitalDoublet::excited(130.0).unwrap();
        let b = bath(3e-9, 100.0);
        assert_relative_eq!(
            two_phonon_dephasing_rate(&d, &b).unwrap()
                / two_phonon_dephasing_rate(&d_half, &b).unwrap(),
            4.0,
            max_relative = 1e-12
        );
        assert!(two_phonon_dephasing_rate(&d, &bath(3e-9, 0.0)).is_err());
        // the lowest-order-in-Delta law needs the scale separation
        let too_big = OrbitalDoublet::excited(520.0).unwrap();
        assert!(two_phonon_dephasing_rate(&too_big, &b).is_err());
    }

    #[test]
    fn two_phonon_validity_window() {
        let d = OrbitalDoublet::excited(260.0).unwrap();
        assert!(!two_phonon_in_validity(&d, &bath(1e-9, 15.0)));
        assert!(two_phonon_in_validity(&d, &bath(1e-9, 100.0)));
        assert!(!two_phonon_in_validity(&d, &bath(1e-9, 500.0)));
    }

    #[test]
    fn dephasing_matches_calibrated_high_t_slope() {
        // calibrate chi_d to the 0.12 MHz/K^3 coefficient, then check the
        // quoted difference gamma_d(100K) - gamma_d(70K) in MHz.
        let d = OrbitalDoublet::excited(260.0).unwrap();
        let coeff = 0.12;
        let chi_d = (coeff / (1e3 * (PI * PI / 3.0) * 260.0f64.powi(2) * GHZ_PER_KELVIN.powi(3)))
            .sqrt();
        let g = |t: f64| {
            rate_to_fwhm_mhz(two_phonon_dephasing_rate(&d, &bath(chi_d, t)).unwrap())
        };
        let diff = g(100.0) - g(70.0);
        assert_relative_eq!(diff, 0.12 * (100.0f64.powi(3) - 70.0f64.powi(3)), max_relative = 1e-2);
    }

    #[test]
    fn raman_scaling() {
        assert_relative_eq!(
            raman_rate_scaling(1.0, 2.0).unwrap() / raman_rate_scaling(1.0, 1.0).unwrap(),
            32.0,
            max_relative = 1e-14
        );
        assert_eq!(raman_rate_scaling(0.0, 123.0).unwrap(), 0.0);
        assert_relative_eq!(
            raman_rate_scaling(1e-12, 100.0).unwrap(),
            1e-2,
            max_relative = 1e-12
        );
        assert!(raman_rate_scaling(-1.0, 10.0).is_err());
    }

    #[test]
    fn t1_model_paper_values() {
        let p = T1Params::new(0.0099, 50.0, 0.0).unwrap();
        // frozen oracle: 1012.02 ns at 1 K
        assert_relative_eq!(t1_model(&p, 1.0).unwrap(), 1012.020_737_59, max_relative = 1e-9);
        assert!((t1_model(&p, 1.0).unwrap() - 1012.0).abs() < 1.0);
    }

    #[test]
    fn t1_model_linear_slope_consistency() {
        // rate differences over equal-ish spans near-linear: frozen 1.0084
        let p = T1Params::new(0.0099, 50.0, 2.26).unwrap();
        let r = |t: f64| t1_rate(&p, t).unwrap();
        let ratio = (r(22.0) - r(12.0)) / 10.0 / ((r(12.0) - r(6.78)) / 5.22);
        assert_relative_eq!(ratio, 1.008_413_8, max_relative = 1e-5);
        assert!((ratio - 1.0).abs() < 0.1);
    }

    #[test]
    fn t1_diverges_at_offset() {
        let p = T1Params::new(0.0099, 50.0, 2.26).unwrap();
        assert!(t1_model(&p, 2.26).is_err());
        assert!(t1_model(&p, 2.0).is_err());
        assert!(t1_model(&p, 2.2600001).unwrap() > 1e6);
        // strictly decreasing
        assert!(t1_model(&p, 5.0).unwrap() > t1_model(&p, 6.0).unwrap());
    }

    #[test]
    fn linewidth_floor_and_monotonicity() {
        let params = LinewidthParams {
            gamma_r_per_ns: 0.103 * TAU,
            nr_model: Some(MottSeitzParams::new(1.7, 3.3, 55.0).unwrap()),
            doublet_u: OrbitalDoublet::excited(260.0).unwrap(),
            bath: bath(1.88e-8, 0.0),
            dephasing_chi_rho: Some(2.44e-7),
        };
        let floor = linewidth_model(&params, 0.0).unwrap();
        assert_relative_eq!(floor, rate_to_fwhm_mhz(0.103 * TAU), max_relative = 1e-14);
        let mut prev = floor;
        for i in 1..=70 {
            let t = i as f64 * 5.0;
            let g = linewidth_model(&params, t).unwrap();
            assert!(g >= prev, "linewidth not monotone at {t} K");
            prev = g;
        }
    }

    #[test]
    fn budget_paper_anchors() {
        let calib = T1Params::new(1.0 / 101.0, 50.0, 0.0).unwrap();
        let b = bath(0.0, 0.0);
        let rows = coherence_budget(&b, &[50.0], &[0.26, 1.0], &calib).unwrap();
        // frozen oracle: 1.0292 ms at 0.26 K, 1011.9 ns at 1 K
        assert_relative_eq!(rows[0].inv_gamma_up_ns, 1_029_244.909_82, max_relative = 1e-9);
        assert_relative_eq!(rows[1].inv_gamma_up_ns, 1_011.919_535_51, max_relative = 1e-9);
    }

    #[test]
    fn budget_spontaneous_emission_persists_at_low_t() {
        let calib = T1Params::new(1.0 / 101.0, 50.0, 0.0).unwrap();
        let b = bath(0.0, 0.0);
        let rows = coherence_budget(&b, &[50.0], &[0.05, 0.26], &calib).unwrap();
        // 1/gamma+ explodes as T -> 0 while 1/gamma- approaches 101 ns
        assert!(rows[0].inv_gamma_up_ns > 100.0 * rows[1].inv_gamma_up_ns);
        assert_relative_eq!(rows[0].inv_gamma_down_ns, 101.0, max_relative = 1e-6);
    }

    #[test]
    fn budget_rejects_empty_grids() {
        let calib = T1Params::new(0.0099, 50.0, 0.0).unwrap();
        let b = bath(0.0, 0.0);
        assert!(coherence_budget(&b, &[], &[1.0], &calib).is_err());
        assert!(coherence_budget(&b, &[50.0], &[], &calib).is_err());
    }
}
