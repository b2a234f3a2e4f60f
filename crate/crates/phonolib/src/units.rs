//! Physical constants, the canonical unit convention, and thermal-occupation
//! primitives shared by every other module.
//!
//! # Unit convention
//!
//! - frequency: GHz, always an **ordinary** frequency ν (cycles per second),
//!   never an angular one;
//! - temperature: K;
//! - time: ns;
//! - energy: meV;
//! - rate: 1/ns.
//!
//! Splittings pair with temperatures through the dimensionless argument
//! `x = h·ν / (k_B·T)` — with `h`, not `ħ`, because splittings are ordinary
//! frequencies. Under this convention a 50 GHz splitting corresponds to a
//! thermal temperature of `50 · KELVIN_PER_GHZ ≈ 2.3996 K`, which is the
//! only reading that makes the conventional pairing of "50 GHz" with
//! "≈ 2.4 K" self-consistent. The absolute scale of the bath coupling
//! `χρ` absorbs any residual 2π bookkeeping.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub mod constants {
    //! SI-2019 exact constants and derived conversion factors.

    /// Planck constant (J·s), exact.
    pub const PLANCK_J_S: f64 = 6.626_070_15e-34;

    /// Boltzmann constant (J/K), exact.
    pub const BOLTZMANN_J_K: f64 = 1.380_649e-23;

    /// Elementary charge (C), exact.
    pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;

    /// Thermal temperature of a 1 GHz quantum: h·(1 GHz)/k_B ≈ 0.047992 K.
    pub const KELVIN_PER_GHZ: f64 = PLANCK_J_S * 1e9 / BOLTZMANN_J_K;

    /// k_B/h ≈ 20.8366 GHz per kelvin.
    pub const GHZ_PER_KELVIN: f64 = 1.0 / KELVIN_PER_GHZ;

    /// Photon energy of a 1 GHz quantum ≈ 4.1357e-3 meV.
    pub const MEV_PER_GHZ: f64 = PLANCK_J_S * 1e9 / ELEMENTARY_CHARGE_C * 1e3;

    /// Boltzmann constant ≈ 0.086173 meV/K.
    pub const BOLTZMANN_MEV_PER_K: f64 = BOLTZMANN_J_K / ELEMENTARY_CHARGE_C * 1e3;

    /// Default Debye temperature of diamond (K). The bath model only needs
    /// a cutoff scale; override through [`super::PhononBath`] / the config
    /// file for other hosts.
    pub const DIAMOND_DEBYE_TEMP_K: f64 = 2230.0;
}

use constants::*;

/// Dimensionless Bose argument `x = h·Δ / (k_B·T)`.
#[inline]
pub fn boltzmann_x(delta_ghz: f64, temperature_k: f64) -> f64 {
    KELVIN_PER_GHZ * delta_ghz / temperature_k
}

/// Convert a decay-rate contribution (1/ns) to a FWHM contribution in MHz.
///
/// The composite linewidth bookkeeping counts each rate as `rate / 2π`
/// of ordinary-frequency width; the bath calibration constants absorb the
/// remaining convention freedom.
#[inline]
pub fn rate_to_fwhm_mhz(rate_per_ns: f64) -> f64 {
    rate_per_ns / std::f64::consts::TAU * 1e3
}

/// Bose–Einstein occupation `n(Δ, T) = 1/(exp(hΔ/k_BT) − 1)`.
///
/// Returns exactly 0 at `T = 0`. Stable from `x ≈ 1e-9` (Laurent expansion
/// below `x = 1e-6`) up to `x ≈ 700`; beyond that the occupation underflows
/// to 0, which is returned silently.
pub fn bose_occupation(delta_ghz: f64, temperature_k: f64) -> Result<f64> {
    if !(delta_ghz > 0.0) {
        return Err(Error::Domain(format!(
            "bose_occupation requires a positive splitting, got {delta_ghz} GHz"
        )));
    }
    if temperature_k < 0.0 || !temperature_k.is_finite() {
        return Err(Error::Domain(format!(
            "bose_occupation requires T >= 0, got {temperature_k} K"
        )));
    }
    if temperature_k == 0.0 {
        return Ok(0.0);
    }
    let x = boltzmann_x(delta_ghz, temperature_k);
    if x < 1e-6 {
        // Laurent expansion 1/(e^x−1) = 1/x − 1/2 + x/12 − ...
        Ok(1.0 / x - 0.5 + x / 12.0)
    } else {
        Ok(1.0 / x.exp_m1())
    }
}

/// Detailed-balance ratio `γ₋/γ₊ = exp(hΔ/k_BT) = (n+1)/n`.
///
/// `T = 0` returns `f64::INFINITY` as a documented sentinel (the downward
/// rate stays finite while the upward rate vanishes).
pub fn thermal_ratio(delta_ghz: f64, temperature_k: f64) -> Result<f64> {
    if !(delta_ghz > 0.0) {
        return Err(Error::Domain(format!(
            "thermal_ratio requires a positive splitting, got {delta_ghz} GHz"
        )));
    }
    if temperature_k < 0.0 || !temperature_k.is_finite() {
        return Err(Error::Domain(format!(
            "thermal_ratio requires T >= 0, got {temperature_k} K"
        )));
    }
    if temperature_k == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(boltzmann_x(delta_ghz, temperature_k).exp())
}

/// Acoustic-bath parameters.
///
/// `chi_rho` is the single coupling–density proportionality product of the
/// linear electron–phonon interaction, in units fixed so the first-order
/// rate law `γ = 2π·χρ·Δ³·n` comes out in 1/ns when Δ is in GHz. It is
/// always a calibrated (fitted) constant, never predicted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhononBath {
    /// Coupling–density product (1/ns per GHz³).
    pub chi_rho: f64,
    /// Debye cutoff temperature Θ_D (K); the cutoff frequency is
    /// `Ω = k_B·Θ_D / h`.
    pub debye_temp_k: f64,
    /// Bath temperature (K).
    pub temperature_k: f64,
}

impl PhononBath {
    pub fn new(chi_rho: f64, debye_temp_k: f64, temperature_k: f64) -> Result<Self> {
        if !(chi_rho >= 0.0) {
            return Err(Error::Domain(format!("chi_rho must be >= 0, got {chi_rho}")));
        }
        if !(debye_temp_k > 0.0) {
            return Err(Error::Domain(format!(
                "debye_temp_k must be > 0, got {debye_temp_k}"
            )));
        }
        if !(temperature_k >= 0.0) {
            return Err(Error::Domain(format!(
                "temperature_k must be >= 0, got {temperature_k}"
            )));
        }
        Ok(Self {
            chi_rho,
            debye_temp_k,
            temperature_k,
        })
    }

    /// Same bath at a different temperature.
    pub fn at_temperature(&self, temperature_k: f64) -> Result<Self> {
        Self::new(self.chi_rho, self.debye_temp_k, temperature_k)
    }

    /// Debye cutoff as an ordinary frequency, `Ω = k_B·Θ_D/h` (GHz).
    pub fn debye_cutoff_ghz(&self) -> f64 {
        GHZ_PER_KELVIN * self.debye_temp_k
    }

    /// Scale separation required by the second-order laws (two-phonon
    /// dephasing, splitting shift), which expand to lowest order in Δ/Ω.
    pub(crate) fn require_second_order_scale(&self, delta_ghz: f64) -> Result<()> {
        let omega = self.debye_cutoff_ghz();
        if omega / delta_ghz <= 100.0 {
            return Err(Error::Precondition(format!(
                "Debye cutoff {omega:.1} GHz is not >> splitting {delta_ghz:.1} GHz \
                 (need Omega/Delta > 100)"
            )));
        }
        Ok(())
    }

    /// Weaker requirement for the resonant one-phonon process: the mode at
    /// Δ must exist well inside the acoustic branch.
    pub(crate) fn require_single_phonon_scale(&self, delta_ghz: f64) -> Result<()> {
        let omega = self.debye_cutoff_ghz();
        if omega / delta_ghz < 10.0 {
            return Err(Error::Precondition(format!(
                "splitting {delta_ghz:.1} GHz too close to the Debye cutoff \
                 {omega:.1} GHz (need Omega/Delta >= 10)"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fifty_ghz_is_2p3996_kelvin() {
        // 50 GHz <-> hv/kB = 2.3996215366831106 K with the SI-2019 constants.
        assert_relative_eq!(
            50.0 * KELVIN_PER_GHZ,
            2.399_621_536_683_110_6,
            max_relative = 1e-15
        );
    }

    #[test]
    fn bose_zero_at_absolute_zero() {
        assert_eq!(bose_occupation(50.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bose_at_4k_matches_oracle() {
        // 1/(exp(2.3996215.../4) - 1), frozen from a 40-digit evaluation.
        assert_relative_eq!(
            bose_occupation(50.0, 4.0).unwrap(),
            1.216_624_333_607_735_8,
            max_relative = 1e-14
        );
    }

    #[test]
    fn bose_rayleigh_jeans_limit() {
        let n = bose_occupation(50.0, 1000.0).unwrap();
        let rj = 1000.0 / (50.0 * KELVIN_PER_GHZ) - 0.5;
        assert!((n - rj).abs() / n < 5e-3, "n={n} rj={rj}");
        // and much tighter in practice: the next Laurent term is x/12
        assert!((n - rj).abs() / n < 1e-6);
    }

    #[test]
    fn bose_small_argument_series_agrees_with_exp_m1_at_the_seam() {
        // the Laurent branch and 1/exp_m1 must agree at x = 1e-6 to well
        // below the next neglected term (x^3/720 ~ 1e-21 relative)
        for x in [1e-7f64, 5e-7, 1e-6, 2e-6] {
            let series = 1.0 / x - 0.5 + x / 12.0;
            let direct = 1.0 / x.exp_m1();
            assert_relative_eq!(series, direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn bose_underflows_to_zero_for_huge_arguments() {
        // x = 0.048*50000/2 well beyond 709 -> exp overflow -> n = 0
        assert_eq!(bose_occupation(50_000.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn bose_rejects_bad_inputs() {
        assert!(bose_occupation(0.0, 4.0).is_err());
        assert!(bose_occupation(-3.0, 4.0).is_err());
        assert!(bose_occupation(50.0, -1.0).is_err());
    }

    #[test]
    fn thermal_ratio_matches_oracle() {
        // exp(2.3996215.../4), frozen from a 40-digit evaluation.
        assert_relative_eq!(
            thermal_ratio(50.0, 4.0).unwrap(),
            1.821_946_407_264_956_3,
            max_relative = 1e-14
        );
    }

    #[test]
    fn thermal_ratio_classical_limit() {
        // ratio -> 1 as T -> infinity (x = 2.4e-9 at 1e9 K)
        assert_relative_eq!(thermal_ratio(50.0, 1e9).unwrap(), 1.0, max_relative = 1e-8);
    }

    #[test]
    fn thermal_ratio_is_e_at_the_thermal_temperature() {
        // T chosen so that h*delta = kB*T exactly.
        let t = 50.0 * KELVIN_PER_GHZ;
        assert_relative_eq!(
            thermal_ratio(50.0, t).unwrap(),
            std::f64::consts::E,
            max_relative = 1e-14
        );
    }

    #[test]
    fn thermal_ratio_infinite_at_zero_temperature() {
        assert_eq!(thermal_ratio(50.0, 0.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn bath_validation() {
        assert!(PhononBath::new(-1.0, 2230.0, 4.0).is_err());
        assert!(PhononBath::new(1e-8, 0.0, 4.0).is_err());
        assert!(PhononBath::new(1e-8, 2230.0, -4.0).is_err());
        let b = PhononBath::new(1e-8, 2230.0, 4.0).unwrap();
        assert_relative_eq!(b.debye_cutoff_ghz(), 46_465.66, max_relative = 1e-4);
        assert!(b.require_second_order_scale(50.0).is_ok());
        assert!(b.require_second_order_scale(1600.0).is_err());
        assert!(b.require_single_phonon_scale(1600.0).is_ok());
        assert!(b.require_single_phonon_scale(8000.0).is_err());
    }
}
