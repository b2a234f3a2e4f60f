//! Phonon-limited dynamics of orbitally degenerate two-level systems.
//!
//! The crate models a colour-centre electronic structure built from two
//! orbital doublets (a ground and an excited branch) coupled to an acoustic
//! phonon bath, and provides everything needed to predict and fit the
//! temperature dependence of its observables:
//!
//! - [`units`] — physical constants, the canonical unit convention, and
//!   thermal-occupation primitives (Bose factor, detailed-balance ratio).
//! - [`rates`] — single-phonon relaxation, two-phonon elastic dephasing,
//!   high-strain Raman scaling, the composite optical-linewidth model, the
//!   orbital-T₁ law, and the coherence-budget table.
//! - [`shifts`] — thermal reduction of the spin-orbit splittings (T²), the
//!   optical line-position shift (numerical quadrature, ~T³), the
//!   thermal-expansion shift, and the Mott–Seitz non-radiative lifetime.
//! - [`dynamics`] — classical rate-equation propagation of multi-level
//!   optical pumping experiments (pump–probe T₁ protocol).
//! - [`spectra`] — four-line spectrum synthesis and Lorentzian deconvolution.
//! - [`fit`] — damped Gauss–Newton least squares with a registry of all
//!   temperature-law models, power-law exponent extraction, and
//!   information-criterion model comparison.
//!
//! # Units
//!
//! All public interfaces use one canonical unit set: frequencies in GHz
//! (ordinary frequencies, not angular), temperatures in K, times in ns,
//! energies in meV, and rates in 1/ns. Splittings convert to thermal scales
//! through `x = h·ν / (k_B·T)`, so a 50 GHz splitting corresponds to
//! 2.3996 K. See [`units`] for the exact constants.
//!
//! # Parallelism
//!
//! Grid sweeps, multi-start fits, and Monte Carlo loops run on rayon when
//! the default `parallel` feature is enabled, and fall back to equivalent
//! sequential loops when it is not. Results are identical in both modes.

pub mod dynamics;
pub mod error;
pub mod exec;
pub mod fit;
pub mod numeric;
pub mod rates;
pub mod shifts;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
