//! Registry of the temperature-law models used by the analysis pipelines.
//!
//! Every model exposes a residual (through `eval`) and a Jacobian; the
//! Jacobian is analytic wherever the derivative is cheap to write down and
//! central finite differences (relative step 1e-6) for the quadrature-backed
//! line-shift model, whose shape values are precomputed per dataset anyway.

use crate::error::{Error, Result};
use crate::fit::dataset::Dataset;
use crate::shifts::{self, ExpansionModel};
use crate::units::{boltzmann_x, constants::*, PhononBath};

/// Identifier of a registered model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelId {
    /// `y = a·x + b`
    Linear,
    /// `y = a·x^α` (optionally `+ c`)
    PowerLaw { with_offset: bool },
    /// `y = a·x^p` with a fixed exponent, e.g. the T²/T³/T⁴ comparison fits
    PowerFixed(f64),
    /// `y = c₀ + c₃·x³`
    OffsetCubic,
    /// `y = C·n(Δ, T − T_off)` — the orbital relaxation rate law
    BoseT1,
    /// `y = τ₀ / (1 + α·e^(−ΔE/k_B T))`
    MottSeitz,
    /// `y = Δ₀ − a·T²` — fine-structure splitting under the T² reduction
    SplittingT2,
    /// `y = amp · s(T)/s(300 K)` with `s` the quadrature line-shift shape
    LineShiftQuadrature,
    /// `y = A · |P(T)|` — thermal-expansion shift magnitude
    ThermalExpansion,
    /// Sum of `n` Lorentzians, parameters `(center, fwhm, area)` per peak
    LorentzianMulti(usize),
}

impl ModelId {
    /// Parse a CLI/registry name: `linear`, `power_law`, `power_law_offset`,
    /// `power2`/`power3`/`power4`, `offset_cubic`, `bose_t1`, `mott_seitz`,
    /// `splitting_t2`, `line_shift_quadrature`, `thermal_expansion`,
    /// `lorentzian:N`.
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if let Some(n) = lower.strip_prefix("lorentzian:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Usage(format!("bad peak count in '{name}'")))?;
            if n == 0 {
                return Err(Error::Usage("lorentzian model needs at least 1 peak".into()));
            }
            return Ok(Self::LorentzianMulti(n));
        }
        if let Some(p) = lower.strip_prefix("power") {
            if let Ok(exp) = p.parse::<f64>() {
                return Ok(Self::PowerFixed(exp));
            }
        }
        match lower.as_str() {
            "linear" => Ok(Self::Linear),
            "power_law" => Ok(Self::PowerLaw { with_offset: false }),
            "power_law_offset" => Ok(Self::PowerLaw { with_offset: true }),
            "offset_cubic" => Ok(Self::OffsetCubic),
            "bose_t1" => Ok(Self::BoseT1),
            "mott_seitz" => Ok(Self::MottSeitz),
            "splitting_t2" => Ok(Self::SplittingT2),
            "line_shift_quadrature" => Ok(Self::LineShiftQuadrature),
            "thermal_expansion" => Ok(Self::ThermalExpansion),
            other => Err(Error::Usage(format!(
                "unknown model '{other}'; known: linear, power_law, power_law_offset, \
                 power<N>, offset_cubic, bose_t1, mott_seitz, splitting_t2, \
                 line_shift_quadrature, thermal_expansion, lorentzian:<N>"
            ))),
        }
    }

    /// All fixed-arity ids, for registry completeness checks.
    pub fn registry() -> Vec<ModelId> {
        vec![
            Self::Linear,
            Self::PowerLaw { with_offset: false },
            Self::PowerLaw { with_offset: true },
            Self::PowerFixed(3.0),
            Self::OffsetCubic,
            Self::BoseT1,
            Self::MottSeitz,
            Self::SplittingT2,
            Self::LineShiftQuadrature,
            Self::ThermalExpansion,
            Self::LorentzianMulti(2),
        ]
    }
}

/// External context some models need: the bath cutoff for the quadrature
/// shape and the expansion table.
#[derive(Debug, Clone, Default)]
pub struct ModelContext {
    pub debye_temp_k: Option<f64>,
    pub expansion: Option<ExpansionModel>,
}

/// A parametric curve `y = f(x; θ)`.
pub trait Model: Sync + Send {
    fn name(&self) -> &str;
    fn param_names(&self) -> &[&'static str];
    fn eval(&self, x: f64, theta: &[f64]) -> f64;

    /// Fill `out[j] = ∂f/∂θ_j`. Default: central differences with relative
    /// step 1e-6.
    fn jacobian(&self, x: f64, theta: &[f64], out: &mut [f64]) {
        let mut work = theta.to_vec();
        for j in 0..theta.len() {
            let h = 1e-6 * theta[j].abs().max(1e-12);
            work[j] = theta[j] + h;
            let up = self.eval(x, &work);
            work[j] = theta[j] - h;
            let dn = self.eval(x, &work);
            work[j] = theta[j];
            out[j] = (up - dn) / (2.0 * h);
        }
    }

    fn has_analytic_jacobian(&self) -> bool {
        false
    }

    /// Heuristic starting point derived from the data.
    fn default_init(&self, data: &Dataset) -> Vec<f64>;

    /// Loose default box constraints (finite where the model demands it).
    fn default_bounds(&self, data: &Dataset) -> Vec<(f64, f64)>;
}

/// Instantiate a model for a dataset. Quadrature-backed models precompute
/// their shape values on the dataset abscissae here.
pub fn build_model(
    id: &ModelId,
    data: &Dataset,
    ctx: &ModelContext,
) -> Result<Box<dyn Model>> {
    match id {
        ModelId::Linear => Ok(Box::new(LinearModel)),
        ModelId::PowerLaw { with_offset } => Ok(Box::new(PowerLawModel {
            with_offset: *with_offset,
        })),
        ModelId::PowerFixed(p) => Ok(Box::new(PowerFixedModel { exponent: *p })),
        ModelId::OffsetCubic => Ok(Box::new(OffsetCubicModel)),
        ModelId::BoseT1 => Ok(Box::new(BoseT1Model)),
        ModelId::MottSeitz => Ok(Box::new(MottSeitzModel)),
        ModelId::SplittingT2 => Ok(Box::new(SplittingT2Model)),
        ModelId::LineShiftQuadrature => {
            let theta_d = ctx.debye_temp_k.unwrap_or(DIAMOND_DEBYE_TEMP_K);
            LineShiftQuadModel::new(theta_d, &data.xs()).map(|m| Box::new(m) as Box<dyn Model>)
        }
        ModelId::ThermalExpansion => {
            let expansion = ctx.expansion.clone().ok_or_else(|| {
                Error::Usage(
                    "thermal_expansion model needs an expansion table in the model context".into(),
                )
            })?;
            ExpansionShiftModel::new(expansion, &data.xs())
                .map(|m| Box::new(m) as Box<dyn Model>)
        }
        ModelId::LorentzianMulti(n) => Ok(Box::new(LorentzianMultiModel { n_peaks: *n })),
    }
}

// ---------------------------------------------------------------------------

struct LinearModel;

impl Model for LinearModel {
    fn name(&self) -> &str {
        "linear"
    }
    fn param_names(&self) -> &[&'static str] {
        &["slope", "intercept"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        th[0] * x + th[1]
    }
    fn jacobian(&self, x: f64, _th: &[f64], out: &mut [f64]) {
        out[0] = x;
        out[1] = 1.0;
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let n = data.len();
        let (p0, p1) = (&data.points[0], &data.points[n - 1]);
        let slope = if p1.x != p0.x {
            (p1.y - p0.y) / (p1.x - p0.x)
        } else {
            0.0
        };
        vec![slope, p0.y - slope * p0.x]
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        vec![(f64::NEG_INFINITY, f64::INFINITY); 2]
    }
}

struct PowerLawModel {
    with_offset: bool,
}

impl Model for PowerLawModel {
    fn name(&self) -> &str {
        if self.with_offset {
            "power_law_offset"
        } else {
            "power_law"
        }
    }
    fn param_names(&self) -> &[&'static str] {
        if self.with_offset {
            &["amplitude", "exponent", "offset"]
        } else {
            &["amplitude", "exponent"]
        }
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        let base = th[0] * x.powf(th[1]);
        if self.with_offset {
            base + th[2]
        } else {
            base
        }
    }
    fn jacobian(&self, x: f64, th: &[f64], out: &mut [f64]) {
        let xp = x.powf(th[1]);
        out[0] = xp;
        out[1] = th[0] * xp * x.max(f64::MIN_POSITIVE).ln();
        if self.with_offset {
            out[2] = 1.0;
        }
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        // log-log regression on |y| for the sign-uniform case
        let pts: Vec<(f64, f64)> = data
            .points
            .iter()
            .filter(|p| p.x > 0.0 && p.y != 0.0)
            .map(|p| (p.x.ln(), p.y.abs().ln()))
            .collect();
        let (mut a, mut alpha) = (1.0, 1.0);
        if pts.len() >= 2 {
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
            if sxx > 0.0 {
                alpha = sxy / sxx;
                a = (my - alpha * mx).exp();
            }
        }
        let sign = if data.points.iter().filter(|p| p.y < 0.0).count() * 2 > data.len() {
            -1.0
        } else {
            1.0
        };
        if self.with_offset {
            vec![sign * a, alpha, 0.0]
        } else {
            vec![sign * a, alpha]
        }
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        let mut b = vec![(f64::NEG_INFINITY, f64::INFINITY), (-12.0, 12.0)];
        if self.with_offset {
            b.push((f64::NEG_INFINITY, f64::INFINITY));
        }
        b
    }
}

struct PowerFixedModel {
    exponent: f64,
}

impl Model for PowerFixedModel {
    fn name(&self) -> &str {
        "power_fixed"
    }
    fn param_names(&self) -> &[&'static str] {
        &["amplitude"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        th[0] * x.powf(self.exponent)
    }
    fn jacobian(&self, x: f64, _th: &[f64], out: &mut [f64]) {
        out[0] = x.powf(self.exponent);
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let p = &data.points[data.len() / 2];
        let denom = p.x.powf(self.exponent);
        vec![if denom != 0.0 { p.y / denom } else { 1.0 }]
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        vec![(f64::NEG_INFINITY, f64::INFINITY)]
    }
}

struct OffsetCubicModel;

impl Model for OffsetCubicModel {
    fn name(&self) -> &str {
        "offset_cubic"
    }
    fn param_names(&self) -> &[&'static str] {
        &["offset", "cubic_coeff"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        th[0] + th[1] * x * x * x
    }
    fn jacobian(&self, x: f64, _th: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
        out[1] = x * x * x;
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let n = data.len();
        let (p0, p1) = (&data.points[0], &data.points[n - 1]);
        let c3 = (p1.y - p0.y) / (p1.x.powi(3) - p0.x.powi(3)).max(f64::MIN_POSITIVE);
        vec![p0.y - c3 * p0.x.powi(3), c3]
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        vec![(f64::NEG_INFINITY, f64::INFINITY); 2]
    }
}

struct BoseT1Model;

impl Model for BoseT1Model {
    fn name(&self) -> &str {
        "bose_t1"
    }
    fn param_names(&self) -> &[&'static str] {
        &["prefactor", "splitting_ghz", "temp_offset_k"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        let t_eff = x - th[2];
        if t_eff <= 0.0 || th[1] <= 0.0 {
            return 0.0;
        }
        th[0] / boltzmann_x(th[1], t_eff).exp_m1()
    }
    fn jacobian(&self, x: f64, th: &[f64], out: &mut [f64]) {
        let t_eff = x - th[2];
        if t_eff <= 0.0 || th[1] <= 0.0 {
            out.fill(0.0);
            return;
        }
        let xarg = boltzmann_x(th[1], t_eff);
        let em1 = xarg.exp_m1();
        let n = 1.0 / em1;
        let ex = em1 + 1.0;
        // dn/dxarg = -e^x / (e^x-1)^2
        let dn_dx = -ex / (em1 * em1);
        out[0] = n;
        out[1] = th[0] * dn_dx * KELVIN_PER_GHZ / t_eff;
        out[2] = th[0] * dn_dx * xarg / t_eff; // d(xarg)/dToff = +xarg/t_eff
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let p = data.points.last().unwrap();
        // in the linear regime y ~ C*T/(K_PER_GHZ*delta); seed delta at 50 GHz
        let delta = 50.0;
        let c = p.y * boltzmann_x(delta, p.x).exp_m1();
        vec![c.max(1e-12), delta, 0.0]
    }
    fn default_bounds(&self, data: &Dataset) -> Vec<(f64, f64)> {
        let x_min = data.points[0].x;
        vec![(0.0, f64::INFINITY), (1e-3, 1e5), (0.0, (x_min - 1e-9).max(0.0))]
    }
}

struct MottSeitzModel;

impl Model for MottSeitzModel {
    fn name(&self) -> &str {
        "mott_seitz"
    }
    fn param_names(&self) -> &[&'static str] {
        &["tau0_ns", "alpha", "activation_mev"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        if x <= 0.0 {
            return th[0];
        }
        let beta = th[2] / (BOLTZMANN_MEV_PER_K * x);
        th[0] / (1.0 + th[1] * (-beta).exp())
    }
    fn jacobian(&self, x: f64, th: &[f64], out: &mut [f64]) {
        if x <= 0.0 {
            out[0] = 1.0;
            out[1] = 0.0;
            out[2] = 0.0;
            return;
        }
        let kbt = BOLTZMANN_MEV_PER_K * x;
        let e = (-th[2] / kbt).exp();
        let denom = 1.0 + th[1] * e;
        out[0] = 1.0 / denom;
        out[1] = -th[0] * e / (denom * denom);
        out[2] = th[0] * th[1] * e / (kbt * denom * denom);
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let tau0 = data
            .points
            .iter()
            .map(|p| p.y)
            .fold(f64::NEG_INFINITY, f64::max);
        let tau_inf = data.points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        let alpha = (tau0 / tau_inf.max(1e-12) - 1.0).max(0.1);
        vec![tau0, alpha, 50.0]
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        vec![(1e-9, f64::INFINITY), (0.0, 1e4), (0.1, 5e3)]
    }
}

struct SplittingT2Model;

impl Model for SplittingT2Model {
    fn name(&self) -> &str {
        "splitting_t2"
    }
    fn param_names(&self) -> &[&'static str] {
        &["splitting0_ghz", "quad_coeff"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        th[0] - th[1] * x * x
    }
    fn jacobian(&self, x: f64, _th: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
        out[1] = -x * x;
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let n = data.len();
        let (p0, p1) = (&data.points[0], &data.points[n - 1]);
        let a = (p0.y - p1.y) / (p1.x * p1.x - p0.x * p0.x).max(f64::MIN_POSITIVE);
        vec![p0.y + a * p0.x * p0.x, a]
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        vec![(f64::NEG_INFINITY, f64::INFINITY); 2]
    }
}

/// Quadrature-backed line-shift model. The shape `s(T) = |I(T)|/|I(300 K)|`
/// is computed once per dataset (plus on demand for off-grid queries), so
/// fitting its single amplitude is cheap despite the integrals.
struct LineShiftQuadModel {
    theta_d: f64,
    xs: Vec<f64>,
    shape: Vec<f64>,
    norm: f64,
}

impl LineShiftQuadModel {
    fn new(theta_d: f64, xs: &[f64]) -> Result<Self> {
        let bath = PhononBath::new(1.0, theta_d, 0.0)?;
        let norm = shifts::line_shift_thermal_integral(&bath, 300.0)?.abs();
        if norm == 0.0 {
            return Err(Error::Numerical("line-shift shape norm vanished".into()));
        }
        let shape = xs
            .iter()
            .map(|&t| {
                shifts::line_shift_thermal_integral(&bath, t).map(|v| v.abs() / norm)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            theta_d,
            xs: xs.to_vec(),
            shape,
            norm,
        })
    }

    fn shape_at(&self, x: f64) -> f64 {
        if let Some(i) = self.xs.iter().position(|&v| v == x) {
            return self.shape[i];
        }
        let bath = PhononBath::new(1.0, self.theta_d, 0.0).expect("valid bath");
        shifts::line_shift_thermal_integral(&bath, x)
            .map(|v| v.abs() / self.norm)
            .unwrap_or(f64::NAN)
    }
}

impl Model for LineShiftQuadModel {
    fn name(&self) -> &str {
        "line_shift_quadrature"
    }
    fn param_names(&self) -> &[&'static str] {
        &["amplitude_at_300k"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        th[0] * self.shape_at(x)
    }
    // finite-difference Jacobian (default impl): the model is linear in its
    // amplitude so the FD derivative is exact to rounding.
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let p = data.points.last().unwrap();
        let s = self.shape_at(p.x);
        vec![if s > 0.0 { p.y / s } else { p.y }]
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        vec![(f64::NEG_INFINITY, f64::INFINITY)]
    }
}

/// Thermal-expansion shift magnitude, `y = A·|P(T)|`, linear in `A`.
struct ExpansionShiftModel {
    expansion: ExpansionModel,
    xs: Vec<f64>,
    shape: Vec<f64>,
}

impl ExpansionShiftModel {
    fn new(expansion: ExpansionModel, xs: &[f64]) -> Result<Self> {
        let shape = xs
            .iter()
            .map(|&t| expansion.negative_pressure_gpa(t).map(f64::abs))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            expansion,
            xs: xs.to_vec(),
            shape,
        })
    }

    fn shape_at(&self, x: f64) -> f64 {
        if let Some(i) = self.xs.iter().position(|&v| v == x) {
            return self.shape[i];
        }
        self.expansion
            .negative_pressure_gpa(x)
            .map(f64::abs)
            .unwrap_or(f64::NAN)
    }
}

impl Model for ExpansionShiftModel {
    fn name(&self) -> &str {
        "thermal_expansion"
    }
    fn param_names(&self) -> &[&'static str] {
        &["pressure_coeff"]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        th[0] * self.shape_at(x)
    }
    fn jacobian(&self, x: f64, _th: &[f64], out: &mut [f64]) {
        out[0] = self.shape_at(x);
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        let p = data.points.last().unwrap();
        let s = self.shape_at(p.x);
        vec![if s > 0.0 { p.y / s } else { 1.0 }]
    }
    fn default_bounds(&self, _data: &Dataset) -> Vec<(f64, f64)> {
        vec![(f64::NEG_INFINITY, f64::INFINITY)]
    }
}

/// Sum of Lorentzians, each `(area/π)·(w/2)/((x−c)² + (w/2)²)`.
struct LorentzianMultiModel {
    n_peaks: usize,
}

impl LorentzianMultiModel {
    const NAMES: [&'static str; 24] = [
        "center_0", "fwhm_0", "area_0", "center_1", "fwhm_1", "area_1", "center_2", "fwhm_2",
        "area_2", "center_3", "fwhm_3", "area_3", "center_4", "fwhm_4", "area_4", "center_5",
        "fwhm_5", "area_5", "center_6", "fwhm_6", "area_6", "center_7", "fwhm_7", "area_7",
    ];
}

impl Model for LorentzianMultiModel {
    fn name(&self) -> &str {
        "lorentzian_multi"
    }
    fn param_names(&self) -> &[&'static str] {
        &Self::NAMES[..3 * self.n_peaks.min(8)]
    }
    fn eval(&self, x: f64, th: &[f64]) -> f64 {
        let mut acc = 0.0;
        for p in 0..self.n_peaks {
            let (c, w, a) = (th[3 * p], th[3 * p + 1], th[3 * p + 2]);
            let hw = 0.5 * w;
            acc += (a / std::f64::consts::PI) * hw / ((x - c) * (x - c) + hw * hw);
        }
        acc
    }
    fn jacobian(&self, x: f64, th: &[f64], out: &mut [f64]) {
        for p in 0..self.n_peaks {
            let (c, w, a) = (th[3 * p], th[3 * p + 1], th[3 * p + 2]);
            let hw = 0.5 * w;
            let d2 = (x - c) * (x - c) + hw * hw;
            let base = hw / d2;
            out[3 * p] = (a / std::f64::consts::PI) * 2.0 * (x - c) * hw / (d2 * d2);
            out[3 * p + 1] =
                (a / std::f64::consts::PI) * 0.5 * ((x - c) * (x - c) - hw * hw) / (d2 * d2);
            out[3 * p + 2] = base / std::f64::consts::PI;
        }
    }
    fn has_analytic_jacobian(&self) -> bool {
        true
    }
    fn default_init(&self, data: &Dataset) -> Vec<f64> {
        // spread peaks across the x-range at the data's coarse maxima
        let n = data.len();
        let (x0, x1) = (data.points[0].x, data.points[n - 1].x);
        let span = (x1 - x0).max(f64::MIN_POSITIVE);
        let ymax = data.points.iter().map(|p| p.y).fold(0.0f64, f64::max);
        let w = span / (4.0 * self.n_peaks as f64);
        (0..self.n_peaks)
            .flat_map(|p| {
                let c = x0 + span * (p as f64 + 0.5) / self.n_peaks as f64;
                [c, w, ymax * w]
            })
            .collect()
    }
    fn default_bounds(&self, data: &Dataset) -> Vec<(f64, f64)> {
        let n = data.len();
        let (x0, x1) = (data.points[0].x, data.points[n - 1].x);
        let span = (x1 - x0).max(f64::MIN_POSITIVE);
        (0..self.n_peaks)
            .flat_map(|_| {
                [
                    (x0, x1),
                    (span * 1e-6, span * 10.0),
                    (0.0, f64::INFINITY),
                ]
            })
            .collect()
    }
}
