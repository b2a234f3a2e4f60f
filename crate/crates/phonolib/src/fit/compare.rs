//! Power-law exponent extraction and information-criterion model ranking.

use crate::error::{Error, Result};
use crate::fit::dataset::Dataset;
use crate::fit::engine::{fit_model, FitOptions, FitResult};
use crate::fit::models::{build_model, Model, ModelContext, ModelId};
use serde::Serialize;

/// Fit `y = a·x^α` (plus an additive offset when `with_offset`) and return
/// `(α, σ_α)`.
///
/// Requires strictly one-signed `y` unless the offset is enabled to absorb
/// the baseline, and at least 6 points.
pub fn power_law_exponent(data: &Dataset, with_offset: bool) -> Result<(f64, f64)> {
    if data.len() < 6 {
        return Err(Error::Usage(format!(
            "power-law exponent extraction needs >= 6 points, got {}",
            data.len()
        )));
    }
    if !with_offset {
        let pos = data.points.iter().filter(|p| p.y > 0.0).count();
        let neg = data.points.iter().filter(|p| p.y < 0.0).count();
        if pos > 0 && neg > 0 {
            return Err(Error::Domain(
                "data mixes signs; fit with an offset or take magnitudes".into(),
            ));
        }
    }
    let id = ModelId::PowerLaw { with_offset };
    let model = build_model(&id, data, &ModelContext::default())?;
    let init = model.default_init(data);
    let bounds = model.default_bounds(data);
    let fit = fit_model(
        model.as_ref(),
        data,
        &init,
        &FitOptions {
            bounds: Some(bounds),
            ..Default::default()
        },
    )?;
    let alpha = fit.param("exponent").expect("power law has an exponent");
    let sigma = fit.sigma("exponent").expect("power law has an exponent");
    Ok((alpha, sigma))
}

/// One entry of a model-comparison report.
#[derive(Debug, Serialize)]
pub struct ComparisonEntry {
    pub model: String,
    /// Second-order (small-sample) corrected information criterion:
    /// `AICc = χ² + 2k + 2k(k+1)/(n−k−1)`, valid for Gaussian residuals
    /// with known per-point σ.
    pub aicc: Option<f64>,
    pub delta_aicc: Option<f64>,
    pub n_params: usize,
    pub chi2: Option<f64>,
    pub fit: Option<FitResult>,
    pub error: Option<String>,
}

/// Ranked model comparison on a shared dataset.
#[derive(Debug, Serialize)]
pub struct ComparisonReport {
    /// Entries sorted best-first (successful fits by AICc, failures last).
    pub entries: Vec<ComparisonEntry>,
}

impl ComparisonReport {
    pub fn best(&self) -> Option<&ComparisonEntry> {
        self.entries.first().filter(|e| e.aicc.is_some())
    }
}

fn aicc(chi2: f64, n: usize, k: usize) -> Option<f64> {
    if n <= k + 1 {
        return None;
    }
    let (n, k) = (n as f64, k as f64);
    Some(chi2 + 2.0 * k + 2.0 * k * (k + 1.0) / (n - k - 1.0))
}

/// Fit every candidate and rank by AICc. Individual fit failures are
/// recorded per-model; the comparison proceeds with the survivors.
pub fn compare_models(
    ids: &[ModelId],
    data: &Dataset,
    ctx: &ModelContext,
    opts: &FitOptions,
) -> Result<ComparisonReport> {
    if ids.is_empty() {
        return Err(Error::Usage("model comparison needs at least one candidate".into()));
    }
    let mut entries: Vec<ComparisonEntry> = ids
        .iter()
        .map(|id| {
            let attempt = (|| -> Result<(Box<dyn Model>, FitResult)> {
                let model = build_model(id, data, ctx)?;
                let init = model.default_init(data);
                let bounds = model.default_bounds(data);
                let fit = fit_model(
                    model.as_ref(),
                    data,
                    &init,
                    &FitOptions {
                        bounds: Some(bounds),
                        ..opts.clone()
                    },
                )?;
                Ok((model, fit))
            })();
            match attempt {
                Ok((model, fit)) => ComparisonEntry {
                    model: model.name().to_string(),
                    aicc: aicc(fit.chi2, fit.n_points, fit.n_params),
                    delta_aicc: None,
                    n_params: fit.n_params,
                    chi2: Some(fit.chi2),
                    fit: Some(fit),
                    error: None,
                },
                Err(e) => ComparisonEntry {
                    model: format!("{id:?}"),
                    aicc: None,
                    delta_aicc: None,
                    n_params: 0,
                    chi2: None,
                    fit: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    if entries.iter().all(|e| e.aicc.is_none()) {
        return Err(Error::FitFailed(
            "every candidate model failed to fit".into(),
        ));
    }
    entries.sort_by(|a, b| match (a.aicc, b.aicc) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    let best = entries[0].aicc;
    if let Some(best) = best {
        for e in &mut entries {
            e.delta_aicc = e.aicc.map(|a| a - best);
        }
    }
    Ok(ComparisonReport { entries })
}
