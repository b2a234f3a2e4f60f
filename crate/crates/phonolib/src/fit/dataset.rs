//! Measurement series with per-point uncertainties.

use crate::error::{Error, Result};
use serde::Serialize;

/// One `(x, y, σ)` sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
}

/// A sorted measurement series.
///
/// Points are sorted by `x` on construction. Missing uncertainties are
/// replaced by unit weights and the dataset is flagged `unweighted`, which
/// propagates into fit results (their covariances are then scaled by the
/// reduced χ² out of necessity rather than choice).
#[derive(Debug, Clone, Serialize)]
pub struct Dataset {
    pub points: Vec<DataPoint>,
    pub x_unit: String,
    pub y_unit: String,
    pub source: String,
    pub unweighted: bool,
}

impl Dataset {
    pub fn new(xs: &[f64], ys: &[f64], sigmas: Option<&[f64]>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Usage(format!(
                "dataset length mismatch: {} x vs {} y",
                xs.len(),
                ys.len()
            )));
        }
        if let Some(s) = sigmas {
            if s.len() != xs.len() {
                return Err(Error::Usage(format!(
                    "dataset length mismatch: {} x vs {} sigma",
                    xs.len(),
                    s.len()
                )));
            }
            if s.iter().any(|&v| !(v > 0.0)) {
                return Err(Error::Domain("all sigmas must be positive".into()));
            }
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("dataset contains non-finite values".into()));
        }
        let mut points: Vec<DataPoint> = (0..xs.len())
            .map(|i| DataPoint {
                x: xs[i],
                y: ys[i],
                sigma: sigmas.map_or(1.0, |s| s[i]),
            })
            .collect();
        points.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
        Ok(Self {
            points,
            x_unit: String::new(),
            y_unit: String::new(),
            source: String::new(),
            unweighted: sigmas.is_none(),
        })
    }

    pub fn with_units(mut self, x_unit: &str, y_unit: &str) -> Self {
        self.x_unit = x_unit.to_string();
        self.y_unit = y_unit.to_string();
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.y).collect()
    }

    /// Parse `x,value[,sigma]` CSV with a mandatory header row and `#`
    /// comments. Units are the suffix of each header column name after the
    /// last underscore (`temperature_k` → `k`); when `expected_units`
    /// is given, both are validated. Duplicate abscissae are merged by
    /// inverse-variance averaging with a warning.
    ///
    /// Returns the dataset plus human-readable warnings.
    pub fn from_csv_str(
        csv: &str,
        expected_units: Option<(&str, &str)>,
    ) -> Result<(Self, Vec<String>)> {
        let mut warnings = Vec::new();
        let mut header: Option<Vec<String>> = None;
        let mut rows: Vec<(f64, f64, Option<f64>)> = Vec::new();
        let mut any_sigma = false;
        for (lineno, raw) in csv.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if header.is_none() {
                if cols.len() < 2 || cols.len() > 3 {
                    return Err(Error::Parse(format!(
                        "header at line {} must name 2 or 3 columns, got {}",
                        lineno + 1,
                        cols.len()
                    )));
                }
                if cols[0].parse::<f64>().is_ok() {
                    return Err(Error::Parse(format!(
                        "missing header row: line {} looks like data",
                        lineno + 1
                    )));
                }
                header = Some(cols.iter().map(|c| c.to_string()).collect());
                continue;
            }
            if cols.len() < 2 || cols.len() > 3 {
                return Err(Error::Parse(format!(
                    "row at line {} must have 2 or 3 columns, got {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let x: f64 = cols[0].parse().map_err(|_| {
                Error::Parse(format!("bad x value '{}' at line {}", cols[0], lineno + 1))
            })?;
            let y: f64 = cols[1].parse().map_err(|_| {
                Error::Parse(format!("bad y value '{}' at line {}", cols[1], lineno + 1))
            })?;
            let sigma = if cols.len() == 3 && !cols[2].is_empty() {
                let s: f64 = cols[2].parse().map_err(|_| {
                    Error::Parse(format!("bad sigma '{}' at line {}", cols[2], lineno + 1))
                })?;
                if !(s > 0.0) {
                    return Err(Error::Parse(format!(
                        "sigma must be positive at line {}",
                        lineno + 1
                    )));
                }
                any_sigma = true;
                Some(s)
            } else {
                None
            };
            rows.push((x, y, sigma));
        }
        let header = header.ok_or_else(|| Error::Parse("file has no header row".into()))?;
        if rows.is_empty() {
            return Err(Error::Parse("file has no data rows".into()));
        }

        let unit_of = |name: &str| -> String {
            name.rsplit('_').next().unwrap_or("").to_ascii_lowercase()
        };
        let x_unit = unit_of(&header[0]);
        let y_unit = unit_of(&header[1]);
        if let Some((ex, ey)) = expected_units {
            if x_unit != ex.to_ascii_lowercase() {
                return Err(Error::Usage(format!(
                    "x column unit mismatch: expected '{ex}', file has '{x_unit}' \
                     (column '{}')",
                    header[0]
                )));
            }
            if y_unit != ey.to_ascii_lowercase() {
                return Err(Error::Usage(format!(
                    "y column unit mismatch: expected '{ey}', file has '{y_unit}' \
                     (column '{}')",
                    header[1]
                )));
            }
        }

        if !any_sigma {
            warnings.push("no sigma column: using unit weights (unweighted fit)".to_string());
        }

        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // merge duplicates by inverse-variance averaging
        let mut merged: Vec<(f64, f64, Option<f64>)> = Vec::with_capacity(rows.len());
        for row in rows {
            match merged.last_mut() {
                Some(last) if last.0 == row.0 => {
                    let s_a = last.2.unwrap_or(1.0);
                    let s_b = row.2.unwrap_or(1.0);
                    let (w_a, w_b) = (1.0 / (s_a * s_a), 1.0 / (s_b * s_b));
                    last.1 = (last.1 * w_a + row.1 * w_b) / (w_a + w_b);
                    let s_new = (1.0 / (w_a + w_b)).sqrt();
                    last.2 = if any_sigma { Some(s_new) } else { None };
                    warnings.push(format!(
                        "duplicate x = {} merged by inverse-variance averaging",
                        row.0
                    ));
                }
                _ => merged.push(row),
            }
        }

        let xs: Vec<f64> = merged.iter().map(|r| r.0).collect();
        let ys: Vec<f64> = merged.iter().map(|r| r.1).collect();
        let sigmas: Option<Vec<f64>> = if any_sigma {
            Some(merged.iter().map(|r| r.2.unwrap_or(1.0)).collect())
        } else {
            None
        };
        let ds = Self::new(&xs, &ys, sigmas.as_deref())?.with_units(&x_unit, &y_unit);
        Ok((ds, warnings))
    }
}
