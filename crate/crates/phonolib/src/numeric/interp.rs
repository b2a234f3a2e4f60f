//! Monotone piecewise-cubic interpolation (Fritsch–Carlson limited Hermite)
//! with exact segment integration, used for tabulated thermal-expansion
//! coefficients.

use crate::error::{Error, Result};

/// Shape-preserving cubic interpolant through strictly increasing abscissae.
///
/// Slopes start from three-point finite differences and are limited so the
/// interpolant never overshoots monotone data. Evaluation outside the table
/// range is an error — no extrapolation.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
    /// Cumulative integral of the interpolant from xs[0] to each knot.
    cumulative: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Usage(format!(
                "interpolation table length mismatch: {} x vs {} y",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Usage("interpolation table needs at least 2 rows".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage(
                "interpolation abscissae must be strictly increasing".into(),
            ));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Usage("interpolation table contains non-finite values".into()));
        }

        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let mut slopes = vec![0.0; n];
        slopes[0] = d[0];
        slopes[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                // weighted harmonic mean (Fritsch-Butland), automatically
                // within the Fritsch-Carlson monotonicity region
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        let mut cumulative = vec![0.0; n];
        for i in 0..n - 1 {
            // exact integral of the cubic Hermite segment
            let seg = h[i] * (0.5 * (ys[i] + ys[i + 1]) + h[i] * (slopes[i] - slopes[i + 1]) / 12.0);
            cumulative[i + 1] = cumulative[i] + seg;
        }

        Ok(Self {
            xs,
            ys,
            slopes,
            cumulative,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn segment_of(&self, x: f64) -> Result<usize> {
        if x < self.x_min() || x > self.x_max() {
            return Err(Error::Domain(format!(
                "query {x} outside table range [{}, {}]; extrapolation is not performed",
                self.x_min(),
                self.x_max()
            )));
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i - 1,
        };
        Ok(i)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let i = self.segment_of(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(t);
        Ok(h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1])
    }

    /// Integral of the interpolant from the first knot to `x`, exact for the
    /// piecewise-cubic representation.
    pub fn integral_from_start(&self, x: f64) -> Result<f64> {
        let i = self.segment_of(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        // integrals of the Hermite basis polynomials over [0, t]
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let ih00 = t - t3 + 0.5 * t4;
        let ih10 = 0.5 * t2 - (2.0 / 3.0) * t3 + 0.25 * t4;
        let ih01 = t3 - 0.5 * t4;
        let ih11 = 0.25 * t4 - t3 / 3.0;
        let partial = h
            * (ih00 * self.ys[i]
                + ih10 * h * self.slopes[i]
                + ih01 * self.ys[i + 1]
                + ih11 * h * self.slopes[i + 1]);
        Ok(self.cumulative[i] + partial)
    }
}

#[inline]
fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}
