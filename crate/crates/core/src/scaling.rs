//! Empirical scaling exponents under portfolio replication.
//!
//! Replicating a portfolio by an integer factor `lambda` multiplies both the
//! number of papers and every paper's citation count by `lambda`. An
//! indicator of dimension `[P^d]` then grows as `lambda^d`, and a log-log
//! least-squares fit over several factors recovers `d` as the slope.

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::indicators::{CitationVector, IndicatorDescriptor};
use crate::scalar::Scalar;

pub const DEFAULT_LAMBDAS: [u32; 5] = [1, 2, 3, 4, 5];

/// Each paper is repeated `lambda` times with `lambda` times the citations.
pub fn replicate_scale(v: &CitationVector, lambda: u32) -> Result<CitationVector> {
    if lambda == 0 {
        return Err(Error::domain("replication factor must be at least 1"));
    }
    let factor = u64::from(lambda);
    let mut out = Vec::with_capacity(v.len() * lambda as usize);
    for &c in v.counts() {
        let scaled = c
            .checked_mul(factor)
            .ok_or_else(|| Error::domain(format!("replicated count {c} x {lambda} overflows")))?;
        out.extend(std::iter::repeat_n(scaled, lambda as usize));
    }
    CitationVector::new(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSeries<T> {
    lambdas: Vec<u32>,
    values: Vec<T>,
}

impl<T: Scalar> ScaleSeries<T> {
    /// Requires at least three strictly increasing positive factors and one
    /// value per factor. Positivity of the values is checked by the fit.
    pub fn new(lambdas: Vec<u32>, values: Vec<T>) -> Result<Self> {
        validate_lambdas(&lambdas)?;
        if lambdas.len() != values.len() {
            return Err(Error::DegenerateSeries {
                indicator: None,
                reason: format!("{} factors but {} values", lambdas.len(), values.len()),
            });
        }
        Ok(ScaleSeries { lambdas, values })
    }

    pub fn lambdas(&self) -> &[u32] {
        &self.lambdas
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn points(&self) -> Vec<(T, T)> {
        self.lambdas
            .iter()
            .zip(&self.values)
            .map(|(&l, &v)| (T::from_count(l as u128), v))
            .collect()
    }
}

fn validate_lambdas(lambdas: &[u32]) -> Result<()> {
    let degenerate = |reason: String| Error::DegenerateSeries {
        indicator: None,
        reason,
    };
    if lambdas.len() < 3 {
        return Err(degenerate(format!(
            "need at least 3 scale factors, got {}",
            lambdas.len()
        )));
    }
    if lambdas[0] == 0 {
        return Err(degenerate("scale factors must be positive".into()));
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(degenerate(
            "scale factors must be strictly increasing".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentEstimate<T> {
    pub slope: T,
    pub intercept: T,
    /// Largest absolute residual in log space.
    pub max_residual: T,
}

pub fn loglog_fit<T: Scalar>(series: &ScaleSeries<T>) -> Result<ExponentEstimate<T>> {
    fit_power_law(&series.points())
}

/// Least-squares fit of `ln y = slope * ln x + intercept`.
pub fn fit_power_law<T: Scalar>(points: &[(T, T)]) -> Result<ExponentEstimate<T>> {
    let degenerate = |reason: String| Error::DegenerateSeries {
        indicator: None,
        reason,
    };
    if points.len() < 3 {
        return Err(degenerate(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some((x, y)) = points
        .iter()
        .find(|(x, y)| !(*x > T::zero() && *y > T::zero()) || !x.is_finite() || !y.is_finite())
    {
        return Err(degenerate(format!(
            "non-positive point ({x}, {y}) cannot be log-transformed"
        )));
    }
    let logs: Vec<(T, T)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = T::from_count(logs.len() as u128);
    let mean_x = logs.iter().map(|p| p.0).sum::<T>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = logs.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: T = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx <= T::zero() {
        return Err(degenerate("all x coordinates coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let max_residual = logs
        .iter()
        .map(|&(x, y)| (y - (slope * x + intercept)).abs())
        .fold(T::zero(), T::max);
    Ok(ExponentEstimate {
        slope,
        intercept,
        max_residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeOutcome<T> {
    Fitted(ExponentEstimate<T>),
    /// The indicator is zero at every scale, which is consistent with any
    /// exponent.
    ExactlyZero,
}

/// Result of checking one indicator's scaling against its dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord<T> {
    pub name: String,
    pub declared: Dimension,
    pub tolerance: f64,
    pub series: ScaleSeries<T>,
    pub outcome: ProbeOutcome<T>,
    pub passed: bool,
}

impl<T: Scalar> ProbeRecord<T> {
    pub fn slope(&self) -> Option<T> {
        match &self.outcome {
            ProbeOutcome::Fitted(e) => Some(e.slope),
            ProbeOutcome::ExactlyZero => None,
        }
    }

    pub fn declared_exponent(&self) -> f64 {
        f64::from_exponent(self.declared.exponent())
    }

    /// One-line human-readable verdict.
    pub fn summary(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        match &self.outcome {
            ProbeOutcome::Fitted(e) => format!(
                "{verdict} {:<4} declared {:<14} slope {:.6} (|diff| {:.2e}, tol {:.0e}) residual {:.2e}",
                self.name,
                self.declared.to_string(),
                e.slope,
                (e.slope.as_f64() - self.declared_exponent()).abs(),
                self.tolerance,
                e.max_residual.as_f64(),
            ),
            ProbeOutcome::ExactlyZero => format!(
                "{verdict} {:<4} declared {:<14} exactly zero at all scales: consistent",
                self.name,
                self.declared.to_string(),
            ),
        }
    }
}

pub fn verify_dimension<T: Scalar>(
    desc: &IndicatorDescriptor<T>,
    base: &CitationVector,
    lambdas: &[u32],
) -> Result<ProbeRecord<T>> {
    let named = |e: Error| match e {
        Error::DegenerateSeries { reason, .. } => Error::DegenerateSeries {
            indicator: Some(desc.name.to_string()),
            reason,
        },
        other => other,
    };
    validate_lambdas(lambdas).map_err(named)?;
    let values = lambdas
        .iter()
        .map(|&l| Ok(desc.compute(&replicate_scale(base, l)?)?.magnitude()))
        .collect::<Result<Vec<T>>>()?;
    let series = ScaleSeries::new(lambdas.to_vec(), values).map_err(named)?;
    let tolerance = desc.scaling.fit_tolerance();
    let (outcome, passed) = if series.values().iter().all(|v| v.is_zero()) {
        (ProbeOutcome::ExactlyZero, true)
    } else {
        let fit = loglog_fit(&series).map_err(named)?;
        let expected = T::from_exponent(desc.declared_dim.exponent());
        let passed = (fit.slope - expected).abs().as_f64() <= tolerance;
        (ProbeOutcome::Fitted(fit), passed)
    };
    Ok(ProbeRecord {
        name: desc.name.to_string(),
        declared: desc.declared_dim,
        tolerance,
        series,
        outcome,
        passed,
    })
}

/// Probes every descriptor, in the order given.
pub fn probe_all<T: Scalar>(
    descriptors: &[IndicatorDescriptor<T>],
    base: &CitationVector,
    lambdas: &[u32],
) -> Result<Vec<ProbeRecord<T>>> {
    descriptors
        .iter()
        .map(|d| verify_dimension(d, base, lambdas))
        .collect()
}
