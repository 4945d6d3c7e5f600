//! Multi-portfolio tables, summary reconstruction, correlation and ranking.

use std::cmp::Ordering;

use crate::dimension::{Dimension, Exponent, Quantity};
use crate::error::{Error, Result};
use crate::indicators::{compute_all, CitationVector, IndicatorReport, INDICATOR_NAMES};
use crate::scalar::Scalar;

/// The summary triple (P, i, eta), plus h when it was published alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryTriple<T> {
    pub papers: u64,
    pub impact: T,
    pub eta: T,
    pub h: Option<u64>,
}

impl<T: Scalar> SummaryTriple<T> {
    pub fn new(papers: u64, impact: T, eta: T, h: Option<u64>) -> Result<Self> {
        validate_summary(papers, impact, eta)?;
        Ok(SummaryTriple {
            papers,
            impact,
            eta,
            h,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PortfolioSource<T> {
    Raw(CitationVector),
    Summary(SummaryTriple<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioSummary<T> {
    pub label: String,
    pub source: PortfolioSource<T>,
}

impl<T: Scalar> PortfolioSummary<T> {
    pub fn raw(label: impl Into<String>, v: CitationVector) -> Self {
        PortfolioSummary {
            label: label.into(),
            source: PortfolioSource::Raw(v),
        }
    }

    pub fn summary(label: impl Into<String>, triple: SummaryTriple<T>) -> Self {
        PortfolioSummary {
            label: label.into(),
            source: PortfolioSource::Summary(triple),
        }
    }

    /// Indicators for this portfolio with the provenance of each value.
    pub fn report(&self) -> Result<Vec<(String, Cell<T>)>> {
        match &self.source {
            PortfolioSource::Raw(v) => Ok(compute_all::<T>(v)?
                .iter()
                .map(|(n, q)| (n.to_string(), Cell::new(*q, Origin::Computed)))
                .collect()),
            PortfolioSource::Summary(t) => {
                let report = reconstruct_from_summary(t.papers, t.impact, t.eta)?;
                let mut cells: Vec<(String, Cell<T>)> = report
                    .iter()
                    .map(|(n, q)| {
                        let origin = if matches!(n, "P" | "i" | "eta") {
                            Origin::Input
                        } else {
                            Origin::Reconstructed
                        };
                        (n.to_string(), Cell::new(*q, origin))
                    })
                    .collect();
                if let Some(h) = t.h {
                    let q = Quantity::new(T::from_count(h as u128), Dimension::PAPERS)?;
                    cells.push(("h".into(), Cell::new(q, Origin::Input)));
                }
                Ok(cells)
            }
        }
    }
}

fn validate_summary<T: Scalar>(papers: u64, impact: T, eta: T) -> Result<()> {
    if papers == 0 {
        return Err(Error::domain("summary P must be at least 1"));
    }
    if !(impact.is_finite() && impact >= T::zero()) {
        return Err(Error::domain(format!(
            "summary impact i must be finite and non-negative, got {impact}"
        )));
    }
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(Error::domain(format!(
            "summary consistency eta must lie in (0, 1], got {eta}"
        )));
    }
    Ok(())
}

/// Derives C, X, E, S, z and i_E from (P, i, eta).
///
/// `h` and `g` depend on the shape of the citation distribution and cannot
/// be recovered, so they are absent.
pub fn reconstruct_from_summary<T: Scalar>(
    papers: u64,
    impact: T,
    eta: T,
) -> Result<IndicatorReport<T>> {
    validate_summary(papers, impact, eta)?;
    let p = Quantity::new(T::from_count(papers as u128), Dimension::PAPERS)?;
    let i = Quantity::new(impact, Dimension::PAPERS)?;
    let eta_q = Quantity::dimensionless(eta)?;
    let c = i.mul(&p)?;
    let x = i.mul(&c)?;
    let e = x.div(&eta_q)?;
    let s = e.checked_sub(&x)?;
    let z = eta_q.mul(&x)?.pow(Exponent::new(1, 3))?;
    let i_e = e.pow(Exponent::new(1, 2))?;

    let mut r = IndicatorReport::new();
    r.insert("P", p);
    r.insert("C", c);
    r.insert("i", i);
    r.insert("X", x);
    r.insert("E", e);
    r.insert("S", s);
    r.insert("eta", eta_q);
    r.insert("z", z);
    r.insert("i_E", i_e);
    Ok(r)
}

/// Where a table value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Computed from a raw citation vector.
    Computed,
    /// Supplied directly by the input (or a published table).
    Input,
    /// Derived from a summary triple.
    Reconstructed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell<T> {
    pub value: Quantity<T>,
    pub origin: Origin,
}

impl<T> Cell<T> {
    pub fn new(value: Quantity<T>, origin: Origin) -> Self {
        Cell { value, origin }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow<T> {
    pub label: String,
    pub cells: Vec<Cell<T>>,
}

/// Labelled rows sharing one ordered, dimensioned column set.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticsTable<T> {
    columns: Vec<(String, Dimension)>,
    rows: Vec<TableRow<T>>,
}

impl<T: Scalar> AnalyticsTable<T> {
    pub fn new(columns: Vec<(String, Dimension)>) -> Self {
        AnalyticsTable {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, label: impl Into<String>, cells: Vec<Cell<T>>) -> Result<()> {
        let label = label.into();
        if cells.len() != self.columns.len() {
            return Err(Error::domain(format!(
                "row `{label}` has {} cells for {} columns",
                cells.len(),
                self.columns.len()
            )));
        }
        for ((name, dim), cell) in self.columns.iter().zip(&cells) {
            if cell.value.dim() != *dim {
                return Err(Error::domain(format!(
                    "row `{label}`, column `{name}`: expected {dim}, got {}",
                    cell.value.dim()
                )));
            }
        }
        self.rows.push(TableRow { label, cells });
        Ok(())
    }

    /// Builds a table from portfolios. Without an explicit column list the
    /// registered indicators available for every portfolio are used.
    pub fn from_portfolios(
        portfolios: &[PortfolioSummary<T>],
        columns: Option<&[&str]>,
    ) -> Result<Self> {
        let reports = portfolios
            .iter()
            .map(|p| p.report())
            .collect::<Result<Vec<_>>>()?;
        let has = |cells: &[(String, Cell<T>)], name: &str| cells.iter().any(|(n, _)| n == name);
        let names: Vec<String> = match columns {
            Some(cols) => cols.iter().map(|s| s.to_string()).collect(),
            None => INDICATOR_NAMES
                .iter()
                .filter(|n| reports.iter().all(|r| has(r, n)))
                .map(|s| s.to_string())
                .collect(),
        };
        let dim_of = |name: &str| -> Result<Dimension> {
            crate::indicators::descriptor::<T>(name).map(|d| d.declared_dim)
        };
        let mut table = AnalyticsTable::new(
            names
                .iter()
                .map(|n| Ok((n.clone(), dim_of(n)?)))
                .collect::<Result<Vec<_>>>()?,
        );
        for (p, cells) in portfolios.iter().zip(reports) {
            let row = names
                .iter()
                .map(|n| {
                    cells
                        .iter()
                        .find(|(c, _)| c == n)
                        .map(|(_, cell)| *cell)
                        .ok_or_else(|| {
                            Error::UnknownIndicator(format!(
                                "{n} (not available for `{}`)",
                                p.label
                            ))
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            table.push_row(p.label.clone(), row)?;
        }
        Ok(table)
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column_dims(&self) -> impl Iterator<Item = Dimension> + '_ {
        self.columns.iter().map(|(_, d)| *d)
    }

    pub fn rows(&self) -> &[TableRow<T>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownIndicator(name.to_string()))
    }

    pub fn column_values(&self, name: &str) -> Result<Vec<T>> {
        let idx = self.column_index(name)?;
        Ok(self
            .rows
            .iter()
            .map(|r| r.cells[idx].value.magnitude())
            .collect())
    }

    /// Restricts the table to the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnalyticsTable {
            columns: idx.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| TableRow {
                    label: r.label.clone(),
                    cells: idx.iter().map(|&i| r.cells[i]).collect(),
                })
                .collect(),
        })
    }
}

/// Pearson's r, or `None` if either input has zero variance.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    assert_eq!(x.len(), y.len(), "pearson inputs differ in length");
    let n = T::from_count(x.len() as u128);
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx <= T::zero() || syy <= T::zero() {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).max(-T::one()).min(T::one()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T> {
    pub columns: Vec<String>,
    pub values: Vec<Vec<T>>,
}

impl<T: Scalar> CorrelationMatrix<T> {
    pub fn get(&self, a: &str, b: &str) -> Option<T> {
        let i = self.columns.iter().position(|c| c == a)?;
        let j = self.columns.iter().position(|c| c == b)?;
        Some(self.values[i][j])
    }
}

/// Symmetric matrix of Pearson coefficients with an exact unit diagonal.
pub fn pearson_matrix<T: Scalar>(
    table: &AnalyticsTable<T>,
    columns: &[&str],
) -> Result<CorrelationMatrix<T>> {
    if table.rows().len() < 3 {
        return Err(Error::domain(format!(
            "correlation needs at least 3 rows, got {}",
            table.rows().len()
        )));
    }
    let data = columns
        .iter()
        .map(|c| table.column_values(c))
        .collect::<Result<Vec<_>>>()?;
    for (name, col) in columns.iter().zip(&data) {
        if col.iter().all(|&v| v == col[0]) {
            return Err(Error::ZeroVariance {
                column: name.to_string(),
            });
        }
    }
    let k = columns.len();
    let mut values = vec![vec![T::one(); k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let r = pearson(&data[a], &data[b]).ok_or_else(|| Error::ZeroVariance {
                column: columns[a].to_string(),
            })?;
            values[a][b] = r;
            values[b][a] = r;
        }
    }
    Ok(CorrelationMatrix {
        columns: columns.iter().map(|s| s.to_string()).collect(),
        values,
    })
}

/// Labels by descending magnitude of `indicator`; ties go to the
/// lexicographically smaller label.
pub fn rank_by<T: Scalar>(table: &AnalyticsTable<T>, indicator: &str) -> Result<Vec<String>> {
    let values = table.column_values(indicator)?;
    let mut order: Vec<(&str, T)> = table
        .rows()
        .iter()
        .map(|r| r.label.as_str())
        .zip(values)
        .collect();
    order.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });
    Ok(order.into_iter().map(|(l, _)| l.to_string()).collect())
}
