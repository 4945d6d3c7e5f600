//! Citation indicators computed from a raw citation vector.
//!
//! Every function returns a [`Quantity`] in its declared dimension:
//!
//! | name  | formula                 | dimension     |
//! |-------|-------------------------|---------------|
//! | `P`   | number of papers        | `[P]`         |
//! | `C`   | sum of c_k              | `[P^2]`       |
//! | `i`   | C / P                   | `[P]`         |
//! | `h`   | max k with c_k >= k     | `[P]`         |
//! | `g`   | max k with top-k sum >= k^2 | `[P]`     |
//! | `X`   | i^2 P = C^2 / P         | `[P^3]`       |
//! | `E`   | sum of c_k^2            | `[P^3]`       |
//! | `S`   | E - X                   | `[P^3]`       |
//! | `eta` | X / E                   | dimensionless |
//! | `z`   | (eta i^2 P)^(1/3)       | `[P]`         |
//! | `i_E` | sqrt(E)                 | `[P^3/2]`     |
//!
//! Sums are accumulated in exact integers and only converted to the scalar
//! type at the end, so `eta == 1` exactly for uniform vectors and `S` is
//! never negative.
//!
//! The all-zero vector has `X = E = 0`; its consistency is defined as 1
//! (perfectly even, zero entropy).

use std::collections::BTreeMap;

use crate::dimension::{Dimension, Quantity};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Counts above this are not exactly representable in `f64`.
pub const MAX_COUNT: u64 = 1 << 53;

/// Citation counts of a portfolio, one entry per paper.
///
/// Stored in canonical non-increasing order; every indicator is invariant
/// under permutation of the input. An empty vector can be built but every
/// indicator rejects it with [`Error::EmptyPortfolio`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CitationVector {
    sorted: Vec<u64>,
}

impl CitationVector {
    pub fn new(mut counts: Vec<u64>) -> Result<Self> {
        if let Some(&c) = counts.iter().find(|&&c| c > MAX_COUNT) {
            return Err(Error::domain(format!(
                "citation count {c} exceeds the exactly representable maximum {MAX_COUNT}"
            )));
        }
        counts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CitationVector { sorted: counts })
    }

    /// Counts in non-increasing order.
    pub fn counts(&self) -> &[u64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.sorted.first().copied()
    }

    fn non_empty(&self) -> Result<&[u64]> {
        if self.sorted.is_empty() {
            Err(Error::EmptyPortfolio)
        } else {
            Ok(&self.sorted)
        }
    }

    fn moments(&self) -> Result<Moments> {
        let c = self.non_empty()?;
        Ok(Moments {
            papers: c.len() as u128,
            total: c.iter().map(|&x| x as u128).sum(),
            energy: c.iter().map(|&x| (x as u128) * (x as u128)).sum(),
        })
    }
}

impl TryFrom<Vec<u64>> for CitationVector {
    type Error = Error;

    fn try_from(counts: Vec<u64>) -> Result<Self> {
        CitationVector::new(counts)
    }
}

/// Exact integer sums P, C and E.
struct Moments {
    papers: u128,
    total: u128,
    energy: u128,
}

impl Moments {
    /// C^2 and P*E when both fit in u128.
    fn exact_second_order(&self) -> Option<(u128, u128)> {
        Some((
            self.total.checked_mul(self.total)?,
            self.papers.checked_mul(self.energy)?,
        ))
    }

    fn exergy<T: Scalar>(&self) -> T {
        match self.total.checked_mul(self.total) {
            Some(c2) => T::from_count(c2) / T::from_count(self.papers),
            None => {
                let c = T::from_count(self.total);
                c * (c / T::from_count(self.papers))
            }
        }
    }

    fn entropy<T: Scalar>(&self) -> T {
        match self.exact_second_order() {
            // P*E >= C^2 by Cauchy-Schwarz.
            Some((c2, pe)) => T::from_count(pe - c2) / T::from_count(self.papers),
            None => (T::from_count(self.energy) - self.exergy::<T>()).max(T::zero()),
        }
    }

    fn consistency<T: Scalar>(&self) -> T {
        if self.energy == 0 {
            return T::one();
        }
        match self.exact_second_order() {
            Some((c2, pe)) if c2 == pe => T::one(),
            Some((c2, pe)) => T::from_count(c2) / T::from_count(pe),
            None => (self.exergy::<T>() / T::from_count(self.energy)).min(T::one()),
        }
    }
}

pub fn paper_count<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let c = v.non_empty()?;
    Quantity::new(T::from_count(c.len() as u128), Dimension::PAPERS)
}

pub fn total_citations<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    Quantity::new(T::from_count(m.total), Dimension::CITATIONS)
}

pub fn mean_impact<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    Quantity::new(
        T::from_count(m.total) / T::from_count(m.papers),
        Dimension::PAPERS,
    )
}

pub fn h_index<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let c = v.non_empty()?;
    // c is non-increasing, so "c_k >= k" (1-based) holds on a prefix.
    let h = c
        .iter()
        .enumerate()
        .take_while(|&(k, &x)| x > k as u64)
        .count();
    Quantity::new(T::from_count(h as u128), Dimension::PAPERS)
}

/// Egghe's g-index, capped at the number of papers.
pub fn g_index<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let c = v.non_empty()?;
    let mut cumulative: u128 = 0;
    let mut g = 0usize;
    for (k, &x) in c.iter().enumerate() {
        cumulative += x as u128;
        let rank = (k + 1) as u128;
        if cumulative >= rank * rank {
            g = k + 1;
        }
    }
    Quantity::new(T::from_count(g as u128), Dimension::PAPERS)
}

pub fn energy<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    Quantity::new(T::from_count(m.energy), Dimension::SECOND_ORDER)
}

pub fn exergy<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    Quantity::new(m.exergy(), Dimension::SECOND_ORDER)
}

/// Dispersion of citations about the mean, `E - X`.
pub fn entropy_term<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    Quantity::new(m.entropy(), Dimension::SECOND_ORDER)
}

/// `eta = X / E`, in (0, 1]; 1 for the all-zero vector.
pub fn consistency<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    Quantity::dimensionless(m.consistency())
}

pub fn z_index<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    // eta * i^2 * P = eta * X
    let cube = m.consistency::<T>() * m.exergy::<T>();
    Quantity::new(cube.cbrt(), Dimension::PAPERS)
}

/// Euclidean length of the citation vector.
pub fn euclidean_index<T: Scalar>(v: &CitationVector) -> Result<Quantity<T>> {
    let m = v.moments()?;
    Quantity::new(T::from_count(m.energy).sqrt(), Dimension::EUCLIDEAN)
}

/// How closely an indicator follows `lambda^d` under replication scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// Scales exactly as its dimension; fitted slopes agree to 1e-6.
    Exact,
    /// Scales as its dimension only approximately (rank effects); 0.05.
    Approximate,
}

impl Scaling {
    pub fn fit_tolerance(self) -> f64 {
        match self {
            Scaling::Exact => 1e-6,
            Scaling::Approximate => 0.05,
        }
    }
}

pub type IndicatorFn<T> = fn(&CitationVector) -> Result<Quantity<T>>;

#[derive(Debug, Clone, Copy)]
pub struct IndicatorDescriptor<T> {
    pub name: &'static str,
    pub declared_dim: Dimension,
    pub scaling: Scaling,
    compute: IndicatorFn<T>,
}

impl<T: Scalar> IndicatorDescriptor<T> {
    pub const fn new(
        name: &'static str,
        declared_dim: Dimension,
        scaling: Scaling,
        compute: IndicatorFn<T>,
    ) -> Self {
        IndicatorDescriptor {
            name,
            declared_dim,
            scaling,
            compute,
        }
    }

    /// Computes the indicator and checks it came back in the declared dimension.
    pub fn compute(&self, v: &CitationVector) -> Result<Quantity<T>> {
        let q = (self.compute)(v)?;
        if q.dim() != self.declared_dim {
            return Err(Error::Heterogeneity {
                op: "indicator declaration",
                left: self.declared_dim,
                right: q.dim(),
            });
        }
        Ok(q)
    }
}

/// Registered indicator names in report order.
pub const INDICATOR_NAMES: [&str; 11] = ["P", "C", "i", "h", "g", "X", "E", "S", "eta", "z", "i_E"];

pub fn registry<T: Scalar>() -> Vec<IndicatorDescriptor<T>> {
    use Scaling::*;
    vec![
        IndicatorDescriptor::new("P", Dimension::PAPERS, Exact, paper_count::<T>),
        IndicatorDescriptor::new("C", Dimension::CITATIONS, Exact, total_citations::<T>),
        IndicatorDescriptor::new("i", Dimension::PAPERS, Exact, mean_impact::<T>),
        IndicatorDescriptor::new("h", Dimension::PAPERS, Exact, h_index::<T>),
        IndicatorDescriptor::new("g", Dimension::PAPERS, Approximate, g_index::<T>),
        IndicatorDescriptor::new("X", Dimension::SECOND_ORDER, Exact, exergy::<T>),
        IndicatorDescriptor::new("E", Dimension::SECOND_ORDER, Exact, energy::<T>),
        IndicatorDescriptor::new("S", Dimension::SECOND_ORDER, Exact, entropy_term::<T>),
        IndicatorDescriptor::new("eta", Dimension::DIMENSIONLESS, Exact, consistency::<T>),
        IndicatorDescriptor::new("z", Dimension::PAPERS, Exact, z_index::<T>),
        IndicatorDescriptor::new("i_E", Dimension::EUCLIDEAN, Exact, euclidean_index::<T>),
    ]
}

pub fn descriptor<T: Scalar>(name: &str) -> Result<IndicatorDescriptor<T>> {
    registry::<T>()
        .into_iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::UnknownIndicator(name.to_string()))
}

/// Symbol table mapping every registered indicator name to its dimension,
/// for use with [`crate::DimExpr::eval`].
pub fn indicator_symbols() -> BTreeMap<String, Dimension> {
    registry::<f64>()
        .into_iter()
        .map(|d| (d.name.to_string(), d.declared_dim))
        .collect()
}

/// Named quantities for one portfolio, in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IndicatorReport<T> {
    entries: Vec<(String, Quantity<T>)>,
}

impl<T: Scalar> IndicatorReport<T> {
    pub fn new() -> Self {
        IndicatorReport {
            entries: Vec::new(),
        }
    }

    /// Inserts or replaces `name`.
    pub fn insert(&mut self, name: impl Into<String>, q: Quantity<T>) {
        let name = name.into();
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = q,
            None => self.entries.push((name, q)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Quantity<T>> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, q)| q)
    }

    pub fn magnitude(&self, name: &str) -> Result<T> {
        self.get(name)
            .map(|q| q.magnitude())
            .ok_or_else(|| Error::UnknownIndicator(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Quantity<T>)> {
        self.entries.iter().map(|(n, q)| (n.as_str(), q))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// As a symbol table for [`crate::DimExpr::eval_quantity`].
    pub fn to_symbols(&self) -> BTreeMap<String, Quantity<T>> {
        self.entries.iter().cloned().collect()
    }
}

/// Every registered indicator for one portfolio.
pub fn compute_all<T: Scalar>(v: &CitationVector) -> Result<IndicatorReport<T>> {
    let mut report = IndicatorReport::new();
    for d in registry::<T>() {
        report.insert(d.name, d.compute(v)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(v: &[u64]) -> CitationVector {
        CitationVector::new(v.to_vec()).unwrap()
    }

    fn mag(f: IndicatorFn<f64>, v: &[u64]) -> f64 {
        f(&cv(v)).unwrap().magnitude()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn counts_and_sums() {
        assert_eq!(mag(paper_count, &[4, 2, 1]), 3.0);
        assert_eq!(mag(paper_count, &[0, 0, 0]), 3.0);
        assert_eq!(mag(total_citations, &[4, 2, 1]), 7.0);
        assert_eq!(mag(total_citations, &[0, 0, 0]), 0.0);
        assert!(close(mag(mean_impact, &[4, 2, 1]), 7.0 / 3.0, 1e-15));
        assert_eq!(mag(mean_impact, &[3, 3, 3]), 3.0);
    }

    #[test]
    fn h_and_g() {
        assert_eq!(mag(h_index, &[10, 5, 3, 2, 1]), 3.0);
        assert_eq!(mag(h_index, &[0, 0]), 0.0);
        assert_eq!(mag(h_index, &[3, 3, 3]), 3.0);
        assert_eq!(mag(h_index, &[1, 3, 10, 2, 5]), 3.0);
        assert_eq!(mag(g_index, &[10, 5, 3, 2, 1]), 4.0);
        assert_eq!(mag(g_index, &[0, 0]), 0.0);
        assert_eq!(mag(g_index, &[100]), 1.0);
    }

    #[test]
    fn second_order_terms() {
        assert_eq!(mag(energy, &[4, 2, 1]), 21.0);
        assert_eq!(mag(energy, &[3, 3, 3]), 27.0);
        assert_eq!(mag(energy, &[0, 0, 0]), 0.0);
        assert!(close(mag(exergy, &[4, 2, 1]), 49.0 / 3.0, 1e-15));
        assert_eq!(mag(exergy, &[3, 3, 3]), 27.0);
        assert_eq!(mag(exergy, &[0, 0, 0]), 0.0);
        assert!(close(mag(entropy_term, &[4, 2, 1]), 14.0 / 3.0, 1e-15));
        assert_eq!(mag(entropy_term, &[3, 3, 3]), 0.0);
        assert_eq!(mag(entropy_term, &[5]), 0.0);
    }

    #[test]
    fn consistency_values() {
        assert!(close(mag(consistency, &[4, 2, 1]), 7.0 / 9.0, 1e-15));
        assert_eq!(mag(consistency, &[3, 3, 3]), 1.0);
        assert_eq!(mag(consistency, &[0, 0, 0]), 1.0);
    }

    #[test]
    fn z_and_euclidean() {
        assert!(close(mag(z_index, &[4, 2, 1]), 7.0 / 3.0, 1e-12));
        assert!(close(mag(z_index, &[3, 3, 3]), 3.0, 1e-15));
        assert!(close(mag(euclidean_index, &[4, 2, 1]), 21f64.sqrt(), 1e-15));
        assert!(close(mag(euclidean_index, &[3, 3, 3]), 27f64.sqrt(), 1e-15));
        assert_eq!(
            euclidean_index::<f64>(&cv(&[1])).unwrap().dim(),
            Dimension::EUCLIDEAN
        );
    }

    #[test]
    fn empty_portfolio_rejected_everywhere() {
        let empty = CitationVector::default();
        for d in registry::<f64>() {
            assert_eq!(d.compute(&empty), Err(Error::EmptyPortfolio), "{}", d.name);
        }
        assert_eq!(compute_all::<f64>(&empty), Err(Error::EmptyPortfolio));
    }

    #[test]
    fn oversized_counts_rejected() {
        assert!(CitationVector::new(vec![MAX_COUNT + 1]).is_err());
        assert!(CitationVector::new(vec![MAX_COUNT]).is_ok());
    }

    #[test]
    fn huge_counts_fall_back_without_overflow() {
        let v = cv(&[MAX_COUNT; 4]);
        let r = compute_all::<f64>(&v).unwrap();
        assert_eq!(r.magnitude("eta").unwrap(), 1.0);
        assert_eq!(r.magnitude("S").unwrap(), 0.0);
    }

    #[test]
    fn compute_all_small_vector() {
        let r = compute_all::<f64>(&cv(&[4, 2, 1])).unwrap();
        let names: Vec<_> = r.names().collect();
        assert_eq!(names, INDICATOR_NAMES);
        let expect = [
            ("P", 3.0),
            ("C", 7.0),
            ("i", 7.0 / 3.0),
            ("h", 2.0),
            ("g", 2.0),
            ("E", 21.0),
            ("X", 49.0 / 3.0),
            ("S", 14.0 / 3.0),
            ("eta", 7.0 / 9.0),
            ("z", 7.0 / 3.0),
            ("i_E", 21f64.sqrt()),
        ];
        for (name, value) in expect {
            assert!(close(r.magnitude(name).unwrap(), value, 1e-12), "{name}");
        }
    }

    #[test]
    fn compute_all_zero_and_single() {
        let r = compute_all::<f64>(&cv(&[0, 0, 0])).unwrap();
        for (name, q) in r.iter() {
            let want = match name {
                "P" => 3.0,
                "eta" => 1.0,
                _ => 0.0,
            };
            assert_eq!(q.magnitude(), want, "{name}");
        }
        let r = compute_all::<f64>(&cv(&[5])).unwrap();
        for (name, value) in [
            ("P", 1.0),
            ("C", 5.0),
            ("i", 5.0),
            ("h", 1.0),
            ("g", 1.0),
            ("E", 25.0),
            ("X", 25.0),
            ("S", 0.0),
            ("eta", 1.0),
            ("z", 25f64.cbrt()),
            ("i_E", 5.0),
        ] {
            assert!(close(r.magnitude(name).unwrap(), value, 1e-12), "{name}");
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let r = compute_all::<f32>(&cv(&[4, 2, 1])).unwrap();
        assert!((r.magnitude("eta").unwrap() - 7.0f32 / 9.0).abs() < 1e-6);
        assert_eq!(r.get("i_E").unwrap().dim(), Dimension::EUCLIDEAN);
    }

    #[test]
    fn declared_dimension_enforced() {
        fn wrong(_: &CitationVector) -> Result<Quantity<f64>> {
            Quantity::new(1.0, Dimension::CITATIONS)
        }
        let d = IndicatorDescriptor::new("bogus", Dimension::PAPERS, Scaling::Exact, wrong);
        assert!(matches!(
            d.compute(&cv(&[1])),
            Err(Error::Heterogeneity { .. })
        ));
    }

    #[test]
    fn symbols_cover_registry() {
        let s = indicator_symbols();
        assert_eq!(s.len(), INDICATOR_NAMES.len());
        assert_eq!(s["i_E"], Dimension::EUCLIDEAN);
        assert_eq!(s["eta"], Dimension::DIMENSIONLESS);
        assert!(descriptor::<f64>("nope").is_err());
    }
}
