//! Published summary indicators for ten leading authors in polymer solar
//! cells research, with the correlation block printed alongside them.
//!
//! Raw citation vectors were never published, so rows carry the printed
//! (P, i, eta, h) inputs and the printed (z, i_E, C) values for checking
//! reconstructions against.

use crate::analytics::{AnalyticsTable, Cell, Origin, PortfolioSummary, SummaryTriple};
use crate::dimension::{Dimension, Quantity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedRow {
    pub author: &'static str,
    pub papers: u64,
    pub impact: f64,
    pub eta: f64,
    pub h: u64,
    pub z: f64,
    pub euclidean: f64,
    pub citations: f64,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    author: &'static str,
    papers: u64,
    impact: f64,
    eta: f64,
    h: u64,
    z: f64,
    euclidean: f64,
    citations: f64,
) -> PrintedRow {
    PrintedRow {
        author,
        papers,
        impact,
        eta,
        h,
        z,
        euclidean,
        citations,
    }
}

/// In published order (descending P).
pub const ROWS: [PrintedRow; 10] = [
    row("LI YF", 142, 33.25, 0.20, 34, 31.41, 891.42, 4721.0),
    row("KREBS FC", 96, 73.05, 0.24, 41, 49.69, 1462.71, 7013.0),
    row("YANG Y", 78, 128.65, 0.12, 37, 53.69, 3281.34, 10035.0),
    row("JANSSEN RAJ", 56, 53.32, 0.17, 24, 30.13, 962.81, 2986.0),
    row("HOU JH", 45, 99.89, 0.17, 21, 42.15, 1640.71, 4495.0),
    row("JEN AKY", 45, 48.71, 0.42, 23, 35.51, 504.50, 2192.0),
    row("CAO Y", 44, 38.73, 0.18, 15, 22.97, 599.26, 1704.0),
    row("KIM H", 44, 9.55, 0.26, 11, 10.18, 123.38, 420.0),
    row("YIP HL", 44, 49.82, 0.43, 23, 36.05, 504.50, 2192.0),
    row("ZHANG FL", 44, 62.32, 0.32, 23, 37.86, 733.40, 2742.0),
];

/// Column order of the published table.
pub const COLUMNS: [&str; 7] = ["P", "i", "eta", "h", "z", "i_E", "C"];

/// Published correlation coefficients, rows and columns in [`COLUMNS`] order.
pub const CORRELATION: [[f64; 7]; 7] = [
    [1.00, 0.04, -0.35, 0.74, 0.27, 0.29, 0.53],
    [0.04, 1.00, -0.41, 0.55, 0.88, 0.92, 0.83],
    [-0.35, -0.41, 1.00, -0.24, -0.14, -0.60, -0.52],
    [0.74, 0.55, -0.24, 1.00, 0.81, 0.65, 0.86],
    [0.27, 0.88, -0.14, 0.81, 1.00, 0.78, 0.85],
    [0.29, 0.92, -0.60, 0.65, 0.78, 1.00, 0.94],
    [0.53, 0.83, -0.52, 0.86, 0.85, 0.94, 1.00],
];

fn column_dims() -> Vec<(String, Dimension)> {
    let dims = [
        Dimension::PAPERS,
        Dimension::PAPERS,
        Dimension::DIMENSIONLESS,
        Dimension::PAPERS,
        Dimension::PAPERS,
        Dimension::EUCLIDEAN,
        Dimension::CITATIONS,
    ];
    COLUMNS
        .iter()
        .zip(dims)
        .map(|(n, d)| (n.to_string(), d))
        .collect()
}

pub fn summaries() -> Vec<PortfolioSummary<f64>> {
    ROWS.iter()
        .map(|r| {
            let triple = SummaryTriple::new(r.papers, r.impact, r.eta, Some(r.h))
                .expect("published summary rows are valid");
            PortfolioSummary::summary(r.author, triple)
        })
        .collect()
}

/// The table exactly as printed, every cell marked as input.
pub fn printed_table() -> AnalyticsTable<f64> {
    let mut t = AnalyticsTable::new(column_dims());
    for r in &ROWS {
        let values = [
            r.papers as f64,
            r.impact,
            r.eta,
            r.h as f64,
            r.z,
            r.euclidean,
            r.citations,
        ];
        let cells = values
            .iter()
            .zip(column_dims())
            .map(|(&v, (_, d))| Cell::new(Quantity::new(v, d).expect("finite"), Origin::Input))
            .collect();
        t.push_row(r.author, cells).expect("consistent shape");
    }
    t
}

/// The table rebuilt from (P, i, eta, h): z, i_E and C are reconstructed.
pub fn reconstructed_table() -> AnalyticsTable<f64> {
    AnalyticsTable::from_portfolios(&summaries(), Some(&COLUMNS))
        .expect("published summary rows reconstruct")
}
