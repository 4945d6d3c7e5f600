use proptest::prelude::*;

use scindex::analytics::{
    rank_by, reconstruct_from_summary, AnalyticsTable, Cell, Origin, PortfolioSummary,
};
use scindex::indicators::{compute_all, g_index, registry, Scaling};
use scindex::io::{emit_table, TableFormat};
use scindex::scaling::{replicate_scale, verify_dimension, DEFAULT_LAMBDAS};
use scindex::{CitationVector, Dimension, Quantity};

fn cv(v: Vec<u64>) -> CitationVector {
    CitationVector::new(v).unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    // Indicators with exact scaling equal lambda^d times their base value.
    #[test]
    fn replication_scales_exactly(
        v in prop::collection::vec(0u64..5_000, 1..40),
        lambda in 1u32..=10,
    ) {
        let base = cv(v);
        let scaled = replicate_scale(&base, lambda).unwrap();
        for d in registry::<f64>().into_iter().filter(|d| d.scaling == Scaling::Exact) {
            let a = d.compute(&base).unwrap().magnitude();
            let b = d.compute(&scaled).unwrap().magnitude();
            let factor = f64::from(lambda).powf(f64::from(*d.declared_dim.exponent().numer() as i32)
                / *d.declared_dim.exponent().denom() as f64);
            prop_assert!(rel_close(b, factor * a, 1e-9) || (a == 0.0 && b == 0.0),
                "{}: {} vs {} * {}", d.name, b, factor, a);
        }
    }

    // Replication can only add ranks to g: lambda*g <= g' <= lambda*P.
    #[test]
    fn replicated_g_is_bracketed(
        v in prop::collection::vec(0u64..200, 1..30),
        lambda in 1u32..=6,
    ) {
        let base = cv(v);
        let p = base.len() as f64;
        let g = g_index::<f64>(&base).unwrap().magnitude();
        let g2 = g_index::<f64>(&replicate_scale(&base, lambda).unwrap()).unwrap().magnitude();
        let l = f64::from(lambda);
        prop_assert!(g2 >= l * g && g2 <= l * p);
    }

    #[test]
    fn h_g_ordering(v in prop::collection::vec(0u64..300, 1..50)) {
        let c = cv(v.clone());
        let r = compute_all::<f64>(&c).unwrap();
        let h = r.magnitude("h").unwrap();
        let g = r.magnitude("g").unwrap();
        let p = v.len() as f64;
        let cmax = *v.iter().max().unwrap() as f64;
        prop_assert!(h <= p.min(cmax));
        prop_assert!(g >= h);
        prop_assert!(g <= p);
    }

    #[test]
    fn ladder_identities(v in prop::collection::vec(0u64..10_000, 1..100)) {
        let r = compute_all::<f64>(&cv(v)).unwrap();
        let (p, c, i, x) = (
            r.magnitude("P").unwrap(),
            r.magnitude("C").unwrap(),
            r.magnitude("i").unwrap(),
            r.magnitude("X").unwrap(),
        );
        prop_assert!(rel_close(c, i * p, 1e-12) || c == 0.0);
        prop_assert!(rel_close(x, i * c, 1e-12) || x == 0.0);
    }

    #[test]
    fn declared_dimensions_hold(v in prop::collection::vec(0u64..1_000, 1..30)) {
        let base = cv(v);
        for d in registry::<f64>() {
            prop_assert_eq!(d.compute(&base).unwrap().dim(), d.declared_dim);
        }
    }

    #[test]
    fn reconstruction_forward_check(p in 1u64..500, i in 0.01f64..500.0, eta in 0.001f64..=1.0) {
        let r = reconstruct_from_summary(p, i, eta).unwrap();
        let back = r.magnitude("X").unwrap() / r.magnitude("E").unwrap();
        prop_assert!(rel_close(back, eta, 1e-12));
    }

    #[test]
    fn raw_vector_matches_own_summary(v in prop::collection::vec(0u64..5_000, 1..60)) {
        prop_assume!(v.iter().any(|&c| c > 0));
        let direct = compute_all::<f64>(&cv(v.clone())).unwrap();
        let r = reconstruct_from_summary(
            v.len() as u64,
            direct.magnitude("i").unwrap(),
            direct.magnitude("eta").unwrap(),
        ).unwrap();
        for name in ["C", "X", "E", "z", "i_E"] {
            prop_assert!(rel_close(r.magnitude(name).unwrap(), direct.magnitude(name).unwrap(), 1e-9), "{}", name);
        }
    }

    #[test]
    fn rank_is_invariant_under_monotone_rescaling(
        values in prop::collection::vec(0.0f64..1e4, 3..12),
        scale in 0.001f64..1000.0,
        shift in -100.0f64..100.0,
    ) {
        let build = |f: &dyn Fn(f64) -> f64| {
            let mut t = AnalyticsTable::new(vec![("C".to_string(), Dimension::CITATIONS)]);
            for (k, &v) in values.iter().enumerate() {
                let q = Quantity::new(f(v), Dimension::CITATIONS).unwrap();
                t.push_row(format!("a{k:02}"), vec![Cell::new(q, Origin::Input)]).unwrap();
            }
            rank_by(&t, "C").unwrap()
        };
        prop_assert_eq!(build(&|v| v), build(&|v| scale * v + shift));
        prop_assert_eq!(build(&|v| v), build(&|v| v.powi(3)));
    }

    #[test]
    fn full_precision_table_reparses(vs in prop::collection::vec(prop::collection::vec(0u64..100_000, 1..30), 1..6)) {
        let portfolios: Vec<PortfolioSummary<f64>> = vs
            .iter()
            .enumerate()
            .map(|(k, v)| PortfolioSummary::raw(format!("p{k}"), cv(v.clone())))
            .collect();
        let t = AnalyticsTable::from_portfolios(&portfolios, None).unwrap();
        let text = emit_table(&t, TableFormat::Tsv, None);
        for (line, row) in text.lines().skip(2).zip(t.rows()) {
            let parsed: Vec<f64> = line.split('\t').skip(1).map(|s| s.parse().unwrap()).collect();
            for (a, cell) in parsed.iter().zip(&row.cells) {
                let b = cell.value.magnitude();
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}

/// Known g-index departures from linear replication scaling.
#[test]
fn g_replication_counterexamples() {
    let seq = |base: Vec<u64>| -> Vec<f64> {
        let base = cv(base);
        DEFAULT_LAMBDAS
            .iter()
            .map(|&l| {
                g_index::<f64>(&replicate_scale(&base, l).unwrap())
                    .unwrap()
                    .magnitude()
            })
            .collect()
    };
    assert_eq!(seq(vec![4, 2, 1]), [2.0, 5.0, 7.0, 10.0, 12.0]);
    assert_eq!(seq(vec![10, 5, 3, 2, 1]), [4.0, 9.0, 13.0, 18.0, 22.0]);

    let g = registry::<f64>()
        .into_iter()
        .find(|d| d.name == "g")
        .unwrap();
    let rec = verify_dimension(&g, &cv(vec![10, 5, 3, 2, 1]), &DEFAULT_LAMBDAS).unwrap();
    assert!((rec.slope().unwrap() - 1.0574).abs() < 1e-3);
    // g capped at P scales exactly.
    let rec = verify_dimension(&g, &cv(vec![50, 40, 30]), &DEFAULT_LAMBDAS).unwrap();
    assert!(rec.passed && (rec.slope().unwrap() - 1.0).abs() < 1e-12);
}
