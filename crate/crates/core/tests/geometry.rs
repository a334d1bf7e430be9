mod common;

use common::oracle::{hull_distance_exact, hull_distance_grid};
use hullsep::geometry::{hull_distance, max_margin_separator, point_in_hull, HullOptions};
use hullsep::PointSet;
use proptest::prelude::*;

fn point_set(max_points: usize, dim: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), 1..=max_points)
        .prop_map(|rows| PointSet::from_rows(&rows).unwrap())
}

fn pair(max_points: usize) -> impl Strategy<Value = (PointSet, PointSet)> {
    (1usize..=3).prop_flat_map(move |d| (point_set(max_points, d), point_set(max_points, d)))
}

fn solve(a: &PointSet, b: &PointSet) -> hullsep::HullDistanceResult {
    hull_distance(a, b, 1e-10, 10_000).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matches_support_enumeration((a, b) in pair(5)) {
        let exact = hull_distance_exact(&a, &b);
        let r = solve(&a, &b);
        prop_assert!((r.distance - exact).abs() < 1e-6, "solver {} exact {}", r.distance, exact);
    }

    #[test]
    fn bracket_contains_distance((a, b) in pair(6)) {
        let r = solve(&a, &b);
        let exact = hull_distance_exact(&a, &b);
        prop_assert!(r.lower_bound <= exact + 1e-9);
        prop_assert!(r.distance >= exact - 1e-9);
        prop_assert!(r.lower_bound <= r.distance + 1e-12);
    }

    #[test]
    fn never_beats_the_grid((a, b) in pair(3)) {
        let r = solve(&a, &b);
        prop_assert!(r.distance <= hull_distance_grid(&a, &b, 12) + 1e-9);
    }

    #[test]
    fn witnesses_are_convex_combinations((a, b) in pair(5)) {
        let r = solve(&a, &b);
        for (coeffs, set, w) in [(&r.coeffs_a, &a, &r.witness_a), (&r.coeffs_b, &b, &r.witness_b)] {
            prop_assert!(coeffs.iter().all(|&c| c >= 0.0));
            prop_assert!((coeffs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for (k, wk) in w.iter().enumerate() {
                let v: f64 = coeffs.iter().enumerate().map(|(i, c)| c * set.point(i)[k]).sum();
                prop_assert!((v - wk).abs() < 1e-9);
            }
        }
        let gap: f64 = r.witness_a.iter().zip(&r.witness_b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        prop_assert!((gap - r.distance).abs() < 1e-9);
    }

    #[test]
    fn symmetric_and_rigid((a, b) in pair(5), shift in prop::collection::vec(-10.0..10.0f64, 3), s in 0.01..100.0f64) {
        let d = solve(&a, &b).distance;
        prop_assert!((solve(&b, &a).distance - d).abs() < 1e-7 * (1.0 + d));
        let v = &shift[..a.dim()];
        let moved = solve(&a.translated(v).unwrap(), &b.translated(v).unwrap()).distance;
        prop_assert!((moved - d).abs() < 1e-7 * (1.0 + d));
        let scaled = solve(&a.scaled(s), &b.scaled(s)).distance;
        prop_assert!((scaled - s * d).abs() < 1e-7 * (1.0 + s * d));
    }

    #[test]
    fn separator_splits_strictly((a, b) in pair(5)) {
        let d = hull_distance_exact(&a, &b);
        prop_assume!(d > 1e-3);
        let p = max_margin_separator(&a, &b, 1e-9).unwrap();
        prop_assert!(a.iter().all(|x| p.eval(x) < 0.0));
        prop_assert!(b.iter().all(|x| p.eval(x) > 0.0));
        prop_assert!((p.margin - d).abs() < 1e-6);
    }

    #[test]
    fn vertices_are_in_their_hull(a in (1usize..=3).prop_flat_map(|d| point_set(6, d))) {
        for p in a.iter() {
            prop_assert!(point_in_hull(p, &a, 1e-9).unwrap());
        }
    }
}

#[test]
fn default_options_are_sane() {
    let o = HullOptions::default();
    assert!(o.rel_tol > 0.0 && o.max_iter > 0);
}
