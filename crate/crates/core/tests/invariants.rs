mod common;

use common::naive_crossings;
use proptest::prelude::*;
use tmgraph::bounds::{crossing_lower_bound, LowerBound};
use tmgraph::constructions::random_polyline_drawing;
use tmgraph::drawing::LensOptions;
use tmgraph::geometry::int;
use tmgraph::io::{parse_drawing, serialize_drawing};
use tmgraph::styles::Style;
use tmgraph::transforms::{planarize, reroute_empty_lens_step, split_high_degree, RerouteOutcome};

fn small_drawing() -> impl Strategy<Value = (usize, usize, u64)> {
    (3usize..7, 0usize..12, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn serialize_then_parse_is_identity((n, e, seed) in small_drawing()) {
        let d = random_polyline_drawing(n, e, seed).unwrap();
        let text = serialize_drawing(&d);
        let back = parse_drawing(&text).unwrap();
        prop_assert_eq!(serialize_drawing(&back), text);
        prop_assert_eq!(back.crossing_number().unwrap(), d.crossing_number().unwrap());
    }

    #[test]
    fn crossing_count_matches_naive((n, e, seed) in small_drawing()) {
        let d = random_polyline_drawing(n, e, seed).unwrap();
        prop_assert_eq!(d.crossing_number().unwrap(), naive_crossings(&d));
    }

    #[test]
    fn planarize_adds_one_vertex_and_two_edges_per_crossing((n, e, seed) in small_drawing()) {
        let d = random_polyline_drawing(n, e, seed).unwrap();
        let cr = d.crossing_number().unwrap();
        let p = planarize(&d).unwrap();
        prop_assert_eq!(p.num_vertices(), n + cr);
        prop_assert_eq!(p.num_edges(), e + 2 * cr);
        prop_assert_eq!(p.crossing_number().unwrap(), 0);
        prop_assert!(p.is_valid());
    }

    #[test]
    fn splitting_keeps_crossings_and_caps_degree((n, e, seed) in small_drawing(), cap in 1i64..4) {
        let d = random_polyline_drawing(n, e, seed).unwrap();
        let s = split_high_degree(&d, &int(cap)).unwrap();
        prop_assert!(s.is_valid());
        prop_assert_eq!(s.num_edges(), d.num_edges());
        prop_assert_eq!(s.crossing_number().unwrap(), d.crossing_number().unwrap());
        prop_assert!(s.max_degree() <= cap.max(1) as usize);
    }

    #[test]
    fn reroute_step_lowers_crossings((n, e, seed) in small_drawing()) {
        let d = random_polyline_drawing(n, e, seed).unwrap();
        if let Ok(RerouteOutcome::Changed(next)) = reroute_empty_lens_step(&d, LensOptions::default()) {
            prop_assert!(next.is_valid());
            prop_assert_eq!(next.num_edges(), d.num_edges());
            prop_assert!(next.crossing_number().unwrap() < d.crossing_number().unwrap());
        }
    }

    #[test]
    fn lower_bound_grows_with_edges(n in 2usize..200, e in 1usize..5000, extra in 1usize..500) {
        for style in [Style::Separated, Style::Branching, Style::Multiplicity(3), Style::Girth(4)] {
            let params = style.params(Some(int(1))).unwrap();
            let a = crossing_lower_bound(n, e, &params).unwrap();
            let b = crossing_lower_bound(n, e + extra, &params).unwrap();
            match (a, b) {
                (LowerBound::Bound(x), LowerBound::Bound(y)) => prop_assert!(y >= x),
                (LowerBound::Bound(_), LowerBound::NotApplicable) => prop_assert!(false, "applicability lost"),
                _ => {}
            }
        }
    }
}
