mod common;

use common::{binomial, naive_crossings};
use tmgraph::constructions::{convex_complete, empty_lens_gadget, even_cycle, random_polyline_drawing};
use tmgraph::drawing::LensKind;

#[test]
fn convex_complete_has_binomial_crossings() {
    for n in 4..=9u64 {
        let d = convex_complete(n as usize);
        let cr = d.crossing_number().unwrap();
        assert_eq!(cr as u64, binomial(n, 4), "n={n}");
        assert_eq!(cr, naive_crossings(&d), "n={n}");
    }
}

#[test]
fn gadgets_agree_with_naive_counter() {
    for kind in [LensKind::BetweenCrossings, LensKind::EndpointToCrossing, LensKind::FullParallelPair] {
        let d = empty_lens_gadget(kind);
        assert_eq!(d.crossing_number().unwrap(), naive_crossings(&d), "{kind:?}");
    }
    let c = even_cycle(3);
    assert_eq!(c.crossing_number().unwrap(), naive_crossings(&c));
}

#[test]
fn random_drawings_agree_with_naive_counter() {
    for seed in 0..25 {
        let d = random_polyline_drawing(7, 14, seed).unwrap();
        assert_eq!(d.crossing_number().unwrap(), naive_crossings(&d), "seed {seed}");
    }
}

#[test]
fn per_edge_counts_sum_to_twice_total() {
    let d = random_polyline_drawing(6, 12, 3).unwrap();
    let per: usize = d.crossings_per_edge().unwrap().iter().sum();
    assert_eq!(per, 2 * d.crossing_number().unwrap());
}
