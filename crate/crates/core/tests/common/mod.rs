//! Oracles shared by the integration tests. They deliberately avoid the
//! library's geometry so the comparisons are independent.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use tmgraph::drawing::Drawing;
use tmgraph::geometry::Point;

type Q = BigRational;
type P = (Q, Q);

fn pt(p: &Point) -> P {
    (p.x.clone(), p.y.clone())
}

fn orient(a: &P, b: &P, c: &P) -> i32 {
    let v = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn on_box(a: &P, b: &P, p: &P) -> bool {
    p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

/// Intersection point of two non-overlapping segments, if any.
fn meet(a: &P, b: &P, c: &P, d: &P) -> Option<P> {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    let touches = (o1 * o2 < 0 && o3 * o4 < 0)
        || (o1 == 0 && on_box(a, b, c))
        || (o2 == 0 && on_box(a, b, d))
        || (o3 == 0 && on_box(c, d, a))
        || (o4 == 0 && on_box(c, d, b));
    if !touches {
        return None;
    }
    let rx = &b.0 - &a.0;
    let ry = &b.1 - &a.1;
    let sx = &d.0 - &c.0;
    let sy = &d.1 - &c.1;
    let den = &rx * &sy - &ry * &sx;
    if den.is_zero() {
        return None;
    }
    let t = ((&c.0 - &a.0) * &sy - (&c.1 - &a.1) * &sx) / den;
    Some((&a.0 + &t * &rx, &a.1 + &t * &ry))
}

/// Crossing count by comparing every segment pair of every edge pair and
/// deduplicating meeting points, so a crossing at a bend counts once.
pub fn naive_crossings(d: &Drawing) -> usize {
    let curves: Vec<Vec<P>> = d.edges().iter().map(|e| e.curve.points().iter().map(pt).collect()).collect();
    let mut total = 0;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let ends: Vec<&P> = vec![&curves[i][0], curves[i].last().unwrap(), &curves[j][0], curves[j].last().unwrap()];
            let mut seen: BTreeSet<P> = BTreeSet::new();
            for s in curves[i].windows(2) {
                for t in curves[j].windows(2) {
                    if let Some(p) = meet(&s[0], &s[1], &t[0], &t[1]) {
                        if !ends.contains(&&p) {
                            seen.insert(p);
                        }
                    }
                }
            }
            total += seen.len();
        }
    }
    total
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}
