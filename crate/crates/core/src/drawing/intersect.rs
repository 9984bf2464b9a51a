//! Pairwise curve intersection analysis: crossings and general-position
//! violations, computed once per drawing and cached.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use super::validate::Violation;
use super::{Drawing, EdgeId};
use crate::geometry::{
    cross, hpoint_to_point, intersect_h, line_crossing, param_on, strictly_ccw_between, BoxF,
    HPoint, Hit, Point, Polyline, Scalar,
};

/// A position on a polyline: segment index and parameter `t` in `[0, 1)`.
/// Lexicographic order follows the curve.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurvePos {
    pub seg: usize,
    pub t: Scalar,
}

impl CurvePos {
    pub fn start() -> Self {
        CurvePos {
            seg: 0,
            t: Scalar::zero(),
        }
    }

    /// The position of the last point of `curve`.
    pub fn end(curve: &Polyline) -> Self {
        CurvePos {
            seg: curve.num_segments(),
            t: Scalar::zero(),
        }
    }

    pub fn point(&self, curve: &Polyline) -> Point {
        if self.t.is_zero() {
            return curve.points()[self.seg].clone();
        }
        let (a, b) = curve.segment(self.seg);
        a.lerp(b, &self.t)
    }
}

/// A proper crossing between two edges (indices with `edges.0 < edges.1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub edges: (usize, usize),
    pub ids: (EdgeId, EdgeId),
    pub point: Point,
    pub pos: (CurvePos, CurvePos),
    /// Rank of this crossing among all crossings along each of the two curves.
    pub order: (usize, usize),
}

pub(crate) struct PreparedCurve {
    pub(crate) h: Vec<HPoint>,
    seg_box: Vec<BoxF>,
    bbox: BoxF,
}

impl PreparedCurve {
    pub(crate) fn new(curve: &Polyline) -> Self {
        let pts = curve.points();
        let h: Vec<HPoint> = pts.iter().map(HPoint::from).collect();
        let seg_box = pts.windows(2).map(BoxF::of).collect();
        PreparedCurve {
            h,
            seg_box,
            bbox: BoxF::of(pts),
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Analysis {
    pub(crate) crossings: Vec<Crossing>,
    pub(crate) violations: Vec<Violation>,
    pair_counts: HashMap<(usize, usize), usize>,
    /// For each edge, indices into `crossings` sorted along the curve.
    pub(crate) along: Vec<Vec<usize>>,
}

impl Analysis {
    pub(crate) fn pair_count(&self, i: usize, j: usize) -> usize {
        let key = (i.min(j), i.max(j));
        self.pair_counts.get(&key).copied().unwrap_or(0)
    }

    /// Crossings between edges `i` and `j`, in order along edge `i`.
    pub(crate) fn pair_crossings(&self, i: usize, j: usize) -> Vec<&Crossing> {
        self.along[i]
            .iter()
            .map(|&k| &self.crossings[k])
            .filter(|c| c.edges == (i.min(j), i.max(j)))
            .collect()
    }

    pub(crate) fn compute(d: &Drawing) -> Analysis {
        let prepared: Vec<PreparedCurve> = d
            .edges()
            .iter()
            .map(|e| PreparedCurve::new(&e.curve))
            .collect();
        let mut violations = Vec::new();
        let mut raw: Vec<(usize, usize, Point, CurvePos, CurvePos)> = Vec::new();

        for (i, e) in d.edges().iter().enumerate() {
            if let Some(p) = self_intersection(&e.curve, &prepared[i]) {
                violations.push(Violation::SelfIntersection {
                    edge: e.id.clone(),
                    at: p,
                });
            }
        }

        for (vi, v) in d.vertices().iter().enumerate() {
            let hv = HPoint::from(&v.location);
            let vb = BoxF::of(std::slice::from_ref(&v.location));
            for (ei, e) in d.edges().iter().enumerate() {
                let (a, b) = d.endpoints(ei);
                if a == vi || b == vi || !prepared[ei].bbox.meets(&vb) {
                    continue;
                }
                let pc = &prepared[ei];
                let hit = (0..e.curve.num_segments()).any(|s| {
                    pc.seg_box[s].meets(&vb)
                        && pc.h[s].orient(&pc.h[s + 1], &hv) == 0
                        && hv.in_box(&pc.h[s], &pc.h[s + 1])
                });
                if hit {
                    violations.push(Violation::VertexOnEdgeInterior {
                        vertex: v.id.clone(),
                        edge: e.id.clone(),
                        at: v.location.clone(),
                    });
                }
            }
        }

        let m = d.num_edges();
        for i in 0..m {
            for j in i + 1..m {
                if !prepared[i].bbox.meets(&prepared[j].bbox) {
                    continue;
                }
                pair_intersections(
                    d,
                    i,
                    j,
                    &prepared[i],
                    &prepared[j],
                    &mut raw,
                    &mut violations,
                );
            }
        }

        // No three edges through one crossing point.
        let mut at_point: BTreeMap<&Point, BTreeSet<usize>> = BTreeMap::new();
        let mut pairs_at: BTreeMap<&Point, usize> = BTreeMap::new();
        for (i, j, p, _, _) in &raw {
            let s = at_point.entry(p).or_default();
            s.insert(*i);
            s.insert(*j);
            *pairs_at.entry(p).or_default() += 1;
        }
        for (p, es) in &at_point {
            if es.len() >= 3 || pairs_at[p] > 1 {
                violations.push(Violation::TripleCrossing {
                    edges: es.iter().map(|&k| d.edges()[k].id.clone()).collect(),
                    at: (*p).clone(),
                });
            }
        }

        raw.sort_by(|a, b| (a.0, a.1, &a.3).cmp(&(b.0, b.1, &b.3)));
        let mut crossings: Vec<Crossing> = raw
            .into_iter()
            .map(|(i, j, point, pi, pj)| Crossing {
                edges: (i, j),
                ids: (d.edges()[i].id.clone(), d.edges()[j].id.clone()),
                point,
                pos: (pi, pj),
                order: (0, 0),
            })
            .collect();
        let mut along: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (k, c) in crossings.iter().enumerate() {
            along[c.edges.0].push(k);
            along[c.edges.1].push(k);
        }
        for (e, list) in along.iter_mut().enumerate() {
            let pos_on = |k: usize| {
                let c = &crossings[k];
                if c.edges.0 == e {
                    c.pos.0.clone()
                } else {
                    c.pos.1.clone()
                }
            };
            list.sort_by_key(|&k| pos_on(k));
        }
        for (e, list) in along.iter().enumerate() {
            for (rank, &k) in list.iter().enumerate() {
                if crossings[k].edges.0 == e {
                    crossings[k].order.0 = rank;
                } else {
                    crossings[k].order.1 = rank;
                }
            }
        }
        let mut pair_counts = HashMap::new();
        for c in &crossings {
            *pair_counts.entry(c.edges).or_insert(0) += 1;
        }
        Analysis {
            crossings,
            violations,
            pair_counts,
            along,
        }
    }
}

fn self_intersection(curve: &Polyline, pc: &PreparedCurve) -> Option<Point> {
    let m = curve.num_segments();
    for s in 0..m {
        for t in s + 2..m {
            if !pc.seg_box[s].meets(&pc.seg_box[t]) {
                continue;
            }
            match intersect_h(&pc.h[s], &pc.h[s + 1], &pc.h[t], &pc.h[t + 1]) {
                Hit::Empty => {}
                Hit::Proper => {
                    let (a, b) = curve.segment(s);
                    let (c, dd) = curve.segment(t);
                    return Some(line_crossing(a, b, c, dd).2);
                }
                Hit::Touch(k) => {
                    let idx = [s, s + 1, t, t + 1][k as usize];
                    return Some(curve.points()[idx].clone());
                }
                Hit::Overlap => return Some(curve.points()[t].clone()),
            }
        }
    }
    None
}

/// Segment pairs of two curves whose boxes meet, by a sweep over `x`.
fn candidate_pairs(pi: &PreparedCurve, pj: &PreparedCurve) -> Vec<(usize, usize)> {
    let near = |pc: &PreparedCurve, other: &BoxF| -> Vec<usize> {
        let mut v: Vec<usize> = (0..pc.seg_box.len())
            .filter(|&s| pc.seg_box[s].meets(other))
            .collect();
        v.sort_by(|&a, &b| pc.seg_box[a].lo.0.total_cmp(&pc.seg_box[b].lo.0));
        v
    };
    let a = near(pi, &pj.bbox);
    let b = near(pj, &pi.bbox);
    let mut out = Vec::new();
    let (mut ia, mut ib) = (0, 0);
    let mut active_a: Vec<usize> = Vec::new();
    let mut active_b: Vec<usize> = Vec::new();
    while ia < a.len() || ib < b.len() {
        let take_a =
            ib >= b.len() || (ia < a.len() && pi.seg_box[a[ia]].lo.0 <= pj.seg_box[b[ib]].lo.0);
        if take_a {
            let s = a[ia];
            ia += 1;
            let bx = &pi.seg_box[s];
            active_b.retain(|&t| pj.seg_box[t].hi.0 >= bx.lo.0);
            out.extend(
                active_b
                    .iter()
                    .filter(|&&t| bx.meets(&pj.seg_box[t]))
                    .map(|&t| (s, t)),
            );
            active_a.push(s);
        } else {
            let t = b[ib];
            ib += 1;
            let bx = &pj.seg_box[t];
            active_a.retain(|&s| pi.seg_box[s].hi.0 >= bx.lo.0);
            out.extend(
                active_a
                    .iter()
                    .filter(|&&s| bx.meets(&pi.seg_box[s]))
                    .map(|&s| (s, t)),
            );
            active_b.push(t);
        }
    }
    out
}

/// Locate `p` on a curve it is known to lie on: either an interior bend
/// (returned as `(k, true)`) or the interior of segment `k`.
fn locate(curve: &Polyline, pc: &PreparedCurve, p: &Point) -> (usize, bool) {
    let pts = curve.points();
    if let Some(k) = pts.iter().position(|q| q == p) {
        return (k, true);
    }
    let hp = HPoint::from(p);
    for s in 0..curve.num_segments() {
        if pc.h[s].orient(&pc.h[s + 1], &hp) == 0 && hp.in_box(&pc.h[s], &pc.h[s + 1]) {
            return (s, false);
        }
    }
    unreachable!("contact point lies on the curve")
}

/// Directions of the two curve branches leaving `p`.
fn branches(curve: &Polyline, at: (usize, bool), p: &Point) -> (Point, Point) {
    let pts = curve.points();
    match at {
        (k, true) => (pts[k - 1].sub(p), pts[k + 1].sub(p)),
        (s, false) => (pts[s].sub(p), pts[s + 1].sub(p)),
    }
}

fn pos_of(curve: &Polyline, at: (usize, bool), p: &Point) -> CurvePos {
    match at {
        (k, true) => CurvePos {
            seg: k,
            t: Scalar::zero(),
        },
        (s, false) => {
            let (a, b) = curve.segment(s);
            CurvePos {
                seg: s,
                t: param_on(a, b, p),
            }
        }
    }
}

fn pair_intersections(
    d: &Drawing,
    i: usize,
    j: usize,
    pi: &PreparedCurve,
    pj: &PreparedCurve,
    raw: &mut Vec<(usize, usize, Point, CurvePos, CurvePos)>,
    violations: &mut Vec<Violation>,
) {
    let ci = &d.edges()[i].curve;
    let cj = &d.edges()[j].curve;
    let ids = || (d.edges()[i].id.clone(), d.edges()[j].id.clone());
    let mut contacts: BTreeSet<Point> = BTreeSet::new();
    let mut overlap: Option<Point> = None;
    for (s, t) in candidate_pairs(pi, pj) {
        {
            match intersect_h(&pi.h[s], &pi.h[s + 1], &pj.h[t], &pj.h[t + 1]) {
                Hit::Empty => {}
                Hit::Proper => {
                    let (a, b) = ci.segment(s);
                    let (c, e) = cj.segment(t);
                    let (ta, tb, p) = line_crossing(a, b, c, e);
                    raw.push((
                        i,
                        j,
                        p,
                        CurvePos { seg: s, t: ta },
                        CurvePos { seg: t, t: tb },
                    ));
                }
                Hit::Touch(k) => {
                    let h = [&pi.h[s], &pi.h[s + 1], &pj.h[t], &pj.h[t + 1]][k as usize];
                    contacts.insert(hpoint_to_point(h));
                }
                Hit::Overlap => {
                    if overlap.is_none() {
                        overlap = Some(ci.points()[s].clone());
                    }
                }
            }
        }
    }
    if let Some(at) = overlap {
        violations.push(Violation::OverlappingEdges { edges: ids(), at });
        return;
    }
    let ends_i = [ci.first(), ci.last()];
    let ends_j = [cj.first(), cj.last()];
    for p in contacts {
        let end_i = ends_i.contains(&&p);
        let end_j = ends_j.contains(&&p);
        if end_i || end_j {
            // Shared endpoint, or a vertex on the other edge (reported by
            // the vertex check).
            continue;
        }
        let ai = locate(ci, pi, &p);
        let aj = locate(cj, pj, &p);
        let (a1, a2) = branches(ci, ai, &p);
        let (b1, b2) = branches(cj, aj, &p);
        let collinear = [&b1, &b2].iter().any(|b| {
            [&a1, &a2]
                .iter()
                .any(|a| cross(a, b).is_zero() && crate::geometry::dot(a, b) > Scalar::zero())
        });
        let proper = !collinear
            && strictly_ccw_between(&a1, &a2, &b1) != strictly_ccw_between(&a1, &a2, &b2);
        if proper {
            raw.push((i, j, p.clone(), pos_of(ci, ai, &p), pos_of(cj, aj, &p)));
        } else {
            violations.push(Violation::NonProperTouch {
                edges: ids(),
                at: p,
            });
        }
    }
}
