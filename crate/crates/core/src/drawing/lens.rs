//! Lenses: simple closed curves made of one contiguous part of each of two
//! edges.

use num_traits::Zero;

use super::intersect::CurvePos;
use super::{Drawing, DrawingError, EdgeId, VertexId};
use crate::geometry::{Containment, HPoint, Point, Polyline, Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LensKind {
    /// Two parallel edges that do not cross each other.
    FullParallelPair,
    /// Bounded by the parts of two edges between two of their crossings.
    BetweenCrossings,
    /// Bounded by the parts of two adjacent edges between a common endpoint
    /// and one of their crossings.
    EndpointToCrossing,
}

impl LensKind {
    pub fn name(self) -> &'static str {
        match self {
            LensKind::FullParallelPair => "full-parallel-pair",
            LensKind::BetweenCrossings => "between-crossings",
            LensKind::EndpointToCrossing => "endpoint-to-crossing",
        }
    }
}

/// The part of one edge on a lens boundary, `from < to` along the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LensPart {
    pub edge: EdgeId,
    pub index: usize,
    pub from: CurvePos,
    pub to: CurvePos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lens {
    pub kind: LensKind,
    pub parts: (LensPart, LensPart),
    /// The first part traversed forwards, then the second part back to the
    /// start.
    pub boundary: Polyline,
    pub interior_vertices: Vec<VertexId>,
    pub exterior_vertices: Vec<VertexId>,
    /// Whether the second part runs along its edge in the same direction as
    /// the first (from the point at `parts.0.from` to the one at `parts.0.to`).
    pub aligned: bool,
}

impl Lens {
    pub fn edges(&self) -> (&EdgeId, &EdgeId) {
        (&self.parts.0.edge, &self.parts.1.edge)
    }

    pub fn is_empty(&self) -> bool {
        self.interior_vertices.is_empty()
    }

    /// Whether the interior lies to the left of the first part, in the
    /// direction of its edge.
    pub fn interior_on_left(&self) -> bool {
        self.boundary.signed_area2() > Scalar::zero()
    }

    /// Whether the closed region of `other` lies inside the closed region of
    /// this lens.
    pub fn contains_lens(&self, other: &Lens) -> bool {
        bbox_within(&bbox(&other.boundary), &bbox(&self.boundary))
            && Ring::new(&self.boundary).contains_curve(&other.boundary)
    }
}

/// Result of closing up a parallel pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParallelLens {
    Lens(Lens),
    NotSimple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LensOptions {
    /// Include lenses between a common endpoint and a crossing.
    pub endpoint_to_crossing: bool,
}

impl Default for LensOptions {
    fn default() -> Self {
        LensOptions {
            endpoint_to_crossing: true,
        }
    }
}

/// Points of `curve` from `from` to `to` (inclusive), `from <= to`.
pub(crate) fn sub_points(curve: &Polyline, from: &CurvePos, to: &CurvePos) -> Vec<Point> {
    let pts = curve.points();
    let mut out = vec![from.point(curve)];
    for p in pts.iter().take(to.seg + 1).skip(from.seg + 1) {
        out.push(p.clone());
    }
    if !to.t.is_zero() {
        out.push(to.point(curve));
    }
    out.dedup();
    out
}

type BBox = (Scalar, Scalar, Scalar, Scalar);

fn bbox(c: &Polyline) -> BBox {
    let p = c.points();
    let mut b = (
        p[0].x.clone(),
        p[0].y.clone(),
        p[0].x.clone(),
        p[0].y.clone(),
    );
    for q in &p[1..] {
        if q.x < b.0 {
            b.0 = q.x.clone();
        }
        if q.y < b.1 {
            b.1 = q.y.clone();
        }
        if q.x > b.2 {
            b.2 = q.x.clone();
        }
        if q.y > b.3 {
            b.3 = q.y.clone();
        }
    }
    b
}

fn bbox_within(inner: &BBox, outer: &BBox) -> bool {
    inner.0 >= outer.0 && inner.1 >= outer.1 && inner.2 <= outer.2 && inner.3 <= outer.3
}

impl Drawing {
    fn part(&self, i: usize, a: CurvePos, b: CurvePos) -> LensPart {
        let (from, to) = if a <= b { (a, b) } else { (b, a) };
        LensPart {
            edge: self.edges()[i].id.clone(),
            index: i,
            from,
            to,
        }
    }

    /// Assemble a lens from two parts whose end points pair up; `None` if
    /// the resulting curve is not simple.
    fn close_lens(&self, kind: LensKind, p1: LensPart, p2: LensPart) -> Option<Lens> {
        self.close_lens_checked(kind, p1, p2, true)
    }

    fn close_lens_checked(
        &self,
        kind: LensKind,
        p1: LensPart,
        p2: LensPart,
        check_simple: bool,
    ) -> Option<Lens> {
        let c1 = &self.edges()[p1.index].curve;
        let c2 = &self.edges()[p2.index].curve;
        let mut pts = sub_points(c1, &p1.from, &p1.to);
        let mut back = sub_points(c2, &p2.from, &p2.to);
        let aligned = back.first() == pts.first();
        if aligned {
            back.reverse();
        }
        debug_assert_eq!(back.first(), pts.last());
        debug_assert_eq!(back.last(), pts.first());
        pts.extend(back.into_iter().skip(1));
        let boundary = Polyline::new(pts).ok()?;
        if !boundary.is_closed() || (check_simple && !boundary.is_simple()) {
            return None;
        }
        let ring = Ring::new(&boundary);
        let mut interior_vertices = Vec::new();
        let mut exterior_vertices = Vec::new();
        for v in self.vertices() {
            match ring.classify(&HPoint::from(&v.location)) {
                Containment::Interior => interior_vertices.push(v.id.clone()),
                Containment::Exterior => exterior_vertices.push(v.id.clone()),
                Containment::OnCurve => {}
            }
        }
        Some(Lens {
            kind,
            parts: (p1, p2),
            boundary,
            interior_vertices,
            exterior_vertices,
            aligned,
        })
    }

    /// The lens formed by two parallel edges, or `NotSimple` if their curves
    /// meet anywhere but at the common endpoints.
    pub fn lens_of_parallel_pair(
        &self,
        e1: &EdgeId,
        e2: &EdgeId,
    ) -> Result<ParallelLens, DrawingError> {
        let i = self.edge_index(e1)?;
        let j = self.edge_index(e2)?;
        if !self.are_parallel(i, j) {
            return Err(DrawingError::NotParallel(e1.clone(), e2.clone()));
        }
        let p1 = self.part(i, CurvePos::start(), CurvePos::end(&self.edges()[i].curve));
        let p2 = self.part(j, CurvePos::start(), CurvePos::end(&self.edges()[j].curve));
        // In general position two simple curves with common ends form a
        // simple closed curve exactly when they do not cross.
        let a = self.analysis();
        let known = a.violations.is_empty();
        if known && a.pair_count(i, j) > 0 {
            return Ok(ParallelLens::NotSimple);
        }
        Ok(
            match self.close_lens_checked(LensKind::FullParallelPair, p1, p2, !known) {
                Some(l) => ParallelLens::Lens(l),
                None => ParallelLens::NotSimple,
            },
        )
    }

    /// All two-edge lenses of a valid drawing.
    pub fn lenses(&self, opts: LensOptions) -> Result<Vec<Lens>, DrawingError> {
        let a = self.require_valid()?;
        let m = self.num_edges();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let shared = self.shared_endpoints(i, j);
                let cs = a.pair_crossings(i, j);
                if cs.is_empty() {
                    if shared == 2 {
                        let p1 =
                            self.part(i, CurvePos::start(), CurvePos::end(&self.edges()[i].curve));
                        let p2 =
                            self.part(j, CurvePos::start(), CurvePos::end(&self.edges()[j].curve));
                        out.extend(self.close_lens(LensKind::FullParallelPair, p1, p2));
                    }
                    continue;
                }
                // Positions of each crossing on edge i and edge j.
                let pos: Vec<(CurvePos, CurvePos)> = cs
                    .iter()
                    .map(|c| {
                        if c.edges.0 == i {
                            c.pos.clone()
                        } else {
                            (c.pos.1.clone(), c.pos.0.clone())
                        }
                    })
                    .collect();
                let blocked = |p1: &LensPart, p2: &LensPart, skip: &[usize]| {
                    pos.iter().enumerate().any(|(k, (pi, pj))| {
                        !skip.contains(&k)
                            && *pi >= p1.from
                            && *pi <= p1.to
                            && *pj >= p2.from
                            && *pj <= p2.to
                    })
                };
                for x in 0..pos.len() {
                    for y in x + 1..pos.len() {
                        let p1 = self.part(i, pos[x].0.clone(), pos[y].0.clone());
                        let p2 = self.part(j, pos[x].1.clone(), pos[y].1.clone());
                        if !blocked(&p1, &p2, &[x, y]) {
                            out.extend(self.close_lens(LensKind::BetweenCrossings, p1, p2));
                        }
                    }
                }
                if !opts.endpoint_to_crossing || shared == 0 {
                    continue;
                }
                let (iu, iv) = self.endpoints(i);
                let (ju, jv) = self.endpoints(j);
                let ci = &self.edges()[i].curve;
                let cj = &self.edges()[j].curve;
                for w in [iu, iv] {
                    if w != ju && w != jv {
                        continue;
                    }
                    let wi = if w == iu {
                        CurvePos::start()
                    } else {
                        CurvePos::end(ci)
                    };
                    let wj = if w == ju {
                        CurvePos::start()
                    } else {
                        CurvePos::end(cj)
                    };
                    for (x, (pi, pj)) in pos.iter().enumerate() {
                        let p1 = self.part(i, wi.clone(), pi.clone());
                        let p2 = self.part(j, wj.clone(), pj.clone());
                        if !blocked(&p1, &p2, &[x]) {
                            out.extend(self.close_lens(LensKind::EndpointToCrossing, p1, p2));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inclusion-minimal lenses with no vertex in their interior.
    pub fn empty_lenses(&self) -> Result<Vec<Lens>, DrawingError> {
        self.empty_lenses_with(LensOptions::default())
    }

    pub fn empty_lenses_with(&self, opts: LensOptions) -> Result<Vec<Lens>, DrawingError> {
        let empty: Vec<Lens> = self
            .lenses(opts)?
            .into_iter()
            .filter(Lens::is_empty)
            .collect();
        let boxes: Vec<BBox> = empty.iter().map(|l| bbox(&l.boundary)).collect();
        let rings: Vec<Ring> = empty.iter().map(|l| Ring::new(&l.boundary)).collect();
        let minimal: Vec<bool> = (0..empty.len())
            .map(|a| {
                !(0..empty.len()).any(|b| {
                    b != a
                        && bbox_within(&boxes[b], &boxes[a])
                        && rings[a].contains_curve(&empty[b].boundary)
                })
            })
            .collect();
        Ok(empty
            .into_iter()
            .zip(minimal)
            .filter(|(_, keep)| *keep)
            .map(|(l, _)| l)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::DrawingBuilder;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn e(s: &str) -> EdgeId {
        EdgeId::from(s)
    }

    #[test]
    fn parallel_pair_with_vertex_between() {
        let d = DrawingBuilder::new()
            .vertex("u", p(0, 0))
            .vertex("v", p(4, 0))
            .vertex("w", p(2, 1))
            .vertex("z", p(2, 5))
            .edge("a", "u", "v", vec![p(2, 2)])
            .unwrap()
            .edge("b", "u", "v", vec![p(2, -2)])
            .unwrap()
            .build()
            .unwrap();
        match d.lens_of_parallel_pair(&e("a"), &e("b")).unwrap() {
            ParallelLens::Lens(l) => {
                assert_eq!(l.interior_vertices, vec![VertexId::from("w")]);
                assert_eq!(l.exterior_vertices, vec![VertexId::from("z")]);
                assert_eq!(l.kind, LensKind::FullParallelPair);
            }
            ParallelLens::NotSimple => panic!("expected a lens"),
        }
        assert!(d.empty_lenses().unwrap().is_empty());
    }

    #[test]
    fn crossing_parallel_pair_is_not_simple() {
        let d = DrawingBuilder::new()
            .vertex("u", p(0, 0))
            .vertex("v", p(4, 0))
            .edge("a", "u", "v", vec![p(1, 1), p(3, -1)])
            .unwrap()
            .edge("b", "u", "v", vec![p(1, -1), p(3, 1)])
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(
            d.lens_of_parallel_pair(&e("a"), &e("b")).unwrap(),
            ParallelLens::NotSimple
        );
        assert_eq!(d.edge_pair_crossings(&e("a"), &e("b")).unwrap(), 1);
    }

    #[test]
    fn not_parallel() {
        let d = DrawingBuilder::new()
            .vertex("u", p(0, 0))
            .vertex("v", p(4, 0))
            .vertex("w", p(4, 4))
            .edge("a", "u", "v", vec![])
            .unwrap()
            .edge("b", "u", "w", vec![])
            .unwrap()
            .build()
            .unwrap();
        assert!(matches!(
            d.lens_of_parallel_pair(&e("a"), &e("b")),
            Err(DrawingError::NotParallel(..))
        ));
    }

    #[test]
    fn nested_parallel_triple() {
        let d = DrawingBuilder::new()
            .vertex("u", p(0, 0))
            .vertex("v", p(8, 0))
            .vertex("w", p(4, 1))
            .edge("outer", "u", "v", vec![p(4, 4)])
            .unwrap()
            .edge("mid", "u", "v", vec![p(4, 2)])
            .unwrap()
            .edge("low", "u", "v", vec![p(4, -2)])
            .unwrap()
            .build()
            .unwrap();
        let lens = |a: &str, b: &str| match d.lens_of_parallel_pair(&e(a), &e(b)).unwrap() {
            ParallelLens::Lens(l) => l,
            ParallelLens::NotSimple => panic!(),
        };
        let big = lens("outer", "low");
        let small = lens("mid", "low");
        let top = lens("outer", "mid");
        assert!(big.contains_lens(&small));
        assert!(big.contains_lens(&top));
        assert!(!small.contains_lens(&big));
        assert!(!small.contains_lens(&top));
        // Only the top lens is empty.
        let empty = d.empty_lenses().unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].edges(), (&e("outer"), &e("mid")));
    }

    #[test]
    fn double_crossing_gives_one_between_lens() {
        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(10, 0))
            .vertex("c", p(2, 2))
            .vertex("d", p(8, 2))
            .edge("e1", "a", "b", vec![])
            .unwrap()
            .edge("e2", "c", "d", vec![p(4, -1), p(6, -1)])
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(d.crossing_number().unwrap(), 2);
        let lenses = d.empty_lenses().unwrap();
        assert_eq!(lenses.len(), 1);
        let l = &lenses[0];
        assert_eq!(l.kind, LensKind::BetweenCrossings);
        assert!(l.interior_vertices.is_empty());
        assert_eq!(l.exterior_vertices.len(), 4);
        // The region lies below e1.
        assert!(!l.interior_on_left());
    }

    #[test]
    fn endpoint_lens() {
        let d = DrawingBuilder::new()
            .vertex("w", p(0, 0))
            .vertex("x", p(10, 0))
            .vertex("y", p(8, 2))
            .edge("e1", "w", "x", vec![])
            .unwrap()
            .edge("e2", "w", "y", vec![p(4, -2)])
            .unwrap()
            .build()
            .unwrap();
        let lenses = d.empty_lenses().unwrap();
        assert_eq!(lenses.len(), 1);
        assert_eq!(lenses[0].kind, LensKind::EndpointToCrossing);
        assert!(d
            .empty_lenses_with(LensOptions {
                endpoint_to_crossing: false
            })
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sub_points_covers_bends() {
        let c = Polyline::new(vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]).unwrap();
        let from = CurvePos {
            seg: 0,
            t: crate::geometry::ratio(1, 2),
        };
        let to = CurvePos {
            seg: 2,
            t: crate::geometry::ratio(1, 2),
        };
        assert_eq!(
            sub_points(&c, &from, &to),
            vec![p(1, 0), p(2, 0), p(2, 2), p(1, 2)]
        );
        assert_eq!(
            sub_points(&c, &CurvePos::start(), &CurvePos::end(&c)),
            c.points().to_vec()
        );
    }
}
