//! Exact planar primitives.
//!
//! Every predicate here is decided in exact rational arithmetic. Points are
//! converted to homogeneous integer coordinates `(X, Y, W)` with `W > 0`
//! before evaluating determinants, which avoids gcd normalisation in the hot
//! loops; when all coordinates are small the determinant is evaluated in
//! `i128` instead of `BigInt`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar in canonical reduced form.
pub type Scalar = BigRational;

/// Build a scalar from an integer numerator and denominator.
pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Scalar) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    /// `self + t * (to - self)`.
    pub fn lerp(&self, to: &Point, t: &Scalar) -> Point {
        self.add(&to.sub(self).scale(t))
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        self.lerp(o, &ratio(1, 2))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.x.to_f64().unwrap_or(f64::NAN),
            self.y.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Cross product of two vectors given as points.
pub fn cross(u: &Point, v: &Point) -> Scalar {
    &u.x * &v.y - &u.y * &v.x
}

pub fn dot(u: &Point, v: &Point) -> Scalar {
    &u.x * &v.x + &u.y * &v.y
}

pub fn dist2(p: &Point, q: &Point) -> Scalar {
    let d = p.sub(q);
    dot(&d, &d)
}

/// Max-norm length of a vector.
pub fn norm_inf(v: &Point) -> Scalar {
    let ax = v.x.abs();
    let ay = v.y.abs();
    if ax >= ay {
        ax
    } else {
        ay
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

impl Orientation {
    fn from_sign(s: i8) -> Self {
        match s.cmp(&0) {
            Ordering::Greater => Orientation::CounterClockwise,
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Orientation::CounterClockwise => 1,
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
        }
    }
}

/// Sign of the cross product of `(q - p, r - p)`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    Orientation::from_sign(HPoint::from(p).orient(&HPoint::from(q), &HPoint::from(r)))
}

// Coordinates below this bound take the i128 path: a 3x3 determinant of
// such values is a sum of six triple products, each below 2^120.
const SMALL: i64 = 1 << 40;

/// Homogeneous integer representation of a rational point.
#[derive(Clone, Debug)]
pub(crate) struct HPoint {
    x: BigInt,
    y: BigInt,
    w: BigInt,
    small: Option<[i64; 3]>,
}

impl From<&Point> for HPoint {
    fn from(p: &Point) -> Self {
        let w = p.x.denom().lcm(p.y.denom());
        let x = p.x.numer() * (&w / p.x.denom());
        let y = p.y.numer() * (&w / p.y.denom());
        let small = match (x.to_i64(), y.to_i64(), w.to_i64()) {
            (Some(a), Some(b), Some(c)) if a.abs() < SMALL && b.abs() < SMALL && c < SMALL => {
                Some([a, b, c])
            }
            _ => None,
        };
        HPoint { x, y, w, small }
    }
}

fn big_sign(v: &BigInt) -> i8 {
    match v.sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

impl HPoint {
    /// Orientation sign of `(self, q, r)`.
    pub(crate) fn orient(&self, q: &HPoint, r: &HPoint) -> i8 {
        if let (Some(a), Some(b), Some(c)) = (self.small, q.small, r.small) {
            let [px, py, pw] = a.map(i128::from);
            let [qx, qy, qw] = b.map(i128::from);
            let [rx, ry, rw] = c.map(i128::from);
            let det =
                px * (qy * rw - ry * qw) - py * (qx * rw - rx * qw) + pw * (qx * ry - rx * qy);
            return det.signum() as i8;
        }
        let det = &self.x * (&q.y * &r.w - &r.y * &q.w) - &self.y * (&q.x * &r.w - &r.x * &q.w)
            + &self.w * (&q.x * &r.y - &r.x * &q.y);
        big_sign(&det)
    }

    pub(crate) fn cmp_x(&self, o: &HPoint) -> Ordering {
        if let (Some(a), Some(b)) = (self.small, o.small) {
            return (i128::from(a[0]) * i128::from(b[2]))
                .cmp(&(i128::from(b[0]) * i128::from(a[2])));
        }
        (&self.x * &o.w).cmp(&(&o.x * &self.w))
    }

    pub(crate) fn cmp_y(&self, o: &HPoint) -> Ordering {
        if let (Some(a), Some(b)) = (self.small, o.small) {
            return (i128::from(a[1]) * i128::from(b[2]))
                .cmp(&(i128::from(b[1]) * i128::from(a[2])));
        }
        (&self.y * &o.w).cmp(&(&o.y * &self.w))
    }

    /// `self` lies in the closed axis-aligned box spanned by `a` and `b`.
    pub(crate) fn in_box(&self, a: &HPoint, b: &HPoint) -> bool {
        let (lo, hi) = if a.cmp_x(b) == Ordering::Greater {
            (b, a)
        } else {
            (a, b)
        };
        if self.cmp_x(lo) == Ordering::Less || self.cmp_x(hi) == Ordering::Greater {
            return false;
        }
        let (lo, hi) = if a.cmp_y(b) == Ordering::Greater {
            (b, a)
        } else {
            (a, b)
        };
        self.cmp_y(lo) != Ordering::Less && self.cmp_y(hi) != Ordering::Greater
    }
}

/// A closed segment between two distinct points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate segment at {0}")]
    DegenerateSegment(Point),
    #[error("polyline needs at least two points")]
    TooShort,
    #[error("repeated consecutive point {0}")]
    RepeatedPoint(Point),
    #[error("consecutive segments fold back on each other at {0}")]
    FoldBack(Point),
    #[error("curve is not closed")]
    NotClosed,
    #[error("curve is not simple")]
    NotSimple,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    Empty,
    Proper(Point),
    Touch(Point),
    Overlap,
}

pub fn segment_intersection(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    let h = [&s1.a, &s1.b, &s2.a, &s2.b].map(HPoint::from);
    let hits = intersect_h(&h[0], &h[1], &h[2], &h[3]);
    resolve_hit(hits, &s1.a, &s1.b, &s2.a, &s2.b)
}

/// Outcome of the homogeneous segment test before any rational point is
/// materialised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Hit {
    Empty,
    Proper,
    /// Touch at one of the four endpoints: 0 = a, 1 = b, 2 = c, 3 = d.
    Touch(u8),
    Overlap,
}

pub(crate) fn intersect_h(a: &HPoint, b: &HPoint, c: &HPoint, d: &HPoint) -> Hit {
    let o1 = a.orient(b, c);
    let o2 = a.orient(b, d);
    if o1 != 0 && o1 == o2 {
        return Hit::Empty;
    }
    let o3 = c.orient(d, a);
    let o4 = c.orient(d, b);
    if o3 != 0 && o3 == o4 {
        return Hit::Empty;
    }
    if o1 == 0 && o2 == 0 {
        return collinear_hit(a, b, c, d);
    }
    if o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return Hit::Proper;
    }
    // Exactly one intersection point, which is an endpoint lying on the
    // other segment (or nothing, when that endpoint is outside the segment).
    if o1 == 0 {
        return if c.in_box(a, b) {
            Hit::Touch(2)
        } else {
            Hit::Empty
        };
    }
    if o2 == 0 {
        return if d.in_box(a, b) {
            Hit::Touch(3)
        } else {
            Hit::Empty
        };
    }
    if o3 == 0 {
        return if a.in_box(c, d) {
            Hit::Touch(0)
        } else {
            Hit::Empty
        };
    }
    if b.in_box(c, d) {
        Hit::Touch(1)
    } else {
        Hit::Empty
    }
}

fn collinear_hit(a: &HPoint, b: &HPoint, c: &HPoint, d: &HPoint) -> Hit {
    // Project on the dominant axis of ab.
    let by_x = a.cmp_x(b) != Ordering::Equal;
    let cmp = |p: &HPoint, q: &HPoint| if by_x { p.cmp_x(q) } else { p.cmp_y(q) };
    let (lo1, hi1, i_lo1) = if cmp(a, b) == Ordering::Less {
        (a, b, 0)
    } else {
        (b, a, 1)
    };
    let (lo2, hi2, i_lo2) = if cmp(c, d) == Ordering::Less {
        (c, d, 2)
    } else {
        (d, c, 3)
    };
    // Overlap interval is [max(lo), min(hi)].
    let (lo, i_lo) = if cmp(lo1, lo2) == Ordering::Less {
        (lo2, i_lo2)
    } else {
        (lo1, i_lo1)
    };
    let hi = if cmp(hi1, hi2) == Ordering::Less {
        hi1
    } else {
        hi2
    };
    match cmp(lo, hi) {
        Ordering::Less => Hit::Overlap,
        Ordering::Equal => Hit::Touch(i_lo),
        Ordering::Greater => Hit::Empty,
    }
}

/// Exact crossing point of the supporting lines of `ab` and `cd`, as the
/// parameter along `ab` and the point itself.
pub(crate) fn line_crossing(a: &Point, b: &Point, c: &Point, d: &Point) -> (Scalar, Scalar, Point) {
    let r = b.sub(a);
    let s = d.sub(c);
    let denom = cross(&r, &s);
    let ca = c.sub(a);
    let t = cross(&ca, &s) / &denom;
    let u = cross(&ca, &r) / &denom;
    let p = a.lerp(b, &t);
    (t, u, p)
}

fn resolve_hit(hit: Hit, a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentIntersection {
    match hit {
        Hit::Empty => SegmentIntersection::Empty,
        Hit::Overlap => SegmentIntersection::Overlap,
        Hit::Proper => SegmentIntersection::Proper(line_crossing(a, b, c, d).2),
        Hit::Touch(i) => SegmentIntersection::Touch([a, b, c, d][i as usize].clone()),
    }
}

/// Parameter of `p` along segment `ab`, assuming `p` lies on it.
pub(crate) fn param_on(a: &Point, b: &Point, p: &Point) -> Scalar {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

/// Squared Euclidean distance from `p` to the closed segment `ab`.
pub fn dist2_point_segment(p: &Point, a: &Point, b: &Point) -> Scalar {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len2 = dot(&ab, &ab);
    let t = dot(&ap, &ab) / &len2;
    if t <= Scalar::zero() {
        dist2(p, a)
    } else if t >= Scalar::one() {
        dist2(p, b)
    } else {
        let c = cross(&ab, &ap);
        &c * &c / len2
    }
}

/// Squared distance between two closed segments that do not intersect.
pub fn dist2_segments(a: &Point, b: &Point, c: &Point, d: &Point) -> Scalar {
    [
        dist2_point_segment(a, c, d),
        dist2_point_segment(b, c, d),
        dist2_point_segment(c, a, b),
        dist2_point_segment(d, a, b),
    ]
    .into_iter()
    .min()
    .expect("four candidates")
}

/// Compare the directions of two nonzero vectors by angle in `[0, 2pi)`
/// measured counter-clockwise from the positive x axis.
pub fn cmp_angle(u: &Point, v: &Point) -> Ordering {
    fn half(p: &Point) -> u8 {
        if p.y.is_positive() || (p.y.is_zero() && p.x.is_positive()) {
            0
        } else {
            1
        }
    }
    half(u).cmp(&half(v)).then_with(|| {
        let c = cross(u, v);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Whether direction `x` lies strictly inside the counter-clockwise sweep
/// from `from` to `to`. When `from` and `to` coincide the sweep is the full
/// turn minus that direction.
pub fn strictly_ccw_between(from: &Point, to: &Point, x: &Point) -> bool {
    let a = cmp_angle(from, x);
    let b = cmp_angle(x, to);
    match cmp_angle(from, to) {
        Ordering::Less => a == Ordering::Less && b == Ordering::Less,
        Ordering::Greater => a == Ordering::Less || b == Ordering::Less,
        Ordering::Equal => a != Ordering::Equal,
    }
}

/// A polygonal curve: at least two points, no repeated consecutive points,
/// and no segment folding back onto its predecessor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::TooShort);
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(GeometryError::RepeatedPoint(w[0].clone()));
            }
        }
        for w in points.windows(3) {
            let u = w[0].sub(&w[1]);
            let v = w[2].sub(&w[1]);
            if cross(&u, &v).is_zero() && dot(&u, &v).is_positive() {
                return Err(GeometryError::FoldBack(w[1].clone()));
            }
        }
        Ok(Polyline { points })
    }

    /// Build from points, silently dropping repeated consecutive points.
    pub fn dedup(mut points: Vec<Point>) -> Result<Self, GeometryError> {
        points.dedup();
        Polyline::new(points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("nonempty")
    }

    pub fn num_segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn segment(&self, i: usize) -> (&Point, &Point) {
        (&self.points[i], &self.points[i + 1])
    }

    pub fn reversed(&self) -> Polyline {
        let mut pts = self.points.clone();
        pts.reverse();
        Polyline { points: pts }
    }

    pub fn is_closed(&self) -> bool {
        self.points.len() >= 4 && self.first() == self.last()
    }

    /// Whether no two non-adjacent segments meet (closing segments of a
    /// closed curve count as adjacent).
    pub fn is_simple(&self) -> bool {
        let h: Vec<HPoint> = self.points.iter().map(HPoint::from).collect();
        let m = self.num_segments();
        let closed = self.first() == self.last();
        if closed && m == 2 {
            return false;
        }
        let boxes: Vec<BoxF> = self.points.windows(2).map(BoxF::of).collect();
        for (i, j) in meeting_pairs(&boxes) {
            let adjacent = j == i + 1 || (closed && i == 0 && j == m - 1);
            let hit = intersect_h(&h[i], &h[i + 1], &h[j], &h[j + 1]);
            if adjacent {
                // Only the shared endpoint is allowed.
                if !matches!(hit, Hit::Touch(_) | Hit::Empty) {
                    return false;
                }
            } else if hit != Hit::Empty {
                return false;
            }
        }
        true
    }

    /// Twice the signed area enclosed by a closed curve (positive when
    /// traversed counter-clockwise).
    pub fn signed_area2(&self) -> Scalar {
        let mut s = Scalar::zero();
        for w in self.points.windows(2) {
            s += cross(&w[0], &w[1]);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Containment {
    Interior,
    Exterior,
    OnCurve,
}

/// Classify `p` against a simple closed polyline.
pub fn point_in_closed_curve(p: &Point, curve: &Polyline) -> Result<Containment, GeometryError> {
    if !curve.is_closed() {
        return Err(GeometryError::NotClosed);
    }
    if !curve.is_simple() {
        return Err(GeometryError::NotSimple);
    }
    let ring = Ring::new(curve);
    Ok(ring.classify(&HPoint::from(p)))
}

/// A closed curve prepared for repeated containment queries. Simplicity is
/// the caller's responsibility.
pub(crate) struct Ring {
    pts: Vec<HPoint>,
}

impl Ring {
    pub(crate) fn new(curve: &Polyline) -> Self {
        Ring {
            pts: curve.points().iter().map(HPoint::from).collect(),
        }
    }

    pub(crate) fn classify(&self, p: &HPoint) -> Containment {
        let mut winding = 0i64;
        for w in self.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let o = a.orient(b, p);
            if o == 0 && p.in_box(a, b) {
                return Containment::OnCurve;
            }
            if a.cmp_y(p) != Ordering::Greater {
                if b.cmp_y(p) == Ordering::Greater && o > 0 {
                    winding += 1;
                }
            } else if b.cmp_y(p) != Ordering::Greater && o < 0 {
                winding -= 1;
            }
        }
        if winding != 0 {
            Containment::Interior
        } else {
            Containment::Exterior
        }
    }

    /// Whether every point of `inner` (a closed curve) lies in the closed
    /// region bounded by this ring. Each segment of `inner` is cut at all its
    /// contacts with the ring and the pieces are probed at their midpoints.
    pub(crate) fn contains_curve(&self, inner: &Polyline) -> bool {
        let ip = inner.points();
        for w in ip.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let (ha, hb) = (HPoint::from(a), HPoint::from(b));
            if self.classify(&ha) == Containment::Exterior {
                return false;
            }
            let mut cuts: Vec<Scalar> = vec![Scalar::zero(), Scalar::one()];
            for r in self.pts.windows(2) {
                let (c, d) = (&r[0], &r[1]);
                match intersect_h(&ha, &hb, c, d) {
                    Hit::Empty => {}
                    Hit::Proper => {
                        let (cp, dp) = (hpoint_to_point(c), hpoint_to_point(d));
                        cuts.push(line_crossing(a, b, &cp, &dp).0);
                    }
                    Hit::Touch(_) | Hit::Overlap => {
                        for q in [c, d] {
                            if ha.orient(&hb, q) == 0 && q.in_box(&ha, &hb) {
                                cuts.push(param_on(a, b, &hpoint_to_point(q)));
                            }
                        }
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            for t in cuts.windows(2) {
                let mid = (&t[0] + &t[1]) / int(2);
                let m = a.lerp(b, &mid);
                if self.classify(&HPoint::from(&m)) == Containment::Exterior {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct BoxF {
    pub(crate) lo: (f64, f64),
    pub(crate) hi: (f64, f64),
}

impl BoxF {
    pub(crate) fn of(points: &[Point]) -> BoxF {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            let (x, y) = (
                p.x.to_f64().unwrap_or(f64::NAN),
                p.y.to_f64().unwrap_or(f64::NAN),
            );
            // Outward padding covers the rounding of the conversion.
            let px = x.abs() * 1e-12 + 1e-300;
            let py = y.abs() * 1e-12 + 1e-300;
            lo.0 = lo.0.min(x - px);
            lo.1 = lo.1.min(y - py);
            hi.0 = hi.0.max(x + px);
            hi.1 = hi.1.max(y + py);
        }
        BoxF { lo, hi }
    }

    pub(crate) fn meets(&self, o: &BoxF) -> bool {
        self.lo.0 <= o.hi.0 && o.lo.0 <= self.hi.0 && self.lo.1 <= o.hi.1 && o.lo.1 <= self.hi.1
    }
}

/// Pairs `i < j` of boxes that meet, found by a sweep over `x`.
pub(crate) fn meeting_pairs(boxes: &[BoxF]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].lo.0.total_cmp(&boxes[b].lo.0));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for k in order {
        let b = &boxes[k];
        active.retain(|&a| boxes[a].hi.0 >= b.lo.0);
        out.extend(
            active
                .iter()
                .filter(|&&a| boxes[a].meets(b))
                .map(|&a| (a.min(k), a.max(k))),
        );
        active.push(k);
    }
    out
}

pub(crate) fn hpoint_to_point(h: &HPoint) -> Point {
    Point::new(
        Scalar::new(h.x.clone(), h.w.clone()),
        Scalar::new(h.y.clone(), h.w.clone()),
    )
}

/// Largest power of two `2^k` (k may be negative) with `(2^k)^2 <= bound`.
pub fn pow2_below_sqrt(bound: &Scalar) -> Scalar {
    assert!(bound.is_positive());
    let mut s = Scalar::one();
    let two = int(2);
    while &s * &s > *bound {
        s /= &two;
    }
    while &(&s * &two) * &(&s * &two) <= *bound {
        s *= &two;
    }
    s
}

/// Serialize a scalar as its exact `p/q` string.
pub(crate) fn serialize_scalar<S: serde::Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Round a float to the dyadic grid with the given number of fractional bits.
pub fn snap(v: f64, bits: u32) -> Scalar {
    let scale = (1u64 << bits) as f64;
    let n = (v * scale).round() as i64;
    Scalar::new(BigInt::from(n), BigInt::from(1u64 << bits))
}
