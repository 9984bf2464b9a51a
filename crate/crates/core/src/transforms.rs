//! Drawing surgeries: edge removal, vertex splitting, empty-lens rerouting
//! and planarization. All transforms are pure and return a new drawing.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::drawing::{
    sub_points, CurvePos, Drawing, DrawingError, Edge, EdgeId, Lens, LensKind, LensOptions, ParallelLens,
    Provenance, ValidationReport, Vertex, VertexId,
};
use crate::geometry::{
    cmp_angle, cross, dist2, dist2_point_segment, int, line_crossing, norm_inf, orientation, pow2_below_sqrt,
    Orientation, Point, Polyline, Scalar,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("drawing violates general position: {0}")]
    InvalidDrawing(ValidationReport),
    #[error("edge groups at {0} are not contiguous in rotation order")]
    NonContiguousGroups(VertexId),
    #[error("invalid split plan: {0}")]
    InvalidPlan(String),
    #[error("clearance violated: {0}")]
    ClearanceViolation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rerouting did not reach a fixpoint within {limit} steps")]
    IterationLimitExceeded { limit: usize },
    #[error("rerouting failed: {0}")]
    RerouteFailed(String),
    #[error("edges {0} and {1} are not parallel")]
    NotParallel(EdgeId, EdgeId),
    #[error(transparent)]
    Drawing(DrawingError),
}

impl From<DrawingError> for TransformError {
    fn from(e: DrawingError) -> Self {
        match e {
            DrawingError::UnknownEdge(id) => TransformError::UnknownEdge(id),
            DrawingError::UnknownVertex(id) => TransformError::UnknownVertex(id),
            DrawingError::InvalidDrawing(r) => TransformError::InvalidDrawing(r),
            DrawingError::NotParallel(a, b) => TransformError::NotParallel(a, b),
            other => TransformError::Drawing(other),
        }
    }
}

/// The drawing without the listed edges. Vertices are kept.
pub fn remove_edges(d: &Drawing, edges: &[EdgeId]) -> Result<Drawing, TransformError> {
    let idx = edges.iter().map(|e| d.edge_index(e)).collect::<Result<Vec<_>, _>>()?;
    Ok(d.without_edges(&idx))
}

// ---------------------------------------------------------------------------
// Rotation order and clearance

/// Direction of the first curve segment of edge `e` leaving vertex `v`.
fn stub(d: &Drawing, e: usize, v: usize) -> (Point, Point) {
    let pts = d.edges()[e].curve.points();
    let at = &d.vertices()[v].location;
    let next = if d.endpoints(e).0 == v { &pts[1] } else { &pts[pts.len() - 2] };
    (next.sub(at), next.clone())
}

fn rotation(d: &Drawing, v: usize) -> Vec<usize> {
    let mut inc: Vec<(usize, Point)> = d.incident(v).into_iter().map(|e| (e, stub(d, e, v).0)).collect();
    inc.sort_by(|a, b| cmp_angle(&a.1, &b.1).then(a.0.cmp(&b.0)));
    inc.into_iter().map(|(e, _)| e).collect()
}

/// Edges at `v` in counter-clockwise order of their first segments,
/// starting from the smallest angle to the positive x axis.
pub fn rotation_order(d: &Drawing, v: &VertexId) -> Result<Vec<EdgeId>, TransformError> {
    let vi = d.vertex_index(v)?;
    Ok(rotation(d, vi).into_iter().map(|e| d.edges()[e].id.clone()).collect())
}

/// Squared distance from `v` to the nearest drawing feature other than the
/// first segments of its own edges, or `None` if there is no such feature.
pub fn vertex_clearance2(d: &Drawing, v: &VertexId) -> Result<Option<Scalar>, TransformError> {
    let vi = d.vertex_index(v)?;
    Ok(clearance2(d, vi))
}

fn clearance2(d: &Drawing, vi: usize) -> Option<Scalar> {
    let at = &d.vertices()[vi].location;
    let (ax, ay) = at.to_f64();
    let mut cands: Vec<(f64, Candidate)> = Vec::new();
    for (k, w) in d.vertices().iter().enumerate() {
        if k != vi {
            let (x, y) = w.location.to_f64();
            cands.push(((x - ax).powi(2) + (y - ay).powi(2), Candidate::Vertex(k)));
        }
    }
    for (e, edge) in d.edges().iter().enumerate() {
        let (u, w) = d.endpoints(e);
        let m = edge.curve.num_segments();
        for s in 0..m {
            if (u == vi && s == 0) || (w == vi && s == m - 1) {
                continue;
            }
            let (a, b) = edge.curve.segment(s);
            cands.push((f64_dist2_point_segment(at.to_f64(), a.to_f64(), b.to_f64()), Candidate::Segment(e, s)));
        }
    }
    let best = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return None;
    }
    // Exact evaluation of everything that could be the true minimum.
    let cutoff = best * (1.0 + 1e-6) + 1e-300;
    cands
        .into_iter()
        .filter(|c| c.0 <= cutoff)
        .map(|(_, c)| match c {
            Candidate::Vertex(k) => dist2(at, &d.vertices()[k].location),
            Candidate::Segment(e, s) => {
                let (a, b) = d.edges()[e].curve.segment(s);
                dist2_point_segment(at, a, b)
            }
        })
        .min()
}

enum Candidate {
    Vertex(usize),
    Segment(usize, usize),
}

fn f64_dist2_point_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    (p.0 - qx).powi(2) + (p.1 - qy).powi(2)
}

/// Scale `v` to L-infinity norm `len`.
fn with_norm(v: &Point, len: &Scalar) -> Point {
    v.scale(&(len / norm_inf(v)))
}

fn unit_inf(v: &Point) -> Point {
    with_norm(v, &Scalar::one())
}

/// A direction strictly inside the counter-clockwise sweep from `a` to `b`.
fn ray_in_gap(a: &Point, b: &Point) -> Point {
    if cmp_angle(a, b) == Ordering::Equal {
        return a.scale(&int(-1));
    }
    let c = cross(a, b);
    if c.is_positive() {
        unit_inf(a).add(&unit_inf(b))
    } else if c.is_negative() {
        unit_inf(a).add(&unit_inf(b)).scale(&int(-1))
    } else {
        Point::new(-a.y.clone(), a.x.clone())
    }
}

// ---------------------------------------------------------------------------
// Vertex splitting

/// Replace `vertex` by two vertices, the first receiving `groups.0` and the
/// second `groups.1`. Both groups must be contiguous in rotation order.
/// Without explicit `locations` the group with the narrower angular range
/// moves into its wedge at half the clearance radius and the other stays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPlan {
    pub vertex: VertexId,
    pub groups: (Vec<EdgeId>, Vec<EdgeId>),
    pub ids: (VertexId, VertexId),
    pub locations: Option<(Point, Point)>,
}

impl SplitPlan {
    pub fn new(vertex: VertexId, first: Vec<EdgeId>, second: Vec<EdgeId>) -> Self {
        let ids = (VertexId(format!("{vertex}.1")), VertexId(format!("{vertex}.2")));
        SplitPlan { vertex, groups: (first, second), ids, locations: None }
    }

    pub fn with_ids(mut self, a: VertexId, b: VertexId) -> Self {
        self.ids = (a, b);
        self
    }

    pub fn with_locations(mut self, a: Point, b: Point) -> Self {
        self.locations = Some((a, b));
        self
    }
}

pub fn vertex_split(d: &Drawing, plan: &SplitPlan) -> Result<Drawing, TransformError> {
    let vi = d.vertex_index(&plan.vertex)?;
    d.require_valid()?;
    let rot = rotation(d, vi);
    let mut side = vec![None; d.num_edges()];
    for (g, list) in [&plan.groups.0, &plan.groups.1].into_iter().enumerate() {
        for id in list {
            let e = d.edge_index(id)?;
            if !rot.contains(&e) {
                return Err(TransformError::InvalidPlan(format!("edge {id} is not incident to {}", plan.vertex)));
            }
            if side[e].replace(g).is_some() {
                return Err(TransformError::InvalidPlan(format!("edge {id} listed twice")));
            }
        }
    }
    if rot.iter().any(|&e| side[e].is_none()) {
        return Err(TransformError::InvalidPlan("groups do not cover all incident edges".into()));
    }
    let labels: Vec<usize> = rot.iter().map(|&e| side[e].unwrap_or(0)).collect();
    let changes = (0..labels.len()).filter(|&k| labels[k] != labels[(k + 1) % labels.len()]).count();
    if changes > 2 {
        return Err(TransformError::NonContiguousGroups(plan.vertex.clone()));
    }

    let at = d.vertices()[vi].location.clone();
    let rho = match clearance2(d, vi) {
        Some(c) => pow2_below_sqrt(&(c / int(4))),
        None => Scalar::one(),
    };
    let dirs: Vec<Point> = rot.iter().map(|&e| stub(d, e, vi).0).collect();
    let locations = match &plan.locations {
        Some((a, b)) => {
            for p in [a, b] {
                if norm_inf(&p.sub(&at)) >= rho {
                    return Err(TransformError::ClearanceViolation(format!(
                        "{p} is outside the clearance box of {} (radius {rho})",
                        plan.vertex
                    )));
                }
            }
            (a.clone(), b.clone())
        }
        None => default_locations(&at, &rho, &dirs, &labels),
    };
    if locations.0 == locations.1 {
        return Err(TransformError::InvalidPlan("split locations coincide".into()));
    }

    let mut vertices: Vec<Vertex> = Vec::with_capacity(d.num_vertices() + 1);
    let root = match &d.vertices()[vi].provenance {
        Provenance::Split(r) => r.clone(),
        _ => plan.vertex.clone(),
    };
    for (k, v) in d.vertices().iter().enumerate() {
        if k == vi {
            for (id, loc) in [(&plan.ids.0, &locations.0), (&plan.ids.1, &locations.1)] {
                vertices.push(Vertex { id: id.clone(), location: loc.clone(), provenance: Provenance::Split(root.clone()) });
            }
        } else {
            vertices.push(v.clone());
        }
    }
    let mut edges: Vec<Edge> = d.edges().to_vec();
    for (k, &e) in rot.iter().enumerate() {
        let g = labels[k];
        let (id, loc) = if g == 0 { (&plan.ids.0, &locations.0) } else { (&plan.ids.1, &locations.1) };
        let edge = &mut edges[e];
        let dir = &dirs[k];
        let trim = at.add(&with_norm(dir, &rho));
        let mut pts = edge.curve.points().to_vec();
        let starts = d.endpoints(e).0 == vi;
        if !starts {
            pts.reverse();
        }
        if loc != &at {
            pts[0] = trim;
            pts.insert(0, loc.clone());
        }
        if !starts {
            pts.reverse();
        }
        edge.curve = Polyline::dedup(pts)
            .map_err(|err| TransformError::ClearanceViolation(format!("edge {}: {err}", edge.id)))?;
        if starts {
            edge.u = id.clone();
        } else {
            edge.v = id.clone();
        }
    }
    let out = Drawing::new(vertices, edges)?;
    let report = out.validate();
    if !report.is_empty() {
        return Err(TransformError::ClearanceViolation(report.to_string()));
    }
    if out.crossing_number()? != d.crossing_number()? {
        return Err(TransformError::ClearanceViolation("split changed the crossing number".into()));
    }
    Ok(out)
}

/// One group stays at `at`; the other moves into its (convex) wedge.
fn default_locations(at: &Point, rho: &Scalar, dirs: &[Point], labels: &[usize]) -> (Point, Point) {
    let half = rho / int(2);
    let m = dirs.len();
    let moved = |dir: Point| at.add(&with_norm(&dir, &half));
    let count0 = labels.iter().filter(|&&g| g == 0).count();
    if count0 == 0 || count0 == m {
        // Degenerate split: the empty group becomes an isolated vertex.
        let spot = match m {
            0 => moved(Point::from_ints(1, 0)),
            1 => moved(dirs[0].scale(&int(-1))),
            _ => moved(ray_in_gap(&dirs[0], &dirs[1])),
        };
        return if count0 == 0 { (spot, at.clone()) } else { (at.clone(), spot) };
    }
    // Gaps where the label changes: r1 after group 0, r2 after group 1.
    let mut r1 = None;
    let mut r2 = None;
    for k in 0..m {
        let n = (k + 1) % m;
        if labels[k] != labels[n] {
            let r = ray_in_gap(&dirs[k], &dirs[n]);
            if labels[k] == 0 {
                r1 = Some(r);
            } else {
                r2 = Some(r);
            }
        }
    }
    let (r1, r2) = (r1.expect("group 0 ends somewhere"), r2.expect("group 1 ends somewhere"));
    // Group 0 spans the sweep r2 -> r1, group 1 spans r1 -> r2.
    let bisector = |s: &Point, t: &Point| {
        if cross(s, t).is_positive() {
            unit_inf(s).add(&unit_inf(t))
        } else {
            Point::new(-s.y.clone(), s.x.clone())
        }
    };
    if !cross(&r2, &r1).is_negative() {
        (moved(bisector(&r2, &r1)), at.clone())
    } else {
        (at.clone(), moved(bisector(&r1, &r2)))
    }
}

/// Split every vertex of degree greater than `dmax` into `ceil(deg / floor(dmax))`
/// vertices by grouping consecutive edges in rotation order, so that every
/// resulting vertex has degree at most `dmax`. Copies of `v` are named
/// `v.1`, `v.2`, ...
pub fn split_high_degree(d: &Drawing, dmax: &Scalar) -> Result<Drawing, TransformError> {
    if *dmax < Scalar::one() {
        return Err(TransformError::InvalidParameter(format!("degree bound {dmax} is below 1")));
    }
    d.require_valid()?;
    let k = dmax.floor().to_integer().to_usize().unwrap_or(usize::MAX).max(1);
    let targets: Vec<VertexId> = d
        .degrees()
        .iter()
        .enumerate()
        .filter(|(_, &deg)| Scalar::from_integer(deg.into()) > *dmax)
        .map(|(v, _)| d.vertices()[v].id.clone())
        .collect();
    let mut cur = d.clone();
    for v in targets {
        let vi = cur.vertex_index(&v)?;
        let rot: Vec<EdgeId> = rotation(&cur, vi).into_iter().map(|e| cur.edges()[e].id.clone()).collect();
        let chunks: Vec<Vec<EdgeId>> = rot.chunks(k).map(|c| c.to_vec()).collect();
        let c = chunks.len();
        let rest_id = VertexId(format!("{v}.{c}"));
        let mut at = v.clone();
        for (j, chunk) in chunks.iter().enumerate().take(c - 1) {
            let rest: Vec<EdgeId> = chunks[j + 1..].iter().flatten().cloned().collect();
            let plan = SplitPlan::new(at.clone(), chunk.clone(), rest)
                .with_ids(VertexId(format!("{v}.{}", j + 1)), rest_id.clone());
            cur = vertex_split(&cur, &plan)?;
            at = rest_id.clone();
        }
    }
    Ok(cur)
}

// ---------------------------------------------------------------------------
// Rerouting

#[derive(Clone, Debug)]
pub enum RerouteOutcome {
    Changed(Drawing),
    NoEmptyLens,
}

/// Halvings of the offset distance before a reroute is abandoned.
const REROUTE_ATTEMPTS: usize = 40;

/// One rerouting step: pick an inclusion-minimal empty lens bounded by
/// crossings (or by a shared endpoint and a crossing, when enabled), let
/// `e1` be the side with fewer crossings along the lens, and replace the
/// other side by a copy of `e1`'s part drawn just outside the lens.
/// Full parallel pairs are left to [`pull_parallel_pair`].
pub fn reroute_empty_lens_step(d: &Drawing, opts: LensOptions) -> Result<RerouteOutcome, TransformError> {
    d.require_valid()?;
    let lenses: Vec<Lens> =
        d.empty_lenses_with(opts)?.into_iter().filter(|l| l.kind != LensKind::FullParallelPair).collect();
    if lenses.is_empty() {
        return Ok(RerouteOutcome::NoEmptyLens);
    }
    let crossings = d.crossings()?;
    let along = |part: &crate::drawing::LensPart| {
        crossings
            .iter()
            .filter(|c| {
                let pos = if c.edges.0 == part.index {
                    &c.pos.0
                } else if c.edges.1 == part.index {
                    &c.pos.1
                } else {
                    return false;
                };
                *pos > part.from && *pos < part.to
            })
            .count()
    };
    // The preferred side can fail when the rerouted edge passes through its
    // own lens elsewhere; then the other side and the other lenses are tried.
    let mut last = None;
    for lens in &lenses {
        let preferred = along(&lens.parts.0) <= along(&lens.parts.1);
        for first_is_e1 in [preferred, !preferred] {
            let interior_left_of_e1 = lens.interior_on_left() == first_is_e1;
            match reroute_along(d, lens, first_is_e1, !interior_left_of_e1, |before, after| {
                Some(after.crossing_number().ok()? < before.crossing_number().ok()? && no_new_pairs(before, after))
            }) {
                Ok(out) => return Ok(RerouteOutcome::Changed(out)),
                Err(e) => last = Some(e),
            }
        }
    }
    Err(last.expect("at least one lens was tried"))
}

/// Reroute until no empty crossing lens is left. Each step removes at least
/// one crossing, so more than `cr + #parallel pairs` steps signal a bug.
pub fn reroute_to_fixpoint(d: &Drawing, opts: LensOptions) -> Result<Drawing, TransformError> {
    let bundles = d.bundles();
    let pairs: usize = bundles.values().map(|b| b.len() * (b.len() - 1) / 2).sum();
    let limit = d.crossing_number()? + pairs;
    let mut cur = d.clone();
    for _ in 0..=limit {
        match reroute_empty_lens_step(&cur, opts)? {
            RerouteOutcome::Changed(next) => cur = next,
            RerouteOutcome::NoEmptyLens => return Ok(cur),
        }
    }
    Err(TransformError::IterationLimitExceeded { limit })
}

/// Redraw the parallel edge `e2` as a copy of `e1` inside their lens. The
/// crossing number does not increase when `e1` has at most as many
/// crossings as `e2`; this is checked.
pub fn pull_parallel_pair(d: &Drawing, e1: &EdgeId, e2: &EdgeId) -> Result<Drawing, TransformError> {
    d.require_valid()?;
    let lens = match d.lens_of_parallel_pair(e1, e2)? {
        ParallelLens::Lens(l) => l,
        ParallelLens::NotSimple => {
            return Err(TransformError::RerouteFailed(format!("edges {e1} and {e2} cross each other")))
        }
    };
    let left = lens.interior_on_left();
    reroute_along(d, &lens, true, left, |before, after| {
        Some(after.crossing_number().ok()? <= before.crossing_number().ok()?)
    })
}

fn crossing_pairs(d: &Drawing) -> BTreeSet<(EdgeId, EdgeId)> {
    d.crossings()
        .map(|cs| {
            cs.iter()
                .map(|c| {
                    let (a, b) = c.ids.clone();
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect()
        })
        .unwrap_or_default()
}

fn no_new_pairs(before: &Drawing, after: &Drawing) -> bool {
    crossing_pairs(&after).is_subset(&crossing_pairs(before))
}

trait Accept: Fn(&Drawing, &Drawing) -> Option<bool> {}
impl<F: Fn(&Drawing, &Drawing) -> Option<bool>> Accept for F {}

/// Replace the lens part of the second edge by an offset copy of the first
/// edge's part on the given side, shrinking the offset until the result is
/// valid and accepted.
fn reroute_along(
    d: &Drawing,
    lens: &Lens,
    first_is_e1: bool,
    left: bool,
    accept: impl Accept,
) -> Result<Drawing, TransformError> {
    let (p1, p2) = if first_is_e1 { (&lens.parts.0, &lens.parts.1) } else { (&lens.parts.1, &lens.parts.0) };
    let c1 = &d.edges()[p1.index].curve;
    let c2 = &d.edges()[p2.index].curve;
    let mut path = sub_points(c1, &p1.from, &p1.to);
    let taper = (p1.from == CurvePos::start(), p1.to == CurvePos::end(c1));
    // A tapered end needs an offset point between it and the next bend.
    if taper.1 {
        let k = path.len();
        path.insert(k - 1, path[k - 2].midpoint(&path[k - 1]));
    }
    if taper.0 && !(taper.1 && path.len() == 3) {
        path.insert(1, path[0].midpoint(&path[1]));
    }
    let mut delta = initial_offset(d, &path);
    for _ in 0..REROUTE_ATTEMPTS {
        let mut copy = offset_copy(&path, left, &delta, taper.0, taper.1);
        if !lens.aligned {
            copy.reverse();
        }
        if let Some(curve) = splice(c2, &p2.from, &p2.to, copy) {
            let mut edges = d.edges().to_vec();
            edges[p2.index].curve = curve;
            if let Ok(next) = Drawing::new(d.vertices().to_vec(), edges) {
                if next.is_valid() && accept(d, &next) == Some(true) {
                    return Ok(next);
                }
            }
        }
        delta /= int(2);
    }
    Err(TransformError::RerouteFailed(format!(
        "no valid offset of {} found for {}",
        d.edges()[p1.index].id,
        d.edges()[p2.index].id
    )))
}

/// A power of two a third below the distance from `path` to the features
/// near it that do not touch it. Distances are estimated in floating point;
/// near-zero ones are settled exactly so that curves through the path
/// (the crossings along it) are skipped.
fn initial_offset(d: &Drawing, path: &[Point]) -> Scalar {
    let fp: Vec<(f64, f64)> = path.iter().map(Point::to_f64).collect();
    let mut best = f64::INFINITY;
    for w in fp.windows(2) {
        best = best.min((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2));
    }
    let mut settle = |approx: f64, exact: &dyn Fn() -> Scalar| {
        if approx >= best {
            return;
        }
        if approx < 1e-9 {
            let e = exact();
            if e.is_zero() {
                return;
            }
            best = best.min(e.to_f64().unwrap_or(0.0));
        } else {
            best = approx;
        }
    };
    let mut points: Vec<&Point> = d.vertices().iter().map(|v| &v.location).collect();
    for e in d.edges() {
        points.extend(e.curve.points());
    }
    let crossings = d.crossings().unwrap_or(&[]);
    points.extend(crossings.iter().map(|c| &c.point));
    for q in points {
        let fq = q.to_f64();
        for (k, w) in fp.windows(2).enumerate() {
            let approx = f64_dist2_point_segment(fq, w[0], w[1]);
            settle(approx, &|| dist2_point_segment(q, &path[k], &path[k + 1]));
        }
    }
    for (k, p) in path.iter().enumerate() {
        for e in d.edges() {
            for w in e.curve.points().windows(2) {
                let approx = f64_dist2_point_segment(fp[k], w[0].to_f64(), w[1].to_f64());
                settle(approx, &|| dist2_point_segment(p, &w[0], &w[1]));
            }
        }
    }
    let bound = if best.is_finite() && best > 0.0 { best / 9.0 } else { 1.0 };
    let mut s = Scalar::one();
    let two = int(2);
    while s.to_f64().unwrap_or(0.0).powi(2) > bound {
        s /= &two;
    }
    s
}

/// Offset of a polyline to its left or right by about `delta`: mitred at
/// turns towards the offset side, bevelled at turns away from it. Tapered
/// ends start exactly at the original end point.
fn offset_copy(p: &[Point], left: bool, delta: &Scalar, taper_start: bool, taper_end: bool) -> Vec<Point> {
    let k = p.len() - 1;
    let off: Vec<Point> = (0..k)
        .map(|i| {
            let dir = p[i + 1].sub(&p[i]);
            let normal = if left { Point::new(-dir.y.clone(), dir.x.clone()) } else { Point::new(dir.y.clone(), -dir.x.clone()) };
            with_norm(&normal, delta)
        })
        .collect();
    let mut out = Vec::with_capacity(2 * p.len());
    out.push(if taper_start { p[0].clone() } else { p[0].add(&off[0]) });
    for i in 1..k {
        let o = orientation(&p[i - 1], &p[i], &p[i + 1]);
        let inner = (left && o == Orientation::CounterClockwise) || (!left && o == Orientation::Clockwise);
        if o == Orientation::Collinear {
            out.push(p[i].add(&off[i]));
        } else if inner {
            let (_, _, m) = line_crossing(
                &p[i - 1].add(&off[i - 1]),
                &p[i].add(&off[i - 1]),
                &p[i].add(&off[i]),
                &p[i + 1].add(&off[i]),
            );
            out.push(m);
        } else {
            out.push(p[i].add(&off[i - 1]));
            out.push(p[i].add(&off[i]));
        }
    }
    out.push(if taper_end { p[k].clone() } else { p[k].add(&off[k - 1]) });
    out
}

/// `curve` with the part between `from` and `to` replaced by `middle`. At a
/// crossing end the curve leaves its original segment where that segment
/// meets the offset line, so it never has to cross the copied edge.
fn splice(curve: &Polyline, from: &CurvePos, to: &CurvePos, mut middle: Vec<Point>) -> Option<Polyline> {
    let pts = curve.points();
    let join = |outer: &Point, x: &Point, a: &Point, b: &Point| {
        let (t, _, p) = line_crossing(outer, x, a, b);
        (t > Scalar::zero() && t < Scalar::one()).then_some(p)
    };
    let mut out: Vec<Point> = Vec::new();
    if *from != CurvePos::start() {
        let x = from.point(curve);
        let keep = if from.t.is_zero() { from.seg } else { from.seg + 1 };
        out.extend(pts[..keep].iter().cloned());
        middle[0] = join(&pts[keep - 1], &x, &middle[0], &middle[1])?;
    }
    let tail = if *to != CurvePos::end(curve) {
        let x = to.point(curve);
        let next = to.seg + 1;
        let k = middle.len();
        middle[k - 1] = join(&pts[next], &x, &middle[k - 1], &middle[k - 2])?;
        &pts[next..]
    } else {
        &[]
    };
    out.extend(middle);
    out.extend(tail.iter().cloned());
    Polyline::dedup(out).ok()
}

// ---------------------------------------------------------------------------
// Planarization

/// Place a vertex `x1, x2, ...` at every crossing and cut both edges there;
/// pieces of edge `e` are named `e/1, e/2, ...` along the curve. Edges
/// without crossings keep their ids.
pub fn planarize(d: &Drawing) -> Result<Drawing, TransformError> {
    d.require_valid()?;
    let cs = d.crossings()?;
    if cs.is_empty() {
        return Ok(d.clone());
    }
    let taken: BTreeSet<&str> = d.vertices().iter().map(|v| v.id.0.as_str()).collect();
    let prefix = (0..).map(|k| "x".to_string() + &"_".repeat(k)).find(|p| {
        !taken.iter().any(|t| t.strip_prefix(p.as_str()).is_some_and(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit())))
    });
    let prefix = prefix.expect("some prefix is free");
    let mut vertices = d.vertices().to_vec();
    let ids: Vec<VertexId> = (0..cs.len()).map(|k| VertexId(format!("{prefix}{}", k + 1))).collect();
    for (k, c) in cs.iter().enumerate() {
        vertices.push(Vertex {
            id: ids[k].clone(),
            location: c.point.clone(),
            provenance: Provenance::Crossing(c.ids.0.clone(), c.ids.1.clone()),
        });
    }
    let analysis_along: Vec<Vec<usize>> = (0..d.num_edges())
        .map(|e| {
            let mut ks: Vec<usize> = (0..cs.len()).filter(|&k| cs[k].edges.0 == e || cs[k].edges.1 == e).collect();
            ks.sort_by_key(|&k| if cs[k].edges.0 == e { cs[k].order.0 } else { cs[k].order.1 });
            ks
        })
        .collect();
    let mut edges = Vec::new();
    for (e, edge) in d.edges().iter().enumerate() {
        let list = &analysis_along[e];
        if list.is_empty() {
            edges.push(edge.clone());
            continue;
        }
        let mut stops: Vec<(CurvePos, VertexId)> = vec![(CurvePos::start(), edge.u.clone())];
        for &k in list {
            let pos = if cs[k].edges.0 == e { cs[k].pos.0.clone() } else { cs[k].pos.1.clone() };
            stops.push((pos, ids[k].clone()));
        }
        stops.push((CurvePos::end(&edge.curve), edge.v.clone()));
        for (j, w) in stops.windows(2).enumerate() {
            let curve = Polyline::new(sub_points(&edge.curve, &w[0].0, &w[1].0))
                .map_err(|err| TransformError::Drawing(DrawingError::Curve(edge.id.clone(), err)))?;
            edges.push(Edge { id: EdgeId(format!("{}/{}", edge.id, j + 1)), u: w[0].1.clone(), v: w[1].1.clone(), curve });
        }
    }
    Ok(Drawing::new(vertices, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{convex_complete, empty_lens_gadget, separated_lens_gadget};
    use crate::drawing::DrawingBuilder;
    use crate::styles::is_separated;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn x_drawing() -> Drawing {
        DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(2, 2))
            .vertex("c", p(0, 2))
            .vertex("d", p(2, 0))
            .edge("e1", "a", "b", vec![])
            .unwrap()
            .edge("e2", "c", "d", vec![])
            .unwrap()
            .build()
            .unwrap()
    }

    fn star(k: i64) -> Drawing {
        let mut b = DrawingBuilder::new();
        b.vertex("o", p(0, 0));
        let tips = [(4, 0), (3, 3), (0, 4), (-3, 3), (-4, 0), (-3, -3), (0, -4), (3, -3)];
        for (i, t) in tips.iter().take(k as usize).enumerate() {
            b.vertex(format!("t{i}"), p(t.0, t.1));
            b.edge(format!("s{i}"), "o", format!("t{i}"), vec![]).unwrap();
        }
        b.build().unwrap()
    }

    fn ids(v: &[&str]) -> Vec<EdgeId> {
        v.iter().map(|s| EdgeId::from(*s)).collect()
    }

    #[test]
    fn remove_edges_counts() {
        let d = x_drawing();
        assert_eq!(remove_edges(&d, &ids(&["e1"])).unwrap().crossing_number().unwrap(), 0);
        assert_eq!(remove_edges(&d, &[]).unwrap(), d);
        assert!(matches!(remove_edges(&d, &ids(&["zz"])), Err(TransformError::UnknownEdge(_))));
    }

    #[test]
    fn rotation_starts_at_positive_x() {
        let d = star(5);
        let r = rotation_order(&d, &VertexId::from("o")).unwrap();
        assert_eq!(r, ids(&["s0", "s1", "s2", "s3", "s4"]));
    }

    #[test]
    fn split_star_center() {
        let d = star(8);
        let plan = SplitPlan::new("o".into(), ids(&["s0", "s1", "s2"]), ids(&["s3", "s4", "s5", "s6", "s7"]));
        let out = vertex_split(&d, &plan).unwrap();
        assert_eq!(out.num_vertices(), d.num_vertices() + 1);
        assert_eq!(out.crossing_number().unwrap(), 0);
        let degs = out.degrees();
        assert_eq!(degs[out.vertex_index(&"o.1".into()).unwrap()], 3);
        assert_eq!(degs[out.vertex_index(&"o.2".into()).unwrap()], 5);
        assert_eq!(out.vertex(&"o.2".into()).unwrap().provenance, Provenance::Split("o".into()));
    }

    #[test]
    fn split_rejects_bad_groups() {
        let d = star(4);
        let plan = SplitPlan::new("o".into(), ids(&["s0", "s2"]), ids(&["s1", "s3"]));
        assert!(matches!(vertex_split(&d, &plan), Err(TransformError::NonContiguousGroups(_))));
        let plan = SplitPlan::new("o".into(), ids(&["s0"]), ids(&["s1"]));
        assert!(matches!(vertex_split(&d, &plan), Err(TransformError::InvalidPlan(_))));
        let far = SplitPlan::new("o".into(), ids(&["s0", "s1"]), ids(&["s2", "s3"])).with_locations(p(3, 0), p(0, 0));
        assert!(matches!(vertex_split(&d, &far), Err(TransformError::ClearanceViolation(_))));
    }

    #[test]
    fn degenerate_split_leaves_isolated_vertex() {
        let d = star(3);
        let plan = SplitPlan::new("o".into(), ids(&["s0", "s1", "s2"]), vec![]);
        let out = vertex_split(&d, &plan).unwrap();
        assert_eq!(out.degrees()[out.vertex_index(&"o.2".into()).unwrap()], 0);
    }

    #[test]
    fn split_keeps_crossings() {
        let d = convex_complete(6);
        let v = VertexId::from("v1");
        let rot = rotation_order(&d, &v).unwrap();
        let plan = SplitPlan::new(v, rot[..2].to_vec(), rot[2..].to_vec());
        let out = vertex_split(&d, &plan).unwrap();
        assert_eq!(out.crossing_number().unwrap(), 15);
    }

    #[test]
    fn split_high_degree_seven_by_three() {
        let mut b = DrawingBuilder::new();
        b.vertex("o", p(0, 0));
        let tips = [(5, 1), (4, 4), (1, 5), (-3, 4), (-5, -1), (-2, -5), (3, -4)];
        for (i, t) in tips.iter().enumerate() {
            b.vertex(format!("t{i}"), p(t.0, t.1));
            b.edge(format!("s{i}"), "o", format!("t{i}"), vec![]).unwrap();
        }
        let d = b.build().unwrap();
        let out = split_high_degree(&d, &int(3)).unwrap();
        let degs = out.degrees();
        let got: Vec<usize> =
            ["o.1", "o.2", "o.3"].iter().map(|v| degs[out.vertex_index(&(*v).into()).unwrap()]).collect();
        assert_eq!(got, vec![3, 3, 1]);
        assert_eq!(out.max_degree(), 3);
        assert_eq!(out.num_edges(), 7);
        assert_eq!(split_high_degree(&d, &int(7)).unwrap(), d);
        assert!(split_high_degree(&d, &Scalar::new(1.into(), 2.into())).is_err());
    }

    #[test]
    fn reroute_double_crossing() {
        let d = empty_lens_gadget(LensKind::BetweenCrossings);
        let cr = d.crossing_number().unwrap();
        let RerouteOutcome::Changed(out) = reroute_empty_lens_step(&d, LensOptions::default()).unwrap() else {
            panic!("expected a change");
        };
        assert!(out.is_valid());
        assert!(out.crossing_number().unwrap() < cr);
        assert_eq!(out.edge_pair_crossings(&"e1".into(), &"e2".into()).unwrap(), 0);
        assert!(out.empty_lenses().unwrap().is_empty());
        assert!(matches!(
            reroute_empty_lens_step(&out, LensOptions::default()).unwrap(),
            RerouteOutcome::NoEmptyLens
        ));
    }

    #[test]
    fn reroute_endpoint_lens() {
        let d = empty_lens_gadget(LensKind::EndpointToCrossing);
        let out = reroute_to_fixpoint(&d, LensOptions::default()).unwrap();
        assert!(out.crossing_number().unwrap() < d.crossing_number().unwrap());
        assert!(out.empty_lenses().unwrap().is_empty());
    }

    #[test]
    fn reroute_keeps_separation() {
        let d = separated_lens_gadget();
        assert!(is_separated(&d).unwrap().holds);
        let out = reroute_to_fixpoint(&d, LensOptions::default()).unwrap();
        assert!(is_separated(&out).unwrap().holds);
        assert!(out.crossing_number().unwrap() <= d.crossing_number().unwrap());
    }

    #[test]
    fn pull_full_parallel_pair() {
        let d = empty_lens_gadget(LensKind::FullParallelPair);
        let (e1, e2) = (d.edges()[0].id.clone(), d.edges()[1].id.clone());
        let out = pull_parallel_pair(&d, &e1, &e2).unwrap();
        assert!(out.is_valid());
        assert!(out.crossing_number().unwrap() <= d.crossing_number().unwrap());
        assert!(matches!(
            reroute_empty_lens_step(&d, LensOptions::default()).unwrap(),
            RerouteOutcome::NoEmptyLens
        ));
    }

    #[test]
    fn planarize_counts() {
        let d = x_drawing();
        let out = planarize(&d).unwrap();
        assert_eq!((out.num_vertices(), out.num_edges(), out.crossing_number().unwrap()), (5, 4, 0));
        let k5 = convex_complete(5);
        let out = planarize(&k5).unwrap();
        assert_eq!((out.num_vertices(), out.num_edges(), out.crossing_number().unwrap()), (10, 20, 0));
        assert!(matches!(out.vertex(&"x1".into()).unwrap().provenance, Provenance::Crossing(_, _)));
        let flat = star(3);
        assert_eq!(planarize(&flat).unwrap(), flat);
    }
}
