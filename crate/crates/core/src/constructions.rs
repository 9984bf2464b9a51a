//! Generators: the extremal circular-arc family, convex complete graphs,
//! even cycles, random polyline drawings and empty-lens gadgets.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::drawing::{Drawing, DrawingBuilder, DrawingError, LensKind};
use crate::geometry::{ratio, snap, Point, Polyline};
use crate::styles::is_separated;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0}")]
    InvalidInput(String),
    #[error("arc discretization still wrong at resolution {resolution}: {reason}")]
    ResolutionTooCoarse { resolution: usize, reason: String },
    #[error("no valid drawing found after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error(transparent)]
    Drawing(#[from] DrawingError),
}

/// Fractional bits of the grid that arc samples are snapped to.
const ARC_BITS: u32 = 20;
/// Halvings of the sampling tolerance tried before giving up.
const MAX_REFINEMENTS: usize = 6;
/// Initial bound on the sagitta of each sampled chord.
const SAGITTA: f64 = 1.0 / 256.0;
/// Halvings of the first and last sampling step.
const ENDPOINT_REFINEMENT: usize = 12;
/// Shortest chord worth keeping next to an endpoint; far above the grid.
const MIN_CHORD: f64 = 1.0 / 1024.0;
/// Candidate abscissa sets examined when placing the arc family's vertices.
const PLACEMENT_CANDIDATES: usize = 20_000;

/// `n` points on the parabola `y = x^2 / n`, `x = 1..n`, in convex position.
pub fn parabola_points(n: usize) -> Vec<Point> {
    let n = n.max(1) as i64;
    (1..=n)
        .map(|t| Point::new(ratio(t, 1), ratio(t * t, n)))
        .collect()
}

/// Vertices of the arc family: `n` points on the parabola `y = x^2 / n` with
/// integer abscissae in `[-3n, 3n]`. Four points of a parabola are concyclic
/// only if their abscissae sum to zero, which is excluded exactly. Among
/// seeded random candidates the set whose smallest angular gap between
/// pencil circles is largest is kept, so that no two arcs need to run
/// nearly on top of each other.
pub fn arc_family_points(n: usize) -> Vec<Point> {
    let ni = n as i64;
    let pool: Vec<i64> = (-3 * ni..=3 * ni).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut best: Option<(f64, Vec<i64>)> = None;
    let tries = if n <= 10 {
        PLACEMENT_CANDIDATES
    } else {
        PLACEMENT_CANDIDATES / 10
    };
    for _ in 0..tries {
        let mut t: Vec<i64> = pool.choose_multiple(&mut rng, n).copied().collect();
        t.sort_unstable();
        if has_zero_quadruple(&t) {
            continue;
        }
        let pts: Vec<(f64, f64)> = t
            .iter()
            .map(|&x| (x as f64, (x * x) as f64 / n as f64))
            .collect();
        let q = placement_quality(&pts);
        if best.as_ref().map_or(true, |(bq, _)| q > *bq) {
            best = Some((q, t));
        }
    }
    let t = best.map(|(_, t)| t).unwrap_or_else(|| (1..=ni).collect());
    t.iter()
        .map(|&x| Point::new(ratio(x, 1), ratio(x * x, ni)))
        .collect()
}

fn has_zero_quadruple(t: &[i64]) -> bool {
    let n = t.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if t[a] + t[b] + t[c] + t[d] == 0 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Sorted tangent angles of the other vertices' circles through `(i, j)`,
/// framed by `-pi` and `pi`.
fn pencil_cuts(fp: &[(f64, f64)], i: usize, j: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..fp.len())
        .filter(|&w| w != i && w != j)
        .map(|w| tangent_angle(fp[i], fp[j], fp[w]))
        .collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.insert(0, -PI);
    cuts.push(PI);
    cuts
}

/// Gaps that receive an arc: all but the smaller of the two extreme ones.
fn used_gaps(cuts: &[f64]) -> Vec<(f64, f64)> {
    let gaps: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let last = gaps.len() - 1;
    let skip = if gaps[0].1 - gaps[0].0 < gaps[last].1 - gaps[last].0 {
        0
    } else {
        last
    };
    gaps.into_iter()
        .enumerate()
        .filter(|&(g, _)| g != skip)
        .map(|(_, g)| g)
        .collect()
}

fn placement_quality(fp: &[(f64, f64)]) -> f64 {
    let mut q = f64::INFINITY;
    for i in 0..fp.len() {
        for j in i + 1..fp.len() {
            for (lo, hi) in used_gaps(&pencil_cuts(fp, i, j)) {
                q = q.min(hi - lo);
            }
        }
    }
    q
}

/// Signed angle in `(-pi, pi)` from the chord `u -> v` to the tangent at `u`
/// of the arc from `u` through `w` to `v`.
fn tangent_angle(u: (f64, f64), v: (f64, f64), w: (f64, f64)) -> f64 {
    let (ax, ay) = (u.0 - w.0, u.1 - w.1);
    let (bx, by) = (v.0 - w.0, v.1 - w.1);
    // Circumcenter of u, v, w relative to w.
    let dd = 2.0 * (ax * by - ay * bx);
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let cx = (by * a2 - ay * b2) / dd + w.0;
    let cy = (ax * b2 - bx * a2) / dd + w.1;
    let (rx, ry) = (u.0 - cx, u.1 - cy);
    // Orientation of (u, w, v) tells the direction of travel.
    let o = (w.0 - u.0) * (v.1 - u.1) - (w.1 - u.1) * (v.0 - u.0);
    let (tx, ty) = if o > 0.0 { (-ry, rx) } else { (ry, -rx) };
    let (dx, dy) = (v.0 - u.0, v.1 - u.1);
    (dx * ty - dy * tx).atan2(dx * tx + dy * ty)
}

/// Samples of the arc from `u` to `v` leaving `u` at signed angle `theta`
/// from the chord, endpoints included. Steps of the central angle keep every
/// chord's sagitta below `sagitta` and use at least `min_steps` steps; they
/// are refined geometrically towards both endpoints so that the first and
/// last chords hug the tangents there.
fn arc_samples(
    u: (f64, f64),
    v: (f64, f64),
    theta: f64,
    min_steps: usize,
    sagitta: f64,
) -> Vec<(f64, f64)> {
    let (dx, dy) = (v.0 - u.0, v.1 - u.1);
    let len = dx.hypot(dy);
    let (ux, uy) = (dx / len, dy / len);
    let (tx, ty) = (
        ux * theta.cos() - uy * theta.sin(),
        ux * theta.sin() + uy * theta.cos(),
    );
    // Center lies on the right normal of the tangent, at signed radius.
    let r = len / (2.0 * theta.sin());
    let (cx, cy) = (u.0 + r * ty, u.1 - r * tx);
    let phi_u = (u.1 - cy).atan2(u.0 - cx);
    let rad = r.abs();
    let sweep = 2.0 * theta.abs();
    let step = 2.0 * (1.0 - (sagitta / rad).min(1.0)).acos();
    let k = ((sweep / step).ceil() as usize).max(min_steps);
    let arc_len = rad * sweep;
    let mut params: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
    let mut s = 1.0 / k as f64;
    for _ in 0..ENDPOINT_REFINEMENT {
        s /= 2.0;
        if s * arc_len < MIN_CHORD {
            break;
        }
        params.push(s);
        params.push(1.0 - s);
    }
    params.sort_by(|a, b| a.total_cmp(b));
    params
        .into_iter()
        .map(|f| {
            let phi = phi_u - 2.0 * theta * f;
            (cx + rad * phi.cos(), cy + rad * phi.sin())
        })
        .collect()
}

/// The extremal separated family: for every pair of the `n` vertices,
/// `n - 2` circular arcs from the pencil of circles through the pair, one
/// in each gap between the other vertices except the smaller extreme gap.
/// Each arc is sampled with at least `resolution` segments, snapped to a
/// dyadic grid, and the result is verified exactly; the sampling tolerance
/// is halved until verification passes.
pub fn separated_arc_construction(
    n: usize,
    resolution: usize,
) -> Result<Drawing, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::InvalidInput(
            "arc construction needs n >= 3".into(),
        ));
    }
    if resolution < 2 {
        return Err(ConstructionError::InvalidInput(
            "resolution must be at least 2".into(),
        ));
    }
    let pts = arc_family_points(n);
    let mut sagitta = SAGITTA;
    let mut last = String::new();
    for _ in 0..=MAX_REFINEMENTS {
        match arc_attempt(&pts, resolution, sagitta) {
            Ok(d) => return Ok(d),
            Err(reason) => last = reason,
        }
        sagitta /= 2.0;
    }
    Err(ConstructionError::ResolutionTooCoarse {
        resolution,
        reason: last,
    })
}

fn arc_attempt(pts: &[Point], resolution: usize, sagitta: f64) -> Result<Drawing, String> {
    let n = pts.len();
    let fp: Vec<(f64, f64)> = pts.iter().map(Point::to_f64).collect();
    let mut b = DrawingBuilder::new();
    for (i, p) in pts.iter().enumerate() {
        b.vertex(format!("v{}", i + 1), p.clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            for (k, (lo, hi)) in used_gaps(&pencil_cuts(&fp, i, j)).into_iter().enumerate() {
                let theta = (lo + hi) / 2.0;
                let samples = arc_samples(fp[i], fp[j], theta, resolution, sagitta);
                let mut curve = vec![pts[i].clone()];
                for s in &samples[1..samples.len() - 1] {
                    curve.push(Point::new(snap(s.0, ARC_BITS), snap(s.1, ARC_BITS)));
                }
                curve.push(pts[j].clone());
                let curve = Polyline::dedup(curve).map_err(|e| e.to_string())?;
                b.edge_curve(
                    format!("a{}-{}.{}", i + 1, j + 1, k + 1),
                    format!("v{}", i + 1),
                    format!("v{}", j + 1),
                    curve,
                );
            }
        }
    }
    let d = b.build().map_err(|e| e.to_string())?;
    let report = d.validate();
    if !report.is_empty() {
        return Err(report.to_string());
    }
    let a = d.analysis();
    if let Some(c) = a
        .crossings
        .iter()
        .find(|c| a.pair_count(c.edges.0, c.edges.1) > 2)
    {
        return Err(format!(
            "edges {} and {} cross more than twice",
            c.ids.0, c.ids.1
        ));
    }
    let sep = is_separated(&d).map_err(|e| e.to_string())?;
    if !sep.holds {
        return Err(sep.to_string());
    }
    Ok(d)
}

/// Whether the chord lines `y = (a+b)x - ab` of the parabola `y = x^2` for
/// three pairwise disjoint pairs pass through one point.
fn chords_concurrent(c: [(i64, i64); 3]) -> bool {
    let row = |(a, b): (i64, i64)| ((a + b) as i128, (a * b) as i128);
    let (s1, p1) = row(c[0]);
    let (s2, p2) = row(c[1]);
    let (s3, p3) = row(c[2]);
    // det [[s, -1, -p]] expanded; zero for concurrent (or parallel) lines
    s1 * (p3 - p2) - s2 * (p3 - p1) + s3 * (p2 - p1) == 0
}

/// Abscissae `x >= 1` for `n` parabola points, chosen greedily so that no
/// three chords between six distinct points are concurrent.
fn convex_abscissae(n: usize) -> Vec<i64> {
    let mut xs: Vec<i64> = Vec::with_capacity(n);
    let mut t = 0i64;
    while xs.len() < n {
        t += 1;
        let ok = (|| {
            for &a in &xs {
                let rest: Vec<i64> = xs.iter().copied().filter(|&v| v != a).collect();
                let pairs: Vec<(i64, i64)> = (0..rest.len())
                    .flat_map(|p| (p + 1..rest.len()).map(move |q| (p, q)))
                    .map(|(p, q)| (rest[p], rest[q]))
                    .collect();
                for (u, &c1) in pairs.iter().enumerate() {
                    for &c2 in &pairs[u + 1..] {
                        let disjoint = c1.0 != c2.0 && c1.0 != c2.1 && c1.1 != c2.0 && c1.1 != c2.1;
                        if disjoint && chords_concurrent([(t, a), c1, c2]) {
                            return false;
                        }
                    }
                }
            }
            true
        })();
        if ok {
            xs.push(t);
        }
    }
    xs
}

/// `K_n` with straight edges on points in convex position on a parabola,
/// with no three edges through a common crossing.
pub fn convex_complete(n: usize) -> Drawing {
    let den = n.max(1) as i64;
    let pts: Vec<Point> = convex_abscissae(n)
        .into_iter()
        .map(|t| Point::new(ratio(t, 1), ratio(t * t, den)))
        .collect();
    let mut b = DrawingBuilder::new();
    for (i, p) in pts.iter().enumerate() {
        b.vertex(format!("v{}", i + 1), p.clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            b.edge(
                format!("e{}-{}", i + 1, j + 1),
                format!("v{}", i + 1),
                format!("v{}", j + 1),
                vec![],
            )
            .expect("distinct convex points");
        }
    }
    b.build()
        .expect("convex complete graph is structurally valid")
}

/// The cycle `C_{2r+2}` drawn as a convex polygon; girth `2r + 2 > 2r`.
pub fn even_cycle(r: usize) -> Drawing {
    let len = 2 * r + 2;
    let pts = parabola_points(len);
    let mut b = DrawingBuilder::new();
    for (i, p) in pts.iter().enumerate() {
        b.vertex(format!("c{i}"), p.clone());
    }
    for i in 0..len {
        b.edge(
            format!("e{i}"),
            format!("c{i}"),
            format!("c{}", (i + 1) % len),
            vec![],
        )
        .expect("distinct cycle points");
    }
    b.build().expect("cycle is structurally valid")
}

/// Attempts per edge before giving up.
const EDGE_ATTEMPTS: usize = 200;

/// A random multigraph drawing in general position: `n` vertices on an
/// integer grid, `e` edges with up to two random bends each. Each edge is
/// resampled until the drawing stays in general position.
pub fn random_polyline_drawing(
    n: usize,
    e: usize,
    seed: u64,
) -> Result<Drawing, ConstructionError> {
    if n < 2 && e > 0 {
        return Err(ConstructionError::InvalidInput(
            "edges need at least two vertices".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 64 * (n as i64).max(4);
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point::from_ints(rng.gen_range(0..span), rng.gen_range(0..span));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let mut edges: Vec<(usize, usize, Vec<Point>)> = Vec::with_capacity(e);
    let mut attempts = 0;
    let build = |edges: &[(usize, usize, Vec<Point>)]| -> Result<Drawing, DrawingError> {
        let mut b = DrawingBuilder::new();
        for (i, p) in pts.iter().enumerate() {
            b.vertex(format!("v{i}"), p.clone());
        }
        for (k, (u, v, bends)) in edges.iter().enumerate() {
            b.edge(
                format!("e{k}"),
                format!("v{u}"),
                format!("v{v}"),
                bends.clone(),
            )?;
        }
        b.build()
    };
    while edges.len() < e {
        let mut placed = false;
        for _ in 0..EDGE_ATTEMPTS {
            attempts += 1;
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            let bends: Vec<Point> = (0..rng.gen_range(0..=2))
                .map(|_| Point::from_ints(rng.gen_range(0..span), rng.gen_range(0..span)))
                .collect();
            edges.push((u, v, bends));
            match build(&edges) {
                Ok(d) if d.is_valid() => {
                    placed = true;
                    break;
                }
                _ => {
                    edges.pop();
                }
            }
        }
        if !placed {
            return Err(ConstructionError::GenerationFailed { attempts });
        }
    }
    Ok(build(&edges)?)
}

fn p(x: i64, y: i64) -> Point {
    Point::from_ints(x, y)
}

/// A small drawing whose only empty lens has the given kind.
///
/// * `BetweenCrossings`: `e2` dips below the straight `e1` and crosses it
///   twice; a vertical `e3` runs through the lens, crossing both.
/// * `EndpointToCrossing`: `e1` and `e2` share `w` and cross once.
/// * `FullParallelPair`: two non-crossing parallel edges with nothing
///   between them; `e3` crosses both.
pub fn empty_lens_gadget(kind: LensKind) -> Drawing {
    let mut b = DrawingBuilder::new();
    match kind {
        LensKind::BetweenCrossings => {
            b.vertex("a", p(0, 0))
                .vertex("b", p(10, 0))
                .vertex("c", p(2, 2))
                .vertex("d", p(8, 2));
            b.vertex("s", p(5, -3)).vertex("t", p(5, 3));
            b.edge("e1", "a", "b", vec![]).unwrap();
            b.edge("e2", "c", "d", vec![p(4, -1), p(6, -1)]).unwrap();
            b.edge("e3", "s", "t", vec![]).unwrap();
        }
        LensKind::EndpointToCrossing => {
            b.vertex("w", p(0, 0))
                .vertex("x", p(10, 0))
                .vertex("y", p(8, 2));
            b.edge("e1", "w", "x", vec![]).unwrap();
            b.edge("e2", "w", "y", vec![p(4, -2)]).unwrap();
        }
        LensKind::FullParallelPair => {
            b.vertex("u", p(0, 0))
                .vertex("v", p(10, 0))
                .vertex("z", p(5, 5))
                .vertex("s", p(4, -4));
            b.edge("e1", "u", "v", vec![]).unwrap();
            b.edge("e2", "u", "v", vec![p(5, -2)]).unwrap();
            b.edge("e3", "s", "z", vec![]).unwrap();
        }
    }
    b.build().expect("gadget is structurally valid")
}

/// The between-crossings gadget next to a separated parallel pair (one
/// vertex inside its lens), so that the whole drawing is separated.
pub fn separated_lens_gadget() -> Drawing {
    let mut b = DrawingBuilder::new();
    b.vertex("a", p(0, 0))
        .vertex("b", p(10, 0))
        .vertex("c", p(2, 2))
        .vertex("d", p(8, 2));
    b.vertex("s", p(5, -3)).vertex("t", p(5, 3));
    b.vertex("f", p(20, 0))
        .vertex("g", p(30, 0))
        .vertex("m", p(25, 0));
    b.edge("e1", "a", "b", vec![]).unwrap();
    b.edge("e2", "c", "d", vec![p(4, -1), p(6, -1)]).unwrap();
    b.edge("e3", "s", "t", vec![]).unwrap();
    b.edge("f1", "f", "g", vec![p(25, 3)]).unwrap();
    b.edge("f2", "f", "g", vec![p(25, -3)]).unwrap();
    b.build().expect("gadget is structurally valid")
}

/// Named generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    SeparatedArc,
    ConvexComplete,
    EvenCycle,
    Random,
    Gadget(LensKind),
    SeparatedGadget,
}

impl Family {
    pub const NAMES: [&'static str; 8] = [
        "separated-arc",
        "convex-complete",
        "even-cycle",
        "random",
        "gadget-between-crossings",
        "gadget-endpoint-to-crossing",
        "gadget-full-parallel-pair",
        "gadget-separated",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SeparatedArc => "separated-arc",
            Family::ConvexComplete => "convex-complete",
            Family::EvenCycle => "even-cycle",
            Family::Random => "random",
            Family::Gadget(LensKind::BetweenCrossings) => "gadget-between-crossings",
            Family::Gadget(LensKind::EndpointToCrossing) => "gadget-endpoint-to-crossing",
            Family::Gadget(LensKind::FullParallelPair) => "gadget-full-parallel-pair",
            Family::SeparatedGadget => "gadget-separated",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "separated-arc" => Family::SeparatedArc,
            "convex-complete" => Family::ConvexComplete,
            "even-cycle" => Family::EvenCycle,
            "random" => Family::Random,
            "gadget-between-crossings" => Family::Gadget(LensKind::BetweenCrossings),
            "gadget-endpoint-to-crossing" => Family::Gadget(LensKind::EndpointToCrossing),
            "gadget-full-parallel-pair" => Family::Gadget(LensKind::FullParallelPair),
            "gadget-separated" => Family::SeparatedGadget,
            other => {
                return Err(ConstructionError::InvalidInput(format!(
                    "unknown family {other:?}; expected one of {}",
                    Family::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Everything needed to reproduce one generated drawing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// Minimum segments per arc for the arc family.
    pub resolution: usize,
    /// Edge count for the random family; defaults to `2n`.
    pub edges: Option<usize>,
    /// Half-length parameter of the even cycle `C_(2r+2)`; defaults to
    /// `n/2 - 1` for even `n`.
    pub r: Option<usize>,
}

impl ConstructionSpec {
    pub fn new(family: Family, n: usize) -> Self {
        ConstructionSpec {
            family,
            n,
            seed: 0,
            resolution: 4,
            edges: None,
            r: None,
        }
    }

    pub fn build(&self) -> Result<Drawing, ConstructionError> {
        let n = self.n;
        match self.family {
            Family::SeparatedArc => separated_arc_construction(n, self.resolution),
            Family::ConvexComplete if n >= 3 => Ok(convex_complete(n)),
            Family::ConvexComplete => Err(ConstructionError::InvalidInput(
                "convex-complete needs n >= 3".into(),
            )),
            Family::EvenCycle => {
                let r = match self.r {
                    Some(r) => r,
                    None if n >= 4 && n % 2 == 0 => n / 2 - 1,
                    None => {
                        return Err(ConstructionError::InvalidInput(
                            "even-cycle needs an even n >= 4 or r >= 1".into(),
                        ))
                    }
                };
                if r == 0 {
                    return Err(ConstructionError::InvalidInput("r must be at least 1".into()));
                }
                Ok(even_cycle(r))
            }
            Family::Random => random_polyline_drawing(n, self.edges.unwrap_or(2 * n), self.seed),
            Family::Gadget(kind) => Ok(empty_lens_gadget(kind)),
            Family::SeparatedGadget => Ok(separated_lens_gadget()),
        }
    }
}

/// Numeric summary of how far arc samples deviate from the exact grid, used
/// by tests to check snapping stays below the grid spacing.
pub fn snap_error(v: f64) -> f64 {
    (snap(v, ARC_BITS).to_f64().unwrap_or(f64::NAN) - v).abs()
}

#[cfg(test)]
fn grid_spacing() -> crate::geometry::Scalar {
    ratio(1, 1 << ARC_BITS)
}
