//! Balanced style-preserving bisections and the recursive decomposition that
//! drives the generalized Crossing Lemma.
//!
//! A bisection splits the vertex set into two sides of at least `n/5`
//! vertices each (real division). Its width counts the edges between the
//! sides plus, for styles that need every parallel pair to separate the
//! vertices, the fewest edges whose removal restores that property inside
//! each side.

use std::fmt;

use num_traits::Pow;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{x_of_b, BoundsError};
use crate::drawing::{Drawing, DrawingError, EdgeId, ParallelLens, VertexId};
use crate::geometry::{int, ratio, Scalar};
use crate::styles::{Style, StyleParams};

/// The exhaustive oracle refuses larger inputs.
pub const ORACLE_MAX_VERTICES: usize = 20;

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("{n} vertices is too many for the exhaustive oracle (limit {ORACLE_MAX_VERTICES})")]
    TooLargeForOracle { n: usize },
    #[error("no feasible bipartition")]
    NoFeasibleBipartition,
    #[error("style violated: {0}")]
    StyleViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub part1: Vec<VertexId>,
    pub part2: Vec<VertexId>,
    /// Edges with one endpoint on each side.
    pub cut: Vec<EdgeId>,
    /// Parallel edges removed inside a side to keep its lenses separating.
    pub repaired: Vec<EdgeId>,
}

impl Bipartition {
    pub fn width(&self) -> usize {
        self.cut.len() + self.repaired.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutter {
    Oracle,
    Heuristic,
}

impl fmt::Display for Cutter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cutter::Oracle => "oracle",
            Cutter::Heuristic => "heuristic",
        })
    }
}

/// Precomputed data for evaluating sides of one drawing.
struct Instance<'a> {
    d: &'a Drawing,
    ends: Vec<(usize, usize)>,
    bundles: Vec<Bundle>,
}

struct Bundle {
    ends: (usize, usize),
    edges: Vec<usize>,
    /// Vertices strictly inside the lens of each pair; `None` when the pair
    /// crosses itself into a non-simple curve.
    inside: Vec<Vec<Option<Vec<usize>>>>,
}

impl<'a> Instance<'a> {
    fn new(d: &'a Drawing, style: Style) -> Result<Self, DecompositionError> {
        let ends = (0..d.num_edges()).map(|i| d.endpoints(i)).collect();
        let mut bundles = Vec::new();
        if style.needs_separation() {
            for (&key, edges) in &d.bundles() {
                if edges.len() < 2 {
                    continue;
                }
                let k = edges.len();
                let mut inside = vec![vec![None; k]; k];
                for a in 0..k {
                    for b in a + 1..k {
                        let (ea, eb) = (&d.edges()[edges[a]].id, &d.edges()[edges[b]].id);
                        if let ParallelLens::Lens(l) = d.lens_of_parallel_pair(ea, eb)? {
                            let ids = l
                                .interior_vertices
                                .iter()
                                .map(|v| d.vertex_index(v))
                                .collect::<Result<Vec<_>, _>>()?;
                            inside[a][b] = Some(ids.clone());
                            inside[b][a] = Some(ids);
                        }
                    }
                }
                bundles.push(Bundle {
                    ends: key,
                    edges: edges.clone(),
                    inside,
                });
            }
        }
        Ok(Instance { d, ends, bundles })
    }

    fn n(&self) -> usize {
        self.d.num_vertices()
    }

    fn balanced(&self, size1: usize) -> bool {
        let n = self.n();
        5 * size1 >= n && 5 * (n - size1) >= n
    }

    fn cut(&self, side: &[bool]) -> Vec<usize> {
        (0..self.ends.len())
            .filter(|&i| side[self.ends[i].0] != side[self.ends[i].1])
            .collect()
    }

    /// Edges to drop so that every remaining parallel pair inside a side has
    /// a vertex of that side strictly inside and one strictly outside.
    fn repair(&self, side: &[bool]) -> Vec<usize> {
        let count1 = side.iter().filter(|&&s| s).count();
        let mut out = Vec::new();
        for b in &self.bundles {
            let s = side[b.ends.0];
            if side[b.ends.1] != s {
                continue;
            }
            let total = if s { count1 } else { side.len() - count1 };
            let k = b.edges.len();
            let ok = |x: usize, y: usize| match &b.inside[x][y] {
                None => false,
                Some(inner) => {
                    let within = inner.iter().filter(|&&v| side[v] == s).count();
                    within > 0 && total - 2 - within > 0
                }
            };
            let adj: Vec<Vec<bool>> =
                (0..k).map(|x| (0..k).map(|y| x != y && ok(x, y)).collect()).collect();
            let keep = max_clique(&adj);
            out.extend((0..k).filter(|x| !keep.contains(x)).map(|x| b.edges[x]));
        }
        out.sort_unstable();
        out
    }

    fn cost(&self, side: &[bool]) -> usize {
        self.cut(side).len() + self.repair(side).len()
    }

    fn bipartition(&self, side: &[bool], style: Style) -> Result<Bipartition, DecompositionError> {
        let d = self.d;
        let cut = self.cut(side);
        let repaired = self.repair(side);
        let vid = |s: bool| -> Vec<usize> { (0..self.n()).filter(|&v| side[v] == s).collect() };
        for s in [true, false] {
            let vs = vid(s);
            let es: Vec<usize> = (0..d.num_edges())
                .filter(|&i| side[self.ends[i].0] == s && side[self.ends[i].1] == s)
                .filter(|i| repaired.binary_search(i).is_err())
                .collect();
            let report = style.check(&d.restrict(&vs, &es))?;
            if !report.holds {
                return Err(DecompositionError::StyleViolated(report.to_string()));
            }
        }
        let ids = |v: Vec<usize>| v.into_iter().map(|i| d.vertices()[i].id.clone()).collect();
        let eids = |v: Vec<usize>| v.into_iter().map(|i| d.edges()[i].id.clone()).collect();
        Ok(Bipartition {
            part1: ids(vid(true)),
            part2: ids(vid(false)),
            cut: eids(cut),
            repaired: eids(repaired),
        })
    }
}

/// Largest clique, first in lexicographic order among the largest ones.
fn max_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    fn grow(adj: &[Vec<bool>], cur: &mut Vec<usize>, cand: &[usize], best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for (i, &v) in cand.iter().enumerate() {
            if cur.len() + cand.len() - i <= best.len() {
                return;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| adj[v][w]).collect();
            cur.push(v);
            grow(adj, cur, &next, best);
            cur.pop();
        }
    }
    let all: Vec<usize> = (0..adj.len()).collect();
    let mut best = Vec::new();
    grow(adj, &mut Vec::new(), &all, &mut best);
    best
}

fn require_style(d: &Drawing, style: Style) -> Result<(), DecompositionError> {
    let r = style.check(d)?;
    if r.holds {
        Ok(())
    } else {
        Err(DecompositionError::StyleViolated(r.to_string()))
    }
}

/// Exact bisection width by enumerating every balanced bipartition.
pub fn bisection_width_oracle(
    d: &Drawing,
    style: Style,
) -> Result<(usize, Bipartition), DecompositionError> {
    let n = d.num_vertices();
    if n < 2 {
        return Err(DecompositionError::NoFeasibleBipartition);
    }
    if n > ORACLE_MAX_VERTICES {
        return Err(DecompositionError::TooLargeForOracle { n });
    }
    require_style(d, style)?;
    let inst = Instance::new(d, style)?;
    let mut best: Option<(usize, u32)> = None;
    let mut side = vec![false; n];
    // Vertex 0 always sits in the first part.
    for mask in 0..(1u32 << (n - 1)) {
        let full = (mask << 1) | 1;
        if !inst.balanced(full.count_ones() as usize) {
            continue;
        }
        for (v, s) in side.iter_mut().enumerate() {
            *s = full >> v & 1 == 1;
        }
        let c = inst.cost(&side);
        if best.map_or(true, |(b, _)| c < b) {
            best = Some((c, full));
        }
    }
    let (w, full) = best.ok_or(DecompositionError::NoFeasibleBipartition)?;
    for (v, s) in side.iter_mut().enumerate() {
        *s = full >> v & 1 == 1;
    }
    Ok((w, inst.bipartition(&side, style)?))
}

/// Sweep-seeded local search: the best balanced prefix of a horizontal (and a
/// vertical) coordinate order, improved by single moves and pair swaps.
pub fn bisection_heuristic(
    d: &Drawing,
    style: Style,
) -> Result<(usize, Bipartition), DecompositionError> {
    let n = d.num_vertices();
    if n < 2 {
        return Err(DecompositionError::NoFeasibleBipartition);
    }
    require_style(d, style)?;
    let inst = Instance::new(d, style)?;
    let mut best: Option<(usize, Vec<bool>)> = None;
    for vertical in [false, true] {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (&d.vertices()[a].location, &d.vertices()[b].location);
            if vertical {
                (&p.y, &p.x).cmp(&(&q.y, &q.x))
            } else {
                (&p.x, &p.y).cmp(&(&q.x, &q.y))
            }
        });
        for k in 1..n {
            if !inst.balanced(k) {
                continue;
            }
            let mut side = vec![false; n];
            for &v in &order[..k] {
                side[v] = true;
            }
            let c = inst.cost(&side);
            if best.as_ref().map_or(true, |(b, _)| c < *b) {
                best = Some((c, side));
            }
        }
    }
    let (mut cost, mut side) = best.ok_or(DecompositionError::NoFeasibleBipartition)?;
    let mut size1 = side.iter().filter(|&&s| s).count();
    'improve: loop {
        for v in 0..n {
            let next1 = if side[v] { size1 - 1 } else { size1 + 1 };
            if !inst.balanced(next1) {
                continue;
            }
            side[v] = !side[v];
            let c = inst.cost(&side);
            if c < cost {
                cost = c;
                size1 = next1;
                continue 'improve;
            }
            side[v] = !side[v];
        }
        for u in 0..n {
            for v in u + 1..n {
                if side[u] == side[v] {
                    continue;
                }
                side.swap(u, v);
                let c = inst.cost(&side);
                if c < cost {
                    cost = c;
                    continue 'improve;
                }
                side.swap(u, v);
            }
        }
        break;
    }
    Ok((cost, inst.bipartition(&side, style)?))
}

pub fn bisect(
    d: &Drawing,
    style: Style,
    cutter: Cutter,
) -> Result<(usize, Bipartition), DecompositionError> {
    match cutter {
        Cutter::Oracle => bisection_width_oracle(d, style),
        Cutter::Heuristic => bisection_heuristic(d, style),
    }
}

/// Both sides of `b_D <= k2 * sqrt(cr + Δ e + n)`; the comparison itself is
/// exact (squared).
#[derive(Clone, Debug, Serialize)]
pub struct BisectionInequality {
    pub width: usize,
    pub cr: usize,
    pub max_degree: usize,
    pub e: usize,
    pub n: usize,
    pub k2: f64,
    pub rhs: f64,
    pub holds: bool,
    pub margin: f64,
}

pub fn check_bisection_inequality(
    d: &Drawing,
    style: Style,
    k2: &Scalar,
) -> Result<BisectionInequality, DecompositionError> {
    let (width, _) = bisection_width_oracle(d, style)?;
    let cr = d.crossing_number()?;
    let (n, e, delta) = (d.num_vertices(), d.num_edges(), d.max_degree());
    let radicand = cr + delta * e + n;
    let holds = int((width * width) as i64) <= k2 * k2 * int(radicand as i64);
    let k2f = scalar_f64(k2);
    let rhs = k2f * (radicand as f64).sqrt();
    Ok(BisectionInequality {
        width,
        cr,
        max_degree: delta,
        e,
        n,
        k2: k2f,
        rhs,
        holds,
        margin: rhs - width as f64,
    })
}

fn scalar_f64(s: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    s.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartSummary {
    pub vertices: Vec<VertexId>,
    pub edges: usize,
    /// Whether this part is bisected in the following step.
    pub split: bool,
}

impl PartSummary {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }
}

/// The state `G^i` and what the following step did with it.
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub parts: Vec<PartSummary>,
    /// Parts with at least `(4/5)^(i+1) n` vertices.
    pub big_parts: usize,
    pub total_parts: usize,
    #[serde(serialize_with = "crate::geometry::serialize_scalar")]
    pub split_threshold: Scalar,
    /// `(4/5)^i`, the left side of the stop test.
    #[serde(serialize_with = "crate::geometry::serialize_scalar")]
    pub stop_lhs: Scalar,
    pub stopped: bool,
    /// Edges removed while splitting this step's parts.
    pub removed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionTrace {
    pub style: String,
    pub cutter: Cutter,
    pub n: usize,
    pub e: usize,
    #[serde(serialize_with = "crate::geometry::serialize_scalar")]
    pub x: Scalar,
    /// `e^x / ((2 k3)^x n^(x+1))`, the right side of the stop test.
    pub stop_rhs: f64,
    pub steps: Vec<StepRecord>,
    /// Index of the last state; the algorithm stopped in step `k + 1`.
    pub k: usize,
    pub removed_total: usize,
}

impl DecompositionTrace {
    pub fn removed_ratio(&self) -> f64 {
        if self.e == 0 {
            0.0
        } else {
            self.removed_total as f64 / self.e as f64
        }
    }
}

/// Exact `(4/5)^i < e^x / ((2 k3)^x n^(x+1))` for rational `x = p/q`,
/// compared after raising both sides to the power `q`.
pub fn stop_condition(i: usize, n: usize, e: usize, k3: &Scalar, x: &Scalar) -> bool {
    let p: i32 = to_i32(x.numer());
    let q: i32 = to_i32(x.denom());
    let lhs = Pow::pow(ratio(4, 5), (i as i32) * q) * Pow::pow(int(2) * k3, p) * Pow::pow(int(n as i64), p + q);
    lhs < Pow::pow(int(e as i64), p)
}

fn to_i32(b: &num_bigint::BigInt) -> i32 {
    use num_traits::ToPrimitive;
    b.to_i32().expect("exponent fits in i32")
}

/// Recursive bisection. Parts whose size equals the split threshold
/// `(4/5)^(i+1) n` exactly are split; parts with fewer than two vertices are
/// never split.
pub fn decompose(
    d: &Drawing,
    params: &StyleParams,
    cutter: Cutter,
) -> Result<DecompositionTrace, DecompositionError> {
    let (n, e) = (d.num_vertices(), d.num_edges());
    if e == 0 {
        return Err(DecompositionError::InvalidInput("drawing has no edges".into()));
    }
    require_style(d, params.style)?;
    let x = x_of_b(&params.b)?;
    let rhs = {
        let xf = scalar_f64(&x);
        let k3 = scalar_f64(&params.k3);
        ((e as f64).ln() * xf - (2.0 * k3).ln() * xf - (n as f64).ln() * (xf + 1.0)).exp()
    };
    let mut removed = vec![false; e];
    let mut parts: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut steps = Vec::new();
    let mut removed_total = 0;
    for i in 0.. {
        let stop_lhs: Scalar = Pow::pow(ratio(4, 5), i as i32);
        let split_threshold = Pow::pow(ratio(4, 5), i as i32 + 1) * int(n as i64);
        let stopped = stop_condition(i, n, e, &params.k3, &x);
        let big = |p: &Vec<usize>| int(p.len() as i64) >= split_threshold;
        let big_parts = parts.iter().filter(|p| big(p)).count();
        let edges_in = |p: &[usize], removed: &[bool]| -> Vec<usize> {
            let mut inside = vec![false; n];
            for &v in p {
                inside[v] = true;
            }
            (0..e)
                .filter(|&j| !removed[j])
                .filter(|&j| {
                    let (a, b) = d.endpoints(j);
                    inside[a] && inside[b]
                })
                .collect()
        };
        let mut summaries: Vec<PartSummary> = parts
            .iter()
            .map(|p| PartSummary {
                vertices: p.iter().map(|&v| d.vertices()[v].id.clone()).collect(),
                edges: edges_in(p, &removed).len(),
                split: !stopped && big(p) && p.len() >= 2,
            })
            .collect();
        if stopped {
            steps.push(StepRecord {
                step: i,
                parts: summaries,
                big_parts,
                total_parts: parts.len(),
                split_threshold,
                stop_lhs,
                stopped,
                removed: 0,
            });
            return Ok(DecompositionTrace {
                style: params.style.to_string(),
                cutter,
                n,
                e,
                x,
                stop_rhs: rhs,
                steps,
                k: i,
                removed_total,
            });
        }
        let mut next = Vec::new();
        let mut removed_now = 0;
        for (p, s) in parts.iter().zip(summaries.iter_mut()) {
            if !s.split {
                next.push(p.clone());
                continue;
            }
            let es = edges_in(p, &removed);
            let sub = d.restrict(p, &es);
            let (w, bip) = bisect(&sub, params.style, cutter)?;
            for id in bip.cut.iter().chain(&bip.repaired) {
                removed[d.edge_index(id)?] = true;
            }
            removed_now += w;
            for half in [&bip.part1, &bip.part2] {
                next.push(half.iter().map(|v| d.vertex_index(v)).collect::<Result<Vec<_>, _>>()?);
            }
        }
        removed_total += removed_now;
        steps.push(StepRecord {
            step: i,
            parts: summaries,
            big_parts,
            total_parts: parts.len(),
            split_threshold,
            stop_lhs,
            stopped,
            removed: removed_now,
        });
        parts = next;
    }
    unreachable!("the stop test holds once (4/5)^i drops below a positive constant")
}

impl fmt::Display for DecompositionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# decomposition style={} cutter={}", self.style, self.cutter)?;
        writeln!(f, "# parts with exactly (4/5)^(i+1) n vertices are split")?;
        writeln!(
            f,
            "n={} e={} x={} stop_rhs={:.6e} k={} removed={} removed/e={:.4}",
            self.n,
            self.e,
            self.x,
            self.stop_rhs,
            self.k,
            self.removed_total,
            self.removed_ratio()
        )?;
        for s in &self.steps {
            let sizes: Vec<String> = s
                .parts
                .iter()
                .map(|p| format!("{}/{}{}", p.n(), p.edges, if p.split { "*" } else { "" }))
                .collect();
            writeln!(
                f,
                "step {} M={} m={} lhs={} threshold={} stop={} removed={} parts=[{}]",
                s.step,
                s.total_parts,
                s.big_parts,
                s.stop_lhs,
                s.split_threshold,
                s.stopped,
                s.removed,
                sizes.join(" ")
            )?;
        }
        Ok(())
    }
}

/// `true` when every part the trace split obeys `(4/5)^(i+1) n <= size <=
/// (4/5)^i n`, every state has `m_i <= (5/4)^(i+1)`, the parts of every
/// state partition the vertices, and only the last state stops.
pub fn trace_invariants_hold(t: &DecompositionTrace) -> bool {
    let n = int(t.n as i64);
    t.steps.iter().enumerate().all(|(i, s)| {
        let lo = Pow::pow(ratio(4, 5), i as i32 + 1) * &n;
        let hi = Pow::pow(ratio(4, 5), i as i32) * &n;
        let sizes_ok = s
            .parts
            .iter()
            .all(|p| int(p.n() as i64) <= hi && (!p.split || int(p.n() as i64) >= lo));
        let count_ok = int(s.big_parts as i64) <= Pow::pow(ratio(5, 4), i as i32 + 1);
        let mut seen: Vec<&VertexId> = s.parts.iter().flat_map(|p| &p.vertices).collect();
        seen.sort();
        seen.dedup();
        let partition_ok = seen.len() == t.n && s.parts.iter().map(|p| p.n()).sum::<usize>() == t.n;
        let stop_ok = s.stopped == (i + 1 == t.steps.len());
        sizes_ok && count_ok && partition_ok && stop_ok
    }) && t.steps.iter().map(|s| s.removed).sum::<usize>() == t.removed_total
        && t.steps.len() == t.k + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{convex_complete, separated_lens_gadget};
    use crate::drawing::DrawingBuilder;
    use crate::geometry::Point;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn path(k: usize) -> Drawing {
        let mut b = DrawingBuilder::new();
        for i in 0..k {
            b.vertex(format!("v{i}"), p(i as i64, (i * i) as i64 % 3));
        }
        for i in 1..k {
            b.edge(format!("e{i}"), format!("v{}", i - 1), format!("v{i}"), vec![]).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn single_edge_and_path() {
        let s = Style::Multiplicity(1);
        assert_eq!(bisection_width_oracle(&path(2), s).unwrap().0, 1);
        assert_eq!(bisection_width_oracle(&path(5), s).unwrap().0, 1);
        assert_eq!(bisection_heuristic(&path(5), s).unwrap().0, 1);
    }

    #[test]
    fn oracle_guards() {
        let big = path(21);
        assert!(matches!(
            bisection_width_oracle(&big, Style::Multiplicity(1)),
            Err(DecompositionError::TooLargeForOracle { n: 21 })
        ));
        assert!(matches!(
            bisection_width_oracle(&path(1), Style::Multiplicity(1)),
            Err(DecompositionError::NoFeasibleBipartition)
        ));
    }

    #[test]
    fn clique_search() {
        let adj = vec![
            vec![false, true, true, false],
            vec![true, false, true, false],
            vec![true, true, false, true],
            vec![false, false, true, false],
        ];
        assert_eq!(max_clique(&adj), vec![0, 1, 2]);
        assert_eq!(max_clique(&[]), Vec::<usize>::new());
    }

    #[test]
    fn separated_bisection_repairs_lenses() {
        // One lens around m with o outside: every balanced split either cuts
        // a lens edge or leaves the lens without an inner or outer vertex.
        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(4, 0))
            .vertex("m", p(2, 0))
            .vertex("o", p(10, 0))
            .edge("f1", "a", "b", vec![p(2, 2)])
            .unwrap()
            .edge("f2", "a", "b", vec![p(2, -2)])
            .unwrap()
            .build()
            .unwrap();
        let (w, b) = bisection_width_oracle(&d, Style::Separated).unwrap();
        assert_eq!(w, 1);
        assert_eq!((b.cut.len(), b.repaired.len()), (0, 1));
        assert_eq!(bisection_width_oracle(&d, Style::Multiplicity(2)).unwrap().0, 0);
        assert_eq!(bisection_heuristic(&d, Style::Separated).unwrap().0, 1);
        let gadget = separated_lens_gadget();
        assert_eq!(bisection_width_oracle(&gadget, Style::Separated).unwrap().0, 0);
    }

    #[test]
    fn stop_condition_is_exact() {
        // K8 with multiplicity(1): x = 1, k3 = 1, rhs = 28 / (2 * 64) = 7/32.
        let (k3, x) = (int(1), int(1));
        assert!(!stop_condition(6, 8, 28, &k3, &x)); // (4/5)^6 = 0.262 > 0.219
        assert!(stop_condition(7, 8, 28, &k3, &x)); // (4/5)^7 = 0.2097
    }

    #[test]
    fn k8_trace() {
        let d = convex_complete(8);
        let params = Style::Multiplicity(1).params(None).unwrap();
        let t = decompose(&d, &params, Cutter::Oracle).unwrap();
        assert_eq!(t.k, 7);
        assert!(trace_invariants_hold(&t), "{t}");
        assert!(t.to_string().contains("step 7"));
    }

    #[test]
    fn already_stopped() {
        // Girth style with a tiny edge constant: e / (2 c n^2) = 12.5 > 1.
        let d = path(2);
        let params = Style::Girth(1).params(Some(ratio(1, 100))).unwrap();
        let t = decompose(&d, &params, Cutter::Heuristic).unwrap();
        assert_eq!(t.k, 0);
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.removed_total, 0);
        assert!(trace_invariants_hold(&t));
    }
}
