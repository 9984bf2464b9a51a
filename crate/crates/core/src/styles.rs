//! Drawing-style predicates and the constants each style contributes to the
//! generalized Crossing Lemma.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::drawing::{Drawing, DrawingError, EdgeId, ParallelLens, VertexId};
use crate::geometry::{int, Point, Scalar};

/// A named drawing style. `LocallyStarlike` as a style is the separated and
/// locally starlike style; [`is_locally_starlike`] alone checks only the
/// adjacency condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Style {
    Separated,
    LocallyStarlike,
    SingleCrossing,
    Branching,
    Multiplicity(usize),
    Girth(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StyleError {
    #[error("unknown style {0:?}")]
    UnknownStyle(String),
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("style {0} has no crossing-lemma constants")]
    NoConstants(Style),
}

impl Style {
    /// Build from a CLI-style name plus optional `m` / `r`.
    pub fn from_parts(name: &str, m: Option<usize>, r: Option<usize>) -> Result<Style, StyleError> {
        let s = match name {
            "separated" => Style::Separated,
            "locally-starlike" | "loc-star" => Style::LocallyStarlike,
            "single-crossing" => Style::SingleCrossing,
            "branching" => Style::Branching,
            "multiplicity" => Style::Multiplicity(m.ok_or(StyleError::MissingParameter("m"))?),
            "girth" => Style::Girth(r.ok_or(StyleError::MissingParameter("r"))?),
            other => return Err(StyleError::UnknownStyle(other.to_string())),
        };
        match s {
            Style::Multiplicity(0) => {
                Err(StyleError::InvalidParameter("m must be at least 1".into()))
            }
            Style::Girth(0) => Err(StyleError::InvalidParameter("r must be at least 1".into())),
            s => Ok(s),
        }
    }

    pub fn base_name(self) -> &'static str {
        match self {
            Style::Separated => "separated",
            Style::LocallyStarlike => "locally-starlike",
            Style::SingleCrossing => "single-crossing",
            Style::Branching => "branching",
            Style::Multiplicity(_) => "multiplicity",
            Style::Girth(_) => "girth",
        }
    }

    /// Whether the style constrains parallel pairs by the vertices around
    /// them, so that dropping vertices can break it.
    pub fn needs_separation(self) -> bool {
        matches!(
            self,
            Style::Separated | Style::LocallyStarlike | Style::Branching
        )
    }

    pub fn check(self, d: &Drawing) -> Result<StyleReport, DrawingError> {
        let mut r = match self {
            Style::Separated => is_separated(d)?,
            Style::LocallyStarlike => {
                let s = is_separated(d)?;
                if s.holds {
                    is_locally_starlike(d)?
                } else {
                    s
                }
            }
            Style::SingleCrossing => is_single_crossing(d)?,
            Style::Branching => is_branching(d)?,
            Style::Multiplicity(m) => satisfies_multiplicity_style(d, m)?,
            Style::Girth(r) => satisfies_girth_style(d, r)?,
        };
        r.style = self.to_string();
        Ok(r)
    }

    pub fn holds(self, d: &Drawing) -> Result<bool, DrawingError> {
        Ok(self.check(d)?.holds)
    }

    /// Constants for this style; the girth style needs the constant of its
    /// edge-count bound.
    pub fn params(self, girth_constant: Option<Scalar>) -> Result<StyleParams, StyleError> {
        let (k1, k2, k3, b) = match self {
            Style::Separated => (int(3), int(44), int(1), int(3)),
            Style::LocallyStarlike | Style::Branching => (int(3), int(44), int(1), int(2)),
            Style::Multiplicity(m) => {
                let m = int(m as i64);
                (int(3) * &m, int(88), m, int(2))
            }
            Style::Girth(r) => {
                let c =
                    girth_constant.ok_or(StyleError::MissingParameter("girth edge constant"))?;
                if c <= Scalar::zero() {
                    return Err(StyleError::InvalidParameter(
                        "girth edge constant must be positive".into(),
                    ));
                }
                (
                    int(3),
                    int(44),
                    c,
                    Scalar::one() + Scalar::new(1.into(), (r as i64).into()),
                )
            }
            Style::SingleCrossing => return Err(StyleError::NoConstants(self)),
        };
        Ok(StyleParams {
            style: self,
            k1,
            k2,
            k3,
            b,
        })
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Style::Multiplicity(m) => write!(f, "multiplicity({m})"),
            Style::Girth(r) => write!(f, "girth({r})"),
            s => f.write_str(s.base_name()),
        }
    }
}

impl FromStr for Style {
    type Err = StyleError;

    /// Accepts the display form, e.g. `separated` or `multiplicity(2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((name, rest)) = s.split_once('(') {
            let arg = rest
                .strip_suffix(')')
                .ok_or_else(|| StyleError::UnknownStyle(s.to_string()))?
                .trim()
                .parse::<usize>()
                .map_err(|e| StyleError::InvalidParameter(e.to_string()))?;
            return match name.trim() {
                "multiplicity" => Style::from_parts("multiplicity", Some(arg), None),
                "girth" => Style::from_parts("girth", None, Some(arg)),
                other => Err(StyleError::UnknownStyle(other.to_string())),
            };
        }
        Style::from_parts(s, None, None)
    }
}

/// The constants `(k1, k2, k3, b)`: linear edge bound, bisection factor,
/// edge-count bound factor and edge-count exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StyleParams {
    pub style: Style,
    pub k1: Scalar,
    pub k2: Scalar,
    pub k3: Scalar,
    pub b: Scalar,
}

pub fn style_params(
    name: &str,
    m: Option<usize>,
    r: Option<usize>,
    girth_constant: Option<Scalar>,
) -> Result<StyleParams, StyleError> {
    Style::from_parts(name, m, r)?.params(girth_constant)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LensDefect {
    NotSimple,
    NoInteriorVertex,
    NoExteriorVertex,
}

/// Why a style predicate fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    ParallelPair {
        edges: (EdgeId, EdgeId),
        defect: LensDefect,
        at: Point,
    },
    AdjacentCrossing {
        edges: (EdgeId, EdgeId),
        at: Point,
    },
    MultipleCrossing {
        edges: (EdgeId, EdgeId),
        count: usize,
        at: Point,
    },
    Bundle {
        ends: (VertexId, VertexId),
        multiplicity: usize,
    },
    ShortCycle {
        vertices: Vec<VertexId>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ParallelPair { edges, defect, at } => {
                let what = match defect {
                    LensDefect::NotSimple => "do not form a simple closed curve",
                    LensDefect::NoInteriorVertex => "bound a lens with no vertex inside",
                    LensDefect::NoExteriorVertex => "bound a lens with no vertex outside",
                };
                write!(
                    f,
                    "parallel edges {} and {} {what} (near {at})",
                    edges.0, edges.1
                )
            }
            Witness::AdjacentCrossing { edges, at } => {
                write!(
                    f,
                    "adjacent edges {} and {} cross at {at}",
                    edges.0, edges.1
                )
            }
            Witness::MultipleCrossing { edges, count, at } => {
                write!(
                    f,
                    "edges {} and {} cross {count} times (first at {at})",
                    edges.0, edges.1
                )
            }
            Witness::Bundle { ends, multiplicity } => {
                write!(
                    f,
                    "{multiplicity} parallel edges between {} and {}",
                    ends.0, ends.1
                )
            }
            Witness::ShortCycle { vertices } => {
                let ids: Vec<&str> = vertices.iter().map(|v| v.0.as_str()).collect();
                write!(f, "cycle of length {}: {}", vertices.len(), ids.join(" "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StyleReport {
    pub style: String,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl StyleReport {
    fn ok(style: &str) -> Self {
        StyleReport {
            style: style.to_string(),
            holds: true,
            witness: None,
        }
    }

    fn fail(style: &str, w: Witness) -> Self {
        StyleReport {
            style: style.to_string(),
            holds: false,
            witness: Some(w),
        }
    }
}

impl fmt::Display for StyleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: holds", self.style),
            Some(w) => write!(f, "{}: violated: {w}", self.style),
        }
    }
}

/// Every parallel pair forms a simple closed curve with a vertex strictly
/// inside and a vertex strictly outside.
pub fn is_separated(d: &Drawing) -> Result<StyleReport, DrawingError> {
    d.require_valid()?;
    for bundle in d.bundles().values() {
        for (x, &i) in bundle.iter().enumerate() {
            for &j in &bundle[x + 1..] {
                let (ei, ej) = (&d.edges()[i], &d.edges()[j]);
                let edges = (ei.id.clone(), ej.id.clone());
                let at = ei.curve.points()
                    [ei.curve.num_segments() / 2 + ei.curve.num_segments() % 2]
                    .clone();
                let defect = match d.lens_of_parallel_pair(&ei.id, &ej.id)? {
                    ParallelLens::NotSimple => Some(LensDefect::NotSimple),
                    ParallelLens::Lens(l) if l.interior_vertices.is_empty() => {
                        Some(LensDefect::NoInteriorVertex)
                    }
                    ParallelLens::Lens(l) if l.exterior_vertices.is_empty() => {
                        Some(LensDefect::NoExteriorVertex)
                    }
                    ParallelLens::Lens(_) => None,
                };
                if let Some(defect) = defect {
                    return Ok(StyleReport::fail(
                        "separated",
                        Witness::ParallelPair { edges, defect, at },
                    ));
                }
            }
        }
    }
    Ok(StyleReport::ok("separated"))
}

/// No two edges sharing an endpoint cross.
pub fn is_locally_starlike(d: &Drawing) -> Result<StyleReport, DrawingError> {
    for c in d.crossings()? {
        if d.shared_endpoints(c.edges.0, c.edges.1) > 0 {
            return Ok(StyleReport::fail(
                "locally-starlike",
                Witness::AdjacentCrossing {
                    edges: c.ids.clone(),
                    at: c.point.clone(),
                },
            ));
        }
    }
    Ok(StyleReport::ok("locally-starlike"))
}

/// Every pair of edges crosses at most once.
pub fn is_single_crossing(d: &Drawing) -> Result<StyleReport, DrawingError> {
    let a = d.require_valid()?;
    for c in &a.crossings {
        let count = a.pair_count(c.edges.0, c.edges.1);
        if count > 1 {
            let first = a.pair_crossings(c.edges.0, c.edges.1)[0];
            return Ok(StyleReport::fail(
                "single-crossing",
                Witness::MultipleCrossing {
                    edges: c.ids.clone(),
                    count,
                    at: first.point.clone(),
                },
            ));
        }
    }
    Ok(StyleReport::ok("single-crossing"))
}

/// Separated, single-crossing and locally starlike.
pub fn is_branching(d: &Drawing) -> Result<StyleReport, DrawingError> {
    for r in [
        is_separated(d)?,
        is_single_crossing(d)?,
        is_locally_starlike(d)?,
    ] {
        if !r.holds {
            return Ok(StyleReport {
                style: "branching".into(),
                ..r
            });
        }
    }
    Ok(StyleReport::ok("branching"))
}

pub fn satisfies_multiplicity_style(d: &Drawing, m: usize) -> Result<StyleReport, DrawingError> {
    let name = format!("multiplicity({m})");
    for (&(a, b), es) in &d.bundles() {
        if es.len() > m {
            let ends = (d.vertices()[a].id.clone(), d.vertices()[b].id.clone());
            return Ok(StyleReport::fail(
                &name,
                Witness::Bundle {
                    ends,
                    multiplicity: es.len(),
                },
            ));
        }
    }
    Ok(StyleReport::ok(&name))
}

/// Shortest cycle of the underlying multigraph (a parallel pair is a
/// 2-cycle) as a vertex sequence; `None` for forests.
pub fn shortest_cycle(d: &Drawing) -> Option<Vec<usize>> {
    if let Some((&(a, b), _)) = d.bundles().iter().find(|(_, es)| es.len() > 1) {
        return Some(vec![a, b]);
    }
    let n = d.num_vertices();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..d.num_edges() {
        let (a, b) = d.endpoints(i);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut best: Option<Vec<usize>> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut found: Option<(usize, usize)> = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    found = Some((x, y));
                    break 'bfs;
                }
            }
        }
        if let Some((x, y)) = found {
            let len = dist[x] + dist[y] + 1;
            if best.as_ref().map_or(true, |c| len < c.len()) {
                let path = |mut v: usize| {
                    let mut p = vec![v];
                    while v != root {
                        v = parent[v];
                        p.push(v);
                    }
                    p
                };
                let mut cycle = path(x);
                cycle.reverse();
                let mut py = path(y);
                py.pop();
                cycle.extend(py);
                // Not a simple cycle when the two tree paths meet before the
                // root; a shorter cycle through another root exists then.
                let mut seen = cycle.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() == len {
                    best = Some(cycle);
                }
            }
        }
    }
    best
}

/// Girth of the underlying multigraph; `None` for forests.
pub fn girth(d: &Drawing) -> Option<usize> {
    shortest_cycle(d).map(|c| c.len())
}

/// Girth larger than `2r`.
pub fn satisfies_girth_style(d: &Drawing, r: usize) -> Result<StyleReport, DrawingError> {
    let name = format!("girth({r})");
    match shortest_cycle(d) {
        Some(c) if c.len() <= 2 * r => {
            let vertices = c.iter().map(|&i| d.vertices()[i].id.clone()).collect();
            Ok(StyleReport::fail(&name, Witness::ShortCycle { vertices }))
        }
        _ => Ok(StyleReport::ok(&name)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::DrawingBuilder;
    use crate::geometry::ratio;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn lens_pair(inner: Option<(i64, i64)>, outer: Option<(i64, i64)>) -> Drawing {
        let mut b = DrawingBuilder::new();
        b.vertex("u", p(0, 0)).vertex("v", p(4, 0));
        if let Some((x, y)) = inner {
            b.vertex("w", p(x, y));
        }
        if let Some((x, y)) = outer {
            b.vertex("z", p(x, y));
        }
        b.edge("a", "u", "v", vec![p(2, 2)]).unwrap();
        b.edge("b", "u", "v", vec![p(2, -2)]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn separated_examples() {
        assert!(
            is_separated(&lens_pair(Some((2, 0)), Some((2, 5))))
                .unwrap()
                .holds
        );
        let r = is_separated(&lens_pair(None, Some((2, 5)))).unwrap();
        assert!(!r.holds);
        match r.witness.unwrap() {
            Witness::ParallelPair { edges, defect, .. } => {
                assert_eq!(edges, (EdgeId::from("a"), EdgeId::from("b")));
                assert_eq!(defect, LensDefect::NoInteriorVertex);
            }
            w => panic!("{w}"),
        }
        let r = is_separated(&lens_pair(Some((2, 0)), None)).unwrap();
        assert!(matches!(
            r.witness,
            Some(Witness::ParallelPair {
                defect: LensDefect::NoExteriorVertex,
                ..
            })
        ));
    }

    #[test]
    fn crossing_parallel_pair_is_not_separated() {
        let d = DrawingBuilder::new()
            .vertex("u", p(0, 0))
            .vertex("v", p(4, 0))
            .vertex("w", p(1, 0))
            .vertex("z", p(9, 9))
            .edge("a", "u", "v", vec![p(1, 1), p(3, -1)])
            .unwrap()
            .edge("b", "u", "v", vec![p(1, -1), p(3, 1)])
            .unwrap()
            .build()
            .unwrap();
        let r = is_separated(&d).unwrap();
        assert!(matches!(
            r.witness,
            Some(Witness::ParallelPair {
                defect: LensDefect::NotSimple,
                ..
            })
        ));
    }

    #[test]
    fn locally_starlike_examples() {
        let star = DrawingBuilder::new()
            .vertex("c", p(0, 0))
            .vertex("a", p(1, 0))
            .vertex("b", p(0, 1))
            .vertex("d", p(-1, -1))
            .edge("ca", "c", "a", vec![])
            .unwrap()
            .edge("cb", "c", "b", vec![])
            .unwrap()
            .edge("cd", "c", "d", vec![])
            .unwrap()
            .build()
            .unwrap();
        assert!(is_locally_starlike(&star).unwrap().holds);
        let bad = DrawingBuilder::new()
            .vertex("w", p(0, 0))
            .vertex("x", p(10, 0))
            .vertex("y", p(8, 2))
            .edge("e1", "w", "x", vec![])
            .unwrap()
            .edge("e2", "w", "y", vec![p(4, -2)])
            .unwrap()
            .build()
            .unwrap();
        let r = is_locally_starlike(&bad).unwrap();
        assert!(matches!(r.witness, Some(Witness::AdjacentCrossing { .. })));
    }

    fn s_pair() -> Drawing {
        DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(10, 0))
            .vertex("c", p(2, 2))
            .vertex("d", p(8, 2))
            .edge("e1", "a", "b", vec![])
            .unwrap()
            .edge("e2", "c", "d", vec![p(4, -1), p(6, -1)])
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn single_crossing_and_branching() {
        let d = s_pair();
        let r = is_single_crossing(&d).unwrap();
        assert!(matches!(
            r.witness,
            Some(Witness::MultipleCrossing { count: 2, .. })
        ));
        // No parallel pairs, so separated holds; branching fails on the
        // single-crossing condition.
        assert!(is_separated(&d).unwrap().holds);
        let b = is_branching(&d).unwrap();
        assert!(!b.holds);
        assert!(matches!(b.witness, Some(Witness::MultipleCrossing { .. })));
        assert!(is_branching(&Drawing::empty()).unwrap().holds);
        assert!(is_single_crossing(&Drawing::empty()).unwrap().holds);
    }

    #[test]
    fn girth_examples() {
        let mut b = DrawingBuilder::new();
        for k in 0..6 {
            let (x, y) = [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)][k];
            b.vertex(format!("v{k}"), p(x, y));
        }
        for k in 0..6 {
            b.edge(
                format!("e{k}"),
                format!("v{k}"),
                format!("v{}", (k + 1) % 6),
                vec![],
            )
            .unwrap();
        }
        let c6 = b.build().unwrap();
        assert_eq!(girth(&c6), Some(6));
        assert!(satisfies_girth_style(&c6, 2).unwrap().holds);
        assert!(!satisfies_girth_style(&c6, 3).unwrap().holds);

        let pair = lens_pair(Some((2, 0)), None);
        assert_eq!(girth(&pair), Some(2));
        assert!(!satisfies_girth_style(&pair, 1).unwrap().holds);

        let tree = c6.without_edges(&[0]);
        assert_eq!(girth(&tree), None);
        assert!(satisfies_girth_style(&tree, 100).unwrap().holds);
    }

    #[test]
    fn multiplicity_examples() {
        let d = lens_pair(Some((2, 0)), None);
        assert!(satisfies_multiplicity_style(&d, 2).unwrap().holds);
        assert!(!satisfies_multiplicity_style(&d, 1).unwrap().holds);
        assert_eq!(d.max_multiplicity(), 2);
    }

    #[test]
    fn params_table() {
        let s = style_params("separated", None, None, None).unwrap();
        assert_eq!((s.k1, s.k2, s.k3, s.b), (int(3), int(44), int(1), int(3)));
        let s = style_params("locally-starlike", None, None, None).unwrap();
        assert_eq!((s.k1, s.k2, s.k3, s.b), (int(3), int(44), int(1), int(2)));
        let s = style_params("branching", None, None, None).unwrap();
        assert_eq!(s.b, int(2));
        let s = style_params("multiplicity", Some(2), None, None).unwrap();
        assert_eq!((s.k1, s.k2, s.k3, s.b), (int(6), int(88), int(2), int(2)));
        let s = style_params("girth", None, Some(3), Some(int(5))).unwrap();
        assert_eq!((s.k3, s.b), (int(5), ratio(4, 3)));
        assert_eq!(
            style_params("girth", None, Some(3), None),
            Err(StyleError::MissingParameter("girth edge constant"))
        );
        assert_eq!(
            style_params("multiplicity", None, None, None),
            Err(StyleError::MissingParameter("m"))
        );
        assert!(matches!(
            style_params("planar", None, None, None),
            Err(StyleError::UnknownStyle(_))
        ));
    }

    #[test]
    fn style_round_trips_through_text() {
        for s in [
            Style::Separated,
            Style::LocallyStarlike,
            Style::Branching,
            Style::Multiplicity(3),
            Style::Girth(2),
        ] {
            assert_eq!(s.to_string().parse::<Style>().unwrap(), s);
        }
    }
}
