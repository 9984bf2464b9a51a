use std::fmt;

use super::{EdgeId, VertexId};
use crate::geometry::Point;

/// A general-position violation with the offending ids and location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A vertex lies on an edge that is not incident to it.
    VertexOnEdgeInterior {
        vertex: VertexId,
        edge: EdgeId,
        at: Point,
    },
    /// Two edges share an interior point without crossing there.
    NonProperTouch { edges: (EdgeId, EdgeId), at: Point },
    /// Two edges share a piece of positive length.
    OverlappingEdges { edges: (EdgeId, EdgeId), at: Point },
    /// Three or more edges pass through one crossing point.
    TripleCrossing { edges: Vec<EdgeId>, at: Point },
    /// An edge curve meets itself.
    SelfIntersection { edge: EdgeId, at: Point },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::VertexOnEdgeInterior { .. } => "VertexOnEdgeInterior",
            Violation::NonProperTouch { .. } => "NonProperTouch",
            Violation::OverlappingEdges { .. } => "OverlappingEdges",
            Violation::TripleCrossing { .. } => "TripleCrossing",
            Violation::SelfIntersection { .. } => "SelfIntersection",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOnEdgeInterior { vertex, edge, at } => {
                write!(
                    f,
                    "VertexOnEdgeInterior: vertex {vertex} on edge {edge} at {at}"
                )
            }
            Violation::NonProperTouch { edges, at } => {
                write!(
                    f,
                    "NonProperTouch: edges {} and {} touch at {at}",
                    edges.0, edges.1
                )
            }
            Violation::OverlappingEdges { edges, at } => {
                write!(
                    f,
                    "OverlappingEdges: edges {} and {} overlap near {at}",
                    edges.0, edges.1
                )
            }
            Violation::TripleCrossing { edges, at } => {
                let ids: Vec<&str> = edges.iter().map(|e| e.0.as_str()).collect();
                write!(f, "TripleCrossing: edges {} meet at {at}", ids.join(","))
            }
            Violation::SelfIntersection { edge, at } => {
                write!(f, "SelfIntersection: edge {edge} meets itself at {at}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("general position holds");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::drawing::DrawingBuilder;
    use crate::geometry::Point;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn transversal_pair_is_valid() {
        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(2, 2))
            .vertex("c", p(0, 2))
            .vertex("d", p(2, 0))
            .edge("e1", "a", "b", vec![])
            .unwrap()
            .edge("e2", "c", "d", vec![])
            .unwrap()
            .build()
            .unwrap();
        assert!(d.validate().is_empty());
        assert_eq!(d.crossing_number().unwrap(), 1);
    }

    #[test]
    fn vertex_on_edge() {
        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(2, 0))
            .vertex("w", p(1, 0))
            .edge("e", "a", "b", vec![])
            .unwrap()
            .build()
            .unwrap();
        let r = d.validate();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind(), "VertexOnEdgeInterior");
        assert!(d.crossings().is_err());
    }

    #[test]
    fn triple_crossing() {
        let d = DrawingBuilder::new()
            .vertex("a1", p(-1, 0))
            .vertex("a2", p(1, 0))
            .vertex("b1", p(0, -1))
            .vertex("b2", p(0, 1))
            .vertex("c1", p(-1, -1))
            .vertex("c2", p(1, 1))
            .edge("a", "a1", "a2", vec![])
            .unwrap()
            .edge("b", "b1", "b2", vec![])
            .unwrap()
            .edge("c", "c1", "c2", vec![])
            .unwrap()
            .build()
            .unwrap();
        let kinds: Vec<&str> = d.validate().violations.iter().map(|v| v.kind()).collect();
        assert_eq!(kinds, vec!["TripleCrossing"]);
    }

    #[test]
    fn touch_and_overlap() {
        // e2 bends exactly on e1 and bounces back: a tangency.
        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(4, 0))
            .vertex("c", p(1, 2))
            .vertex("d", p(3, 2))
            .edge("e1", "a", "b", vec![])
            .unwrap()
            .edge("e2", "c", "d", vec![p(2, 0)])
            .unwrap()
            .build()
            .unwrap();
        let kinds: Vec<&str> = d.validate().violations.iter().map(|v| v.kind()).collect();
        assert_eq!(kinds, vec!["NonProperTouch"]);

        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(4, 0))
            .vertex("c", p(1, 2))
            .vertex("d", p(3, 2))
            .edge("e1", "a", "b", vec![])
            .unwrap()
            .edge("e2", "c", "d", vec![p(1, 0), p(2, 0)])
            .unwrap()
            .build()
            .unwrap();
        let kinds: Vec<&str> = d.validate().violations.iter().map(|v| v.kind()).collect();
        assert_eq!(kinds, vec!["OverlappingEdges"]);
    }

    #[test]
    fn crossing_through_a_bend_counts() {
        // e2 crosses e1 exactly at its bend point (2, 0).
        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(4, 0))
            .vertex("c", p(1, 2))
            .vertex("d", p(3, -2))
            .edge("e1", "a", "b", vec![])
            .unwrap()
            .edge("e2", "c", "d", vec![p(2, 0)])
            .unwrap()
            .build()
            .unwrap();
        assert!(d.validate().is_empty(), "{}", d.validate());
        assert_eq!(d.crossing_number().unwrap(), 1);
        assert_eq!(d.crossings().unwrap()[0].point, p(2, 0));
    }

    #[test]
    fn self_intersecting_edge() {
        let d = DrawingBuilder::new()
            .vertex("a", p(0, 0))
            .vertex("b", p(4, 0))
            .edge("e", "a", "b", vec![p(3, 1), p(3, -1), p(1, 1)])
            .unwrap()
            .build()
            .unwrap();
        let kinds: Vec<&str> = d.validate().violations.iter().map(|v| v.kind()).collect();
        assert!(kinds.contains(&"SelfIntersection"));
    }
}
