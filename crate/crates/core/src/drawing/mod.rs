//! Topological multigraphs: vertices at exact points, edges as polylines.

mod intersect;
mod lens;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{GeometryError, Point, Polyline};

pub use intersect::{Crossing, CurvePos};
pub use lens::{Lens, LensKind, LensOptions, LensPart, ParallelLens};

pub(crate) use lens::sub_points;
pub use validate::{ValidationReport, Violation};

pub(crate) use intersect::Analysis;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId(s.to_string())
    }
}

/// Where a vertex came from. Not persisted in drawing files.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum Provenance {
    #[default]
    Original,
    /// Created by splitting the named vertex.
    Split(VertexId),
    /// Placed at the crossing of two edges during planarization.
    Crossing(EdgeId, EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub location: Point,
    pub provenance: Provenance,
}

/// An edge whose curve runs from the location of `u` to the location of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub curve: Polyline,
}

impl Edge {
    pub fn is_incident(&self, v: &VertexId) -> bool {
        &self.u == v || &self.v == v
    }

    pub fn other(&self, v: &VertexId) -> &VertexId {
        if &self.u == v {
            &self.v
        } else {
            &self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DrawingError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("vertices {0} and {1} share location {2}")]
    CoincidentVertices(VertexId, VertexId, Point),
    #[error("edge {0} is a loop")]
    Loop(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("curve of edge {0} does not run from its first to its second endpoint")]
    EndpointMismatch(EdgeId),
    #[error("invalid curve for edge {0}: {1}")]
    Curve(EdgeId, GeometryError),
    #[error("edges {0} and {1} are not parallel")]
    NotParallel(EdgeId, EdgeId),
    #[error("drawing violates general position: {0}")]
    InvalidDrawing(ValidationReport),
}

/// An immutable topological multigraph. Structural invariants (distinct
/// locations, no loops, curves attached to their endpoints) hold by
/// construction; general position is checked by [`Drawing::validate`].
#[derive(Clone, Debug)]
pub struct Drawing {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vindex: HashMap<VertexId, usize>,
    eindex: HashMap<EdgeId, usize>,
    // Endpoint indices per edge.
    ends: Vec<(usize, usize)>,
    analysis: OnceLock<Arc<Analysis>>,
}

impl PartialEq for Drawing {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Drawing {}

impl Drawing {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, DrawingError> {
        let mut vindex = HashMap::with_capacity(vertices.len());
        let mut by_loc: HashMap<&Point, &VertexId> = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.id.clone(), i).is_some() {
                return Err(DrawingError::DuplicateVertex(v.id.clone()));
            }
            if let Some(other) = by_loc.insert(&v.location, &v.id) {
                return Err(DrawingError::CoincidentVertices(
                    other.clone(),
                    v.id.clone(),
                    v.location.clone(),
                ));
            }
        }
        let mut eindex = HashMap::with_capacity(edges.len());
        let mut ends = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if eindex.insert(e.id.clone(), i).is_some() {
                return Err(DrawingError::DuplicateEdge(e.id.clone()));
            }
            if e.u == e.v {
                return Err(DrawingError::Loop(e.id.clone()));
            }
            let iu = *vindex
                .get(&e.u)
                .ok_or_else(|| DrawingError::UnknownVertex(e.u.clone()))?;
            let iv = *vindex
                .get(&e.v)
                .ok_or_else(|| DrawingError::UnknownVertex(e.v.clone()))?;
            if e.curve.first() != &vertices[iu].location || e.curve.last() != &vertices[iv].location
            {
                return Err(DrawingError::EndpointMismatch(e.id.clone()));
            }
            ends.push((iu, iv));
        }
        Ok(Drawing {
            vertices,
            edges,
            vindex,
            eindex,
            ends,
            analysis: OnceLock::new(),
        })
    }

    pub fn empty() -> Self {
        Drawing::new(Vec::new(), Vec::new()).expect("empty drawing is valid")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &VertexId) -> Result<usize, DrawingError> {
        self.vindex
            .get(id)
            .copied()
            .ok_or_else(|| DrawingError::UnknownVertex(id.clone()))
    }

    pub fn edge_index(&self, id: &EdgeId) -> Result<usize, DrawingError> {
        self.eindex
            .get(id)
            .copied()
            .ok_or_else(|| DrawingError::UnknownEdge(id.clone()))
    }

    pub fn vertex(&self, id: &VertexId) -> Result<&Vertex, DrawingError> {
        Ok(&self.vertices[self.vertex_index(id)?])
    }

    pub fn edge(&self, id: &EdgeId) -> Result<&Edge, DrawingError> {
        Ok(&self.edges[self.edge_index(id)?])
    }

    /// Endpoint vertex indices of edge `i`, in curve order.
    pub fn endpoints(&self, i: usize) -> (usize, usize) {
        self.ends[i]
    }

    /// Unordered endpoint pair of edge `i`, smaller index first.
    pub fn endpoint_key(&self, i: usize) -> (usize, usize) {
        let (a, b) = self.ends[i];
        (a.min(b), a.max(b))
    }

    pub fn are_parallel(&self, i: usize, j: usize) -> bool {
        i != j && self.endpoint_key(i) == self.endpoint_key(j)
    }

    /// Number of endpoints shared by edges `i` and `j` (0, 1 or 2).
    pub fn shared_endpoints(&self, i: usize, j: usize) -> usize {
        let (a, b) = self.ends[i];
        let (c, d) = self.ends[j];
        [a, b].iter().filter(|x| **x == c || **x == d).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.ends {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edge indices incident to vertex index `v`.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.ends[i].0 == v || self.ends[i].1 == v)
            .collect()
    }

    pub fn multiplicity(&self, u: &VertexId, v: &VertexId) -> Result<usize, DrawingError> {
        let a = self.vertex_index(u)?;
        let b = self.vertex_index(v)?;
        let key = (a.min(b), a.max(b));
        Ok((0..self.edges.len())
            .filter(|&i| self.endpoint_key(i) == key)
            .count())
    }

    pub fn max_multiplicity(&self) -> usize {
        self.bundles().values().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges grouped by unordered endpoint pair.
    pub fn bundles(&self) -> std::collections::BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
        for i in 0..self.edges.len() {
            out.entry(self.endpoint_key(i)).or_default().push(i);
        }
        out
    }

    pub(crate) fn analysis(&self) -> &Analysis {
        self.analysis
            .get_or_init(|| Arc::new(Analysis::compute(self)))
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            violations: self.analysis().violations.clone(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.analysis().violations.is_empty()
    }

    pub(crate) fn require_valid(&self) -> Result<&Analysis, DrawingError> {
        let a = self.analysis();
        if a.violations.is_empty() {
            Ok(a)
        } else {
            Err(DrawingError::InvalidDrawing(ValidationReport {
                violations: a.violations.clone(),
            }))
        }
    }

    pub fn crossings(&self) -> Result<&[Crossing], DrawingError> {
        Ok(&self.require_valid()?.crossings)
    }

    pub fn crossing_number(&self) -> Result<usize, DrawingError> {
        Ok(self.crossings()?.len())
    }

    pub fn edge_pair_crossings(&self, e1: &EdgeId, e2: &EdgeId) -> Result<usize, DrawingError> {
        let i = self.edge_index(e1)?;
        let j = self.edge_index(e2)?;
        Ok(self.require_valid()?.pair_count(i, j))
    }

    /// Crossings per edge, by index.
    pub fn crossings_per_edge(&self) -> Result<Vec<usize>, DrawingError> {
        let a = self.require_valid()?;
        let mut out = vec![0; self.edges.len()];
        for c in &a.crossings {
            out[c.edges.0] += 1;
            out[c.edges.1] += 1;
        }
        Ok(out)
    }

    /// Sub-drawing on the given vertex indices keeping the given edge
    /// indices; edges must have both endpoints among the kept vertices.
    pub fn restrict(&self, vertices: &[usize], edges: &[usize]) -> Drawing {
        let vs: Vec<Vertex> = vertices.iter().map(|&i| self.vertices[i].clone()).collect();
        let es: Vec<Edge> = edges.iter().map(|&i| self.edges[i].clone()).collect();
        Drawing::new(vs, es).expect("restriction of a drawing is structurally valid")
    }

    /// Drawing without the edges at the given indices.
    pub fn without_edges(&self, removed: &[usize]) -> Drawing {
        let keep: Vec<usize> = (0..self.edges.len())
            .filter(|i| !removed.contains(i))
            .collect();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        self.restrict(&all, &keep)
    }
}

/// Convenience builder used by tests, constructions and the file parser.
#[derive(Default)]
pub struct DrawingBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl DrawingBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: impl Into<String>, location: Point) -> &mut Self {
        self.vertices.push(Vertex {
            id: VertexId(id.into()),
            location,
            provenance: Provenance::Original,
        });
        self
    }

    /// Add an edge from `u` to `v` through the given interior bend points.
    pub fn edge(
        &mut self,
        id: impl Into<String>,
        u: impl Into<String>,
        v: impl Into<String>,
        bends: Vec<Point>,
    ) -> Result<&mut Self, DrawingError> {
        let id = EdgeId(id.into());
        let u = VertexId(u.into());
        let v = VertexId(v.into());
        let pu = self.location(&u)?;
        let pv = self.location(&v)?;
        let mut pts = Vec::with_capacity(bends.len() + 2);
        pts.push(pu);
        pts.extend(bends);
        pts.push(pv);
        let curve = Polyline::new(pts).map_err(|e| DrawingError::Curve(id.clone(), e))?;
        self.edges.push(Edge { id, u, v, curve });
        Ok(self)
    }

    pub fn edge_curve(
        &mut self,
        id: impl Into<String>,
        u: impl Into<String>,
        v: impl Into<String>,
        curve: Polyline,
    ) -> &mut Self {
        self.edges.push(Edge {
            id: EdgeId(id.into()),
            u: VertexId(u.into()),
            v: VertexId(v.into()),
            curve,
        });
        self
    }

    fn location(&self, id: &VertexId) -> Result<Point, DrawingError> {
        self.vertices
            .iter()
            .find(|v| &v.id == id)
            .map(|v| v.location.clone())
            .ok_or_else(|| DrawingError::UnknownVertex(id.clone()))
    }

    pub fn build(&mut self) -> Result<Drawing, DrawingError> {
        Drawing::new(
            std::mem::take(&mut self.vertices),
            std::mem::take(&mut self.edges),
        )
    }
}
