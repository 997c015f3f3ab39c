//! Diagrams (quivers) and their representations in finite-dimensional
//! rational vector spaces.
//!
//! A quiver is a bare oriented graph: edges do not compose. Paths only get a
//! meaning once they appear inside a [`crate::formula::Term`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("invalid representation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A shape problem found by [`Representation::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertex(String),
    DuplicateEdge(String),
    DanglingEdge { edge: String },
    DimsLength { expected: usize, found: usize },
    MatsLength { expected: usize, found: usize },
    Shape { edge: String, expected: (usize, usize), found: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex `{v}`"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge `{e}`"),
            Violation::DanglingEdge { edge } => write!(f, "edge `{edge}` references a missing vertex"),
            Violation::DimsLength { expected, found } => {
                write!(f, "expected {expected} vertex dimensions, found {found}")
            }
            Violation::MatsLength { expected, found } => write!(f, "expected {expected} edge matrices, found {found}"),
            Violation::Shape { edge, expected, found } => write!(
                f,
                "edge `{edge}` needs a {}x{} matrix, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
        }
    }
}

/// Vertices double as sorts of the diagram's language; edges as its unary
/// function symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Quiver {
    pub fn new<V, S>(vertices: V, edges: Vec<(S, S, S)>) -> Result<Self, QuiverError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        S: Into<String>,
    {
        let mut q = Quiver::default();
        for v in vertices {
            q.add_vertex(v)?;
        }
        for (name, s, t) in edges {
            q.add_edge(name, s, t)?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId, QuiverError> {
        let name = name.into();
        if self.vertex_id(&name).is_some() {
            return Err(QuiverError::DuplicateVertex(name));
        }
        self.vertices.push(name);
        Ok(VertexId(self.vertices.len() - 1))
    }

    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Result<EdgeId, QuiverError> {
        let (name, source, target) = (name.into(), source.into(), target.into());
        if self.edge_id(&name).is_some() {
            return Err(QuiverError::DuplicateEdge(name));
        }
        let s = self.vertex_id(&source).ok_or(QuiverError::UnknownVertex(source))?;
        let t = self.vertex_id(&target).ok_or(QuiverError::UnknownVertex(target))?;
        self.edges.push(Edge { name, source: s, target: t });
        Ok(EdgeId(self.edges.len() - 1))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    /// Edges leaving `v`, in declaration order.
    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edge_ids().filter(move |&e| self.edges[e.0].source == v)
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                out.push(Violation::DuplicateVertex(v.clone()));
            }
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if !seen.insert(e.name.as_str()) {
                out.push(Violation::DuplicateEdge(e.name.clone()));
            }
            if e.source.0 >= self.vertices.len() || e.target.0 >= self.vertices.len() {
                out.push(Violation::DanglingEdge { edge: e.name.clone() });
            }
        }
        out
    }
}

/// A full subdiagram: a vertex subset together with every edge between
/// vertices of the subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subdiagram {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Subdiagram {
    pub fn full(quiver: &Quiver, vertices: impl IntoIterator<Item = VertexId>) -> Result<Self, QuiverError> {
        let set: BTreeSet<VertexId> = vertices.into_iter().collect();
        if let Some(bad) = set.iter().find(|v| v.0 >= quiver.vertex_count()) {
            return Err(QuiverError::UnknownVertex(format!("#{}", bad.0)));
        }
        let edges = quiver
            .edge_ids()
            .filter(|&e| {
                let edge = quiver.edge(e);
                set.contains(&edge.source) && set.contains(&edge.target)
            })
            .collect();
        Ok(Subdiagram { vertices: set.into_iter().collect(), edges })
    }

    /// A subdiagram with an explicit edge set; every edge must have both
    /// endpoints among `vertices`.
    pub fn new(
        quiver: &Quiver,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, QuiverError> {
        let full = Self::full(quiver, vertices)?;
        let set: BTreeSet<EdgeId> = edges.into_iter().collect();
        for &e in &set {
            if e.0 >= quiver.edge_count() {
                return Err(QuiverError::UnknownEdge(format!("#{}", e.0)));
            }
            if !full.edges.contains(&e) {
                return Err(QuiverError::Invalid(vec![Violation::DanglingEdge { edge: quiver.edge(e).name.clone() }]));
            }
        }
        Ok(Subdiagram { vertices: full.vertices, edges: set.into_iter().collect() })
    }

    pub fn by_names(quiver: &Quiver, names: &[&str]) -> Result<Self, QuiverError> {
        let ids = names
            .iter()
            .map(|n| quiver.vertex_id(n).ok_or_else(|| QuiverError::UnknownVertex(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::full(quiver, ids)
    }

    pub fn whole(quiver: &Quiver) -> Self {
        Self::full(quiver, quiver.vertices()).expect("all vertices exist")
    }

    /// Vertices in increasing id order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// A representation `T` of a quiver: a dimension per vertex and a matrix
/// `T(f)` of shape `dim(target) × dim(source)` per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    dims: Vec<usize>,
    mats: Vec<Matrix>,
}

impl Representation {
    /// Unchecked constructor; see [`Representation::validate`].
    pub fn new(quiver: Arc<Quiver>, dims: Vec<usize>, mats: Vec<Matrix>) -> Self {
        Representation { quiver, dims, mats }
    }

    pub fn checked(quiver: Arc<Quiver>, dims: Vec<usize>, mats: Vec<Matrix>) -> Result<Self, QuiverError> {
        let rep = Self::new(quiver, dims, mats);
        let v = rep.validate();
        if v.is_empty() {
            Ok(rep)
        } else {
            Err(QuiverError::Invalid(v))
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dim(&self, v: VertexId) -> usize {
        self.dims[v.0]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn map(&self, e: EdgeId) -> &Matrix {
        &self.mats[e.0]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.mats
    }

    /// Every violated shape invariant; empty iff the representation is
    /// well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let q = &self.quiver;
        let mut out = q.violations();
        if self.dims.len() != q.vertex_count() {
            out.push(Violation::DimsLength { expected: q.vertex_count(), found: self.dims.len() });
        }
        if self.mats.len() != q.edge_count() {
            out.push(Violation::MatsLength { expected: q.edge_count(), found: self.mats.len() });
        }
        for (e, m) in q.edges().iter().zip(&self.mats) {
            let (Some(&rows), Some(&cols)) = (self.dims.get(e.target.0), self.dims.get(e.source.0)) else {
                continue;
            };
            if (m.rows(), m.cols()) != (rows, cols) {
                out.push(Violation::Shape { edge: e.name.clone(), expected: (rows, cols), found: (m.rows(), m.cols()) });
            }
        }
        out
    }

    /// The representation of the full subdiagram on `sub`, with vertices
    /// and edges renumbered in their original order.
    pub fn restrict_to(&self, sub: &Subdiagram) -> Representation {
        let mut q = Quiver::default();
        for &v in sub.vertices() {
            q.add_vertex(self.quiver.vertex_name(v)).expect("names are unique");
        }
        let mut mats = Vec::new();
        for &e in sub.edges() {
            let edge = self.quiver.edge(e);
            q.add_edge(&edge.name, self.quiver.vertex_name(edge.source), self.quiver.vertex_name(edge.target))
                .expect("endpoints are in the subdiagram");
            mats.push(self.mats[e.0].clone());
        }
        let dims = sub.vertices().iter().map(|&v| self.dims[v.0]).collect();
        Representation::new(Arc::new(q), dims, mats)
    }

    pub fn restrict(&self, names: &[&str]) -> Result<Representation, QuiverError> {
        Ok(self.restrict_to(&Subdiagram::by_names(&self.quiver, names)?))
    }

    /// The isomorphic representation `T'(f) = P_target · T(f) · P_source⁻¹`
    /// for a family of invertible matrices `P_v`. Returns `None` if some
    /// `P_v` is not invertible or has the wrong size.
    pub fn conjugate(&self, change: &[Matrix]) -> Option<Representation> {
        if change.len() != self.dims.len() {
            return None;
        }
        let mut inverses = Vec::with_capacity(change.len());
        for (p, &d) in change.iter().zip(&self.dims) {
            if p.rows() != d || p.cols() != d {
                return None;
            }
            inverses.push(p.inverse()?);
        }
        let mats = self
            .quiver
            .edges()
            .iter()
            .zip(&self.mats)
            .map(|(e, m)| change[e.target.0].mul(m).mul(&inverses[e.source.0]))
            .collect();
        Some(Representation::new(self.quiver.clone(), self.dims.clone(), mats))
    }
}
