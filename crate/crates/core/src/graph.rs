//! Metric graphs with homogeneous vertex conditions `A·f|_v + B·f'|_v = 0`.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub length: f64,
}

/// Condition at one vertex. Column `j` of `a` and `b` refers to edge
/// `edge_order[j]`; the row count may exceed the degree.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexRecord {
    pub id: usize,
    pub edge_order: Vec<usize>,
    pub a: CMatrix,
    pub b: CMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    Neumann,
    Dirichlet,
}

/// Which end of an edge sits at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Source,
    Target,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGraph {
    vertices: Vec<VertexRecord>,
    edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessReport {
    pub exact: bool,
    pub per_vertex: Vec<bool>,
}

/// `(A, B)` for a named condition on `degree` incident edges.
pub fn standard_condition(kind: ConditionKind, degree: usize) -> (CMatrix, CMatrix) {
    match kind {
        ConditionKind::Dirichlet => (linalg::identity(degree), CMatrix::zeros(degree, degree)),
        ConditionKind::Neumann => {
            let mut a = CMatrix::zeros(degree, degree);
            let mut b = CMatrix::zeros(degree, degree);
            for i in 0..degree.saturating_sub(1) {
                a[(i, i)] = c(1.0, 0.0);
                a[(i, i + 1)] = c(-1.0, 0.0);
            }
            if degree > 0 {
                for j in 0..degree {
                    b[(degree - 1, j)] = c(1.0, 0.0);
                }
            }
            (a, b)
        }
    }
}

impl QuantumGraph {
    /// Validates ids, lengths, incidence and condition shapes.
    pub fn new(vertices: Vec<VertexRecord>, edges: Vec<Edge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.id != i {
                return Err(Error::InvalidGraph(format!("edge at position {i} has id {}", e.id)));
            }
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::InvalidGraph(format!("edge {i} has non-positive length {}", e.length)));
            }
            if e.source >= vertices.len() || e.target >= vertices.len() {
                return Err(Error::InvalidGraph(format!("edge {i} references a missing vertex")));
            }
            if e.source == e.target {
                return Err(Error::InvalidGraph(format!("edge {i} is a loop")));
            }
        }
        let mut incident = vec![Vec::new(); vertices.len()];
        for e in &edges {
            incident[e.source].push(e.id);
            incident[e.target].push(e.id);
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::InvalidGraph(format!("vertex at position {i} has id {}", v.id)));
            }
            let mut listed = v.edge_order.clone();
            listed.sort_unstable();
            if listed != incident[i] {
                return Err(Error::InvalidGraph(format!(
                    "vertex {i}: edge_order {:?} differs from incident edges {:?}",
                    v.edge_order, incident[i]
                )));
            }
            if v.a.shape() != v.b.shape() {
                return Err(Error::InvalidGraph(format!("vertex {i}: A and B shapes differ")));
            }
            if v.a.ncols() != v.edge_order.len() {
                return Err(Error::InvalidGraph(format!(
                    "vertex {i}: condition has {} columns for degree {}",
                    v.a.ncols(),
                    v.edge_order.len()
                )));
            }
        }
        Ok(Self { vertices, edges })
    }

    /// Graph from `(source, target, length)` triples with a named condition
    /// per vertex; edge orders are incident ids ascending.
    pub fn from_edges(kinds: &[ConditionKind], edges: &[(usize, usize, f64)]) -> Result<Self> {
        let edges: Vec<Edge> = edges
            .iter()
            .enumerate()
            .map(|(id, &(source, target, length))| Edge { id, source, target, length })
            .collect();
        let vertices = kinds
            .iter()
            .enumerate()
            .map(|(id, &kind)| {
                let edge_order: Vec<usize> =
                    edges.iter().filter(|e| e.source == id || e.target == id).map(|e| e.id).collect();
                let (a, b) = standard_condition(kind, edge_order.len());
                VertexRecord { id, edge_order, a, b }
            })
            .collect();
        Self::new(vertices, edges)
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: usize) -> &VertexRecord {
        &self.vertices[id]
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].edge_order.len()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// End of edge `e` attached to vertex `v`, if any.
    pub fn end_at(&self, e: usize, v: usize) -> Option<End> {
        let edge = &self.edges[e];
        if edge.source == v {
            Some(End::Source)
        } else if edge.target == v {
            Some(End::Target)
        } else {
            None
        }
    }

    /// True if two edges share the same unordered endpoint pair.
    pub fn has_parallel_edges(&self) -> bool {
        let mut pairs: Vec<(usize, usize)> =
            self.edges.iter().map(|e| (e.source.min(e.target), e.source.max(e.target))).collect();
        pairs.sort_unstable();
        pairs.windows(2).any(|w| w[0] == w[1])
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|e| (e.source == u && e.target == v) || (e.source == v && e.target == u))
    }

    /// Replaces the condition at `v`, keeping its edge order.
    pub fn with_condition(&self, v: usize, a: CMatrix, b: CMatrix) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        let rec = &mut vertices[v];
        rec.a = a;
        rec.b = b;
        Self::new(vertices, self.edges.clone())
    }

    /// Replaces the length of edge `e`.
    pub fn with_length(&self, e: usize, length: f64) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges[e].length = length;
        Self::new(self.vertices.clone(), edges)
    }

    pub fn is_exact(&self, tol: f64) -> ExactnessReport {
        let per_vertex: Vec<bool> = self.vertices.iter().map(|v| vertex_is_exact(v, tol)).collect();
        ExactnessReport { exact: per_vertex.iter().all(|&x| x), per_vertex }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.vertices.iter().all(|v| vertex_is_exact(v, tol) && vertex_is_hermitian(v, tol))
    }

    /// Splits edge `e` at distance `x` from its source. The edge keeps its id
    /// for the first piece; the second piece and the new Neumann vertex get the
    /// next free ids.
    pub fn subdivide_edge(&self, e: usize, x: f64) -> Result<Self> {
        let edge = *self
            .edges
            .get(e)
            .ok_or_else(|| Error::OutOfRange(format!("edge {e} does not exist")))?;
        if !(x > 0.0 && x < edge.length) {
            return Err(Error::OutOfRange(format!("split point {x} outside (0, {})", edge.length)));
        }
        let new_edge = self.edges.len();
        let new_vertex = self.vertices.len();
        let mut edges = self.edges.clone();
        edges[e] = Edge { id: e, source: edge.source, target: new_vertex, length: x };
        edges.push(Edge { id: new_edge, source: new_vertex, target: edge.target, length: edge.length - x });
        let mut vertices = self.vertices.clone();
        for slot in vertices[edge.target].edge_order.iter_mut() {
            if *slot == e {
                *slot = new_edge;
            }
        }
        let (a, b) = standard_condition(ConditionKind::Neumann, 2);
        vertices.push(VertexRecord { id: new_vertex, edge_order: vec![e, new_edge], a, b });
        Self::new(vertices, edges)
    }

    /// Rescales every condition row so that its first entry of modulus above
    /// `tol` (scanning `A` then `B`) equals 1; zero rows are dropped.
    pub fn normalize(&self, tol: f64) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let ab = linalg::hstack(&v.a, &v.b);
                let scale = linalg::max_abs(&ab).max(f64::MIN_POSITIVE);
                let rows: Vec<_> = (0..ab.nrows())
                    .filter_map(|i| {
                        let row = ab.row(i);
                        let lead = row.iter().find(|z| z.norm() > tol * scale)?;
                        Some(row / *lead)
                    })
                    .collect();
                let d = v.edge_order.len();
                let mut out = CMatrix::zeros(rows.len(), 2 * d);
                for (i, r) in rows.iter().enumerate() {
                    out.row_mut(i).copy_from(r);
                }
                VertexRecord {
                    id: v.id,
                    edge_order: v.edge_order.clone(),
                    a: out.columns(0, d).into_owned(),
                    b: out.columns(d, d).into_owned(),
                }
            })
            .collect();
        Self { vertices, edges: self.edges.clone() }
    }
}

fn vertex_is_exact(v: &VertexRecord, tol: f64) -> bool {
    let d = v.edge_order.len();
    v.a.nrows() == d && linalg::rank(&linalg::hstack(&v.a, &v.b), tol) == d
}

fn vertex_is_hermitian(v: &VertexRecord, tol: f64) -> bool {
    let p = &v.a * v.b.adjoint();
    linalg::norm(&(&p - p.adjoint())) <= tol * (1.0 + linalg::norm(&p))
}
