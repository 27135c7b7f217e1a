//! Finite planar simplicial complexes and their GF(2) boundary operators.
//!
//! A [`Complex`] is immutable once built. Simplexes are kept in canonical
//! order: vertices by id, edges and triangles by their sorted vertex-id tuple.
//! Chains index simplexes by that canonical position, never by the caller's
//! ids, so every downstream result is independent of input order.
//!
//! Holes are triangles that are *not* declared: only filled 2-simplexes are
//! listed. The planar embedding is carried by vertex coordinates alone and is
//! not checked for crossings; callers that feed non-planar data get
//! well-defined homology but meaningless geometry.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::gf2::Gf2Matrix;
use crate::gf2::BitVector;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type TriangleId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub x: f64,
    pub y: f64,
}

impl Vertex {
    pub fn new(id: VertexId, x: f64, y: f64) -> Self {
        Self { id, x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    /// Stored ascending once inside a [`Complex`].
    pub endpoints: [VertexId; 2],
}

impl Edge {
    pub fn new(id: EdgeId, a: VertexId, b: VertexId) -> Self {
        Self { id, endpoints: [a, b] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub id: TriangleId,
    /// Stored ascending once inside a [`Complex`].
    pub corners: [VertexId; 3],
}

impl Triangle {
    pub fn new(id: TriangleId, a: VertexId, b: VertexId, c: VertexId) -> Self {
        Self { id, corners: [a, b, c] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimplexKind {
    Vertex,
    Edge,
    Triangle,
}

impl fmt::Display for SimplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimplexKind::Vertex => "vertex",
            SimplexKind::Edge => "edge",
            SimplexKind::Triangle => "triangle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("a complex needs at least one vertex")]
    Empty,
    #[error("vertex {id} has a non-finite coordinate")]
    NonFiniteCoordinate { id: VertexId },
    #[error("{kind} {id} references unknown vertex {vertex}")]
    DanglingReference { kind: SimplexKind, id: u32, vertex: VertexId },
    #[error("duplicate {kind} {id}")]
    DuplicateSimplex { kind: SimplexKind, id: u32 },
    #[error("triangle {triangle} has no declared edge {a}-{b}")]
    MissingTriangleEdge { triangle: TriangleId, a: VertexId, b: VertexId },
    #[error("{kind} {id} repeats a vertex")]
    DegenerateSimplex { kind: SimplexKind, id: u32 },
    #[error("boundary operator of dimension {0} is not defined (expected 1 or 2)")]
    BadDimension(usize),
    #[error("chain has {found} coefficients but the complex has {expected} simplexes of dimension {dimension}")]
    DimensionMismatch { dimension: usize, expected: usize, found: usize },
}

impl ComplexError {
    /// The simplex the error is about, when there is one.
    pub fn simplex(&self) -> Option<(SimplexKind, u32)> {
        match *self {
            ComplexError::NonFiniteCoordinate { id } => Some((SimplexKind::Vertex, id)),
            ComplexError::DanglingReference { kind, id, .. }
            | ComplexError::DuplicateSimplex { kind, id }
            | ComplexError::DegenerateSimplex { kind, id } => Some((kind, id)),
            ComplexError::MissingTriangleEdge { triangle, .. } => {
                Some((SimplexKind::Triangle, triangle))
            }
            _ => None,
        }
    }
}

/// A GF(2) chain: a set of simplexes of one dimension, indexed by canonical
/// position in the owning complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    dimension: usize,
    bits: BitVector,
}

impl Chain {
    pub fn new(dimension: usize, bits: BitVector) -> Self {
        Self { dimension, bits }
    }

    pub fn zero(complex: &Complex, dimension: usize) -> Self {
        Self::new(dimension, BitVector::zeros(complex.count(dimension)))
    }

    /// A chain from canonical simplex positions. Repeated positions cancel.
    pub fn from_indices(
        complex: &Complex,
        dimension: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        Self::new(
            dimension,
            BitVector::from_indices(complex.count(dimension), indices),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    /// Canonical positions of the simplexes with coefficient 1.
    pub fn support(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits.get(index)
    }

    /// Sum over GF(2).
    ///
    /// Panics if the chains live in different chain groups.
    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.dimension, other.dimension, "chain dimensions differ");
        Chain::new(self.dimension, self.bits.xor(&other.bits))
    }

    pub fn add_assign(&mut self, other: &Chain) {
        assert_eq!(self.dimension, other.dimension, "chain dimensions differ");
        self.bits.xor_assign(&other.bits);
    }
}

/// A validated planar simplicial complex of dimension at most 2.
#[derive(Clone, Debug)]
pub struct Complex {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
    vertex_pos: HashMap<VertexId, usize>,
    edge_pos: HashMap<(VertexId, VertexId), usize>,
    edge_ends: Vec<[usize; 2]>,
    triangle_edges: Vec<[usize; 3]>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.triangles == other.triangles
    }
}

fn sorted2(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Validates and canonicalizes the given simplexes.
pub fn build_complex(
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
) -> Result<Complex, ComplexError> {
    Complex::new(vertices, edges, triangles)
}

impl Complex {
    pub fn new(
        mut vertices: Vec<Vertex>,
        mut edges: Vec<Edge>,
        mut triangles: Vec<Triangle>,
    ) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::Empty);
        }
        for v in &vertices {
            if !v.x.is_finite() || !v.y.is_finite() {
                return Err(ComplexError::NonFiniteCoordinate { id: v.id });
            }
        }
        vertices.sort_by_key(|v| v.id);
        for w in vertices.windows(2) {
            if w[0].id == w[1].id {
                return Err(ComplexError::DuplicateSimplex {
                    kind: SimplexKind::Vertex,
                    id: w[1].id,
                });
            }
        }
        let vertex_pos: HashMap<VertexId, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect();

        for e in &mut edges {
            let [a, b] = e.endpoints;
            if a == b {
                return Err(ComplexError::DegenerateSimplex {
                    kind: SimplexKind::Edge,
                    id: e.id,
                });
            }
            for v in [a, b] {
                if !vertex_pos.contains_key(&v) {
                    return Err(ComplexError::DanglingReference {
                        kind: SimplexKind::Edge,
                        id: e.id,
                        vertex: v,
                    });
                }
            }
            let (a, b) = sorted2(a, b);
            e.endpoints = [a, b];
        }
        check_unique_ids(edges.iter().map(|e| e.id), SimplexKind::Edge)?;
        edges.sort_by_key(|e| (e.endpoints, e.id));
        for w in edges.windows(2) {
            if w[0].endpoints == w[1].endpoints {
                return Err(ComplexError::DuplicateSimplex {
                    kind: SimplexKind::Edge,
                    id: w[1].id,
                });
            }
        }
        let edge_pos: HashMap<(VertexId, VertexId), usize> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.endpoints[0], e.endpoints[1]), i))
            .collect();

        for t in &mut triangles {
            let mut c = t.corners;
            c.sort_unstable();
            if c[0] == c[1] || c[1] == c[2] {
                return Err(ComplexError::DegenerateSimplex {
                    kind: SimplexKind::Triangle,
                    id: t.id,
                });
            }
            for v in c {
                if !vertex_pos.contains_key(&v) {
                    return Err(ComplexError::DanglingReference {
                        kind: SimplexKind::Triangle,
                        id: t.id,
                        vertex: v,
                    });
                }
            }
            for (a, b) in [(c[0], c[1]), (c[0], c[2]), (c[1], c[2])] {
                if !edge_pos.contains_key(&(a, b)) {
                    return Err(ComplexError::MissingTriangleEdge {
                        triangle: t.id,
                        a,
                        b,
                    });
                }
            }
            t.corners = c;
        }
        check_unique_ids(triangles.iter().map(|t| t.id), SimplexKind::Triangle)?;
        triangles.sort_by_key(|t| (t.corners, t.id));
        for w in triangles.windows(2) {
            if w[0].corners == w[1].corners {
                return Err(ComplexError::DuplicateSimplex {
                    kind: SimplexKind::Triangle,
                    id: w[1].id,
                });
            }
        }

        let edge_ends: Vec<[usize; 2]> = edges
            .iter()
            .map(|e| [vertex_pos[&e.endpoints[0]], vertex_pos[&e.endpoints[1]]])
            .collect();
        let triangle_edges = triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.corners;
                [edge_pos[&(a, b)], edge_pos[&(a, c)], edge_pos[&(b, c)]]
            })
            .collect();
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (i, [a, b]) in edge_ends.iter().enumerate() {
            incidence[*a].push(i);
            incidence[*b].push(i);
        }

        Ok(Self {
            vertices,
            edges,
            triangles,
            vertex_pos,
            edge_pos,
            edge_ends,
            triangle_edges,
            incidence,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Number of simplexes of the given dimension (0 for dimensions above 2).
    pub fn count(&self, dimension: usize) -> usize {
        match dimension {
            0 => self.vertices.len(),
            1 => self.edges.len(),
            2 => self.triangles.len(),
            _ => 0,
        }
    }

    /// Canonical position of the vertex with this id.
    pub fn vertex_index(&self, id: VertexId) -> Option<usize> {
        self.vertex_pos.get(&id).copied()
    }

    /// Canonical position of the edge joining two vertex ids, in either order.
    pub fn edge_index(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.edge_pos.get(&sorted2(a, b)).copied()
    }

    /// Endpoint vertex positions of edge `e`.
    pub fn edge_ends(&self, e: usize) -> [usize; 2] {
        self.edge_ends[e]
    }

    /// Edge positions bounding triangle `t`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Edge positions incident to vertex position `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Position of the vertex at the other end of edge `e` from vertex `v`.
    pub fn opposite(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edge_ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn point(&self, v: usize) -> (f64, f64) {
        let v = &self.vertices[v];
        (v.x, v.y)
    }

    /// The 1-chain over the edges joining the given vertex-id pairs.
    pub fn edge_chain(&self, pairs: &[(VertexId, VertexId)]) -> Option<Chain> {
        let idx = pairs
            .iter()
            .map(|&(a, b)| self.edge_index(a, b))
            .collect::<Option<Vec<_>>>()?;
        Some(Chain::from_indices(self, 1, idx))
    }

    /// The 0-chain over the given vertex ids.
    pub fn vertex_chain(&self, ids: &[VertexId]) -> Option<Chain> {
        let idx = ids
            .iter()
            .map(|&v| self.vertex_index(v))
            .collect::<Option<Vec<_>>>()?;
        Some(Chain::from_indices(self, 0, idx))
    }

    /// `∂₁` (V×E) for `p = 1`, `∂₂` (E×F) for `p = 2`.
    pub fn boundary_matrix(&self, p: usize) -> Result<Gf2Matrix, ComplexError> {
        match p {
            1 => Ok(Gf2Matrix::from_columns(
                self.num_vertices(),
                self.edge_ends
                    .iter()
                    .map(|&[a, b]| BitVector::from_indices(self.num_vertices(), [a, b]))
                    .collect(),
            )),
            2 => Ok(Gf2Matrix::from_columns(
                self.num_edges(),
                self.triangle_edges
                    .iter()
                    .map(|es| BitVector::from_indices(self.num_edges(), es.iter().copied()))
                    .collect(),
            )),
            other => Err(ComplexError::BadDimension(other)),
        }
    }

    /// Boundary of a 1- or 2-chain, as a chain one dimension lower.
    pub fn boundary_of_chain(&self, chain: &Chain) -> Result<Chain, ComplexError> {
        let p = chain.dimension();
        if p != 1 && p != 2 {
            return Err(ComplexError::BadDimension(p));
        }
        let expected = self.count(p);
        if chain.len() != expected {
            return Err(ComplexError::DimensionMismatch {
                dimension: p,
                expected,
                found: chain.len(),
            });
        }
        let mut out = BitVector::zeros(self.count(p - 1));
        for i in chain.bits().ones() {
            if p == 1 {
                for v in self.edge_ends[i] {
                    out.flip(v);
                }
            } else {
                for e in self.triangle_edges[i] {
                    out.flip(e);
                }
            }
        }
        Ok(Chain::new(p - 1, out))
    }

    /// A copy with every vertex moved by `f`. Combinatorics are unchanged.
    pub fn map_points(&self, f: impl Fn(f64, f64) -> (f64, f64)) -> Result<Complex, ComplexError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = f(v.x, v.y);
                Vertex::new(v.id, x, y)
            })
            .collect();
        Complex::new(vertices, self.edges.clone(), self.triangles.clone())
    }
}

fn check_unique_ids(ids: impl Iterator<Item = u32>, kind: SimplexKind) -> Result<(), ComplexError> {
    let mut ids: Vec<u32> = ids.collect();
    ids.sort_unstable();
    match ids.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(ComplexError::DuplicateSimplex { kind, id: w[0] }),
        None => Ok(()),
    }
}
