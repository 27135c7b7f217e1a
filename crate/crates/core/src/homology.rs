//! Cycle and boundary groups over GF(2), Betti numbers, and explicit
//! representatives of the first homology group.
//!
//! `Z₁ = ker ∂₁` is spanned by the fundamental cycles of a spanning forest,
//! `B₁ = img ∂₂` by the triangle boundaries, and `H₁ = Z₁/B₁` is represented by
//! fundamental cycles that stay independent of `B₁` when scanned greedily in
//! canonical order.

use std::collections::VecDeque;

use thiserror::Error;

use crate::complex::{Chain, Complex, ComplexError, Gf2Matrix, VertexId};
use crate::gf2::EchelonBasis;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomologyError {
    #[error("chain has a nonzero boundary and is not a cycle")]
    NotACycle,
    #[error("expected a 1-chain, got a {0}-chain")]
    WrongDimension(usize),
    #[error("invalid traversal: {0}")]
    InvalidTraversal(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A 1-cycle: an edge set with zero boundary, plus a closed vertex traversal
/// when the edge set is a single simple loop.
///
/// Traversals are normalized to start at the smallest vertex id and to leave it
/// towards the smaller of its two neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    edges: Chain,
    vertices: Vec<VertexId>,
    traversal: Option<Vec<VertexId>>,
}

impl Cycle {
    /// A simple cycle through the given vertex ids, closing back on the first.
    pub fn from_traversal(complex: &Complex, ids: &[VertexId]) -> Result<Cycle, HomologyError> {
        if ids.len() < 3 {
            return Err(HomologyError::InvalidTraversal(format!(
                "a simple cycle needs at least 3 vertices, got {}",
                ids.len()
            )));
        }
        let mut seen = ids.to_vec();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(HomologyError::InvalidTraversal(
                "vertex visited twice".into(),
            ));
        }
        let mut edges = Vec::with_capacity(ids.len());
        for i in 0..ids.len() {
            let (a, b) = (ids[i], ids[(i + 1) % ids.len()]);
            let e = complex.edge_index(a, b).ok_or_else(|| {
                HomologyError::InvalidTraversal(format!("no edge {a}-{b}"))
            })?;
            edges.push(e);
        }
        Ok(Cycle {
            edges: Chain::from_indices(complex, 1, edges),
            vertices: seen,
            traversal: Some(normalize_traversal(ids)),
        })
    }

    /// Wraps a zero-boundary 1-chain. The result is simple iff the chain is a
    /// single closed loop.
    pub fn from_chain(complex: &Complex, chain: &Chain) -> Result<Cycle, HomologyError> {
        let mut parts = chain_to_simple_cycles(complex, chain)?;
        if parts.len() == 1 {
            return Ok(parts.pop().unwrap());
        }
        let mut vertices: Vec<VertexId> = parts.iter().flat_map(|c| c.vertices.clone()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Cycle {
            edges: chain.clone(),
            vertices,
            traversal: None,
        })
    }

    pub fn edges(&self) -> &Chain {
        &self.edges
    }

    /// Sorted ids of every vertex on the cycle.
    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn traversal(&self) -> Option<&[VertexId]> {
        self.traversal.as_deref()
    }

    pub fn is_simple(&self) -> bool {
        self.traversal.is_some()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.weight()
    }
}

fn normalize_traversal(ids: &[VertexId]) -> Vec<VertexId> {
    let n = ids.len();
    let start = (0..n).min_by_key(|&i| ids[i]).unwrap();
    let next = ids[(start + 1) % n];
    let prev = ids[(start + n - 1) % n];
    if next <= prev {
        (0..n).map(|k| ids[(start + k) % n]).collect()
    } else {
        (0..n).map(|k| ids[(start + n - k) % n]).collect()
    }
}

/// Everything the homology pipeline derives from one complex.
#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub betti0: usize,
    pub rank_z1: usize,
    pub rank_b1: usize,
    pub rank_h1: usize,
    pub h1_representatives: Vec<Cycle>,
    pub z1_basis: Vec<Chain>,
    pub b1_basis: Vec<Chain>,
}

/// Rank over GF(2) by Gaussian elimination.
pub fn gf2_rank(matrix: &Gf2Matrix) -> usize {
    matrix.rank()
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Number of connected components of the 1-skeleton.
pub fn betti0(complex: &Complex) -> usize {
    let mut sets = DisjointSets::new(complex.num_vertices());
    let merges = (0..complex.num_edges())
        .filter(|&e| {
            let [a, b] = complex.edge_ends(e);
            sets.union(a, b)
        })
        .count();
    complex.num_vertices() - merges
}

struct SpanningForest {
    parent_edge: Vec<Option<usize>>,
    depth: Vec<usize>,
    in_tree: Vec<bool>,
}

impl SpanningForest {
    // breadth-first from each unvisited vertex in canonical order, edges in
    // ascending position
    fn new(complex: &Complex) -> Self {
        let n = complex.num_vertices();
        let mut parent_edge = vec![None; n];
        let mut depth = vec![0; n];
        let mut visited = vec![false; n];
        let mut in_tree = vec![false; complex.num_edges()];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &e in complex.incident_edges(v) {
                    let w = complex.opposite(e, v);
                    if !visited[w] {
                        visited[w] = true;
                        parent_edge[w] = Some(e);
                        depth[w] = depth[v] + 1;
                        in_tree[e] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        Self {
            parent_edge,
            depth,
            in_tree,
        }
    }

    fn fundamental_cycle(&self, complex: &Complex, e: usize) -> Chain {
        let mut chain = Chain::from_indices(complex, 1, [e]);
        let [mut a, mut b] = complex.edge_ends(e);
        let climb = |v: &mut usize, chain: &mut Chain| {
            let pe = self.parent_edge[*v].expect("non-root vertex has a parent edge");
            chain.add_assign(&Chain::from_indices(complex, 1, [pe]));
            *v = complex.opposite(pe, *v);
        };
        while self.depth[a] > self.depth[b] {
            climb(&mut a, &mut chain);
        }
        while self.depth[b] > self.depth[a] {
            climb(&mut b, &mut chain);
        }
        while a != b {
            climb(&mut a, &mut chain);
            climb(&mut b, &mut chain);
        }
        chain
    }
}

/// Basis of `ker ∂₁`: one fundamental cycle per non-tree edge of a
/// breadth-first spanning forest, in ascending edge order.
pub fn cycle_space_basis(complex: &Complex) -> Vec<Chain> {
    let forest = SpanningForest::new(complex);
    (0..complex.num_edges())
        .filter(|&e| !forest.in_tree[e])
        .map(|e| forest.fundamental_cycle(complex, e))
        .collect()
}

/// The boundary group `B₁ = img ∂₂`, ready for membership queries.
#[derive(Clone, Debug)]
pub struct BoundarySpace {
    basis: EchelonBasis,
    generators: Vec<Chain>,
}

impl BoundarySpace {
    pub fn new(complex: &Complex) -> Self {
        let mut basis = EchelonBasis::new(complex.num_edges());
        let generators = (0..complex.num_triangles())
            .map(|t| Chain::from_indices(complex, 1, complex.triangle_edges(t)))
            .filter(|c| basis.insert(c.bits()))
            .collect();
        Self { basis, generators }
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Independent triangle boundaries spanning the group.
    pub fn generators(&self) -> &[Chain] {
        &self.generators
    }

    /// Panics if `chain` is not a 1-chain of the same complex.
    pub fn contains(&self, chain: &Chain) -> bool {
        assert_eq!(chain.dimension(), 1, "boundary membership is defined for 1-chains");
        self.basis.contains(chain.bits())
    }
}

/// True iff `chain` is the boundary of some 2-chain.
///
/// Panics if `chain` is not a 1-chain over `complex`'s edges.
pub fn in_boundary_span(complex: &Complex, chain: &Chain) -> bool {
    BoundarySpace::new(complex).contains(chain)
}

/// Ranks of `Z₁`, `B₁`, `H₁` together with a basis of each and one simple
/// representative per `H₁` generator.
pub fn h1_basis(complex: &Complex) -> HomologyResult {
    let boundaries = BoundarySpace::new(complex);
    let z1_basis = cycle_space_basis(complex);
    let mut span = boundaries.basis.clone();
    let h1_representatives: Vec<Cycle> = z1_basis
        .iter()
        .filter(|z| span.insert(z.bits()))
        .map(|z| {
            // fundamental cycles are simple loops, so this yields exactly one
            chain_to_simple_cycles(complex, z)
                .expect("fundamental cycles have zero boundary")
                .swap_remove(0)
        })
        .collect();
    let rank_z1 = z1_basis.len();
    let rank_b1 = boundaries.rank();
    HomologyResult {
        betti0: betti0(complex),
        rank_z1,
        rank_b1,
        rank_h1: rank_z1 - rank_b1,
        h1_representatives,
        z1_basis,
        b1_basis: boundaries.generators,
    }
}

/// Splits a zero-boundary 1-chain into edge-disjoint simple closed loops.
///
/// Walks from the lowest vertex that still has unused edges, always taking the
/// lowest-positioned unused edge, and cuts off a loop whenever the walk
/// returns to a vertex already on the current path. Every vertex has even
/// degree in the chain, so the walk can only stall once the path has shrunk
/// back to its start.
pub fn chain_to_simple_cycles(complex: &Complex, chain: &Chain) -> Result<Vec<Cycle>, HomologyError> {
    if chain.dimension() != 1 {
        return Err(HomologyError::WrongDimension(chain.dimension()));
    }
    if !complex.boundary_of_chain(chain)?.is_zero() {
        return Err(HomologyError::NotACycle);
    }
    let mut unused = vec![false; complex.num_edges()];
    for e in chain.bits().ones() {
        unused[e] = true;
    }
    let mut remaining = chain.weight();
    let mut on_path: Vec<Option<usize>> = vec![None; complex.num_vertices()];
    let mut cycles = Vec::new();
    let next_unused = |v: usize, unused: &[bool]| {
        complex.incident_edges(v).iter().copied().find(|&e| unused[e])
    };

    while remaining > 0 {
        let start = (0..complex.num_vertices())
            .find(|&v| next_unused(v, &unused).is_some())
            .expect("unused edges have endpoints");
        let mut path = vec![start];
        let mut path_edges: Vec<usize> = Vec::new();
        on_path[start] = Some(0);
        loop {
            let v = *path.last().unwrap();
            let Some(e) = next_unused(v, &unused) else {
                debug_assert_eq!(path.len(), 1, "walk stalled away from its start");
                break;
            };
            unused[e] = false;
            remaining -= 1;
            let w = complex.opposite(e, v);
            match on_path[w] {
                Some(pos) => {
                    let loop_vertices: Vec<usize> = path.drain(pos + 1..).collect();
                    let mut loop_edges: Vec<usize> = path_edges.drain(pos..).collect();
                    loop_edges.push(e);
                    for u in &loop_vertices {
                        on_path[*u] = None;
                    }
                    let ids: Vec<VertexId> = std::iter::once(w)
                        .chain(loop_vertices)
                        .map(|u| complex.vertices()[u].id)
                        .collect();
                    let mut sorted = ids.clone();
                    sorted.sort_unstable();
                    cycles.push(Cycle {
                        edges: Chain::from_indices(complex, 1, loop_edges),
                        vertices: sorted,
                        traversal: Some(normalize_traversal(&ids)),
                    });
                }
                None => {
                    on_path[w] = Some(path.len());
                    path.push(w);
                    path_edges.push(e);
                }
            }
        }
        on_path[start] = None;
    }
    Ok(cycles)
}
