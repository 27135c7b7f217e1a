//! Homology-derived signatures of planar shapes.
//!
//! A shape is given as a 2-dimensional simplicial complex embedded in the
//! plane. From it the crate computes Betti numbers and explicit `H₁`
//! generators over GF(2), geometric descriptors of cycles and arcs, spatial
//! and descriptive nearness, homology nerves and descriptive nerves, and a
//! composite signature with a distance for comparing shapes.
//!
//! ```
//! use shapesig::{fixtures, h1_basis};
//!
//! let h = h1_basis(&fixtures::fig2());
//! assert_eq!((h.betti0, h.rank_z1, h.rank_b1, h.rank_h1), (1, 5, 4, 1));
//! ```

pub mod complex;
pub mod fixtures;
pub mod geometry;
pub mod gf2;
pub mod homology;
pub mod io;
pub mod nerve;
pub mod par;
pub mod proximity;
pub mod signature;

pub use complex::{build_complex, Chain, Complex, ComplexError, Edge, Triangle, Vertex, VertexId};
pub use geometry::{
    arc_descriptor, cycle_geometry, phi, shape_boundaries, uniform_arcs, Arc, Element, FeatureVector,
    GeometryError, PhiConfig,
};
pub use gf2::{BitVector, EchelonBasis, Gf2Matrix};
pub use homology::{
    betti0, chain_to_simple_cycles, cycle_space_basis, gf2_rank, h1_basis, in_boundary_span, Cycle,
    HomologyError, HomologyResult,
};
pub use nerve::{
    conjecture_report, descriptive_nerve, homology_nerve, leader_cover, nerve_union_betti_report,
    ConjectureReport, DescriptiveNerve, LeaderCover, NerveComplex, NerveError,
};
pub use par::Execution;
pub use proximity::{descriptive_intersection, dnear, spatial_intersection, strongly_near, ProximityConfig};
pub use signature::{
    build_signature, build_signatures, distance_matrix, signature_distance, DistanceWeights, Signature,
    SignatureConfig, SignatureError,
};
