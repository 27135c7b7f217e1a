//! Spatial (strong) and descriptive nearness of cycles and arcs.
//!
//! Strong nearness asks for overlapping interiors. Combinatorially the only
//! overlap a 1-cycle can witness is a shared edge, so that is the test used.
//! Descriptive nearness compares feature vectors: two collections are near
//! when some element of one is described within `epsilon` (max-norm) of some
//! element of the other. `epsilon = 0` is exact equality after quantization.

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, VertexId};
use crate::geometry::{cycle_elements, phi, Element, FeatureVector, GeometryError, PhiConfig};
use crate::homology::Cycle;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProximityConfig {
    /// Descriptive match tolerance, compared against the max-norm distance.
    pub epsilon: f64,
    pub phi: PhiConfig,
}

impl Default for ProximityConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            phi: PhiConfig::default(),
        }
    }
}

/// Vertices and edges (canonical positions) common to two cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpatialIntersection {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
}

impl SpatialIntersection {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }
}

/// Exact set intersection of the two cycles' vertices and edges.
///
/// Both cycles must come from the same complex.
pub fn spatial_intersection(a: &Cycle, b: &Cycle) -> SpatialIntersection {
    let (va, vb) = (a.vertex_ids(), b.vertex_ids());
    let mut vertices = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < va.len() && j < vb.len() {
        match va[i].cmp(&vb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                vertices.push(va[i]);
                i += 1;
                j += 1;
            }
        }
    }
    SpatialIntersection {
        vertices,
        edges: a.edges().bits().and(b.edges().bits()).ones().collect(),
    }
}

/// True iff the cycles share at least one edge.
pub fn strongly_near(a: &Cycle, b: &Cycle) -> bool {
    a.edges().bits().intersects(b.edges().bits())
}

/// An item paired with its description.
#[derive(Clone, Debug, PartialEq)]
pub struct Described<T> {
    pub item: T,
    pub description: FeatureVector,
}

impl<T> Described<T> {
    pub fn new(item: T, description: FeatureVector) -> Self {
        Self { item, description }
    }
}

/// Describes each element with `phi`.
pub fn describe(
    complex: &Complex,
    elements: Vec<Element>,
    config: &PhiConfig,
) -> Result<Vec<Described<Element>>, GeometryError> {
    elements
        .into_iter()
        .map(|e| {
            let d = phi(complex, &e, config)?;
            Ok(Described::new(e, d))
        })
        .collect()
}

/// The described elements of a cycle: its uniform iso-curvature arcs and the
/// cycle itself.
pub fn describe_cycle(
    complex: &Complex,
    cycle: &Cycle,
    config: &PhiConfig,
) -> Result<Vec<Described<Element>>, GeometryError> {
    describe(complex, cycle_elements(complex, cycle, config.tau)?, config)
}

fn near_some<T>(x: &FeatureVector, set: &[Described<T>], epsilon: f64) -> bool {
    set.iter()
        .any(|d| x.max_norm_distance(&d.description) <= epsilon)
}

/// `A ⌢_Φ B`: the members of `A ∪ B` whose description lies within
/// `epsilon` of a description in `A` and of a description in `B`.
///
/// `A`'s members come first, then the members of `B` that are not already in
/// `A`.
pub fn descriptive_intersection<'a, T: PartialEq>(
    a: &'a [Described<T>],
    b: &'a [Described<T>],
    epsilon: f64,
) -> Vec<&'a Described<T>> {
    let union = a
        .iter()
        .chain(b.iter().filter(|y| !a.iter().any(|x| x.item == y.item)));
    union
        .filter(|x| near_some(&x.description, a, epsilon) && near_some(&x.description, b, epsilon))
        .collect()
}

/// `A δ_Φ B`, i.e. `A ⌢_Φ B ≠ ∅`.
///
/// An element of `A` is trivially within any tolerance of `A`'s own
/// descriptions, so this reduces to finding one pair `(a, b)` within
/// `epsilon`.
pub fn dnear<T>(a: &[Described<T>], b: &[Described<T>], epsilon: f64) -> bool {
    a.iter().any(|x| near_some(&x.description, b, epsilon))
}

/// Descriptive nearness of two cycles through their element sets.
pub fn cycles_dnear(
    complex: &Complex,
    a: &Cycle,
    b: &Cycle,
    config: &ProximityConfig,
) -> Result<bool, GeometryError> {
    Ok(dnear(
        &describe_cycle(complex, a, &config.phi)?,
        &describe_cycle(complex, b, &config.phi)?,
        config.epsilon,
    ))
}
