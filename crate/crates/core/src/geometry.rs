//! Geometric descriptors of arcs and cycles, and recovery of hole and contour
//! loops from the planar embedding.
//!
//! Edges are straight segments, so curvature lives on vertices: the discrete
//! curvature at a vertex is its exterior turning angle `π − interior angle`.
//! It is signed (left turns positive) when summed into a turning number and
//! taken in absolute value for descriptor statistics.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Chain, Complex, VertexId};
use crate::homology::{chain_to_simple_cycles, Cycle, HomologyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("cycle is not a single simple loop and has no traversal")]
    NotSimple,
    #[error("arc has {0} vertices; curvature needs at least one interior vertex")]
    ArcTooShort(usize),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("tolerance must be a finite nonnegative number, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Named real-valued components describing an arc or a cycle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(BTreeMap<String, f64>);

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_owned(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_finite(&self) -> bool {
        self.0.values().all(|v| v.is_finite())
    }

    /// Largest componentwise difference. Vectors with different component
    /// names are incomparable and sit at infinite distance.
    pub fn max_norm_distance(&self, other: &FeatureVector) -> f64 {
        if !self.0.keys().eq(other.0.keys()) {
            return f64::INFINITY;
        }
        self.0
            .values()
            .zip(other.0.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Like [`max_norm_distance`](Self::max_norm_distance), but a component
    /// missing on one side counts as zero there.
    pub fn padded_distance(&self, other: &FeatureVector) -> f64 {
        let keys: BTreeSet<&String> = self.0.keys().chain(other.0.keys()).collect();
        keys.into_iter()
            .map(|k| {
                let a = self.0.get(k).copied().unwrap_or(0.0);
                let b = other.0.get(k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Every component rounded to the nearest multiple of `step`; `step == 0`
    /// returns the vector unchanged.
    pub fn quantized(&self, step: f64) -> FeatureVector {
        if step <= 0.0 {
            return self.clone();
        }
        FeatureVector(
            self.0
                .iter()
                .map(|(k, v)| (k.clone(), quantize(*v, step)))
                .collect(),
        )
    }

    fn retain(&mut self, keep: impl Fn(&str) -> bool) {
        self.0.retain(|k, _| keep(k));
    }

    /// Total order: lexicographic over `(name, value)` pairs.
    pub fn cmp_lex(&self, other: &FeatureVector) -> Ordering {
        for ((ka, va), (kb, vb)) in self.0.iter().zip(other.0.iter()) {
            let ord = ka.cmp(kb).then(va.total_cmp(vb));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

pub fn quantize(value: f64, step: f64) -> f64 {
    let q = (value / step).round() * step;
    if q == 0.0 {
        0.0
    } else {
        q
    }
}

/// An ordered vertex path along declared edges, with no edge used twice.
/// A path that returns to its first vertex is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    vertices: Vec<VertexId>,
}

impl Arc {
    pub fn new(complex: &Complex, vertices: Vec<VertexId>) -> Result<Arc, GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::InvalidArc(format!(
                "an arc needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        let mut used = HashSet::new();
        for w in vertices.windows(2) {
            let e = complex.edge_index(w[0], w[1]).ok_or_else(|| {
                GeometryError::InvalidArc(format!("no edge {}-{}", w[0], w[1]))
            })?;
            if !used.insert(e) {
                return Err(GeometryError::InvalidArc(format!(
                    "edge {}-{} used twice",
                    w[0], w[1]
                )));
            }
        }
        Ok(Arc { vertices })
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Canonical positions of the arc's edges.
    pub fn edge_indices(&self, complex: &Complex) -> Vec<usize> {
        self.vertices
            .windows(2)
            .map(|w| complex.edge_index(w[0], w[1]).expect("arc edges were validated"))
            .collect()
    }
}

fn point_of(complex: &Complex, id: VertexId) -> (f64, f64) {
    complex.point(complex.vertex_index(id).expect("vertex id belongs to the complex"))
}

/// Signed exterior angle at `v` walking `p → v → n`, in `(−π, π]`; left
/// turns are positive.
pub fn turning_angle(p: (f64, f64), v: (f64, f64), n: (f64, f64)) -> f64 {
    let (ax, ay) = (v.0 - p.0, v.1 - p.1);
    let (bx, by) = (n.0 - v.0, n.1 - v.1);
    (ax * by - ay * bx).atan2(ax * bx + ay * by)
}

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn mean_stdev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn simple_traversal(cycle: &Cycle) -> Result<&[VertexId], GeometryError> {
    cycle.traversal().ok_or(GeometryError::NotSimple)
}

/// Signed turning angles at each vertex of a closed traversal, in traversal
/// order.
fn closed_turns(complex: &Complex, traversal: &[VertexId]) -> Vec<f64> {
    let n = traversal.len();
    let pts: Vec<_> = traversal.iter().map(|&id| point_of(complex, id)).collect();
    (0..n)
        .map(|i| turning_angle(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]))
        .collect()
}

/// Sum of signed turning angles around a simple cycle: `±2π` for any simple
/// closed polygon.
pub fn total_turning(complex: &Complex, cycle: &Cycle) -> Result<f64, GeometryError> {
    Ok(closed_turns(complex, simple_traversal(cycle)?).iter().sum())
}

/// Signed shoelace area of a closed traversal (positive when counterclockwise).
pub fn signed_area(complex: &Complex, traversal: &[VertexId]) -> f64 {
    let pts: Vec<_> = traversal.iter().map(|&id| point_of(complex, id)).collect();
    shoelace(&pts)
}

pub(crate) fn shoelace(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

/// Length, enclosed area and curvature statistics of a simple cycle.
pub fn cycle_geometry(complex: &Complex, cycle: &Cycle) -> Result<FeatureVector, GeometryError> {
    let t = simple_traversal(cycle)?;
    let n = t.len();
    let length: f64 = (0..n)
        .map(|i| distance(point_of(complex, t[i]), point_of(complex, t[(i + 1) % n])))
        .sum();
    let turns: Vec<f64> = closed_turns(complex, t).into_iter().map(f64::abs).collect();
    let (mean, stdev) = mean_stdev(&turns);
    Ok(FeatureVector::new()
        .with("edge_count", n as f64)
        .with("length", length)
        .with("enclosed_area", signed_area(complex, t).abs())
        .with("mean_curvature", mean)
        .with("curvature_stdev", stdev))
}

fn check_tolerance(tau: f64) -> Result<(), GeometryError> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(GeometryError::BadTolerance(tau))
    }
}

fn arc_length(complex: &Complex, arc: &Arc) -> f64 {
    arc.vertices
        .windows(2)
        .map(|w| distance(point_of(complex, w[0]), point_of(complex, w[1])))
        .sum()
}

/// Curvature profile of an arc: its length and the mean and spread of the
/// absolute turning angle over interior vertices. `is_uniform_iso` is 1 when
/// the spread is at most `tau`.
pub fn arc_descriptor(complex: &Complex, arc: &Arc, tau: f64) -> Result<FeatureVector, GeometryError> {
    check_tolerance(tau)?;
    let v = &arc.vertices;
    if v.len() < 3 {
        return Err(GeometryError::ArcTooShort(v.len()));
    }
    let turns: Vec<f64> = v
        .windows(3)
        .map(|w| {
            turning_angle(point_of(complex, w[0]), point_of(complex, w[1]), point_of(complex, w[2]))
                .abs()
        })
        .collect();
    let (mean, stdev) = mean_stdev(&turns);
    Ok(FeatureVector::new()
        .with("arc_length", arc_length(complex, arc))
        .with("mean_curvature", mean)
        .with("curvature_stdev", stdev)
        .with("is_uniform_iso", if stdev <= tau { 1.0 } else { 0.0 }))
}

/// Something that can be described: a whole cycle or an arc of one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Cycle(Cycle),
    Arc(Arc),
}

/// Which components `phi` reports, how finely it quantizes them, and the
/// uniformity tolerance for arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiConfig {
    /// Quantization step; 0 disables quantization.
    pub quant: f64,
    /// Curvature-spread tolerance for uniform iso-curvature.
    pub tau: f64,
    /// Component names to keep; `None` keeps all of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<BTreeSet<String>>,
}

impl Default for PhiConfig {
    fn default() -> Self {
        Self {
            quant: 0.05,
            tau: 0.05,
            active: None,
        }
    }
}

/// The description `Φ(x)` of an element, restricted to the active components
/// and quantized.
///
/// A single-edge arc is a straight segment: it is described by its length
/// with zero, uniform curvature. [`arc_descriptor`] itself rejects such arcs
/// because they have no interior vertex to measure.
pub fn phi(complex: &Complex, element: &Element, config: &PhiConfig) -> Result<FeatureVector, GeometryError> {
    check_tolerance(config.quant)?;
    let mut fv = match element {
        Element::Cycle(c) => cycle_geometry(complex, c)?,
        Element::Arc(a) if a.vertices.len() == 2 => FeatureVector::new()
            .with("arc_length", arc_length(complex, a))
            .with("mean_curvature", 0.0)
            .with("curvature_stdev", 0.0)
            .with("is_uniform_iso", 1.0),
        Element::Arc(a) => arc_descriptor(complex, a, config.tau)?,
    };
    if let Some(active) = &config.active {
        fv.retain(|k| active.contains(k));
    }
    Ok(fv.quantized(config.quant))
}

/// Splits a simple cycle into maximal arcs of uniform iso-curvature.
///
/// Interior vertices are grouped greedily while the spread of their absolute
/// turning angles stays within `tau`, starting at the first vertex whose
/// curvature jumps by more than `2·tau` from its predecessor. A cycle that is
/// uniform all the way round becomes one closed arc.
pub fn uniform_arcs(complex: &Complex, cycle: &Cycle, tau: f64) -> Result<Vec<Arc>, GeometryError> {
    check_tolerance(tau)?;
    let t = simple_traversal(cycle)?;
    let n = t.len();
    let kappa: Vec<f64> = closed_turns(complex, t).into_iter().map(f64::abs).collect();
    let arc_of = |first: usize, len: usize| {
        // interior positions first .. first+len-1, plus one vertex either side
        Arc {
            vertices: (0..len + 2).map(|k| t[(first + n - 1 + k) % n]).collect(),
        }
    };
    if mean_stdev(&kappa).1 <= tau {
        let mut closed = t.to_vec();
        closed.push(t[0]);
        return Ok(vec![Arc { vertices: closed }]);
    }
    let start = (0..n)
        .find(|&i| (kappa[i] - kappa[(i + n - 1) % n]).abs() > 2.0 * tau)
        .unwrap_or(0);
    let mut arcs = Vec::new();
    let mut first = 0;
    while first < n {
        let mut len = 1;
        while first + len < n {
            let window: Vec<f64> = (first..=first + len).map(|k| kappa[(start + k) % n]).collect();
            if mean_stdev(&window).1 > tau {
                break;
            }
            len += 1;
        }
        arcs.push(arc_of(start + first, len));
        first += len;
    }
    Ok(arcs)
}

/// The descriptive elements of a cycle: its maximal uniform iso-curvature
/// arcs followed by the cycle itself.
pub fn cycle_elements(complex: &Complex, cycle: &Cycle, tau: f64) -> Result<Vec<Element>, GeometryError> {
    let mut out: Vec<Element> = uniform_arcs(complex, cycle, tau)?
        .into_iter()
        .map(Element::Arc)
        .collect();
    out.push(Element::Cycle(cycle.clone()));
    Ok(out)
}

/// Loops recovered from the faces of the planar embedding.
#[derive(Clone, Debug, Default)]
pub struct ShapeBoundaries {
    /// Outer boundary loops, one or more per connected component.
    pub contours: Vec<Cycle>,
    /// Boundaries of bounded faces that are not filled triangles.
    pub holes: Vec<Cycle>,
    /// Number of unfilled bounded faces.
    pub hole_faces: usize,
}

/// Traces every face of the embedded 1-skeleton and sorts it into filled
/// triangles, holes and outer faces.
///
/// Faces are walked with the face on the left, so bounded faces come out
/// counterclockwise (positive area) and each component's outer face clockwise.
/// A face boundary that touches itself is split into its simple loops, and
/// edges walked twice (dangling trees) cancel out.
pub fn shape_boundaries(complex: &Complex) -> ShapeBoundaries {
    let nv = complex.num_vertices();
    let ne = complex.num_edges();
    if ne == 0 {
        return ShapeBoundaries::default();
    }
    // neighbours of each vertex sorted counterclockwise by direction
    let rings: Vec<Vec<usize>> = (0..nv)
        .map(|v| {
            let p = complex.point(v);
            let mut es: Vec<(f64, usize)> = complex
                .incident_edges(v)
                .iter()
                .map(|&e| {
                    let q = complex.point(complex.opposite(e, v));
                    ((q.1 - p.1).atan2(q.0 - p.0), e)
                })
                .collect();
            es.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            es.into_iter().map(|(_, e)| e).collect()
        })
        .collect();

    let triangles: HashSet<[usize; 3]> = (0..complex.num_triangles())
        .map(|t| {
            let mut es = complex.triangle_edges(t);
            es.sort_unstable();
            es
        })
        .collect();
    let (min, max) = complex.vertices().iter().fold(
        ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN)),
        |(lo, hi), v| ((lo.0.min(v.x), lo.1.min(v.y)), (hi.0.max(v.x), hi.1.max(v.y))),
    );
    let area_eps = 1e-12 * ((max.0 - min.0) * (max.1 - min.1)).max(1.0);

    // half-edge h = 2e + d runs from edge_ends(e)[d] to edge_ends(e)[1-d]
    let mut visited = vec![false; 2 * ne];
    let mut out = ShapeBoundaries::default();
    for h0 in 0..2 * ne {
        if visited[h0] {
            continue;
        }
        let mut walk_edges = Vec::new();
        let mut pts = Vec::new();
        let mut h = h0;
        while !visited[h] {
            visited[h] = true;
            let (e, d) = (h / 2, h % 2);
            let ends = complex.edge_ends(e);
            let (from, to) = (ends[d], ends[1 - d]);
            walk_edges.push(e);
            pts.push(complex.point(from));
            let ring = &rings[to];
            let i = ring.iter().position(|&x| x == e).expect("edge is incident to its endpoint");
            let next = ring[(i + ring.len() - 1) % ring.len()];
            let nd = usize::from(complex.edge_ends(next)[0] != to);
            h = 2 * next + nd;
        }
        let area = shoelace(&pts);
        let chain = Chain::from_indices(complex, 1, walk_edges.iter().copied());
        let loops = chain_to_simple_cycles(complex, &chain)
            .expect("a closed face walk has zero boundary mod 2");
        if area > area_eps {
            let mut es = walk_edges.clone();
            es.sort_unstable();
            if es.len() == 3 && triangles.contains(&[es[0], es[1], es[2]]) {
                continue;
            }
            out.hole_faces += 1;
            out.holes.extend(loops);
        } else {
            out.contours.extend(loops);
        }
    }
    out.contours.sort_by(|a, b| a.edges().cmp(b.edges()));
    out.holes.sort_by(|a, b| a.edges().cmp(b.edges()));
    out
}
