//! Ear-clipping triangulation of a polygon with holes.
//!
//! Each hole is joined to the outer ring by a bridge from its rightmost
//! vertex, which turns the domain into one weakly simple ring; ears are then
//! clipped off that ring. Bridge endpoints appear twice in the ring but keep a
//! single vertex id, so the output complex has no duplicate vertices.

use std::collections::BTreeSet;

use thiserror::Error;

use super::poly::PolygonWithHoles;
use crate::complex::{Complex, ComplexError, Edge, Triangle, Vertex, VertexId};

type P = (f64, f64);

/// Ring 0 is the outer ring, ring `k ≥ 1` is hole `k − 1`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangulateError {
    #[error("ring {ring} intersects itself")]
    SelfIntersectingRing { ring: usize },
    #[error("ring {ring} has fewer than 3 distinct vertices or no area")]
    DegenerateRing { ring: usize },
    #[error("hole ring {ring} is not strictly inside the outer ring")]
    HoleOutsideOuter { ring: usize },
    #[error("hole rings {a} and {b} overlap or touch")]
    OverlappingHoles { a: usize, b: usize },
    #[error("no valid bridge for hole ring {ring}")]
    NoBridge { ring: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

const TOL: f64 = 1e-12;

fn cross(o: P, a: P, b: P) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn area(ring: &[P]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

fn on_segment(p: P, a: P, b: P, eps: f64) -> bool {
    cross(a, b, p).abs() <= eps
        && p.0 >= a.0.min(b.0) - eps.sqrt()
        && p.0 <= a.0.max(b.0) + eps.sqrt()
        && p.1 >= a.1.min(b.1) - eps.sqrt()
        && p.1 <= a.1.max(b.1) + eps.sqrt()
}

/// True if the closed segments share any point.
fn segments_touch(a: P, b: P, c: P, d: P, eps: f64) -> bool {
    let (d1, d2) = (cross(a, b, c), cross(a, b, d));
    let (d3, d4) = (cross(c, d, a), cross(c, d, b));
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)) {
        return true;
    }
    on_segment(c, a, b, eps) || on_segment(d, a, b, eps) || on_segment(a, c, d, eps) || on_segment(b, c, d, eps)
}

/// True if the open segments cross at a single interior point.
fn segments_cross(a: P, b: P, c: P, d: P, eps: f64) -> bool {
    let (d1, d2) = (cross(a, b, c), cross(a, b, d));
    let (d3, d4) = (cross(c, d, a), cross(c, d, b));
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}

fn point_in_ring(p: P, ring: &[P]) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) / (b.1 - a.1) * (b.0 - a.0);
            if p.0 < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn ring_segments(ring: &[P]) -> impl Iterator<Item = (P, P)> + '_ {
    (0..ring.len()).map(move |i| (ring[i], ring[(i + 1) % ring.len()]))
}

fn check_simple(ring: &[P], index: usize, eps: f64) -> Result<(), TriangulateError> {
    let distinct: BTreeSet<(u64, u64)> = ring.iter().map(|p| (p.0.to_bits(), p.1.to_bits())).collect();
    if ring.len() < 3 || distinct.len() < ring.len() {
        return Err(if distinct.len() < 3 {
            TriangulateError::DegenerateRing { ring: index }
        } else {
            TriangulateError::SelfIntersectingRing { ring: index }
        });
    }
    let n = ring.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if adjacent {
                // neighbours share one endpoint; they may not fold back
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if cross(shared, p, q).abs() <= eps && (p.0 - shared.0) * (q.0 - shared.0) + (p.1 - shared.1) * (q.1 - shared.1) > 0.0 {
                    return Err(TriangulateError::SelfIntersectingRing { ring: index });
                }
            } else if segments_touch(a, b, c, d, eps) {
                return Err(TriangulateError::SelfIntersectingRing { ring: index });
            }
        }
    }
    if area(ring).abs() <= eps {
        return Err(TriangulateError::DegenerateRing { ring: index });
    }
    Ok(())
}

struct Domain {
    points: Vec<P>,
    /// Vertex ids of each ring; outer counterclockwise, holes clockwise.
    rings: Vec<Vec<VertexId>>,
    eps: f64,
}

impl Domain {
    fn pt(&self, v: VertexId) -> P {
        self.points[v as usize]
    }
}

fn validate(poly: &PolygonWithHoles) -> Result<Domain, TriangulateError> {
    let all: Vec<&Vec<P>> = std::iter::once(&poly.outer).chain(&poly.holes).collect();
    let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
    for p in all.iter().flat_map(|r| r.iter()) {
        lo = (lo.0.min(p.0), lo.1.min(p.1));
        hi = (hi.0.max(p.0), hi.1.max(p.1));
    }
    let scale = (hi.0 - lo.0).max(hi.1 - lo.1).max(1.0);
    let eps = TOL * scale * scale;
    for (k, ring) in all.iter().enumerate() {
        check_simple(ring, k, eps)?;
    }
    for (h, hole) in poly.holes.iter().enumerate() {
        let k = h + 1;
        let crosses = ring_segments(hole)
            .any(|(a, b)| ring_segments(&poly.outer).any(|(c, d)| segments_touch(a, b, c, d, eps)));
        if crosses || !hole.iter().all(|&p| point_in_ring(p, &poly.outer)) {
            return Err(TriangulateError::HoleOutsideOuter { ring: k });
        }
        for (g, other) in poly.holes.iter().enumerate().take(h) {
            let touch = ring_segments(hole)
                .any(|(a, b)| ring_segments(other).any(|(c, d)| segments_touch(a, b, c, d, eps)));
            if touch || point_in_ring(hole[0], other) || point_in_ring(other[0], hole) {
                return Err(TriangulateError::OverlappingHoles { a: g + 1, b: k });
            }
        }
    }
    let mut points = Vec::new();
    let mut rings = Vec::new();
    for (k, ring) in all.iter().enumerate() {
        let start = points.len() as VertexId;
        points.extend(ring.iter().copied());
        let mut ids: Vec<VertexId> = (start..start + ring.len() as VertexId).collect();
        let ccw = area(ring) > 0.0;
        if (k == 0) != ccw {
            ids.reverse();
        }
        rings.push(ids);
    }
    Ok(Domain { points, rings, eps })
}

/// True if direction `d` from `p` points into the interior wedge at a ring
/// corner `prev → p → next` of a counterclockwise ring.
fn in_wedge(p: P, prev: P, next: P, d: P) -> bool {
    let ang = |q: P| (q.1 - p.1).atan2(q.0 - p.0);
    let tau = std::f64::consts::TAU;
    let rel = |a: f64| (a - ang(next)).rem_euclid(tau);
    let (dir, limit) = (rel(ang(d)), rel(ang(prev)));
    let limit = if limit == 0.0 { tau } else { limit };
    dir > 0.0 && dir < limit
}

fn bridge_holes(dom: &Domain) -> Result<Vec<VertexId>, TriangulateError> {
    let mut ring = dom.rings[0].clone();
    let mut holes: Vec<usize> = (1..dom.rings.len()).collect();
    // rightmost holes first, so earlier bridges never block later ones
    let rightmost = |k: usize| {
        dom.rings[k]
            .iter()
            .copied()
            .max_by(|&a, &b| dom.pt(a).0.total_cmp(&dom.pt(b).0).then(b.cmp(&a)))
            .expect("rings are nonempty")
    };
    holes.sort_by(|&a, &b| dom.pt(rightmost(b)).0.total_cmp(&dom.pt(rightmost(a)).0).then(a.cmp(&b)));
    for (done, &k) in holes.iter().enumerate() {
        let m = rightmost(k);
        let pm = dom.pt(m);
        let pending: Vec<usize> = holes[done..].to_vec();
        let blocked = |q: P| {
            ring_pairs(&ring).any(|(a, b)| segments_cross(pm, q, dom.pt(a), dom.pt(b), dom.eps))
                || pending.iter().any(|&h| {
                    ring_pairs(&dom.rings[h]).any(|(a, b)| segments_cross(pm, q, dom.pt(a), dom.pt(b), dom.eps))
                })
        };
        let through_vertex = |q: P, v: VertexId| {
            ring.iter()
                .chain(pending.iter().flat_map(|&h| dom.rings[h].iter()))
                .any(|&w| w != v && w != m && on_segment(dom.pt(w), pm, q, dom.eps) && dom.pt(w) != pm && dom.pt(w) != q)
        };
        let mut candidates: Vec<(f64, VertexId)> = ring
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|v| {
                let q = dom.pt(v);
                ((q.0 - pm.0).hypot(q.1 - pm.1), v)
            })
            .collect();
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut joined = false;
        for (_, v) in candidates {
            let q = dom.pt(v);
            if blocked(q) || through_vertex(q, v) {
                continue;
            }
            let n = ring.len();
            let slot = (0..n).find(|&i| {
                ring[i] == v && in_wedge(q, dom.pt(ring[(i + n - 1) % n]), dom.pt(ring[(i + 1) % n]), pm)
            });
            let Some(i) = slot else { continue };
            let hole = &dom.rings[k];
            let at = hole.iter().position(|&x| x == m).expect("rightmost vertex is on its ring");
            let mut spliced = ring[..=i].to_vec();
            spliced.extend((0..hole.len()).map(|j| hole[(at + j) % hole.len()]));
            spliced.push(m);
            spliced.push(v);
            spliced.extend_from_slice(&ring[i + 1..]);
            ring = spliced;
            joined = true;
            break;
        }
        if !joined {
            return Err(TriangulateError::NoBridge { ring: k });
        }
    }
    Ok(ring)
}

fn ring_pairs(ring: &[VertexId]) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
    (0..ring.len()).map(move |i| (ring[i], ring[(i + 1) % ring.len()]))
}

/// Drops repeated neighbours and zero-width spikes `a, b, a`.
fn tidy(ring: &mut Vec<VertexId>) {
    loop {
        let n = ring.len();
        if n < 3 {
            return;
        }
        if let Some(i) = (0..n).find(|&i| ring[i] == ring[(i + 1) % n]) {
            ring.remove(i);
            continue;
        }
        if let Some(i) = (0..n).find(|&i| ring[i] == ring[(i + 2) % n]) {
            let (b, c) = ((i + 1) % n, (i + 2) % n);
            let (hi, lo) = if b > c { (b, c) } else { (c, b) };
            ring.remove(hi);
            ring.remove(lo);
            continue;
        }
        return;
    }
}

fn clip_ears(dom: &Domain, mut ring: Vec<VertexId>) -> Vec<[VertexId; 3]> {
    let mut out = Vec::new();
    tidy(&mut ring);
    while ring.len() >= 3 {
        let n = ring.len();
        let ear = |i: usize, strict: bool| {
            let (a, b, c) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            let (pa, pb, pc) = (dom.pt(a), dom.pt(b), dom.pt(c));
            if cross(pa, pb, pc) <= dom.eps {
                return false;
            }
            !strict
                || !ring.iter().any(|&w| {
                    if w == a || w == b || w == c {
                        return false;
                    }
                    let q = dom.pt(w);
                    cross(pa, pb, q) >= -dom.eps && cross(pb, pc, q) >= -dom.eps && cross(pc, pa, q) >= -dom.eps
                })
        };
        let Some(i) = (0..n).find(|&i| ear(i, true)).or_else(|| (0..n).find(|&i| ear(i, false))) else {
            break;
        };
        out.push([ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]]);
        ring.remove(i);
        tidy(&mut ring);
    }
    out
}

/// Triangulates the region inside `outer` and outside every hole.
///
/// Vertex ids number the outer ring from 0 and then each hole in turn, in the
/// order given. Rings may have either orientation.
pub fn triangulate_polygon(poly: &PolygonWithHoles) -> Result<Complex, TriangulateError> {
    let dom = validate(poly)?;
    let ring = bridge_holes(&dom)?;
    let tris = clip_ears(&dom, ring);
    let vertices = dom
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| Vertex::new(i as VertexId, p.0, p.1))
        .collect();
    let mut pairs = BTreeSet::new();
    for t in &tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    for r in &dom.rings {
        for (a, b) in ring_pairs(r) {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| Edge::new(i as u32, a, b))
        .collect();
    let mut corners: Vec<[VertexId; 3]> = tris
        .into_iter()
        .map(|mut t| {
            t.sort_unstable();
            t
        })
        .collect();
    corners.sort_unstable();
    let triangles = corners
        .into_iter()
        .enumerate()
        .map(|(i, [a, b, c])| Triangle::new(i as u32, a, b, c))
        .collect();
    Ok(Complex::new(vertices, edges, triangles)?)
}
