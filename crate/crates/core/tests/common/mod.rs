//! Random inputs shared by the integration tests and the benches.
#![allow(dead_code)]

use std::f64::consts::TAU;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use shapesig::io::{triangulate_polygon, PolygonWithHoles};
use shapesig::{Complex, Cycle, Edge, Triangle, Vertex};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// An abstract complex with at most 12 vertices and 14 edges; every 3-clique
/// is filled with probability one half. Coordinates are arbitrary.
pub fn random_complex(rng: &mut StdRng) -> Complex {
    let nv = rng.gen_range(1..=12u32);
    let mut pairs: Vec<(u32, u32)> = (0..nv).flat_map(|a| (a + 1..nv).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    let ne = rng.gen_range(0..=pairs.len().min(14));
    pairs.truncate(ne);
    let has = |a: u32, b: u32| pairs.contains(&(a.min(b), a.max(b)));
    let mut tris = Vec::new();
    for a in 0..nv {
        for b in a + 1..nv {
            for c in b + 1..nv {
                if has(a, b) && has(b, c) && has(a, c) && rng.gen_bool(0.5) {
                    tris.push((a, b, c));
                }
            }
        }
    }
    let vs = (0..nv)
        .map(|i| Vertex::new(i, rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
        .collect();
    let es = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Edge::new(i as u32 + 1, a, b))
        .collect();
    let ts = tris
        .iter()
        .enumerate()
        .map(|(i, &(a, b, c))| Triangle::new(i as u32 + 1, a, b, c))
        .collect();
    Complex::new(vs, es, ts).expect("generated complex is valid")
}

pub fn ring_area(ring: &[(f64, f64)]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

fn star(rng: &mut StdRng, cx: f64, cy: f64, n: usize, rmin: f64, rmax: f64) -> Vec<(f64, f64)> {
    let step = TAU / n as f64;
    let phase = rng.gen_range(0.0..TAU);
    (0..n)
        .map(|k| {
            let t = phase + step * (k as f64 + rng.gen_range(-0.3..0.3));
            let r = rng.gen_range(rmin..rmax);
            (cx + r * t.cos(), cy + r * t.sin())
        })
        .collect()
}

/// A star-shaped outer ring around the origin with `holes` small star-shaped
/// holes in separate slots, and the area the triangulation must cover.
pub fn random_polygon(rng: &mut StdRng, holes: usize) -> (PolygonWithHoles, f64) {
    let n = rng.gen_range(5..=12);
    let outer = star(rng, 0.0, 0.0, n, 6.0, 10.0);
    let slots = [(-2.0, 0.0), (0.0, 0.0), (2.0, 0.0)];
    let hs: Vec<Vec<(f64, f64)>> = slots[..holes]
        .iter()
        .map(|&(x, y)| {
            let n = rng.gen_range(3..=6);
            let (dx, dy) = (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
            let mut h = star(rng, x + dx, y + dy, n, 0.3, 0.7);
            if rng.gen_bool(0.5) {
                h.reverse();
            }
            h
        })
        .collect();
    let area = ring_area(&outer) - hs.iter().map(|h| ring_area(h)).sum::<f64>();
    (PolygonWithHoles { outer, holes: hs }, area)
}

/// Triangulation of a random polygon with 0 to 3 holes.
pub fn random_shape(rng: &mut StdRng) -> Complex {
    let holes = rng.gen_range(0..=3);
    triangulate_polygon(&random_polygon(rng, holes).0).expect("random polygon triangulates")
}

/// The 1-skeleton of an `n × m` grid of unit squares with slightly jittered
/// vertices; vertex `(i, j)` has id `i * (m + 1) + j`.
pub struct Grid {
    pub complex: Complex,
    pub n: u32,
    pub m: u32,
}

impl Grid {
    pub fn new(rng: &mut StdRng, n: u32, m: u32) -> Grid {
        let id = |i: u32, j: u32| i * (m + 1) + j;
        let mut vs = Vec::new();
        let mut es = Vec::new();
        for i in 0..=n {
            for j in 0..=m {
                vs.push(Vertex::new(
                    id(i, j),
                    i as f64 + rng.gen_range(-0.2..0.2),
                    j as f64 + rng.gen_range(-0.2..0.2),
                ));
                if i < n {
                    es.push(Edge::new(es.len() as u32, id(i, j), id(i + 1, j)));
                }
                if j < m {
                    es.push(Edge::new(es.len() as u32, id(i, j), id(i, j + 1)));
                }
            }
        }
        Grid {
            complex: Complex::new(vs, es, vec![]).expect("grid is valid"),
            n,
            m,
        }
    }

    /// Boundary of the rectangle of cells `[i0, i1) × [j0, j1)`.
    pub fn rect(&self, i0: u32, j0: u32, i1: u32, j1: u32) -> Cycle {
        let id = |i: u32, j: u32| i * (self.m + 1) + j;
        let mut t = Vec::new();
        t.extend((i0..i1).map(|i| id(i, j0)));
        t.extend((j0..j1).map(|j| id(i1, j)));
        t.extend((i0 + 1..=i1).rev().map(|i| id(i, j1)));
        t.extend((j0 + 1..=j1).rev().map(|j| id(i0, j)));
        Cycle::from_traversal(&self.complex, &t).expect("rectangle boundary is a cycle")
    }

    pub fn random_rect(&self, rng: &mut StdRng) -> (u32, u32, u32, u32) {
        let i0 = rng.gen_range(0..self.n);
        let j0 = rng.gen_range(0..self.m);
        (i0, j0, rng.gen_range(i0 + 1..=self.n), rng.gen_range(j0 + 1..=self.m))
    }

    /// Two rectangles whose boundaries share at least one edge: the second
    /// sits on top of the first with overlapping column ranges.
    pub fn strongly_near_pair(&self, rng: &mut StdRng) -> (Cycle, Cycle) {
        let j = rng.gen_range(1..self.m);
        let (a0, a1) = {
            let a = rng.gen_range(0..self.n);
            (a, rng.gen_range(a + 1..=self.n))
        };
        let b0 = rng.gen_range(0..a1);
        let b1 = rng.gen_range(b0.max(a0) + 1..=self.n);
        let below = self.rect(a0, rng.gen_range(0..j), a1, j);
        let above = self.rect(b0, j, b1, rng.gen_range(j + 1..=self.m));
        (below, above)
    }
}

/// Rotates by `theta` about the origin, then translates.
pub fn rigid(k: &Complex, theta: f64, dx: f64, dy: f64) -> Complex {
    let (s, c) = theta.sin_cos();
    k.map_points(|x, y| (c * x - s * y + dx, s * x + c * y + dy))
        .expect("rigid motion keeps coordinates finite")
}

/// The same complex with its simplex lists shuffled and every simplex's
/// vertex order permuted.
pub fn shuffled(k: &Complex, rng: &mut StdRng) -> Complex {
    let mut vs = k.vertices().to_vec();
    let mut es: Vec<Edge> = k
        .edges()
        .iter()
        .map(|e| {
            let [a, b] = e.endpoints;
            if rng.gen_bool(0.5) {
                Edge::new(e.id, b, a)
            } else {
                *e
            }
        })
        .collect();
    let mut ts: Vec<Triangle> = k
        .triangles()
        .iter()
        .map(|t| {
            let mut c = t.corners;
            c.shuffle(rng);
            Triangle::new(t.id, c[0], c[1], c[2])
        })
        .collect();
    vs.shuffle(rng);
    es.shuffle(rng);
    ts.shuffle(rng);
    Complex::new(vs, es, ts).expect("permuted complex is valid")
}
