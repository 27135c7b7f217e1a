//! Small complexes shipped with the crate, used by tests, benches and the
//! CLI examples.

use crate::complex::Complex;
use crate::io::parse_complex_file;

pub const TRI: &str = include_str!("../fixtures/tri.cplx");
pub const FIG2: &str = include_str!("../fixtures/fig2.cplx");
pub const FIG3: &str = include_str!("../fixtures/fig3.cplx");
pub const TWOHOLE: &str = include_str!("../fixtures/twohole.cplx");
pub const CONGRUENT: &str = include_str!("../fixtures/congruent.cplx");

fn load(text: &str) -> Complex {
    parse_complex_file(text).expect("shipped fixture is valid")
}

/// One filled triangle.
pub fn tri() -> Complex {
    load(TRI)
}

/// A filled pentagon around an interior vertex, with one open triangle.
pub fn fig2() -> Complex {
    load(FIG2)
}

/// Two hexagonal cycles sharing a two-edge arc; no triangles.
pub fn fig3() -> Complex {
    load(FIG3)
}

/// [`fig2`] glued to its mirror image: two open triangles.
pub fn twohole() -> Complex {
    load(TWOHOLE)
}

/// Five disjoint cycles: three congruent hexagons, a square and a triangle.
pub fn congruent() -> Complex {
    load(CONGRUENT)
}

/// Vertex traversals of the [`congruent`] cycles, in the order A, B, C, D, E.
pub const CONGRUENT_CYCLES: [&[u32]; 5] = [
    &[1, 2, 3],
    &[11, 12, 13, 14, 15, 16],
    &[21, 22, 23, 24, 25, 26],
    &[31, 32, 33, 34, 35, 36],
    &[41, 42, 43, 44],
];
