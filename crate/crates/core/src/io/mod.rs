//! Text formats, polygon triangulation and SVG rendering.

mod cplx;
mod poly;
mod svg;
mod triangulate;

pub use cplx::{parse_complex_file, serialize_complex, ParseError};
pub use poly::{parse_poly, PolygonWithHoles};
pub use svg::{render_svg, Highlight, HighlightStyle};
pub use triangulate::{triangulate_polygon, TriangulateError};
