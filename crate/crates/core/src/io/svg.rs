//! Deterministic SVG drawings of a complex.

use std::fmt::Write as _;

use crate::complex::Complex;
use crate::homology::Cycle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HighlightStyle {
    Hole,
    Representative,
    Other,
}

impl HighlightStyle {
    fn class(self) -> &'static str {
        match self {
            HighlightStyle::Hole => "hl-hole",
            HighlightStyle::Representative => "hl-h1",
            HighlightStyle::Other => "hl-other",
        }
    }

    fn color(self) -> &'static str {
        match self {
            HighlightStyle::Hole => "#c0392b",
            HighlightStyle::Representative => "#2471a3",
            HighlightStyle::Other => "#7d3c98",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Highlight {
    pub cycle: Cycle,
    pub style: HighlightStyle,
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Renders edges as lines, filled triangles as shaded polygons, highlighted
/// cycles as thick strokes on top, and vertices as dots.
///
/// Unfilled faces stay white. The y axis points up, as in the input.
pub fn render_svg(complex: &Complex, highlights: &[Highlight]) -> String {
    let vs = complex.vertices();
    let (lo, hi) = vs.iter().fold(((f64::MAX, f64::MAX), (f64::MIN, f64::MIN)), |(lo, hi), v| {
        ((lo.0.min(v.x), lo.1.min(v.y)), (hi.0.max(v.x), hi.1.max(v.y)))
    });
    let span = (hi.0 - lo.0).max(hi.1 - lo.1);
    let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
    let width = (hi.0 - lo.0) * scale + 2.0 * MARGIN;
    let height = (hi.1 - lo.1) * scale + 2.0 * MARGIN;
    let at = |i: usize| {
        let (x, y) = complex.point(i);
        (num((x - lo.0) * scale + MARGIN), num((hi.1 - y) * scale + MARGIN))
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    )
    .unwrap();
    out.push_str("<g class=\"faces\" fill=\"#d6dee8\" stroke=\"none\">\n");
    for t in complex.triangles() {
        let pts: Vec<String> = t
            .corners
            .iter()
            .map(|&id| {
                let (x, y) = at(complex.vertex_index(id).expect("triangle corner"));
                format!("{x},{y}")
            })
            .collect();
        writeln!(out, r#"<polygon points="{}"/>"#, pts.join(" ")).unwrap();
    }
    out.push_str("</g>\n<g class=\"edges\" stroke=\"#34495e\" stroke-width=\"1.5\">\n");
    for e in 0..complex.num_edges() {
        let [a, b] = complex.edge_ends(e);
        let ((x1, y1), (x2, y2)) = (at(a), at(b));
        writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#).unwrap();
    }
    out.push_str("</g>\n");
    for h in highlights {
        writeln!(
            out,
            r#"<g class="{}" stroke="{}" stroke-width="4" stroke-linecap="round">"#,
            h.style.class(),
            h.style.color()
        )
        .unwrap();
        for e in h.cycle.edges().support() {
            let [a, b] = complex.edge_ends(e);
            let ((x1, y1), (x2, y2)) = (at(a), at(b));
            writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#).unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("<g class=\"vertices\" fill=\"#17202a\">\n");
    for (i, v) in vs.iter().enumerate() {
        let (x, y) = at(i);
        writeln!(out, r#"<circle id="v{}" cx="{x}" cy="{y}" r="3"/>"#, v.id).unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    out
}
