//! The `.poly` polygon format: an `outer:` ring followed by any number of
//! `hole:` rings, one `x y` pair per line.

use serde::{Deserialize, Serialize};

use super::cplx::ParseError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolygonWithHoles {
    pub outer: Vec<(f64, f64)>,
    pub holes: Vec<Vec<(f64, f64)>>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_poly(text: &str) -> Result<PolygonWithHoles, ParseError> {
    let mut poly = PolygonWithHoles::default();
    let mut seen_outer = false;
    let mut current: Option<&mut Vec<(f64, f64)>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = content.len() - content.trim_start().len() + 1;
        match trimmed {
            "outer:" => {
                if seen_outer {
                    return Err(syntax(line, column, "second `outer:` section"));
                }
                seen_outer = true;
                current = Some(&mut poly.outer);
                continue;
            }
            "hole:" => {
                if !seen_outer {
                    return Err(syntax(line, column, "`hole:` before `outer:`"));
                }
                poly.holes.push(Vec::new());
                current = poly.holes.last_mut();
                continue;
            }
            _ => {}
        }
        let Some(ring) = current.as_deref_mut() else {
            return Err(syntax(line, column, "coordinates before `outer:`"));
        };
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(syntax(line, column, format!("expected `x y`, found `{trimmed}`")));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| syntax(line, column, format!("expected a finite number, found `{s}`")))
        };
        ring.push((num(fields[0])?, num(fields[1])?));
    }
    if !seen_outer {
        return Err(syntax(1, 1, "missing `outer:` section"));
    }
    Ok(poly)
}
