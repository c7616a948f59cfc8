//! The `tame-region/1` JSON format and the circles text format.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tame_core::exact::{format_rational, parse_rational};
use tame_core::tameness::{AddableSet, BalancedWitness};
use tame_core::{Cone, Ray, Rational, Region};

pub const FORMAT: &str = "tame-region/1";

/// Input error with an optional 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct InputError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl InputError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> InputError {
        InputError { line: Some(line), column: Some(column), message: message.into() }
    }

    fn plain(message: impl Into<String>) -> InputError {
        InputError { line: None, column: None, message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

struct Rat(Rational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Rat).map_err(|e| de::Error::custom(format!("bad rational {s:?}: {e}")))
    }
}

fn version<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    let s = String::deserialize(d)?;
    if s == FORMAT {
        Ok(s)
    } else {
        Err(de::Error::custom(format!("unsupported format {s:?}, expected {FORMAT:?}")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CellIn {
    hrep: Option<Vec<Vec<Rat>>>,
    vrep: Option<Vec<Vec<Rat>>>,
    open: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionIn {
    #[serde(deserialize_with = "version")]
    format: String,
    n: usize,
    components: Vec<CellIn>,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Serialize)]
struct CellOut {
    hrep: Vec<Vec<String>>,
    open: bool,
}

#[derive(Serialize)]
struct RegionOut<'a> {
    format: &'static str,
    n: usize,
    components: Vec<CellOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
}

fn rays(n: usize, rows: Vec<Vec<Rat>>, what: &str, idx: usize) -> Result<Vec<Ray>, InputError> {
    rows.into_iter()
        .enumerate()
        .map(|(j, row)| {
            if row.len() != n {
                return Err(InputError::plain(format!(
                    "component {idx}: {what} row {j} has {} entries, expected {n}",
                    row.len()
                )));
            }
            let q: Vec<Rational> = row.into_iter().map(|r| r.0).collect();
            Ray::new(&q).map_err(|e| InputError::plain(format!("component {idx}: {what} row {j}: {e}")))
        })
        .collect()
}

/// Parses a region. Closed cells are accepted and regularised to their
/// interiors.
pub fn parse_region(text: &str) -> Result<Region, InputError> {
    let raw: RegionIn =
        serde_json::from_str(text).map_err(|e| InputError::at(e.line(), e.column(), e.to_string()))?;
    let _ = raw.format;
    let n = raw.n;
    if n < 2 {
        return Err(InputError::plain(format!("dimension n = {n} is below 2")));
    }
    let mut cells = Vec::with_capacity(raw.components.len());
    for (i, c) in raw.components.into_iter().enumerate() {
        let cone = match (c.hrep, c.vrep) {
            (Some(h), None) => Cone::from_hrep(n, &rays(n, h, "hrep", i)?),
            (None, Some(v)) => {
                if v.is_empty() {
                    return Err(InputError::plain(format!("component {i}: empty vrep")));
                }
                Cone::from_vrep(n, &rays(n, v, "vrep", i)?)
            }
            _ => return Err(InputError::plain(format!("component {i}: give exactly one of \"hrep\" and \"vrep\""))),
        }
        .map_err(|e| InputError::plain(format!("component {i}: {e}")))?;
        let _ = c.open;
        cells.push(cone);
    }
    let region = Region::new(n, cells).map_err(|e| InputError::plain(e.to_string()))?;
    Ok(match raw.label {
        Some(l) => region.with_label(l),
        None => region,
    })
}

/// Serialises a region with integer hrep rows, one cell per entry.
pub fn region_to_json(region: &Region) -> String {
    let out = RegionOut {
        format: FORMAT,
        n: region.dim(),
        components: region
            .cells()
            .iter()
            .map(|c| CellOut {
                hrep: c.hrep().iter().map(|r| r.coords().iter().map(|x| x.to_string()).collect()).collect(),
                open: true,
            })
            .collect(),
        label: region.label.as_deref(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("region serialises");
    s.push('\n');
    s
}

pub fn ray_json(r: &Ray) -> Value {
    Value::Array(r.coords().iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn witness_json(w: &BalancedWitness) -> Value {
    json!({
        "balanced": w.points().iter().zip(w.coefficients()).map(|(p, c)| json!({
            "point": ray_json(p),
            "coefficient": format_rational(c),
        })).collect::<Vec<_>>()
    })
}

pub fn addable_json(a: &AddableSet) -> Value {
    json!({
        "open_part_cells": a.open_part.cells().len(),
        "open_part_components": a.open_part.component_count(),
        "isolated_points": a.isolated_points.iter().map(ray_json).collect::<Vec<_>>(),
        "isolated_edges": a.isolated_edges.iter().map(|(s, e, m)| json!({
            "start": s.as_ref().map(ray_json),
            "end": e.as_ref().map(ray_json),
            "midpoint": ray_json(m),
        })).collect::<Vec<_>>(),
        "note": a.boundary_note,
    })
}

/// Parses great-circle normals, one per line. Entries are rationals
/// separated by whitespace or commas; `#` starts a comment.
pub fn parse_circles(text: &str) -> Result<Vec<Ray>, InputError> {
    let mut out = Vec::new();
    let mut dim = None;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let body = line.split('#').next().unwrap_or("");
        let mut q = Vec::new();
        let mut col = 0usize;
        for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
            let start = col;
            col += tok.len() + 1;
            if tok.is_empty() {
                continue;
            }
            let column = line[..start].chars().count() + 1;
            q.push(
                parse_rational(tok)
                    .map_err(|e| InputError::at(line_no, column, format!("bad rational {tok:?}: {e}")))?,
            );
        }
        if q.is_empty() {
            continue;
        }
        match dim {
            None => dim = Some(q.len()),
            Some(d) if d != q.len() => {
                return Err(InputError::at(line_no, 1, format!("expected {d} entries, found {}", q.len())));
            }
            _ => {}
        }
        out.push(Ray::new(&q).map_err(|e| InputError::at(line_no, 1, e.to_string()))?);
    }
    if out.is_empty() {
        return Err(InputError::plain("no circles given"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRI: &str = r#"{"format": "tame-region/1", "n": 3,
        "components": [{"vrep": [["1","0","0"],["0","1","0"],["0","0","1"]], "open": true}],
        "label": "octant"}"#;

    #[test]
    fn round_trip() {
        let r = parse_region(TRI).unwrap();
        let again = parse_region(&region_to_json(&r)).unwrap();
        assert_eq!(r, again);
        assert_eq!(again.label.as_deref(), Some("octant"));
    }

    #[test]
    fn rejects_other_versions_with_position() {
        let e = parse_region(&TRI.replace("tame-region/1", "tame-region/2")).unwrap_err();
        assert_eq!(e.line, Some(1));
        assert!(e.message.contains("unsupported format"));
    }

    #[test]
    fn bad_rational_has_position() {
        let e = parse_region(&TRI.replace("\"0\",\"0\",\"1\"", "\"0\",\"x/2\",\"1\"")).unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.column.is_some());
    }

    #[test]
    fn circles_file() {
        let c = parse_circles("# four circles\n1 1 1\n1,-1,-1\n-1 1 -1\n1/2 1/2 -1/2\n").unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c[3], Ray::from_ints(&[1, 1, -1]).unwrap());
        let e = parse_circles("1 0 0\n0 1 q\n").unwrap_err();
        assert_eq!((e.line, e.column), (Some(2), Some(5)));
    }
}
