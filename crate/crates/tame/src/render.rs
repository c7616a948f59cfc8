//! Deterministic SVG rendering of regions on the circle and the 2-sphere.
//!
//! Great circles are drawn as exact `circle`/`line` elements in
//! stereographic projection from the south pole. Cell outlines are sampled
//! along their boundary arcs. Coordinates are printed with 9 significant
//! digits and the exact cell data is embedded as comments.

use std::fmt::Write as _;

use tame_core::{Cone, Ray, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// From the south pole onto the equatorial plane.
    Stereographic,
    /// Vertical projection of the northern hemisphere.
    Orthographic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub projection: Projection,
    pub width: u32,
    pub height: u32,
    /// Half-width of the visible window in projected units.
    pub extent: f64,
    pub fill: String,
    pub antipode_fill: Option<String>,
    pub circle_stroke: String,
    pub samples_per_arc: usize,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            projection: Projection::Stereographic,
            width: 600,
            height: 600,
            extent: 3.0,
            fill: "#9a9a9a".into(),
            antipode_fill: None,
            circle_stroke: "#303030".into(),
            samples_per_arc: 48,
        }
    }
}

impl RenderSpec {
    /// Default spec adjusted by a style name: `color`, or anything else for grey.
    pub fn styled(style: Option<&str>) -> RenderSpec {
        let mut s = RenderSpec::default();
        if style == Some("color") {
            s.fill = "#3b7dd8".into();
            s.circle_stroke = "#202020".into();
        }
        s
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("rendering supports n = 2 and n = 3, got n = {0}")]
    UnsupportedDimension(usize),
}

/// A number with 9 significant digits and no trailing zeros.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn to_f64(r: &Ray) -> Vec<f64> {
    let v: Vec<f64> = r.coords().iter().map(|c| c.to_string().parse::<f64>().unwrap_or(0.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

type V3 = [f64; 3];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: V3) -> V3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

fn v3(r: &Ray) -> V3 {
    let v = to_f64(r);
    [v[0], v[1], v[2]]
}

/// Points along the great-circle arc from `p` through `via` to `q`.
fn arc(p: V3, q: V3, via: V3, k: usize) -> Vec<V3> {
    // Orthonormal frame of the plane through p and via.
    let e1 = p;
    let e2 = unit({
        let d = dot(via, e1);
        [via[0] - d * e1[0], via[1] - d * e1[1], via[2] - d * e1[2]]
    });
    let mut end = dot(q, e2).atan2(dot(q, e1));
    let mid = dot(via, e2).atan2(dot(via, e1));
    if end <= mid + 1e-12 {
        end += std::f64::consts::TAU;
    }
    (0..=k)
        .map(|i| {
            let t = end * i as f64 / k as f64;
            let (s, c) = t.sin_cos();
            [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]]
        })
        .collect()
}

/// Closed boundary loops of a 3-dimensional cell, as sampled points.
fn cell_loops(c: &Cone, k: usize) -> Vec<Vec<V3>> {
    let normals: Vec<V3> = c.hrep().iter().map(v3).collect();
    let rays = c.extreme_rays();
    if normals.is_empty() {
        return Vec::new();
    }
    if normals.len() == 1 {
        let a = normals[0];
        let p = unit(cross(a, if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] }));
        let via = unit(cross(a, p));
        return vec![arc(p, p, via, 4 * k)];
    }
    if !c.has_lineality() {
        let pts: Vec<V3> = rays.iter().map(v3).collect();
        let m = unit(pts.iter().fold([0.0; 3], |s, x| [s[0] + x[0], s[1] + x[1], s[2] + x[2]]));
        let e1 = unit(cross(m, if m[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] }));
        let e2 = cross(m, e1);
        let mut sorted: Vec<(f64, V3)> = pts.iter().map(|&x| (dot(x, e2).atan2(dot(x, e1)), x)).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = Vec::new();
        for i in 0..sorted.len() {
            let p = sorted[i].1;
            let q = sorted[(i + 1) % sorted.len()].1;
            let via = unit([p[0] + q[0], p[1] + q[1], p[2] + q[2]]);
            let mut seg = arc(p, q, via, k);
            seg.pop();
            out.extend(seg);
        }
        return vec![out];
    }
    // A lune: two half great circles between the ends of its line.
    let line = c.vrep().iter().find(|r| c.vrep().contains(&r.neg())).map(v3);
    let Some(l) = line else { return Vec::new() };
    let neg = [-l[0], -l[1], -l[2]];
    let mut out = Vec::new();
    for (i, a) in normals.iter().enumerate().take(2) {
        let other = normals[1 - i];
        let mut d = unit(cross(*a, l));
        if dot(d, other) < 0.0 {
            d = [-d[0], -d[1], -d[2]];
        }
        let (p, q) = if i == 0 { (l, neg) } else { (neg, l) };
        let mut seg = arc(p, q, d, 2 * k);
        seg.pop();
        out.extend(seg);
    }
    vec![out]
}

struct Canvas<'a> {
    spec: &'a RenderSpec,
}

impl Canvas<'_> {
    fn project(&self, x: V3) -> (f64, f64) {
        let cap = self.spec.extent * 2.0;
        let (u, v) = match self.spec.projection {
            Projection::Stereographic => {
                let d = 1.0 + x[2];
                if d < 1e-12 {
                    let r = (x[0] * x[0] + x[1] * x[1]).sqrt().max(1e-300);
                    (x[0] / r * cap, x[1] / r * cap)
                } else {
                    (x[0] / d, x[1] / d)
                }
            }
            Projection::Orthographic => {
                if x[2] >= 0.0 {
                    (x[0], x[1])
                } else {
                    let r = (x[0] * x[0] + x[1] * x[1]).sqrt().max(1e-300);
                    (x[0] / r, x[1] / r)
                }
            }
        };
        let r = (u * u + v * v).sqrt();
        if r > cap {
            (u / r * cap, v / r * cap)
        } else {
            (u, v)
        }
    }

    fn path(&self, loops: &[Vec<V3>], contains_pole: bool) -> String {
        let mut d = String::new();
        if contains_pole {
            let c = self.spec.extent * 2.0;
            let _ = write!(d, "M{} {}H{}V{}H{}Z", sig9(-c), sig9(-c), sig9(c), sig9(c), sig9(-c));
        }
        for lp in loops {
            for (i, x) in lp.iter().enumerate() {
                let (u, v) = self.project(*x);
                let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { "L" }, sig9(u), sig9(-v));
            }
            d.push('Z');
        }
        d
    }
}

fn exact_comment(out: &mut String, tag: &str, region: &Region) {
    for (i, c) in region.cells().iter().enumerate() {
        let rows: Vec<String> = c.hrep().iter().map(|r| r.to_string()).collect();
        let _ = writeln!(out, "<!-- {tag} {i} hrep {} -->", rows.join(" "));
    }
}

fn header(spec: &RenderSpec, region: &Region) -> String {
    let e = spec.extent;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        spec.width,
        spec.height,
        sig9(-e),
        sig9(-e),
        sig9(2.0 * e),
        sig9(2.0 * e)
    );
    if let Some(l) = &region.label {
        let clean: String = l.chars().filter(|c| !matches!(c, '<' | '>' | '&')).collect();
        let _ = writeln!(out, "<title>{clean}</title>");
    }
    let _ = writeln!(out, "<!-- n {} cells {} -->", region.dim(), region.cells().len());
    out
}

/// Renders a region of `S^1` or `S^2`.
pub fn render(region: &Region, spec: &RenderSpec) -> Result<String, RenderError> {
    match region.dim() {
        2 => Ok(render_circle(region, spec)),
        3 => Ok(render_sphere(region, spec)),
        n => Err(RenderError::UnsupportedDimension(n)),
    }
}

fn render_sphere(region: &Region, spec: &RenderSpec) -> String {
    let canvas = Canvas { spec };
    let stroke = 2.0 * spec.extent / f64::from(spec.width.max(1));
    let mut out = header(spec, region);
    exact_comment(&mut out, "cell", region);
    let south = Ray::from_ints(&[0, 0, -1]).expect("nonzero");
    let mut layers: Vec<(&Region, &str, &str)> = Vec::new();
    let anti = region.antipode();
    if let Some(f) = &spec.antipode_fill {
        layers.push((&anti, f.as_str(), "antipode"));
    }
    layers.push((region, spec.fill.as_str(), "region"));
    for (reg, fill, class) in layers {
        for c in reg.cells() {
            let loops = cell_loops(c, spec.samples_per_arc);
            let pole = c.contains_open(&south);
            let d = canvas.path(&loops, pole || c.is_whole());
            let _ = writeln!(
                out,
                "<path class=\"{class}\" d=\"{d}\" fill=\"{fill}\" fill-rule=\"evenodd\" stroke=\"none\"/>"
            );
        }
    }
    // Bounding great circles, exactly: a . x = 0 maps to the circle with
    // centre (a1/a3, a2/a3) and squared radius (a1^2 + a2^2)/a3^2 + 1.
    if spec.projection == Projection::Stereographic {
        for a in region.bounding_normals() {
            let _ = writeln!(out, "<!-- circle {a} -->");
            let f = to_f64(&a);
            if a.coords()[2].bits() == 0 {
                let (dx, dy) = (-f[1], f[0]);
                let t = spec.extent * 2.0 / (dx * dx + dy * dy).sqrt();
                let _ = writeln!(
                    out,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
                    sig9(-dx * t),
                    sig9(dy * t),
                    sig9(dx * t),
                    sig9(-dy * t),
                    spec.circle_stroke,
                    sig9(stroke)
                );
            } else {
                let (cx, cy) = (f[0] / f[2], f[1] / f[2]);
                let r = (cx * cx + cy * cy + 1.0).sqrt();
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
                    sig9(cx),
                    sig9(-cy),
                    sig9(r),
                    spec.circle_stroke,
                    sig9(stroke)
                );
            }
        }
        let _ = writeln!(
            out,
            "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
            spec.circle_stroke,
            sig9(stroke),
            sig9(4.0 * stroke),
            sig9(4.0 * stroke)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn render_circle(region: &Region, spec: &RenderSpec) -> String {
    let stroke = 2.0 * spec.extent / f64::from(spec.width.max(1));
    let mut out = header(spec, region);
    exact_comment(&mut out, "arc", region);
    let _ = writeln!(
        out,
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
        spec.circle_stroke,
        sig9(stroke)
    );
    let mut boundary: Vec<Ray> = Vec::new();
    for c in region.cells() {
        let rays = c.extreme_rays();
        let d = if rays.len() == 2 {
            let (p, q) = (to_f64(&rays[0]), to_f64(&rays[1]));
            // Counter-clockwise from p to q when p x q > 0.
            let (p, q) = if p[0] * q[1] - p[1] * q[0] > 0.0 { (p, q) } else { (q, p) };
            format!("M{} {}A1 1 0 0 0 {} {}", sig9(p[0]), sig9(-p[1]), sig9(q[0]), sig9(-q[1]))
        } else {
            // A half circle, starting at a point of its boundary line.
            let a = to_f64(&c.hrep()[0]);
            let p = [a[1], -a[0]];
            format!("M{} {}A1 1 0 0 0 {} {}", sig9(p[0]), sig9(-p[1]), sig9(-p[0]), sig9(p[1]))
        };
        boundary.extend(c.vrep().iter().cloned());
        let _ = writeln!(
            out,
            "<path class=\"region\" d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
            spec.fill,
            sig9(4.0 * stroke)
        );
    }
    boundary.sort();
    boundary.dedup();
    for b in &boundary {
        let p = to_f64(b);
        let _ = writeln!(out, "<!-- point {b} -->");
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
            sig9(p[0]),
            sig9(-p[1]),
            sig9(3.0 * stroke),
            spec.circle_stroke
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(sig9(-0.000123456789123), "-0.000123456789");
        assert_eq!(sig9(12345.6789012), "12345.6789");
    }

    #[test]
    fn hemisphere_is_a_disk() {
        let h = Region::hemisphere(&Ray::from_ints(&[0, 0, 1]).unwrap());
        let svg = render(&h, &RenderSpec::default()).unwrap();
        assert!(svg.contains("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\""));
        assert_eq!(svg, render(&h, &RenderSpec::default()).unwrap());
    }
}
