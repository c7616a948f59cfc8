//! Arrangements of great circles on the 2-sphere.
//!
//! Vertices are the normalized cross products of pairs of normals, taken
//! with both orientations and deduplicated, so concurrent circles need no
//! special treatment. Each circle is cut at the vertices lying on it, ordered
//! by angle, into arcs. Faces are read off from the two sides of every arc:
//! a face is identified by its strict sign vector over all circles.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cone::Cone;
use crate::exact::{det3, Ray};
use crate::region::{interiors_meet, Region};
use crate::tameness::{is_m_tame, TamenessVerdict};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GreatCircle {
    normal: Ray,
}

impl GreatCircle {
    pub fn new(normal: &Ray) -> Result<GreatCircle, Error> {
        if normal.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: normal.dim() });
        }
        Ok(GreatCircle { normal: normal.unoriented() })
    }

    pub fn normal(&self) -> &Ray {
        &self.normal
    }
}

/// An arc of a circle between consecutive vertices (counterclockwise about
/// the circle normal). A circle without vertices is a single closed edge.
#[derive(Clone, Debug)]
pub struct Edge {
    pub circle: usize,
    pub start: Option<usize>,
    pub end: Option<usize>,
    pub midpoint: Ray,
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Sign of `normal . x` on the face, per circle.
    pub signs: Vec<i8>,
    pub cone: Cone,
    pub interior: Ray,
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feature {
    Face(usize),
    Edge(usize),
    Vertex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub triangles: usize,
    pub quads: usize,
    pub face_edge_counts: Vec<usize>,
    pub euler_ok: bool,
}

impl core::fmt::Display for ArrangementStats {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "V={} E={} F={} triangles={} quads={}",
            self.vertices, self.edges, self.faces, self.triangles, self.quads
        )
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    circles: Vec<GreatCircle>,
    vertices: Vec<Ray>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    vertex_index: BTreeMap<Ray, usize>,
    edge_index: BTreeMap<Vec<i8>, usize>,
    face_index: BTreeMap<Vec<i8>, usize>,
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Counterclockwise order about `n`, starting from `p0`.
fn angular_cmp(n: &Ray, p0: &Ray, a: &Ray, b: &Ray) -> Ordering {
    let upper = |v: &Ray| {
        let d = det3(n, p0, v);
        d.is_positive() || (d.is_zero() && p0.dot(v).is_positive())
    };
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let d = det3(n, a, b);
            if d.is_positive() {
                Ordering::Less
            } else if d.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
    }
}

/// Some ray on the circle with normal `n`.
fn point_on(n: &Ray) -> Ray {
    (0..3)
        .find_map(|k| n.cross(&Ray::basis(3, k)))
        .expect("a nonzero normal is parallel to at most one axis")
}

impl Arrangement {
    pub fn build(normals: &[Ray]) -> Result<Arrangement, Error> {
        let mut circles = Vec::with_capacity(normals.len());
        let mut seen = BTreeSet::new();
        for (i, n) in normals.iter().enumerate() {
            let c = GreatCircle::new(n)?;
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidInput(format!("circle {} duplicates an earlier circle", i + 1)));
            }
            circles.push(c);
        }
        let k = circles.len();

        let mut vset: BTreeSet<Ray> = BTreeSet::new();
        for i in 0..k {
            for j in i + 1..k {
                let v = circles[i].normal.cross(&circles[j].normal).expect("distinct circles");
                vset.insert(v.neg());
                vset.insert(v);
            }
        }
        let vertices: Vec<Ray> = vset.into_iter().collect();
        let vertex_index: BTreeMap<Ray, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();

        let signs_at = |x: &Ray| -> Vec<i8> { circles.iter().map(|c| sign(&c.normal.dot(x))).collect() };

        let mut edges = Vec::new();
        for (ci, c) in circles.iter().enumerate() {
            let n = &c.normal;
            let mut on: Vec<usize> = (0..vertices.len()).filter(|&v| n.dot(&vertices[v]).is_zero()).collect();
            if on.is_empty() {
                edges.push(Edge { circle: ci, start: None, end: None, midpoint: point_on(n) });
                continue;
            }
            let p0 = vertices[on[0]].clone();
            on.sort_by(|&a, &b| angular_cmp(n, &p0, &vertices[a], &vertices[b]));
            for t in 0..on.len() {
                let (a, b) = (on[t], on[(t + 1) % on.len()]);
                let (p, q) = (&vertices[a], &vertices[b]);
                let midpoint = match p.add(q) {
                    Some(m) => m,
                    None => n.cross(p).expect("vertex lies on the circle"),
                };
                edges.push(Edge { circle: ci, start: Some(a), end: Some(b), midpoint });
            }
        }
        let edge_index: BTreeMap<Vec<i8>, usize> =
            edges.iter().enumerate().map(|(i, e)| (signs_at(&e.midpoint), i)).collect();

        let mut face_edges: BTreeMap<Vec<i8>, Vec<usize>> = BTreeMap::new();
        for (ei, e) in edges.iter().enumerate() {
            let base = signs_at(&e.midpoint);
            for s in [1i8, -1] {
                let mut sv = base.clone();
                sv[e.circle] = s;
                face_edges.entry(sv).or_default().push(ei);
            }
        }
        if k == 0 {
            face_edges.insert(Vec::new(), Vec::new());
        }
        let mut faces = Vec::with_capacity(face_edges.len());
        for (signs, fe) in face_edges {
            let hrep: Vec<Ray> = circles
                .iter()
                .zip(&signs)
                .map(|(c, &s)| if s > 0 { c.normal.clone() } else { c.normal.neg() })
                .collect();
            let cone = Cone::from_hrep(3, &hrep)?;
            let interior = cone.interior_point()?;
            let vs: BTreeSet<usize> = fe.iter().flat_map(|&e| [edges[e].start, edges[e].end]).flatten().collect();
            faces.push(Face { signs, cone, interior, edges: fe, vertices: vs.into_iter().collect() });
        }
        let face_index = faces.iter().enumerate().map(|(i, f)| (f.signs.clone(), i)).collect();

        Ok(Arrangement { circles, vertices, edges, faces, vertex_index, edge_index, face_index })
    }

    pub fn circles(&self) -> &[GreatCircle] {
        &self.circles
    }

    pub fn vertices(&self) -> &[Ray] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn signs(&self, x: &Ray) -> Vec<i8> {
        self.circles.iter().map(|c| sign(&c.normal.dot(x))).collect()
    }

    /// The feature whose relative interior contains `x`.
    pub fn locate(&self, x: &Ray) -> Result<Feature, Error> {
        if x.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: x.dim() });
        }
        let s = self.signs(x);
        let zeros = s.iter().filter(|&&v| v == 0).count();
        let found = match zeros {
            0 => self.face_index.get(&s).map(|&i| Feature::Face(i)),
            1 => self.edge_index.get(&s).map(|&i| Feature::Edge(i)),
            _ => self.vertex_index.get(x).map(|&i| Feature::Vertex(i)),
        };
        found.ok_or_else(|| Error::Invariant(format!("point {x} not covered by the arrangement")))
    }

    pub fn stats(&self) -> ArrangementStats {
        let counts: Vec<usize> = self.faces.iter().map(|f| f.edges.len()).collect();
        let (v, e, f) = (self.vertices.len(), self.edges.len(), self.faces.len());
        let euler_ok = if v == 0 { e == self.circles.len() && f == e + 1 } else { v + f == e + 2 };
        ArrangementStats {
            vertices: v,
            edges: e,
            faces: f,
            triangles: counts.iter().filter(|&&c| c == 3).count(),
            quads: counts.iter().filter(|&&c| c == 4).count(),
            face_edge_counts: counts,
            euler_ok,
        }
    }

    /// Union of the faces meeting `seed`, checked for 3-tameness.
    pub fn coarsen_to_region(&self, seed: &Region) -> Result<Region, Error> {
        if seed.dim() != 3 {
            return Err(Error::UnsupportedDimension(seed.dim()));
        }
        let cells: Vec<Cone> = self
            .faces
            .iter()
            .filter(|f| seed.cells().iter().any(|c| interiors_meet(&f.cone, c)))
            .map(|f| f.cone.clone())
            .collect();
        let out = Region::from_disjoint(3, cells).simplified();
        match is_m_tame(&out, 3) {
            TamenessVerdict::NotTame { m, witness } => Err(Error::NotTame { m, witness }),
            TamenessVerdict::Tame { .. } => Ok(out),
        }
    }
}

/// Faces as a region (used for tests and rendering).
pub fn faces_region(arr: &Arrangement, which: &[usize]) -> Region {
    Region::from_disjoint(3, which.iter().map(|&i| arr.faces[i].cone.clone()).collect())
}
