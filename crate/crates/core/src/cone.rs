//! Polyhedral cones with both descriptions kept in sync.
//!
//! A [`Cone`] is `{x : a . x >= 0 for a in hrep}` and also the set of
//! nonnegative combinations of `vrep`. Lines are stored as opposite pairs in
//! `vrep`, and equations as opposite pairs in `hrep`. Both lists are minimal
//! and sorted, so two equal cones compare equal.
//!
//! The spherical trace of a cone is the set of rays it contains. Following
//! the usual convention for spherical hulls, a hull whose Euclidean convex
//! hull contains the origin is the whole sphere; see [`SphericalHull`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::exact::{null_space, Rational, Ray};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    dim: usize,
    hrep: Vec<Ray>,
    vrep: Vec<Ray>,
    fulldim: bool,
    lineality: bool,
}

/// Generators of `{x : r . x >= 0 for r in rows}`: extreme rays of the
/// pointed part (inside the orthogonal complement of the lineality space)
/// followed by both orientations of a lineality basis.
fn generators(dim: usize, rows: &[Ray]) -> Vec<Ray> {
    let rows: Vec<Ray> = rows.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let qrows: Vec<Vec<Rational>> = rows.iter().map(Ray::to_rationals).collect();
    let lines = null_space(dim, &qrows);
    let mut out: BTreeSet<Ray> = BTreeSet::new();
    for l in &lines {
        let r = Ray::new(l).expect("basis vector is nonzero");
        out.insert(r.neg());
        out.insert(r);
    }
    let pointed_dim = dim - lines.len();
    if pointed_dim == 0 {
        return out.into_iter().collect();
    }
    for subset in qrows.iter().combinations(pointed_dim - 1) {
        let mut m: Vec<Vec<Rational>> = lines.clone();
        m.extend(subset.into_iter().cloned());
        let ns = null_space(dim, &m);
        if ns.len() != 1 {
            continue;
        }
        let r = Ray::new(&ns[0]).expect("null vector is nonzero");
        let signs: Vec<i8> = rows
            .iter()
            .map(|a| {
                let d = a.dot(&r);
                if d.is_positive() {
                    1
                } else if d.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .collect();
        if signs.iter().all(|&s| s >= 0) {
            out.insert(r);
        } else if signs.iter().all(|&s| s <= 0) {
            out.insert(r.neg());
        }
    }
    out.into_iter().collect()
}

fn has_opposite_pair(rays: &[Ray]) -> bool {
    let set: BTreeSet<&Ray> = rays.iter().collect();
    rays.iter().any(|r| set.contains(&r.neg()))
}

fn check(dim: usize, rays: &[Ray]) -> Result<(), Error> {
    if dim == 0 {
        return Err(Error::InvalidInput("cones need ambient dimension >= 1".into()));
    }
    for r in rays {
        if r.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: r.dim() });
        }
    }
    Ok(())
}

impl Cone {
    fn from_canonical_hrep(dim: usize, hrep: Vec<Ray>) -> Cone {
        let vrep = generators(dim, &hrep);
        Cone {
            dim,
            fulldim: !has_opposite_pair(&hrep),
            lineality: has_opposite_pair(&vrep),
            hrep,
            vrep,
        }
    }

    /// Builds the cone `{x : a . x >= 0}` from (possibly redundant) normals.
    pub fn from_hrep(dim: usize, normals: &[Ray]) -> Result<Cone, Error> {
        check(dim, normals)?;
        let vrep = generators(dim, normals);
        let hrep = generators(dim, &vrep);
        Ok(Cone::from_canonical_hrep(dim, hrep))
    }

    /// Builds the conic hull of `gens`.
    pub fn from_vrep(dim: usize, gens: &[Ray]) -> Result<Cone, Error> {
        check(dim, gens)?;
        let hrep = generators(dim, gens);
        Ok(Cone::from_canonical_hrep(dim, hrep))
    }

    /// The whole space, whose spherical trace is the whole sphere.
    pub fn whole(dim: usize) -> Cone {
        Cone::from_canonical_hrep(dim, Vec::new())
    }

    /// The closed half-space `{x : v . x >= 0}`.
    pub fn halfspace(v: &Ray) -> Cone {
        Cone::from_hrep(v.dim(), core::slice::from_ref(v)).expect("ray dimension is consistent")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Minimal normals; the cone is where all of them are nonnegative.
    pub fn hrep(&self) -> &[Ray] {
        &self.hrep
    }

    pub fn vrep(&self) -> &[Ray] {
        &self.vrep
    }

    pub fn is_fulldim(&self) -> bool {
        self.fulldim
    }

    pub fn has_lineality(&self) -> bool {
        self.lineality
    }

    pub fn is_whole(&self) -> bool {
        self.hrep.is_empty()
    }

    /// Pointed generators (those not paired with their negative).
    pub fn extreme_rays(&self) -> Vec<Ray> {
        let set: BTreeSet<&Ray> = self.vrep.iter().collect();
        self.vrep.iter().filter(|r| !set.contains(&r.neg())).cloned().collect()
    }

    pub fn neg(&self) -> Cone {
        let mut hrep: Vec<Ray> = self.hrep.iter().map(Ray::neg).collect();
        let mut vrep: Vec<Ray> = self.vrep.iter().map(Ray::neg).collect();
        hrep.sort();
        vrep.sort();
        Cone { dim: self.dim, hrep, vrep, fulldim: self.fulldim, lineality: self.lineality }
    }

    /// Closed membership.
    pub fn contains_closed(&self, x: &Ray) -> bool {
        self.hrep.iter().all(|a| !a.dot(x).is_negative())
    }

    /// Relative-interior membership: equations hold, every other normal is
    /// strictly positive.
    pub fn contains_open(&self, x: &Ray) -> bool {
        let set: BTreeSet<&Ray> = self.hrep.iter().collect();
        self.hrep.iter().all(|a| {
            let d = a.dot(x);
            if set.contains(&a.neg()) {
                d.is_zero()
            } else {
                d.is_positive()
            }
        })
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.vrep.iter().all(|g| self.contains_closed(g))
    }

    /// A rational ray strictly inside the cone: the sum of its extreme
    /// generators.
    pub fn interior_point(&self) -> Result<Ray, Error> {
        if !self.fulldim {
            return Err(Error::NotFullDimensional(format!(
                "cone spans a proper subspace ({} equations)",
                self.hrep.len() - self.extreme_normals().len()
            )));
        }
        let sum = self
            .extreme_rays()
            .into_iter()
            .reduce(|a, b| a.add(&b).expect("pointed generators never cancel"));
        let p = sum.unwrap_or_else(|| Ray::basis(self.dim, 0));
        debug_assert!(self.contains_open(&p));
        Ok(p)
    }

    /// Normals that are not half of an equation pair.
    pub fn extreme_normals(&self) -> Vec<Ray> {
        let set: BTreeSet<&Ray> = self.hrep.iter().collect();
        self.hrep.iter().filter(|r| !set.contains(&r.neg())).cloned().collect()
    }

    pub(crate) fn rows(&self) -> Vec<Vec<Rational>> {
        self.hrep.iter().map(Ray::to_rationals).collect()
    }
}

/// Double description: generators of the cone cut out by `normals`.
pub fn hrep_to_vrep(dim: usize, normals: &[Ray]) -> Result<Cone, Error> {
    if normals.iter().any(|n| n.coords().iter().all(Zero::is_zero)) {
        return Err(Error::ZeroVector);
    }
    Cone::from_hrep(dim, normals)
}

/// Double description: minimal normals of the conic hull of `gens`.
pub fn vrep_to_hrep(dim: usize, gens: &[Ray]) -> Result<Cone, Error> {
    Cone::from_vrep(dim, gens)
}

/// Closed conic hull of two cones.
pub fn minkowski_sum(a: &Cone, b: &Cone) -> Result<Cone, Error> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    let gens: Vec<Ray> = a.vrep.iter().chain(&b.vrep).cloned().collect();
    Cone::from_vrep(a.dim, &gens)
}

/// Spherical trace of a conic hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SphericalHull {
    /// The generators are balanced: the hull is the whole sphere.
    WholeSphere,
    Cone(Cone),
}

impl SphericalHull {
    pub fn of_cone(c: Cone) -> SphericalHull {
        if c.has_lineality() {
            SphericalHull::WholeSphere
        } else {
            SphericalHull::Cone(c)
        }
    }
}

/// Spherical hull of the union of several cones.
pub fn spherical_hull(cones: &[&Cone]) -> Result<SphericalHull, Error> {
    let Some(first) = cones.first() else {
        return Err(Error::InvalidInput("hull of nothing".into()));
    };
    let mut gens = Vec::new();
    for c in cones {
        if c.dim != first.dim {
            return Err(Error::DimensionMismatch { expected: first.dim, found: c.dim });
        }
        gens.extend(c.vrep.iter().cloned());
    }
    Ok(SphericalHull::of_cone(Cone::from_vrep(first.dim, &gens)?))
}

/// A cone together with an openness flag. Open cells are relatively open.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub cone: Cone,
    pub open: bool,
}

impl Cell {
    pub fn open(cone: Cone) -> Cell {
        Cell { cone, open: true }
    }

    pub fn closed(cone: Cone) -> Cell {
        Cell { cone, open: false }
    }

    pub fn contains(&self, x: &Ray) -> bool {
        if self.open {
            self.cone.contains_open(x)
        } else {
            self.cone.contains_closed(x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Ray {
        Ray::from_ints(v).unwrap()
    }

    #[test]
    fn octant_is_self_dual() {
        let c = Cone::from_hrep(3, &[r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1])]).unwrap();
        assert_eq!(c.vrep(), &[r(&[0, 0, 1]), r(&[0, 1, 0]), r(&[1, 0, 0])]);
        assert!(c.is_fulldim());
        assert!(!c.has_lineality());
        assert_eq!(c.interior_point().unwrap(), r(&[1, 1, 1]));
    }

    #[test]
    fn line_in_generators() {
        let c = Cone::from_vrep(3, &[r(&[1, 0, 0]), r(&[-1, 0, 0]), r(&[0, 1, 0])]).unwrap();
        assert!(c.has_lineality());
        assert!(!c.is_fulldim());
        assert!(c.contains_closed(&r(&[-5, 2, 0])));
        assert!(!c.contains_closed(&r(&[0, 1, 1])));
    }

    #[test]
    fn redundant_normals_are_dropped() {
        let c = Cone::from_hrep(
            3,
            &[r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1]), r(&[1, 1, 0]), r(&[2, 0, 0])],
        )
        .unwrap();
        assert_eq!(c.hrep().len(), 3);
    }

    #[test]
    fn sum_is_idempotent_and_antipodes_fill_the_sphere() {
        let c = Cone::from_hrep(3, &[r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[1, 1, 1])]).unwrap();
        assert_eq!(minkowski_sum(&c, &c).unwrap(), c);
        let a = Cone::from_vrep(3, &[r(&[1, 0, 0])]).unwrap();
        let b = Cone::from_vrep(3, &[r(&[-1, 0, 0])]).unwrap();
        let s = minkowski_sum(&a, &b).unwrap();
        assert!(s.has_lineality());
        assert_eq!(spherical_hull(&[&a, &b]).unwrap(), SphericalHull::WholeSphere);
    }

    #[test]
    fn open_and_closed_membership() {
        let c = Cone::from_hrep(3, &[r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1])]).unwrap();
        let open = Cell::open(c.clone());
        let closed = Cell::closed(c);
        assert!(open.contains(&r(&[1, 1, 1])));
        assert!(!open.contains(&r(&[1, 0, 0])));
        assert!(closed.contains(&r(&[1, 0, 0])));
    }

    #[test]
    fn interior_point_needs_full_dimension() {
        let c = Cone::from_vrep(3, &[r(&[1, 0, 0]), r(&[0, 1, 0])]).unwrap();
        assert!(matches!(c.interior_point(), Err(Error::NotFullDimensional(_))));
        // A single point of the sphere is cut out by equations plus one normal.
        let p = Cone::from_vrep(3, &[r(&[0, 0, 1])]).unwrap();
        assert_eq!(p.hrep().len(), 5);
        assert!(Cell::open(p).contains(&r(&[0, 0, 7])));
    }

    #[test]
    fn whole_space_and_halfspace() {
        let w = Cone::whole(3);
        assert!(w.is_whole() && w.has_lineality() && w.is_fulldim());
        let h = Cone::halfspace(&r(&[0, 0, 1]));
        assert_eq!(h.interior_point().unwrap(), r(&[0, 0, 1]));
        assert!(h.has_lineality());
    }
}
