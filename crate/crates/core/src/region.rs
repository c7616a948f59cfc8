//! Open polyhedral regions of the sphere.
//!
//! A [`Region`] is a finite list of pairwise disjoint, full-dimensional open
//! cones. The set it denotes is the *regularized* union: the interior of the
//! closure of the cells, so two cells sharing a facet describe a single open
//! set that includes the relative interior of that facet.
//!
//! Set algebra works by convex subtraction: an open convex cell minus a
//! closed cone `{a_1 >= 0, ..., a_k >= 0}` splits into the open pieces
//! `{a_1 > 0, ..., a_{j-1} > 0, a_j < 0}`. Lower-dimensional leftovers are
//! dropped, which is exactly regularization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::arrangement::Arrangement;
use crate::cone::Cone;
use crate::exact::{Rational, Ray};
use crate::lp::{self, Rows};
use crate::tameness::{self, BalancedWitness};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    n: usize,
    cells: Vec<Cone>,
    pub label: Option<String>,
}

/// Strictly feasible point of `strict > 0, eq = 0`, if any.
pub(crate) fn strict_point(n: usize, strict: &[Vec<Rational>], eq: &[Vec<Rational>]) -> Option<Ray> {
    if strict.is_empty() && eq.is_empty() {
        return Some(Ray::basis(n, 0));
    }
    let alt = lp::motzkin(Rows { dim: n, strict, weak: &[], eq });
    alt.solution().and_then(|x| Ray::new(&x).ok())
}

/// Do the interiors of two full-dimensional cones meet?
pub fn interiors_meet(a: &Cone, b: &Cone) -> bool {
    let mut rows = a.rows();
    rows.extend(b.rows());
    strict_point(a.dim(), &rows, &[]).is_some()
}

/// Open pieces of `cell` outside the closed cone `closed`.
pub fn subtract(cell: &Cone, closed: &Cone) -> Vec<Cone> {
    if !closed.is_fulldim() || !interiors_meet(cell, closed) {
        return vec![cell.clone()];
    }
    if closed.contains_cone(cell) {
        return Vec::new();
    }
    let base = cell.rows();
    let mut pieces = Vec::new();
    let mut kept: Vec<Ray> = Vec::new();
    for a in closed.hrep() {
        if cell.vrep().iter().all(|g| !a.dot(g).is_negative()) {
            // The whole cell is on the nonnegative side of this facet.
            kept.push(a.clone());
            continue;
        }
        let mut rows = base.clone();
        rows.extend(kept.iter().map(Ray::to_rationals));
        rows.push(a.neg().to_rationals());
        if strict_point(cell.dim(), &rows, &[]).is_some() {
            let mut normals: Vec<Ray> = cell.hrep().to_vec();
            normals.extend(kept.iter().cloned());
            normals.push(a.neg());
            pieces.push(Cone::from_hrep(cell.dim(), &normals).expect("dimensions agree"));
        }
        kept.push(a.clone());
    }
    pieces
}

pub(crate) fn subtract_all(mut cells: Vec<Cone>, closed: &[Cone]) -> Vec<Cone> {
    for c in closed {
        if cells.is_empty() {
            break;
        }
        cells = cells.iter().flat_map(|cell| subtract(cell, c)).collect();
    }
    cells
}

/// Does the union of the closed cones cover the interior of `cell`?
pub(crate) fn covers(cell: &Cone, closed: &[Cone]) -> bool {
    subtract_all(vec![cell.clone()], closed).is_empty()
}

/// Do two disjoint open cells share a codimension-one piece of boundary?
pub fn cells_adjacent(a: &Cone, b: &Cone) -> bool {
    for f in a.hrep() {
        let g = f.neg();
        if !b.hrep().contains(&g) {
            continue;
        }
        let mut strict: Vec<Vec<Rational>> =
            a.hrep().iter().filter(|r| *r != f).map(Ray::to_rationals).collect();
        strict.extend(b.hrep().iter().filter(|r| **r != g).map(Ray::to_rationals));
        if strict_point(a.dim(), &strict, &[f.to_rationals()]).is_some() {
            return true;
        }
    }
    false
}

impl Region {
    /// Builds a region from disjoint open cells, checking the invariants.
    pub fn new(n: usize, cells: Vec<Cone>) -> Result<Region, Error> {
        for c in &cells {
            if c.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
            }
            if !c.is_fulldim() {
                return Err(Error::NotFullDimensional("region cells must be open and full-dimensional".into()));
            }
        }
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                if interiors_meet(a, b) {
                    return Err(Error::InvalidInput("region cells overlap".into()));
                }
            }
        }
        Ok(Region { n, cells, label: None })
    }

    pub(crate) fn from_disjoint(n: usize, cells: Vec<Cone>) -> Region {
        Region { n, cells, label: None }
    }

    /// Regularized union of possibly overlapping open cones.
    pub fn from_cones(n: usize, cones: impl IntoIterator<Item = Cone>) -> Region {
        let mut cells: Vec<Cone> = Vec::new();
        for c in cones {
            let pieces = subtract_all(vec![c], &cells);
            cells.extend(pieces);
        }
        Region::from_disjoint(n, cells).simplified()
    }

    pub fn empty(n: usize) -> Region {
        Region::from_disjoint(n, Vec::new())
    }

    pub fn whole(n: usize) -> Region {
        Region::from_disjoint(n, vec![Cone::whole(n)])
    }

    /// The open hemisphere `{x : v . x > 0}`.
    pub fn hemisphere(v: &Ray) -> Region {
        Region::from_disjoint(v.dim(), vec![Cone::halfspace(v)])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Region {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cone] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn antipode(&self) -> Region {
        let mut cells: Vec<Cone> = self.cells.iter().map(Cone::neg).collect();
        cells.sort();
        Region { n: self.n, cells, label: self.label.clone() }
    }

    /// Membership in the regularized open set.
    pub fn contains(&self, x: &Ray) -> bool {
        // Tangent cones at x of every cell whose closure holds x.
        let mut tangent: Vec<Cone> = Vec::new();
        for c in &self.cells {
            if c.contains_open(x) {
                return true;
            }
            if !c.contains_closed(x) {
                continue;
            }
            let active: Vec<Ray> = c.hrep().iter().filter(|a| a.dot(x).is_zero()).cloned().collect();
            tangent.push(Cone::from_hrep(self.n, &active).expect("dimensions agree"));
        }
        !tangent.is_empty() && covers(&Cone::whole(self.n), &tangent)
    }

    pub fn contains_closure(&self, x: &Ray) -> bool {
        self.cells.iter().any(|c| c.contains_closed(x))
    }

    /// Is `other` contained in this region (as regular open sets)?
    pub fn contains_region(&self, other: &Region) -> bool {
        other.cells.iter().all(|c| covers(c, &self.cells))
    }

    pub fn same_set(&self, other: &Region) -> bool {
        self.n == other.n && self.contains_region(other) && other.contains_region(self)
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut cells = self.cells.clone();
        for c in &other.cells {
            let pieces = subtract_all(vec![c.clone()], &cells);
            cells.extend(pieces);
        }
        Region::from_disjoint(self.n, cells).simplified()
    }

    pub fn difference(&self, other: &Region) -> Region {
        Region::from_disjoint(self.n, subtract_all(self.cells.clone(), &other.cells)).simplified()
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                if interiors_meet(a, b) {
                    let mut normals = a.hrep().to_vec();
                    normals.extend(b.hrep().iter().cloned());
                    cells.push(Cone::from_hrep(self.n, &normals).expect("dimensions agree"));
                }
            }
        }
        Region::from_disjoint(self.n, cells).simplified()
    }

    pub fn complement(&self) -> Region {
        Region::whole(self.n).difference(self)
    }

    /// Cell indices grouped into connected components (codimension-one
    /// adjacency of closures), in order of their first cell.
    pub fn component_indices(&self) -> Vec<Vec<usize>> {
        let k = self.cells.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut j = i;
            while p[j] != r {
                let next = p[j];
                p[j] = r;
                j = next;
            }
            r
        }
        for i in 0..k {
            for j in i + 1..k {
                if find(&mut parent, i) != find(&mut parent, j) && cells_adjacent(&self.cells[i], &self.cells[j]) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..k {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    pub fn components(&self) -> Vec<Region> {
        self.component_indices()
            .into_iter()
            .map(|idx| Region::from_disjoint(self.n, idx.into_iter().map(|i| self.cells[i].clone()).collect()))
            .collect()
    }

    pub fn component_count(&self) -> usize {
        self.component_indices().len()
    }

    /// Closed conic hull of all cells.
    pub fn closed_hull(&self) -> Result<Cone, Error> {
        let gens: Vec<Ray> = self.cells.iter().flat_map(|c| c.vrep().iter().cloned()).collect();
        Cone::from_vrep(self.n, &gens)
    }

    /// Is the closure of the region convex (a single closed cone)?
    pub fn convex_closure(&self) -> Option<Cone> {
        if self.cells.is_empty() {
            return None;
        }
        if self.cells.len() == 1 {
            return Some(self.cells[0].clone());
        }
        let hull = self.closed_hull().ok()?;
        if hull.is_fulldim() && covers(&hull, &self.cells) {
            Some(hull)
        } else {
            None
        }
    }

    /// Merges cells into as few convex pieces as possible and sorts them.
    /// The denoted set does not change.
    pub fn simplified(&self) -> Region {
        let mut out: Vec<Cone> = Vec::new();
        for comp in self.components() {
            if let Some(h) = comp.convex_closure() {
                out.push(h);
                continue;
            }
            let mut cells = comp.cells;
            'merge: loop {
                for i in 0..cells.len() {
                    for j in i + 1..cells.len() {
                        if !cells_adjacent(&cells[i], &cells[j]) {
                            continue;
                        }
                        let pair = Region::from_disjoint(self.n, vec![cells[i].clone(), cells[j].clone()]);
                        if let Some(h) = pair.convex_closure() {
                            cells.remove(j);
                            cells[i] = h;
                            continue 'merge;
                        }
                    }
                }
                break;
            }
            out.extend(cells);
        }
        out.sort();
        Region { n: self.n, cells: out, label: self.label.clone() }
    }

    /// One interior ray per component.
    pub fn representatives(&self) -> Vec<Ray> {
        self.component_indices()
            .into_iter()
            .map(|idx| self.cells[idx[0]].interior_point().expect("cells are full-dimensional"))
            .collect()
    }

    /// Distinct great circles (unoriented normals) bounding the cells.
    pub fn bounding_normals(&self) -> Vec<Ray> {
        let set: BTreeSet<Ray> = self
            .cells
            .iter()
            .flat_map(|c| c.hrep().iter().map(Ray::unoriented))
            .collect();
        set.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BooleanOp {
    Union,
    Intersection,
    Difference,
}

/// Boolean operation on regions of the 2-sphere, evaluated on the overlay
/// arrangement of every bounding great circle.
pub fn boolean_ops(a: &Region, b: &Region, op: BooleanOp) -> Result<Region, Error> {
    if a.n != 3 {
        return Err(Error::UnsupportedDimension(a.n));
    }
    if b.n != 3 {
        return Err(Error::UnsupportedDimension(b.n));
    }
    let mut normals: BTreeSet<Ray> = a.bounding_normals().into_iter().collect();
    normals.extend(b.bounding_normals());
    let normals: Vec<Ray> = normals.into_iter().collect();
    let arr = Arrangement::build(&normals)?;
    let faces = arr.faces().iter().filter(|f| {
        let p = &f.interior;
        let in_a = a.cells.iter().any(|c| c.contains_open(p));
        let in_b = b.cells.iter().any(|c| c.contains_open(p));
        match op {
            BooleanOp::Union => in_a || in_b,
            BooleanOp::Intersection => in_a && in_b,
            BooleanOp::Difference => in_a && !in_b,
        }
    });
    let cells: Vec<Cone> = faces.map(|f| f.cone.clone()).collect();
    Ok(Region::from_disjoint(3, cells).simplified())
}

/// Is some multiset of at most `m` closed cones balanced? Cones with a line
/// are balanced on their own.
pub fn closed_tameness_witness(n: usize, cones: &[Cone], m: usize) -> Option<BalancedWitness> {
    for c in cones {
        if c.has_lineality() {
            let v = c.vrep().iter().find(|g| c.vrep().contains(&g.neg())).expect("line present");
            return Some(BalancedWitness::new(vec![v.clone(), v.neg()], vec![Rational::from_integer(1.into()); 2]));
        }
    }
    let useful: Vec<&Cone> = cones.iter().filter(|c| !c.vrep().is_empty()).collect();
    for k in m.min(useful.len())..=m.min(useful.len()) {
        for multiset in tameness::subsets(useful.len(), k) {
            let nv = n * k;
            let mut weak = Vec::new();
            let mut strict = vec![vec![Rational::zero(); nv]];
            for (slot, &ci) in multiset.iter().enumerate() {
                let c = useful[ci];
                for a in c.hrep() {
                    let mut row = vec![Rational::zero(); nv];
                    for (t, x) in a.to_rationals().into_iter().enumerate() {
                        row[slot * n + t] = x;
                    }
                    weak.push(row);
                }
                for a in c.extreme_normals() {
                    for (t, x) in a.to_rationals().into_iter().enumerate() {
                        strict[0][slot * n + t] += x;
                    }
                }
            }
            let eq: Vec<Vec<Rational>> = (0..n)
                .map(|t| {
                    let mut row = vec![Rational::zero(); nv];
                    for slot in 0..k {
                        row[slot * n + t] = Rational::from_integer(1.into());
                    }
                    row
                })
                .collect();
            if let Some(x) = lp::motzkin(Rows { dim: nv, strict: &strict, weak: &weak, eq: &eq }).solution() {
                let points: Vec<Ray> = (0..k).filter_map(|s| Ray::new(&x[s * n..(s + 1) * n]).ok()).collect();
                let ones = vec![Rational::from_integer(1.into()); points.len()];
                if let Some(w) = BalancedWitness::from_combination(points, ones) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Open neighbourhood of a closed polyhedral set whose closure is still
/// `m`-tame. Each closed cone is widened by tilting its normals towards an
/// interior direction of the dual cone, halving the tilt until the closure
/// of the widened set certifies as `m`-tame.
pub fn open_thickening(n: usize, closed: &[Cone], m: usize) -> Result<Region, Error> {
    for c in closed {
        if c.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
        }
    }
    if let Some(witness) = closed_tameness_witness(n, closed, m) {
        return Err(Error::NotTame { m, witness });
    }
    let parts: Vec<&Cone> = closed.iter().filter(|c| !c.vrep().is_empty()).collect();
    let mut eps = Rational::new(1.into(), 2.into());
    for _ in 0..40 {
        let mut widened = Vec::new();
        for c in &parts {
            let q: Vec<Rational> = c
                .extreme_normals()
                .iter()
                .fold(vec![Rational::zero(); n], |acc, a| acc.iter().zip(a.to_rationals()).map(|(x, y)| x + y).collect());
            let normals: Vec<Ray> = c
                .hrep()
                .iter()
                .filter_map(|a| {
                    let v: Vec<Rational> = a.to_rationals().iter().zip(&q).map(|(x, y)| x + &eps * y).collect();
                    Ray::new(&v).ok()
                })
                .collect();
            widened.push(Cone::from_hrep(n, &normals)?);
        }
        let ok = widened.iter().all(|w| w.is_fulldim() && !w.has_lineality())
            && closed_tameness_witness(n, &widened, m).is_none();
        if ok {
            return Ok(Region::from_cones(n, widened));
        }
        eps /= Rational::from_integer(2.into());
    }
    Err(Error::Certification("no admissible thickening found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Ray {
        Ray::from_ints(v).unwrap()
    }

    fn octant(s: [i64; 3]) -> Cone {
        Cone::from_hrep(3, &[r(&[s[0], 0, 0]), r(&[0, s[1], 0]), r(&[0, 0, s[2]])]).unwrap()
    }

    #[test]
    fn antipode_is_an_involution() {
        let reg = Region::new(3, vec![octant([1, 1, 1])]).unwrap();
        let anti = reg.antipode();
        assert_eq!(anti.cells()[0].vrep(), &[r(&[-1, 0, 0]), r(&[0, -1, 0]), r(&[0, 0, -1])]);
        assert_eq!(anti.antipode(), reg);
    }

    #[test]
    fn adjacent_octants_form_one_component() {
        let reg = Region::new(3, vec![octant([1, 1, 1]), octant([1, 1, -1]), octant([-1, -1, 1])]).unwrap();
        assert_eq!(reg.component_indices(), vec![vec![0, 1], vec![2]]);
        // Octants meeting along a single ray only are separate components.
        let reg = Region::new(3, vec![octant([1, 1, 1]), octant([-1, -1, 1])]).unwrap();
        assert_eq!(reg.component_count(), 2);
    }

    #[test]
    fn simplification_merges_convex_unions() {
        let reg = Region::new(3, vec![octant([1, 1, 1]), octant([1, 1, -1])]).unwrap();
        let s = reg.simplified();
        assert_eq!(s.cells().len(), 1);
        assert!(s.same_set(&reg));
        assert!(s.contains(&r(&[1, 1, 0])));
        assert!(!reg.cells().iter().any(|c| c.contains_open(&r(&[1, 1, 0]))));
        assert!(reg.contains(&r(&[1, 1, 0])));
    }

    #[test]
    fn shared_vertex_is_not_interior() {
        let reg = Region::new(3, vec![octant([1, 1, 1]), octant([-1, -1, 1])]).unwrap();
        assert!(!reg.contains(&r(&[0, 0, 1])));
        let four = Region::new(3, vec![octant([1, 1, 1]), octant([-1, 1, 1]), octant([1, -1, 1]), octant([-1, -1, 1])])
            .unwrap();
        assert!(four.contains(&r(&[0, 0, 1])));
        assert!(four.simplified().same_set(&Region::hemisphere(&r(&[0, 0, 1]))));
    }

    #[test]
    fn overlapping_cells_are_rejected() {
        let h = Cone::halfspace(&r(&[0, 0, 1]));
        assert!(Region::new(3, vec![octant([1, 1, 1]), h]).is_err());
    }

    #[test]
    fn set_algebra() {
        let upper = Region::hemisphere(&r(&[0, 0, 1]));
        let east = Region::hemisphere(&r(&[1, 0, 0]));
        let lune = upper.intersection(&east);
        assert_eq!(lune.cells().len(), 1);
        assert_eq!(lune.cells()[0].hrep(), &[r(&[0, 0, 1]), r(&[1, 0, 0])]);
        let u = upper.union(&east);
        assert!(u.same_set(&Region::hemisphere(&r(&[0, 0, -1])).complement().union(&east)));
        assert!(upper.union(&upper.complement()).same_set(&Region::whole(3)));
        assert!(upper.difference(&upper).is_empty());
        let via_arr = boolean_ops(&upper, &east, BooleanOp::Intersection).unwrap();
        assert!(via_arr.same_set(&lune));
        let via_arr = boolean_ops(&upper, &east, BooleanOp::Difference).unwrap();
        assert!(via_arr.same_set(&upper.difference(&east)));
        assert!(matches!(
            boolean_ops(&Region::empty(4), &Region::empty(4), BooleanOp::Union),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn thickening_a_point_gives_a_cap() {
        let p = Cone::from_vrep(3, &[r(&[0, 0, 1])]).unwrap();
        let cap = open_thickening(3, &[p], 3).unwrap();
        assert_eq!(cap.component_count(), 1);
        assert!(cap.contains(&r(&[0, 0, 1])));
        assert!(!cap.contains(&r(&[1, 0, 0])));
    }

    #[test]
    fn thickening_a_triangle() {
        let t = Cone::from_vrep(3, &[r(&[1, 0, 4]), r(&[0, 1, 4]), r(&[-1, -1, 4])]).unwrap();
        let reg = open_thickening(3, core::slice::from_ref(&t), 3).unwrap();
        for g in t.vrep() {
            assert!(reg.contains(g));
        }
    }

    #[test]
    fn thickening_rejects_antipodal_closures() {
        let a = Cone::from_vrep(3, &[r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1])]).unwrap();
        let b = Cone::from_vrep(3, &[r(&[-1, 0, 0]), r(&[0, -1, 1]), r(&[0, 1, -1])]).unwrap();
        match open_thickening(3, &[a, b], 2) {
            Err(Error::NotTame { witness, .. }) => assert!(witness.verify()),
            other => panic!("expected a witness, got {other:?}"),
        }
    }
}
