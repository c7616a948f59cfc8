//! Balancedness, tameness, hulls and addable sets.
//!
//! A finite set is balanced when the origin lies in its convex hull. For
//! open convex cells `K_1, ..., K_k` some choice of one point per cell is
//! balanced exactly when `0` lies in the open Minkowski sum, so tameness of
//! a region reduces to finitely many strict feasibility problems. Taking a
//! cell twice never helps (`K + K = K`), and a balanced family stays
//! balanced when cells are added, so only families of exactly
//! `min(m, #cells)` distinct cells need to be examined.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::arrangement::Arrangement;
use crate::cone::Cone;
use crate::exact::{Rational, Ray};
use crate::lp::{self, Alternative, Rows};
use crate::region::{subtract_all, Region};
use crate::Error;

/// Positive weights on distinct rays that sum to the zero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedWitness {
    points: Vec<Ray>,
    coefficients: Vec<Rational>,
}

impl BalancedWitness {
    pub fn new(points: Vec<Ray>, coefficients: Vec<Rational>) -> BalancedWitness {
        BalancedWitness { points, coefficients }
    }

    /// Merges repeated rays and drops zero weights.
    pub fn from_combination(points: Vec<Ray>, coefficients: Vec<Rational>) -> Option<BalancedWitness> {
        let mut merged: Vec<(Ray, Rational)> = Vec::new();
        for (p, c) in points.into_iter().zip(coefficients) {
            if c.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, w)) => *w += c,
                None => merged.push((p, c)),
            }
        }
        if merged.is_empty() {
            return None;
        }
        let (points, coefficients) = merged.into_iter().unzip();
        Some(BalancedWitness { points, coefficients })
    }

    /// Builds a witness from vectors summing to zero (zero vectors skipped).
    pub fn from_vectors(vectors: &[Vec<Rational>]) -> Option<BalancedWitness> {
        let mut points = Vec::new();
        let mut coeffs = Vec::new();
        for v in vectors {
            let Ok(r) = Ray::new(v) else { continue };
            let q = r.to_rationals();
            let k = q.iter().position(|x| !x.is_zero()).expect("ray is nonzero");
            coeffs.push(&v[k] / &q[k]);
            points.push(r);
        }
        BalancedWitness::from_combination(points, coeffs)
    }

    pub fn points(&self) -> &[Ray] {
        &self.points
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exact check: distinct rays, positive weights, zero sum.
    pub fn verify(&self) -> bool {
        if self.points.is_empty() || self.points.len() != self.coefficients.len() {
            return false;
        }
        if self.coefficients.iter().any(|c| !c.is_positive()) {
            return false;
        }
        if self.points.iter().tuple_combinations().any(|(a, b)| a == b) {
            return false;
        }
        let n = self.points[0].dim();
        if self.points.iter().any(|p| p.dim() != n) {
            return false;
        }
        let mut sum = vec![Rational::zero(); n];
        for (p, c) in self.points.iter().zip(&self.coefficients) {
            for (s, x) in sum.iter_mut().zip(p.to_rationals()) {
                *s += c * x;
            }
        }
        sum.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for BalancedWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, c)) in self.points.iter().zip(&self.coefficients).enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{p}")?;
        }
        f.write_str(" = 0")
    }
}

/// An open hemisphere `{x : normal . x > 0}` containing the listed cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HemisphereWitness {
    pub cells: Vec<usize>,
    pub normal: Ray,
}

impl HemisphereWitness {
    pub fn verify(&self, region: &Region) -> bool {
        self.cells.iter().all(|&i| {
            region.cells().get(i).is_some_and(|c| c.vrep().iter().all(|g| !self.normal.dot(g).is_negative()))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TamenessVerdict {
    Tame { m: usize, hemispheres: Vec<HemisphereWitness> },
    NotTame { m: usize, witness: BalancedWitness },
}

impl TamenessVerdict {
    pub fn is_tame(&self) -> bool {
        matches!(self, TamenessVerdict::Tame { .. })
    }

    pub fn witness(&self) -> Option<&BalancedWitness> {
        match self {
            TamenessVerdict::NotTame { witness, .. } => Some(witness),
            TamenessVerdict::Tame { .. } => None,
        }
    }

    /// Re-checks every witness by substitution.
    pub fn verify(&self, region: &Region) -> bool {
        match self {
            TamenessVerdict::Tame { hemispheres, .. } => hemispheres.iter().all(|h| h.verify(region)),
            TamenessVerdict::NotTame { m, witness } => {
                witness.verify()
                    && witness.len() <= *m
                    && witness.points().iter().all(|p| region.cells().iter().any(|c| c.contains_open(p)))
            }
        }
    }
}

pub(crate) fn subsets(k: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..k).combinations(size)
}

fn gordan(points: &[Ray]) -> Alternative {
    let n = points[0].dim();
    let rows: Vec<Vec<Rational>> = points.iter().map(Ray::to_rationals).collect();
    lp::motzkin(Rows { dim: n, strict: &rows, weak: &[], eq: &[] })
}

/// A witness that the origin is in the convex hull of `points`, if it is.
pub fn is_balanced(points: &[Ray]) -> Option<BalancedWitness> {
    if points.is_empty() {
        return None;
    }
    match gordan(points) {
        Alternative::Solution(_) => None,
        Alternative::Certificate { strict, .. } => BalancedWitness::from_combination(points.to_vec(), strict),
    }
}

/// A normal `v` with `v . x > 0` for every input, if the set is not balanced.
pub fn hemisphere_witness(points: &[Ray]) -> Option<Ray> {
    if points.is_empty() {
        return None;
    }
    gordan(points).solution().and_then(|x| Ray::new(&x).ok())
}

/// Either balanced points, one inside each cell, or a hemisphere normal
/// containing every cell.
fn open_sum_test(n: usize, cells: &[&Cone]) -> Result<Ray, BalancedWitness> {
    let k = cells.len();
    let nv = n * k;
    let mut strict = Vec::new();
    for (slot, c) in cells.iter().enumerate() {
        for a in c.hrep() {
            let mut row = vec![Rational::zero(); nv];
            for (t, x) in a.to_rationals().into_iter().enumerate() {
                row[slot * n + t] = x;
            }
            strict.push(row);
        }
    }
    let eq: Vec<Vec<Rational>> = (0..n)
        .map(|t| {
            let mut row = vec![Rational::zero(); nv];
            for slot in 0..k {
                row[slot * n + t] = Rational::one();
            }
            row
        })
        .collect();
    if strict.is_empty() {
        // Every cell is the whole space.
        let e = Ray::basis(n, 0);
        return Err(BalancedWitness::new(vec![e.clone(), e.neg()], vec![Rational::one(), Rational::one()]));
    }
    match lp::motzkin(Rows { dim: nv, strict: &strict, weak: &[], eq: &eq }) {
        Alternative::Solution(x) => {
            let vectors: Vec<Vec<Rational>> = x.chunks(n).map(<[Rational]>::to_vec).collect();
            Err(BalancedWitness::from_vectors(&vectors).expect("strict rows force nonzero points"))
        }
        Alternative::Certificate { eq: w, .. } => {
            let v: Vec<Rational> = w.iter().map(|x| -x).collect();
            Ok(Ray::new(&v).expect("certificate normal is nonzero"))
        }
    }
}

/// Shrinks a balanced family of cells to an inclusion-minimal one.
fn minimal_balanced(n: usize, cells: &[&Cone], mut family: Vec<usize>, mut witness: BalancedWitness) -> BalancedWitness {
    'shrink: while family.len() > 2 {
        for drop in 0..family.len() {
            let sub: Vec<usize> = family.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &c)| c).collect();
            let cones: Vec<&Cone> = sub.iter().map(|&i| cells[i]).collect();
            if let Err(w) = open_sum_test(n, &cones) {
                family = sub;
                witness = w;
                continue 'shrink;
            }
        }
        break;
    }
    witness
}

/// Decides whether no set of at most `m` points of the region is balanced.
pub fn is_m_tame(region: &Region, m: usize) -> TamenessVerdict {
    let n = region.dim();
    let cells: Vec<&Cone> = region.cells().iter().collect();
    let size = m.min(cells.len());
    if m < 2 || size == 0 {
        // Single points of the sphere are never balanced.
        return TamenessVerdict::Tame { m, hemispheres: Vec::new() };
    }
    if let Some(c) = cells.iter().find(|c| c.is_whole()) {
        let _ = c;
        let e = Ray::basis(n, 0);
        let witness = BalancedWitness::new(vec![e.clone(), e.neg()], vec![Rational::one(), Rational::one()]);
        return TamenessVerdict::NotTame { m, witness };
    }
    let mut hemispheres = Vec::new();
    for family in subsets(cells.len(), size) {
        let cones: Vec<&Cone> = family.iter().map(|&i| cells[i]).collect();
        match open_sum_test(n, &cones) {
            Ok(normal) => hemispheres.push(HemisphereWitness { cells: family, normal }),
            Err(w) => {
                let witness = minimal_balanced(n, &cells, family, w);
                return TamenessVerdict::NotTame { m, witness };
            }
        }
    }
    TamenessVerdict::Tame { m, hemispheres }
}

/// The `m`-hull: union of spherical hulls of `m`-point subsets.
#[derive(Clone, Debug)]
pub enum MHull {
    WholeSphere(BalancedWitness),
    /// `raw` holds open cones (stored by their closures) whose union is the
    /// hull exactly; `region` is its regularization.
    Cones { raw: Vec<Cone>, region: Region },
}

impl MHull {
    pub fn is_whole_sphere(&self) -> bool {
        matches!(self, MHull::WholeSphere(_))
    }

    /// Exact point membership in the (not necessarily regular) hull.
    pub fn contains(&self, x: &Ray) -> bool {
        match self {
            MHull::WholeSphere(_) => true,
            MHull::Cones { raw, .. } => raw.iter().any(|c| c.contains_open(x)),
        }
    }

    pub fn region(&self, n: usize) -> Region {
        match self {
            MHull::WholeSphere(_) => Region::whole(n),
            MHull::Cones { region, .. } => region.clone(),
        }
    }
}

fn hull_cones(region: &Region, m: usize) -> Result<Vec<Cone>, BalancedWitness> {
    let n = region.dim();
    let cells = region.cells();
    let size = m.min(cells.len());
    let mut raw: Vec<Cone> = Vec::new();
    if size == 0 {
        return Ok(raw);
    }
    for family in subsets(cells.len(), size) {
        let gens: Vec<Ray> = family.iter().flat_map(|&i| cells[i].vrep().iter().cloned()).collect();
        let sum = Cone::from_vrep(n, &gens).expect("dimensions agree");
        if sum.is_whole() {
            let cones: Vec<&Cone> = family.iter().map(|&i| &cells[i]).collect();
            let w = open_sum_test(n, &cones).expect_err("whole sum is balanced");
            return Err(w);
        }
        if !raw.contains(&sum) {
            raw.push(sum);
        }
    }
    // Cones inside another one are redundant.
    let keep: Vec<bool> = (0..raw.len())
        .map(|i| !(0..raw.len()).any(|j| j != i && raw[j].contains_cone(&raw[i]) && (raw[i] != raw[j])))
        .collect();
    Ok(raw.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect())
}

pub fn m_hull(region: &Region, m: usize) -> MHull {
    match hull_cones(region, m.max(1)) {
        Err(w) => MHull::WholeSphere(w),
        Ok(raw) => {
            let region = Region::from_cones(region.dim(), raw.iter().cloned());
            MHull::Cones { raw, region }
        }
    }
}

/// Points that can be added to an `n`-tame region keeping it `n`-tame.
#[derive(Clone, Debug)]
pub struct AddableSet {
    /// Interior of the addable set.
    pub open_part: Region,
    /// Addable points not in the closure of `open_part` and not on an
    /// addable edge (2-sphere only).
    pub isolated_points: Vec<Ray>,
    /// Addable arcs outside the closure of `open_part`, as (start, end,
    /// midpoint); endpoints are `None` on a vertex-free circle.
    pub isolated_edges: Vec<(Option<Ray>, Option<Ray>, Ray)>,
    /// The negated hull cones `-U[n-1]`, exactly.
    pub forbidden: Vec<Cone>,
    pub boundary_note: String,
}

impl AddableSet {
    /// Exact membership in the addable set `S \ -U[n-1]`.
    pub fn contains(&self, x: &Ray) -> bool {
        !self.forbidden.iter().any(|c| c.contains_open(x))
    }
}

fn require_tame(region: &Region) -> Result<(), Error> {
    match is_m_tame(region, region.dim()) {
        TamenessVerdict::NotTame { m, witness } => Err(Error::NotTame { m, witness }),
        TamenessVerdict::Tame { .. } => Ok(()),
    }
}

fn forbidden_cones(region: &Region) -> Result<Vec<Cone>, Error> {
    let n = region.dim();
    match hull_cones(region, n - 1) {
        Err(witness) => Err(Error::NotTame { m: n - 1, witness }),
        Ok(raw) => Ok(raw.iter().map(Cone::neg).collect()),
    }
}

/// The addable set `S^{n-1} \ -U[n-1]` of an `n`-tame region.
pub fn addable_set(region: &Region) -> Result<AddableSet, Error> {
    let n = region.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    require_tame(region)?;
    let forbidden = forbidden_cones(region)?;
    let open_part =
        Region::from_disjoint(n, subtract_all(vec![Cone::whole(n)], &forbidden)).simplified();
    let mut isolated_points = Vec::new();
    let mut isolated_edges = Vec::new();
    let mut boundary_note = String::new();
    if n == 3 {
        let mut normals: Vec<Ray> = forbidden.iter().flat_map(|c| c.hrep().iter().map(Ray::unoriented)).collect();
        normals.extend(region.bounding_normals());
        normals.sort();
        normals.dedup();
        let arr = Arrangement::build(&normals)?;
        let outside = |x: &Ray| !forbidden.iter().any(|c| c.contains_open(x)) && !open_part.contains_closure(x);
        let mut on_edge: BTreeMap<usize, ()> = BTreeMap::new();
        for e in arr.edges() {
            if outside(&e.midpoint) {
                for v in [e.start, e.end].into_iter().flatten() {
                    on_edge.insert(v, ());
                }
                isolated_edges.push((
                    e.start.map(|v| arr.vertices()[v].clone()),
                    e.end.map(|v| arr.vertices()[v].clone()),
                    e.midpoint.clone(),
                ));
            }
        }
        for (i, v) in arr.vertices().iter().enumerate() {
            if outside(v) && !on_edge.contains_key(&i) {
                isolated_points.push(v.clone());
            }
        }
        if !isolated_edges.is_empty() {
            boundary_note = format!("{} addable arc(s) outside the closure of the open part", isolated_edges.len());
        }
        if !isolated_points.is_empty() {
            if !boundary_note.is_empty() {
                boundary_note.push_str("; ");
            }
            boundary_note.push_str(&format!("{} isolated addable point(s)", isolated_points.len()));
        }
    } else {
        boundary_note.push_str("lower-dimensional addable features are only enumerated on the 2-sphere");
    }
    Ok(AddableSet { open_part, isolated_points, isolated_edges, forbidden, boundary_note })
}

/// Outcome of [`maxtame_certificate`].
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub certified: bool,
    /// Interior of the addable set minus the closure of the region.
    pub residual: Region,
}

/// Checks that the interior of the addable set is the region itself, which
/// makes the region maxtame. A negative answer is not a proof of
/// non-maximality.
pub fn maxtame_certificate(region: &Region) -> Result<CertificateReport, Error> {
    let n = region.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    require_tame(region)?;
    let mut closed = region.cells().to_vec();
    closed.extend(forbidden_cones(region)?);
    let residual = Region::from_disjoint(n, subtract_all(vec![Cone::whole(n)], &closed)).simplified();
    Ok(CertificateReport { certified: residual.is_empty(), residual })
}

/// The least `l` with `x` in the closed `(l+1)`-hull of the finite set `set`,
/// which must be `n`-tame and not `(n+1)`-tame.
pub fn point_rank(x: &Ray, set: &[Ray]) -> Result<usize, Error> {
    let n = x.dim();
    if set.iter().any(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: set.iter().find(|p| p.dim() != n).unwrap().dim() });
    }
    for k in 2..=n.min(set.len()) {
        for s in set.iter().cloned().combinations(k) {
            if let Some(w) = is_balanced(&s) {
                return Err(Error::NotTame { m: n, witness: w });
            }
        }
    }
    let unbalanced = n + 1 > set.len() || set.iter().cloned().combinations(n + 1).all(|s| is_balanced(&s).is_none());
    if unbalanced {
        return Err(Error::InvalidInput(format!("the set is {}-tame, so ranks are undefined", n + 1)));
    }
    for l in 0..n {
        for s in set.iter().cloned().combinations(l + 1) {
            let c = Cone::from_vrep(n, &s)?;
            if c.contains_closed(x) {
                return Ok(l);
            }
        }
    }
    Err(Error::Invariant("point outside the n-hull of a non-(n+1)-tame set".into()))
}

/// Adds the 2-hull of component `c` to an `n`-tame region.
pub fn hull_augment(region: &Region, c: usize) -> Result<Region, Error> {
    require_tame(region)?;
    let comps = region.components();
    let comp = comps
        .get(c)
        .ok_or_else(|| Error::InvalidInput(format!("component index {c} out of range ({} components)", comps.len())))?;
    let hull = m_hull(comp, 2).region(region.dim());
    let out = region.union(&hull);
    match is_m_tame(&out, region.dim()) {
        TamenessVerdict::Tame { .. } => Ok(out),
        TamenessVerdict::NotTame { witness, .. } => {
            Err(Error::Invariant(format!("hull augmentation lost tameness: {witness}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn r(v: &[i64]) -> Ray {
        Ray::from_ints(v).unwrap()
    }

    fn cap(center: &[i64], k: i64) -> Cone {
        // Triangle around `center` on the plane through it.
        let c = r(center);
        let cq = c.to_rationals();
        let mut gens = Vec::new();
        for d in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]] {
            let v: Vec<Rational> = cq.iter().zip(d).map(|(x, y)| x * rat(k) + rat(y)).collect();
            gens.push(Ray::new(&v).unwrap());
        }
        Cone::from_vrep(3, &gens).unwrap()
    }

    #[test]
    fn antipodal_pair_is_balanced() {
        let w = is_balanced(&[r(&[1, 2, 3]), r(&[-1, -2, -3])]).unwrap();
        assert!(w.verify());
        assert_eq!(w.coefficients(), &[rat(1) / rat(2), rat(1) / rat(2)]);
        assert!(is_balanced(&[r(&[1, 2, 3])]).is_none());
    }

    #[test]
    fn tetrahedron_is_balanced() {
        let pts = [r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1]), r(&[-1, -1, -1])];
        let w = is_balanced(&pts).unwrap();
        assert!(w.verify());
        assert_eq!(w.len(), 4);
        assert!(w.coefficients().iter().all(|c| *c == w.coefficients()[0]));
        assert!(hemisphere_witness(&pts).is_none());
    }

    #[test]
    fn hemisphere_for_octant_vertices() {
        let pts = [r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1])];
        let v = hemisphere_witness(&pts).unwrap();
        assert!(pts.iter().all(|p| v.dot(p).is_positive()));
        assert!(is_balanced(&pts).is_none());
    }

    #[test]
    fn hemisphere_is_tame_and_certified() {
        let h = Region::hemisphere(&r(&[0, 0, 1]));
        for m in 1..6 {
            assert!(is_m_tame(&h, m).is_tame());
        }
        let add = addable_set(&h).unwrap();
        assert!(add.open_part.same_set(&h));
        assert!(add.isolated_points.is_empty());
        assert!(add.isolated_edges.is_empty());
        assert!(add.contains(&r(&[1, 0, 0])));
        assert!(!add.contains(&r(&[1, 0, -1])));
        assert!(maxtame_certificate(&h).unwrap().certified);
    }

    #[test]
    fn antipodal_caps_are_not_two_tame() {
        let reg = Region::new(3, vec![cap(&[0, 0, 1], 4), cap(&[0, 0, 1], 4).neg()]).unwrap();
        let v = is_m_tame(&reg, 2);
        assert!(!v.is_tame());
        assert!(v.verify(&reg));
        assert_eq!(v.witness().unwrap().len(), 2);
    }

    #[test]
    fn tetrahedral_caps() {
        let centers = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
        let reg = Region::new(3, centers.iter().map(|c| cap(c, 8)).collect()).unwrap();
        let v3 = is_m_tame(&reg, 3);
        assert!(v3.is_tame());
        assert!(v3.verify(&reg));
        let v4 = is_m_tame(&reg, 4);
        assert!(v4.verify(&reg));
        assert_eq!(v4.witness().unwrap().len(), 4);
        let cert = maxtame_certificate(&reg).unwrap();
        assert!(!cert.certified);
    }

    #[test]
    fn hull_of_a_convex_region() {
        let reg = Region::new(3, vec![cap(&[0, 0, 1], 3)]).unwrap();
        let h = m_hull(&reg, 2);
        assert!(h.region(3).same_set(&reg));
        assert!(m_hull(&reg, 1).region(3).same_set(&reg));
    }

    #[test]
    fn ranks_of_a_tetrahedron() {
        let set = [r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1]), r(&[-1, -1, -1])];
        assert_eq!(point_rank(&r(&[1, 0, 0]), &set).unwrap(), 0);
        assert_eq!(point_rank(&r(&[1, 1, 0]), &set).unwrap(), 1);
        assert_eq!(point_rank(&r(&[1, 1, 1]), &set).unwrap(), 2);
        assert!(point_rank(&r(&[1, 1, 1]), &set[..3]).is_err());
    }
}
