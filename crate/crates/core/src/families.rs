//! Certified generators for concrete maxtame regions.
//!
//! Every generator certifies its output exactly before returning it.
//! Near-symmetric layouts are rounded to integer coordinates; when rounding
//! spoils the certificate the scale is doubled and the construction retried.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cone::Cone;
use crate::exact::{solve_strict, LinearSystem, Ray};
use crate::region::{strict_point, subtract_all, Region};
use crate::tameness::{addable_set, is_m_tame, maxtame_certificate, TamenessVerdict};
use crate::Error;

/// Number of scale doublings tried by the rounded generators.
pub const RETRIES: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    /// No constraint.
    Free,
    /// On the boundary great sphere.
    Boundary,
}

impl Sign {
    fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Free => "±",
            Sign::Boundary => "∂",
        }
    }
}

/// Intersection of the hemispheres `ε_i H_i` of a simplex configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignPattern {
    signs: Vec<Sign>,
}

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Result<SignPattern, Error> {
        if signs.len() < 3 {
            return Err(Error::InvalidInput("a sign pattern needs at least three entries".into()));
        }
        if signs.iter().all(|s| *s == Sign::Plus) || signs.iter().all(|s| *s == Sign::Minus) {
            return Err(Error::InvalidInput("all-plus and all-minus patterns are empty".into()));
        }
        Ok(SignPattern { signs })
    }

    /// Parses `+`, `-`, `±` (or `*`) and `∂` (or `0`).
    pub fn parse(s: &str) -> Result<SignPattern, Error> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                '±' | '*' => Ok(Sign::Free),
                '∂' | '0' => Ok(Sign::Boundary),
                other => Err(Error::Parse(format!("unexpected sign symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        SignPattern::new(signs)
    }

    /// The pattern with a single minus at position `i`.
    pub fn single_minus(len: usize, i: usize) -> SignPattern {
        let signs = (0..len).map(|j| if j == i { Sign::Minus } else { Sign::Plus }).collect();
        SignPattern { signs }
    }

    /// The pattern with a single plus at position `i`.
    pub fn single_plus(len: usize, i: usize) -> SignPattern {
        let signs = (0..len).map(|j| if j == i { Sign::Plus } else { Sign::Minus }).collect();
        SignPattern { signs }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn neg(&self) -> SignPattern {
        let signs = self
            .signs
            .iter()
            .map(|s| match s {
                Sign::Plus => Sign::Minus,
                Sign::Minus => Sign::Plus,
                other => *other,
            })
            .collect();
        SignPattern { signs }
    }

    /// Hull calculus: each coordinate keeps its value when all patterns
    /// agree and becomes unconstrained where they differ.
    pub fn hull(patterns: &[SignPattern]) -> Result<SignPattern, Error> {
        let first = patterns.first().ok_or_else(|| Error::InvalidInput("hull of no patterns".into()))?;
        if patterns.iter().any(|p| p.len() != first.len()) {
            return Err(Error::InvalidInput("patterns of different lengths".into()));
        }
        let signs = (0..first.len())
            .map(|i| {
                let mut vals = patterns.iter().map(|p| p.signs[i]).filter(|s| *s != Sign::Boundary);
                match vals.next() {
                    None => Sign::Boundary,
                    Some(s) if vals.all(|t| t == s) => s,
                    Some(_) => Sign::Free,
                }
            })
            .collect();
        Ok(SignPattern { signs })
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            f.write_str(s.symbol())?;
        }
        Ok(())
    }
}

/// The `n + 1` points and hemisphere normals of the simplex family.
#[derive(Clone, Debug)]
pub struct SimplexFamily {
    pub points: Vec<Ray>,
    /// `normals[i]` is positive on every point except `points[i]`.
    pub normals: Vec<Ray>,
}

impl SimplexFamily {
    pub fn new(n: usize) -> Result<SimplexFamily, Error> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("the simplex family needs n >= 2, got {n}")));
        }
        let mut points: Vec<Ray> = (0..n).map(|i| Ray::basis(n, i)).collect();
        points.push(Ray::from_ints(&vec![-1; n])?);
        let normals = (0..=n)
            .map(|i| {
                let sys = points.iter().enumerate().fold(LinearSystem::new(n), |sys, (j, p)| {
                    if j == i {
                        sys.strict(p.neg().to_rationals())
                    } else {
                        sys.strict(p.to_rationals())
                    }
                });
                solve_strict(&sys)?.ok_or_else(|| Error::Invariant(format!("no separating hemisphere for point {i}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimplexFamily { points, normals })
    }

    pub fn dim(&self) -> usize {
        self.points.len() - 1
    }

    /// Closed cones of the nonempty cells `ε_0 … ε_n` matching a pattern,
    /// with every free entry expanded to both signs.
    pub fn pattern_cells(&self, p: &SignPattern) -> Result<Vec<Cone>, Error> {
        if p.len() != self.normals.len() {
            return Err(Error::DimensionMismatch { expected: self.normals.len(), found: p.len() });
        }
        let n = self.dim();
        let free: Vec<usize> = (0..p.len()).filter(|&i| p.signs[i] == Sign::Free).collect();
        let mut cells = Vec::new();
        for mask in 0u64..(1u64 << free.len()) {
            let mut strict = Vec::new();
            let mut eq = Vec::new();
            let mut rows = Vec::new();
            for (i, (s, h)) in p.signs.iter().zip(&self.normals).enumerate() {
                let plus = match s {
                    Sign::Plus => true,
                    Sign::Minus => false,
                    Sign::Free => mask >> free.iter().position(|&f| f == i).unwrap_or(0) & 1 == 0,
                    Sign::Boundary => {
                        eq.push(h.to_rationals());
                        rows.push(h.clone());
                        rows.push(h.neg());
                        continue;
                    }
                };
                let r = if plus { h.clone() } else { h.neg() };
                strict.push(r.to_rationals());
                rows.push(r);
            }
            if strict_point(n, &strict, &eq).is_some() {
                cells.push(Cone::from_hrep(n, &rows)?);
            }
        }
        Ok(cells)
    }

    /// Closed cone of a pattern: the intersection of the constrained
    /// closed hemispheres.
    pub fn pattern_cone(&self, p: &SignPattern) -> Result<Cone, Error> {
        if p.len() != self.normals.len() {
            return Err(Error::DimensionMismatch { expected: self.normals.len(), found: p.len() });
        }
        let mut rows = Vec::new();
        for (s, h) in p.signs.iter().zip(&self.normals) {
            match s {
                Sign::Plus => rows.push(h.clone()),
                Sign::Minus => rows.push(h.neg()),
                Sign::Free => {}
                Sign::Boundary => {
                    rows.push(h.clone());
                    rows.push(h.neg());
                }
            }
        }
        Cone::from_hrep(self.dim(), &rows)
    }

    /// The region made of the single-minus cells.
    pub fn region(&self) -> Result<Region, Error> {
        let len = self.normals.len();
        let cells =
            (0..len).map(|i| self.pattern_cone(&SignPattern::single_minus(len, i))).collect::<Result<Vec<_>, _>>()?;
        Ok(Region::new(self.dim(), cells)?.with_label(format!("simplex-family-{}", self.dim())))
    }

    /// Checks exactly that the open hull of the given cells is the
    /// pattern predicted by the hull calculus and that this pattern is the
    /// union of its nonempty cells up to boundaries.
    pub fn check_hull(&self, parts: &[SignPattern]) -> Result<SignPattern, Error> {
        let predicted = SignPattern::hull(parts)?;
        let cones = parts.iter().map(|p| self.pattern_cone(p)).collect::<Result<Vec<_>, _>>()?;
        // The closed sum may contain a line while the open hull stays proper.
        let gens: Vec<Ray> = cones.iter().flat_map(|c| c.vrep().iter().cloned()).collect();
        let hull = Cone::from_vrep(self.dim(), &gens)?;
        let expected = self.pattern_cone(&predicted)?;
        let cells = self.pattern_cells(&predicted)?;
        let covered = !hull.is_fulldim() || subtract_all(vec![hull.clone()], &cells).is_empty();
        if covered && hull.contains_cone(&expected) && expected.contains_cone(&hull) {
            Ok(predicted)
        } else {
            Err(Error::Certification(format!("hull of the parts differs from {predicted}")))
        }
    }
}

/// Checks `n`-tameness and the maxtame certificate.
pub fn certify(region: &Region) -> Result<(), Error> {
    let n = region.dim();
    if let TamenessVerdict::NotTame { m, witness } = is_m_tame(region, n) {
        return Err(Error::NotTame { m, witness });
    }
    let report = maxtame_certificate(region)?;
    if !report.certified {
        return Err(Error::Certification(format!(
            "{} residual addable cell(s) remain",
            report.residual.cells().len()
        )));
    }
    Ok(())
}

/// Whether the closure of a certified region is exactly its addable set.
pub fn closure_condition(region: &Region) -> Result<bool, Error> {
    let add = addable_set(region)?;
    Ok(add.isolated_points.is_empty() && add.isolated_edges.is_empty() && add.open_part.same_set(region))
}

/// The maxtame region of `S^{n-1}` with `n + 1` simplicial components.
pub fn simplex_family(n: usize) -> Result<Region, Error> {
    let region = SimplexFamily::new(n)?.region()?;
    certify(&region)?;
    Ok(region)
}

fn round_ray(v: [f64; 3], scale: f64) -> Result<Ray, Error> {
    let c: Vec<i64> = v.iter().map(|x| libm::round(x * scale) as i64).collect();
    Ray::from_ints(&c)
}

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// A `(2k+1)`-gon around the south pole and `2k + 1` triangles around the
/// north pole.
pub fn family_a(k: usize) -> Result<Region, Error> {
    if k == 0 {
        return Err(Error::InvalidInput("family members are indexed from k = 1".into()));
    }
    let sides = 2 * k + 1;
    let lat = -0.33f64;
    let c = libm::sqrt(1.0 - lat * lat);
    let north = Ray::from_ints(&[0, 0, 1])?;
    let mut last = String::new();
    for attempt in 0..=RETRIES {
        let scale = 1000.0 * (1u64 << attempt) as f64;
        let v: Vec<Ray> = (0..sides)
            .map(|j| {
                let t = TAU * j as f64 / sides as f64;
                round_ray([c * libm::cos(t), c * libm::sin(t), lat], scale)
            })
            .collect::<Result<_, _>>()?;
        let mut cells = Vec::with_capacity(sides + 1);
        let mut polygon = vec![north.neg()];
        polygon.extend(v.iter().cloned());
        cells.push(Cone::from_hrep(3, &polygon)?);
        for j in 0..sides {
            let mut rows = vec![north.clone()];
            for (i, vi) in v.iter().enumerate() {
                let inside = (i + sides - j) % sides < k;
                rows.push(if inside { vi.neg() } else { vi.clone() });
            }
            cells.push(Cone::from_hrep(3, &rows)?);
        }
        let attempt_result = Region::new(3, cells).and_then(|r| {
            let r = r.with_label(format!("family-a-{k}"));
            certify(&r)?;
            if !closure_condition(&r)? {
                return Err(Error::Certification("closure condition fails".into()));
            }
            Ok(r)
        });
        match attempt_result {
            Ok(r) => return Ok(r),
            Err(e) => last = format!("scale {scale}: {e}"),
        }
    }
    Err(Error::Certification(format!("family A member {k} not certified after {RETRIES} retries ({last})")))
}

type Mat = [[i64; 3]; 3];

fn apply(m: &Mat, r: &Ray) -> Result<Ray, Error> {
    let c = r.coords();
    Ray::from_bigints(m.iter().map(|row| row.iter().zip(c).map(|(a, x)| x * *a).sum()).collect())
}

/// Circles `n_j = R^j n0`, `m_j = R^j m0` about a rotation `R` of order
/// `k + 1`.
struct BLayout {
    order: usize,
    rotation: Mat,
    inverse: Mat,
    n0: Ray,
    m0: Ray,
}

impl BLayout {
    /// Exact layouts. `m0` is the image of `n0` under a half-turn about a
    /// horizontal axis.
    fn exact(k: usize) -> Result<BLayout, Error> {
        let (rotation, inverse, n0, m0): (Mat, Mat, [i64; 3], [i64; 3]) = match k {
            1 => ([[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [1, 0, 1], [0, 1, -1]),
            // Axis (1,1,1); the rotation permutes coordinates cyclically.
            2 => ([[0, 0, 1], [1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1], [1, 0, 0]], [-6, -8, 17], [8, 6, -17]),
            3 => ([[0, 1, 0], [-1, 0, 0], [0, 0, 1]], [[0, -1, 0], [1, 0, 0], [0, 0, 1]], [1, 2, 1], [1, -2, -1]),
            _ => return Err(Error::InvalidInput(format!("no exact rotation table for family B member {k}"))),
        };
        Ok(BLayout { order: k + 1, rotation, inverse, n0: Ray::from_ints(&n0)?, m0: Ray::from_ints(&m0)? })
    }

    /// Axis of the rotation, as the fixed direction with positive sum.
    fn axis(&self) -> Result<Ray, Error> {
        let m = &self.rotation;
        if m[2][2] == 1 {
            Ray::from_ints(&[0, 0, 1])
        } else {
            Ray::from_ints(&[1, 1, 1])
        }
    }

    fn power(&self, r: &Ray, j: usize) -> Result<Ray, Error> {
        let mut out = r.clone();
        for _ in 0..j {
            out = apply(&self.rotation, &out)?;
        }
        Ok(out)
    }

    /// Two triangle orbits: `{-n0, -m0, -R m0}` and `{-n0, -m0, -R^-1 n0}`.
    fn region(&self) -> Result<Region, Error> {
        let seeds = [
            [self.n0.neg(), self.m0.neg(), apply(&self.rotation, &self.m0)?.neg()],
            [self.n0.neg(), self.m0.neg(), apply(&self.inverse, &self.n0)?.neg()],
        ];
        let mut cells = Vec::with_capacity(2 * self.order);
        for seed in &seeds {
            for j in 0..self.order {
                let rows = seed.iter().map(|r| self.power(r, j)).collect::<Result<Vec<_>, _>>()?;
                cells.push(Cone::from_hrep(3, &rows)?);
            }
        }
        Region::new(3, cells)
    }
}

/// `2k + 2` triangles with a `(k+1)`-fold rotation axis, for `k = 1, 2, 3`.
///
/// The triangles are faces of the arrangement of the `2k + 2` circles
/// `R^j n0`, `R^j m0`. For `k = 2` both ends of the axis are isolated
/// addable points.
pub fn family_b(k: usize) -> Result<Region, Error> {
    if k == 0 {
        return Err(Error::InvalidInput("family members are indexed from k = 1".into()));
    }
    let layout = BLayout::exact(k)?;
    let region = layout.region()?.with_label(format!("family-b-{k}"));
    if region.component_count() != 2 * k + 2 {
        return Err(Error::Certification(format!(
            "family B member {k} has {} components",
            region.component_count()
        )));
    }
    certify(&region)?;
    Ok(region)
}

/// The rotation axis of the layout used by [`family_b`].
pub fn family_b_axis(k: usize) -> Result<Ray, Error> {
    BLayout::exact(k)?.axis()
}

/// Perturbation of the six-triangle member of family B.
///
/// `m0` is moved off the image of `n0` under the half-turn, keeping the
/// three-fold symmetry. One pole stops being covered by the lenses of the
/// opposite triangles and opens into a small addable triangle, which is added
/// as a seventh component.
pub fn perturbed_family_b_7() -> Result<Region, Error> {
    perturbed_family_b(&[7, 7, -17])
}

/// [`perturbed_family_b_7`] with an explicit `m0`.
pub fn perturbed_family_b(m0: &[i64]) -> Result<Region, Error> {
    let mut layout = BLayout::exact(2)?;
    layout.m0 = Ray::from_ints(m0)?;
    let base = layout.region()?;
    if base.component_count() != 6 {
        return Err(Error::Certification(format!("perturbed base has {} components", base.component_count())));
    }
    match is_m_tame(&base, 3) {
        TamenessVerdict::NotTame { m, witness } => return Err(Error::NotTame { m, witness }),
        TamenessVerdict::Tame { .. } => {}
    }
    let residual = maxtame_certificate(&base)?.residual;
    let pieces = residual.components();
    if pieces.len() != 1 {
        return Err(Error::Certification(format!(
            "perturbation with m0 = {m0:?} leaves {} addable pieces, expected one",
            pieces.len()
        )));
    }
    let region = base.union(&pieces[0]).with_label("family-b-perturbed-7");
    if region.component_count() != 7 {
        return Err(Error::Certification(format!("perturbed member has {} components", region.component_count())));
    }
    certify(&region)?;
    Ok(region)
}

/// Alternating open arcs between an odd number of antipodal pairs on the
/// circle. `parity` selects one of the two antipodally related choices.
pub fn s1_maxtame(directions: &[Ray], parity: bool) -> Result<Region, Error> {
    let k = directions.len();
    if k.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "{k} antipodal pairs given; the alternating construction needs an odd number"
        )));
    }
    if directions.iter().any(|d| d.dim() != 2) {
        return Err(Error::InvalidInput("directions must lie in the plane".into()));
    }
    let mut points: Vec<Ray> = directions.iter().flat_map(|d| [d.clone(), d.neg()]).collect();
    // Angular order: upper half-plane first, then by orientation.
    let upper = |p: &Ray| {
        let (x, y) = (&p.coords()[0], &p.coords()[1]);
        y.sign() == num_bigint::Sign::Plus || (y.sign() == num_bigint::Sign::NoSign && x.sign() == num_bigint::Sign::Plus)
    };
    points.sort_by(|a, b| {
        upper(b).cmp(&upper(a)).then_with(|| {
            let cross = &a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0];
            cross.sign().cmp(&num_bigint::Sign::NoSign).reverse()
        })
    });
    for w in points.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidInput(format!("repeated direction {}", w[0])));
        }
    }
    let region = if k == 1 {
        let d = &points[0];
        let normal = Ray::from_bigints(vec![-d.coords()[1].clone(), d.coords()[0].clone()])?;
        Region::hemisphere(&if parity { normal.neg() } else { normal })
    } else {
        let len = points.len();
        let cells = (0..len)
            .filter(|i| (i % 2 == 1) == parity)
            .map(|i| Cone::from_vrep(2, &[points[i].clone(), points[(i + 1) % len].clone()]))
            .collect::<Result<Vec<_>, _>>()?;
        Region::new(2, cells)?
    };
    let region = region.with_label(format!("s1-maxtame-{k}"));
    certify(&region)?;
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SignPattern {
        SignPattern::parse(s).unwrap()
    }

    #[test]
    fn hull_calculus_symbols() {
        assert_eq!(SignPattern::hull(&[p("+----"), p("--+--")]).unwrap().to_string(), "±-±--");
        assert_eq!(SignPattern::hull(&[p("+----"), p("--+--"), p("---+-")]).unwrap().to_string(), "±-±±-");
        assert!(SignPattern::parse("+++").is_err());
        assert_eq!(p("+-∂").neg().to_string(), "-+∂");
    }

    #[test]
    fn simplex_family_hulls_are_exact() {
        let f = SimplexFamily::new(4).unwrap();
        assert_eq!(f.check_hull(&[p("+----"), p("--+--")]).unwrap(), p("±-±--"));
        assert_eq!(f.check_hull(&[p("+----"), p("--+--"), p("---+-")]).unwrap(), p("±-±±-"));
    }

    #[test]
    fn simplex_family_small_dimensions() {
        for n in 2..=3 {
            let r = simplex_family(n).unwrap();
            assert_eq!(r.component_count(), n + 1);
            assert!(!is_m_tame(&r, n + 1).is_tame());
        }
    }

    #[test]
    fn family_a_first_member() {
        let r = family_a(1).unwrap();
        assert_eq!(r.component_count(), 4);
    }

    #[test]
    fn family_b_members() {
        for k in 1..=3 {
            let r = family_b(k).unwrap();
            assert_eq!(r.component_count(), 2 * k + 2);
        }
        let axis = family_b_axis(2).unwrap();
        let iso = addable_set(&family_b(2).unwrap()).unwrap().isolated_points;
        assert!(iso.contains(&axis) && iso.contains(&axis.neg()));
    }

    #[test]
    fn seven_components() {
        assert_eq!(perturbed_family_b_7().unwrap().component_count(), 7);
    }

    #[test]
    fn s1_parity_and_errors() {
        let d = [Ray::from_ints(&[1, 0]).unwrap(), Ray::from_ints(&[1, 2]).unwrap(), Ray::from_ints(&[-1, 3]).unwrap()];
        let a = s1_maxtame(&d, false).unwrap();
        let b = s1_maxtame(&d, true).unwrap();
        assert_eq!(a.component_count(), 3);
        assert!(b.same_set(&a.antipode()));
        assert!(s1_maxtame(&d[..2], false).is_err());
        let h = s1_maxtame(&d[..1], false).unwrap();
        assert_eq!(h.component_count(), 1);
    }
}
