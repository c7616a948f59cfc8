//! Exact rationals, rays and strict linear feasibility.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lp::{self, Alternative, Rows};
use crate::Error;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Parses `"p"` or `"p/q"` with `q > 0`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(alloc::format!("malformed rational {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if !den.is_positive() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction. Returns `None` for the zero vector.
pub fn primitive(v: &[Rational]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// A point of the sphere: a nonzero vector up to positive scaling.
///
/// Stored as a primitive integer vector, so equality of rays is equality of
/// representatives. Orientation is kept; see [`Ray::unoriented`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray(Vec<BigInt>);

impl Ray {
    pub fn new(coords: &[Rational]) -> Result<Ray, Error> {
        primitive(coords).map(Ray).ok_or(Error::ZeroVector)
    }

    pub fn from_ints(coords: &[i64]) -> Result<Ray, Error> {
        let q: Vec<Rational> = coords.iter().map(|&c| rat(c)).collect();
        Ray::new(&q)
    }

    pub fn from_bigints(coords: Vec<BigInt>) -> Result<Ray, Error> {
        let q: Vec<Rational> = coords.into_iter().map(Rational::from_integer).collect();
        Ray::new(&q)
    }

    /// Standard basis vector `e_{axis+1}` in `dim` dimensions.
    pub fn basis(dim: usize, axis: usize) -> Ray {
        let mut v = alloc::vec![BigInt::zero(); dim];
        v[axis] = BigInt::one();
        Ray(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().cloned().map(Rational::from_integer).collect()
    }

    pub fn neg(&self) -> Ray {
        Ray(self.0.iter().map(|x| -x).collect())
    }

    pub fn dot(&self, other: &Ray) -> BigInt {
        self.0.iter().zip(&other.0).fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn dot_q(&self, v: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (a, b)| acc + b * a)
    }

    /// Canonical representative of the line through the ray: first nonzero
    /// coordinate positive.
    pub fn unoriented(&self) -> Ray {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Sum of the representatives; `None` when they cancel.
    pub fn add(&self, other: &Ray) -> Option<Ray> {
        let v: Vec<BigInt> = self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect();
        Ray::from_bigints(v).ok()
    }

    /// Nonnegative combination `sum c_i r_i`; `None` when it vanishes.
    pub fn combine(rays: &[Ray], coeffs: &[Rational]) -> Option<Ray> {
        let dim = rays.first()?.dim();
        let mut acc = alloc::vec![Rational::zero(); dim];
        for (r, c) in rays.iter().zip(coeffs) {
            for (a, x) in acc.iter_mut().zip(&r.0) {
                *a += c * Rational::from_integer(x.clone());
            }
        }
        Ray::new(&acc).ok()
    }

    /// 3-dimensional cross product.
    pub fn cross(&self, other: &Ray) -> Option<Ray> {
        let (a, b) = (&self.0, &other.0);
        let v = alloc::vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ];
        Ray::from_bigints(v).ok()
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// 3x3 determinant `det(a, b, c)`.
pub fn det3(a: &Ray, b: &Ray, c: &Ray) -> BigInt {
    match a.cross(b) {
        Some(ab) => ab.dot(c),
        None => BigInt::zero(),
    }
}

/// Strict and weak homogeneous constraints on a vector of `dim` unknowns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub dim: usize,
    /// Rows that must satisfy `row . v > 0`.
    pub strict_rows: Vec<Vec<Rational>>,
    /// Rows that must satisfy `row . v >= 0`.
    pub weak_rows: Vec<Vec<Rational>>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> LinearSystem {
        LinearSystem { dim, ..Default::default() }
    }

    pub fn strict(mut self, row: Vec<Rational>) -> Self {
        self.strict_rows.push(row);
        self
    }

    pub fn weak(mut self, row: Vec<Rational>) -> Self {
        self.weak_rows.push(row);
        self
    }

    fn validate(&self) -> Result<(), Error> {
        if self.dim == 0 {
            return Err(Error::InvalidInput("linear system needs at least one column".into()));
        }
        for row in self.strict_rows.iter().chain(&self.weak_rows) {
            if row.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: row.len() });
            }
        }
        Ok(())
    }

    /// Rows rescaled to primitive integer form, so positive rescaling of the
    /// input never changes the answer.
    fn normalized(&self) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
        let norm = |rows: &[Vec<Rational>]| {
            rows.iter()
                .map(|r| match primitive(r) {
                    Some(p) => p.into_iter().map(Rational::from_integer).collect(),
                    None => r.clone(),
                })
                .collect::<Vec<_>>()
        };
        (norm(&self.strict_rows), norm(&self.weak_rows))
    }

    pub fn is_satisfied_by(&self, v: &[Rational]) -> bool {
        self.strict_rows.iter().all(|r| dot(r, v).is_positive())
            && self.weak_rows.iter().all(|r| !dot(r, v).is_negative())
    }
}

/// Finds a ray satisfying every row of `sys`, or `None` if there is none.
pub fn solve_strict(sys: &LinearSystem) -> Result<Option<Ray>, Error> {
    sys.validate()?;
    let (strict, weak) = sys.normalized();
    if strict.is_empty() {
        // Any nonzero solution of the weak rows will do; probe the axes.
        for axis in 0..sys.dim {
            for sign in [1, -1] {
                let mut e = alloc::vec![Rational::zero(); sys.dim];
                e[axis] = rat(sign);
                let alt = lp::motzkin(Rows {
                    dim: sys.dim,
                    strict: core::slice::from_ref(&e),
                    weak: &weak,
                    eq: &[],
                });
                if let Some(x) = alt.solution() {
                    return Ok(Some(Ray::new(&x)?));
                }
            }
        }
        return Ok(None);
    }
    let alt = lp::motzkin(Rows { dim: sys.dim, strict: &strict, weak: &weak, eq: &[] });
    match alt.solution() {
        Some(x) => {
            let ray = Ray::new(&x)?;
            debug_assert!(sys.is_satisfied_by(&ray.to_rationals()));
            Ok(Some(ray))
        }
        None => Ok(None),
    }
}

/// Nonnegative multipliers, strict rows first and then weak rows, that
/// combine the rows of an infeasible system to zero with some strict
/// multiplier positive.
pub fn farkas_certificate(sys: &LinearSystem) -> Result<Vec<Rational>, Error> {
    sys.validate()?;
    let (strict, weak) = sys.normalized();
    match lp::motzkin(Rows { dim: sys.dim, strict: &strict, weak: &weak, eq: &[] }) {
        Alternative::Solution(_) if !strict.is_empty() => Err(Error::Contract(
            "farkas_certificate called on a feasible system".into(),
        )),
        Alternative::Solution(_) => Err(Error::Contract(
            "a system without strict rows has no Farkas certificate".into(),
        )),
        Alternative::Certificate { strict: y, weak: z, .. } => {
            // Undo the row normalization: row = s * normalized row.
            let rescale = |rows: &[Vec<Rational>], normed: &[Vec<Rational>], c: Vec<Rational>| {
                c.into_iter()
                    .zip(rows.iter().zip(normed))
                    .map(|(ci, (r, nr))| match nr.iter().position(|x| !x.is_zero()) {
                        Some(k) => ci * &nr[k] / &r[k],
                        None => ci,
                    })
                    .collect::<Vec<_>>()
            };
            let mut out = rescale(&sys.strict_rows, &strict, y);
            out.extend(rescale(&sys.weak_rows, &weak, z));
            Ok(out)
        }
    }
}

/// Checks a certificate from [`farkas_certificate`] by substitution.
pub fn verify_certificate(sys: &LinearSystem, coeffs: &[Rational]) -> bool {
    if coeffs.len() != sys.strict_rows.len() + sys.weak_rows.len() {
        return false;
    }
    if coeffs.iter().any(Signed::is_negative) {
        return false;
    }
    if coeffs[..sys.strict_rows.len()].iter().all(Zero::is_zero) {
        return false;
    }
    let mut sum = alloc::vec![Rational::zero(); sys.dim];
    for (c, row) in coeffs.iter().zip(sys.strict_rows.iter().chain(&sys.weak_rows)) {
        for (s, x) in sum.iter_mut().zip(row) {
            *s += c * x;
        }
    }
    sum.iter().all(Zero::is_zero)
}

/// Basis of the null space `{x : row . x = 0 for all rows}` as primitive
/// integer vectors, via reduced row echelon form.
pub fn null_space(dim: usize, rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = alloc::vec![Rational::zero(); dim];
            v[f] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            primitive(&v)
                .expect("null space vector is nonzero")
                .into_iter()
                .map(Rational::from_integer)
                .collect()
        })
        .collect()
}

pub fn rank(dim: usize, rows: &[Vec<Rational>]) -> usize {
    dim - null_space(dim, rows).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn ray_canonical_form() {
        let a = Ray::new(&[ratio(1, 2), ratio(3, 4)]).unwrap();
        assert_eq!(a, Ray::from_ints(&[2, 3]).unwrap());
        assert_eq!(Ray::from_ints(&[-4, 6]).unwrap(), Ray::from_ints(&[-2, 3]).unwrap());
        assert_eq!(Ray::from_ints(&[-2, 3]).unwrap().unoriented(), Ray::from_ints(&[2, -3]).unwrap());
        assert!(matches!(Ray::from_ints(&[0, 0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat(5)), "5");
    }

    #[test]
    fn first_quadrant() {
        let sys = LinearSystem::new(2).strict(q(&[1, 0])).strict(q(&[0, 1]));
        let v = solve_strict(&sys).unwrap().unwrap();
        assert!(sys.is_satisfied_by(&v.to_rationals()));
    }

    #[test]
    fn contradictory_rows() {
        let sys = LinearSystem::new(2).strict(q(&[1, 0])).strict(q(&[-1, 0]));
        assert_eq!(solve_strict(&sys).unwrap(), None);
        let c = farkas_certificate(&sys).unwrap();
        assert_eq!(c, q(&[1, 1]).iter().map(|x| x / rat(2)).collect::<Vec<_>>());
        assert!(verify_certificate(&sys, &c));
    }

    #[test]
    fn tetrahedron_rows() {
        let sys = LinearSystem::new(3)
            .strict(q(&[1, 0, 0]))
            .strict(q(&[0, 1, 0]))
            .strict(q(&[0, 0, 1]))
            .strict(q(&[-1, -1, -1]));
        assert_eq!(solve_strict(&sys).unwrap(), None);
        let c = farkas_certificate(&sys).unwrap();
        assert!(verify_certificate(&sys, &c));
        // Up to scale the certificate is (1,1,1,1).
        assert!(c.iter().all(|x| *x == c[0]));
    }

    #[test]
    fn certificate_on_feasible_system_is_an_error() {
        let sys = LinearSystem::new(2).strict(q(&[1, 0]));
        assert!(matches!(farkas_certificate(&sys), Err(Error::Contract(_))));
    }

    #[test]
    fn dimension_mismatch() {
        let sys = LinearSystem::new(2).strict(q(&[1, 0, 0]));
        assert!(matches!(solve_strict(&sys), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn weak_only_systems() {
        let sys = LinearSystem::new(2).weak(q(&[1, 0])).weak(q(&[-1, 0]));
        let v = solve_strict(&sys).unwrap().unwrap();
        assert_eq!(v, Ray::from_ints(&[0, 1]).unwrap());
        let sys = LinearSystem::new(1).weak(q(&[1])).weak(q(&[-1]));
        assert_eq!(solve_strict(&sys).unwrap(), None);
    }

    #[test]
    fn scaled_rows_give_the_same_ray() {
        let sys = LinearSystem::new(3).strict(q(&[1, 2, 0])).strict(q(&[0, -1, 3])).weak(q(&[1, 0, -1]));
        let scaled = LinearSystem::new(3)
            .strict(q(&[3, 6, 0]))
            .strict(vec![rat(0), ratio(-1, 7), ratio(3, 7)])
            .weak(q(&[5, 0, -5]));
        assert_eq!(solve_strict(&sys).unwrap(), solve_strict(&scaled).unwrap());
    }

    #[test]
    fn null_space_of_plane() {
        let ns = null_space(3, &[q(&[1, 1, 1])]);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(v, &q(&[1, 1, 1])).is_zero());
        }
        assert_eq!(rank(3, &[q(&[1, 2, 3]), q(&[2, 4, 6])]), 1);
    }
}
