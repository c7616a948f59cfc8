use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tame_core::arrangement::Arrangement;
use tame_core::tameness::{hemisphere_witness, is_balanced, is_m_tame};
use tame_core::{Cone, Ray, Region};

fn dot(a: &Ray, b: &Ray) -> BigInt {
    a.coords().iter().zip(b.coords()).map(|(x, y)| x * y).sum()
}

fn ray(n: usize, bound: i64) -> impl Strategy<Value = Ray> {
    prop::collection::vec(-bound..=bound, n).prop_filter_map("zero vector", |v| Ray::from_ints(&v).ok())
}

/// Full-dimensional simplicial cone in R^3.
fn simplicial() -> impl Strategy<Value = Cone> {
    prop::collection::vec(ray(3, 5), 3).prop_filter_map("degenerate", |g| {
        let det = tame_core::exact::det3(&g[0], &g[1], &g[2]);
        if det.is_zero() {
            None
        } else {
            Cone::from_vrep(3, &g).ok()
        }
    })
}

fn region() -> impl Strategy<Value = Region> {
    prop::collection::vec(simplicial(), 1..=2).prop_map(|cs| Region::from_cones(3, cs))
}

fn in_open(c: &Cone, x: &Ray) -> bool {
    c.hrep().iter().all(|a| dot(a, x).is_positive())
}

fn in_region(r: &Region, x: &Ray) -> bool {
    r.cells().iter().any(|c| in_open(c, x))
}

/// Points off every bounding circle of both regions.
fn generic_probe(x: &Ray, regions: &[&Region]) -> bool {
    regions.iter().all(|r| r.bounding_normals().iter().all(|a| !dot(a, x).is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gordan_exactly_one_witness(n in 2usize..=4, pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=6)) {
        let points: Vec<Ray> = pts.iter().filter_map(|v| Ray::from_ints(&v[..n]).ok()).collect();
        prop_assume!(!points.is_empty());
        let b = is_balanced(&points);
        let h = hemisphere_witness(&points);
        prop_assert!(b.is_some() != h.is_some());
        if let Some(v) = h {
            prop_assert!(points.iter().all(|p| dot(p, &v).is_positive()));
        }
        if let Some(w) = b {
            for t in 0..n {
                let s: num_rational::BigRational = w
                    .points()
                    .iter()
                    .zip(w.coefficients())
                    .map(|(p, c)| c * num_rational::BigRational::from_integer(p.coords()[t].clone()))
                    .sum();
                prop_assert!(s.is_zero());
            }
            prop_assert!(w.coefficients().iter().all(|c| c.is_positive()));
        }
    }

    #[test]
    fn cone_hv_round_trip(c in simplicial()) {
        for g in c.vrep() {
            prop_assert!(c.hrep().iter().all(|a| !dot(a, g).is_negative()));
        }
        let back = Cone::from_hrep(3, c.hrep()).unwrap();
        prop_assert!(back.contains_cone(&c) && c.contains_cone(&back));
        let x = c.interior_point().unwrap();
        prop_assert!(in_open(&c, &x));
        prop_assert!(!c.neg().contains_open(&x));
    }

    #[test]
    fn region_set_algebra(a in region(), b in region(), probes in prop::collection::vec(ray(3, 9), 24)) {
        let u = a.union(&b);
        let d = a.difference(&b);
        let i = a.intersection(&b);
        let c = a.complement();
        prop_assert!(u.contains_region(&a) && u.contains_region(&b));
        prop_assert!(a.contains_region(&i) && b.contains_region(&i));
        prop_assert!(a.contains_region(&d));
        prop_assert!(a.antipode().antipode().same_set(&a));
        prop_assert!(u.same_set(&b.union(&a)));
        for x in probes.iter().filter(|x| generic_probe(x, &[&a, &b])) {
            let (ia, ib) = (in_region(&a, x), in_region(&b, x));
            prop_assert_eq!(in_region(&u, x), ia || ib);
            prop_assert_eq!(in_region(&i, x), ia && ib);
            prop_assert_eq!(in_region(&d, x), ia && !ib);
            prop_assert_eq!(in_region(&c, x), !ia);
            prop_assert_eq!(a.contains(x), ia);
            prop_assert_eq!(a.antipode().contains(&x.neg()), ia);
        }
    }

    #[test]
    fn arrangement_euler(normals in prop::collection::vec(ray(3, 4), 1..=6)) {
        let mut seen = Vec::new();
        let ns: Vec<Ray> = normals
            .into_iter()
            .filter(|r| {
                let u = r.unoriented();
                if seen.contains(&u) { false } else { seen.push(u); true }
            })
            .collect();
        let s = Arrangement::build(&ns).unwrap().stats();
        prop_assert!(s.euler_ok);
        if ns.len() >= 2 {
            prop_assert_eq!(s.vertices + s.faces, s.edges + 2);
            prop_assert_eq!(s.face_edge_counts.iter().sum::<usize>(), 2 * s.edges);
        } else {
            prop_assert_eq!((s.vertices, s.edges, s.faces), (0, 1, 2));
        }
    }

    #[test]
    fn tameness_verdicts_verify(r in region(), m in 2usize..=4) {
        let v = is_m_tame(&r, m);
        prop_assert!(v.verify(&r));
        if let Some(w) = v.witness() {
            prop_assert!(w.len() <= m);
            prop_assert!(w.points().iter().all(|p| in_region(&r, p)));
        }
    }
}

#[test]
fn hemisphere_is_three_tame_and_whole_is_not() {
    let h = Region::hemisphere(&Ray::from_ints(&[0, 0, 1]).unwrap());
    assert!(is_m_tame(&h, 3).is_tame());
    assert!(!is_m_tame(&Region::whole(3), 2).is_tame());
}
