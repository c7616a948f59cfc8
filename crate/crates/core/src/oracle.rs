//! Randomised falsification checks built on exact rational sampling.
//!
//! Random points are integer combinations of cell generators or integer
//! vectors with bounded entries, so every sampled test is exact.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{solve_strict, LinearSystem, Rational, Ray};
use crate::region::Region;
use crate::tameness::{addable_set, is_balanced, subsets, BalancedWitness};
use crate::{Cone, Error};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Bound on the integer weights and coordinates drawn.
    pub denominator_bound: u32,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { seed: 0, samples: 10_000, denominator_bound: 64 }
    }
}

impl SampleConfig {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn bound(&self) -> i64 {
        i64::from(self.denominator_bound.max(1))
    }
}

/// A point of the open cone: a combination of its extreme rays with
/// positive integer weights.
pub fn random_point_in(cell: &Cone, rng: &mut impl Rng, bound: i64) -> Option<Ray> {
    let gens = cell.vrep();
    if gens.is_empty() || !cell.is_fulldim() {
        return None;
    }
    let weights: Vec<Rational> = gens.iter().map(|_| Rational::from_integer(rng.random_range(1..=bound).into())).collect();
    Ray::combine(gens, &weights)
}

/// A nonzero integer vector with entries in `[-bound, bound]`.
pub fn random_ray(n: usize, rng: &mut impl Rng, bound: i64) -> Ray {
    loop {
        let c: Vec<i64> = (0..n).map(|_| rng.random_range(-bound..=bound)).collect();
        if let Ok(r) = Ray::from_ints(&c) {
            return r;
        }
    }
}

/// Searches for a balanced subset of at most `m` points of the region by
/// sampling. A returned witness always verifies; `None` is only evidence.
pub fn falsify_tameness(region: &Region, m: usize, cfg: SampleConfig) -> Option<BalancedWitness> {
    let cells = region.cells();
    if cells.is_empty() || m == 0 {
        return None;
    }
    let mut rng = cfg.rng();
    let bound = cfg.bound();
    let size = m.min(cells.len().max(2));
    for _ in 0..cfg.samples {
        let mut pts = Vec::with_capacity(size);
        if cells.len() >= size {
            // Distinct cells, chosen by a partial shuffle.
            let mut idx: Vec<usize> = (0..cells.len()).collect();
            for i in 0..size {
                let j = rng.random_range(i..idx.len());
                idx.swap(i, j);
            }
            idx.truncate(size);
            pts.extend(idx.iter().filter_map(|&i| random_point_in(&cells[i], &mut rng, bound)));
        } else {
            for _ in 0..size {
                let i = rng.random_range(0..cells.len());
                pts.extend(random_point_in(&cells[i], &mut rng, bound));
            }
        }
        if pts.len() < 2 {
            continue;
        }
        if let Some(w) = is_balanced(&pts) {
            if w.verify() {
                return Some(w);
            }
        }
    }
    None
}

/// Whether some `y_1, ..., y_j` (`j <= n - 1`, from distinct cells) and
/// `t > 0` satisfy `t x + y_1 + ... + y_j = 0`, decided by one strict
/// feasibility problem per subset of cells.
pub fn completes_balanced_set(region: &Region, x: &Ray) -> Result<bool, Error> {
    Prober::new(region).completes(x)
}

/// Cell subsets with their separating normals, reused across probes.
struct Prober<'a> {
    region: &'a Region,
    families: Vec<(Vec<usize>, Vec<Ray>)>,
}

impl<'a> Prober<'a> {
    fn new(region: &'a Region) -> Prober<'a> {
        let n = region.dim();
        let cells = region.cells();
        let mut families = Vec::new();
        for j in 1..=(n - 1).min(cells.len()) {
            for family in subsets(cells.len(), j) {
                // A facet normal of one member that is nonnegative on every
                // other member is positive on any sum y_1 + ... + y_j.
                let mut normals = Vec::new();
                for &ci in &family {
                    for a in cells[ci].hrep() {
                        let valid = family
                            .iter()
                            .filter(|&&cj| cj != ci)
                            .all(|&cj| cells[cj].vrep().iter().all(|g| a.dot(g) >= 0.into()));
                        if valid {
                            normals.push(a.clone());
                        }
                    }
                }
                families.push((family, normals));
            }
        }
        Prober { region, families }
    }

    fn completes(&self, x: &Ray) -> Result<bool, Error> {
        let n = self.region.dim();
        let cells = self.region.cells();
        for (family, normals) in &self.families {
            if normals.iter().any(|a| a.dot(x) >= 0.into()) {
                continue;
            }
            let j = family.len();
            let vars = 1 + n * j;
            let mut sys = LinearSystem::new(vars);
            let mut row = alloc::vec![Rational::zero(); vars];
            row[0] = Rational::from_integer(1.into());
            sys = sys.strict(row);
            for (slot, &ci) in family.iter().enumerate() {
                for a in cells[ci].hrep() {
                    let mut row = alloc::vec![Rational::zero(); vars];
                    for (k, ak) in a.coords().iter().enumerate() {
                        row[1 + n * slot + k] = Rational::from_integer(ak.clone());
                    }
                    sys = sys.strict(row);
                }
            }
            for k in 0..n {
                let mut row = alloc::vec![Rational::zero(); vars];
                row[0] = Rational::from_integer(x.coords()[k].clone());
                for slot in 0..j {
                    row[1 + n * slot + k] = Rational::from_integer(1.into());
                }
                let neg: Vec<Rational> = row.iter().map(|q| -q).collect();
                sys = sys.weak(row).weak(neg);
            }
            if solve_strict(&sys)?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub samples: usize,
    pub addable: usize,
    pub not_addable: usize,
    /// Samples drawn from inside the region.
    pub inside: usize,
}

/// Compares membership in the hull-based addable set with direct probing
/// by [`completes_balanced_set`] on random rays and random region points.
/// Any disagreement is an error.
pub fn cross_check_addable(region: &Region, cfg: SampleConfig) -> Result<CrossCheckReport, Error> {
    let n = region.dim();
    let add = addable_set(region)?;
    let prober = Prober::new(region);
    let mut rng = cfg.rng();
    let bound = cfg.bound();
    let mut report = CrossCheckReport::default();
    for s in 0..cfg.samples {
        // Every fourth sample is drawn from the region itself.
        let from_region = s % 4 == 3 && !region.is_empty();
        let x = if from_region {
            let i = rng.random_range(0..region.cells().len());
            match random_point_in(&region.cells()[i], &mut rng, bound) {
                Some(x) => x,
                None => continue,
            }
        } else {
            random_ray(n, &mut rng, bound)
        };
        let hull_says = add.contains(&x);
        let probe_says = !prober.completes(&x)?;
        if hull_says != probe_says {
            return Err(Error::Invariant(format!(
                "addability of {x} disagrees: hull test says {hull_says}, direct probe says {probe_says}"
            )));
        }
        if from_region && !hull_says {
            return Err(Error::Invariant(format!("point {x} of the region is not addable")));
        }
        report.samples += 1;
        report.inside += usize::from(from_region);
        if hull_says {
            report.addable += 1;
        } else {
            report.not_addable += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::simplex_family;

    #[test]
    fn hemisphere_has_no_witness() {
        let h = Region::hemisphere(&Ray::from_ints(&[0, 0, 1]).unwrap());
        let cfg = SampleConfig { samples: 200, ..SampleConfig::default() };
        assert!(falsify_tameness(&h, 3, cfg).is_none());
    }

    #[test]
    fn simplex_family_four_witness() {
        let r = simplex_family(3).unwrap();
        let cfg = SampleConfig { samples: 2000, seed: 3, denominator_bound: 16 };
        let w = falsify_tameness(&r, 4, cfg).expect("balanced 4-set");
        assert!(w.verify());
        assert!(falsify_tameness(&r, 3, SampleConfig { samples: 300, ..cfg }).is_none());
    }

    #[test]
    fn addable_paths_agree_on_simplex_family() {
        let r = simplex_family(3).unwrap();
        let rep = cross_check_addable(&r, SampleConfig { samples: 300, seed: 9, denominator_bound: 5 }).unwrap();
        assert_eq!(rep.samples, 300);
        assert!(rep.addable > 0 && rep.not_addable > 0);
    }
}
