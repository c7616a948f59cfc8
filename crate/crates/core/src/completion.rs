//! Constructive pipelines on top of the predicates: hemisphere separators,
//! arrangement coarsening, maxtame completion on the 2-sphere and the
//! merging step for regions with `n + 2` components.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[cfg(test)]
use alloc::vec;

use itertools::Itertools;

use crate::arrangement::Arrangement;
use crate::cone::Cone;
use crate::exact::{Rational, Ray};
use crate::lp::{self, Rows};
use crate::region::Region;
use crate::tameness::{is_balanced, is_m_tame, maxtame_certificate, TamenessVerdict};
use crate::Error;

/// One addition made by [`complete_maxtame_s2`].
#[derive(Clone, Debug)]
pub struct CompletionStep {
    pub operation: String,
    /// Index of the tetrahedral face being processed, if any.
    pub face: Option<usize>,
    pub added: Vec<Cone>,
    /// Number of residual addable cells before this step.
    pub residual_cells: usize,
    pub region: Region,
}

#[derive(Clone, Debug)]
pub struct CompletionTrace {
    pub input: Region,
    /// The region after arrangement coarsening.
    pub coarsened: Region,
    /// Separating hemispheres used for the coarsening.
    pub hemispheres: Vec<Ray>,
    /// The balanced four-point set steering the face loop, if one was used.
    pub balanced_four: Vec<Ray>,
    pub steps: Vec<CompletionStep>,
    pub final_region: Region,
    pub certified: bool,
}

/// Feasible `v` for `v . x > 0` on `strict`, `v . g >= 0` on `weak`.
fn hemisphere_lp(n: usize, strict: &[Ray], weak: &[Ray]) -> Option<Ray> {
    let s: Vec<Vec<Rational>> = strict.iter().map(Ray::to_rationals).collect();
    let w: Vec<Vec<Rational>> = weak.iter().map(Ray::to_rationals).collect();
    if s.is_empty() {
        return None;
    }
    lp::motzkin(Rows { dim: n, strict: &s, weak: &w, eq: &[] }).solution().and_then(|x| Ray::new(&x).ok())
}

/// An open hemisphere `{v . x > 0}` containing `points` whose boundary
/// misses `region`: every component lies entirely on one side.
///
/// Sign assignments of the components are searched in a fixed order;
/// components holding one of the points are forced onto the positive side.
/// Separators whose boundary also avoids the closure of the region are
/// preferred.
pub fn separator(points: &[Ray], region: &Region) -> Result<Ray, Error> {
    let n = region.dim();
    if points.iter().any(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: points.iter().find(|p| p.dim() != n).unwrap().dim() });
    }
    if let Some(w) = is_balanced(points) {
        return Err(Error::NoSeparator(format!("the points are balanced: {w}")));
    }
    let comps = region.components();
    let forced: Vec<bool> = comps.iter().map(|c| points.iter().any(|p| c.contains_closure(p))).collect();
    let free: Vec<usize> = (0..comps.len()).filter(|&i| !forced[i]).collect();
    if free.len() > 16 {
        return Err(Error::InvalidInput(format!("{} free components is too many for the sign search", free.len())));
    }
    for strict_boundary in [true, false] {
        for mask in 0u32..(1u32 << free.len()) {
            let mut strict: Vec<Ray> = points.to_vec();
            let mut weak: Vec<Ray> = Vec::new();
            for (ci, comp) in comps.iter().enumerate() {
                let positive = match free.iter().position(|&f| f == ci) {
                    Some(bit) => mask >> bit & 1 == 0,
                    None => true,
                };
                for cell in comp.cells() {
                    for g in cell.vrep() {
                        let g = if positive { g.clone() } else { g.neg() };
                        if strict_boundary {
                            strict.push(g);
                        } else {
                            weak.push(g);
                        }
                    }
                }
            }
            if let Some(v) = hemisphere_lp(n, &strict, &weak) {
                return Ok(v);
            }
        }
    }
    Err(Error::NoSeparator(format!(
        "no hemisphere contains the {} point(s) with boundary avoiding all {} component(s)",
        points.len(),
        comps.len()
    )))
}

/// Coarsens an `n`-tame region on the 2-sphere to the union of the faces of
/// the separator arrangement that it meets. One hemisphere is chosen for
/// every `min(n, #components)`-subset of component representatives.
pub fn weakly_maxtame_coarsen(region: &Region) -> Result<(Region, Vec<Ray>), Error> {
    let n = region.dim();
    if n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if let TamenessVerdict::NotTame { m, witness } = is_m_tame(region, n) {
        return Err(Error::NotTame { m, witness });
    }
    let reps = region.representatives();
    if reps.is_empty() {
        return Ok((region.clone(), Vec::new()));
    }
    let mut hemispheres: Vec<Ray> = Vec::new();
    for subset in reps.iter().cloned().combinations(n.min(reps.len())) {
        let v = separator(&subset, region)?;
        if !hemispheres.iter().any(|h| h.unoriented() == v.unoriented()) {
            hemispheres.push(v);
        }
    }
    let circles: Vec<Ray> = hemispheres.iter().map(Ray::unoriented).collect();
    let arr = Arrangement::build(&circles)?;
    let out = arr.coarsen_to_region(region)?;
    if out.component_count() > region.component_count() {
        return Err(Error::Invariant("coarsening increased the number of components".into()));
    }
    Ok((out, hemispheres))
}

/// Open hemisphere containing a region that is `(n+1)`-tame.
fn enclosing_hemisphere(region: &Region) -> Result<Ray, Error> {
    let n = region.dim();
    let interior: Vec<Ray> = region.cells().iter().map(|c| c.interior_point()).collect::<Result<_, _>>()?;
    let gens: Vec<Ray> = region.cells().iter().flat_map(|c| c.vrep().iter().cloned()).collect();
    hemisphere_lp(n, &interior, &gens)
        .ok_or_else(|| Error::NoSeparator("region is not contained in an open hemisphere".into()))
}

fn check_three_tame(region: &Region, context: &str) -> Result<(), Error> {
    match is_m_tame(region, 3) {
        TamenessVerdict::Tame { .. } => Ok(()),
        TamenessVerdict::NotTame { witness, .. } => {
            Err(Error::Invariant(format!("{context}: region lost 3-tameness ({witness})")))
        }
    }
}

/// Allowed component counts of maxtame regions of the 2-sphere.
pub fn component_count_allowed(n: usize, count: usize) -> bool {
    count == 1 || count == n + 1 || count >= n + 3
}

/// Completion of a 3-tame open region of the 2-sphere to a maxtame region.
///
/// After coarsening, a region that is 4-tame lies in an open hemisphere,
/// which is returned. Otherwise a balanced four-point set `F` splits the
/// sphere into the four open triangles spanned by three points of `-F`. The
/// faces are visited in order; inside each face the first residual addable
/// component is added, the addable set is recomputed, and this repeats
/// until the face holds no residual. Every intermediate region is checked
/// for 3-tameness.
pub fn complete_maxtame_s2(region: &Region) -> Result<CompletionTrace, Error> {
    complete_maxtame_s2_with_cap(region, None)
}

pub fn complete_maxtame_s2_with_cap(region: &Region, cap: Option<usize>) -> Result<CompletionTrace, Error> {
    let n = region.dim();
    if n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let (coarsened, hemispheres) = weakly_maxtame_coarsen(region)?;
    let mut trace = CompletionTrace {
        input: region.clone(),
        coarsened: coarsened.clone(),
        hemispheres,
        balanced_four: Vec::new(),
        steps: Vec::new(),
        final_region: coarsened.clone(),
        certified: false,
    };

    let four = is_m_tame(&coarsened, 4);
    let Some(witness) = four.witness().cloned() else {
        let v = if coarsened.is_empty() { Ray::basis(3, 2) } else { enclosing_hemisphere(&coarsened)? };
        let h = Region::hemisphere(&v);
        trace.steps.push(CompletionStep {
            operation: "hemisphere".into(),
            face: None,
            added: h.cells().to_vec(),
            residual_cells: 0,
            region: h.clone(),
        });
        trace.certified = maxtame_certificate(&h)?.certified;
        trace.final_region = h;
        return finish(trace);
    };
    if witness.len() != 4 {
        return Err(Error::Invariant(format!("balanced witness of size {} in a 3-tame region", witness.len())));
    }
    trace.balanced_four = witness.points().to_vec();
    let neg: Vec<Ray> = witness.points().iter().map(Ray::neg).collect();
    let faces: Vec<Cone> = (0..4)
        .map(|i| {
            let gens: Vec<Ray> = neg.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
            Cone::from_vrep(3, &gens)
        })
        .collect::<Result<_, _>>()?;

    let cap = cap.unwrap_or_else(|| {
        let circles = coarsened.bounding_normals();
        let cells = Arrangement::build(&circles).map(|a| a.faces().len()).unwrap_or(1);
        64 * cells.max(1)
    });
    let mut current = coarsened;
    let mut iterations = 0usize;
    loop {
        let report = maxtame_certificate(&current)?;
        if report.certified {
            trace.certified = true;
            break;
        }
        let mut progressed = false;
        for (fi, face) in faces.iter().enumerate() {
            loop {
                let residual = maxtame_certificate(&current)?.residual;
                let inside = residual.intersection(&Region::from_cones(3, [face.clone()]));
                if inside.is_empty() {
                    break;
                }
                iterations += 1;
                if iterations > cap {
                    trace.final_region = current;
                    return Err(Error::IterationCap { cap, trace: alloc::boxed::Box::new(trace) });
                }
                let comp = inside.components().into_iter().next().expect("nonempty region has a component");
                let mut candidate = current.union(&comp);
                let mut added = comp.cells().to_vec();
                if !is_m_tame(&candidate, 3).is_tame() {
                    let first = Region::from_cones(3, [comp.cells()[0].clone()]);
                    candidate = current.union(&first);
                    added = first.cells().to_vec();
                }
                check_three_tame(&candidate, "completion step")?;
                if !candidate.contains_region(&current) {
                    return Err(Error::Invariant("completion step lost part of the region".into()));
                }
                trace.steps.push(CompletionStep {
                    operation: "add-addable-component".into(),
                    face: Some(fi),
                    added,
                    residual_cells: residual.cells().len(),
                    region: candidate.clone(),
                });
                current = candidate;
                progressed = true;
            }
        }
        if !progressed {
            // Residual material lying on face boundaries only.
            let residual = maxtame_certificate(&current)?.residual;
            let comp = residual.components().into_iter().next().expect("uncertified region has residual");
            let candidate = current.union(&comp);
            check_three_tame(&candidate, "completion step")?;
            trace.steps.push(CompletionStep {
                operation: "add-addable-component".into(),
                face: None,
                added: comp.cells().to_vec(),
                residual_cells: residual.cells().len(),
                region: candidate.clone(),
            });
            current = candidate;
            iterations += 1;
            if iterations > cap {
                trace.final_region = current;
                return Err(Error::IterationCap { cap, trace: alloc::boxed::Box::new(trace) });
            }
        }
    }
    trace.final_region = current;
    finish(trace)
}

fn finish(trace: CompletionTrace) -> Result<CompletionTrace, Error> {
    if !trace.final_region.contains_region(&trace.input) {
        return Err(Error::Invariant("completion output does not contain its input".into()));
    }
    let count = trace.final_region.component_count();
    if trace.certified && !component_count_allowed(3, count) {
        return Err(Error::Invariant(format!("certified maxtame region with {count} components")));
    }
    Ok(trace)
}

/// Outcome of [`reduce_n_plus_2`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub region: Region,
    /// Components merged by their convex hull, if any.
    pub merged: Option<(usize, usize)>,
    pub note: String,
}

/// Merges two components of an `n`-tame region with `n + 2` components so
/// that the result is still `n`-tame with at most `n + 1` components.
pub fn reduce_n_plus_2(region: &Region) -> Result<Reduction, Error> {
    let n = region.dim();
    if let TamenessVerdict::NotTame { m, witness } = is_m_tame(region, n) {
        return Err(Error::NotTame { m, witness });
    }
    let comps = region.components();
    if comps.len() != n + 2 {
        return Err(Error::InvalidInput(format!("expected {} components, found {}", n + 2, comps.len())));
    }
    let reps = region.representatives();
    if is_balanced(&reps).is_none() {
        return Ok(Reduction {
            region: region.clone(),
            merged: None,
            note: "representatives lie in an open hemisphere; the region is hemisphere-confined".into(),
        });
    }
    let omitted: Vec<usize> = (0..reps.len())
        .filter(|&i| {
            let rest: Vec<Ray> = reps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
            is_balanced(&rest).is_some()
        })
        .collect();
    if omitted.len() != 2 {
        return Err(Error::Invariant(format!(
            "expected exactly two balanced (n+1)-subsets of representatives, found {}",
            omitted.len()
        )));
    }
    let (a, b) = (omitted[0], omitted[1]);
    let gens: Vec<Ray> =
        comps[a].cells().iter().chain(comps[b].cells()).flat_map(|c| c.vrep().iter().cloned()).collect();
    let hull = Cone::from_vrep(n, &gens)?;
    let merged = region.union(&Region::from_cones(n, [hull]));
    match is_m_tame(&merged, n) {
        TamenessVerdict::Tame { .. } => {}
        TamenessVerdict::NotTame { witness, .. } => {
            return Err(Error::Invariant(format!("merged region is not {n}-tame: {witness}")));
        }
    }
    let count = merged.component_count();
    if count > n + 1 {
        return Err(Error::Invariant(format!("merged region still has {count} components")));
    }
    Ok(Reduction { region: merged, merged: Some((a, b)), note: format!("merged components {a} and {b} by their hull") })
}
