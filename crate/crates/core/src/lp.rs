//! Exact feasibility kernel for homogeneous linear systems.
//!
//! Every predicate in the crate reduces to one question: does a system
//!
//! ```text
//!     a_i . x > 0   (strict rows)
//!     b_j . x >= 0  (weak rows)
//!     c_k . x = 0   (equations)
//! ```
//!
//! have a solution? Motzkin's transposition theorem says that exactly one of
//! the following holds: the system is solvable, or there are `y >= 0` with
//! `sum(y) = 1`, `z >= 0` and free `w` such that
//! `sum y_i a_i + sum z_j b_j + sum w_k c_k = 0`.
//!
//! We decide it by running phase one of the simplex method on the second
//! system. A zero optimum gives the certificate directly. A positive optimum
//! leaves simplex multipliers `pi` with `pi . col <= 0` for every column and
//! `pi . rhs > 0`; negating the coordinate part of `pi` yields a solution of
//! the first system. Bland's rule keeps the pivoting finite.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Outcome of [`motzkin`].
#[derive(Clone, Debug)]
pub(crate) enum Alternative {
    /// A point satisfying every row. May be the zero vector when there are
    /// no strict rows.
    Solution(Vec<Rational>),
    /// Nonnegative multipliers for strict and weak rows (strict ones sum to
    /// one) and free multipliers for equations, combining to zero.
    Certificate {
        strict: Vec<Rational>,
        weak: Vec<Rational>,
        eq: Vec<Rational>,
    },
}

impl Alternative {
    pub(crate) fn solution(self) -> Option<Vec<Rational>> {
        match self {
            Alternative::Solution(x) => Some(x),
            Alternative::Certificate { .. } => None,
        }
    }
}

/// Borrowed view of a homogeneous system.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rows<'a> {
    pub dim: usize,
    pub strict: &'a [Vec<Rational>],
    pub weak: &'a [Vec<Rational>],
    pub eq: &'a [Vec<Rational>],
}

pub(crate) fn motzkin(rows: Rows<'_>) -> Alternative {
    let d = rows.dim;
    let ns = rows.strict.len();
    let nw = rows.weak.len();
    let ne = rows.eq.len();
    let nvars = ns + nw + 2 * ne;
    let m = d + 1;
    let ncols = nvars + m;

    // Column-major assembly of the coefficient part.
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(nvars);
    for a in rows.strict {
        let mut c = a.clone();
        c.push(Rational::one());
        cols.push(c);
    }
    for b in rows.weak {
        let mut c = b.clone();
        c.push(Rational::zero());
        cols.push(c);
    }
    for c in rows.eq {
        let mut p = c.clone();
        p.push(Rational::zero());
        let mut n: Vec<Rational> = c.iter().map(|v| -v).collect();
        n.push(Rational::zero());
        cols.push(p);
        cols.push(n);
    }

    let mut tab: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let mut rhs: Vec<Rational> = vec![Rational::zero(); m];
    rhs[d] = Rational::one();
    let mut basis: Vec<usize> = (nvars..ncols).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost: Vec<Rational> = (0..ncols)
        .map(|j| {
            let base = if j >= nvars { Rational::one() } else { Rational::zero() };
            tab.iter().fold(base, |acc, row| acc - &row[j])
        })
        .collect();
    // Negated phase-one objective, updated alongside the reduced costs.
    let mut objective: Rational = rhs.iter().fold(Rational::zero(), |acc, r| acc - r);

    while let Some(enter) = (0..nvars).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let (p, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut rhs, &mut cost, &mut objective, p, enter);
        basis[p] = enter;
    }

    if objective.is_zero() {
        let mut values = vec![Rational::zero(); nvars];
        for (i, &b) in basis.iter().enumerate() {
            if b < nvars {
                values[b] = rhs[i].clone();
            }
        }
        let strict = values[..ns].to_vec();
        let weak = values[ns..ns + nw].to_vec();
        let eq = (0..ne)
            .map(|k| &values[ns + nw + 2 * k] - &values[ns + nw + 2 * k + 1])
            .collect();
        Alternative::Certificate { strict, weak, eq }
    } else {
        // pi_i = 1 - reduced cost of artificial i.
        let x: Vec<Rational> = (0..d).map(|i| &cost[nvars + i] - Rational::one()).collect();
        Alternative::Solution(x)
    }
}

fn pivot(
    tab: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    cost: &mut [Rational],
    objective: &mut Rational,
    p: usize,
    q: usize,
) {
    let piv = tab[p][q].clone();
    if !piv.is_one() {
        for v in tab[p].iter_mut() {
            if !v.is_zero() {
                *v = &*v / &piv;
            }
        }
        rhs[p] = &rhs[p] / &piv;
    }
    let prow = tab[p].clone();
    let prhs = rhs[p].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v = &*v - &f * pv;
            }
        }
        rhs[i] = &rhs[i] - &f * &prhs;
    }
    if !cost[q].is_zero() {
        let f = cost[q].clone();
        for (v, pv) in cost.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v = &*v - &f * pv;
            }
        }
        *objective = &*objective - &f * &prhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn quadrant_is_feasible() {
        let strict = [q(&[1, 0]), q(&[0, 1])];
        let alt = motzkin(Rows { dim: 2, strict: &strict, weak: &[], eq: &[] });
        let x = alt.solution().unwrap();
        assert!(x[0].is_positive() && x[1].is_positive());
    }

    #[test]
    fn opposite_rows_give_certificate() {
        let strict = [q(&[1, 0]), q(&[-1, 0])];
        match motzkin(Rows { dim: 2, strict: &strict, weak: &[], eq: &[] }) {
            Alternative::Certificate { strict, .. } => {
                assert_eq!(strict[0], strict[1]);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn equations_restrict_solutions() {
        // x > 0, y > 0, x = y.
        let strict = [q(&[1, 0]), q(&[0, 1])];
        let eq = [q(&[1, -1])];
        let x = motzkin(Rows { dim: 2, strict: &strict, weak: &[], eq: &eq })
            .solution()
            .unwrap();
        assert_eq!(x[0], x[1]);
        // x > 0 with x = -y and y >= 0 is impossible.
        let strict = [q(&[1, 0])];
        let weak = [q(&[0, 1])];
        let eq = [q(&[1, 1])];
        assert!(motzkin(Rows { dim: 2, strict: &strict, weak: &weak, eq: &eq }).solution().is_none());
    }
}
