//! Two-phase simplex over exact rationals.
//!
//! Solves `min c.x  s.t.  A x = b, x >= 0` with Bland's pivoting rule,
//! which rules out cycling without any perturbation. Problem sizes here
//! are tiny (a handful of rows, tens of columns), so the dense tableau is
//! the right data structure.

use num_traits::{One, Signed, Zero};

use crate::rational::{Rational, RationalVec};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { objective: Rational, solution: Vec<Rational> },
}

struct Tableau {
    /// `m x (ncols + 1)` rows, right-hand side in the last column.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone().recip();
        for entry in self.rows[row].iter_mut() {
            *entry = &*entry * &inv;
        }
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..=self.ncols {
                let update = &factor * &self.rows[row][c];
                self.rows[r][c] = &self.rows[r][c] - &update;
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost . x` from the current basic feasible point.
    /// `allowed` masks columns the entering rule may consider.
    /// Returns `false` when the problem is unbounded below.
    fn minimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&j| {
                if !allowed(j) || self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() {
                        reduced -= &cost[b] * &self.rows[i][j];
                    }
                }
                reduced.is_negative()
            });
            let Some(col) = entering else {
                return true; // optimal
            };
            let mut leaving: Option<usize> = None;
            let mut best: Option<Rational> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.ncols] / &self.rows[i][col];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && self.basis[i] < self.basis[leaving.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leaving = Some(i);
                }
            }
            let Some(row) = leaving else {
                return false; // unbounded
            };
            self.pivot(row, col);
        }
    }

    fn solution(&self, nvars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); nvars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < nvars {
                x[b] = self.rows[i][self.ncols].clone();
            }
        }
        x
    }
}

/// Solves `min c.x  s.t.  A x = b, x >= 0` exactly.
pub(crate) fn solve_standard(
    a: &[Vec<Rational>],
    b: &[Rational],
    c: &[Rational],
) -> LpOutcome {
    let m = a.len();
    let n = if m == 0 { c.len() } else { a[0].len() };
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);
    debug_assert_eq!(c.len(), n);

    // Phase 1 tableau: [A | I | b] with signs arranged so b >= 0.
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = Vec::with_capacity(ncols + 1);
        for j in 0..n {
            row.push(if flip { -&a[i][j] } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { Rational::one() } else { Rational::zero() });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), ncols };

    let phase1_cost: Vec<Rational> = (0..ncols)
        .map(|j| if j < n { Rational::zero() } else { Rational::one() })
        .collect();
    t.minimize(&phase1_cost, &|_| true);
    let infeasibility: Rational = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| t.rows[i][t.ncols].clone())
        .fold(Rational::zero(), |acc, v| acc + v);
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining zero-level artificials out of the basis; a row with no
    // structural entry left is a redundant constraint and is dropped.
    let mut i = 0;
    while i < t.basis.len() {
        if t.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, col);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    let mut phase2_cost = c.to_vec();
    phase2_cost.extend(std::iter::repeat(Rational::zero()).take(m));
    if !t.minimize(&phase2_cost, &|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let solution = t.solution(n);
    let objective = c
        .iter()
        .zip(&solution)
        .map(|(ci, xi)| ci * xi)
        .fold(Rational::zero(), |acc, v| acc + v);
    LpOutcome::Optimal { objective, solution }
}

/// Exact barycentric certificate: coefficients `lambda >= 0`, `sum = 1`
/// with `sum lambda_i points[i] = target`, if any exist.
pub(crate) fn convex_combination(
    points: &[RationalVec],
    target: &RationalVec,
) -> Option<Vec<Rational>> {
    let n = points.len();
    if n == 0 {
        return None;
    }
    let d = target.dim();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(d + 1);
    a.push(vec![Rational::one(); n]);
    for r in 0..d {
        a.push(points.iter().map(|p| p.get(r).clone()).collect());
    }
    let mut b = vec![Rational::one()];
    b.extend(target.entries().iter().cloned());
    match solve_standard(&a, &b, &vec![Rational::zero(); n]) {
        LpOutcome::Optimal { solution, .. } => Some(solution),
        _ => None,
    }
}

/// Maximizes the uniform margin `t` over representations
/// `target = sum lambda_i points[i]` with `lambda_i >= t, sum lambda = 1`.
///
/// Returns `(t, lambda)`; `t > 0` certifies relative interior, `t = 0`
/// relative boundary. `None` means `target` is not in the convex hull.
pub(crate) fn max_margin_combination(
    points: &[RationalVec],
    target: &RationalVec,
) -> Option<(Rational, Vec<Rational>)> {
    let n = points.len();
    if n == 0 {
        return None;
    }
    let d = target.dim();
    // Variables: t, s_1..s_n with lambda_i = t + s_i.
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(d + 1);
    let mut row = vec![Rational::from_integer((n as i64).into())];
    row.extend(std::iter::repeat(Rational::one()).take(n));
    a.push(row);
    for r in 0..d {
        let col_sum = points
            .iter()
            .map(|p| p.get(r).clone())
            .fold(Rational::zero(), |acc, v| acc + v);
        let mut row = vec![col_sum];
        row.extend(points.iter().map(|p| p.get(r).clone()));
        a.push(row);
    }
    let mut b = vec![Rational::one()];
    b.extend(target.entries().iter().cloned());
    let mut c = vec![-Rational::one()];
    c.extend(std::iter::repeat(Rational::zero()).take(n));
    match solve_standard(&a, &b, &c) {
        LpOutcome::Optimal { solution, .. } => {
            let t = solution[0].clone();
            let lambda: Vec<Rational> = (0..n).map(|i| &t + &solution[i + 1]).collect();
            Some((t, lambda))
        }
        LpOutcome::Infeasible => None,
        // t <= lambda_i <= 1 keeps the objective bounded.
        LpOutcome::Unbounded => unreachable!("margin LP is bounded"),
    }
}
