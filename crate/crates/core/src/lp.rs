//! Exact dense simplex over the rationals (two phases, Bland's rule).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// Multipliers `y` of the equality rows: `Aᵀy ≤ c` and `bᵀy = value`.
    pub dual: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = j;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut r = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !self.rows[i][j].is_zero() {
                r -= &cost[b] * &self.rows[i][j];
            }
        }
        r
    }

    /// Runs simplex iterations for `cost`; `false` when unbounded.
    fn optimize(&mut self, cost: &[Rational], enterable: usize) -> bool {
        loop {
            let entering = (0..enterable)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_negative());
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if a.is_positive() {
                    let ratio = self.rhs(i) / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }
}

/// Minimises `cᵀx` subject to `A x = b`, `x ≥ 0`.
pub fn minimize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut signs = vec![false; m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        assert_eq!(a[i].len(), n, "constraint row length");
        let flip = b[i].is_negative();
        signs[i] = flip;
        let mut row = vec![Rational::zero(); width + 1];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rational::from_integer(1.into());
        row[width] = if flip { -b[i].clone() } else { b[i].clone() };
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), width };

    // Phase 1: drive the artificial variables to zero.
    let mut phase1 = vec![Rational::zero(); width];
    for x in phase1.iter_mut().skip(n) {
        *x = Rational::from_integer(1.into());
    }
    t.optimize(&phase1, width);
    let infeasibility = (0..m).filter(|&i| t.basis[i] >= n).fold(Rational::zero(), |acc, i| acc + t.rhs(i));
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            }
        }
    }

    // Phase 2 on the original objective; artificials may not re-enter.
    let mut cost = vec![Rational::zero(); width];
    cost[..n].clone_from_slice(c);
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }

    let mut primal = vec![Rational::zero(); n];
    for (i, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            primal[bj] = t.rhs(i).clone();
        }
    }
    let value = primal.iter().zip(c).fold(Rational::zero(), |acc, (x, cj)| acc + x * cj);
    // The artificial block of the tableau holds B⁻¹.
    let dual = (0..m)
        .map(|k| {
            let y = t.basis.iter().enumerate().fold(Rational::zero(), |acc, (i, &bj)| acc + &cost[bj] * &t.rows[i][n + k]);
            if signs[k] { -y } else { y }
        })
        .collect();
    LpOutcome::Optimal(LpSolution { value, primal, dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    #[test]
    fn small_lp_with_duals() {
        // min x + y  s.t.  x + 2y = 4, 3x + y = 6.
        let c = [q(1), q(1)];
        let a = [vec![q(1), q(2)], vec![q(3), q(1)]];
        let b = [q(4), q(6)];
        let LpOutcome::Optimal(sol) = minimize(&c, &a, &b) else { panic!() };
        assert_eq!(sol.primal, vec![q_frac(8, 5), q_frac(6, 5)]);
        assert_eq!(sol.value, q_frac(14, 5));
        let by = sol.dual.iter().zip(&b).fold(Rational::zero(), |acc, (y, bi)| acc + y * bi);
        assert_eq!(by, sol.value);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = [vec![q(1)]];
        assert_eq!(minimize(&[q(1)], &a, &[q(-1)]), LpOutcome::Infeasible);
        let a = [vec![q(1), q(-1)]];
        assert_eq!(minimize(&[q(0), q(-1)], &a, &[q(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_dual_sign() {
        // min x  s.t. -x = -3  →  x = 3, y = -1.
        let LpOutcome::Optimal(sol) = minimize(&[q(1)], &[vec![q(-1)]], &[q(-3)]) else { panic!() };
        assert_eq!(sol.value, q(3));
        assert_eq!(sol.dual, vec![q(-1)]);
    }
}
