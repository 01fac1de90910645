//! Exact rational linear feasibility.
//!
//! A small phase-one simplex over `BigRational` with Bland's rule, enough for
//! cone membership and the direct stability formulation. Sizes here are tiny
//! (tens of variables), so the dense tableau is fine.

use num_traits::{One, Signed, Zero};

use crate::arith::{Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

/// A system of linear constraints over rational variables, some of which
/// may be sign-free.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    n_vars: usize,
    free: Vec<bool>,
    rows: Vec<(RatVec, Relation, Rat)>,
}

impl LinearSystem {
    /// All variables nonnegative by default.
    pub fn new(n_vars: usize) -> Self {
        LinearSystem { n_vars, free: vec![false; n_vars], rows: Vec::new() }
    }

    pub fn with_free_vars(n_vars: usize) -> Self {
        LinearSystem { n_vars, free: vec![true; n_vars], rows: Vec::new() }
    }

    pub fn set_free(&mut self, var: usize, free: bool) {
        self.free[var] = free;
    }

    pub fn constrain(&mut self, coeffs: RatVec, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.rows.push((coeffs, rel, rhs));
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<RatVec> {
        // Column layout: for each variable its positive part, then a negative
        // part for free variables, then one slack per inequality.
        let mut col_of = Vec::with_capacity(self.n_vars);
        let mut ncols = 0;
        for &f in &self.free {
            col_of.push((ncols, if f { Some(ncols + 1) } else { None }));
            ncols += if f { 2 } else { 1 };
        }
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        let n_slack = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let total = ncols + n_slack;
        let mut slack = ncols;
        for (coeffs, rel, rhs) in &self.rows {
            let mut row = vec![Rat::zero(); total];
            for (v, c) in coeffs.iter().enumerate() {
                let (p, n) = col_of[v];
                row[p] = c.clone();
                if let Some(n) = n {
                    row[n] = -c;
                }
            }
            match rel {
                Relation::Eq => {}
                Relation::Ge => {
                    row[slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Le => {
                    row[slack] = Rat::one();
                    slack += 1;
                }
            }
            a.push(row);
            b.push(rhs.clone());
        }
        let y = feasible_nonneg(&a, &b)?;
        Some(
            col_of
                .iter()
                .map(|&(p, n)| match n {
                    Some(n) => &y[p] - &y[n],
                    None => y[p].clone(),
                })
                .collect(),
        )
    }
}

/// Finds `x >= 0` with `A x = b`, or reports infeasibility.
pub fn feasible_nonneg(a: &[RatVec], b: &[Rat]) -> Option<RatVec> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    if m == 0 {
        return Some(vec![Rat::zero(); n]);
    }
    // Tableau rows: [A | I | b] with b >= 0; artificials are columns n..n+m.
    let width = n + m + 1;
    let mut t: Vec<RatVec> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![Rat::zero(); width];
        for j in 0..n {
            row[j] = if flip { -&a[i][j] } else { a[i][j].clone() };
        }
        row[n + i] = Rat::one();
        row[width - 1] = if flip { -&b[i] } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs for minimizing the sum of artificials.
    let mut cost = vec![Rat::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let lhs = &t[i][width - 1] * &t[l][enter];
                    let rhs = &t[l][width - 1] * &t[i][enter];
                    if lhs < rhs || (lhs == rhs && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let l = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, l, enter);
        basis[l] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [RatVec], cost: &mut RatVec, l: usize, e: usize) {
    let width = cost.len();
    let inv = t[l][e].recip();
    for x in t[l].iter_mut() {
        *x *= &inv;
    }
    let prow = t[l].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == l || row[e].is_zero() {
            continue;
        }
        let f = row[e].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                row[j] -= &prow[j] * &f;
            }
        }
    }
    if !cost[e].is_zero() {
        let f = cost[e].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                cost[j] -= &prow[j] * &f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rvec};

    #[test]
    fn simple_feasible_and_infeasible() {
        // x + y = 1, x - y = 3  => x = 2, y = -1 (infeasible with y >= 0)
        let a = vec![rvec(&[1, 1]), rvec(&[1, -1])];
        assert!(feasible_nonneg(&a, &[rat(1), rat(3)]).is_none());
        let x = feasible_nonneg(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, rvec(&[2, 1]));
    }

    #[test]
    fn free_variables_and_inequalities() {
        let mut sys = LinearSystem::with_free_vars(2);
        sys.constrain(rvec(&[1, 0]), Relation::Ge, rat(0));
        sys.constrain(rvec(&[0, 1]), Relation::Le, rat(-2));
        sys.constrain(rvec(&[1, 1]), Relation::Eq, rat(0));
        let x = sys.solve().unwrap();
        assert!(x[0] >= rat(0) && x[1] <= rat(-2) && &x[0] + &x[1] == rat(0));
        sys.constrain(rvec(&[1, 0]), Relation::Le, rat(1));
        assert!(sys.solve().is_none());
    }

    #[test]
    fn degenerate_system_terminates() {
        let a = vec![rvec(&[1, 1, 1, 0]), rvec(&[1, -1, 0, 1]), rvec(&[2, 0, 1, 1])];
        let x = feasible_nonneg(&a, &[rat(0), rat(0), rat(0)]).unwrap();
        assert!(x.iter().all(|v| v == &rat(0)));
    }
}
