use std::collections::BTreeSet;

use crate::arith::{IntVec, RatVec};
use crate::matrix::{rank, rat_inverse, IntMatrix};

/// All lattice maps `f: Z^dx -> Z^dy` for which `E_f = {x : (x, f(x)) ∈ E}`
/// spans `Q^dx`, as `dy × dx` matrices in sorted order.
///
/// Any such `f` is determined by its values on a basis contained in `E_f`,
/// so it is enough to solve `F X_B = Y_B` for every subset `B ⊆ E` whose
/// `x`-parts form a basis and keep the integral solutions.
pub fn enumerate_linear_maps(dx: usize, dy: usize, e: &[(IntVec, IntVec)]) -> Vec<IntMatrix> {
    for (x, y) in e {
        assert_eq!(x.len(), dx, "source vector has wrong dimension");
        assert_eq!(y.len(), dy, "target vector has wrong dimension");
    }
    let mut found: BTreeSet<IntMatrix> = BTreeSet::new();
    let mut chosen = Vec::with_capacity(dx);
    choose(e, dx, dy, 0, &mut chosen, &mut found);
    found.into_iter().filter(|f| spans(dx, e, f)).collect()
}

fn choose(
    e: &[(IntVec, IntVec)],
    dx: usize,
    dy: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    found: &mut BTreeSet<IntMatrix>,
) {
    if chosen.len() == dx {
        if let Some(f) = solve_on_basis(e, dx, dy, chosen) {
            found.insert(f);
        }
        return;
    }
    for i in start..e.len() {
        chosen.push(i);
        let xs: Vec<IntVec> = chosen.iter().map(|&j| e[j].0.clone()).collect();
        if rank(&xs) == chosen.len() {
            choose(e, dx, dy, i + 1, chosen, found);
        }
        chosen.pop();
    }
}

fn solve_on_basis(
    e: &[(IntVec, IntVec)],
    dx: usize,
    dy: usize,
    basis: &[usize],
) -> Option<IntMatrix> {
    let xcols: Vec<IntVec> = basis.iter().map(|&j| e[j].0.clone()).collect();
    let x = IntMatrix::from_columns(dx, &xcols);
    let x_inv: Vec<RatVec> = rat_inverse(&x.to_rat_rows())?;
    let mut f = IntMatrix::zeros(dy, dx);
    for i in 0..dy {
        for j in 0..dx {
            let mut acc = crate::arith::rat(0);
            for (k, &b) in basis.iter().enumerate() {
                acc += &x_inv[k][j] * &e[b].1[i];
            }
            if !acc.is_integer() {
                return None;
            }
            f[(i, j)] = acc.to_integer();
        }
    }
    Some(f)
}

/// Does `E_f` span `Q^dx`?
pub fn spans(dx: usize, e: &[(IntVec, IntVec)], f: &IntMatrix) -> bool {
    let ef: Vec<IntVec> = e
        .iter()
        .filter(|(x, y)| &f.mul_vec(x) == y)
        .map(|(x, _)| x.clone())
        .collect();
    rank(&ef) == dx
}
