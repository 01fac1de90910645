//! Dense integer matrices, Hermite normal form, lattice kernels and cokernels.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{Int, IntVec, Rat, RatVec};
use crate::error::{Error, Result};

/// A dense integer matrix stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[IntVec]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<IntVec> = rows.iter().map(|r| crate::arith::ivec(r)).collect();
        Self::from_rows(cols, &rows)
    }

    pub fn from_columns(rows: usize, cols: &[IntVec]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix columns");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> IntVec {
        self.row(i).to_vec()
    }

    pub fn column(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> IntVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| crate::arith::dot(self.row(i), v)).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows: Vec<IntVec> = idx.iter().map(|&i| self.row_vec(i)).collect();
        Self::from_rows(self.cols, &rows)
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let cols: Vec<IntVec> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_rows())
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.to_rows();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix, or `None` if the matrix is not invertible over Z.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let inv = rat_inverse(&self.to_rat_rows())?;
        let mut out = Self::zeros(self.rows, self.cols);
        for (i, row) in inv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_integer() {
                    return None;
                }
                out[(i, j)] = x.to_integer();
            }
        }
        Some(out)
    }

    pub fn to_rat_rows(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| crate::arith::to_rat(self.row(i))).collect()
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64().expect("entry fits in i64")).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    // row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row Hermite normal form: returns `(H, U)` with `U * A = H`, `U` unimodular.
///
/// `H` is in row echelon form with positive pivots, and every entry above a
/// pivot lies in `[0, pivot)`. Zero rows sit at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let pivot = (row..m)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(p, row);
            u.swap_rows(p, row);
            let mut clean = true;
            for i in row + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(row, col)]);
                h.sub_row_multiple(i, row, &q);
                u.sub_row_multiple(i, row, &q);
                if !h[(i, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_row(row);
            u.negate_row(row);
        }
        for i in 0..row {
            let q = h[(i, col)].div_floor(&h[(row, col)]);
            h.sub_row_multiple(i, row, &q);
            u.sub_row_multiple(i, row, &q);
        }
        row += 1;
    }
    (h, u)
}

/// Pivot positions `(row, col)` of a matrix in row echelon form.
pub fn pivots(h: &IntMatrix) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..h.rows() {
        if let Some(j) = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) {
            out.push((i, j));
        }
    }
    out
}

/// Nonzero Smith invariant factors, in divisibility order.
pub fn smith_invariants(a: &IntMatrix) -> Vec<Int> {
    let mut cur = a.clone();
    // Alternate row and column Hermite reductions until the matrix is diagonal.
    loop {
        let (h, _) = hnf(&cur);
        let (h2, _) = hnf(&h.transpose());
        let d = h2.transpose();
        let diagonal = (0..d.rows())
            .all(|i| (0..d.cols()).all(|j| i == j || d[(i, j)].is_zero()));
        cur = d;
        if diagonal {
            break;
        }
    }
    let mut diag: Vec<Int> = (0..cur.rows().min(cur.cols()))
        .map(|i| cur[(i, i)].abs())
        .filter(|x| !x.is_zero())
        .collect();
    // Fix up divisibility: replace (a, b) by (gcd, lcm) until sorted chain.
    let k = diag.len();
    for i in 0..k {
        for j in i + 1..k {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Basis of the integer kernel `{x : A x = 0}` as rows, in Hermite normal form.
pub fn kernel_basis(a: &IntMatrix) -> Vec<IntVec> {
    let d = a.cols();
    let (h, u) = hnf(&a.transpose());
    let r = pivots(&h).len();
    let basis: Vec<IntVec> = (r..d).map(|i| u.row_vec(i)).collect();
    if basis.is_empty() {
        return basis;
    }
    let (hb, _) = hnf(&IntMatrix::from_rows(d, &basis));
    hb.to_rows().into_iter().filter(|r| !crate::arith::is_zero(r)).collect()
}

/// A lattice map `pi` onto the cokernel of an injective `a`, with a section `c`.
///
/// `a` is the matrix of a map `Z^r -> Z^m` (so `m x r`). The result satisfies
/// `pi * a = 0`, `pi * c = I`, and `pi` is surjective.
pub fn cokernel_with_section(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let m = a.rows();
    let r = a.cols();
    let (h, u) = hnf(a);
    let piv = pivots(&h);
    if piv.len() < r {
        return Err(Error::NotInjective { rank: piv.len(), cols: r });
    }
    let factors: Vec<Int> = piv.iter().map(|&(i, j)| h[(i, j)].clone()).collect();
    if factors.iter().any(|x| !x.is_one()) {
        let inv = smith_invariants(a);
        return Err(Error::TorsionCokernel {
            factors: inv.iter().map(|x| x.to_string()).collect(),
        });
    }
    let u_inv = u.unimodular_inverse().expect("hnf transform is unimodular");
    let pi_rows: Vec<IntVec> = (r..m).map(|i| u.row_vec(i)).collect();
    let pi = IntMatrix::from_rows(m, &pi_rows);
    let c_cols: Vec<IntVec> = (r..m).map(|j| u_inv.column(j)).collect();
    let c = IntMatrix::from_columns(m, &c_cols);
    Ok((pi, c))
}

/// Rank over Q of a list of integer rows.
pub fn rank(rows: &[IntVec]) -> usize {
    let rr: Vec<RatVec> = rows.iter().map(|r| crate::arith::to_rat(r)).collect();
    rat_row_echelon(rr).len()
}

/// Nonzero rows of the reduced row echelon form (over Q).
pub fn rat_row_echelon(mut a: Vec<RatVec>) -> Vec<RatVec> {
    let m = a.len();
    if m == 0 {
        return a;
    }
    let n = a[0].len();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(p, row);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let v = &a[row][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        row += 1;
    }
    a.truncate(row);
    a
}

/// Solves `A x = b` over Q. Returns one solution if the system is consistent.
pub fn rat_solve(a: &[RatVec], b: &[Rat]) -> Option<RatVec> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<RatVec> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !aug[i][col].is_zero()) else { continue };
        aug.swap(p, row);
        let inv = aug[row][col].recip();
        for x in aug[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..=n {
                    let v = &aug[row][j] * &f;
                    aug[i][j] -= v;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some(x)
}

pub fn rat_inverse(a: &[RatVec]) -> Option<Vec<RatVec>> {
    let n = a.len();
    let mut aug: Vec<RatVec> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(p, col);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..2 * n {
                    let v = &aug[col][j] * &f;
                    aug[i][j] -= v;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
