//! Torus fixed loci on Grassmannians.
//!
//! `GL_m` acts on `M_{m×n}` and `𝒯 = C^*` scales column `k` by `t^{w_k}`; the
//! stable quotient for `det` is a Grassmannian. Grouping equal weights into
//! blocks of sizes `q_1, ..., q_k` (largest weight first), the fixed components
//! are products `Π_i Gr_{t_i}(C^{q_{j_i}})` with `t_1 + ... + t_l = m`,
//! `1 <= j_1 < ... < j_l <= k` and `t_i <= q_{j_i}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannProblem {
    pub m: usize,
    pub n: usize,
    pub weights: Vec<i64>,
}

impl GrassmannProblem {
    pub fn new(m: usize, n: usize, weights: Vec<i64>) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::Invalid(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
        }
        if weights.len() != n {
            return Err(Error::DimMismatch { expected: n, found: weights.len() });
        }
        Ok(GrassmannProblem { m, n, weights })
    }

    /// `(weight, multiplicity)` of each block, weights decreasing.
    pub fn blocks(&self) -> Vec<(i64, usize)> {
        let mut w = self.weights.clone();
        w.sort_unstable_by(|a, b| b.cmp(a));
        let mut out: Vec<(i64, usize)> = Vec::new();
        for x in w {
            match out.last_mut() {
                Some((y, c)) if *y == x => *c += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannComponent {
    pub l: usize,
    /// `0 = s_0 < s_1 < ... < s_l = m`.
    pub s_seq: Vec<usize>,
    /// Block indices, 1-based and increasing.
    pub j_seq: Vec<usize>,
    /// `(t_i, q_{j_i})`: the factor `Gr_{t_i}(C^{q_{j_i}})`.
    pub factors: Vec<(usize, usize)>,
    pub dimension: usize,
}

/// All fixed components, ordered by `l`, then `s_seq`, then `j_seq`.
pub fn classify(p: &GrassmannProblem) -> Vec<GrassmannComponent> {
    let q: Vec<usize> = p.blocks().iter().map(|b| b.1).collect();
    let mut out = Vec::new();
    for l in 1..=p.m.min(q.len()) {
        for t in compositions(p.m, l) {
            for j in increasing(q.len(), l) {
                if t.iter().zip(&j).all(|(ti, ji)| *ti <= q[*ji]) {
                    let mut s_seq = vec![0];
                    for ti in &t {
                        s_seq.push(s_seq.last().unwrap() + ti);
                    }
                    let factors: Vec<(usize, usize)> = t.iter().zip(&j).map(|(ti, ji)| (*ti, q[*ji])).collect();
                    out.push(GrassmannComponent {
                        l,
                        s_seq,
                        j_seq: j.iter().map(|x| x + 1).collect(),
                        dimension: factors.iter().map(|(t, q)| t * (q - t)).sum(),
                        factors,
                    });
                }
            }
        }
    }
    out
}

pub fn component_count(p: &GrassmannProblem) -> usize {
    classify(p).len()
}

fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return if n >= 1 { vec![vec![n]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..n {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn increasing(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}
