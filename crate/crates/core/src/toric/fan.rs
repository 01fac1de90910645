use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::IntVec;
use crate::cone::RationalCone;
use crate::matrix::{rank, IntMatrix};

/// A simplicial fan given by rays indexed like the coordinates of `V` and
/// cones as sets of ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricFan {
    lattice_rank: usize,
    /// `π_* ε_i` for every coordinate `i`, used or not.
    rays: Vec<IntVec>,
    /// Every cone of the fan, faces included, sorted by size then lexicographically.
    cones: Vec<Vec<usize>>,
    maximal: Vec<Vec<usize>>,
}

impl ToricFan {
    pub fn new(lattice_rank: usize, rays: Vec<IntVec>, maximal: Vec<Vec<usize>>) -> Self {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for m in &maximal {
            let k = m.len();
            for mask in 0u64..(1u64 << k) {
                let face: Vec<usize> =
                    (0..k).filter(|b| mask & (1 << b) != 0).map(|b| m[b]).collect();
                all.insert(face);
            }
        }
        let mut cones: Vec<Vec<usize>> = all.into_iter().collect();
        cones.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut maximal = maximal;
        for m in maximal.iter_mut() {
            m.sort();
        }
        maximal.sort();
        maximal.dedup();
        ToricFan { lattice_rank, rays, cones, maximal }
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    /// Indices of rays that appear in some cone.
    pub fn used_rays(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.maximal.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    pub fn cone(&self, indices: &[usize]) -> RationalCone {
        let gens: Vec<IntVec> = indices.iter().map(|&i| self.rays[i].clone()).collect();
        RationalCone::generated_by(self.lattice_rank, &gens).expect("rays live in N")
    }

    /// Every listed cone has linearly independent rays.
    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| {
            let rows: Vec<IntVec> = c.iter().map(|&i| self.rays[i].clone()).collect();
            rank(&rows) == c.len()
        })
    }

    /// Every face of a listed cone is listed, and every listed cone's faces
    /// are exactly the sub-simplices.
    pub fn is_face_closed(&self) -> bool {
        let listed: BTreeSet<&Vec<usize>> = self.cones.iter().collect();
        for c in &self.cones {
            for skip in 0..c.len() {
                let mut f = c.clone();
                f.remove(skip);
                if !listed.contains(&f) {
                    return false;
                }
            }
        }
        true
    }

    /// `σ_{J1} ∩ σ_{J2} = σ_{J1 ∩ J2}` for all cones, by exact cone intersection.
    pub fn intersections_are_faces(&self) -> bool {
        // In a simplicial fan, faces of two maximal cones meet inside the
        // common face, where they are coordinate faces again; so maximal
        // pairs suffice.
        let list = if self.is_simplicial() { &self.maximal } else { &self.cones };
        let cones: Vec<RationalCone> = list.iter().map(|c| self.cone(c)).collect();
        for (i, a) in list.iter().enumerate() {
            for (j, b) in list.iter().enumerate().skip(i + 1) {
                let meet: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                let lhs = cones[i].intersection(&cones[j]).expect("same lattice");
                if lhs != self.cone(&meet) {
                    return false;
                }
            }
        }
        true
    }

    /// Is there a lattice automorphism of `N` carrying this fan onto `other`?
    ///
    /// Tries every way of sending the rays of one full-rank maximal cone onto
    /// the rays of a maximal cone of `other`; each choice pins down at most one
    /// linear map, which is then checked for integrality, unimodularity and
    /// compatibility with all cones.
    pub fn is_isomorphic(&self, other: &ToricFan) -> bool {
        if self.lattice_rank != other.lattice_rank
            || self.cones.len() != other.cones.len()
            || self.maximal.len() != other.maximal.len()
        {
            return false;
        }
        let n = self.lattice_rank;
        if n == 0 {
            return true;
        }
        let Some(base) = self.maximal.iter().find(|m| {
            let rows: Vec<IntVec> = m.iter().map(|&i| self.rays[i].clone()).collect();
            m.len() == n && rank(&rows) == n
        }) else {
            return false;
        };
        let src = IntMatrix::from_columns(n, &base.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>());
        let src_inv = crate::matrix::rat_inverse(&src.to_rat_rows()).expect("full rank");
        for target in other.maximal.iter().filter(|m| m.len() == n) {
            for perm in permutations(target) {
                let dst = IntMatrix::from_columns(
                    n,
                    &perm.iter().map(|&i| other.rays[i].clone()).collect::<Vec<_>>(),
                );
                let Some(u) = integral_product(&dst, &src_inv) else { continue };
                if !u.is_unimodular() {
                    continue;
                }
                if self.maps_onto(other, &u) {
                    return true;
                }
            }
        }
        false
    }

    fn maps_onto(&self, other: &ToricFan, u: &IntMatrix) -> bool {
        let mut image: BTreeMap<usize, usize> = BTreeMap::new();
        for i in self.used_rays() {
            let v = u.mul_vec(&self.rays[i]);
            let Some(j) = other.used_rays().into_iter().find(|&j| other.rays[j] == v) else {
                return false;
            };
            image.insert(i, j);
        }
        let mapped: BTreeSet<Vec<usize>> = self
            .maximal
            .iter()
            .map(|m| {
                let mut c: Vec<usize> = m.iter().map(|i| image[i]).collect();
                c.sort();
                c
            })
            .collect();
        let theirs: BTreeSet<Vec<usize>> = other.maximal.iter().cloned().collect();
        mapped == theirs
    }
}

fn integral_product(a: &IntMatrix, b: &[crate::arith::RatVec]) -> Option<IntMatrix> {
    let n = a.rows();
    let k = b[0].len();
    let mut out = IntMatrix::zeros(n, k);
    for i in 0..n {
        for j in 0..k {
            let mut acc = crate::arith::Rat::from_integer(0.into());
            for (l, row) in b.iter().enumerate() {
                acc += &row[j] * &a[(i, l)];
            }
            if !acc.is_integer() {
                return None;
            }
            out[(i, j)] = acc.to_integer();
        }
    }
    Some(out)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}
