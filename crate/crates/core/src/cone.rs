//! Rational polyhedral cones.
//!
//! A [`RationalCone`] always carries both descriptions: a canonical generator
//! list and an inequality description (facet normals plus equations of the
//! linear span). Both are produced by a double description pass, so two
//! cones are equal as sets exactly when their canonical forms agree.
//!
//! Canonical generators are: the extreme rays of the cone modulo its
//! lineality space, each projected orthogonally onto the complement of the
//! lineality space and made primitive, together with `±b` for the Hermite
//! basis `b` of the lineality lattice. The list is sorted lexicographically.
//!
//! Interior membership for a cone that is not full-dimensional means relative
//! interior: strict inequality on every facet and equality on the equations
//! of the span.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{
    dot, is_zero, mixed_dot, neg, primitive, primitive_from_rat, qform, scale_add, Int, IntVec,
    Rat, RatVec,
};
use crate::error::{Error, Result};
use crate::lp::feasible_nonneg;
use crate::matrix::{kernel_basis, rank, rat_solve, IntMatrix};

/// Lineality basis and extreme rays of `{y : a . y >= 0 for all a}`.
#[derive(Clone, Debug)]
struct DoubleDescription {
    lineality: Vec<IntVec>,
    rays: Vec<IntVec>,
}

fn double_description(dim: usize, inequalities: &[IntVec]) -> DoubleDescription {
    let mut lineality: Vec<IntVec> = (0..dim)
        .map(|i| (0..dim).map(|j| Int::from((i == j) as i64)).collect())
        .collect();
    let mut rays: Vec<IntVec> = Vec::new();
    let mut processed: Vec<IntVec> = Vec::new();

    for a in inequalities {
        assert_eq!(a.len(), dim, "inequality has wrong dimension");
        if is_zero(a) {
            continue;
        }
        if let Some(k) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lineality.swap_remove(k);
            if dot(a, &l).is_negative() {
                l = neg(&l);
            }
            let al = dot(a, &l);
            for other in lineality.iter_mut() {
                let ao = dot(a, other);
                *other = primitive(&scale_add(other, &al, &l, &-ao));
            }
            for r in rays.iter_mut() {
                let ar = dot(a, r);
                *r = primitive(&scale_add(r, &al, &l, &-ar));
            }
            rays.push(l);
        } else {
            let mut next = Vec::new();
            let mut pos = Vec::new();
            let mut negs = Vec::new();
            for r in rays.drain(..) {
                let ar = dot(a, &r);
                if ar.is_positive() {
                    pos.push((r, ar));
                } else if ar.is_negative() {
                    negs.push((r, ar));
                } else {
                    next.push(r);
                }
            }
            for (p, ap) in &pos {
                for (n, an) in &negs {
                    next.push(primitive(&scale_add(n, ap, p, &-an)));
                }
            }
            next.extend(pos.into_iter().map(|(r, _)| r));
            rays = next;
        }
        processed.push(a.clone());
        rays = prune_rays(dim, &processed, &lineality, rays);
    }

    let lineality = if lineality.is_empty() {
        Vec::new()
    } else {
        kernel_basis(&IntMatrix::from_rows(dim, &processed))
    };
    let mut rays = prune_rays(dim, &processed, &lineality, rays);
    rays.sort();
    DoubleDescription { lineality, rays }
}

/// Projects rays off the lineality space, removes duplicates and keeps only
/// extreme rays (rank test on the tight inequalities).
fn prune_rays(
    dim: usize,
    processed: &[IntVec],
    lineality: &[IntVec],
    rays: Vec<IntVec>,
) -> Vec<IntVec> {
    let target_rank = dim - lineality.len();
    let mut out: Vec<IntVec> = Vec::new();
    for r in rays {
        let r = project_off(&r, lineality);
        if is_zero(&r) || out.contains(&r) {
            continue;
        }
        let tight: Vec<IntVec> = processed
            .iter()
            .filter(|a| dot(a, &r).is_zero())
            .cloned()
            .collect();
        if target_rank == 0 || rank(&tight) + 1 == target_rank {
            out.push(r);
        }
    }
    out
}

/// Orthogonal projection onto the complement of `span(basis)`, made primitive.
fn project_off(v: &[Int], basis: &[IntVec]) -> IntVec {
    if basis.is_empty() {
        return primitive(v);
    }
    let gram: Vec<RatVec> = basis
        .iter()
        .map(|b| basis.iter().map(|c| Rat::from_integer(dot(b, c))).collect())
        .collect();
    let rhs: RatVec = basis.iter().map(|b| Rat::from_integer(dot(b, v))).collect();
    let coef = rat_solve(&gram, &rhs).expect("lineality basis is independent");
    let mut p: RatVec = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
    for (c, b) in coef.iter().zip(basis) {
        for (pi, bi) in p.iter_mut().zip(b) {
            *pi -= c * bi;
        }
    }
    primitive_from_rat(&p)
}

/// A rational polyhedral cone in `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalCone {
    dim: usize,
    generators: Vec<IntVec>,
    #[serde(skip)]
    lineality: Vec<IntVec>,
    #[serde(skip)]
    rays: Vec<IntVec>,
    /// Inner facet normals (`f . x >= 0`).
    #[serde(skip)]
    facets: Vec<IntVec>,
    /// Equations of the linear span (`e . x = 0`).
    #[serde(skip)]
    equations: Vec<IntVec>,
}

impl RationalCone {
    /// The cone generated by `generators` (nonnegative combinations).
    pub fn generated_by(dim: usize, generators: &[IntVec]) -> Result<Self> {
        for g in generators {
            if g.len() != dim {
                return Err(Error::DimMismatch { expected: dim, found: g.len() });
            }
        }
        let dual = double_description(dim, generators);
        let mut h: Vec<IntVec> = dual.rays.clone();
        for e in &dual.lineality {
            h.push(e.clone());
            h.push(neg(e));
        }
        let own = double_description(dim, &h);
        Ok(Self::assemble(dim, own, dual))
    }

    /// The cone `{x : a . x >= 0 for every a in inequalities}`.
    pub fn from_inequalities(dim: usize, inequalities: &[IntVec]) -> Result<Self> {
        for a in inequalities {
            if a.len() != dim {
                return Err(Error::DimMismatch { expected: dim, found: a.len() });
            }
        }
        let own = double_description(dim, inequalities);
        Self::generated_by(dim, &Self::gens_of(&own))
    }

    pub fn full_space(dim: usize) -> Self {
        Self::from_inequalities(dim, &[]).expect("no inequalities")
    }

    pub fn zero(dim: usize) -> Self {
        Self::generated_by(dim, &[]).expect("no generators")
    }

    fn gens_of(dd: &DoubleDescription) -> Vec<IntVec> {
        let mut g = dd.rays.clone();
        for l in &dd.lineality {
            g.push(l.clone());
            g.push(neg(l));
        }
        g.sort();
        g.dedup();
        g
    }

    fn assemble(dim: usize, own: DoubleDescription, dual: DoubleDescription) -> Self {
        let generators = Self::gens_of(&own);
        RationalCone {
            dim,
            generators,
            lineality: own.lineality,
            rays: own.rays,
            facets: dual.rays,
            equations: dual.lineality,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    /// Extreme rays modulo the lineality space.
    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    /// Inner normals of the facets.
    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    /// Equations cutting out the linear span.
    pub fn equations(&self) -> &[IntVec] {
        &self.equations
    }

    /// Lattice basis of the lineality space `C ∩ -C`.
    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn is_fulldim(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero_cone(&self) -> bool {
        self.generators.is_empty()
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    /// The dual cone `{y : x . y >= 0 for all x in C}`.
    pub fn dual(&self) -> RationalCone {
        let generators = {
            let mut g = self.facets.clone();
            for e in &self.equations {
                g.push(e.clone());
                g.push(neg(e));
            }
            g.sort();
            g.dedup();
            g
        };
        RationalCone {
            dim: self.dim,
            generators,
            lineality: self.equations.clone(),
            rays: self.facets.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: n });
        }
        Ok(())
    }

    /// Membership by LP feasibility: is `x` a nonnegative combination of the generators?
    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        self.check_dim(x.len())?;
        if self.generators.is_empty() {
            return Ok(x.iter().all(Zero::is_zero));
        }
        let a: Vec<RatVec> = (0..self.dim)
            .map(|i| {
                self.generators
                    .iter()
                    .map(|g| Rat::from_integer(g[i].clone()))
                    .collect()
            })
            .collect();
        Ok(feasible_nonneg(&a, x).is_some())
    }

    pub fn contains_int(&self, x: &[Int]) -> Result<bool> {
        self.contains(&crate::arith::to_rat(x))
    }

    /// Membership via the inequality description.
    pub fn satisfies_inequalities(&self, x: &[Rat]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(self.equations.iter().all(|e| mixed_dot(e, x).is_zero())
            && self.facets.iter().all(|f| !mixed_dot(f, x).is_negative()))
    }

    /// Relative-interior membership.
    pub fn interior_contains(&self, x: &[Rat]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(self.equations.iter().all(|e| mixed_dot(e, x).is_zero())
            && self.facets.iter().all(|f| mixed_dot(f, x).is_positive()))
    }

    /// Does this cone contain every generator of `other`?
    pub fn contains_cone(&self, other: &RationalCone) -> Result<bool> {
        self.check_dim(other.dim)?;
        for g in &other.generators {
            if !self.satisfies_inequalities(&crate::arith::to_rat(g))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn intersection(&self, other: &RationalCone) -> Result<RationalCone> {
        self.check_dim(other.dim)?;
        let mut h = Vec::new();
        for c in [self, other] {
            h.extend(c.facets.iter().cloned());
            for e in &c.equations {
                h.push(e.clone());
                h.push(neg(e));
            }
        }
        RationalCone::from_inequalities(self.dim, &h)
    }

    /// Nearest point of the cone to `x` in the norm of the positive definite form `q`.
    ///
    /// The minimizer is `G_A λ` for some set `A` of linearly independent
    /// generators with `λ >= 0` solving the normal equations on `A`; it is
    /// recognised by `g^T Q (x - p) <= 0` for every generator `g`.
    pub fn project(&self, x: &[Rat], q: &[IntVec]) -> Result<RatVec> {
        self.check_dim(x.len())?;
        if q.len() != self.dim || q.iter().any(|r| r.len() != self.dim) {
            return Err(Error::DimMismatch { expected: self.dim, found: q.len() });
        }
        let gens: Vec<RatVec> = self.generators.iter().map(|g| crate::arith::to_rat(g)).collect();
        let k = gens.len();
        let maxsize = k.min(self.dim);
        let mut subset = Vec::new();
        for size in 0..=maxsize {
            if let Some(p) = search_subsets(&gens, x, q, size, 0, &mut subset) {
                return Ok(p);
            }
        }
        unreachable!("a projection always exists on some independent face")
    }
}

fn search_subsets(
    gens: &[RatVec],
    x: &[Rat],
    q: &[IntVec],
    size: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> Option<RatVec> {
    if chosen.len() == size {
        return try_face(gens, x, q, chosen);
    }
    for i in start..gens.len() {
        chosen.push(i);
        if let Some(p) = search_subsets(gens, x, q, size, i + 1, chosen) {
            return Some(p);
        }
        chosen.pop();
    }
    None
}

fn try_face(gens: &[RatVec], x: &[Rat], q: &[IntVec], subset: &[usize]) -> Option<RatVec> {
    let dim = x.len();
    let mut p = vec![Rat::zero(); dim];
    if !subset.is_empty() {
        let normal: Vec<RatVec> = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| qform(q, &gens[i], &gens[j])).collect())
            .collect();
        let rhs: RatVec = subset.iter().map(|&i| qform(q, &gens[i], x)).collect();
        // Dependent subsets have a singular Gram matrix; skip them.
        let rows: Vec<IntVec> = subset.iter().map(|&i| primitive_from_rat(&gens[i])).collect();
        if rank(&rows) < subset.len() {
            return None;
        }
        let lambda = rat_solve(&normal, &rhs)?;
        if lambda.iter().any(|l| l.is_negative()) {
            return None;
        }
        for (l, &i) in lambda.iter().zip(subset) {
            for (pj, gj) in p.iter_mut().zip(&gens[i]) {
                *pj += l * gj;
            }
        }
    }
    let resid: RatVec = x.iter().zip(&p).map(|(a, b)| a - b).collect();
    if gens.iter().all(|g| !qform(q, g, &resid).is_positive()) {
        Some(p)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{identity_form, ivec, rvec};

    fn cone(dim: usize, gens: &[&[i64]]) -> RationalCone {
        let g: Vec<IntVec> = gens.iter().map(|v| ivec(v)).collect();
        RationalCone::generated_by(dim, &g).unwrap()
    }

    #[test]
    fn quadrant_is_self_dual() {
        let c = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(c.dual(), c);
        assert!(c.is_fulldim() && c.is_pointed());
    }

    #[test]
    fn dual_of_a_ray_is_a_halfplane() {
        let c = cone(2, &[&[1, 0]]);
        let d = c.dual();
        assert_eq!(d, cone(2, &[&[1, 0], &[0, 1], &[0, -1]]));
        assert_eq!(d.generators(), &[ivec(&[0, -1]), ivec(&[0, 1]), ivec(&[1, 0])]);
        assert_eq!(d.lineality(), &[ivec(&[0, 1])]);
    }

    #[test]
    fn dual_of_full_space_is_zero() {
        let full = cone(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]);
        assert_eq!(full, RationalCone::full_space(3));
        assert!(full.dual().generators().is_empty());
        assert_eq!(RationalCone::zero(3).dual(), full);
    }

    #[test]
    fn canonical_form_drops_redundant_generators() {
        let a = cone(2, &[&[1, 0], &[2, 2], &[0, 3], &[1, 2]]);
        assert_eq!(a.generators(), &[ivec(&[0, 1]), ivec(&[1, 0])]);
        let b = cone(2, &[&[1, 1], &[0, 1], &[0, -1]]);
        assert_eq!(b, cone(2, &[&[1, 0], &[0, 1], &[0, -1]]));
    }

    #[test]
    fn membership_examples() {
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        assert!(q.contains(&rvec(&[1, 1])).unwrap());
        assert!(q.interior_contains(&rvec(&[1, 1])).unwrap());
        assert!(q.contains(&rvec(&[1, 0])).unwrap());
        assert!(!q.interior_contains(&rvec(&[1, 0])).unwrap());
        let c = cone(2, &[&[1, 0], &[1, 2]]);
        assert!(c.interior_contains(&rvec(&[1, 1])).unwrap());
        assert!(!c.contains(&rvec(&[1, 3])).unwrap());
        assert!(matches!(c.contains(&rvec(&[1])), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn relative_interior_of_lower_dimensional_cone() {
        let c = cone(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(!c.is_fulldim());
        assert_eq!(c.span_dim(), 2);
        assert!(c.interior_contains(&rvec(&[1, 1, 0])).unwrap());
        assert!(!c.interior_contains(&rvec(&[1, 1, 1])).unwrap());
        assert!(!c.interior_contains(&rvec(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn lineality_of_halfspace() {
        let h = RationalCone::from_inequalities(3, &[ivec(&[0, 0, 1])]).unwrap();
        assert_eq!(h.lineality().len(), 2);
        assert_eq!(h.facets(), &[ivec(&[0, 0, 1])]);
    }

    #[test]
    fn intersection_of_halfplanes() {
        let a = RationalCone::from_inequalities(2, &[ivec(&[1, 0])]).unwrap();
        let b = RationalCone::from_inequalities(2, &[ivec(&[0, 1])]).unwrap();
        assert_eq!(a.intersection(&b).unwrap(), cone(2, &[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn projection_examples() {
        let id = identity_form(2);
        let half = RationalCone::from_inequalities(2, &[ivec(&[1, 0])]).unwrap();
        assert_eq!(half.project(&rvec(&[-1, -1]), &id).unwrap(), rvec(&[0, -1]));
        assert_eq!(half.project(&rvec(&[3, -5]), &id).unwrap(), rvec(&[3, -5]));
        let z = RationalCone::zero(2);
        assert_eq!(z.project(&rvec(&[4, 7]), &id).unwrap(), rvec(&[0, 0]));
    }

    #[test]
    fn projection_respects_the_form() {
        // Onto the ray (1,1) with Q = diag(1,3): p = t(1,1), t = (x.Q.(1,1))/4.
        let ray = cone(2, &[&[1, 1]]);
        let q = vec![ivec(&[1, 0]), ivec(&[0, 3])];
        let p = ray.project(&rvec(&[4, 0]), &q).unwrap();
        assert_eq!(p, rvec(&[1, 1]));
    }
}
