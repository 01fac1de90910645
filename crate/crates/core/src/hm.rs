//! Hilbert–Mumford and Kempf computations for a torus `G = (C^*)^r`.
//!
//! A vector `v` with support `S` admits a limit along the one-parameter
//! subgroup `η` iff `<χ_s, η> >= 0` for every weight in the support, so every
//! stability question reduces to the cone `τ_S = cone(χ_s : s ∈ pr(S))` and
//! its dual, the limit cone. By duality, `τ_S^∨ ⊆ θ^∨` holds iff `θ ∈ τ_S`,
//! and `τ_S^∨ \ {0} ⊆ θ^+` holds iff `τ_S` is full-dimensional with `θ` in its
//! interior.

use std::collections::BTreeSet;

use num_bigint::Sign;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    identity_form, primitive_from_rat, qform, rat, to_rat, Int, IntVec, Rat, RatVec,
};
use crate::cone::RationalCone;
use crate::error::{Error, Result};
use crate::lp::{LinearSystem, Relation};
use crate::matrix::{rat_solve, IntMatrix};

/// One weight space: a `G`-weight `chi`, an auxiliary torus weight `w` and a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightItem {
    pub chi: IntVec,
    #[serde(default)]
    pub w: IntVec,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

impl WeightItem {
    pub fn new(chi: IntVec, w: IntVec, mult: usize) -> Self {
        WeightItem { chi, w, mult }
    }

    pub fn from_i64(chi: &[i64], mult: usize) -> Self {
        WeightItem { chi: crate::arith::ivec(chi), w: Vec::new(), mult }
    }
}

/// The weights of `T × 𝕋` on `V` together with the stability character `θ`.
///
/// Coordinates of `V` are indexed by pairs `(s, k)` with `k < mult_s`; they are
/// flattened item by item, which is the order used by [`SupportSet`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedAction {
    g_rank: usize,
    aux_rank: usize,
    items: Vec<WeightItem>,
    theta: IntVec,
}

impl WeightedAction {
    pub fn new(
        g_rank: usize,
        aux_rank: usize,
        items: Vec<WeightItem>,
        theta: IntVec,
    ) -> Result<Self> {
        if theta.len() != g_rank {
            return Err(Error::DimMismatch { expected: g_rank, found: theta.len() });
        }
        for it in &items {
            if it.chi.len() != g_rank {
                return Err(Error::DimMismatch { expected: g_rank, found: it.chi.len() });
            }
            if it.w.len() != aux_rank {
                return Err(Error::DimMismatch { expected: aux_rank, found: it.w.len() });
            }
            if it.mult == 0 {
                return Err(Error::Invalid("weight multiplicity must be at least 1".into()));
            }
        }
        Ok(WeightedAction { g_rank, aux_rank, items, theta })
    }

    /// Torus action without auxiliary weights, from small integer data.
    pub fn from_weights(weights: &[(&[i64], usize)], theta: &[i64]) -> Result<Self> {
        let r = theta.len();
        let items = weights.iter().map(|(c, m)| WeightItem::from_i64(c, *m)).collect();
        Self::new(r, 0, items, crate::arith::ivec(theta))
    }

    pub fn g_rank(&self) -> usize {
        self.g_rank
    }

    pub fn aux_rank(&self) -> usize {
        self.aux_rank
    }

    pub fn items(&self) -> &[WeightItem] {
        &self.items
    }

    pub fn theta(&self) -> &[Int] {
        &self.theta
    }

    pub fn with_theta(&self, theta: IntVec) -> Result<Self> {
        Self::new(self.g_rank, self.aux_rank, self.items.clone(), theta)
    }

    /// `dim V`, the size of the index set `I`.
    pub fn dim(&self) -> usize {
        self.items.iter().map(|it| it.mult).sum()
    }

    /// The index set `I` as `(item, copy)` pairs, in flattened order.
    pub fn index_set(&self) -> Vec<(usize, usize)> {
        self.items
            .iter()
            .enumerate()
            .flat_map(|(s, it)| (0..it.mult).map(move |k| (s, k)))
            .collect()
    }

    /// Item of each flattened coordinate.
    pub fn item_of(&self) -> Vec<usize> {
        self.index_set().into_iter().map(|(s, _)| s).collect()
    }

    pub fn chi_of(&self, coord: usize) -> &IntVec {
        &self.items[self.item_of()[coord]].chi
    }

    /// The matrix of `a_* : X_*(G) -> X_*(T)`: one row `χ_s` per coordinate.
    pub fn weight_matrix(&self) -> IntMatrix {
        let rows: Vec<IntVec> = self
            .index_set()
            .into_iter()
            .map(|(s, _)| self.items[s].chi.clone())
            .collect();
        IntMatrix::from_rows(self.g_rank, &rows)
    }

    pub fn full_support(&self) -> SupportSet {
        SupportSet::new((0..self.dim()).collect())
    }

    /// The weights `χ_s` for `s ∈ pr(S)`, one per item.
    pub fn weights_of(&self, s: &SupportSet) -> Vec<IntVec> {
        let item_of = self.item_of();
        let items: BTreeSet<usize> = s.iter().map(|i| item_of[i]).collect();
        items.into_iter().map(|i| self.items[i].chi.clone()).collect()
    }
}

/// A subset of the coordinate index set `I`, by flattened index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SupportSet(BTreeSet<usize>);

impl SupportSet {
    pub fn new(indices: BTreeSet<usize>) -> Self {
        SupportSet(indices)
    }

    pub fn empty() -> Self {
        SupportSet(BTreeSet::new())
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        SupportSet(indices.iter().copied().collect())
    }

    /// All copies of the listed items.
    pub fn of_items(action: &WeightedAction, items: &[usize]) -> Self {
        SupportSet(
            action
                .index_set()
                .into_iter()
                .enumerate()
                .filter(|(_, (s, _))| items.contains(s))
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Complement inside `{0, .., n-1}`.
    pub fn complement(&self, n: usize) -> SupportSet {
        SupportSet((0..n).filter(|i| !self.0.contains(i)).collect())
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

/// `τ_S = cone(χ_s : s ∈ pr(S))` in `X^*(G)_R`.
pub fn weight_cone(action: &WeightedAction, s: &SupportSet) -> RationalCone {
    RationalCone::generated_by(action.g_rank, &action.weights_of(s)).expect("weights have rank r")
}

/// The cone of one-parameter subgroups along which a vector with support `S`
/// has a limit: `{η : <χ_s, η> >= 0 for s ∈ pr(S)} = τ_S^∨`.
pub fn limit_cone(action: &WeightedAction, s: &SupportSet) -> RationalCone {
    RationalCone::from_inequalities(action.g_rank, &action.weights_of(s))
        .expect("weights have rank r")
}

/// θ-semi-stability of a support: `τ_S^∨ ⊆ θ^∨`, tested as `θ ∈ τ_S`.
pub fn is_semistable_support(action: &WeightedAction, s: &SupportSet) -> bool {
    weight_cone(action, s)
        .contains(&to_rat(&action.theta))
        .expect("dimensions agree")
}

/// θ-stability of a support: `τ_S` full-dimensional with `θ` in its interior.
pub fn is_stable_support(action: &WeightedAction, s: &SupportSet) -> bool {
    let tau = weight_cone(action, s);
    tau.is_fulldim() && tau.interior_contains(&to_rat(&action.theta)).expect("dimensions agree")
}

/// Stability straight from the definition: no nonzero `η` with
/// `<χ_s, η> >= 0` on the support and `<θ, η> <= 0`.
///
/// A nonzero `η` can be rescaled so that one coordinate is `±1`, which turns
/// the question into `2r` linear feasibility problems.
pub fn is_stable_support_direct(action: &WeightedAction, s: &SupportSet) -> bool {
    let r = action.g_rank;
    let weights = action.weights_of(s);
    for coord in 0..r {
        for sign in [1i64, -1] {
            let mut sys = LinearSystem::with_free_vars(r);
            for chi in &weights {
                sys.constrain(to_rat(chi), Relation::Ge, Rat::zero());
            }
            sys.constrain(to_rat(&action.theta), Relation::Le, Rat::zero());
            let mut e = vec![Rat::zero(); r];
            e[coord] = rat(1);
            sys.constrain(e, Relation::Eq, rat(sign));
            if sys.solve().is_some() {
                return false;
            }
        }
    }
    true
}

/// Kempf's numerical invariant `m(v) = inf <θ,η>/‖η‖` over the limit cone,
/// reported as a sign together with `m²` so that it stays rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MValue {
    /// The limit cone is `{0}`; the infimum is over the empty set.
    Infinite,
    Finite {
        #[serde(serialize_with = "ser_sign")]
        sign: Sign,
        #[serde(serialize_with = "ser_rat")]
        square: Rat,
    },
}

fn ser_sign<S: serde::Serializer>(s: &Sign, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_i8(match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    })
}

fn ser_rat<S: serde::Serializer>(r: &Rat, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&r.to_string())
}

impl MValue {
    pub fn is_negative(&self) -> bool {
        matches!(self, MValue::Finite { sign: Sign::Minus, .. })
    }
}

fn check_form(r: usize, q: &[IntVec]) -> Result<()> {
    if q.len() != r || q.iter().any(|row| row.len() != r) {
        return Err(Error::DimMismatch { expected: r, found: q.len() });
    }
    for i in 0..r {
        for j in 0..r {
            if q[i][j] != q[j][i] {
                return Err(Error::Invalid("inner product matrix must be symmetric".into()));
            }
        }
    }
    // Positive definite iff all leading principal minors are positive.
    for k in 1..=r {
        let rows: Vec<IntVec> = q[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !IntMatrix::from_rows(k, &rows).det().is_positive() {
            return Err(Error::Invalid("inner product matrix must be positive definite".into()));
        }
    }
    Ok(())
}

/// The vector `θ'` with `<θ, η> = (θ')^T Q η`.
fn theta_dual(action: &WeightedAction, q: &[IntVec]) -> RatVec {
    let rows: Vec<RatVec> = q.iter().map(|r| to_rat(r)).collect();
    rat_solve(&rows, &to_rat(&action.theta)).expect("Q is invertible")
}

fn kempf_projection(action: &WeightedAction, s: &SupportSet, q: &[IntVec]) -> Result<(RationalCone, RatVec)> {
    check_form(action.g_rank, q)?;
    let cone = limit_cone(action, s);
    let minus: RatVec = theta_dual(action, q).into_iter().map(|x| -x).collect();
    let p = cone.project(&minus, q)?;
    Ok((cone, p))
}

/// `m(v)` for a vector with support `s`, with respect to the form `q`.
pub fn m_value(action: &WeightedAction, s: &SupportSet, q: &[IntVec]) -> Result<MValue> {
    let (cone, p) = kempf_projection(action, s, q)?;
    if p.iter().any(|x| !x.is_zero()) {
        return Ok(MValue::Finite { sign: Sign::Minus, square: qform(q, &p, &p) });
    }
    if cone.is_zero_cone() {
        return Ok(MValue::Infinite);
    }
    // On this branch <θ, η> >= 0 on the cone. There the ratio is
    // quasi-concave (its superlevel sets are convex cones), so the minimum
    // over a slice of the cone sits on a generator.
    let theta = to_rat(&action.theta);
    let best = cone
        .generators()
        .iter()
        .map(|g| {
            let gr = to_rat(g);
            let t = crate::arith::rdot(&theta, &gr);
            (&t * &t) / qform(q, &gr, &gr)
        })
        .min()
        .expect("nonzero cone has generators");
    let sign = if best.is_zero() { Sign::NoSign } else { Sign::Plus };
    Ok(MValue::Finite { sign, square: best })
}

/// The primitive one-parameter subgroup adapted to an unstable support.
pub fn adapted_one_ps(action: &WeightedAction, s: &SupportSet, q: &[IntVec]) -> Result<IntVec> {
    let (_, p) = kempf_projection(action, s, q)?;
    if p.iter().all(Zero::is_zero) {
        return Err(Error::NotUnstable);
    }
    Ok(primitive_from_rat(&p))
}

/// The default form: the standard dot product.
pub fn default_form(action: &WeightedAction) -> Vec<IntVec> {
    identity_form(action.g_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ivec;

    fn hirzebruch(d: i64) -> WeightedAction {
        WeightedAction::from_weights(
            &[(&[1, 0], 2), (&[0, 1], 1), (&[d, 1], 1)],
            &[d + 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn index_set_flattens_multiplicities() {
        let a = hirzebruch(2);
        assert_eq!(a.index_set(), vec![(0, 0), (0, 1), (1, 0), (2, 0)]);
        assert_eq!(a.dim(), 4);
    }

    #[test]
    fn limit_cone_examples() {
        let a = hirzebruch(2);
        let quadrant = RationalCone::generated_by(2, &[ivec(&[1, 0]), ivec(&[0, 1])]).unwrap();
        assert_eq!(limit_cone(&a, &a.full_support()), quadrant);
        assert_eq!(limit_cone(&a, &SupportSet::empty()), RationalCone::full_space(2));
        let one = WeightedAction::from_weights(&[(&[1, 0], 1)], &[1, 1]).unwrap();
        let half = RationalCone::from_inequalities(2, &[ivec(&[1, 0])]).unwrap();
        assert_eq!(limit_cone(&one, &one.full_support()), half);
    }

    #[test]
    fn hirzebruch_stability_matches_the_locus() {
        // Coordinates: x0, x1, y, z. Stable iff (x0,x1) != 0 and (y,z) != 0.
        for d in 0..4 {
            let a = hirzebruch(d);
            for mask in 0u32..16 {
                let s = SupportSet::new((0..4).filter(|i| mask & (1 << i) != 0).collect());
                let expected = (mask & 0b0011 != 0) && (mask & 0b1100 != 0);
                assert_eq!(is_semistable_support(&a, &s), expected, "d={d} mask={mask:04b}");
                assert_eq!(is_stable_support(&a, &s), expected, "d={d} mask={mask:04b}");
                assert_eq!(is_stable_support_direct(&a, &s), expected);
            }
        }
    }

    #[test]
    fn empty_support_is_unstable() {
        let a = hirzebruch(1);
        assert!(!is_semistable_support(&a, &SupportSet::empty()));
        assert!(!is_stable_support(&a, &SupportSet::empty()));
    }

    #[test]
    fn kempf_examples() {
        let id = identity_form(2);
        let one = WeightedAction::from_weights(&[(&[1, 0], 1)], &[1, 1]).unwrap();
        let s = one.full_support();
        assert_eq!(adapted_one_ps(&one, &s, &id).unwrap(), ivec(&[0, -1]));
        assert_eq!(m_value(&one, &s, &id).unwrap(), MValue::Finite { sign: Sign::Minus, square: rat(1) });

        let origin = WeightedAction::from_weights(&[(&[1], 1)], &[1]).unwrap();
        let id1 = identity_form(1);
        assert_eq!(adapted_one_ps(&origin, &SupportSet::empty(), &id1).unwrap(), ivec(&[-1]));
        assert!(m_value(&origin, &SupportSet::empty(), &id1).unwrap().is_negative());

        let two = WeightedAction::from_weights(&[(&[1, 0], 1), (&[0, 1], 1)], &[1, 1]).unwrap();
        assert_eq!(adapted_one_ps(&two, &two.full_support(), &id), Err(Error::NotUnstable));
        assert_eq!(
            m_value(&two, &two.full_support(), &id).unwrap(),
            MValue::Finite { sign: Sign::Plus, square: rat(1) }
        );
    }

    #[test]
    fn m_value_of_zero_limit_cone_is_infinite() {
        let a = WeightedAction::from_weights(&[(&[1], 1), (&[-1], 1)], &[0]).unwrap();
        assert_eq!(m_value(&a, &a.full_support(), &identity_form(1)).unwrap(), MValue::Infinite);
    }

    #[test]
    fn form_is_validated() {
        let a = hirzebruch(1);
        let bad = vec![ivec(&[1, 2]), ivec(&[2, 1])];
        assert!(m_value(&a, &a.full_support(), &bad).is_err());
        let asym = vec![ivec(&[1, 1]), ivec(&[0, 1])];
        assert!(m_value(&a, &a.full_support(), &asym).is_err());
    }

    #[test]
    fn kempf_with_nonstandard_form() {
        // Limit cone {η1 >= 0}, θ = (1,1), Q = diag(1,4): <θ,η>/‖η‖ on η = (0,-1)
        // gives -1/2, the optimum.
        let one = WeightedAction::from_weights(&[(&[1, 0], 1)], &[1, 1]).unwrap();
        let q = vec![ivec(&[1, 0]), ivec(&[0, 4])];
        let s = one.full_support();
        assert_eq!(adapted_one_ps(&one, &s, &q).unwrap(), ivec(&[0, -1]));
        assert_eq!(
            m_value(&one, &s, &q).unwrap(),
            MValue::Finite { sign: Sign::Minus, square: Rat::new(Int::from(1), Int::from(4)) }
        );
    }
}
