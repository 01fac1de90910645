//! Quotients of a vector space by a torus.
//!
//! With `G = (C^*)^r` acting on `V = C^m` through weights `χ_s`, the exact
//! sequence `1 -> G -> T -> 𝒯 -> 1` (with `T` the diagonal torus of `V`) makes
//! the stable quotient a toric variety for `𝒯`. Its fan has one simplicial cone
//! `σ_J = cone(π_* ε_i : i ∈ J)` for every `J` whose complement is a stable
//! support, and its `𝒯`-fixed points are the orbits of the maximal cones.
//!
//! Choosing a section `c` of `π` lets `𝒯` act linearly on `V`; the fixed points
//! are then also labelled by morphisms `ρ: 𝒯 -> G`, and `ρ ↦ S_ρ^c` matches
//! the two labellings.

mod fan;
mod linear_maps;

use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

pub use fan::ToricFan;
pub use linear_maps::{enumerate_linear_maps, spans};

use crate::arith::IntVec;
use crate::component::{RhoMap, Status};
use crate::error::{Error, Result};
use crate::hm::{is_stable_support, SupportSet, WeightedAction};
use crate::matrix::{cokernel_with_section, rank, smith_invariants, IntMatrix};

/// Minimally θ-stable supports, in lexicographic order.
///
/// A stable support is minimal iff it has exactly `r` elements whose weights
/// form a basis, so only subsets of size `r` are examined.
pub fn minimally_stable_subsets(action: &WeightedAction) -> Vec<SupportSet> {
    let m = action.dim();
    let r = action.g_rank();
    let item_of = action.item_of();
    let mut out = Vec::new();
    for_each_subset(m, r, &mut |subset| {
        let rows: Vec<IntVec> = subset.iter().map(|&i| action.items()[item_of[i]].chi.clone()).collect();
        if rank(&rows) != r {
            return;
        }
        let s = SupportSet::from_indices(subset);
        if is_stable_support(action, &s) {
            out.push(s);
        }
    });
    out.sort();
    out
}

/// All θ-stable supports: the supersets of the minimally stable ones.
pub fn stable_subsets(action: &WeightedAction) -> Vec<SupportSet> {
    let minimal = minimally_stable_subsets(action);
    let m = action.dim();
    let mut out: BTreeSet<SupportSet> = BTreeSet::new();
    for s in &minimal {
        let rest: Vec<usize> = (0..m).filter(|i| !s.contains(*i)).collect();
        for mask in 0u64..(1u64 << rest.len()) {
            let mut idx = s.to_vec();
            idx.extend((0..rest.len()).filter(|b| mask & (1 << b) != 0).map(|b| rest[b]));
            out.insert(SupportSet::from_indices(&idx));
        }
    }
    out.into_iter().collect()
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut Vec::with_capacity(k), f);
}

/// A torus action together with the exact sequence `G -> T -> 𝒯` and a section of `π`.
#[derive(Clone, Debug)]
pub struct ToricQuotient {
    action: WeightedAction,
    a: IntMatrix,
    pi: IntMatrix,
    section: IntMatrix,
}

impl ToricQuotient {
    /// Uses the projection and section derived from the Hermite normal form of `a_*`.
    pub fn new(action: WeightedAction) -> Result<Self> {
        let a = action.weight_matrix();
        let (pi, section) = cokernel_with_section(&a).map_err(free_action)?;
        Ok(ToricQuotient { action, a, pi, section })
    }

    /// Uses a caller-supplied cokernel `pi` (`n × m`) and section `c` (`m × n`).
    pub fn with_section(action: WeightedAction, pi: IntMatrix, section: IntMatrix) -> Result<Self> {
        let a = action.weight_matrix();
        let m = action.dim();
        let n = m.checked_sub(action.g_rank()).ok_or(Error::NotInjective {
            rank: m,
            cols: action.g_rank(),
        })?;
        if pi.rows() != n || pi.cols() != m {
            return Err(Error::Invalid(format!("projection must be {n}x{m}")));
        }
        if section.rows() != m || section.cols() != n {
            return Err(Error::Invalid(format!("section must be {m}x{n}")));
        }
        if a.rank() != action.g_rank() {
            return Err(free_action(Error::NotInjective { rank: a.rank(), cols: action.g_rank() }));
        }
        if !pi.mul(&a).is_zero() {
            return Err(Error::Invalid("projection does not kill the weights (pi * a != 0)".into()));
        }
        if pi.mul(&section) != IntMatrix::identity(n) {
            return Err(Error::Invalid("section is not a right inverse (pi * c != id)".into()));
        }
        if smith_invariants(&pi).iter().any(|x| !x.is_one()) || pi.rank() != n {
            return Err(Error::Invalid("projection is not surjective".into()));
        }
        Ok(ToricQuotient { action, a, pi, section })
    }

    pub fn action(&self) -> &WeightedAction {
        &self.action
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.pi
    }

    pub fn section(&self) -> &IntMatrix {
        &self.section
    }

    pub fn weight_matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// Rank of `𝒯`, i.e. `dim V - dim G`.
    pub fn quotient_rank(&self) -> usize {
        self.pi.rows()
    }

    /// The character `c_i` of `𝒯` by which it scales coordinate `i`.
    pub fn section_character(&self, i: usize) -> IntVec {
        self.section.row_vec(i)
    }

    /// The weights of `G × 𝒯` on `V` induced by the section.
    pub fn weighted_action(&self) -> WeightedAction {
        let items = self
            .action
            .index_set()
            .into_iter()
            .enumerate()
            .map(|(i, (s, _))| crate::hm::WeightItem::new(self.action.items()[s].chi.clone(), self.section_character(i), 1))
            .collect();
        WeightedAction::new(self.action.g_rank(), self.quotient_rank(), items, self.action.theta().to_vec())
            .expect("dimensions are consistent")
    }

    fn free_action_check(&self, minimal: &[SupportSet]) -> Result<()> {
        for s in minimal {
            let a_s = self.a.select_rows(&s.to_vec());
            if !a_s.is_unimodular() {
                return Err(Error::FreeActionViolated(format!(
                    "weights on support {:?} do not generate the character lattice (det {})",
                    s.to_vec(),
                    a_s.det()
                )));
            }
        }
        Ok(())
    }

    /// The fan of the stable quotient.
    pub fn quotient_fan(&self) -> Result<ToricFan> {
        let minimal = minimally_stable_subsets(&self.action);
        if minimal.is_empty() {
            return Err(Error::EmptyStableLocus);
        }
        self.free_action_check(&minimal)?;
        let m = self.action.dim();
        let maximal: Vec<Vec<usize>> = minimal.iter().map(|s| s.complement(m).to_vec()).collect();
        let rays: Vec<IntVec> = (0..m).map(|j| self.pi.column(j)).collect();
        Ok(ToricFan::new(self.quotient_rank(), rays, maximal))
    }

    /// The unique `ρ` with `S_ρ = S` for a minimally stable `S`: `ρ = a_S^{-1} pr_S c`.
    pub fn rho_from_stable_subset(&self, s: &SupportSet) -> Result<RhoMap> {
        let idx = s.to_vec();
        let a_s = self.a.select_rows(&idx);
        if a_s.rows() != a_s.cols() {
            return Err(Error::Invalid(format!(
                "support has {} elements, expected {}",
                a_s.rows(),
                a_s.cols()
            )));
        }
        let inv = a_s.unimodular_inverse().ok_or_else(|| {
            Error::FreeActionViolated(format!(
                "a_S is not invertible over Z on support {:?} (det {})",
                idx,
                a_s.det()
            ))
        })?;
        let c_s = self.section.select_rows(&idx);
        Ok(RhoMap::new(inv.mul(&c_s)))
    }

    /// `S_ρ = {i : c_i = ρ^*(χ_{s(i)})}`.
    pub fn s_rho(&self, rho: &RhoMap) -> SupportSet {
        let m = self.action.dim();
        let idx: Vec<usize> = (0..m)
            .filter(|&i| rho.pull_back(self.a.row(i)) == self.section.row_vec(i))
            .collect();
        SupportSet::from_indices(&idx)
    }

    /// The weights of `V_ρ` span `X^*(G)_Q`: necessary for `F_ρ ≠ ∅`.
    pub fn necessary_condition(&self, rho: &RhoMap) -> bool {
        let s = self.s_rho(rho);
        let rows: Vec<IntVec> = s.iter().map(|i| self.a.row_vec(i)).collect();
        rank(&rows) == self.action.g_rank()
    }

    /// One isolated fixed point per maximal cone of the fan.
    pub fn fixed_points(&self) -> Result<Vec<FixedComponent>> {
        let fan = self.quotient_fan()?;
        let m = self.action.dim();
        let mut out = Vec::new();
        for s in minimally_stable_subsets(&self.action) {
            let rho = self.rho_from_stable_subset(&s)?;
            debug_assert_eq!(self.s_rho(&rho), s);
            out.push(FixedComponent {
                cone: s.complement(m).to_vec(),
                dimension: (s.len() as i64) - (self.action.g_rank() as i64),
                v_rho: s,
                rho,
                g_rho: "G".into(),
                status: Status::NonemptyVerified,
            });
        }
        debug_assert_eq!(out.len(), fan.maximal_cones().len());
        Ok(out)
    }

    /// All `𝒯`-orbits `O_{σ_J}`: one per cone, of dimension `dim V - r - |J|`.
    pub fn orbits(&self) -> Result<Vec<Orbit>> {
        let fan = self.quotient_fan()?;
        let m = self.action.dim();
        let n = self.quotient_rank();
        Ok(fan
            .cones()
            .iter()
            .map(|j| Orbit {
                cone: j.clone(),
                support: SupportSet::from_indices(j).complement(m).to_vec(),
                dimension: n - j.len(),
            })
            .collect())
    }
}

fn free_action(e: Error) -> Error {
    match e {
        Error::NotInjective { .. } | Error::TorsionCokernel { .. } => {
            Error::FreeActionViolated(e.to_string())
        }
        other => other,
    }
}

/// One connected component `F_ρ` of the fixed locus of a torus quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    pub rho: RhoMap,
    /// Coordinates spanning `V_ρ`, i.e. `S_ρ`.
    pub v_rho: SupportSet,
    /// The maximal cone `J = S_ρ^c`.
    pub cone: Vec<usize>,
    /// `G_ρ`; for a torus group this is all of `G`.
    pub g_rho: String,
    pub dimension: i64,
    pub status: Status,
}

/// A torus orbit of the quotient, labelled by its cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub cone: Vec<usize>,
    pub support: Vec<usize>,
    pub dimension: usize,
}
