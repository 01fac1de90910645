//! Quivers, their representation spaces and the torus fixed points of their
//! moduli spaces.
//!
//! A torus `𝒯` scales each arrow `a` by a character `w_a`. Fixed components of
//! `M^{θ-st}(Q, α)` are indexed by covers `β` of `α` on the covering quiver
//! `Q̂` (vertices `Q_0 × Z^aux`, arrows `(a, χ): (s(a), χ) -> (t(a), χ + w_a)`)
//! up to translation, and the component of `β` is the moduli space of
//! `θ̂`-stable representations of `Q̂` of dimension `β`.

mod cover;

use serde::{Deserialize, Serialize};

pub use cover::{
    component_dimension, covering_quiver_window, covers_to_rho, enumerate_covers,
    necessary_condition, rho_to_cover, support_is_connected, support_quiver, theta_hat,
    weyl_canonical, CoverEntry, CoverVector, CoveringWindow, Grade, SupportQuiver, Window,
};

use crate::component::Status;
use crate::error::{Error, Result};
use crate::rep::{certify_component, CertifyOptions, RepFq};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver with named vertices and arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        for a in &arrows {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::Invalid(format!("arrow {} has an endpoint outside the vertex list", a.name)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Build from vertex names and `(arrow, source, target)` name triples.
    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |n: &str| {
            vs.iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::Invalid(format!("unknown vertex {n}")))
        };
        let mut out = Vec::new();
        for (name, s, t) in arrows {
            out.push(Arrow { name: name.to_string(), source: find(s)?, target: find(t)? });
        }
        Quiver::new(vs, out)
    }

    /// Two vertices with `k` parallel arrows named `a, b, c, ...`.
    pub fn kronecker(k: usize) -> Self {
        let arrows = (0..k)
            .map(|i| Arrow {
                name: if k <= 26 { ((b'a' + i as u8) as char).to_string() } else { format!("a{i}") },
                source: 0,
                target: 1,
            })
            .collect();
        Quiver { vertices: vec!["1".into(), "2".into()], arrows }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// `dim R(Q, α) - dim G_α`, plus one for the scalars.
    pub fn expected_dimension(&self, alpha: &[u64]) -> i64 {
        let arrows: i64 = self
            .arrows
            .iter()
            .map(|a| (alpha[a.source] * alpha[a.target]) as i64)
            .sum();
        let squares: i64 = alpha.iter().map(|x| (x * x) as i64).sum();
        arrows - squares + 1
    }
}

/// The characters `w_a ∈ Z^aux` by which `𝒯` scales the arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrowWeights {
    aux_rank: usize,
    weights: Vec<Vec<i64>>,
}

impl ArrowWeights {
    pub fn new(aux_rank: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.len() != aux_rank) {
            return Err(Error::DimMismatch { expected: aux_rank, found: w.len() });
        }
        Ok(ArrowWeights { aux_rank, weights })
    }

    /// One coordinate per arrow, `w_a = e_a`.
    pub fn full_arrow_torus(q: &Quiver) -> Self {
        let n = q.arrow_count();
        let weights = (0..n)
            .map(|a| (0..n).map(|b| i64::from(a == b)).collect())
            .collect();
        ArrowWeights { aux_rank: n, weights }
    }

    /// The trivial torus.
    pub fn trivial(q: &Quiver) -> Self {
        ArrowWeights { aux_rank: 0, weights: vec![vec![]; q.arrow_count()] }
    }

    pub fn aux_rank(&self) -> usize {
        self.aux_rank
    }

    pub fn weight(&self, arrow: usize) -> &[i64] {
        &self.weights[arrow]
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn max_norm(&self) -> i64 {
        self.weights.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }
}

/// A quiver, a dimension vector, a stability parameter with `θ·α = 0`, and a torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverProblem {
    quiver: Quiver,
    alpha: Vec<u64>,
    theta: Vec<i64>,
    weights: ArrowWeights,
}

impl QuiverProblem {
    pub fn new(quiver: Quiver, alpha: Vec<u64>, theta: Vec<i64>, weights: ArrowWeights) -> Result<Self> {
        let n = quiver.vertex_count();
        if alpha.len() != n {
            return Err(Error::DimMismatch { expected: n, found: alpha.len() });
        }
        if theta.len() != n {
            return Err(Error::DimMismatch { expected: n, found: theta.len() });
        }
        if weights.weights.len() != quiver.arrow_count() {
            return Err(Error::DimMismatch { expected: quiver.arrow_count(), found: weights.weights.len() });
        }
        let pairing: i128 = theta.iter().zip(&alpha).map(|(t, a)| *t as i128 * *a as i128).sum();
        if pairing != 0 {
            return Err(Error::Invalid(format!(
                "stability must satisfy theta . alpha = sum_i theta_i alpha_i = 0, got {pairing}"
            )));
        }
        Ok(QuiverProblem { quiver, alpha, theta, weights })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn alpha(&self) -> &[u64] {
        &self.alpha
    }

    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    pub fn weights(&self) -> &ArrowWeights {
        &self.weights
    }

    pub fn total_dimension(&self) -> u64 {
        self.alpha.iter().sum()
    }

    /// Dimension of the ambient moduli space `M^{θ-st}(Q, α)`.
    pub fn moduli_dimension(&self) -> i64 {
        self.quiver.expected_dimension(&self.alpha)
    }
}

/// One candidate fixed component `F_β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverFixedComponent {
    pub beta: CoverVector,
    /// `θ̂` on the support of `β`, in the order of `beta`.
    pub theta_hat: Vec<i64>,
    pub dimension: i64,
    /// The centralizer `G_β`, as a product of general linear groups modulo scalars.
    pub g_rho: String,
    pub status: Status,
    /// How the status was obtained.
    pub certificate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RepFq>,
}

/// A connected cover rejected before certification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrunedCover {
    pub beta: CoverVector,
    pub dimension: i64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverFixedLocus {
    pub moduli_dimension: i64,
    pub components: Vec<QuiverFixedComponent>,
    pub pruned: Vec<PrunedCover>,
}

impl QuiverFixedLocus {
    pub fn count(&self, status: Status) -> usize {
        self.components.iter().filter(|c| c.status == status).count()
    }
}

/// Enumerate covers in `window`, filter them, and certify each candidate.
///
/// Covers failing the torus rank condition, and covers whose quotient would
/// have negative dimension, cannot carry stable points (stable points have
/// scalar stabilizers, so their orbits have the full dimension of `G_β / C^*`);
/// those are reported in `pruned`.
pub fn fixed_components(problem: &QuiverProblem, window: &Window, opts: &CertifyOptions) -> Result<QuiverFixedLocus> {
    let covers = enumerate_covers(problem, window)?;
    let mut components = Vec::new();
    let mut pruned = Vec::new();
    for beta in covers {
        if beta.is_empty() {
            continue;
        }
        let dimension = component_dimension(problem, &beta)?;
        if !necessary_condition(problem, &beta) {
            pruned.push(PrunedCover { beta, dimension, reason: "torus_rank_condition".into() });
            continue;
        }
        if dimension < 0 {
            pruned.push(PrunedCover { beta, dimension, reason: "negative_dimension".into() });
            continue;
        }
        let sq = support_quiver(problem, &beta);
        let cert = certify_component(&sq.quiver, &sq.dims, &sq.theta, opts)?;
        components.push(QuiverFixedComponent {
            theta_hat: theta_hat(problem, &beta),
            g_rho: beta.centralizer_name(),
            beta,
            dimension,
            status: cert.status,
            certificate: cert.reason,
            witness: cert.witness,
        });
    }
    Ok(QuiverFixedLocus { moduli_dimension: problem.moduli_dimension(), components, pruned })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_pairing_is_enforced() {
        let q = Quiver::kronecker(3);
        let w = ArrowWeights::full_arrow_torus(&q);
        assert!(QuiverProblem::new(q.clone(), vec![2, 3], vec![-3, 2], w.clone()).is_ok());
        let err = QuiverProblem::new(q, vec![2, 3], vec![-1, 1], w).unwrap_err();
        assert!(err.to_string().contains("theta . alpha"));
    }

    #[test]
    fn kronecker_moduli_dimension() {
        let q = Quiver::kronecker(3);
        assert_eq!(q.expected_dimension(&[2, 3]), 6);
        assert_eq!(q.arrows()[2].name, "c");
    }

    #[test]
    fn named_construction() {
        let q = Quiver::from_names(&["x", "y"], &[("f", "x", "y")]).unwrap();
        assert_eq!(q.arrows()[0].target, 1);
        assert!(Quiver::from_names(&["x"], &[("f", "x", "z")]).is_err());
    }
}
