//! Data shared by the fixed-point pipelines.

use serde::{Deserialize, Serialize};

use crate::arith::IntVec;
use crate::matrix::IntMatrix;

/// A morphism of tori `ρ: 𝒯 -> T`, as the integer matrix of
/// `ρ_* : X_*(𝒯) -> X_*(T)`: one row per coordinate of `T`, one column per
/// coordinate of `𝒯`. Row `i` is the character `t ↦ ρ(t)_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RhoMap {
    matrix: IntMatrix,
}

impl RhoMap {
    pub fn new(matrix: IntMatrix) -> Self {
        RhoMap { matrix }
    }

    pub fn from_rows(aux_rank: usize, rows: &[IntVec]) -> Self {
        RhoMap { matrix: IntMatrix::from_rows(aux_rank, rows) }
    }

    pub fn trivial(rows: usize, aux_rank: usize) -> Self {
        RhoMap { matrix: IntMatrix::zeros(rows, aux_rank) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<IntVec> {
        self.matrix.to_rows()
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.cols()
    }

    /// `ρ^*(χ)`: the character `χ ∘ ρ` of `𝒯`.
    pub fn pull_back(&self, chi: &[num_bigint::BigInt]) -> IntVec {
        self.matrix.transpose().mul_vec(chi)
    }
}

/// What is known about a fixed-point component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    NonemptyVerified,
    EmptyVerified,
    CandidateOnly,
}
