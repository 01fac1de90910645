//! Report types. Everything here serializes with plain integers so reports
//! stay readable and diffable.

use serde::Serialize;

use fixedloci::component::Status;
use fixedloci::hm::MValue;
use fixedloci::matrix::IntMatrix;
use fixedloci::rep::RepFq;

use crate::problem::ProblemFile;
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub input: ProblemFile,
    pub result: ReportResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ReportResult {
    Toric(ToricResult),
    Quiver(QuiverResult),
    Grassmann(GrassmannResult),
    Kempf(KempfResult),
}

#[derive(Clone, Debug, Serialize)]
pub struct FanReport {
    pub lattice_rank: usize,
    /// Image of each coordinate vector of `V`.
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
    pub cones: Vec<Vec<usize>>,
    pub simplicial: bool,
    pub face_closed: bool,
    pub intersections_are_faces: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ToricFixedPoint {
    /// One row per coordinate of `G`; row `k` is the character of `𝒯` giving `ρ(t)_k`.
    pub rho: Vec<Vec<i64>>,
    pub v_rho: Vec<usize>,
    pub cone: Vec<usize>,
    pub g_rho: String,
    pub dimension: i64,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub cone: Vec<usize>,
    pub support: Vec<usize>,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ToricResult {
    pub quotient_rank: usize,
    pub projection: Vec<Vec<i64>>,
    pub section: Vec<Vec<i64>>,
    pub minimally_stable: Vec<Vec<usize>>,
    pub fan: FanReport,
    pub fixed_points: Vec<ToricFixedPoint>,
    /// `ρ ↦ S_ρ` inverts `S ↦ ρ_S` on every fixed point.
    pub bijection_verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitReport>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverEntryReport {
    pub vertex: String,
    pub grade: Vec<i64>,
    pub mult: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuiverComponentReport {
    pub beta: Vec<CoverEntryReport>,
    pub theta_hat: Vec<i64>,
    pub dimension: i64,
    pub g_rho: String,
    pub status: Status,
    pub certificate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RepFq>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrunedReport {
    pub beta: Vec<CoverEntryReport>,
    pub dimension: i64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuiverCounts {
    pub candidates: usize,
    pub nonempty_verified: usize,
    pub empty_verified: usize,
    pub candidate_only: usize,
    pub pruned: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuiverResult {
    pub moduli_dimension: i64,
    pub aux_rank: usize,
    pub window: fixedloci::quiver::Window,
    pub prime: u32,
    pub trials: usize,
    pub counts: QuiverCounts,
    pub components: Vec<QuiverComponentReport>,
    pub pruned: Vec<PrunedReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub weight: i64,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrassmannResult {
    pub blocks: Vec<BlockReport>,
    pub count: usize,
    pub components: Vec<fixedloci::grassmann::GrassmannComponent>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub rays: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KempfResult {
    pub support: Vec<usize>,
    pub inner_product: Vec<Vec<i64>>,
    pub semistable: bool,
    pub stable: bool,
    pub limit_cone: ConeReport,
    pub m_value: MValue,
    /// `None` when the support is semistable.
    pub adapted_one_ps: Option<Vec<i64>>,
}

pub(crate) fn small(m: &IntMatrix) -> Result<Vec<Vec<i64>>, CliError> {
    rows_i64(&m.to_rows())
}

pub(crate) fn rows_i64(rows: &[fixedloci::arith::IntVec]) -> Result<Vec<Vec<i64>>, CliError> {
    rows.iter().map(|r| vec_i64(r)).collect()
}

pub(crate) fn vec_i64(v: &[fixedloci::arith::Int]) -> Result<Vec<i64>, CliError> {
    v.iter()
        .map(|x| {
            i64::try_from(x).map_err(|_| CliError::Guard(format!("integer {x} does not fit in 64 bits")))
        })
        .collect()
}
