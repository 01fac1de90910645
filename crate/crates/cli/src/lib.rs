//! Front end for the `fixedloci` command: problem files in, reports out.

pub mod problem;
pub mod render;
pub mod report;

use std::time::Instant;

use fixedloci::component::Status;
use fixedloci::grassmann::{classify, GrassmannProblem};
use fixedloci::hm::{
    adapted_one_ps, default_form, is_semistable_support, is_stable_support, limit_cone, m_value, SupportSet,
    WeightedAction,
};
use fixedloci::matrix::IntMatrix;
use fixedloci::quiver::{fixed_components, CoverVector, QuiverProblem};
use fixedloci::rep::{CertifyOptions, OracleLimits};
use fixedloci::toric::ToricQuotient;

pub use problem::ProblemFile;
pub use report::{Report, ReportResult};
use report::*;

pub const DEFAULT_PRIME: u32 = 5;
pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("limit exceeded: {0}")]
    Guard(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<fixedloci::Error> for CliError {
    fn from(e: fixedloci::Error) -> Self {
        match e {
            fixedloci::Error::TooLarge(m) => CliError::Guard(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Command-line overrides; `None` falls back to the problem file, then to defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub prime: Option<u32>,
    pub trials: Option<usize>,
    pub window: Option<i64>,
    pub inner_product: Option<Vec<Vec<i64>>>,
    pub support: Option<Vec<usize>>,
    pub orbits: bool,
    pub timing: bool,
}

fn finish(kind: &'static str, seed: Option<u64>, input: &ProblemFile, result: ReportResult, start: Instant, opts: &RunOptions) -> Report {
    Report {
        tool: "fixedloci",
        version: env!("CARGO_PKG_VERSION"),
        kind,
        seed,
        input: input.clone(),
        result,
        timing_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Dispatch on the kind of the problem file.
pub fn run(input: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    match input {
        ProblemFile::Toric(_) => cmd_toric(input, opts),
        ProblemFile::Quiver(_) => cmd_quiver(input, opts),
        ProblemFile::Grassmann(_) => cmd_grassmann(input, opts),
        ProblemFile::Weights(_) => cmd_kempf(input, opts),
    }
}

fn wrong_kind(expected: &str, input: &ProblemFile) -> CliError {
    CliError::Validation(format!("expected a {expected} problem, got kind {:?}", input.kind()))
}

/// Fan, fixed points and the `ρ ↔ S` correspondence of a torus quotient.
pub fn cmd_toric(input: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let ProblemFile::Toric(t) = input else { return Err(wrong_kind("toric", input)) };
    let action = t.action()?;
    let quotient = match &t.section {
        None => ToricQuotient::new(action)?,
        Some(s) => {
            let n = s.pi.len();
            let m = action.dim();
            let pi = matrix(&s.pi, m, "pi")?;
            let c = matrix(&s.c, n, "c")?;
            ToricQuotient::with_section(action, pi, c)?
        }
    };
    let fan = quotient.quotient_fan()?;
    let fixed = quotient.fixed_points()?;
    let minimal: Vec<Vec<usize>> = fixed.iter().map(|f| f.v_rho.to_vec()).collect();
    let bijection_verified = fixed.iter().all(|f| quotient.s_rho(&f.rho) == f.v_rho)
        && fixed.iter().all(|f| quotient.rho_from_stable_subset(&f.v_rho).ok().as_ref() == Some(&f.rho));
    let fixed_points = fixed
        .iter()
        .map(|f| {
            Ok(ToricFixedPoint {
                rho: small(f.rho.matrix())?,
                v_rho: f.v_rho.to_vec(),
                cone: f.cone.clone(),
                g_rho: f.g_rho.clone(),
                dimension: f.dimension,
                status: f.status,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let orbits = if opts.orbits {
        Some(
            quotient
                .orbits()?
                .into_iter()
                .map(|o| OrbitReport { cone: o.cone, support: o.support, dimension: o.dimension })
                .collect(),
        )
    } else {
        None
    };
    let result = ToricResult {
        quotient_rank: quotient.quotient_rank(),
        projection: small(quotient.projection())?,
        section: small(quotient.section())?,
        minimally_stable: minimal,
        fan: FanReport {
            lattice_rank: fan.lattice_rank(),
            rays: rows_i64(fan.rays())?,
            maximal_cones: fan.maximal_cones().to_vec(),
            cones: fan.cones().to_vec(),
            simplicial: fan.is_simplicial(),
            face_closed: fan.is_face_closed(),
            intersections_are_faces: fan.intersections_are_faces(),
        },
        fixed_points,
        bijection_verified,
        orbits,
    };
    Ok(finish("toric", None, input, ReportResult::Toric(result), start, opts))
}

fn matrix(rows: &[Vec<i64>], cols: usize, name: &str) -> Result<IntMatrix, CliError> {
    if let Some(r) = rows.iter().find(|r| r.len() != cols) {
        return Err(CliError::Validation(format!("every row of {name} must have {cols} entries, found {}", r.len())));
    }
    let rows: Vec<_> = rows.iter().map(|r| r.iter().map(|&x| fixedloci::arith::int(x)).collect()).collect();
    Ok(IntMatrix::from_rows(cols, &rows))
}

fn certify_options(q: &problem::QuiverInput, opts: &RunOptions) -> CertifyOptions {
    CertifyOptions {
        prime: opts.prime.or(q.prime).unwrap_or(DEFAULT_PRIME),
        trials: opts.trials.or(q.trials).unwrap_or(DEFAULT_TRIALS),
        seed: opts.seed.or(q.seed).unwrap_or(DEFAULT_SEED),
        limits: OracleLimits::default(),
    }
}

fn cover_report(problem: &QuiverProblem, beta: &CoverVector) -> Vec<CoverEntryReport> {
    beta.entries()
        .iter()
        .map(|e| CoverEntryReport {
            vertex: problem.quiver().vertices()[e.vertex].clone(),
            grade: e.grade.clone(),
            mult: e.mult,
        })
        .collect()
}

/// Covers, pruning, certification and dimensions of the fixed components of a quiver moduli space.
pub fn cmd_quiver(input: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let ProblemFile::Quiver(q) = input else { return Err(wrong_kind("quiver", input)) };
    let problem = q.problem()?;
    let window = q.window(&problem, opts.window)?;
    let copts = certify_options(q, opts);
    let locus = fixed_components(&problem, &window, &copts)?;
    let components: Vec<QuiverComponentReport> = locus
        .components
        .iter()
        .map(|c| QuiverComponentReport {
            beta: cover_report(&problem, &c.beta),
            theta_hat: c.theta_hat.clone(),
            dimension: c.dimension,
            g_rho: c.g_rho.clone(),
            status: c.status,
            certificate: c.certificate.clone(),
            witness: c.witness.clone(),
        })
        .collect();
    let pruned: Vec<PrunedReport> = locus
        .pruned
        .iter()
        .map(|p| PrunedReport { beta: cover_report(&problem, &p.beta), dimension: p.dimension, reason: p.reason.clone() })
        .collect();
    let result = QuiverResult {
        moduli_dimension: locus.moduli_dimension,
        aux_rank: problem.weights().aux_rank(),
        window,
        prime: copts.prime,
        trials: copts.trials,
        counts: QuiverCounts {
            candidates: components.len(),
            nonempty_verified: locus.count(Status::NonemptyVerified),
            empty_verified: locus.count(Status::EmptyVerified),
            candidate_only: locus.count(Status::CandidateOnly),
            pruned: pruned.len(),
        },
        components,
        pruned,
    };
    Ok(finish("quiver", Some(copts.seed), input, ReportResult::Quiver(result), start, opts))
}

/// Fixed components of a torus acting on a Grassmannian.
pub fn cmd_grassmann(input: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let ProblemFile::Grassmann(g) = input else { return Err(wrong_kind("grassmann", input)) };
    let p = GrassmannProblem::new(g.m, g.n, g.weights.clone())?;
    let components = classify(&p);
    let result = GrassmannResult {
        blocks: p.blocks().into_iter().map(|(weight, size)| BlockReport { weight, size }).collect(),
        count: components.len(),
        components,
    };
    Ok(finish("grassmann", None, input, ReportResult::Grassmann(result), start, opts))
}

/// Stability, Kempf's invariant and the adapted one-parameter subgroup of a support.
pub fn cmd_kempf(input: &ProblemFile, opts: &RunOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let (action, file_support, file_form): (WeightedAction, Option<Vec<usize>>, Option<Vec<Vec<i64>>>) = match input {
        ProblemFile::Weights(w) => (w.action()?, w.support.clone(), w.inner_product.clone()),
        ProblemFile::Toric(t) => (t.action()?, None, None),
        _ => return Err(wrong_kind("weights or toric", input)),
    };
    let support = match opts.support.clone().or(file_support) {
        Some(s) => {
            if let Some(bad) = s.iter().find(|&&i| i >= action.dim()) {
                return Err(CliError::Validation(format!(
                    "support index {bad} out of range: V has {} coordinates",
                    action.dim()
                )));
            }
            SupportSet::from_indices(&s)
        }
        None => action.full_support(),
    };
    let form = match opts.inner_product.clone().or(file_form) {
        Some(rows) => rows
            .iter()
            .map(|r| r.iter().map(|&x| fixedloci::arith::int(x)).collect())
            .collect(),
        None => default_form(&action),
    };
    let m = m_value(&action, &support, &form)?;
    let adapted = if m.is_negative() { Some(vec_i64(&adapted_one_ps(&action, &support, &form)?)?) } else { None };
    let cone = limit_cone(&action, &support);
    let result = KempfResult {
        support: support.to_vec(),
        inner_product: rows_i64(&form)?,
        semistable: is_semistable_support(&action, &support),
        stable: is_stable_support(&action, &support),
        limit_cone: ConeReport { rays: rows_i64(cone.rays())?, lineality: rows_i64(cone.lineality())? },
        m_value: m,
        adapted_one_ps: adapted,
    };
    Ok(finish("weights", None, input, ReportResult::Kempf(result), start, opts))
}

/// Serialize a report as pretty JSON with a trailing newline.
pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Parse `"1,0;0,1"` into rows.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    text.split(';')
        .map(parse_list::<i64>)
        .collect()
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| CliError::Validation(format!("cannot parse {s:?}"))))
        .collect()
}
