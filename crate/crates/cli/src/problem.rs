//! Problem files.

use serde::{Deserialize, Serialize};

use fixedloci::hm::{WeightItem, WeightedAction};
use fixedloci::quiver::{Arrow, ArrowWeights, Quiver, QuiverProblem, Window};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemFile {
    Toric(ToricInput),
    Weights(WeightsInput),
    Quiver(QuiverInput),
    Grassmann(GrassmannInput),
}

impl ProblemFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemFile::Toric(_) => "toric",
            ProblemFile::Weights(_) => "weights",
            ProblemFile::Quiver(_) => "quiver",
            ProblemFile::Grassmann(_) => "grassmann",
        }
    }

    /// Syntax errors are reported with line and column, type errors with the
    /// path of the offending field.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("problem file: {e}")))?;
        let serde_json::Value::Object(mut fields) = value else {
            return Err(CliError::Validation("problem file: expected a JSON object".into()));
        };
        let kind = match fields.remove("kind") {
            Some(serde_json::Value::String(k)) => k,
            Some(_) => return Err(CliError::Validation("problem file: `kind` must be a string".into())),
            None => return Err(CliError::Validation("problem file: missing field `kind`".into())),
        };
        let body = serde_json::Value::Object(fields);
        match kind.as_str() {
            "toric" => body_as(body).map(ProblemFile::Toric),
            "weights" => body_as(body).map(ProblemFile::Weights),
            "quiver" => body_as(body).map(ProblemFile::Quiver),
            "grassmann" => body_as(body).map(ProblemFile::Grassmann),
            other => Err(CliError::Validation(format!(
                "problem file: unknown kind {other:?}, expected toric, weights, quiver or grassmann"
            ))),
        }
    }
}

fn body_as<T: serde::de::DeserializeOwned>(body: serde_json::Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(body).map_err(|e| {
        let path = e.path().to_string();
        CliError::Validation(format!("problem file: field `{path}`: {}", e.into_inner()))
    })
}

/// `(C^*)^r` acting on `V` through `weights`, stability `theta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricInput {
    pub weights: Vec<CharacterInput>,
    pub theta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionInput>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterInput {
    pub chi: Vec<i64>,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

/// A cokernel `pi` of the weight matrix and a section `c` with `pi c = id`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionInput {
    pub pi: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
}

impl ToricInput {
    pub fn action(&self) -> Result<WeightedAction, CliError> {
        let r = self.theta.len();
        let items = self
            .weights
            .iter()
            .map(|w| {
                if w.chi.len() != r {
                    return Err(CliError::Validation(format!(
                        "weight {:?} has length {}, but theta has length {r}",
                        w.chi,
                        w.chi.len()
                    )));
                }
                Ok(WeightItem::from_i64(&w.chi, w.mult))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightedAction::new(r, 0, items, ints(&self.theta))?)
    }
}

/// A torus action with extra weights `w` for an auxiliary torus, for stability
/// and Kempf computations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsInput {
    pub items: Vec<ItemInput>,
    pub theta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_product: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemInput {
    pub chi: Vec<i64>,
    #[serde(default)]
    pub w: Vec<i64>,
    #[serde(default = "one")]
    pub mult: usize,
}

impl WeightsInput {
    pub fn action(&self) -> Result<WeightedAction, CliError> {
        let r = self.theta.len();
        let aux = self.items.first().map_or(0, |i| i.w.len());
        let items = self
            .items
            .iter()
            .map(|i| WeightItem::new(ints(&i.chi), ints(&i.w), i.mult))
            .collect();
        Ok(WeightedAction::new(r, aux, items, ints(&self.theta))?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverInput {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowInput>,
    pub alpha: Vec<u64>,
    pub theta: Vec<i64>,
    /// Defaults to one torus coordinate per arrow.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrow_weights: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowInput {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowInput {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl QuiverInput {
    pub fn quiver(&self) -> Result<Quiver, CliError> {
        let find = |n: &str| {
            self.vertices
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| CliError::Validation(format!("arrow endpoint {n:?} is not a vertex")))
        };
        let arrows = self
            .arrows
            .iter()
            .map(|a| Ok(Arrow { name: a.name.clone(), source: find(&a.source)?, target: find(&a.target)? }))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Quiver::new(self.vertices.clone(), arrows)?)
    }

    pub fn problem(&self) -> Result<QuiverProblem, CliError> {
        let q = self.quiver()?;
        let weights = match &self.arrow_weights {
            None => ArrowWeights::full_arrow_torus(&q),
            Some(ws) => ArrowWeights::new(ws.first().map_or(0, |w| w.len()), ws.clone())?,
        };
        Ok(QuiverProblem::new(q, self.alpha.clone(), self.theta.clone(), weights)?)
    }

    pub fn window(&self, problem: &QuiverProblem, radius: Option<i64>) -> Result<Window, CliError> {
        let aux = problem.weights().aux_rank();
        if let Some(r) = radius {
            if r < 0 {
                return Err(CliError::Validation("window radius must be nonnegative".into()));
            }
            return Ok(Window::cube(aux, r));
        }
        match &self.window {
            Some(w) => {
                if w.lo.len() != aux {
                    return Err(CliError::Validation(format!("window must have {aux} coordinates")));
                }
                Ok(Window::new(w.lo.clone(), w.hi.clone())?)
            }
            None => Ok(Window::default_for(problem)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrassmannInput {
    pub m: usize,
    pub n: usize,
    pub weights: Vec<i64>,
}

fn ints(v: &[i64]) -> Vec<fixedloci::arith::Int> {
    v.iter().map(|&x| fixedloci::arith::int(x)).collect()
}
