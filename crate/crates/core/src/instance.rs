//! JSON document for cost sequences.
//!
//! Full form:
//!
//! ```json
//! {"T": 2, "n": 1, "beta": 1.0, "x0": [0.0],
//!  "space": {"lower": [-2.0], "upper": [2.0]},
//!  "costs": [{"P": [1.0], "q": [-1.0], "c": 0.5}, ...]}
//! ```
//!
//! Isotropic sequences may replace `costs` with `"alpha": a, "thetas": [...]`
//! where each theta is a number (n = 1) or an array. An optional `class`
//! object `{alpha, l, G}` declares the function class; otherwise it is derived.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cost::{CostSequence, FunctionClassParams, QuadraticStageCost};
use crate::error::{Error, Result};
use crate::space::{ActionSpace, Point};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Document {
    #[serde(rename = "T")]
    horizon: usize,
    n: usize,
    beta: f64,
    x0: Vec<f64>,
    space: ActionSpace,
    #[serde(flatten)]
    body: Body,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<FunctionClassParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Body {
    Isotropic { alpha: f64, thetas: Vec<ThetaEntry> },
    Full { costs: Vec<RawCost> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ThetaEntry {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawCost {
    #[serde(rename = "P")]
    p: Vec<f64>,
    q: Vec<f64>,
    c: f64,
}

impl CostSequence {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)?;
        doc.into_sequence()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Serializes to the document format, using the compact isotropic form
    /// when every stage is `(α/2)‖x − θ_t‖²` with a common α.
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&Document::from_sequence(self))?)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&Document::from_sequence(self))?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_pretty()?)?;
        Ok(())
    }
}

impl Document {
    fn into_sequence(self) -> Result<CostSequence> {
        let n = self.n;
        let check = |len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: n, found: len })
            }
        };
        check(self.x0.len())?;
        check(self.space.dim())?;
        let costs = match self.body {
            Body::Isotropic { alpha, thetas } => thetas
                .into_iter()
                .map(|entry| {
                    let theta = match entry {
                        ThetaEntry::Scalar(v) => vec![v],
                        ThetaEntry::Vector(v) => v,
                    };
                    check(theta.len())?;
                    QuadraticStageCost::isotropic(alpha, Point::from_vec(theta))
                })
                .collect::<Result<Vec<_>>>()?,
            Body::Full { costs } => costs
                .into_iter()
                .map(|raw| {
                    check(raw.q.len())?;
                    if raw.p.len() != n * n {
                        return Err(Error::DimensionMismatch {
                            expected: n * n,
                            found: raw.p.len(),
                        });
                    }
                    QuadraticStageCost::new(DMatrix::from_row_slice(n, n, &raw.p), Point::from_vec(raw.q), raw.c)
                })
                .collect::<Result<Vec<_>>>()?,
        };
        if costs.len() != self.horizon {
            return Err(Error::LengthMismatch {
                expected: self.horizon,
                found: costs.len(),
            });
        }
        let x0 = Point::from_vec(self.x0);
        match self.class {
            Some(class) => CostSequence::with_class(costs, self.beta, x0, self.space, class),
            None => CostSequence::new(costs, self.beta, x0, self.space),
        }
    }

    fn from_sequence(seq: &CostSequence) -> Self {
        let n = seq.dim();
        let common_alpha = seq
            .costs()
            .iter()
            .map(|c| c.isotropic_params().map(|(a, _)| a))
            .try_fold(None, |acc: Option<f64>, a| match (acc, a) {
                (_, None) => Err(()),
                (None, Some(a)) => Ok(Some(a)),
                (Some(prev), Some(a)) if prev == a => Ok(Some(prev)),
                _ => Err(()),
            });
        let body = match common_alpha {
            Ok(Some(alpha)) => Body::Isotropic {
                alpha,
                thetas: seq
                    .costs()
                    .iter()
                    .map(|c| {
                        let theta = c.isotropic_params().expect("checked above").1;
                        if n == 1 {
                            ThetaEntry::Scalar(theta[0])
                        } else {
                            ThetaEntry::Vector(theta.iter().copied().collect())
                        }
                    })
                    .collect(),
            },
            _ => Body::Full {
                costs: seq
                    .costs()
                    .iter()
                    .map(|c| RawCost {
                        p: c.hessian().transpose().iter().copied().collect(),
                        q: c.linear().iter().copied().collect(),
                        c: c.offset(),
                    })
                    .collect(),
            },
        };
        Document {
            horizon: seq.horizon(),
            n,
            beta: seq.beta(),
            x0: seq.x0().iter().copied().collect(),
            space: seq.space().clone(),
            body,
            class: Some(*seq.class_params()),
        }
    }
}
