//! Axis-aligned box action spaces.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decision vector.
pub type Point = DVector<f64>;

/// Box `[lower, upper]` in R^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct ActionSpace {
    lower: Point,
    upper: Point,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawSpace> for ActionSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        ActionSpace::new(Point::from_vec(raw.lower), Point::from_vec(raw.upper))
    }
}

impl From<ActionSpace> for RawSpace {
    fn from(space: ActionSpace) -> Self {
        RawSpace {
            lower: space.lower.iter().copied().collect(),
            upper: space.upper.iter().copied().collect(),
        }
    }
}

impl ActionSpace {
    pub fn new(lower: Point, upper: Point) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidSpace("zero-dimensional box".into()));
        }
        for (i, (lo, hi)) in lower.iter().zip(upper.iter()).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidSpace(format!("axis {i} has a non-finite bound")));
            }
            if lo > hi {
                return Err(Error::InvalidSpace(format!("axis {i}: lower {lo} > upper {hi}")));
            }
        }
        let space = ActionSpace { lower, upper };
        if space.diameter() <= 0.0 {
            return Err(Error::InvalidSpace("box has zero diameter".into()));
        }
        Ok(space)
    }

    /// `[lo, hi]^n`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(Point::from_element(n, lo), Point::from_element(n, hi))
    }

    /// Scalar interval `[lo, hi]`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::cube(1, lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &Point {
        &self.lower
    }

    pub fn upper(&self) -> &Point {
        &self.upper
    }

    /// Euclidean length of the main diagonal.
    pub fn diameter(&self) -> f64 {
        (&self.upper - &self.lower).norm()
    }

    pub fn center(&self) -> Point {
        (&self.lower + &self.upper) * 0.5
    }

    pub fn contains(&self, point: &Point) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Euclidean projection, i.e. a component-wise clamp.
    pub fn project(&self, point: &Point) -> Result<Point> {
        self.check_dim(point)?;
        Ok(self.project_unchecked(point))
    }

    pub(crate) fn project_unchecked(&self, point: &Point) -> Point {
        Point::from_iterator(
            point.len(),
            point
                .iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .map(|(&x, (&lo, &hi))| x.clamp(lo, hi)),
        )
    }

    pub(crate) fn check_dim(&self, point: &Point) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: point.len(),
            });
        }
        Ok(())
    }

    /// Iterates over the 2^n vertices of the box.
    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        let n = self.dim();
        (0u64..(1u64 << n)).map(move |mask| {
            Point::from_iterator(
                n,
                (0..n).map(|i| {
                    if mask >> i & 1 == 1 {
                        self.upper[i]
                    } else {
                        self.lower[i]
                    }
                }),
            )
        })
    }
}
