//! Gibbs weight families.
//!
//! A Gibbs partition of `[n]` into blocks of sizes `(n_1, ..., n_k)` has
//! probability `V_{n,k} Π_j (1-α)_{n_j-1}`, where the weights satisfy
//! `V_{1,1} = 1` and the backward recursion
//! `V_{n,k} = (n - kα) V_{n+1,k} + V_{n+1,k+1}`.
//!
//! [`GibbsModel`] is the provider interface. [`PitmanYor`] is the built-in
//! family (`α = 0` is Ewens, `α < 0` with `θ = m|α|` is Fisher's model with
//! `m` classes); [`WeightTable`] holds an arbitrary validated triangle, e.g.
//! loaded from JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorials::{rising, rising_factorial};
use crate::numeric::SignedLogValue;

/// Relative tolerance for the backward recursion.
pub const RECURSION_TOLERANCE: f64 = 1e-10;

pub trait GibbsModel: Send + Sync {
    fn alpha(&self) -> f64;

    /// `V_{n,k}` for `1 ≤ k ≤ n`.
    fn weight(&self, n: usize, k: usize) -> Result<SignedLogValue>;

    /// Number of classes when finite (Fisher's model). Weights with
    /// `k` above the capacity are zero and [`GibbsModel::weight`] rejects them.
    fn capacity(&self) -> Option<usize> {
        None
    }

    /// Largest `n` for which weights are available, if bounded.
    fn max_n(&self) -> Option<usize> {
        None
    }

    /// `V_{n,k}`, with zero outside the triangle or above the capacity.
    /// Used inside sums whose index ranges run past the support.
    fn weight_or_zero(&self, n: usize, k: usize) -> Result<SignedLogValue> {
        if k == 0 || k > n || self.capacity().is_some_and(|c| k > c) {
            if let Some(max_n) = self.max_n() {
                if n > max_n {
                    return Err(Error::WeightTableExhausted { n, max_n });
                }
            }
            return Ok(SignedLogValue::ZERO);
        }
        self.weight(n, k)
    }
}

impl<M: GibbsModel + ?Sized> GibbsModel for &M {
    fn alpha(&self) -> f64 {
        (**self).alpha()
    }
    fn weight(&self, n: usize, k: usize) -> Result<SignedLogValue> {
        (**self).weight(n, k)
    }
    fn capacity(&self) -> Option<usize> {
        (**self).capacity()
    }
    fn max_n(&self) -> Option<usize> {
        (**self).max_n()
    }
}

impl<M: GibbsModel + ?Sized> GibbsModel for Box<M> {
    fn alpha(&self) -> f64 {
        (**self).alpha()
    }
    fn weight(&self, n: usize, k: usize) -> Result<SignedLogValue> {
        (**self).weight(n, k)
    }
    fn capacity(&self) -> Option<usize> {
        (**self).capacity()
    }
    fn max_n(&self) -> Option<usize> {
        (**self).max_n()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// The two-parameter `(α, θ)` Poisson-Dirichlet partition,
/// `V_{n,k} = (θ+α)_{k-1↑α} / (θ+1)_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PitmanYor {
    alpha: f64,
    theta: f64,
    capacity: Option<usize>,
}

impl PitmanYor {
    /// For `α ∈ [0, 1)` requires `θ > -α`; for `α < 0` requires
    /// `θ = m|α|` with `m` a positive integer, which becomes the capacity.
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !theta.is_finite() {
            return Err(Error::InvalidParameters(format!("theta must be finite, got {theta}")));
        }
        if alpha >= 0.0 {
            if theta <= -alpha {
                return Err(Error::InvalidParameters(format!(
                    "theta must exceed -alpha = {}, got {theta}",
                    -alpha
                )));
            }
            return Ok(Self {
                alpha,
                theta,
                capacity: None,
            });
        }
        let classes = theta / -alpha;
        let rounded = classes.round();
        if rounded < 1.0 || (classes - rounded).abs() > 1e-9 * rounded.max(1.0) {
            return Err(Error::InvalidParameters(format!(
                "for alpha < 0, theta must be a positive integer multiple of |alpha|; theta/|alpha| = {classes}"
            )));
        }
        Ok(Self {
            alpha,
            theta: rounded * -alpha,
            capacity: Some(rounded as usize),
        })
    }

    pub fn ewens(theta: f64) -> Result<Self> {
        Self::new(0.0, theta)
    }

    /// Fisher's model with `classes` species: `α < 0`, `θ = classes·|α|`.
    pub fn fisher(alpha: f64, classes: usize) -> Result<Self> {
        if alpha >= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "Fisher's model needs alpha < 0, got {alpha}"
            )));
        }
        Self::new(alpha, classes as f64 * -alpha)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl GibbsModel for PitmanYor {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn weight(&self, n: usize, k: usize) -> Result<SignedLogValue> {
        if k == 0 || k > n {
            return Err(Error::OutOfTriangle { n, k });
        }
        if let Some(capacity) = self.capacity {
            if k > capacity {
                return Err(Error::CapacityExceeded { k, capacity });
            }
        }
        Ok(rising_factorial(self.theta + self.alpha, k - 1, self.alpha) / rising(self.theta + 1.0, n - 1))
    }

    fn capacity(&self) -> Option<usize> {
        self.capacity
    }
}

/// `V_{n,k}` of the Pitman-Yor family; see [`PitmanYor`].
pub fn py_weight(model: &PitmanYor, n: usize, k: usize) -> Result<SignedLogValue> {
    model.weight(n, k)
}

/// Wire format of a custom weight table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub alpha: f64,
    #[serde(rename = "maxN", alias = "max_n")]
    pub max_n: usize,
    /// `rows[n-1][k-1] = V_{n,k}`.
    pub rows: Vec<Vec<f64>>,
}

/// An explicit triangle of weights `V_{n,k}`, `1 ≤ k ≤ n ≤ max_n`.
///
/// Zero entries are allowed (finite-capacity models); negative or
/// non-finite ones are not. Construction validates `V_{1,1} = 1` and the
/// backward recursion on every row that has a successor.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    alpha: f64,
    rows: Vec<Vec<SignedLogValue>>,
}

impl WeightTable {
    pub fn new(alpha: f64, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_alpha(alpha)?;
        if rows.is_empty() {
            return Err(Error::InvalidWeights("at least one row is required".into()));
        }
        let mut converted = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let n = i + 1;
            if row.len() != n {
                return Err(Error::InvalidWeights(format!(
                    "row n = {n} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some((k, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
                return Err(Error::InvalidWeights(format!(
                    "V({n}, {}) = {v} is not a finite nonnegative number",
                    k + 1
                )));
            }
            converted.push(row.iter().map(|&v| SignedLogValue::from_f64(v)).collect());
        }
        if (rows[0][0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("V(1, 1) must be 1, got {}", rows[0][0])));
        }
        let table = Self { alpha, rows: converted };
        if table.rows.len() > 1 {
            let check = verify_backward_recursion(&table, table.rows.len() - 1)?;
            if let Some(v) = check.first_violation {
                return Err(Error::InvalidWeights(format!(
                    "backward recursion fails at (n = {}, k = {}): V = {:e}, (n-kα)V(n+1,k) + V(n+1,k+1) = {:e}",
                    v.n, v.k, v.lhs, v.rhs
                )));
            }
        }
        Ok(table)
    }

    pub fn from_file(file: WeightFile) -> Result<Self> {
        if file.rows.len() != file.max_n {
            return Err(Error::InvalidWeights(format!(
                "maxN = {} but {} rows were given",
                file.max_n,
                file.rows.len()
            )));
        }
        Self::new(file.alpha, file.rows)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: WeightFile =
            serde_json::from_str(json).map_err(|e| Error::InvalidWeights(format!("malformed JSON: {e}")))?;
        Self::from_file(file)
    }

    /// Tabulates any model up to `max_n`.
    pub fn tabulate(model: &(impl GibbsModel + ?Sized), max_n: usize) -> Result<Self> {
        let rows = (1..=max_n)
            .map(|n| {
                (1..=n)
                    .map(|k| Ok(model.weight_or_zero(n, k)?.to_f64()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(model.alpha(), rows)
    }

    pub fn to_file(&self) -> WeightFile {
        WeightFile {
            alpha: self.alpha,
            max_n: self.rows.len(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| v.to_f64()).collect())
                .collect(),
        }
    }
}

impl GibbsModel for WeightTable {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn weight(&self, n: usize, k: usize) -> Result<SignedLogValue> {
        if k == 0 || k > n {
            return Err(Error::OutOfTriangle { n, k });
        }
        self.rows
            .get(n - 1)
            .map(|row| row[k - 1])
            .ok_or(Error::WeightTableExhausted {
                n,
                max_n: self.rows.len(),
            })
    }

    fn max_n(&self) -> Option<usize> {
        Some(self.rows.len())
    }
}

/// Log-weights of another model precomputed on `n ≤ max_n`, for hot loops
/// such as simulation.
#[derive(Debug, Clone)]
pub struct CachedWeights {
    alpha: f64,
    capacity: Option<usize>,
    rows: Vec<Vec<SignedLogValue>>,
}

impl CachedWeights {
    pub fn new(model: &(impl GibbsModel + ?Sized), max_n: usize) -> Result<Self> {
        let rows = (1..=max_n)
            .map(|n| (1..=n).map(|k| model.weight_or_zero(n, k)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha: model.alpha(),
            capacity: model.capacity(),
            rows,
        })
    }
}

impl GibbsModel for CachedWeights {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn weight(&self, n: usize, k: usize) -> Result<SignedLogValue> {
        if k == 0 || k > n {
            return Err(Error::OutOfTriangle { n, k });
        }
        if let Some(capacity) = self.capacity {
            if k > capacity {
                return Err(Error::CapacityExceeded { k, capacity });
            }
        }
        self.rows
            .get(n - 1)
            .map(|row| row[k - 1])
            .ok_or(Error::WeightTableExhausted {
                n,
                max_n: self.rows.len(),
            })
    }

    fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    fn max_n(&self) -> Option<usize> {
        Some(self.rows.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionViolation {
    pub n: usize,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionCheck {
    pub holds: bool,
    pub worst_relative_error: f64,
    pub first_violation: Option<RecursionViolation>,
}

/// Checks `V_{n,k} = (n - kα) V_{n+1,k} + V_{n+1,k+1}` for all
/// `1 ≤ k ≤ n ≤ max_n`. Needs weights up to `n = max_n + 1`.
pub fn verify_backward_recursion(model: &(impl GibbsModel + ?Sized), max_n: usize) -> Result<RecursionCheck> {
    let alpha = model.alpha();
    let mut worst = 0.0f64;
    let mut first_violation = None;
    for n in 1..=max_n {
        for k in 1..=n {
            let lhs = model.weight_or_zero(n, k)?;
            let rhs = SignedLogValue::sum([
                SignedLogValue::from_f64(n as f64 - k as f64 * alpha) * model.weight_or_zero(n + 1, k)?,
                model.weight_or_zero(n + 1, k + 1)?,
            ]);
            let err = lhs.relative_difference(rhs);
            worst = worst.max(err);
            if err > RECURSION_TOLERANCE && first_violation.is_none() {
                first_violation = Some(RecursionViolation {
                    n,
                    k,
                    lhs: lhs.to_f64(),
                    rhs: rhs.to_f64(),
                    relative_error: err,
                });
            }
        }
    }
    Ok(RecursionCheck {
        holds: first_violation.is_none(),
        worst_relative_error: worst,
        first_violation,
    })
}

/// `V_{num} / V_{den}`, rejecting a zero denominator.
pub(crate) fn weight_ratio(
    model: &(impl GibbsModel + ?Sized),
    numerator: (usize, usize),
    denominator: (usize, usize),
) -> Result<SignedLogValue> {
    let den = model.weight_or_zero(denominator.0, denominator.1)?;
    if den.is_zero() {
        return Err(Error::ZeroProbability(format!(
            "V({}, {}) = 0",
            denominator.0, denominator.1
        )));
    }
    Ok(model.weight_or_zero(numerator.0, numerator.1)? / den)
}
